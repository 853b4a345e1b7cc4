//! The 20 credibility features: surface-style statistics over the token
//! stream (length, casing fractions, pronoun-category fractions,
//! punctuation counts, sentiment-lexicon proportions and score sums).
//!
//! Fractions use Word tokens as the denominator; counts are over the
//! relevant token kinds. A document with no Word tokens scores 0 on
//! every fraction.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::textproc::{
    case_fold, casing_class, is_double_quote, is_single_quote, CasingClass, Token, TokenKind,
};

pub const CREDIBILITY_FEATURE_COUNT: usize = 20;

/// Canonical feature order. Masks, rankings and the dense credibility
/// block all index into this list.
pub const CREDIBILITY_FEATURE_NAMES: [&str; CREDIBILITY_FEATURE_COUNT] = [
    "tokensCount",
    "allUpperCaseCount",
    "firstUpperCase",
    "upperCaseCount",
    "lowerCase",
    "pluralPronouns",
    "singularPronouns",
    "firstPersonPronouns",
    "secondPersonPronouns",
    "thirdPersonPronouns",
    "urls",
    "exclMarks",
    "questionMarks",
    "hashtags",
    "singleQuotes",
    "doubleQuotes",
    "positiveWords",
    "negativeWords",
    "positiveWordsScore",
    "negativeWordsScore",
];

const TOKENS_COUNT: usize = 0;
const ALL_UPPER: usize = 1;
const FIRST_UPPER: usize = 2;
const HAS_UPPER: usize = 3;
const ALL_LOWER: usize = 4;
const PLURAL_PRONOUNS: usize = 5;
const SINGULAR_PRONOUNS: usize = 6;
const FIRST_PERSON: usize = 7;
const SECOND_PERSON: usize = 8;
const THIRD_PERSON: usize = 9;
const URLS: usize = 10;
const EXCL_MARKS: usize = 11;
const QUESTION_MARKS: usize = 12;
const HASHTAGS: usize = 13;
const SINGLE_QUOTES: usize = 14;
const DOUBLE_QUOTES: usize = 15;
const POSITIVE_WORDS: usize = 16;
const NEGATIVE_WORDS: usize = 17;
const POSITIVE_SCORE: usize = 18;
const NEGATIVE_SCORE: usize = 19;

/// Resolves a feature name to its canonical index. `lowerUpperCase` is
/// accepted as an alias for `lowerCase` (both names occur in the wild
/// for "fraction of all-lowercase words").
pub fn feature_index(name: &str) -> Option<usize> {
    if name == "lowerUpperCase" {
        return Some(ALL_LOWER);
    }
    CREDIBILITY_FEATURE_NAMES.iter().position(|&n| n == name)
}

/// Dense vector of the 20 credibility features in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct CredibilityBlock {
    values: [f64; CREDIBILITY_FEATURE_COUNT],
}

impl CredibilityBlock {
    pub fn values(&self) -> &[f64; CREDIBILITY_FEATURE_COUNT] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        feature_index(name).map(|i| self.values[i])
    }

    /// The dense sub-vector selected by `mask`, in canonical index order.
    pub fn masked(&self, mask: &FeatureMask) -> Vec<f64> {
        mask.indices().map(|i| self.values[i]).collect()
    }
}

/// Per-category pronoun word sets. A word may belong to several
/// categories (e.g. a plural first-person pronoun).
#[derive(Debug, Clone, Default)]
pub struct PronounLexicon {
    pub singular: HashSet<String>,
    pub plural: HashSet<String>,
    pub first: HashSet<String>,
    pub second: HashSet<String>,
    pub third: HashSet<String>,
}

impl PronounLexicon {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds from `(word, categories)` pairs; category names are
    /// `singular`, `plural`, `first`, `second`, `third`.
    pub fn from_entries<'a, I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a [&'a str])>,
    {
        let mut lex = PronounLexicon::default();
        for (word, cats) in entries {
            for cat in cats {
                lex.insert(word, cat).map_err(Error::Validation)?;
            }
        }
        Ok(lex)
    }

    fn insert(&mut self, word: &str, category: &str) -> std::result::Result<(), String> {
        let folded = case_fold(word);
        let set = match category {
            "singular" => &mut self.singular,
            "plural" => &mut self.plural,
            "first" => &mut self.first,
            "second" => &mut self.second,
            "third" => &mut self.third,
            other => return Err(format!("unknown pronoun category `{other}`")),
        };
        set.insert(folded);
        Ok(())
    }

    /// Loads lines of `word<TAB>category[,category...]`; `#` comments.
    pub fn from_file(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&content, &path.display().to_string())
    }

    pub fn builtin(language: &str) -> Result<Self> {
        let content = match language {
            "bg" => include_str!("../../data/pronouns_bg.tsv"),
            "en" => include_str!("../../data/pronouns_en.tsv"),
            other => {
                return Err(Error::Config(format!(
                    "no builtin pronoun lexicon for language `{other}` (have: bg, en)"
                )))
            }
        };
        Self::parse(content, &format!("builtin:{language}"))
    }

    fn parse(content: &str, path: &str) -> Result<Self> {
        let mut lex = PronounLexicon::default();
        for (i, line) in content.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim_end();
            if line.trim().is_empty() {
                continue;
            }
            let (word, cats) = line.split_once('\t').ok_or_else(|| {
                Error::parse(path, i + 1, "expected `word<TAB>category[,category...]`")
            })?;
            for cat in cats.split(',') {
                lex.insert(word.trim(), cat.trim())
                    .map_err(|msg| Error::parse(path, i + 1, msg))?;
            }
        }
        Ok(lex)
    }
}

/// Signed word-level sentiment scores; positive words score > 0,
/// negative words score < 0, zero scores are rejected.
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    scores: HashMap<String, f64>,
}

impl SentimentLexicon {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_entries<'a, I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut lex = SentimentLexicon::default();
        for (word, score) in entries {
            lex.insert(word, score).map_err(Error::Validation)?;
        }
        Ok(lex)
    }

    fn insert(&mut self, word: &str, score: f64) -> std::result::Result<(), String> {
        if score == 0.0 || !score.is_finite() {
            return Err(format!(
                "sentiment score for `{word}` must be finite and non-zero"
            ));
        }
        self.scores.insert(case_fold(word), score);
        Ok(())
    }

    /// Loads lines of `word<TAB>score`; `#` comments.
    pub fn from_file(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&content, &path.display().to_string())
    }

    pub fn builtin(language: &str) -> Result<Self> {
        let content = match language {
            "bg" => include_str!("../../data/sentiment_bg.tsv"),
            "en" => include_str!("../../data/sentiment_en.tsv"),
            other => {
                return Err(Error::Config(format!(
                    "no builtin sentiment lexicon for language `{other}` (have: bg, en)"
                )))
            }
        };
        Self::parse(content, &format!("builtin:{language}"))
    }

    fn parse(content: &str, path: &str) -> Result<Self> {
        let mut lex = SentimentLexicon::default();
        for (i, line) in content.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim_end();
            if line.trim().is_empty() {
                continue;
            }
            let (word, score) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(path, i + 1, "expected `word<TAB>score`"))?;
            let score: f64 = score
                .trim()
                .parse()
                .map_err(|_| Error::parse(path, i + 1, format!("bad score `{}`", score.trim())))?;
            lex.insert(word.trim(), score)
                .map_err(|msg| Error::parse(path, i + 1, msg))?;
        }
        Ok(lex)
    }

    pub fn score(&self, folded_word: &str) -> Option<f64> {
        self.scores.get(folded_word).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Computes the credibility block over an already tokenized document.
pub fn credibility_features(
    tokens: &[Token],
    pronouns: &PronounLexicon,
    sentiment: &SentimentLexicon,
) -> CredibilityBlock {
    let mut v = [0.0f64; CREDIBILITY_FEATURE_COUNT];
    v[TOKENS_COUNT] = tokens.len() as f64;

    let mut n_words = 0usize;
    for token in tokens {
        match token.kind {
            TokenKind::Word => {
                n_words += 1;
                match casing_class(token) {
                    CasingClass::AllUpper => {
                        v[ALL_UPPER] += 1.0;
                        v[FIRST_UPPER] += 1.0;
                        v[HAS_UPPER] += 1.0;
                    }
                    CasingClass::FirstUpper => {
                        v[FIRST_UPPER] += 1.0;
                        v[HAS_UPPER] += 1.0;
                    }
                    CasingClass::HasUpper => v[HAS_UPPER] += 1.0,
                    CasingClass::AllLower => v[ALL_LOWER] += 1.0,
                    CasingClass::NoLetters => {}
                }
                let folded = case_fold(&token.text);
                if pronouns.plural.contains(&folded) {
                    v[PLURAL_PRONOUNS] += 1.0;
                }
                if pronouns.singular.contains(&folded) {
                    v[SINGULAR_PRONOUNS] += 1.0;
                }
                if pronouns.first.contains(&folded) {
                    v[FIRST_PERSON] += 1.0;
                }
                if pronouns.second.contains(&folded) {
                    v[SECOND_PERSON] += 1.0;
                }
                if pronouns.third.contains(&folded) {
                    v[THIRD_PERSON] += 1.0;
                }
                if let Some(score) = sentiment.score(&folded) {
                    if score > 0.0 {
                        v[POSITIVE_WORDS] += 1.0;
                        v[POSITIVE_SCORE] += score;
                    } else {
                        v[NEGATIVE_WORDS] += 1.0;
                        v[NEGATIVE_SCORE] += score;
                    }
                }
            }
            TokenKind::Url => v[URLS] += 1.0,
            TokenKind::Hashtag => v[HASHTAGS] += 1.0,
            TokenKind::Punct => {
                let c = token.text.chars().next().unwrap_or('\0');
                if c == '!' {
                    v[EXCL_MARKS] += 1.0;
                } else if c == '?' {
                    v[QUESTION_MARKS] += 1.0;
                } else if is_single_quote(c) {
                    v[SINGLE_QUOTES] += 1.0;
                } else if is_double_quote(c) {
                    v[DOUBLE_QUOTES] += 1.0;
                }
            }
            TokenKind::Number | TokenKind::Other => {}
        }
    }

    if n_words > 0 {
        let d = n_words as f64;
        for i in [
            ALL_UPPER,
            FIRST_UPPER,
            HAS_UPPER,
            ALL_LOWER,
            PLURAL_PRONOUNS,
            SINGULAR_PRONOUNS,
            FIRST_PERSON,
            SECOND_PERSON,
            THIRD_PERSON,
            POSITIVE_WORDS,
            NEGATIVE_WORDS,
        ] {
            v[i] /= d;
        }
    }
    CredibilityBlock { values: v }
}

/// Convenience wrapper tokenizing raw text first.
pub fn credibility_features_text(
    text: &str,
    pronouns: &PronounLexicon,
    sentiment: &SentimentLexicon,
) -> CredibilityBlock {
    credibility_features(&crate::textproc::tokenize(text), pronouns, sentiment)
}

/// Selection mask over the 20 canonical credibility features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureMask {
    bits: [bool; CREDIBILITY_FEATURE_COUNT],
}

/// The seven-feature subset used for the deployed configuration:
/// negativeWords, allUpperCaseCount, firstUpperCase, lowerCase,
/// pluralPronouns, exclMarks, doubleQuotes.
pub const DEFAULT_MASK_NAMES: [&str; 7] = [
    "negativeWords",
    "allUpperCaseCount",
    "firstUpperCase",
    "lowerCase",
    "pluralPronouns",
    "exclMarks",
    "doubleQuotes",
];

impl FeatureMask {
    /// The default seven-feature subset.
    pub fn default_seven() -> Self {
        Self::from_names(DEFAULT_MASK_NAMES.iter().copied()).expect("default names are canonical")
    }

    /// All 20 features.
    pub fn all() -> Self {
        FeatureMask {
            bits: [true; CREDIBILITY_FEATURE_COUNT],
        }
    }

    pub fn from_names<'a, I>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut bits = [false; CREDIBILITY_FEATURE_COUNT];
        let mut any = false;
        for name in names {
            let idx = feature_index(name)
                .ok_or_else(|| Error::Config(format!("unknown credibility feature `{name}`")))?;
            bits[idx] = true;
            any = true;
        }
        if !any {
            return Err(Error::Config(
                "credibility mask needs at least one feature".into(),
            ));
        }
        Ok(FeatureMask { bits })
    }

    /// Parses a comma-separated name list; `default7` and `all20` are
    /// shorthands for the default subset and the full set.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec.trim() {
            "default7" => Ok(Self::default_seven()),
            "all20" => Ok(Self::all()),
            list => Self::from_names(list.split(',').map(str::trim).filter(|s| !s.is_empty())),
        }
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Selected canonical indices, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.indices()
            .map(|i| CREDIBILITY_FEATURE_NAMES[i])
            .collect()
    }

    pub fn to_spec_string(&self) -> String {
        self.names().join(",")
    }
}

impl Default for FeatureMask {
    fn default() -> Self {
        Self::default_seven()
    }
}
