//! Unicode tokenization, stop-word filtering and per-token casing
//! classification. Everything downstream (credibility statistics,
//! n-grams, embedding lookups) consumes this token stream, so the rules
//! here are the contract for the whole feature side:
//!
//! * URLs (`http://`, `https://`, `www.`) and hashtags (`#` + at least
//!   one alphanumeric) are recognized before word segmentation.
//! * Remaining text is segmented on Unicode word boundaries (UAX #29).
//! * Segments containing a letter are `Word`s; all-numeric segments are
//!   `Number`s; anything else is emitted as single-character `Punct`
//!   tokens.
//!
//! Case folding is the un-tailored Unicode lowercase mapping applied
//! per character, which is deterministic and locale-independent and
//! treats Cyrillic exactly like Latin.

use std::collections::HashSet;
use std::path::Path;

use unicode_segmentation::UnicodeSegmentation;

use crate::error::{Error, Result};

/// Apostrophe-like characters counted as "single quotes".
pub const SINGLE_QUOTE_CHARS: [char; 3] = ['\'', '\u{2018}', '\u{2019}'];

/// Double-quote characters, including the Bulgarian lower-upper pair
/// `„ … “` and guillemets.
pub const DOUBLE_QUOTE_CHARS: [char; 6] = [
    '"', '\u{201e}', '\u{201c}', '\u{201d}', '\u{00ab}', '\u{00bb}',
];

pub fn is_single_quote(c: char) -> bool {
    SINGLE_QUOTE_CHARS.contains(&c)
}

pub fn is_double_quote(c: char) -> bool {
    DOUBLE_QUOTE_CHARS.contains(&c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Number,
    Punct,
    Url,
    Hashtag,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// Byte offset of the token in the original text.
    pub start: usize,
    pub kind: TokenKind,
}

impl Token {
    pub fn new(text: impl Into<String>, start: usize, kind: TokenKind) -> Self {
        Token {
            text: text.into(),
            start,
            kind,
        }
    }

    /// Convenience for tests and in-memory construction.
    pub fn word(text: &str) -> Self {
        Token::new(text, 0, TokenKind::Word)
    }
}

/// Un-tailored Unicode lowercase mapping, per character.
pub fn case_fold(s: &str) -> String {
    s.chars().flat_map(char::to_lowercase).collect()
}

const URL_PREFIXES: [&str; 3] = ["http://", "https://", "www."];

/// Punctuation trimmed off the tail of a URL run and handed back to the
/// regular tokenizer (`www.example.com).` keeps the URL clean).
fn is_url_trailing_punct(c: char) -> bool {
    matches!(
        c,
        '.' | ',' | '!' | '?' | ';' | ':' | ')' | '(' | ']' | '[' | '}' | '{'
    ) || is_single_quote(c)
        || is_double_quote(c)
}

fn url_prefix_len(s: &str) -> Option<usize> {
    URL_PREFIXES
        .iter()
        .find(|p| s.starts_with(**p))
        .map(|p| p.len())
}

fn is_hashtag_start(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next() == Some('#') && chars.next().is_some_and(|c| c.is_alphanumeric())
}

/// Tokenizes `text` into document order. Total and deterministic; empty
/// input yields an empty list. Byte spans never overlap.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for (base, chunk) in whitespace_chunks(text) {
        tokenize_chunk(chunk, base, &mut tokens);
    }
    tokens
}

/// Maximal runs of non-whitespace characters with their byte offsets.
fn whitespace_chunks(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(|chunk| (chunk.as_ptr() as usize - text.as_ptr() as usize, chunk))
}

fn tokenize_chunk(chunk: &str, base: usize, tokens: &mut Vec<Token>) {
    let mut pos = 0;
    while pos < chunk.len() {
        let rest = &chunk[pos..];
        match next_trigger(chunk, pos) {
            Some(t) if t == pos => {
                let rest = &chunk[t..];
                if let Some(plen) = url_prefix_len(rest) {
                    // A URL run extends to the end of the chunk; trailing
                    // punctuation is handed back to the word tokenizer.
                    let trimmed = rest.trim_end_matches(is_url_trailing_punct);
                    if trimmed.len() > plen {
                        tokens.push(Token::new(trimmed, base + t, TokenKind::Url));
                        pos = t + trimmed.len();
                        continue;
                    }
                    // A bare prefix like `www.` is not a URL.
                    segment_words(&chunk[t..], base + t, tokens);
                    return;
                }
                // Hashtag: '#' plus the alphanumeric run after it.
                let tag_len = 1 + rest
                    .chars()
                    .skip(1)
                    .take_while(|c| c.is_alphanumeric())
                    .map(char::len_utf8)
                    .sum::<usize>();
                tokens.push(Token::new(&rest[..tag_len], base + t, TokenKind::Hashtag));
                pos = t + tag_len;
            }
            Some(t) => {
                segment_words(&rest[..t - pos], base + pos, tokens);
                pos = t;
            }
            None => {
                segment_words(rest, base + pos, tokens);
                return;
            }
        }
    }
}

/// Earliest byte position `>= from` in `chunk` where a URL or hashtag
/// starts. Triggers only fire at the chunk start or after a
/// non-alphanumeric character, so `x#y` and `nowww.example` stay words.
fn next_trigger(chunk: &str, from: usize) -> Option<usize> {
    let mut prev: Option<char> = if from == 0 {
        None
    } else {
        chunk[..from].chars().next_back()
    };
    for (i, c) in chunk[from..].char_indices() {
        let boundary = prev.is_none_or(|p| !p.is_alphanumeric());
        if boundary {
            let rest = &chunk[from + i..];
            if url_prefix_len(rest).is_some() || is_hashtag_start(rest) {
                return Some(from + i);
            }
        }
        prev = Some(c);
    }
    None
}

/// UAX #29 word segmentation over a trigger-free region.
fn segment_words(region: &str, base: usize, tokens: &mut Vec<Token>) {
    for (off, seg) in region.split_word_bound_indices() {
        if seg.chars().all(char::is_whitespace) {
            continue;
        }
        if seg.chars().any(char::is_alphabetic) {
            tokens.push(Token::new(seg, base + off, TokenKind::Word));
        } else if seg.chars().any(char::is_numeric) {
            tokens.push(Token::new(seg, base + off, TokenKind::Number));
        } else {
            // Punctuation and symbols, one token per character.
            for (coff, c) in seg.char_indices() {
                tokens.push(Token::new(
                    c.to_string(),
                    base + off + coff,
                    TokenKind::Punct,
                ));
            }
        }
    }
}

/// Casing over letters only; digits and punctuation are ignored.
/// Exactly one class applies to any string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasingClass {
    AllUpper,
    FirstUpper,
    HasUpper,
    AllLower,
    NoLetters,
}

pub fn casing_class(token: &Token) -> CasingClass {
    casing_class_of(&token.text)
}

pub fn casing_class_of(text: &str) -> CasingClass {
    let mut letters = text.chars().filter(|c| c.is_alphabetic()).peekable();
    let first = match letters.peek() {
        Some(&c) => c,
        None => return CasingClass::NoLetters,
    };
    let mut any_upper = false;
    let mut all_upper = true;
    for c in letters {
        if c.is_uppercase() {
            any_upper = true;
        } else {
            all_upper = false;
        }
    }
    if all_upper {
        CasingClass::AllUpper
    } else if first.is_uppercase() {
        CasingClass::FirstUpper
    } else if any_upper {
        CasingClass::HasUpper
    } else {
        CasingClass::AllLower
    }
}

/// A case-folded stop-word set.
#[derive(Debug, Clone)]
pub struct StopList {
    words: HashSet<String>,
    pub language: String,
}

impl StopList {
    pub fn empty(language: impl Into<String>) -> Self {
        StopList {
            words: HashSet::new(),
            language: language.into(),
        }
    }

    pub fn from_words<I, S>(words: I, language: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopList {
            words: words.into_iter().map(|w| case_fold(w.as_ref())).collect(),
            language: language.into(),
        }
    }

    /// Loads a stop list: one word per line, UTF-8, `#` starts a comment.
    pub fn from_file(path: &Path, language: impl Into<String>) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&content, language))
    }

    /// Bundled default list for a language tag (`"bg"` or `"en"`).
    pub fn builtin(language: &str) -> Result<Self> {
        let content = match language {
            "bg" => include_str!("../data/stopwords_bg.txt"),
            "en" => include_str!("../data/stopwords_en.txt"),
            other => {
                return Err(Error::Config(format!(
                    "no builtin stop list for language `{other}` (have: bg, en)"
                )))
            }
        };
        Ok(Self::parse(content, language))
    }

    fn parse(content: &str, language: impl Into<String>) -> Self {
        let words = content
            .lines()
            .map(|line| line.split('#').next().unwrap_or("").trim())
            .filter(|line| !line.is_empty())
            .map(case_fold)
            .collect();
        StopList {
            words,
            language: language.into(),
        }
    }

    /// Case-insensitive membership.
    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&case_fold(word))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Order-preserving filter dropping `Word` tokens found in the stop
/// list. Other token kinds always pass through.
pub fn remove_stop_words(tokens: Vec<Token>, stops: &StopList) -> Vec<Token> {
    let mut tokens = tokens;
    tokens.retain(|t| t.kind != TokenKind::Word || !stops.contains(&t.text));
    tokens
}
