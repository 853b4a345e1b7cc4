//! Linguistic (n-gram) features: vocabulary construction over training
//! documents, presence / tf-idf weighting and vocabulary richness.
//!
//! N-grams are formed over stop-word-filtered, case-folded Word tokens;
//! bigrams join adjacent survivors with `_`. The tf-idf variant is
//! `tf * (ln((N+1)/(df+1)) + 1)` with raw term counts, followed by L2
//! normalization of the document's sparse block.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::corpus::LabeledCorpus;
use crate::error::{Error, Result};
use crate::textproc::{case_fold, StopList, Token, TokenKind};

/// Which n-gram orders a vocabulary holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NgramOrders {
    pub unigrams: bool,
    pub bigrams: bool,
}

impl NgramOrders {
    pub fn validate(&self) -> Result<()> {
        if !self.unigrams && !self.bigrams {
            return Err(Error::Config(
                "n-gram orders must include 1 and/or 2".into(),
            ));
        }
        Ok(())
    }

    /// Parses a comma list over {1, 2}, e.g. `1,2` or `1`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut orders = NgramOrders {
            unigrams: false,
            bigrams: false,
        };
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match part {
                "1" => orders.unigrams = true,
                "2" => orders.bigrams = true,
                other => {
                    return Err(Error::Config(format!(
                        "unsupported n-gram order `{other}` (expected 1 or 2)"
                    )))
                }
            }
        }
        orders.validate()?;
        Ok(orders)
    }

    pub fn to_spec_string(&self) -> String {
        match (self.unigrams, self.bigrams) {
            (true, true) => "1,2".into(),
            (true, false) => "1".into(),
            (false, true) => "2".into(),
            (false, false) => String::new(),
        }
    }
}

impl Default for NgramOrders {
    fn default() -> Self {
        NgramOrders {
            unigrams: true,
            bigrams: true,
        }
    }
}

/// N-gram weighting scheme for the linguistic block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    Presence,
    #[default]
    TfIdf,
}

impl Weighting {
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "presence" => Ok(Weighting::Presence),
            "tfidf" => Ok(Weighting::TfIdf),
            other => Err(Error::Config(format!(
                "unknown weighting `{other}` (expected presence or tfidf)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Weighting::Presence => "presence",
            Weighting::TfIdf => "tfidf",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabEntry {
    pub ngram: String,
    pub df: usize,
}

/// Train-side n-gram vocabulary with document frequencies. Column
/// indices are assigned in lexicographic n-gram order, so the mapping is
/// deterministic for a given training corpus.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    index: HashMap<String, usize>,
    corpus_size: usize,
    orders: NgramOrders,
    min_df: usize,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn corpus_size(&self) -> usize {
        self.corpus_size
    }

    pub fn orders(&self) -> NgramOrders {
        self.orders
    }

    pub fn min_df(&self) -> usize {
        self.min_df
    }

    pub fn column(&self, ngram: &str) -> Option<usize> {
        self.index.get(ngram).copied()
    }

    pub fn entry(&self, column: usize) -> Option<&VocabEntry> {
        self.entries.get(column)
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    fn idf(&self, df: usize) -> f64 {
        (((self.corpus_size + 1) as f64) / ((df + 1) as f64)).ln() + 1.0
    }

    /// Versioned text format so a trained pipeline can be reloaded for
    /// prediction: header, corpus size, orders, min_df, then one
    /// `ngram<TAB>df` line per column in index order.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        out.push_str("verity vocabulary 1\n");
        out.push_str(&format!(
            "corpus_size {} orders {} min_df {} entries {}\n",
            self.corpus_size,
            self.orders.to_spec_string(),
            self.min_df,
            self.entries.len()
        ));
        for e in &self.entries {
            out.push_str(&format!("{}\t{}\n", e.ngram, e.df));
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let p = path.display().to_string();
        let mut lines = content.lines();
        if lines.next() != Some("verity vocabulary 1") {
            return Err(Error::parse(&p, 1, "expected header `verity vocabulary 1`"));
        }
        let meta = lines
            .next()
            .ok_or_else(|| Error::parse(&p, 2, "missing metadata line"))?;
        let fields: Vec<&str> = meta.split_whitespace().collect();
        if fields.len() != 8
            || fields[0] != "corpus_size"
            || fields[2] != "orders"
            || fields[4] != "min_df"
            || fields[6] != "entries"
        {
            return Err(Error::parse(&p, 2, "malformed metadata line"));
        }
        let corpus_size: usize = fields[1]
            .parse()
            .map_err(|_| Error::parse(&p, 2, "bad corpus_size"))?;
        let orders = NgramOrders::parse(fields[3])?;
        let min_df: usize = fields[5]
            .parse()
            .map_err(|_| Error::parse(&p, 2, "bad min_df"))?;
        let count: usize = fields[7]
            .parse()
            .map_err(|_| Error::parse(&p, 2, "bad entry count"))?;
        let mut entries = Vec::with_capacity(count);
        let mut index = HashMap::with_capacity(count);
        for (i, line) in lines.enumerate() {
            let lineno = i + 3;
            let (ngram, df) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(&p, lineno, "expected `ngram<TAB>df`"))?;
            let df: usize = df
                .parse()
                .map_err(|_| Error::parse(&p, lineno, "bad document frequency"))?;
            if index.insert(ngram.to_string(), entries.len()).is_some() {
                return Err(Error::parse(
                    &p,
                    lineno,
                    format!("duplicate n-gram `{ngram}`"),
                ));
            }
            entries.push(VocabEntry {
                ngram: ngram.to_string(),
                df,
            });
        }
        if entries.len() != count {
            return Err(Error::parse(
                &p,
                entries.len() + 2,
                format!(
                    "header declares {count} entries, file has {}",
                    entries.len()
                ),
            ));
        }
        Ok(Vocabulary {
            entries,
            index,
            corpus_size,
            orders,
            min_df,
        })
    }
}

/// The case-folded, stop-filtered word stream n-grams are built from.
fn filtered_words(tokens: &[Token], stops: &StopList) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Word)
        .map(|t| case_fold(&t.text))
        .filter(|w| !stops.contains(w))
        .collect()
}

/// A document's n-grams in stream order (with repeats).
pub fn doc_ngrams(tokens: &[Token], stops: &StopList, orders: NgramOrders) -> Vec<String> {
    let words = filtered_words(tokens, stops);
    let mut grams = Vec::new();
    if orders.unigrams {
        grams.extend(words.iter().cloned());
    }
    if orders.bigrams {
        grams.extend(words.windows(2).map(|w| format!("{}_{}", w[0], w[1])));
    }
    grams
}

/// Builds the vocabulary from training documents only. Entries with
/// document frequency below `min_df` are dropped.
pub fn build_vocabulary(
    train: &LabeledCorpus,
    orders: NgramOrders,
    min_df: usize,
    stops: &StopList,
    include_title: bool,
) -> Result<Vocabulary> {
    orders.validate()?;
    if min_df < 1 {
        return Err(Error::Config("min_df must be >= 1".into()));
    }
    let mut df: HashMap<String, usize> = HashMap::new();
    for doc in train.iter() {
        let tokens = crate::textproc::tokenize(&doc.text(include_title));
        let unique: HashSet<String> = doc_ngrams(&tokens, stops, orders).into_iter().collect();
        for gram in unique {
            *df.entry(gram).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<VocabEntry> = df
        .into_iter()
        .filter(|(_, d)| *d >= min_df)
        .map(|(ngram, df)| VocabEntry { ngram, df })
        .collect();
    entries.sort_by(|a, b| a.ngram.cmp(&b.ngram));
    let index = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (e.ngram.clone(), i))
        .collect();
    Ok(Vocabulary {
        entries,
        index,
        corpus_size: train.len(),
        orders,
        min_df,
    })
}

/// Sparse linguistic block for one document: `(column, value)` pairs
/// with strictly increasing columns. Out-of-vocabulary n-grams are
/// ignored.
pub fn ngram_vector(
    tokens: &[Token],
    stops: &StopList,
    vocab: &Vocabulary,
    weighting: Weighting,
) -> Vec<(usize, f64)> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for gram in doc_ngrams(tokens, stops, vocab.orders) {
        if let Some(col) = vocab.column(&gram) {
            *counts.entry(col).or_insert(0) += 1;
        }
    }
    let mut block: Vec<(usize, f64)> = match weighting {
        Weighting::Presence => counts.keys().map(|&c| (c, 1.0)).collect(),
        Weighting::TfIdf => counts
            .iter()
            .map(|(&c, &tf)| {
                let df = vocab.entries[c].df;
                (c, tf as f64 * vocab.idf(df))
            })
            .collect(),
    };
    block.sort_by_key(|&(c, _)| c);
    if weighting == Weighting::TfIdf {
        let norm = block.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, v) in &mut block {
                *v /= norm;
            }
        }
    }
    block
}

/// `(types, type/token ratio)` over stop-filtered, case-folded Word
/// tokens; both 0 for documents with no surviving tokens.
pub fn vocabulary_richness(tokens: &[Token], stops: &StopList) -> (usize, f64) {
    let words = filtered_words(tokens, stops);
    if words.is_empty() {
        return (0, 0.0);
    }
    let types = words.iter().collect::<HashSet<_>>().len();
    (types, types as f64 / words.len() as f64)
}
