//! Document collections: loading, validation, labeling and splitting.
//!
//! Two ingestion formats are supported (see the README for samples):
//!
//! * `jsonl` — one object per line with keys `id`, `source`, `title`,
//!   `body` (strings) and `label` (0, 1 or null);
//! * `csv` — header `id,source,title,body,label`, RFC-4180 quoting,
//!   empty label column for unlabeled records.
//!
//! Splits are reproducible: shuffling uses the crate's pinned xoshiro
//! generator ([`crate::rng`]) so the same seed yields the same partition
//! on any platform.

use std::borrow::Cow;
use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Class label. `Fake` is the positive class everywhere in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Credible = 0,
    Fake = 1,
}

impl Label {
    pub fn from_index(index: u8) -> Option<Label> {
        match index {
            0 => Some(Label::Credible),
            1 => Some(Label::Fake),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Credible => "credible",
            Label::Fake => "fake",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One news article.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub source: String,
    pub title: String,
    pub body: String,
    pub label: Option<Label>,
}

impl Document {
    /// The text feature extractors see: `title + "\n" + body` when the
    /// title is non-empty and requested, otherwise the body alone.
    pub fn text(&self, include_title: bool) -> Cow<'_, str> {
        if include_title && !self.title.is_empty() {
            Cow::Owned(format!("{}\n{}", self.title, self.body))
        } else {
            Cow::Borrowed(&self.body)
        }
    }
}

/// Per-class document counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub credible: usize,
    pub fake: usize,
    pub unlabeled: usize,
}

impl ClassCounts {
    pub fn of(self, label: Option<Label>) -> usize {
        match label {
            Some(Label::Credible) => self.credible,
            Some(Label::Fake) => self.fake,
            None => self.unlabeled,
        }
    }
}

/// An ordered, validated document collection.
#[derive(Debug, Clone, Default)]
pub struct LabeledCorpus {
    documents: Vec<Document>,
}

impl LabeledCorpus {
    /// Validates ids (non-empty, unique) and that labeled documents have
    /// non-empty bodies.
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut seen = HashSet::new();
        for doc in &documents {
            if doc.id.is_empty() {
                return Err(Error::Validation("document with empty id".into()));
            }
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::Validation(format!(
                    "duplicate document id `{}`",
                    doc.id
                )));
            }
            if doc.label.is_some() && doc.body.is_empty() {
                return Err(Error::Validation(format!(
                    "labeled document `{}` has an empty body",
                    doc.id
                )));
            }
        }
        drop(seen);
        Ok(LabeledCorpus { documents })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Document> {
        self.documents.iter()
    }

    /// Recomputed per call, so it can never drift out of sync.
    pub fn class_counts(&self) -> ClassCounts {
        let mut counts = ClassCounts::default();
        for doc in &self.documents {
            match doc.label {
                Some(Label::Credible) => counts.credible += 1,
                Some(Label::Fake) => counts.fake += 1,
                None => counts.unlabeled += 1,
            }
        }
        counts
    }

    pub fn labels(&self) -> Vec<Option<Label>> {
        self.documents.iter().map(|d| d.label).collect()
    }
}

/// Dataset file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    Jsonl,
    Csv,
}

impl DatasetFormat {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "jsonl" => Ok(DatasetFormat::Jsonl),
            "csv" => Ok(DatasetFormat::Csv),
            other => Err(Error::Config(format!(
                "unknown dataset format `{other}` (expected jsonl or csv)"
            ))),
        }
    }

    /// Guesses from the file extension; `.csv` is csv, everything else
    /// is treated as jsonl.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => DatasetFormat::Csv,
            _ => DatasetFormat::Jsonl,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonlRecord {
    id: String,
    source: String,
    title: String,
    body: String,
    label: Option<u8>,
}

/// Loads and validates a dataset file.
pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<LabeledCorpus> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let path_str = path.display().to_string();
    let documents = match format {
        DatasetFormat::Jsonl => parse_jsonl(&content, &path_str)?,
        DatasetFormat::Csv => parse_csv(&content, &path_str)?,
    };
    LabeledCorpus::new(documents)
}

fn parse_label(raw: Option<u8>, path: &str, line: usize) -> Result<Option<Label>> {
    match raw {
        None => Ok(None),
        Some(v) => Label::from_index(v).map(Some).ok_or_else(|| {
            Error::parse(path, line, format!("unknown label `{v}` (expected 0 or 1)"))
        }),
    }
}

fn parse_jsonl(content: &str, path: &str) -> Result<Vec<Document>> {
    let mut documents = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let record_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: JsonlRecord =
            serde_json::from_str(line).map_err(|e| Error::parse(path, record_no, e.to_string()))?;
        documents.push(Document {
            label: parse_label(record.label, path, record_no)?,
            id: record.id,
            source: record.source,
            title: record.title,
            body: record.body,
        });
    }
    Ok(documents)
}

fn parse_csv(content: &str, path: &str) -> Result<Vec<Document>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(content.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(path, 1, e.to_string()))?
        .clone();
    let expected = ["id", "source", "title", "body", "label"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::parse(
            path,
            1,
            format!(
                "expected header `id,source,title,body,label`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut documents = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let record_no = i + 1;
        let row = row.map_err(|e| Error::parse(path, record_no, e.to_string()))?;
        if row.len() != 5 {
            return Err(Error::parse(
                path,
                record_no,
                format!("expected 5 fields, found {}", row.len()),
            ));
        }
        let label = match &row[4] {
            "" => None,
            "0" => Some(Label::Credible),
            "1" => Some(Label::Fake),
            other => {
                return Err(Error::parse(
                    path,
                    record_no,
                    format!("unknown label `{other}` (expected 0, 1 or empty)"),
                ))
            }
        };
        documents.push(Document {
            id: row[0].to_string(),
            source: row[1].to_string(),
            title: row[2].to_string(),
            body: row[3].to_string(),
            label,
        });
    }
    Ok(documents)
}

/// Writes a corpus back out as jsonl (the `split` subcommand's output).
pub fn save_jsonl(corpus: &LabeledCorpus, path: &Path) -> Result<()> {
    let mut out = String::new();
    for doc in corpus.iter() {
        let record = JsonlRecord {
            id: doc.id.clone(),
            source: doc.source.clone(),
            title: doc.title.clone(),
            body: doc.body.clone(),
            label: doc.label.map(|l| l.index() as u8),
        };
        out.push_str(&serde_json::to_string(&record).expect("jsonl record serializes"));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Train/test split parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64, stratified: bool) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::Config(format!(
                "train_fraction must be in (0, 1), got {train_fraction}"
            )));
        }
        Ok(SplitSpec {
            train_fraction,
            seed,
            stratified,
        })
    }
}

/// Disjoint train/test partition of `corpus`.
///
/// Non-stratified: all documents are shuffled together and the first
/// `round(train_fraction * N)` go to train. Stratified: each label group
/// gets `floor(train_fraction * n_c)` train slots, then the remaining
/// slots up to `round(train_fraction * N)` are handed to groups in
/// descending fractional-part order (ties by class index). Document
/// order within each part follows the original corpus order.
pub fn split_corpus(
    corpus: &LabeledCorpus,
    spec: &SplitSpec,
) -> Result<(LabeledCorpus, LabeledCorpus)> {
    let n = corpus.len();
    if n == 0 {
        return Ok((LabeledCorpus::default(), LabeledCorpus::default()));
    }
    let target_total = (spec.train_fraction * n as f64).round() as usize;
    let mut train_idx: Vec<usize>;

    if spec.stratified {
        let counts = corpus.class_counts();
        if counts.credible == 0 || counts.fake == 0 {
            return Err(Error::Validation(
                "stratified split requires at least one document of each class".into(),
            ));
        }
        // Groups in fixed order: credible, fake, unlabeled.
        let groups: [Option<Label>; 3] = [Some(Label::Credible), Some(Label::Fake), None];
        let mut members: Vec<Vec<usize>> = groups
            .iter()
            .map(|g| {
                corpus
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| d.label == *g)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let mut takes: Vec<usize> = Vec::with_capacity(groups.len());
        let mut fracs: Vec<(usize, f64)> = Vec::new();
        for (gi, m) in members.iter().enumerate() {
            let exact = spec.train_fraction * m.len() as f64;
            takes.push(exact.floor() as usize);
            fracs.push((gi, exact - exact.floor()));
        }
        // Distribute the remainder: descending fractional part, ties by
        // class index.
        fracs.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let mut extra = target_total.saturating_sub(takes.iter().sum::<usize>());
        for &(gi, _) in fracs.iter().cycle().take(fracs.len() * 2) {
            if extra == 0 {
                break;
            }
            if takes[gi] < members[gi].len() {
                takes[gi] += 1;
                extra -= 1;
            }
        }
        train_idx = Vec::with_capacity(target_total);
        let tags = ["split.credible", "split.fake", "split.unlabeled"];
        for (gi, m) in members.iter_mut().enumerate() {
            Rng::for_component(spec.seed, tags[gi]).shuffle(m);
            train_idx.extend_from_slice(&m[..takes[gi]]);
        }
    } else {
        let mut all: Vec<usize> = (0..n).collect();
        Rng::for_component(spec.seed, "split.all").shuffle(&mut all);
        train_idx = all[..target_total.min(n)].to_vec();
    }

    let in_train: HashSet<usize> = train_idx.iter().copied().collect();
    let mut train_docs = Vec::with_capacity(in_train.len());
    let mut test_docs = Vec::with_capacity(n - in_train.len());
    for (i, doc) in corpus.iter().enumerate() {
        if in_train.contains(&i) {
            train_docs.push(doc.clone());
        } else {
            test_docs.push(doc.clone());
        }
    }
    Ok((
        LabeledCorpus {
            documents: train_docs,
        },
        LabeledCorpus {
            documents: test_docs,
        },
    ))
}
