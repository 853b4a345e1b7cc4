//! Feature extraction: the credibility block, the sparse linguistic
//! (n-gram + richness) block and the dense semantic (embedding) block,
//! assembled into one hybrid vector with a canonical layout
//! `credibility | linguistic | semantic`.
//!
//! Groups are independently toggleable so accuracy grids can switch any
//! combination on or off; an inactive group contributes zero dimensions.

pub mod credibility;
pub mod vocab;

pub use credibility::{
    credibility_features, credibility_features_text, feature_index, CredibilityBlock, FeatureMask,
    PronounLexicon, SentimentLexicon, CREDIBILITY_FEATURE_COUNT, CREDIBILITY_FEATURE_NAMES,
    DEFAULT_MASK_NAMES,
};
pub use vocab::{
    build_vocabulary, doc_ngrams, ngram_vector, vocabulary_richness, NgramOrders, VocabEntry,
    Vocabulary, Weighting,
};

use crate::corpus::{Document, LabeledCorpus};
use crate::embeddings::{doc_vector, EmbeddingTable};
use crate::error::{Error, Result};
use crate::textproc::{tokenize, StopList};

/// Which feature groups are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FeatureGroups {
    pub credibility: bool,
    pub linguistic: bool,
    pub semantic: bool,
}

impl FeatureGroups {
    pub const ALL: FeatureGroups = FeatureGroups {
        credibility: true,
        linguistic: true,
        semantic: true,
    };

    pub const CREDIBILITY: FeatureGroups = FeatureGroups {
        credibility: true,
        linguistic: false,
        semantic: false,
    };

    pub const LINGUISTIC: FeatureGroups = FeatureGroups {
        credibility: false,
        linguistic: true,
        semantic: false,
    };

    pub const SEMANTIC: FeatureGroups = FeatureGroups {
        credibility: false,
        linguistic: false,
        semantic: true,
    };

    pub fn is_empty(&self) -> bool {
        !(self.credibility || self.linguistic || self.semantic)
    }

    /// Parses `all` or a `+`/`,`-separated list of group names.
    pub fn parse(spec: &str) -> Result<Self> {
        if spec.trim() == "all" {
            return Ok(Self::ALL);
        }
        let mut groups = FeatureGroups {
            credibility: false,
            linguistic: false,
            semantic: false,
        };
        for part in spec
            .split(['+', ','])
            .map(str::trim)
            .filter(|s| !s.is_empty())
        {
            match part {
                "credibility" => groups.credibility = true,
                "linguistic" => groups.linguistic = true,
                "semantic" => groups.semantic = true,
                other => {
                    return Err(Error::Config(format!(
                        "unknown feature group `{other}` (expected credibility, linguistic, semantic or all)"
                    )))
                }
            }
        }
        if groups.is_empty() {
            return Err(Error::Config("feature group list is empty".into()));
        }
        Ok(groups)
    }

    /// Report label, e.g. `credibility+semantic`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.credibility {
            parts.push("credibility");
        }
        if self.linguistic {
            parts.push("linguistic");
        }
        if self.semantic {
            parts.push("semantic");
        }
        parts.join("+")
    }

    /// All 7 non-empty group combinations, in a fixed report order.
    pub fn all_combinations() -> Vec<FeatureGroups> {
        let mut out = Vec::new();
        for bits in 1u8..8 {
            out.push(FeatureGroups {
                credibility: bits & 1 != 0,
                linguistic: bits & 2 != 0,
                semantic: bits & 4 != 0,
            });
        }
        out
    }
}

/// Block sizes of the canonical layout. Offsets follow from the sizes:
/// credibility starts at 0, linguistic at `credibility`, semantic at
/// `credibility + linguistic`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    pub credibility: usize,
    pub linguistic: usize,
    pub semantic: usize,
}

impl BlockLayout {
    pub fn total(&self) -> usize {
        self.credibility + self.linguistic + self.semantic
    }

    pub fn linguistic_offset(&self) -> usize {
        self.credibility
    }

    pub fn semantic_offset(&self) -> usize {
        self.credibility + self.linguistic
    }

    /// True when `col` indexes a dense (standardized) block, i.e. the
    /// credibility or semantic part.
    pub fn is_dense_column(&self, col: usize) -> bool {
        col < self.credibility || col >= self.semantic_offset()
    }

    /// Maps a dense column to its position in the concatenated
    /// credibility++semantic statistics arrays.
    pub fn dense_position(&self, col: usize) -> Option<usize> {
        if col < self.credibility {
            Some(col)
        } else if col >= self.semantic_offset() && col < self.total() {
            Some(self.credibility + (col - self.semantic_offset()))
        } else {
            None
        }
    }

    pub fn dense_len(&self) -> usize {
        self.credibility + self.semantic
    }
}

/// Hybrid dense + sparse feature vector for one document.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    /// Dense credibility part (masked subset, canonical order).
    pub credibility: Vec<f64>,
    /// Sparse linguistic part: `(block-local column, value)`, strictly
    /// increasing columns. The last two columns of the block are the
    /// vocabulary-richness entries (types, type/token ratio).
    pub linguistic: Vec<(usize, f64)>,
    /// Dense semantic part (document embedding).
    pub semantic: Vec<f64>,
    pub layout: BlockLayout,
}

impl FeatureVector {
    pub fn total_dim(&self) -> usize {
        self.layout.total()
    }

    /// Entries with global column indices. Dense blocks are emitted in
    /// full (including zeros) so standardization sees every column;
    /// the sparse block contributes only its stored entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let ling_off = self.layout.linguistic_offset();
        let sem_off = self.layout.semantic_offset();
        self.credibility
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, v))
            .chain(self.linguistic.iter().map(move |&(c, v)| (ling_off + c, v)))
            .chain(
                self.semantic
                    .iter()
                    .enumerate()
                    .map(move |(i, &v)| (sem_off + i, v)),
            )
    }

    /// Full dense expansion (test and debugging helper).
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.total_dim()];
        for (c, v) in self.entries() {
            out[c] = v;
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.credibility.len() != self.layout.credibility
            || self.semantic.len() != self.layout.semantic
        {
            return Err(Error::Shape(format!(
                "dense block sizes ({}, {}) do not match layout {:?}",
                self.credibility.len(),
                self.semantic.len(),
                self.layout
            )));
        }
        let mut prev: Option<usize> = None;
        for &(c, v) in &self.linguistic {
            if c >= self.layout.linguistic {
                return Err(Error::Shape(format!(
                    "sparse column {c} outside linguistic block of size {}",
                    self.layout.linguistic
                )));
            }
            if prev.is_some_and(|p| p >= c) {
                return Err(Error::Shape(
                    "sparse columns must be strictly increasing".into(),
                ));
            }
            if !v.is_finite() {
                return Err(Error::Validation(format!("non-finite value at column {c}")));
            }
            prev = Some(c);
        }
        if self
            .credibility
            .iter()
            .chain(self.semantic.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::Validation("non-finite value in dense block".into()));
        }
        Ok(())
    }
}

/// Everything needed to turn documents into feature vectors. The
/// vocabulary is passed separately because it is refit per training
/// split (fold) while the lexicons and embedding table are fixed
/// resources.
#[derive(Debug, Clone)]
pub struct FeaturePipeline<'a> {
    pub groups: FeatureGroups,
    pub mask: FeatureMask,
    pub weighting: Weighting,
    pub orders: NgramOrders,
    pub min_df: usize,
    pub include_title: bool,
    pub stops: &'a StopList,
    pub pronouns: &'a PronounLexicon,
    pub sentiment: &'a SentimentLexicon,
    pub embeddings: Option<&'a EmbeddingTable>,
}

impl<'a> FeaturePipeline<'a> {
    /// Same resources, different active groups.
    pub fn with_groups(&self, groups: FeatureGroups) -> FeaturePipeline<'a> {
        FeaturePipeline {
            groups,
            mask: self.mask.clone(),
            ..*self
        }
    }

    /// Builds the n-gram vocabulary from the training corpus when the
    /// linguistic group is active.
    pub fn build_vocabulary(&self, train: &LabeledCorpus) -> Result<Option<Vocabulary>> {
        if !self.groups.linguistic {
            return Ok(None);
        }
        build_vocabulary(
            train,
            self.orders,
            self.min_df,
            self.stops,
            self.include_title,
        )
        .map(Some)
    }

    /// The layout every vector from this pipeline + vocabulary has.
    pub fn layout(&self, vocab: Option<&Vocabulary>) -> Result<BlockLayout> {
        if self.groups.is_empty() {
            return Err(Error::Config("no feature groups are active".into()));
        }
        let credibility = if self.groups.credibility {
            self.mask.count()
        } else {
            0
        };
        let linguistic = if self.groups.linguistic {
            let vocab = vocab.ok_or_else(|| {
                Error::Config("linguistic features requested but no vocabulary provided".into())
            })?;
            vocab.len() + 2
        } else {
            0
        };
        let semantic = if self.groups.semantic {
            let table = self.embeddings.ok_or_else(|| {
                Error::Config("semantic features requested but no embedding table provided".into())
            })?;
            table.dim()
        } else {
            0
        };
        Ok(BlockLayout {
            credibility,
            linguistic,
            semantic,
        })
    }

    /// Extracts the feature vector for one document.
    pub fn extract(&self, doc: &Document, vocab: Option<&Vocabulary>) -> Result<FeatureVector> {
        let layout = self.layout(vocab)?;
        let text = doc.text(self.include_title);
        let tokens = tokenize(&text);

        let credibility = if self.groups.credibility {
            credibility_features(&tokens, self.pronouns, self.sentiment).masked(&self.mask)
        } else {
            Vec::new()
        };

        let linguistic = if self.groups.linguistic {
            let vocab = vocab.expect("layout() checked vocabulary presence");
            let mut block = ngram_vector(&tokens, self.stops, vocab, self.weighting);
            let (types, ttr) = vocabulary_richness(&tokens, self.stops);
            if types > 0 {
                block.push((vocab.len(), types as f64));
                block.push((vocab.len() + 1, ttr));
            }
            block
        } else {
            Vec::new()
        };

        let semantic = if self.groups.semantic {
            let table = self
                .embeddings
                .expect("layout() checked embedding presence");
            doc_vector(&tokens, table, self.stops)
        } else {
            Vec::new()
        };

        let fv = FeatureVector {
            credibility,
            linguistic,
            semantic,
            layout,
        };
        fv.validate()?;
        Ok(fv)
    }

    /// Extracts the whole corpus in document order.
    pub fn extract_corpus(
        &self,
        corpus: &LabeledCorpus,
        vocab: Option<&Vocabulary>,
    ) -> Result<Vec<FeatureVector>> {
        corpus.iter().map(|doc| self.extract(doc, vocab)).collect()
    }
}

/// Assembles the hybrid feature vector for one document (the pipeline's
/// `groups` select the active blocks).
pub fn assemble_features(
    doc: &Document,
    pipeline: &FeaturePipeline<'_>,
    vocab: Option<&Vocabulary>,
) -> Result<FeatureVector> {
    pipeline.extract(doc, vocab)
}
