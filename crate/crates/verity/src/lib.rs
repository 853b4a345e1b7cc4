//! Classifies news documents as credible vs. fake from three feature
//! families: stylometric credibility statistics (casing, punctuation,
//! pronoun use, sentiment polarity), uni/bi-gram tf-idf linguistic
//! features, and averaged word-embedding document vectors. A binary
//! logistic regression with elastic-net regularization (L-BFGS / OWL-QN)
//! does the classification; LVQ-based importance ranking drives feature
//! selection; an evaluation harness covers accuracy grids, k-fold
//! cross-validation and hyper-parameter search.
//!
//! Every seeded component derives its stream from one top-level seed
//! (see [`rng`]), so a single integer reproduces an entire pipeline.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod evalharness;
pub mod learner;
pub mod lexfeatures;
pub mod rng;
pub mod selection;
pub mod textproc;

pub use error::{Error, Result};
