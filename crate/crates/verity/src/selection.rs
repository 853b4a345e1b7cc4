//! Feature-importance ranking over the credibility block and feature
//! mask production.
//!
//! Two metrics are offered. `lvq` trains an LVQ1 prototype model in
//! standardized feature space and scores each feature by the normalized
//! gap between the class-mean prototypes. `auc` scores each feature by
//! its single-feature rank-statistic AUC for predicting the Fake class
//! (midranks for ties, no orientation flip).

use std::path::Path;

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::lexfeatures::{feature_index, FeatureMask};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct LvqConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub prototypes_per_class: usize,
    pub seed: u64,
}

impl Default for LvqConfig {
    fn default() -> Self {
        LvqConfig {
            epochs: 30,
            learning_rate: 0.05,
            prototypes_per_class: 1,
            seed: 42,
        }
    }
}

impl LvqConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prototypes_per_class < 1 {
            return Err(Error::Config("prototypes_per_class must be >= 1".into()));
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(Error::Config("LVQ learning rate must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LvqPrototype {
    pub label: Label,
    /// Position in standardized feature space.
    pub values: Vec<f64>,
}

/// LVQ1 codebook together with the standardization used to train it.
#[derive(Debug, Clone)]
pub struct LvqModel {
    pub prototypes: Vec<LvqPrototype>,
    pub config: LvqConfig,
    mean: Vec<f64>,
    stddev: Vec<f64>,
}

impl LvqModel {
    /// The training mean and standard deviation defining the model's
    /// standardized feature space.
    pub fn standardization(&self) -> (&[f64], &[f64]) {
        (&self.mean, &self.stddev)
    }

    /// Mean prototype per class, used by the importance metric.
    pub fn class_mean_prototypes(&self) -> (Vec<f64>, Vec<f64>) {
        let dim = self.prototypes[0].values.len();
        let mut means = [vec![0.0; dim], vec![0.0; dim]];
        let mut counts = [0usize; 2];
        for proto in &self.prototypes {
            let k = proto.label.index();
            counts[k] += 1;
            for (m, v) in means[k].iter_mut().zip(&proto.values) {
                *m += v;
            }
        }
        for k in 0..2 {
            for m in &mut means[k] {
                *m /= counts[k].max(1) as f64;
            }
        }
        let [credible, fake] = means;
        (credible, fake)
    }
}

fn standardization(data: &[(Vec<f64>, Label)]) -> (Vec<f64>, Vec<f64>) {
    let dim = data[0].0.len();
    let n = data.len() as f64;
    let mut mean = vec![0.0; dim];
    let mut stddev = vec![0.0; dim];
    for (x, _) in data {
        for (m, v) in mean.iter_mut().zip(x) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    for (x, _) in data {
        for j in 0..dim {
            let d = x[j] - mean[j];
            stddev[j] += d * d;
        }
    }
    for s in &mut stddev {
        *s = (*s / n).sqrt();
    }
    (mean, stddev)
}

/// Constant columns standardize to 0.
fn standardize(x: &[f64], mean: &[f64], stddev: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(mean.iter().zip(stddev))
        .map(|(&v, (&m, &s))| if s > 0.0 { (v - m) / s } else { 0.0 })
        .collect()
}

fn validate_two_classes(data: &[(Vec<f64>, Label)]) -> Result<()> {
    let fake = data.iter().filter(|(_, l)| *l == Label::Fake).count();
    if data.is_empty() || fake == 0 || fake == data.len() {
        return Err(Error::Validation(
            "LVQ training needs samples of both classes".into(),
        ));
    }
    let dim = data[0].0.len();
    if data.iter().any(|(x, _)| x.len() != dim) {
        return Err(Error::Shape("inconsistent feature dimensions".into()));
    }
    Ok(())
}

/// LVQ1: prototypes start at the per-class means (extra prototypes at
/// the mean plus a small seeded jitter); each sample moves its nearest
/// prototype toward itself when labels agree and away when they differ,
/// with a learning rate decaying linearly from the initial value to 0
/// over the total step count.
pub fn train_lvq(data: &[(Vec<f64>, Label)], config: &LvqConfig) -> Result<LvqModel> {
    config.validate()?;
    validate_two_classes(data)?;
    let dim = data[0].0.len();
    let (mean, stddev) = standardization(data);
    let standardized: Vec<(Vec<f64>, Label)> = data
        .iter()
        .map(|(x, l)| (standardize(x, &mean, &stddev), *l))
        .collect();

    let mut jitter_rng = Rng::for_component(config.seed, "lvq.jitter");
    let mut prototypes = Vec::new();
    for label in [Label::Credible, Label::Fake] {
        let members: Vec<&Vec<f64>> = standardized
            .iter()
            .filter(|(_, l)| *l == label)
            .map(|(x, _)| x)
            .collect();
        let mut class_mean = vec![0.0; dim];
        for x in &members {
            for (m, v) in class_mean.iter_mut().zip(x.iter()) {
                *m += v;
            }
        }
        for m in &mut class_mean {
            *m /= members.len() as f64;
        }
        for p in 0..config.prototypes_per_class {
            let values = if p == 0 {
                class_mean.clone()
            } else {
                class_mean
                    .iter()
                    .map(|&m| m + (jitter_rng.next_f64() - 0.5) * 0.02)
                    .collect()
            };
            prototypes.push(LvqPrototype { label, values });
        }
    }

    let total_steps = (config.epochs * standardized.len()).max(1) as f64;
    let mut step = 0usize;
    let mut shuffle_rng = Rng::for_component(config.seed, "lvq.shuffle");
    let mut order: Vec<usize> = (0..standardized.len()).collect();
    for _ in 0..config.epochs {
        shuffle_rng.shuffle(&mut order);
        for &i in &order {
            let (x, label) = &standardized[i];
            let eta = config.learning_rate * (1.0 - step as f64 / total_steps);
            step += 1;
            // Nearest prototype; ties go to the lowest index.
            let mut best = 0usize;
            let mut best_dist = f64::INFINITY;
            for (k, proto) in prototypes.iter().enumerate() {
                let dist: f64 = proto
                    .values
                    .iter()
                    .zip(x)
                    .map(|(p, v)| (p - v) * (p - v))
                    .sum();
                if dist < best_dist {
                    best_dist = dist;
                    best = k;
                }
            }
            let proto = &mut prototypes[best];
            let sign = if proto.label == *label { 1.0 } else { -1.0 };
            for (p, v) in proto.values.iter_mut().zip(x) {
                *p += sign * eta * (v - *p);
            }
        }
    }

    Ok(LvqModel {
        prototypes,
        config: config.clone(),
        mean,
        stddev,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImportanceMetric {
    Lvq,
    Auc,
}

impl ImportanceMetric {
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "lvq" => Ok(ImportanceMetric::Lvq),
            "auc" => Ok(ImportanceMetric::Auc),
            other => Err(Error::Config(format!(
                "unknown importance metric `{other}` (expected lvq or auc)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ImportanceMetric::Lvq => "lvq",
            ImportanceMetric::Auc => "auc",
        }
    }
}

/// Feature names with importance scores in [0, 1], descending; ties
/// keep the input (canonical) feature order.
#[derive(Debug, Clone)]
pub struct Ranking {
    pub entries: Vec<(String, f64)>,
    pub metric: ImportanceMetric,
}

impl Ranking {
    /// Two-column CSV `feature,importance`, descending.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("feature,importance\n");
        for (name, score) in &self.entries {
            out.push_str(&format!("{name},{score:.6}\n"));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

/// Midrank AUC of one feature column predicting Fake.
fn single_feature_auc(values: &[f64], labels: &[Label]) -> f64 {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Midrank for the tie group spanning sorted positions i..=j.
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = midrank;
        }
        i = j + 1;
    }
    let n_pos = labels.iter().filter(|&&l| l == Label::Fake).count();
    let n_neg = n - n_pos;
    let rank_sum: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &l)| l == Label::Fake)
        .map(|(r, _)| r)
        .sum();
    (rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0) / (n_pos as f64 * n_neg as f64)
}

/// Ranks features by importance. Rows of `data` are dense credibility
/// vectors; `names` labels the columns.
pub fn feature_importance(
    data: &[(Vec<f64>, Label)],
    names: &[&str],
    metric: ImportanceMetric,
    config: &LvqConfig,
) -> Result<Ranking> {
    validate_two_classes(data)?;
    if data.len() < 2 {
        return Err(Error::Validation(
            "need at least 2 samples to rank features".into(),
        ));
    }
    let dim = data[0].0.len();
    if names.len() != dim {
        return Err(Error::Shape(format!(
            "{} feature names for {dim} columns",
            names.len()
        )));
    }

    let scores: Vec<f64> = match metric {
        ImportanceMetric::Lvq => {
            let model = train_lvq(data, config)?;
            let (credible, fake) = model.class_mean_prototypes();
            let gaps: Vec<f64> = credible
                .iter()
                .zip(&fake)
                .map(|(c, f)| (f - c).abs())
                .collect();
            let max_gap = gaps.iter().fold(0.0f64, |a, &b| a.max(b));
            if max_gap > 0.0 {
                gaps.iter().map(|g| g / max_gap).collect()
            } else {
                vec![0.0; dim]
            }
        }
        ImportanceMetric::Auc => {
            let labels: Vec<Label> = data.iter().map(|(_, l)| *l).collect();
            (0..dim)
                .map(|j| {
                    let column: Vec<f64> = data.iter().map(|(x, _)| x[j]).collect();
                    single_feature_auc(&column, &labels)
                })
                .collect()
        }
    };

    let mut entries: Vec<(String, f64)> = names
        .iter()
        .zip(&scores)
        .map(|(n, &s)| (n.to_string(), s))
        .collect();
    // Descending score; ties keep canonical (input) order.
    entries.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("scores are finite"));
    Ok(Ranking { entries, metric })
}

/// How to turn a ranking into a mask.
#[derive(Debug, Clone)]
pub enum SelectionMode {
    TopK(usize),
    Explicit(Vec<String>),
}

/// Produces a mask over the 20 canonical credibility features.
pub fn select_features(ranking: &Ranking, mode: &SelectionMode) -> Result<FeatureMask> {
    let names: Vec<&str> = match mode {
        SelectionMode::TopK(k) => {
            if *k == 0 {
                return Err(Error::Config(
                    "top-0 selection would leave the credibility group empty".into(),
                ));
            }
            ranking
                .entries
                .iter()
                .take(*k)
                .map(|(n, _)| n.as_str())
                .collect()
        }
        SelectionMode::Explicit(list) => list.iter().map(String::as_str).collect(),
    };
    for name in &names {
        if feature_index(name).is_none() {
            return Err(Error::Config(format!(
                "unknown credibility feature `{name}`"
            )));
        }
    }
    FeatureMask::from_names(names)
}
