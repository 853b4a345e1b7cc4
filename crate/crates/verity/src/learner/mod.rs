//! Binary logistic regression with elastic-net regularization.
//!
//! The objective over labels `y ∈ {-1, +1}` (Fake = +1) is
//!
//! ```text
//! f(w, b) = (1/n) Σ ln(1 + exp(-y_i (w·x_i + b)))
//!           + λ ( α ||w||₁ + (1-α)/2 ||w||₂² )
//! ```
//!
//! with the intercept unregularized. The smooth path (`λα = 0`) is
//! minimized by L-BFGS (memory 10, Armijo backtracking); any L1 weight
//! switches to OWL-QN, which produces exact zeros.
//!
//! Dense blocks (credibility, semantic) are standardized with training
//! statistics; the sparse tf-idf block stays on its raw scale to
//! preserve sparsity. The fitted model keeps the statistics so
//! prediction consumes raw feature vectors. Columns that are constant
//! in training are flagged and their weights pinned to exactly 0.

mod model_io;
mod optimizer;

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::lexfeatures::{BlockLayout, FeatureVector};
use optimizer::{minimize, OptimParams};

/// Columns with training standard deviation at or below this are
/// treated as constant.
const CONSTANT_STD_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Regularization strength λ >= 0.
    pub lambda: f64,
    /// Elastic-net mixing α in [0, 1]; 1 is pure L1.
    pub alpha: f64,
    pub max_iter: usize,
    /// Relative objective-decrease tolerance.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda: 1e-3,
            alpha: 0.5,
            max_iter: 100,
            tolerance: 1e-6,
            seed: 42,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::Config(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Config(format!(
                "alpha must be in [0, 1], got {}",
                self.alpha
            )));
        }
        if self.max_iter < 1 {
            return Err(Error::Config("max_iter must be >= 1".into()));
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(Error::Config(format!(
                "tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Per-column training statistics for the dense blocks, in layout order
/// (credibility columns then semantic columns).
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizationStats {
    pub mean: Vec<f64>,
    pub stddev: Vec<f64>,
    /// Constant columns: weight pinned to 0, skipped at prediction.
    pub constant: Vec<bool>,
}

impl StandardizationStats {
    /// Population statistics over the dense columns of `features`.
    pub fn compute(features: &[FeatureVector], layout: &BlockLayout) -> Self {
        let dlen = layout.dense_len();
        let mut sum = vec![0.0; dlen];
        let mut sumsq = vec![0.0; dlen];
        for fv in features {
            for (col, v) in fv.entries() {
                if let Some(p) = fv.layout.dense_position(col) {
                    sum[p] += v;
                    sumsq[p] += v * v;
                }
            }
        }
        let n = features.len().max(1) as f64;
        let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
        let stddev: Vec<f64> = sumsq
            .iter()
            .zip(&mean)
            .map(|(sq, m)| (sq / n - m * m).max(0.0).sqrt())
            .collect();
        let constant = stddev.iter().map(|&s| s <= CONSTANT_STD_EPS).collect();
        StandardizationStats {
            mean,
            stddev,
            constant,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainMeta {
    pub iterations: usize,
    pub final_loss: f64,
    pub converged: bool,
    /// Objective after each accepted step (not persisted to disk).
    pub objective_trace: Vec<f64>,
}

/// A fitted elastic-net logistic regression. Weights live in the
/// standardized feature space; prediction applies the stored statistics
/// to raw inputs.
#[derive(Debug, Clone)]
pub struct Model {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub stats: StandardizationStats,
    pub config: TrainConfig,
    pub layout: BlockLayout,
    pub meta: TrainMeta,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x
    } else {
        x.exp().ln_1p()
    }
}

type SparseRow = Vec<(u32, f64)>;

/// Smooth part of the objective (data loss + L2) and its exact gradient
/// over sparse rows. The L1 term is *not* included here.
fn logistic_smooth(
    rows: &[SparseRow],
    targets: &[f64],
    weights: &[f64],
    intercept: f64,
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = rows.len() as f64;
    let mut loss = 0.0;
    let mut grad = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (row, &t) in rows.iter().zip(targets) {
        let mut margin = intercept;
        for &(c, v) in row {
            margin += weights[c as usize] * v;
        }
        let y = if t > 0.5 { 1.0 } else { -1.0 };
        loss += softplus(-y * margin);
        let residual = sigmoid(margin) - t;
        for &(c, v) in row {
            grad[c as usize] += residual * v;
        }
        grad_b += residual;
    }
    loss /= n;
    for g in &mut grad {
        *g /= n;
    }
    grad_b /= n;
    if l2 > 0.0 {
        for (g, w) in grad.iter_mut().zip(weights) {
            *g += l2 * w;
        }
        loss += 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>();
    }
    (loss, grad, grad_b)
}

fn rows_from_features(features: &[FeatureVector]) -> Vec<SparseRow> {
    features
        .iter()
        .map(|fv| fv.entries().map(|(c, v)| (c as u32, v)).collect())
        .collect()
}

/// Full regularized loss plus the smooth part's exact analytic
/// gradient. The returned loss includes both penalty terms; the
/// returned gradient excludes the L1 term (OWL-QN handles it through
/// its pseudo-gradient).
pub fn objective_and_gradient(
    weights: &[f64],
    intercept: f64,
    features: &[FeatureVector],
    labels: &[Label],
    lambda: f64,
    alpha: f64,
) -> Result<(f64, Vec<f64>, f64)> {
    if features.is_empty() || features.len() != labels.len() {
        return Err(Error::Validation(format!(
            "need equally many features and labels (got {} and {})",
            features.len(),
            labels.len()
        )));
    }
    for fv in features {
        if fv.total_dim() != weights.len() {
            return Err(Error::Shape(format!(
                "feature dimension {} does not match weight dimension {}",
                fv.total_dim(),
                weights.len()
            )));
        }
    }
    let rows = rows_from_features(features);
    let targets: Vec<f64> = labels
        .iter()
        .map(|l| if *l == Label::Fake { 1.0 } else { 0.0 })
        .collect();
    let (mut loss, grad, grad_b) =
        logistic_smooth(&rows, &targets, weights, intercept, lambda * (1.0 - alpha));
    loss += lambda * alpha * weights.iter().map(|w| w.abs()).sum::<f64>();
    Ok((loss, grad, grad_b))
}

/// Fits the model. Dense columns are standardized internally; sparse
/// columns are used raw. Requires both classes in the training set and
/// finite feature values.
pub fn fit(features: &[FeatureVector], labels: &[Label], config: &TrainConfig) -> Result<Model> {
    config.validate()?;
    if features.is_empty() || features.len() != labels.len() {
        return Err(Error::Validation(format!(
            "need equally many features and labels (got {} and {})",
            features.len(),
            labels.len()
        )));
    }
    let n_fake = labels.iter().filter(|&&l| l == Label::Fake).count();
    if n_fake == 0 || n_fake == labels.len() {
        return Err(Error::Validation(
            "training set must contain both classes".into(),
        ));
    }
    let layout = features[0].layout;
    for fv in features {
        if fv.layout != layout {
            return Err(Error::Shape(
                "feature vectors have inconsistent layouts".into(),
            ));
        }
        fv.validate()?;
    }

    let stats = StandardizationStats::compute(features, &layout);
    let rows: Vec<SparseRow> = features
        .iter()
        .map(|fv| {
            fv.entries()
                .filter_map(|(col, v)| match fv.layout.dense_position(col) {
                    Some(p) => {
                        if stats.constant[p] {
                            None
                        } else {
                            Some((col as u32, (v - stats.mean[p]) / stats.stddev[p]))
                        }
                    }
                    None => Some((col as u32, v)),
                })
                .collect()
        })
        .collect();
    let targets: Vec<f64> = labels
        .iter()
        .map(|l| if *l == Label::Fake { 1.0 } else { 0.0 })
        .collect();

    let dim = layout.total();
    let l2 = config.lambda * (1.0 - config.alpha);
    let l1 = config.lambda * config.alpha;
    // Optimize over [w; b]; the intercept is the extra, unpenalized
    // coordinate.
    let eval = |x: &[f64]| -> (f64, Vec<f64>) {
        let (loss, grad, grad_b) = logistic_smooth(&rows, &targets, &x[..dim], x[dim], l2);
        let mut g = grad;
        g.push(grad_b);
        (loss, g)
    };
    let params = OptimParams::new(l1, dim, config.max_iter, config.tolerance);
    let outcome = minimize(eval, dim + 1, &params);

    let mut weights = outcome.x;
    let intercept = weights.pop().expect("optimizer preserves dimension");
    Ok(Model {
        weights,
        intercept,
        stats,
        config: config.clone(),
        layout,
        meta: TrainMeta {
            iterations: outcome.iterations,
            final_loss: *outcome.trace.last().expect("trace never empty"),
            converged: outcome.converged,
            objective_trace: outcome.trace,
        },
    })
}

impl Model {
    fn margin(&self, fv: &FeatureVector) -> Result<f64> {
        if fv.layout != self.layout {
            return Err(Error::Shape(format!(
                "feature layout {:?} does not match model layout {:?}",
                fv.layout, self.layout
            )));
        }
        fv.validate()?;
        let mut margin = self.intercept;
        for (col, v) in fv.entries() {
            match self.layout.dense_position(col) {
                Some(p) => {
                    if !self.stats.constant[p] {
                        margin +=
                            self.weights[col] * (v - self.stats.mean[p]) / self.stats.stddev[p];
                    }
                }
                None => margin += self.weights[col] * v,
            }
        }
        Ok(margin)
    }

    /// Probability that the document is Fake.
    pub fn predict_proba(&self, fv: &FeatureVector) -> Result<f64> {
        Ok(sigmoid(self.margin(fv)?))
    }

    /// Fake iff the probability is at least 0.5 (ties go to Fake).
    pub fn predict(&self, fv: &FeatureVector) -> Result<Label> {
        Ok(if self.predict_proba(fv)? >= 0.5 {
            Label::Fake
        } else {
            Label::Credible
        })
    }

    pub fn nonzero_weights(&self) -> usize {
        self.weights.iter().filter(|&&w| w != 0.0).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn dense_fv(values: Vec<f64>) -> FeatureVector {
        let layout = BlockLayout {
            credibility: values.len(),
            linguistic: 0,
            semantic: 0,
        };
        FeatureVector {
            credibility: values,
            linguistic: Vec::new(),
            semantic: Vec::new(),
            layout,
        }
    }

    fn random_problem(rng: &mut Rng, n: usize, dim: usize) -> (Vec<FeatureVector>, Vec<Label>) {
        let features: Vec<FeatureVector> = (0..n)
            .map(|_| dense_fv((0..dim).map(|_| rng.next_f64() * 4.0 - 2.0).collect()))
            .collect();
        let labels: Vec<Label> = (0..n)
            .map(|i| {
                if (rng.next_u64() + i as u64).is_multiple_of(2) {
                    Label::Credible
                } else {
                    Label::Fake
                }
            })
            .collect();
        (features, labels)
    }

    #[test]
    fn zero_weights_loss_is_ln2() {
        let features = vec![dense_fv(vec![1.0, -2.0]), dense_fv(vec![0.5, 3.0])];
        let labels = vec![Label::Credible, Label::Fake];
        let (loss, _, _) =
            objective_and_gradient(&[0.0, 0.0], 0.0, &features, &labels, 0.0, 0.0).unwrap();
        assert!((loss - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn zero_weights_gradient_formula() {
        // gradient = (1/n) Σ (0.5 - t_i) x_i at w = 0, b = 0.
        let features = vec![dense_fv(vec![2.0, 0.0]), dense_fv(vec![0.0, 4.0])];
        let labels = vec![Label::Fake, Label::Credible];
        let (_, grad, grad_b) =
            objective_and_gradient(&[0.0, 0.0], 0.0, &features, &labels, 0.0, 0.0).unwrap();
        assert!((grad[0] - 0.5 * (0.5 - 1.0) * 2.0).abs() < 1e-15);
        assert!((grad[1] - 0.5 * (0.5 - 0.0) * 4.0).abs() < 1e-15);
        assert!(grad_b.abs() < 1e-15);
    }

    #[test]
    fn single_positive_sample_on_first_axis() {
        let features = vec![dense_fv(vec![1.0, 0.0, 0.0])];
        let labels = vec![Label::Fake];
        let (_, grad, _) =
            objective_and_gradient(&[0.0; 3], 0.0, &features, &labels, 0.0, 0.0).unwrap();
        assert!((grad[0] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = Rng::new(2024);
        for &(lambda, alpha) in &[(0.0, 0.0), (0.1, 0.0), (0.1, 0.5), (0.0, 0.5)] {
            let (features, labels) = random_problem(&mut rng, 12, 6);
            let weights: Vec<f64> = (0..6).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            let intercept = rng.next_f64() - 0.5;
            let (_, grad, grad_b) =
                objective_and_gradient(&weights, intercept, &features, &labels, lambda, alpha)
                    .unwrap();
            let h = 1e-6;
            let loss_at = |w: &[f64], b: f64| {
                objective_and_gradient(w, b, &features, &labels, lambda, alpha)
                    .unwrap()
                    .0
            };
            for j in 0..weights.len() {
                let mut wp = weights.clone();
                wp[j] += h;
                let mut wm = weights.clone();
                wm[j] -= h;
                let numeric = (loss_at(&wp, intercept) - loss_at(&wm, intercept)) / (2.0 * h);
                // The analytic gradient excludes the L1 subgradient; add it
                // back at (almost surely) non-zero probe points.
                let analytic = grad[j] + lambda * alpha * weights[j].signum();
                let denom = analytic.abs().max(numeric.abs()).max(1e-8);
                assert!(
                    ((analytic - numeric) / denom).abs() < 1e-5,
                    "λ={lambda} α={alpha} j={j}: analytic {analytic} vs numeric {numeric}"
                );
            }
            let numeric_b =
                (loss_at(&weights, intercept + h) - loss_at(&weights, intercept - h)) / (2.0 * h);
            assert!((grad_b - numeric_b).abs() / grad_b.abs().max(1e-8) < 1e-5);
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let features = vec![dense_fv(vec![1.0, 2.0])];
        let labels = vec![Label::Fake];
        assert!(matches!(
            objective_and_gradient(&[0.0; 3], 0.0, &features, &labels, 0.0, 0.0),
            Err(Error::Shape(_))
        ));
    }

    fn separable_2d(n_per_class: usize, seed: u64) -> (Vec<FeatureVector>, Vec<Label>) {
        let mut rng = Rng::new(seed);
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n_per_class {
            features.push(dense_fv(vec![2.0 + rng.next_f64(), 1.0 + rng.next_f64()]));
            labels.push(Label::Fake);
            features.push(dense_fv(vec![-2.0 - rng.next_f64(), -1.0 - rng.next_f64()]));
            labels.push(Label::Credible);
        }
        (features, labels)
    }

    #[test]
    fn separable_data_reaches_full_training_accuracy() {
        let (features, labels) = separable_2d(100, 5);
        let config = TrainConfig {
            lambda: 0.01,
            alpha: 0.0,
            ..TrainConfig::default()
        };
        let model = fit(&features, &labels, &config).unwrap();
        let correct = features
            .iter()
            .zip(&labels)
            .filter(|(fv, &l)| model.predict(fv).unwrap() == l)
            .count();
        assert_eq!(correct, features.len());
    }

    #[test]
    fn objective_trace_is_monotone() {
        let (features, labels) = separable_2d(50, 6);
        let model = fit(&features, &labels, &TrainConfig::default()).unwrap();
        for w in model.meta.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    /// The L1 threshold at w = 0 on standardized columns:
    /// max_j |(1/n) Σ (0.5 - t_i) z_ij|.
    fn l1_threshold(features: &[FeatureVector], labels: &[Label]) -> f64 {
        let layout = features[0].layout;
        let stats = StandardizationStats::compute(features, &layout);
        let n = features.len() as f64;
        let dim = layout.total();
        let mut acc = vec![0.0; dim];
        for (fv, &l) in features.iter().zip(labels) {
            let t = if l == Label::Fake { 1.0 } else { 0.0 };
            for (col, v) in fv.entries() {
                let p = fv.layout.dense_position(col).unwrap();
                if !stats.constant[p] {
                    acc[col] += (0.5 - t) * (v - stats.mean[p]) / stats.stddev[p];
                }
            }
        }
        acc.iter().map(|a| (a / n).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn l1_above_threshold_zeroes_all_weights() {
        let mut rng = Rng::new(31);
        let (features, labels) = random_problem(&mut rng, 40, 8);
        let lambda_max = l1_threshold(&features, &labels);
        let config = TrainConfig {
            lambda: lambda_max * 1.01,
            alpha: 1.0,
            ..TrainConfig::default()
        };
        let model = fit(&features, &labels, &config).unwrap();
        assert!(
            model.weights.iter().all(|&w| w == 0.0),
            "weights {:?}",
            model.weights
        );
        // The intercept still fits the base rate.
        let t_bar =
            labels.iter().filter(|&&l| l == Label::Fake).count() as f64 / labels.len() as f64;
        assert!((sigmoid(model.intercept) - t_bar).abs() < 1e-3);
    }

    #[test]
    fn nonzero_count_shrinks_along_the_l1_path() {
        // Features with distinct association strengths to the label.
        let mut rng = Rng::new(77);
        let n = 80;
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let label = if i % 2 == 0 {
                Label::Fake
            } else {
                Label::Credible
            };
            let y = if label == Label::Fake { 1.0 } else { -1.0 };
            let strengths = [1.6, 0.9, 0.5, 0.25, 0.1, 0.05];
            let values: Vec<f64> = strengths
                .iter()
                .map(|s| y * s + (rng.next_f64() - 0.5))
                .collect();
            features.push(dense_fv(values));
            labels.push(label);
        }
        let lambda_max = l1_threshold(&features, &labels);
        let grid = [
            lambda_max * 0.01,
            lambda_max * 0.05,
            lambda_max * 0.2,
            lambda_max * 0.5,
            lambda_max * 0.8,
            lambda_max * 1.05,
        ];
        let mut previous = usize::MAX;
        for &lambda in &grid {
            let config = TrainConfig {
                lambda,
                alpha: 1.0,
                max_iter: 300,
                ..TrainConfig::default()
            };
            let model = fit(&features, &labels, &config).unwrap();
            let nz = model.nonzero_weights();
            assert!(
                nz <= previous,
                "nonzero count grew from {previous} to {nz} at λ={lambda}"
            );
            previous = nz;
        }
        assert_eq!(previous, 0);
    }

    #[test]
    fn unregularized_single_feature_matches_grid_search_oracle() {
        // x = ±1 with 20% label noise; the column is already standardized
        // (mean 0, std 1) so the fitted weight is directly comparable.
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            features.push(dense_fv(vec![1.0]));
            labels.push(if i < 8 { Label::Fake } else { Label::Credible });
            features.push(dense_fv(vec![-1.0]));
            labels.push(if i < 8 { Label::Credible } else { Label::Fake });
        }
        let config = TrainConfig {
            lambda: 0.0,
            alpha: 0.0,
            max_iter: 500,
            tolerance: 1e-12,
            ..TrainConfig::default()
        };
        let model = fit(&features, &labels, &config).unwrap();

        // Brute-force oracle: by symmetry the intercept is 0; scan w.
        let loss_of = |w: f64| {
            let mut loss = 0.0;
            for (fv, l) in features.iter().zip(&labels) {
                let y = if *l == Label::Fake { 1.0 } else { -1.0 };
                loss += softplus(-y * w * fv.credibility[0]);
            }
            loss / features.len() as f64
        };
        let mut best_w = 0.0;
        let mut best_loss = f64::INFINITY;
        let mut w = 0.0;
        while w <= 5.0 {
            let l = loss_of(w);
            if l < best_loss {
                best_loss = l;
                best_w = w;
            }
            w += 1e-4;
        }
        assert!(
            (model.weights[0] - best_w).abs() < 1e-3,
            "fitted {} vs oracle {}",
            model.weights[0],
            best_w
        );
        assert!(model.intercept.abs() < 1e-6);
    }

    #[test]
    fn single_class_training_is_rejected() {
        let features = vec![dense_fv(vec![1.0]), dense_fv(vec![2.0])];
        let labels = vec![Label::Fake, Label::Fake];
        assert!(matches!(
            fit(&features, &labels, &TrainConfig::default()),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn non_finite_features_are_rejected() {
        let features = vec![dense_fv(vec![f64::NAN]), dense_fv(vec![1.0])];
        let labels = vec![Label::Fake, Label::Credible];
        assert!(fit(&features, &labels, &TrainConfig::default()).is_err());
    }

    #[test]
    fn predict_proba_basics() {
        let layout = BlockLayout {
            credibility: 1,
            linguistic: 0,
            semantic: 0,
        };
        // Hand-built model: identity standardization, w = 1, b = 0.
        let model = Model {
            weights: vec![1.0],
            intercept: 0.0,
            stats: StandardizationStats {
                mean: vec![0.0],
                stddev: vec![1.0],
                constant: vec![false],
            },
            config: TrainConfig::default(),
            layout,
            meta: TrainMeta {
                iterations: 0,
                final_loss: 0.0,
                converged: true,
                objective_trace: vec![],
            },
        };
        // w = 0-equivalent input: x = 0 → σ(0) = 0.5 → ties to Fake.
        let fv = dense_fv(vec![0.0]);
        assert_eq!(model.predict_proba(&fv).unwrap(), 0.5);
        assert_eq!(model.predict(&fv).unwrap(), Label::Fake);
        // σ(ln 3) = 0.75.
        let fv = dense_fv(vec![3f64.ln()]);
        assert!((model.predict_proba(&fv).unwrap() - 0.75).abs() < 1e-12);
        // Saturation.
        let mut saturated = model.clone();
        saturated.intercept = 30.0;
        let p = saturated.predict_proba(&dense_fv(vec![0.0])).unwrap();
        assert!(p > 0.999999);
        // Thresholding.
        let fv_neg = dense_fv(vec![-0.1]);
        assert_eq!(model.predict(&fv_neg).unwrap(), Label::Credible);
        let fv_pos = dense_fv(vec![0.1]);
        assert_eq!(model.predict(&fv_pos).unwrap(), Label::Fake);
    }

    #[test]
    fn layout_mismatch_is_rejected_at_prediction() {
        let (features, labels) = separable_2d(20, 9);
        let model = fit(&features, &labels, &TrainConfig::default()).unwrap();
        let wrong = dense_fv(vec![1.0, 2.0, 3.0]);
        assert!(matches!(model.predict_proba(&wrong), Err(Error::Shape(_))));
    }

    #[test]
    fn constant_columns_are_pinned_to_zero() {
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..30 {
            let y = if i % 2 == 0 { 1.0 } else { -1.0 };
            // Column 1 is constant.
            features.push(dense_fv(vec![y * 2.0, 7.0]));
            labels.push(if y > 0.0 {
                Label::Fake
            } else {
                Label::Credible
            });
        }
        let model = fit(&features, &labels, &TrainConfig::default()).unwrap();
        assert!(model.stats.constant[1]);
        assert_eq!(model.weights[1], 0.0);
        // Prediction on the constant column must not divide by zero.
        let p = model.predict_proba(&features[0]).unwrap();
        assert!(p.is_finite());
    }

    #[test]
    fn prediction_is_invariant_to_dense_column_rescaling() {
        let (features, labels) = separable_2d(60, 13);
        let model_base = fit(&features, &labels, &TrainConfig::default()).unwrap();

        let scaled: Vec<FeatureVector> = features
            .iter()
            .map(|fv| {
                let mut v = fv.clone();
                v.credibility[0] *= 1000.0;
                v
            })
            .collect();
        let model_scaled = fit(&scaled, &labels, &TrainConfig::default()).unwrap();

        let (test, test_scaled): (Vec<_>, Vec<_>) = {
            let (t, l) = separable_2d(20, 99);
            let _ = l;
            let ts: Vec<FeatureVector> = t
                .iter()
                .map(|fv| {
                    let mut v = fv.clone();
                    v.credibility[0] *= 1000.0;
                    v
                })
                .collect();
            (t, ts)
        };
        for (fv, fvs) in test.iter().zip(&test_scaled) {
            assert_eq!(
                model_base.predict(fv).unwrap(),
                model_scaled.predict(fvs).unwrap()
            );
        }
    }
}
