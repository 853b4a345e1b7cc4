//! Accuracy evaluation, majority baseline, stratified k-fold
//! cross-validation, hyper-parameter/feature-group grid search and
//! per-class feature-distribution summaries.
//!
//! Everything refit per fold (vocabulary, standardization) comes from
//! that fold's training part only, so no test information leaks into a
//! model.

use std::path::Path;

use crate::corpus::{Label, LabeledCorpus};
use crate::error::{Error, Result};
use crate::learner::{fit, Model, TrainConfig};
use crate::lexfeatures::{
    credibility_features, feature_index, FeatureGroups, FeatureMask, FeaturePipeline,
};
use crate::rng::Rng;
use crate::textproc::tokenize;

/// Fraction of exact matches.
pub fn accuracy(predictions: &[Label], truth: &[Label]) -> Result<f64> {
    if predictions.is_empty() || predictions.len() != truth.len() {
        return Err(Error::Validation(format!(
            "accuracy needs equal, non-empty prediction/truth lists (got {} and {})",
            predictions.len(),
            truth.len()
        )));
    }
    let correct = predictions
        .iter()
        .zip(truth)
        .filter(|(p, t)| p == t)
        .count();
    Ok(correct as f64 / truth.len() as f64)
}

/// Accuracy of always predicting the training-majority class on the
/// test labels. A tied training set predicts Fake.
pub fn majority_baseline(train_labels: &[Label], test_labels: &[Label]) -> Result<f64> {
    if train_labels.is_empty() || test_labels.is_empty() {
        return Err(Error::Validation(
            "majority baseline needs non-empty train and test labels".into(),
        ));
    }
    let fake = train_labels.iter().filter(|&&l| l == Label::Fake).count();
    let majority = if 2 * fake >= train_labels.len() {
        Label::Fake
    } else {
        Label::Credible
    };
    let hits = test_labels.iter().filter(|&&l| l == majority).count();
    Ok(hits as f64 / test_labels.len() as f64)
}

fn labeled_only(corpus: &LabeledCorpus, what: &str) -> Result<Vec<Label>> {
    corpus
        .iter()
        .map(|d| {
            d.label.ok_or_else(|| {
                Error::Validation(format!("{what} requires labels; `{}` has none", d.id))
            })
        })
        .collect()
}

/// Trains on a training corpus and scores a test corpus with one
/// pipeline configuration; used by folds and grid points.
fn train_and_score(
    train: &LabeledCorpus,
    test: &LabeledCorpus,
    pipeline: &FeaturePipeline<'_>,
    config: &TrainConfig,
) -> Result<f64> {
    let train_labels = labeled_only(train, "training")?;
    let test_labels = labeled_only(test, "evaluation")?;
    let vocab = pipeline.build_vocabulary(train)?;
    let train_features = pipeline.extract_corpus(train, vocab.as_ref())?;
    let model = fit(&train_features, &train_labels, config)?;
    let test_features = pipeline.extract_corpus(test, vocab.as_ref())?;
    let predictions: Vec<Label> = test_features
        .iter()
        .map(|fv| model.predict(fv))
        .collect::<Result<_>>()?;
    accuracy(&predictions, &test_labels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
}

/// Stratified k-fold cross-validation. Folds are dealt round-robin from
/// seeded per-class shuffles, so per-class fold sizes differ by at most
/// one document; the vocabulary and standardization are recomputed from
/// each fold's training part.
pub fn kfold_cv(
    corpus: &LabeledCorpus,
    k: usize,
    train_config: &TrainConfig,
    pipeline: &FeaturePipeline<'_>,
    seed: u64,
) -> Result<CvResult> {
    if k < 2 {
        return Err(Error::Config(format!("k must be >= 2, got {k}")));
    }
    let labels = labeled_only(corpus, "cross-validation")?;
    for class in [Label::Credible, Label::Fake] {
        let count = labels.iter().filter(|&&l| l == class).count();
        if count < k {
            return Err(Error::Validation(format!(
                "class {class} has {count} documents, fewer than k = {k}"
            )));
        }
    }

    let mut fold_of = vec![0usize; corpus.len()];
    for (class, tag) in [(Label::Credible, "cv.credible"), (Label::Fake, "cv.fake")] {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(i, _)| i)
            .collect();
        Rng::for_component(seed, tag).shuffle(&mut members);
        for (m, &idx) in members.iter().enumerate() {
            fold_of[idx] = m % k;
        }
    }

    let mut fold_accuracies = Vec::with_capacity(k);
    for fold in 0..k {
        let mut train_docs = Vec::new();
        let mut test_docs = Vec::new();
        for (i, doc) in corpus.iter().enumerate() {
            if fold_of[i] == fold {
                test_docs.push(doc.clone());
            } else {
                train_docs.push(doc.clone());
            }
        }
        let train = LabeledCorpus::new(train_docs)?;
        let test = LabeledCorpus::new(test_docs)?;
        fold_accuracies.push(train_and_score(&train, &test, pipeline, train_config)?);
    }
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / k as f64;
    Ok(CvResult {
        fold_accuracies,
        mean_accuracy,
    })
}

/// Candidate lists for the hyper-parameter/feature search. The product
/// is enumerated lambda-outermost, then alpha, max_iter, group set and
/// mask, in the declared list orders.
#[derive(Debug, Clone)]
pub struct Grid {
    pub lambdas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub max_iters: Vec<usize>,
    pub group_sets: Vec<FeatureGroups>,
    pub masks: Vec<FeatureMask>,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty()
            || self.alphas.is_empty()
            || self.max_iters.is_empty()
            || self.group_sets.is_empty()
            || self.masks.is_empty()
        {
            return Err(Error::Config(
                "every grid dimension needs at least one candidate".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GridPoint {
    pub lambda: f64,
    pub alpha: f64,
    pub max_iter: usize,
    pub groups: FeatureGroups,
    pub mask: FeatureMask,
}

impl GridPoint {
    pub fn describe(&self) -> String {
        format!(
            "lambda={} alpha={} max_iter={} groups={} mask={}",
            self.lambda,
            self.alpha,
            self.max_iter,
            self.groups.label(),
            self.mask.to_spec_string()
        )
    }
}

#[derive(Debug, Clone)]
pub struct GridCell {
    pub point: GridPoint,
    pub accuracy: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct GridSearchResult {
    pub best: GridPoint,
    pub best_accuracy: f64,
    pub table: Vec<GridCell>,
}

impl GridSearchResult {
    /// CSV mirroring the enumeration order; failed cells carry the
    /// error message instead of an accuracy.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("lambda,alpha,max_iter,groups,mask,accuracy,error\n");
        for cell in &self.table {
            let p = &cell.point;
            out.push_str(&format!(
                "{},{},{},{},\"{}\",{},{}\n",
                p.lambda,
                p.alpha,
                p.max_iter,
                p.groups.label(),
                p.mask.to_spec_string(),
                cell.accuracy.map_or(String::new(), |a| format!("{a:.6}")),
                cell.error
                    .as_deref()
                    .map_or(String::new(), |e| format!("\"{}\"", e.replace('"', "'")))
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

/// Evaluates every grid point by k-fold cross-validation. Failures are
/// recorded per cell, not fatal; the best cell is the highest mean
/// accuracy with ties broken by enumeration order.
pub fn grid_search(
    corpus: &LabeledCorpus,
    grid: &Grid,
    k: usize,
    pipeline: &FeaturePipeline<'_>,
    base: &TrainConfig,
    seed: u64,
) -> Result<GridSearchResult> {
    grid.validate()?;
    let mut table = Vec::new();
    let mut best: Option<(usize, f64)> = None;
    for &lambda in &grid.lambdas {
        for &alpha in &grid.alphas {
            for &max_iter in &grid.max_iters {
                for &groups in &grid.group_sets {
                    for mask in &grid.masks {
                        let point = GridPoint {
                            lambda,
                            alpha,
                            max_iter,
                            groups,
                            mask: mask.clone(),
                        };
                        let config = TrainConfig {
                            lambda,
                            alpha,
                            max_iter,
                            ..base.clone()
                        };
                        let mut pl = pipeline.with_groups(groups);
                        pl.mask = mask.clone();
                        let cell = match kfold_cv(corpus, k, &config, &pl, seed) {
                            Ok(cv) => {
                                let idx = table.len();
                                if best.is_none_or(|(_, acc)| cv.mean_accuracy > acc) {
                                    best = Some((idx, cv.mean_accuracy));
                                }
                                GridCell {
                                    point,
                                    accuracy: Some(cv.mean_accuracy),
                                    error: None,
                                }
                            }
                            Err(e) => GridCell {
                                point,
                                accuracy: None,
                                error: Some(e.to_string()),
                            },
                        };
                        table.push(cell);
                    }
                }
            }
        }
    }
    let (best_idx, best_accuracy) =
        best.ok_or_else(|| Error::Validation("every grid point failed; nothing to select".into()))?;
    Ok(GridSearchResult {
        best: table[best_idx].point.clone(),
        best_accuracy,
        table,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalCell {
    pub combination: String,
    pub testset: String,
    pub accuracy: f64,
}

/// Accuracy grid: one fitted model per feature-group combination,
/// scored on every test set, plus the majority-baseline row.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub cells: Vec<EvalCell>,
    /// Majority baseline per test set.
    pub baselines: Vec<(String, f64)>,
    /// Echo of the configuration that produced the report.
    pub provenance: String,
}

impl EvalReport {
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("combination,testset,accuracy\n");
        for cell in &self.cells {
            out.push_str(&format!(
                "{},{},{:.6}\n",
                cell.combination, cell.testset, cell.accuracy
            ));
        }
        for (testset, acc) in &self.baselines {
            out.push_str(&format!("baseline,{testset},{acc:.6}\n"));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }

    pub fn cell(&self, combination: &str, testset: &str) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.combination == combination && c.testset == testset)
            .map(|c| c.accuracy)
    }
}

/// Fits one model per group combination on `train` and reports accuracy
/// on every named test corpus. Returns the fitted models alongside the
/// report so callers can persist them.
pub fn evaluate_matrix(
    train: &LabeledCorpus,
    tests: &[(String, LabeledCorpus)],
    combinations: &[FeatureGroups],
    pipeline: &FeaturePipeline<'_>,
    config: &TrainConfig,
) -> Result<(EvalReport, Vec<(String, Model)>)> {
    if combinations.is_empty() {
        return Err(Error::Config(
            "no feature-group combinations requested".into(),
        ));
    }
    if tests.is_empty() {
        return Err(Error::Config("no test sets provided".into()));
    }
    let train_labels = labeled_only(train, "training")?;

    // One vocabulary for all combinations that use the linguistic group,
    // built from the training corpus only.
    let needs_vocab = combinations.iter().any(|c| c.linguistic);
    let vocab = if needs_vocab {
        pipeline
            .with_groups(FeatureGroups::LINGUISTIC)
            .build_vocabulary(train)?
    } else {
        None
    };

    let mut cells = Vec::new();
    let mut models = Vec::new();
    for &groups in combinations {
        let pl = pipeline.with_groups(groups);
        let train_features = pl.extract_corpus(train, vocab.as_ref())?;
        let model = fit(&train_features, &train_labels, config)?;
        for (name, test) in tests {
            let test_labels = labeled_only(test, "evaluation")?;
            let test_features = pl.extract_corpus(test, vocab.as_ref())?;
            let predictions: Vec<Label> = test_features
                .iter()
                .map(|fv| model.predict(fv))
                .collect::<Result<_>>()?;
            cells.push(EvalCell {
                combination: groups.label(),
                testset: name.clone(),
                accuracy: accuracy(&predictions, &test_labels)?,
            });
        }
        models.push((groups.label(), model));
    }

    let mut baselines = Vec::new();
    for (name, test) in tests {
        let test_labels = labeled_only(test, "evaluation")?;
        baselines.push((
            name.clone(),
            majority_baseline(&train_labels, &test_labels)?,
        ));
    }

    let provenance = format!(
        "lambda={} alpha={} max_iter={} tolerance={} seed={} mask={} weighting={} orders={} min_df={} include_title={}",
        config.lambda,
        config.alpha,
        config.max_iter,
        config.tolerance,
        config.seed,
        pipeline.mask.to_spec_string(),
        pipeline.weighting.name(),
        pipeline.orders.to_spec_string(),
        pipeline.min_df,
        pipeline.include_title
    );
    Ok((
        EvalReport {
            cells,
            baselines,
            provenance,
        },
        models,
    ))
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSummary {
    pub feature: String,
    pub label: Label,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Per-class five-number summaries of credibility features, the data
/// behind box plots. The corpus must be fully labeled.
pub fn distribution_summary(
    corpus: &LabeledCorpus,
    features: &[&str],
    pipeline: &FeaturePipeline<'_>,
) -> Result<Vec<FeatureSummary>> {
    let labels = labeled_only(corpus, "distribution summary")?;
    if corpus.is_empty() {
        return Err(Error::Validation("corpus is empty".into()));
    }
    let mut indices = Vec::with_capacity(features.len());
    for name in features {
        indices.push(
            feature_index(name)
                .ok_or_else(|| Error::Config(format!("unknown credibility feature `{name}`")))?,
        );
    }

    let blocks: Vec<[f64; 20]> = corpus
        .iter()
        .map(|doc| {
            let tokens = tokenize(&doc.text(pipeline.include_title));
            *credibility_features(&tokens, pipeline.pronouns, pipeline.sentiment).values()
        })
        .collect();

    let mut out = Vec::new();
    for (name, &fi) in features.iter().zip(&indices) {
        for class in [Label::Credible, Label::Fake] {
            let mut values: Vec<f64> = blocks
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l == class)
                .map(|(b, _)| b[fi])
                .collect();
            if values.is_empty() {
                continue;
            }
            values.sort_by(|a, b| a.partial_cmp(b).expect("finite feature values"));
            out.push(FeatureSummary {
                feature: name.to_string(),
                label: class,
                min: values[0],
                q1: quantile(&values, 0.25),
                median: quantile(&values, 0.5),
                q3: quantile(&values, 0.75),
                max: *values.last().expect("non-empty"),
            });
        }
    }
    Ok(out)
}

/// CSV emitter for [`distribution_summary`].
pub fn summaries_to_csv(summaries: &[FeatureSummary]) -> String {
    let mut out = String::from("feature,class,min,q1,median,q3,max\n");
    for s in summaries {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            s.feature, s.label, s.min, s.q1, s.median, s.q3, s.max
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;
    use crate::lexfeatures::{NgramOrders, PronounLexicon, SentimentLexicon, Weighting};
    use crate::rng::Rng;
    use crate::textproc::StopList;

    fn accuracy_labels(bits: &[u8]) -> Vec<Label> {
        bits.iter()
            .map(|&b| if b == 1 { Label::Fake } else { Label::Credible })
            .collect()
    }

    #[test]
    fn accuracy_basics() {
        let truth = accuracy_labels(&[1, 1, 1]);
        assert_eq!(accuracy(&truth, &truth).unwrap(), 1.0);
        let pred = accuracy_labels(&[1, 0, 1]);
        assert!((accuracy(&pred, &truth).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(accuracy(&[], &[]).is_err());
        assert!(accuracy(&truth, &truth[..2]).is_err());
    }

    #[test]
    fn majority_baseline_fraction() {
        // Train majority is Fake; majority covers 52.60% of the test set.
        let train = accuracy_labels(&[1, 1, 1, 0]);
        let mut test = vec![Label::Fake; 526];
        test.extend(vec![Label::Credible; 474]);
        let acc = majority_baseline(&train, &test).unwrap();
        assert!((acc - 0.5260).abs() < 1e-12);
    }

    #[test]
    fn majority_baseline_edge_cases() {
        let train = accuracy_labels(&[0, 0, 1]);
        let test = accuracy_labels(&[0, 0, 0]);
        assert_eq!(majority_baseline(&train, &test).unwrap(), 1.0);

        // Tied training set predicts Fake.
        let train = accuracy_labels(&[0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        let test = accuracy_labels(&[1, 1, 0, 0]);
        assert_eq!(majority_baseline(&train, &test).unwrap(), 0.5);

        assert!(majority_baseline(&[], &test).is_err());
    }

    /// Tiny style-separable corpus: fakes shout, credibles quote.
    fn style_corpus(n_per_class: usize) -> LabeledCorpus {
        let mut docs = Vec::new();
        let mut rng = Rng::new(500);
        for i in 0..n_per_class {
            let excls = 2 + (rng.next_below(3));
            let body = format!(
                "ШОК новина {} скандал{} това е нечувано",
                i,
                "!".repeat(excls)
            );
            docs.push(Document {
                id: format!("f{i}"),
                source: "synthetic".into(),
                title: String::new(),
                body,
                label: Some(Label::Fake),
            });
            let body = format!(
                "Министърът заяви „{}“ пред парламента в сряда номер {}",
                "позицията е ясна", i
            );
            docs.push(Document {
                id: format!("c{i}"),
                source: "synthetic".into(),
                title: String::new(),
                body,
                label: Some(Label::Credible),
            });
        }
        LabeledCorpus::new(docs).unwrap()
    }

    struct Resources {
        stops: StopList,
        pronouns: PronounLexicon,
        sentiment: SentimentLexicon,
    }

    impl Resources {
        fn new() -> Self {
            Resources {
                stops: StopList::builtin("bg").unwrap(),
                pronouns: PronounLexicon::builtin("bg").unwrap(),
                sentiment: SentimentLexicon::builtin("bg").unwrap(),
            }
        }

        fn pipeline(&self, groups: FeatureGroups) -> FeaturePipeline<'_> {
            FeaturePipeline {
                groups,
                mask: FeatureMask::default_seven(),
                weighting: Weighting::TfIdf,
                orders: NgramOrders::default(),
                min_df: 1,
                include_title: true,
                stops: &self.stops,
                pronouns: &self.pronouns,
                sentiment: &self.sentiment,
                embeddings: None,
            }
        }
    }

    #[test]
    fn kfold_separable_style_corpus() {
        let corpus = style_corpus(50);
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        let cv = kfold_cv(&corpus, 5, &TrainConfig::default(), &pipeline, 7).unwrap();
        assert_eq!(cv.fold_accuracies.len(), 5);
        assert!(
            cv.mean_accuracy >= 0.95,
            "mean accuracy {}",
            cv.mean_accuracy
        );
    }

    #[test]
    fn kfold_is_deterministic_and_balanced() {
        let corpus = style_corpus(13);
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        let cv1 = kfold_cv(&corpus, 5, &TrainConfig::default(), &pipeline, 3).unwrap();
        let cv2 = kfold_cv(&corpus, 5, &TrainConfig::default(), &pipeline, 3).unwrap();
        assert_eq!(cv1.fold_accuracies, cv2.fold_accuracies);
    }

    #[test]
    fn kfold_rejects_small_classes() {
        let corpus = style_corpus(3);
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        assert!(kfold_cv(&corpus, 5, &TrainConfig::default(), &pipeline, 3).is_err());
    }

    /// Coin-flip labels over identically distributed documents: cross-
    /// validation accuracy must stay near chance.
    fn noise_corpus(n: usize, seed: u64) -> LabeledCorpus {
        let pool = ["слово", "текст", "дума", "израз", "фраза", "ред"];
        let mut rng = Rng::new(seed);
        let mut docs = Vec::new();
        let mut fake = 0usize;
        for i in 0..n {
            let len = 4 + rng.next_below(5);
            let mut words: Vec<String> = (0..len)
                .map(|_| pool[rng.next_below(pool.len())].to_string())
                .collect();
            if rng.next_below(3) == 0 {
                words.push("!".into());
            }
            let label = if rng.next_u64().is_multiple_of(2) {
                fake += 1;
                Label::Fake
            } else {
                Label::Credible
            };
            docs.push(Document {
                id: format!("n{i}"),
                source: "noise".into(),
                title: String::new(),
                body: words.join(" "),
                label: Some(label),
            });
        }
        // Make sure both classes can fill 5 folds.
        for (i, doc) in docs.iter_mut().enumerate() {
            if fake < 5 && doc.label == Some(Label::Credible) {
                doc.label = Some(Label::Fake);
                fake += 1;
            }
            if n - fake < 5 && doc.label == Some(Label::Fake) && i >= 5 {
                doc.label = Some(Label::Credible);
                fake -= 1;
            }
        }
        LabeledCorpus::new(docs).unwrap()
    }

    #[test]
    fn kfold_on_pure_noise_stays_near_chance() {
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        for seed in 0..5u64 {
            let corpus = noise_corpus(60, 900 + seed);
            let cv = kfold_cv(&corpus, 5, &TrainConfig::default(), &pipeline, seed).unwrap();
            assert!(
                (0.35..=0.65).contains(&cv.mean_accuracy),
                "seed {seed}: mean accuracy {} outside the chance band",
                cv.mean_accuracy
            );
        }
    }

    #[test]
    fn grid_search_prefers_sane_lambda() {
        let corpus = style_corpus(25);
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        let grid = Grid {
            lambdas: vec![0.01, 1e6],
            alphas: vec![0.0],
            max_iters: vec![100],
            group_sets: vec![FeatureGroups::CREDIBILITY],
            masks: vec![FeatureMask::default_seven()],
        };
        let result =
            grid_search(&corpus, &grid, 3, &pipeline, &TrainConfig::default(), 11).unwrap();
        assert_eq!(result.table.len(), 2);
        assert_eq!(result.best.lambda, 0.01);
        assert!(result.best_accuracy > 0.9);
    }

    #[test]
    fn grid_search_singleton_and_tie_rules() {
        let corpus = style_corpus(20);
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        let grid = Grid {
            lambdas: vec![0.01, 0.01],
            alphas: vec![0.5],
            max_iters: vec![50],
            group_sets: vec![FeatureGroups::CREDIBILITY],
            masks: vec![FeatureMask::default_seven()],
        };
        let result =
            grid_search(&corpus, &grid, 3, &pipeline, &TrainConfig::default(), 11).unwrap();
        // Identical configs: the first occurrence wins.
        assert_eq!(result.table.len(), 2);
        assert_eq!(result.table[0].accuracy, result.table[1].accuracy);
        assert_eq!(result.best_accuracy, result.table[0].accuracy.unwrap());
    }

    #[test]
    fn grid_search_records_failures_without_aborting() {
        let corpus = style_corpus(20);
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        let grid = Grid {
            lambdas: vec![0.01],
            alphas: vec![0.0],
            max_iters: vec![100],
            // The semantic group has no embedding table: those cells fail.
            group_sets: vec![FeatureGroups::SEMANTIC, FeatureGroups::CREDIBILITY],
            masks: vec![FeatureMask::default_seven()],
        };
        let result =
            grid_search(&corpus, &grid, 3, &pipeline, &TrainConfig::default(), 11).unwrap();
        assert!(result.table[0].error.is_some());
        assert!(result.table[1].accuracy.is_some());
        assert_eq!(result.best.groups, FeatureGroups::CREDIBILITY);
    }

    #[test]
    fn evaluate_matrix_shapes_and_baseline() {
        let train = style_corpus(30);
        let test_a = style_corpus(10);
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        let combos = vec![
            FeatureGroups::CREDIBILITY,
            FeatureGroups::LINGUISTIC,
            FeatureGroups::parse("credibility+linguistic").unwrap(),
        ];
        let tests = vec![("testA".to_string(), test_a)];
        let (report, models) =
            evaluate_matrix(&train, &tests, &combos, &pipeline, &TrainConfig::default()).unwrap();
        assert_eq!(report.cells.len(), 3);
        assert_eq!(models.len(), 3);
        assert!(report
            .cells
            .iter()
            .all(|c| (0.0..=1.0).contains(&c.accuracy)));
        // Balanced test set: the baseline is 0.5 regardless of groups.
        assert_eq!(report.baselines.len(), 1);
        assert!((report.baselines[0].1 - 0.5).abs() < 1e-12);
        let csv = report.to_csv_string();
        assert!(csv.starts_with("combination,testset,accuracy\n"));
        assert!(csv.contains("baseline,testA,"));
        assert!(report.cell("credibility", "testA").is_some());
    }

    #[test]
    fn evaluate_matrix_rejects_empty_inputs() {
        let train = style_corpus(10);
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        assert!(evaluate_matrix(
            &train,
            &[],
            &[FeatureGroups::ALL],
            &pipeline,
            &TrainConfig::default()
        )
        .is_err());
        let tests = vec![("t".to_string(), style_corpus(5))];
        assert!(evaluate_matrix(&train, &tests, &[], &pipeline, &TrainConfig::default()).is_err());
    }

    #[test]
    fn quantiles_match_hand_computation() {
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.25), 2.0);
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.5), 3.0);
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.75), 4.0);
        // 8 values against the sort-and-interpolate rule by hand:
        // h = 0.25 * 7 = 1.75 → 2 + 0.75*(3-2) = 2.75.
        let v: Vec<f64> = (1..=8).map(f64::from).collect();
        assert!((quantile(&v, 0.25) - 2.75).abs() < 1e-15);
        assert!((quantile(&v, 0.5) - 4.5).abs() < 1e-15);
        assert!((quantile(&v, 0.75) - 6.25).abs() < 1e-15);
    }

    #[test]
    fn distribution_summary_shapes() {
        let corpus = style_corpus(10);
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        let summaries =
            distribution_summary(&corpus, &["exclMarks", "doubleQuotes"], &pipeline).unwrap();
        assert_eq!(summaries.len(), 4);
        let fake_excl = summaries
            .iter()
            .find(|s| s.feature == "exclMarks" && s.label == Label::Fake)
            .unwrap();
        assert!(fake_excl.min >= 2.0);
        assert!(fake_excl.min <= fake_excl.q1 && fake_excl.q1 <= fake_excl.median);
        assert!(fake_excl.median <= fake_excl.q3 && fake_excl.q3 <= fake_excl.max);
        // Credibles have no exclamation marks: degenerate box.
        let cred_excl = summaries
            .iter()
            .find(|s| s.feature == "exclMarks" && s.label == Label::Credible)
            .unwrap();
        assert_eq!(cred_excl.min, cred_excl.max);

        let csv = summaries_to_csv(&summaries);
        assert!(csv.starts_with("feature,class,min,q1,median,q3,max\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn distribution_summary_requires_labels() {
        let corpus = LabeledCorpus::new(vec![Document {
            id: "u".into(),
            source: "s".into(),
            title: String::new(),
            body: "text".into(),
            label: None,
        }])
        .unwrap();
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        assert!(distribution_summary(&corpus, &["exclMarks"], &pipeline).is_err());
        assert!(matches!(
            distribution_summary(&style_corpus(2), &["bogus"], &pipeline),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn no_leakage_deleting_test_documents_keeps_weights() {
        let train = style_corpus(20);
        let test_full = style_corpus(8);
        let test_small = {
            let docs = test_full.documents()[..test_full.len() - 1].to_vec();
            LabeledCorpus::new(docs).unwrap()
        };
        let res = Resources::new();
        let pipeline = res.pipeline(FeatureGroups::CREDIBILITY);
        let combos = [FeatureGroups::CREDIBILITY];
        let (_, models_full) = evaluate_matrix(
            &train,
            &[("t".into(), test_full)],
            &combos,
            &pipeline,
            &TrainConfig::default(),
        )
        .unwrap();
        let (_, models_small) = evaluate_matrix(
            &train,
            &[("t".into(), test_small)],
            &combos,
            &pipeline,
            &TrainConfig::default(),
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("full.txt");
        let p2 = dir.path().join("small.txt");
        models_full[0].1.save(&p1).unwrap();
        models_small[0].1.save(&p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }
}
