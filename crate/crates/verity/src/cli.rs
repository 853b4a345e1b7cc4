//! Command-line entry point wiring the library into reproducible
//! train / evaluate / rank / predict workflows.
//!
//! Every run resolves one effective configuration (defaults, then the
//! `VERITY_SEED` environment variable, then `--config`, then flags) and
//! echoes it to `<out-dir>/effective.cfg`, so re-running from the echo
//! reproduces the outputs bit-for-bit in deterministic mode.
//!
//! Exit codes: 0 on success, 1 for runtime or data errors (message on
//! standard error), 2 for usage errors.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::{ResourceSet, RunConfig, DEFAULT_SEED, SEED_ENV_VAR};
use crate::corpus::{
    load_dataset, save_jsonl, split_corpus, DatasetFormat, Label, LabeledCorpus, SplitSpec,
};
use crate::embeddings::{load_background_corpus, train_embeddings};
use crate::error::{Error, Result};
use crate::evalharness::{
    distribution_summary, evaluate_matrix, grid_search, kfold_cv, summaries_to_csv, Grid,
};
use crate::learner::{fit, Model};
use crate::lexfeatures::{FeatureGroups, FeatureMask, Vocabulary, CREDIBILITY_FEATURE_NAMES};
use crate::selection::feature_importance;

#[derive(Parser)]
#[command(
    name = "verity",
    version,
    about = "Credible vs. fake news classification toolkit",
    propagate_version = true
)]
struct Cli {
    /// Run-configuration file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Top-level seed; falls back to $VERITY_SEED, then 42.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for reports, models and the config echo.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Language tag selecting builtin lexicons (bg or en).
    #[arg(long, global = true)]
    language: Option<String>,

    /// Stop-list file (one word per line) overriding the builtin list.
    #[arg(long, global = true, value_name = "FILE")]
    stopwords: Option<PathBuf>,

    /// Pronoun lexicon file overriding the builtin lexicon.
    #[arg(long, global = true, value_name = "FILE")]
    pronouns: Option<PathBuf>,

    /// Sentiment lexicon file overriding the builtin lexicon.
    #[arg(long, global = true, value_name = "FILE")]
    sentiment: Option<PathBuf>,

    /// Word-embedding table in the text format.
    #[arg(long, global = true, value_name = "FILE")]
    embeddings: Option<PathBuf>,

    /// Prepend the title to the body for feature extraction.
    #[arg(long, global = true, value_name = "BOOL")]
    include_title: Option<bool>,

    /// Worker threads for embedding training (>1 is non-deterministic).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Dataset format override (jsonl or csv); default: file extension.
    #[arg(long, global = true)]
    format: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a dataset and print corpus statistics.
    Ingest {
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
    },
    /// Split a dataset into train/test parts (written as jsonl).
    Split {
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        #[arg(long)]
        train_fraction: Option<f64>,
        #[arg(long, value_name = "BOOL")]
        stratified: Option<bool>,
    },
    /// Train word embeddings on a background corpus (one document per line).
    TrainEmbeddings {
        #[arg(long, value_name = "FILE")]
        background: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        negative: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        learning_rate: Option<f64>,
        #[arg(long)]
        min_count: Option<u64>,
        /// skipgram or cbow.
        #[arg(long)]
        model: Option<String>,
    },
    /// Rank credibility features by importance (CSV like the reference table).
    RankFeatures {
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        /// lvq or auc.
        #[arg(long)]
        metric: Option<String>,
    },
    /// Fit a model on a training set; writes model and vocabulary files.
    Train {
        #[arg(long, value_name = "FILE")]
        train: Option<PathBuf>,
        #[arg(long)]
        groups: Option<String>,
        #[arg(long)]
        mask: Option<String>,
        #[arg(long)]
        weighting: Option<String>,
        #[arg(long)]
        orders: Option<String>,
        #[arg(long)]
        min_df: Option<usize>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Accuracy grid over feature-group combinations and test sets.
    Evaluate {
        #[arg(long, value_name = "FILE")]
        train: Option<PathBuf>,
        /// Repeatable; each file becomes a test-set column.
        #[arg(long = "test", value_name = "FILE", action = clap::ArgAction::Append)]
        tests: Vec<PathBuf>,
        /// Repeatable group combination, e.g. `credibility+semantic`.
        #[arg(long = "groups", action = clap::ArgAction::Append)]
        group_sets: Vec<String>,
        #[arg(long)]
        mask: Option<String>,
        #[arg(long)]
        weighting: Option<String>,
        #[arg(long)]
        min_df: Option<usize>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Stratified k-fold cross-validation on one dataset.
    Cv {
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        groups: Option<String>,
        #[arg(long)]
        mask: Option<String>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Hyper-parameter / feature-group grid search by cross-validation.
    GridSearch {
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated candidate list.
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long)]
        max_iters: Option<String>,
        /// Semicolon-separated group combinations.
        #[arg(long)]
        group_sets: Option<String>,
        /// Semicolon-separated mask specs.
        #[arg(long)]
        masks: Option<String>,
    },
    /// Per-document Fake probability and label for new documents.
    Predict {
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        vocabulary: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long)]
        mask: Option<String>,
        #[arg(long)]
        weighting: Option<String>,
    },
    /// Per-class five-number summaries of credibility features (CSV).
    FeatureSummary {
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        /// Comma-separated canonical feature names.
        #[arg(long)]
        features: Option<String>,
    },
}

/// Runs the CLI and returns the process exit code.
pub fn run<I>(args: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// The spec-level entry point: argv in, exit code out.
pub fn dispatch(argv: &[String]) -> i32 {
    run(argv.iter().cloned())
}

fn execute(cli: Cli) -> Result<()> {
    let mut cfg = effective_config(&cli)?;
    match cli.command {
        Command::Ingest { data } => {
            if data.is_some() {
                cfg.paths.data = data;
            }
            run_ingest(&cfg)
        }
        Command::Split {
            data,
            train_fraction,
            stratified,
        } => {
            if data.is_some() {
                cfg.paths.data = data;
            }
            if let Some(f) = train_fraction {
                cfg.split.train_fraction = f;
            }
            if let Some(s) = stratified {
                cfg.split.stratified = s;
            }
            run_split(&cfg)
        }
        Command::TrainEmbeddings {
            background,
            dim,
            window,
            negative,
            epochs,
            learning_rate,
            min_count,
            model,
        } => {
            if background.is_some() {
                cfg.paths.background = background;
            }
            if let Some(v) = dim {
                cfg.embeddings.dim = v;
            }
            if let Some(v) = window {
                cfg.embeddings.window = v;
            }
            if let Some(v) = negative {
                cfg.embeddings.negative = v;
            }
            if let Some(v) = epochs {
                cfg.embeddings.epochs = v;
            }
            if let Some(v) = learning_rate {
                cfg.embeddings.learning_rate = v;
            }
            if let Some(v) = min_count {
                cfg.embeddings.min_count = v;
            }
            if let Some(v) = model {
                cfg.embeddings.model = crate::embeddings::EmbeddingModel::parse(&v)?;
            }
            run_train_embeddings(&cfg)
        }
        Command::RankFeatures { data, metric } => {
            if data.is_some() {
                cfg.paths.data = data;
            }
            if let Some(m) = metric {
                cfg.rank.metric = crate::selection::ImportanceMetric::parse(&m)?;
            }
            run_rank_features(&cfg)
        }
        Command::Train {
            train,
            groups,
            mask,
            weighting,
            orders,
            min_df,
            lambda,
            alpha,
            max_iter,
            tolerance,
        } => {
            if train.is_some() {
                cfg.paths.train = train;
            }
            apply_feature_flags(&mut cfg, groups, mask, weighting, orders, min_df)?;
            apply_train_flags(&mut cfg, lambda, alpha, max_iter, tolerance);
            run_train(&cfg)
        }
        Command::Evaluate {
            train,
            tests,
            group_sets,
            mask,
            weighting,
            min_df,
            lambda,
            alpha,
            max_iter,
        } => {
            if train.is_some() {
                cfg.paths.train = train;
            }
            if !tests.is_empty() {
                cfg.paths.test = tests;
            }
            if !group_sets.is_empty() {
                cfg.features.group_sets = group_sets
                    .iter()
                    .map(|s| FeatureGroups::parse(s))
                    .collect::<Result<_>>()?;
            }
            apply_feature_flags(&mut cfg, None, mask, weighting, None, min_df)?;
            apply_train_flags(&mut cfg, lambda, alpha, max_iter, None);
            run_evaluate(&cfg)
        }
        Command::Cv {
            data,
            k,
            groups,
            mask,
            lambda,
            alpha,
            max_iter,
        } => {
            if data.is_some() {
                cfg.paths.data = data;
            }
            if let Some(k) = k {
                cfg.cv_k = k;
            }
            apply_feature_flags(&mut cfg, groups, mask, None, None, None)?;
            apply_train_flags(&mut cfg, lambda, alpha, max_iter, None);
            run_cv(&cfg)
        }
        Command::GridSearch {
            data,
            k,
            lambdas,
            alphas,
            max_iters,
            group_sets,
            masks,
        } => {
            if data.is_some() {
                cfg.paths.data = data;
            }
            if let Some(k) = k {
                cfg.cv_k = k;
            }
            if let Some(v) = lambdas {
                cfg.grid.lambdas = parse_num_list(&v, "lambdas")?;
            }
            if let Some(v) = alphas {
                cfg.grid.alphas = parse_num_list(&v, "alphas")?;
            }
            if let Some(v) = max_iters {
                cfg.grid.max_iters = parse_num_list(&v, "max_iters")?;
            }
            if let Some(v) = group_sets {
                cfg.grid.group_sets = v
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(FeatureGroups::parse)
                    .collect::<Result<_>>()?;
            }
            if let Some(v) = masks {
                cfg.grid.masks = v
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(FeatureMask::parse)
                    .collect::<Result<_>>()?;
            }
            run_grid_search(&cfg)
        }
        Command::Predict {
            model,
            vocabulary,
            input,
            mask,
            weighting,
        } => {
            if model.is_some() {
                cfg.paths.model = model;
            }
            if vocabulary.is_some() {
                cfg.paths.vocabulary = vocabulary;
            }
            if input.is_some() {
                cfg.paths.input = input;
            }
            apply_feature_flags(&mut cfg, None, mask, weighting, None, None)?;
            run_predict(&cfg)
        }
        Command::FeatureSummary { data, features } => {
            if data.is_some() {
                cfg.paths.data = data;
            }
            if let Some(list) = features {
                cfg.summary_features = list
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
            }
            run_feature_summary(&cfg)
        }
    }
}

fn parse_num_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|v| {
            v.parse()
                .map_err(|_| Error::Config(format!("invalid value `{v}` in `{key}`")))
        })
        .collect()
}

fn apply_feature_flags(
    cfg: &mut RunConfig,
    groups: Option<String>,
    mask: Option<String>,
    weighting: Option<String>,
    orders: Option<String>,
    min_df: Option<usize>,
) -> Result<()> {
    if let Some(g) = groups {
        cfg.features.groups = FeatureGroups::parse(&g)?;
    }
    if let Some(m) = mask {
        cfg.features.mask = FeatureMask::parse(&m)?;
    }
    if let Some(w) = weighting {
        cfg.features.weighting = crate::lexfeatures::Weighting::parse(&w)?;
    }
    if let Some(o) = orders {
        cfg.features.orders = crate::lexfeatures::NgramOrders::parse(&o)?;
    }
    if let Some(d) = min_df {
        cfg.features.min_df = d;
    }
    Ok(())
}

fn apply_train_flags(
    cfg: &mut RunConfig,
    lambda: Option<f64>,
    alpha: Option<f64>,
    max_iter: Option<usize>,
    tolerance: Option<f64>,
) {
    if let Some(v) = lambda {
        cfg.train.lambda = v;
    }
    if let Some(v) = alpha {
        cfg.train.alpha = v;
    }
    if let Some(v) = max_iter {
        cfg.train.max_iter = v;
    }
    if let Some(v) = tolerance {
        cfg.train.tolerance = v;
    }
}

/// Defaults, then $VERITY_SEED, then the config file, then global flags.
fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Ok(env_seed) = std::env::var(SEED_ENV_VAR) {
        cfg.seed = env_seed.parse().map_err(|_| {
            Error::Config(format!(
                "{SEED_ENV_VAR} must be an integer, got `{env_seed}`"
            ))
        })?;
    } else {
        cfg.seed = DEFAULT_SEED;
    }
    if let Some(path) = &cli.config {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        cfg.apply(&content)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &cli.out_dir {
        cfg.paths.out_dir = Some(dir.clone());
    }
    if let Some(lang) = &cli.language {
        cfg.language = lang.clone();
    }
    if let Some(p) = &cli.stopwords {
        cfg.paths.stopwords = Some(p.clone());
    }
    if let Some(p) = &cli.pronouns {
        cfg.paths.pronouns = Some(p.clone());
    }
    if let Some(p) = &cli.sentiment {
        cfg.paths.sentiment = Some(p.clone());
    }
    if let Some(p) = &cli.embeddings {
        cfg.paths.embeddings = Some(p.clone());
    }
    if let Some(t) = cli.include_title {
        cfg.features.include_title = t;
    }
    if let Some(w) = cli.workers {
        cfg.embeddings.workers = w;
    }
    if let Some(f) = &cli.format {
        crate::corpus::DatasetFormat::from_name(f)?;
        cfg.paths.format = Some(f.clone());
    }
    cfg.propagate_seed();
    Ok(cfg)
}

/// Creates the output directory and writes the effective-config echo.
fn prepare_out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg
        .paths
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("verity-out"));
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let echo = dir.join("effective.cfg");
    std::fs::write(&echo, cfg.to_config_string()).map_err(|e| Error::io(&echo, e))?;
    Ok(dir)
}

fn load_corpus(cfg: &RunConfig, path: &Path) -> Result<LabeledCorpus> {
    let format = match &cfg.paths.format {
        Some(name) => DatasetFormat::from_name(name)?,
        None => DatasetFormat::from_path(path),
    };
    load_dataset(path, format)
}

fn require_path<'a>(path: &'a Option<PathBuf>, what: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::Config(format!("no {what} path configured")))
}

fn require_labels(corpus: &LabeledCorpus) -> Result<Vec<Label>> {
    corpus
        .iter()
        .map(|d| {
            d.label
                .ok_or_else(|| Error::Validation(format!("document `{}` has no label", d.id)))
        })
        .collect()
}

fn run_ingest(cfg: &RunConfig) -> Result<()> {
    prepare_out_dir(cfg)?;
    let path = require_path(&cfg.paths.data, "data")?;
    let corpus = load_corpus(cfg, path)?;
    let counts = corpus.class_counts();
    let sources: HashSet<&str> = corpus.iter().map(|d| d.source.as_str()).collect();
    println!("documents: {}", corpus.len());
    println!("credible: {}", counts.credible);
    println!("fake: {}", counts.fake);
    println!("unlabeled: {}", counts.unlabeled);
    println!("sources: {}", sources.len());
    Ok(())
}

fn run_split(cfg: &RunConfig) -> Result<()> {
    let dir = prepare_out_dir(cfg)?;
    let path = require_path(&cfg.paths.data, "data")?;
    let corpus = load_corpus(cfg, path)?;
    let spec = SplitSpec::new(cfg.split.train_fraction, cfg.seed, cfg.split.stratified)?;
    let (train, test) = split_corpus(&corpus, &spec)?;
    let train_path = dir.join("train.jsonl");
    let test_path = dir.join("test.jsonl");
    save_jsonl(&train, &train_path)?;
    save_jsonl(&test, &test_path)?;
    println!(
        "train: {} documents -> {}",
        train.len(),
        train_path.display()
    );
    println!("test: {} documents -> {}", test.len(), test_path.display());
    Ok(())
}

fn run_train_embeddings(cfg: &RunConfig) -> Result<()> {
    let dir = prepare_out_dir(cfg)?;
    let path = require_path(&cfg.paths.background, "background corpus")?;
    let sentences = load_background_corpus(path)?;
    let table = train_embeddings(&sentences, &cfg.embeddings)?;
    let out = dir.join("embeddings.txt");
    table.save(&out)?;
    println!(
        "trained {} vectors of dimension {} -> {}",
        table.len(),
        table.dim(),
        out.display()
    );
    Ok(())
}

fn run_rank_features(cfg: &RunConfig) -> Result<()> {
    let dir = prepare_out_dir(cfg)?;
    let path = require_path(&cfg.paths.data, "data")?;
    let corpus = load_corpus(cfg, path)?;
    let labels = require_labels(&corpus)?;
    let resources = ResourceSet::load(cfg)?;
    let data: Vec<(Vec<f64>, Label)> = corpus
        .iter()
        .zip(&labels)
        .map(|(doc, &label)| {
            let tokens = crate::textproc::tokenize(&doc.text(cfg.features.include_title));
            let block = crate::lexfeatures::credibility_features(
                &tokens,
                &resources.pronouns,
                &resources.sentiment,
            );
            (block.values().to_vec(), label)
        })
        .collect();
    let names: Vec<&str> = CREDIBILITY_FEATURE_NAMES.to_vec();
    let ranking = feature_importance(&data, &names, cfg.rank.metric, &cfg.rank.lvq)?;
    let out = dir.join("ranking.csv");
    ranking.write_csv(&out)?;
    print!("{}", ranking.to_csv_string());
    println!("# written to {}", out.display());
    Ok(())
}

fn run_train(cfg: &RunConfig) -> Result<()> {
    let path = require_path(&cfg.paths.train, "training data")?;
    let corpus = load_corpus(cfg, path)?;
    let labels = require_labels(&corpus)?;
    let resources = ResourceSet::load(cfg)?;
    let pipeline = resources.pipeline(cfg, cfg.features.groups);
    let vocab = pipeline.build_vocabulary(&corpus)?;
    let features = pipeline.extract_corpus(&corpus, vocab.as_ref())?;
    let model = fit(&features, &labels, &cfg.train)?;

    // Echo the paths the artifacts land at so `predict --config
    // effective.cfg` can pick them up directly.
    let mut cfg_echo = cfg.clone();
    let dir = cfg
        .paths
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("verity-out"));
    let model_path = dir.join("model.txt");
    cfg_echo.paths.model = Some(model_path.clone());
    let vocab_path = dir.join("vocabulary.txt");
    if vocab.is_some() {
        cfg_echo.paths.vocabulary = Some(vocab_path.clone());
    }
    prepare_out_dir(&cfg_echo)?;

    model.save(&model_path)?;
    if let Some(v) = &vocab {
        v.save(&vocab_path)?;
    }
    println!(
        "trained on {} documents; dimension {} ({} nonzero weights)",
        corpus.len(),
        model.layout.total(),
        model.nonzero_weights()
    );
    println!(
        "iterations: {} converged: {} final objective: {:.6}",
        model.meta.iterations, model.meta.converged, model.meta.final_loss
    );
    println!("model -> {}", model_path.display());
    if vocab.is_some() {
        println!("vocabulary -> {}", vocab_path.display());
    }
    Ok(())
}

/// Unique test-set names from file stems.
fn testset_names(paths: &[PathBuf]) -> Vec<String> {
    let mut used: HashSet<String> = HashSet::new();
    paths
        .iter()
        .map(|p| {
            let stem = p
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("test")
                .to_string();
            let mut name = stem.clone();
            let mut i = 2;
            while !used.insert(name.clone()) {
                name = format!("{stem}_{i}");
                i += 1;
            }
            name
        })
        .collect()
}

fn run_evaluate(cfg: &RunConfig) -> Result<()> {
    let dir = prepare_out_dir(cfg)?;
    let train_path = require_path(&cfg.paths.train, "training data")?;
    if cfg.paths.test.is_empty() {
        return Err(Error::Config(
            "evaluate needs at least one --test file".into(),
        ));
    }
    let train = load_corpus(cfg, train_path)?;
    let names = testset_names(&cfg.paths.test);
    let mut tests = Vec::new();
    for (name, path) in names.iter().zip(&cfg.paths.test) {
        tests.push((name.clone(), load_corpus(cfg, path)?));
    }
    let resources = ResourceSet::load(cfg)?;
    let pipeline = resources.pipeline(cfg, cfg.features.groups);
    let (report, models) = evaluate_matrix(
        &train,
        &tests,
        &cfg.features.group_sets,
        &pipeline,
        &cfg.train,
    )?;
    let out = dir.join("evaluation.csv");
    report.write_csv(&out)?;
    for (label, model) in &models {
        let path = dir.join(format!("model_{}.txt", label.replace('+', "_")));
        model.save(&path)?;
    }
    print!("{}", report.to_csv_string());
    println!("# written to {}", out.display());
    Ok(())
}

fn run_cv(cfg: &RunConfig) -> Result<()> {
    let dir = prepare_out_dir(cfg)?;
    let path = require_path(&cfg.paths.data, "data")?;
    let corpus = load_corpus(cfg, path)?;
    let resources = ResourceSet::load(cfg)?;
    let pipeline = resources.pipeline(cfg, cfg.features.groups);
    let cv = kfold_cv(&corpus, cfg.cv_k, &cfg.train, &pipeline, cfg.seed)?;
    let mut csv = String::from("fold,accuracy\n");
    for (i, acc) in cv.fold_accuracies.iter().enumerate() {
        csv.push_str(&format!("{i},{acc:.6}\n"));
        println!("fold {i}: {acc:.4}");
    }
    csv.push_str(&format!("mean,{:.6}\n", cv.mean_accuracy));
    println!("mean accuracy: {:.4}", cv.mean_accuracy);
    let out = dir.join("cv.csv");
    std::fs::write(&out, csv).map_err(|e| Error::io(&out, e))?;
    println!("# written to {}", out.display());
    Ok(())
}

fn run_grid_search(cfg: &RunConfig) -> Result<()> {
    let dir = prepare_out_dir(cfg)?;
    let path = require_path(&cfg.paths.data, "data")?;
    let corpus = load_corpus(cfg, path)?;
    let resources = ResourceSet::load(cfg)?;
    let pipeline = resources.pipeline(cfg, cfg.features.groups);
    let grid = Grid {
        lambdas: cfg.grid.lambdas.clone(),
        alphas: cfg.grid.alphas.clone(),
        max_iters: cfg.grid.max_iters.clone(),
        group_sets: cfg.grid.group_sets.clone(),
        masks: cfg.grid.masks.clone(),
    };
    let result = grid_search(&corpus, &grid, cfg.cv_k, &pipeline, &cfg.train, cfg.seed)?;
    let out = dir.join("grid.csv");
    result.write_csv(&out)?;
    println!(
        "best: {} (cv accuracy {:.4}) over {} cells",
        result.best.describe(),
        result.best_accuracy,
        result.table.len()
    );
    println!("# written to {}", out.display());
    Ok(())
}

fn run_predict(cfg: &RunConfig) -> Result<()> {
    let dir = prepare_out_dir(cfg)?;
    let model_path = require_path(&cfg.paths.model, "model")?;
    let input_path = require_path(&cfg.paths.input, "input")?;
    let model = Model::load(model_path)?;
    let corpus = load_corpus(cfg, input_path)?;
    let resources = ResourceSet::load(cfg)?;

    let groups = FeatureGroups {
        credibility: model.layout.credibility > 0,
        linguistic: model.layout.linguistic > 0,
        semantic: model.layout.semantic > 0,
    };
    let vocab = if groups.linguistic {
        let vpath = require_path(&cfg.paths.vocabulary, "vocabulary")?;
        let vocab = Vocabulary::load(vpath)?;
        if vocab.len() + 2 != model.layout.linguistic {
            return Err(Error::Shape(format!(
                "vocabulary has {} entries but the model expects a linguistic block of {}",
                vocab.len(),
                model.layout.linguistic
            )));
        }
        Some(vocab)
    } else {
        None
    };
    let pipeline = resources.pipeline(cfg, groups);
    if groups.credibility && pipeline.mask.count() != model.layout.credibility {
        return Err(Error::Shape(format!(
            "mask selects {} features but the model expects {}",
            pipeline.mask.count(),
            model.layout.credibility
        )));
    }

    let mut csv = String::from("id,probability,label\n");
    for doc in corpus.iter() {
        let fv = pipeline.extract(doc, vocab.as_ref())?;
        let proba = model.predict_proba(&fv)?;
        let label = model.predict(&fv)?;
        csv.push_str(&format!("{},{proba:.6},{label}\n", doc.id));
    }
    let out = dir.join("predictions.csv");
    std::fs::write(&out, &csv).map_err(|e| Error::io(&out, e))?;
    print!("{csv}");
    println!("# written to {}", out.display());
    Ok(())
}

fn run_feature_summary(cfg: &RunConfig) -> Result<()> {
    let dir = prepare_out_dir(cfg)?;
    let path = require_path(&cfg.paths.data, "data")?;
    let corpus = load_corpus(cfg, path)?;
    let resources = ResourceSet::load(cfg)?;
    let pipeline = resources.pipeline(cfg, FeatureGroups::CREDIBILITY);
    let names: Vec<&str> = cfg.summary_features.iter().map(String::as_str).collect();
    let summaries = distribution_summary(&corpus, &names, &pipeline)?;
    let csv = summaries_to_csv(&summaries);
    let out = dir.join("feature_summary.csv");
    std::fs::write(&out, &csv).map_err(|e| Error::io(&out, e))?;
    print!("{csv}");
    println!("# written to {}", out.display());
    Ok(())
}
