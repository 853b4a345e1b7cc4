//! Run configuration: a flat `key = value` text format with `[section]`
//! headers and `#` comments, chosen for diff-friendliness and
//! zero-dependency parsing.
//!
//! Unknown sections or keys are errors (no silent ignoring); every
//! value error names its key. Command-line flags override file values,
//! and each run echoes its effective configuration into the output
//! directory so a run can be reproduced bit-for-bit from the echo.

use std::path::{Path, PathBuf};

use crate::embeddings::{EmbeddingConfig, EmbeddingModel, EmbeddingTable};
use crate::error::{Error, Result};
use crate::learner::TrainConfig;
use crate::lexfeatures::{
    FeatureGroups, FeatureMask, FeaturePipeline, NgramOrders, PronounLexicon, SentimentLexicon,
    Weighting,
};
use crate::selection::{ImportanceMetric, LvqConfig};
use crate::textproc::StopList;

pub const SEED_ENV_VAR: &str = "VERITY_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Default)]
pub struct PathsConfig {
    pub train: Option<PathBuf>,
    pub test: Vec<PathBuf>,
    pub data: Option<PathBuf>,
    pub background: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub pronouns: Option<PathBuf>,
    pub sentiment: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub vocabulary: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    /// Dataset format override; by default the file extension decides.
    pub format: Option<String>,
}

#[derive(Debug, Clone)]
pub struct FeaturesConfig {
    pub groups: FeatureGroups,
    /// Group combinations for `evaluate`, in report order.
    pub group_sets: Vec<FeatureGroups>,
    pub mask: FeatureMask,
    pub weighting: Weighting,
    pub orders: NgramOrders,
    pub min_df: usize,
    pub include_title: bool,
}

impl Default for FeaturesConfig {
    fn default() -> Self {
        FeaturesConfig {
            groups: FeatureGroups::ALL,
            group_sets: default_group_sets(),
            mask: FeatureMask::default_seven(),
            weighting: Weighting::TfIdf,
            orders: NgramOrders::default(),
            min_df: 2,
            include_title: true,
        }
    }
}

/// The six combinations of the reference accuracy grid.
fn default_group_sets() -> Vec<FeatureGroups> {
    [
        "all",
        "credibility+semantic",
        "credibility+linguistic",
        "semantic",
        "linguistic",
        "credibility",
    ]
    .iter()
    .map(|s| FeatureGroups::parse(s).expect("static group specs parse"))
    .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub stratified: bool,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            train_fraction: 0.7,
            stratified: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridConfig {
    pub lambdas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub max_iters: Vec<usize>,
    pub group_sets: Vec<FeatureGroups>,
    pub masks: Vec<FeatureMask>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            lambdas: vec![1e-4, 1e-3, 1e-2, 1e-1],
            alphas: vec![0.0, 0.5, 1.0],
            max_iters: vec![100],
            group_sets: vec![FeatureGroups::ALL],
            masks: vec![FeatureMask::default_seven()],
        }
    }
}

#[derive(Debug, Clone)]
pub struct RankConfig {
    pub metric: ImportanceMetric,
    pub lvq: LvqConfig,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            metric: ImportanceMetric::Lvq,
            lvq: LvqConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub language: String,
    pub paths: PathsConfig,
    pub features: FeaturesConfig,
    pub train: TrainConfig,
    pub embeddings: EmbeddingConfig,
    pub split: SplitConfig,
    pub cv_k: usize,
    pub grid: GridConfig,
    pub rank: RankConfig,
    pub summary_features: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            language: "bg".into(),
            paths: PathsConfig::default(),
            features: FeaturesConfig::default(),
            train: TrainConfig::default(),
            embeddings: EmbeddingConfig::default(),
            split: SplitConfig::default(),
            cv_k: 5,
            grid: GridConfig::default(),
            rank: RankConfig::default(),
            summary_features: crate::lexfeatures::CREDIBILITY_FEATURE_NAMES
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(section: &str, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        Error::Config(format!(
            "invalid value `{value}` for key `{key}`{}",
            in_section(section)
        ))
    })
}

fn parse_bool(section: &str, key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config(format!(
            "invalid value `{value}` for key `{key}`{} (expected true or false)",
            in_section(section)
        ))),
    }
}

fn in_section(section: &str) -> String {
    if section.is_empty() {
        String::new()
    } else {
        format!(" in section [{section}]")
    }
}

fn split_list(value: &str, sep: char) -> impl Iterator<Item = &str> {
    value.split(sep).map(str::trim).filter(|s| !s.is_empty())
}

impl RunConfig {
    /// Defaults overlaid with the file at `path`.
    pub fn load(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = RunConfig::default();
        config.apply(&content)?;
        Ok(config)
    }

    /// Applies `key = value` lines onto the current values.
    pub fn apply(&mut self, content: &str) -> Result<()> {
        let mut section = String::new();
        for raw in content.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                match section.as_str() {
                    "paths" | "features" | "train" | "embeddings" | "split" | "cv" | "grid"
                    | "rank" | "summary" => {}
                    other => {
                        return Err(Error::Config(format!("unknown section `[{other}]`")));
                    }
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected `key = value`, got `{line}`")))?;
            self.set(&section, key.trim(), value.trim())?;
        }
        Ok(())
    }

    fn set(&mut self, section: &str, key: &str, value: &str) -> Result<()> {
        match (section, key) {
            ("", "seed") => self.seed = parse_num(section, key, value)?,
            ("", "language") => self.language = value.to_string(),

            ("paths", "train") => self.paths.train = Some(value.into()),
            ("paths", "test") => {
                self.paths.test = split_list(value, ',').map(PathBuf::from).collect()
            }
            ("paths", "data") => self.paths.data = Some(value.into()),
            ("paths", "background") => self.paths.background = Some(value.into()),
            ("paths", "stopwords") => self.paths.stopwords = Some(value.into()),
            ("paths", "pronouns") => self.paths.pronouns = Some(value.into()),
            ("paths", "sentiment") => self.paths.sentiment = Some(value.into()),
            ("paths", "embeddings") => self.paths.embeddings = Some(value.into()),
            ("paths", "model") => self.paths.model = Some(value.into()),
            ("paths", "vocabulary") => self.paths.vocabulary = Some(value.into()),
            ("paths", "input") => self.paths.input = Some(value.into()),
            ("paths", "out_dir") => self.paths.out_dir = Some(value.into()),
            ("paths", "format") => {
                crate::corpus::DatasetFormat::from_name(value)?;
                self.paths.format = Some(value.to_string());
            }

            ("features", "groups") => self.features.groups = FeatureGroups::parse(value)?,
            ("features", "group_sets") => {
                self.features.group_sets = split_list(value, ';')
                    .map(FeatureGroups::parse)
                    .collect::<Result<_>>()?
            }
            ("features", "mask") => self.features.mask = FeatureMask::parse(value)?,
            ("features", "weighting") => self.features.weighting = Weighting::parse(value)?,
            ("features", "orders") => self.features.orders = NgramOrders::parse(value)?,
            ("features", "min_df") => self.features.min_df = parse_num(section, key, value)?,
            ("features", "include_title") => {
                self.features.include_title = parse_bool(section, key, value)?
            }

            ("train", "lambda") => self.train.lambda = parse_num(section, key, value)?,
            ("train", "alpha") => self.train.alpha = parse_num(section, key, value)?,
            ("train", "max_iter") => self.train.max_iter = parse_num(section, key, value)?,
            ("train", "tolerance") => self.train.tolerance = parse_num(section, key, value)?,

            ("embeddings", "model") => self.embeddings.model = EmbeddingModel::parse(value)?,
            ("embeddings", "dim") => self.embeddings.dim = parse_num(section, key, value)?,
            ("embeddings", "window") => self.embeddings.window = parse_num(section, key, value)?,
            ("embeddings", "negative") => {
                self.embeddings.negative = parse_num(section, key, value)?
            }
            ("embeddings", "epochs") => self.embeddings.epochs = parse_num(section, key, value)?,
            ("embeddings", "learning_rate") => {
                self.embeddings.learning_rate = parse_num(section, key, value)?
            }
            ("embeddings", "min_count") => {
                self.embeddings.min_count = parse_num(section, key, value)?
            }
            ("embeddings", "workers") => self.embeddings.workers = parse_num(section, key, value)?,

            ("split", "train_fraction") => {
                self.split.train_fraction = parse_num(section, key, value)?
            }
            ("split", "stratified") => self.split.stratified = parse_bool(section, key, value)?,

            ("cv", "k") => self.cv_k = parse_num(section, key, value)?,

            ("grid", "lambdas") => {
                self.grid.lambdas = split_list(value, ',')
                    .map(|v| parse_num(section, key, v))
                    .collect::<Result<_>>()?
            }
            ("grid", "alphas") => {
                self.grid.alphas = split_list(value, ',')
                    .map(|v| parse_num(section, key, v))
                    .collect::<Result<_>>()?
            }
            ("grid", "max_iters") => {
                self.grid.max_iters = split_list(value, ',')
                    .map(|v| parse_num(section, key, v))
                    .collect::<Result<_>>()?
            }
            ("grid", "group_sets") => {
                self.grid.group_sets = split_list(value, ';')
                    .map(FeatureGroups::parse)
                    .collect::<Result<_>>()?
            }
            ("grid", "masks") => {
                self.grid.masks = split_list(value, ';')
                    .map(FeatureMask::parse)
                    .collect::<Result<_>>()?
            }

            ("rank", "metric") => self.rank.metric = ImportanceMetric::parse(value)?,
            ("rank", "epochs") => self.rank.lvq.epochs = parse_num(section, key, value)?,
            ("rank", "learning_rate") => {
                self.rank.lvq.learning_rate = parse_num(section, key, value)?
            }
            ("rank", "prototypes") => {
                self.rank.lvq.prototypes_per_class = parse_num(section, key, value)?
            }

            ("summary", "features") => {
                self.summary_features = split_list(value, ',').map(str::to_string).collect()
            }

            (_, key) => {
                return Err(Error::Config(format!(
                    "unknown key `{key}`{}",
                    in_section(section)
                )));
            }
        }
        Ok(())
    }

    /// Serializes every effective value back into the config format.
    /// `RunConfig::load` of the result reproduces this configuration.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("language = {}\n", self.language));

        out.push_str("\n[paths]\n");
        let path_str = |p: &PathBuf| p.display().to_string();
        let mut put_path = |key: &str, v: &Option<PathBuf>| {
            if let Some(p) = v {
                out.push_str(&format!("{key} = {}\n", path_str(p)));
            }
        };
        put_path("train", &self.paths.train);
        if !self.paths.test.is_empty() {
            let joined: Vec<String> = self.paths.test.iter().map(path_str).collect();
            out.push_str(&format!("test = {}\n", joined.join(", ")));
        }
        let mut put_path = |key: &str, v: &Option<PathBuf>| {
            if let Some(p) = v {
                out.push_str(&format!("{key} = {}\n", p.display()));
            }
        };
        put_path("data", &self.paths.data);
        put_path("background", &self.paths.background);
        put_path("stopwords", &self.paths.stopwords);
        put_path("pronouns", &self.paths.pronouns);
        put_path("sentiment", &self.paths.sentiment);
        put_path("embeddings", &self.paths.embeddings);
        put_path("model", &self.paths.model);
        put_path("vocabulary", &self.paths.vocabulary);
        put_path("input", &self.paths.input);
        put_path("out_dir", &self.paths.out_dir);
        if let Some(f) = &self.paths.format {
            out.push_str(&format!("format = {f}\n"));
        }

        out.push_str("\n[features]\n");
        out.push_str(&format!("groups = {}\n", self.features.groups.label()));
        let sets: Vec<String> = self.features.group_sets.iter().map(|g| g.label()).collect();
        out.push_str(&format!("group_sets = {}\n", sets.join("; ")));
        out.push_str(&format!("mask = {}\n", self.features.mask.to_spec_string()));
        out.push_str(&format!("weighting = {}\n", self.features.weighting.name()));
        out.push_str(&format!(
            "orders = {}\n",
            self.features.orders.to_spec_string()
        ));
        out.push_str(&format!("min_df = {}\n", self.features.min_df));
        out.push_str(&format!(
            "include_title = {}\n",
            self.features.include_title
        ));

        out.push_str("\n[train]\n");
        out.push_str(&format!("lambda = {}\n", self.train.lambda));
        out.push_str(&format!("alpha = {}\n", self.train.alpha));
        out.push_str(&format!("max_iter = {}\n", self.train.max_iter));
        out.push_str(&format!("tolerance = {}\n", self.train.tolerance));

        out.push_str("\n[embeddings]\n");
        out.push_str(&format!("model = {}\n", self.embeddings.model.name()));
        out.push_str(&format!("dim = {}\n", self.embeddings.dim));
        out.push_str(&format!("window = {}\n", self.embeddings.window));
        out.push_str(&format!("negative = {}\n", self.embeddings.negative));
        out.push_str(&format!("epochs = {}\n", self.embeddings.epochs));
        out.push_str(&format!(
            "learning_rate = {}\n",
            self.embeddings.learning_rate
        ));
        out.push_str(&format!("min_count = {}\n", self.embeddings.min_count));
        out.push_str(&format!("workers = {}\n", self.embeddings.workers));

        out.push_str("\n[split]\n");
        out.push_str(&format!("train_fraction = {}\n", self.split.train_fraction));
        out.push_str(&format!("stratified = {}\n", self.split.stratified));

        out.push_str("\n[cv]\n");
        out.push_str(&format!("k = {}\n", self.cv_k));

        out.push_str("\n[grid]\n");
        let join_f = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ");
        out.push_str(&format!("lambdas = {}\n", join_f(&self.grid.lambdas)));
        out.push_str(&format!("alphas = {}\n", join_f(&self.grid.alphas)));
        let iters: Vec<String> = self.grid.max_iters.iter().map(usize::to_string).collect();
        out.push_str(&format!("max_iters = {}\n", iters.join(", ")));
        let sets: Vec<String> = self.grid.group_sets.iter().map(|g| g.label()).collect();
        out.push_str(&format!("group_sets = {}\n", sets.join("; ")));
        let masks: Vec<String> = self.grid.masks.iter().map(|m| m.to_spec_string()).collect();
        out.push_str(&format!("masks = {}\n", masks.join("; ")));

        out.push_str("\n[rank]\n");
        out.push_str(&format!("metric = {}\n", self.rank.metric.name()));
        out.push_str(&format!("epochs = {}\n", self.rank.lvq.epochs));
        out.push_str(&format!(
            "learning_rate = {}\n",
            self.rank.lvq.learning_rate
        ));
        out.push_str(&format!(
            "prototypes = {}\n",
            self.rank.lvq.prototypes_per_class
        ));

        out.push_str("\n[summary]\n");
        out.push_str(&format!(
            "features = {}\n",
            self.summary_features.join(", ")
        ));
        out
    }

    /// Propagates the top-level seed into every seeded component.
    pub fn propagate_seed(&mut self) {
        self.train.seed = self.seed;
        self.embeddings.seed = self.seed;
        self.rank.lvq.seed = self.seed;
    }
}

/// Lexicons and embedding table resolved from a configuration: explicit
/// paths win, otherwise the builtin resources for `language` are used.
#[derive(Debug)]
pub struct ResourceSet {
    pub stops: StopList,
    pub pronouns: PronounLexicon,
    pub sentiment: SentimentLexicon,
    pub embeddings: Option<EmbeddingTable>,
}

impl ResourceSet {
    pub fn load(cfg: &RunConfig) -> Result<Self> {
        let stops = match &cfg.paths.stopwords {
            Some(p) => StopList::from_file(p, cfg.language.clone())?,
            None => StopList::builtin(&cfg.language)?,
        };
        let pronouns = match &cfg.paths.pronouns {
            Some(p) => PronounLexicon::from_file(p)?,
            None => PronounLexicon::builtin(&cfg.language)?,
        };
        let sentiment = match &cfg.paths.sentiment {
            Some(p) => SentimentLexicon::from_file(p)?,
            None => SentimentLexicon::builtin(&cfg.language)?,
        };
        let embeddings = match &cfg.paths.embeddings {
            Some(p) => Some(EmbeddingTable::load(p)?),
            None => None,
        };
        Ok(ResourceSet {
            stops,
            pronouns,
            sentiment,
            embeddings,
        })
    }

    pub fn pipeline<'a>(&'a self, cfg: &RunConfig, groups: FeatureGroups) -> FeaturePipeline<'a> {
        FeaturePipeline {
            groups,
            mask: cfg.features.mask.clone(),
            weighting: cfg.features.weighting,
            orders: cfg.features.orders,
            min_df: cfg.features.min_df,
            include_title: cfg.features.include_title,
            stops: &self.stops,
            pronouns: &self.pronouns,
            sentiment: &self.sentiment,
            embeddings: self.embeddings.as_ref(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn defaults_roundtrip_through_the_text_format() {
        let mut config = RunConfig::default();
        config.paths.train = Some("data/train.jsonl".into());
        config.paths.test = vec!["a.jsonl".into(), "b.csv".into()];
        config.paths.out_dir = Some("runs/x".into());
        let text = config.to_config_string();

        let mut reparsed = RunConfig::default();
        reparsed.apply(&text).unwrap();
        assert_eq!(reparsed.seed, config.seed);
        assert_eq!(reparsed.paths.train, config.paths.train);
        assert_eq!(reparsed.paths.test, config.paths.test);
        assert_eq!(reparsed.features.min_df, config.features.min_df);
        assert_eq!(reparsed.features.mask, config.features.mask);
        assert_eq!(reparsed.grid.lambdas, config.grid.lambdas);
        assert_eq!(reparsed.to_config_string(), text);
    }

    #[test]
    fn unknown_key_is_an_error_naming_the_key() {
        let mut config = RunConfig::default();
        let err = config.apply("[train]\nlamda = 0.1\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("lamda"), "message was: {msg}");
    }

    #[test]
    fn unknown_section_is_an_error() {
        let mut config = RunConfig::default();
        assert!(config.apply("[nope]\nx = 1\n").is_err());
    }

    #[test]
    fn invalid_value_error_names_the_key() {
        let mut config = RunConfig::default();
        let err = config.apply("[train]\nlambda = banana\n").unwrap_err();
        assert!(err.to_string().contains("lambda"));
    }

    #[test]
    fn later_values_override_earlier_ones() {
        let mut config = RunConfig::default();
        config.apply("[train]\nlambda = 0.01\n").unwrap();
        assert_eq!(config.train.lambda, 0.01);
        config.apply("[train]\nlambda = 0.1\n").unwrap();
        assert_eq!(config.train.lambda, 0.1);
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let mut config = RunConfig::default();
        config
            .apply("# top comment\n\nseed = 7  # trailing\n[cv]\nk = 3\n")
            .unwrap();
        assert_eq!(config.seed, 7);
        assert_eq!(config.cv_k, 3);
    }

    #[test]
    fn load_from_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "seed = 9\n[features]\ngroups = credibility").unwrap();
        let config = RunConfig::load(f.path()).unwrap();
        assert_eq!(config.seed, 9);
        assert_eq!(config.features.groups, FeatureGroups::CREDIBILITY);
    }

    #[test]
    fn seed_propagation() {
        let mut config = RunConfig {
            seed: 123,
            ..RunConfig::default()
        };
        config.propagate_seed();
        assert_eq!(config.train.seed, 123);
        assert_eq!(config.embeddings.seed, 123);
        assert_eq!(config.rank.lvq.seed, 123);
    }
}
