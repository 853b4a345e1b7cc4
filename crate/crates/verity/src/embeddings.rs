//! Word embeddings trained on a background corpus, and document vectors
//! built by averaging word vectors.
//!
//! Training is skip-gram (default) or CBOW with negative sampling.
//! For every center/context pair within the window the objective is
//! `log σ(u_ctx · v_cen) + Σ_k log σ(−u_neg · v_cen)`, negatives drawn
//! from the unigram distribution raised to 0.75. The learning rate
//! decays linearly to 1e-4 of its initial value over the planned number
//! of word updates.
//!
//! With `workers = 1` training is fully deterministic for a fixed seed.
//! With more workers the weight matrices are shared without
//! synchronization (hogwild-style, via relaxed atomics), so results may
//! differ numerically from run to run while preserving the same
//! statistical behaviour.

use std::collections::HashMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::textproc::{case_fold, StopList, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmbeddingModel {
    #[default]
    SkipGram,
    Cbow,
}

impl EmbeddingModel {
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "skipgram" => Ok(EmbeddingModel::SkipGram),
            "cbow" => Ok(EmbeddingModel::Cbow),
            other => Err(Error::Config(format!(
                "unknown embedding model `{other}` (expected skipgram or cbow)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EmbeddingModel::SkipGram => "skipgram",
            EmbeddingModel::Cbow => "cbow",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingConfig {
    pub model: EmbeddingModel,
    pub dim: usize,
    pub window: usize,
    pub negative: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub min_count: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            model: EmbeddingModel::SkipGram,
            dim: 100,
            window: 5,
            negative: 5,
            epochs: 5,
            learning_rate: 0.025,
            min_count: 5,
            seed: 42,
            workers: 1,
        }
    }
}

impl EmbeddingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::Config("embedding dim must be >= 1".into()));
        }
        if self.window < 1 {
            return Err(Error::Config("window must be >= 1".into()));
        }
        if self.negative < 1 {
            return Err(Error::Config("negative sample count must be >= 1".into()));
        }
        if self.epochs < 1 {
            return Err(Error::Config("epochs must be >= 1".into()));
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(Error::Config(
                "learning rate must be a positive number".into(),
            ));
        }
        if self.workers < 1 {
            return Err(Error::Config("workers must be >= 1".into()));
        }
        Ok(())
    }

    fn fingerprint(&self) -> String {
        format!(
            "{} d={} window={} negative={} epochs={} lr={} min_count={} seed={} workers={}",
            self.model.name(),
            self.dim,
            self.window,
            self.negative,
            self.epochs,
            self.learning_rate,
            self.min_count,
            self.seed,
            self.workers
        )
    }
}

/// Vocabulary-indexed matrix of word vectors.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dim: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    vectors: Vec<f64>,
    /// Training provenance; absent on tables loaded from files.
    pub fingerprint: Option<String>,
}

impl EmbeddingTable {
    pub fn from_vectors(dim: usize, entries: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if dim < 1 {
            return Err(Error::Config("embedding dim must be >= 1".into()));
        }
        let mut words = Vec::with_capacity(entries.len());
        let mut index = HashMap::with_capacity(entries.len());
        let mut vectors = Vec::with_capacity(entries.len() * dim);
        for (word, vec) in entries {
            if vec.len() != dim {
                return Err(Error::Shape(format!(
                    "vector for `{word}` has {} components, expected {dim}",
                    vec.len()
                )));
            }
            if vec.iter().any(|v| !v.is_finite()) {
                return Err(Error::Validation(format!("non-finite vector for `{word}`")));
            }
            // The text format is whitespace-delimited.
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(Error::Validation(format!(
                    "word `{word}` is empty or contains whitespace"
                )));
            }
            if index.insert(word.clone(), words.len()).is_some() {
                return Err(Error::Validation(format!("duplicate word `{word}`")));
            }
            words.push(word);
            vectors.extend_from_slice(&vec);
        }
        Ok(EmbeddingTable {
            dim,
            words,
            index,
            vectors,
            fingerprint: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index.get(word).map(|&i| self.row(i))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    /// Text format: first line `|V| d`, then one `word v1 .. vd` line
    /// per word. Components are written with 17 significant digits so
    /// the round trip is exact.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.len(), self.dim));
        for (i, word) in self.words.iter().enumerate() {
            out.push_str(word);
            for v in self.row(i) {
                out.push_str(&format!(" {v:.17e}"));
            }
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let p = path.display().to_string();
        let mut lines = content.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(&p, 1, "empty embedding file"))?;
        let mut parts = header.split_whitespace();
        let (count, dim) = match (parts.next(), parts.next(), parts.next()) {
            (Some(c), Some(d), None) => {
                let count: usize = c
                    .parse()
                    .map_err(|_| Error::parse(&p, 1, "bad vocabulary size in header"))?;
                let dim: usize = d
                    .parse()
                    .map_err(|_| Error::parse(&p, 1, "bad dimension in header"))?;
                (count, dim)
            }
            _ => return Err(Error::parse(&p, 1, "expected header `|V| d`")),
        };
        let mut entries = Vec::with_capacity(count);
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let word = fields
                .next()
                .ok_or_else(|| Error::parse(&p, lineno, "missing word"))?;
            let vec: Vec<f64> = fields
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| Error::parse(&p, lineno, format!("bad component `{f}`")))
                })
                .collect::<Result<_>>()?;
            if vec.len() != dim {
                return Err(Error::parse(
                    &p,
                    lineno,
                    format!("row has {} components, header says {dim}", vec.len()),
                ));
            }
            entries.push((word.to_string(), vec));
        }
        if entries.len() != count {
            return Err(Error::parse(
                &p,
                entries.len() + 1,
                format!("header declares {count} words, file has {}", entries.len()),
            ));
        }
        Self::from_vectors(dim, entries)
    }
}

/// Mean of the vectors of case-folded, stop-filtered Word tokens found
/// in the table; the zero vector when nothing matches.
pub fn doc_vector(tokens: &[Token], table: &EmbeddingTable, stops: &StopList) -> Vec<f64> {
    let mut sum = vec![0.0; table.dim()];
    let mut n = 0usize;
    for token in tokens {
        if token.kind != TokenKind::Word {
            continue;
        }
        let folded = case_fold(&token.text);
        if stops.contains(&folded) {
            continue;
        }
        if let Some(row) = table.get(&folded) {
            for (s, v) in sum.iter_mut().zip(row) {
                *s += v;
            }
            n += 1;
        }
    }
    if n > 0 {
        let inv = 1.0 / n as f64;
        for s in &mut sum {
            *s *= inv;
        }
    }
    sum
}

/// Reads a background corpus: plain text, one document per line.
/// Tokens are the case-folded Word tokens of each line.
pub fn load_background_corpus(path: &Path) -> Result<Vec<Vec<String>>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(content
        .lines()
        .map(|line| {
            crate::textproc::tokenize(line)
                .into_iter()
                .filter(|t| t.kind == TokenKind::Word)
                .map(|t| case_fold(&t.text))
                .collect()
        })
        .filter(|s: &Vec<String>| !s.is_empty())
        .collect())
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

/// Loss of one skip-gram pair with explicit negatives:
/// `-ln σ(v·u_ctx) - Σ ln σ(-v·u_neg)`.
pub fn pair_loss(center: &[f64], context: &[f64], negatives: &[Vec<f64>]) -> f64 {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut loss = softplus(-dot(center, context));
    for neg in negatives {
        loss += softplus(dot(center, neg));
    }
    loss
}

/// Analytic gradients of [`pair_loss`] with respect to the center
/// vector, the context vector and each negative vector.
pub fn pair_gradients(
    center: &[f64],
    context: &[f64],
    negatives: &[Vec<f64>],
) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let dim = center.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let s_pos = sigmoid(dot(center, context));
    let mut g_center: Vec<f64> = context.iter().map(|&u| (s_pos - 1.0) * u).collect();
    let g_context: Vec<f64> = center.iter().map(|&v| (s_pos - 1.0) * v).collect();

    let mut g_negatives = Vec::with_capacity(negatives.len());
    for neg in negatives {
        let s_neg = sigmoid(dot(center, neg));
        for j in 0..dim {
            g_center[j] += s_neg * neg[j];
        }
        g_negatives.push(center.iter().map(|&v| s_neg * v).collect());
    }
    (g_center, g_context, g_negatives)
}

// ---------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------

/// f64 matrix stored as relaxed atomics so worker threads can share it
/// without locks. Single-worker runs are exact and deterministic.
struct SharedMatrix {
    data: Vec<AtomicU64>,
    dim: usize,
}

impl SharedMatrix {
    fn new(rows: usize, dim: usize) -> Self {
        let mut data = Vec::with_capacity(rows * dim);
        data.resize_with(rows * dim, || AtomicU64::new(0f64.to_bits()));
        SharedMatrix { data, dim }
    }

    #[inline]
    fn get(&self, row: usize, j: usize) -> f64 {
        f64::from_bits(self.data[row * self.dim + j].load(Ordering::Relaxed))
    }

    #[inline]
    fn set(&self, row: usize, j: usize, v: f64) {
        self.data[row * self.dim + j].store(v.to_bits(), Ordering::Relaxed);
    }

    #[inline]
    fn add(&self, row: usize, j: usize, delta: f64) {
        self.set(row, j, self.get(row, j) + delta);
    }

    fn snapshot_row(&self, row: usize, out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.get(row, j);
        }
    }

    fn to_vec(&self) -> Vec<f64> {
        self.data
            .iter()
            .map(|a| f64::from_bits(a.load(Ordering::Relaxed)))
            .collect()
    }
}

/// Negative sampler over the unigram distribution raised to 0.75.
struct UnigramSampler {
    cumulative: Vec<f64>,
    total: f64,
}

impl UnigramSampler {
    fn new(counts: &[u64]) -> Self {
        let mut cumulative = Vec::with_capacity(counts.len());
        let mut total = 0.0;
        for &c in counts {
            total += (c as f64).powf(0.75);
            cumulative.push(total);
        }
        UnigramSampler { cumulative, total }
    }

    fn sample(&self, rng: &mut Rng) -> usize {
        let r = rng.next_f64() * self.total;
        self.cumulative
            .partition_point(|&c| c <= r)
            .min(self.cumulative.len() - 1)
    }
}

struct TrainState<'a> {
    input: &'a SharedMatrix,
    output: &'a SharedMatrix,
    sampler: &'a UnigramSampler,
    processed: &'a AtomicU64,
    total_words: u64,
    config: &'a EmbeddingConfig,
}

/// Trains word vectors on pre-tokenized sentences.
pub fn train_embeddings(
    corpus: &[Vec<String>],
    config: &EmbeddingConfig,
) -> Result<EmbeddingTable> {
    config.validate()?;

    // Vocabulary: words at or above min_count, ordered by descending
    // count then word, so indices are deterministic.
    let mut counts_map: HashMap<&str, u64> = HashMap::new();
    for sentence in corpus {
        for word in sentence {
            *counts_map.entry(word.as_str()).or_insert(0) += 1;
        }
    }
    let mut vocab: Vec<(&str, u64)> = counts_map
        .into_iter()
        .filter(|&(_, c)| c >= config.min_count)
        .collect();
    vocab.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    if vocab.is_empty() {
        return Err(Error::Validation(
            "no words survive min_count filtering; nothing to train on".into(),
        ));
    }
    let index: HashMap<&str, usize> = vocab
        .iter()
        .enumerate()
        .map(|(i, &(w, _))| (w, i))
        .collect();
    let counts: Vec<u64> = vocab.iter().map(|&(_, c)| c).collect();

    // Sentences mapped to vocabulary ids; out-of-vocabulary words drop out.
    let sentences: Vec<Vec<u32>> = corpus
        .iter()
        .map(|s| {
            s.iter()
                .filter_map(|w| index.get(w.as_str()).map(|&i| i as u32))
                .collect::<Vec<u32>>()
        })
        .filter(|s| !s.is_empty())
        .collect();
    let words_per_epoch: u64 = sentences.iter().map(|s| s.len() as u64).sum();
    let total_words = words_per_epoch * config.epochs as u64;

    let input = SharedMatrix::new(vocab.len(), config.dim);
    let output = SharedMatrix::new(vocab.len(), config.dim);
    let mut init_rng = Rng::for_component(config.seed, "embeddings.init");
    for r in 0..vocab.len() {
        for j in 0..config.dim {
            input.set(r, j, (init_rng.next_f64() - 0.5) / config.dim as f64);
        }
    }

    let sampler = UnigramSampler::new(&counts);
    let processed = AtomicU64::new(0);
    let state = TrainState {
        input: &input,
        output: &output,
        sampler: &sampler,
        processed: &processed,
        total_words,
        config,
    };

    let workers = config.workers.min(sentences.len()).max(1);
    if workers == 1 {
        let rng = Rng::for_component(config.seed, "embeddings.worker0");
        run_worker(&state, &sentences, rng);
    } else {
        std::thread::scope(|scope| {
            let chunk = sentences.len().div_ceil(workers);
            for (w, part) in sentences.chunks(chunk).enumerate() {
                let rng = Rng::for_component(config.seed, &format!("embeddings.worker{w}"));
                let state = &state;
                scope.spawn(move || run_worker(state, part, rng));
            }
        });
    }

    let vectors = input.to_vec();
    Ok(EmbeddingTable {
        dim: config.dim,
        words: vocab.iter().map(|&(w, _)| w.to_string()).collect(),
        index: vocab
            .iter()
            .enumerate()
            .map(|(i, &(w, _))| (w.to_string(), i))
            .collect(),
        vectors,
        fingerprint: Some(config.fingerprint()),
    })
}

fn run_worker(state: &TrainState<'_>, sentences: &[Vec<u32>], mut rng: Rng) {
    let cfg = state.config;
    let floor = cfg.learning_rate * 1e-4;
    for _ in 0..cfg.epochs {
        for sentence in sentences {
            let done = state
                .processed
                .fetch_add(sentence.len() as u64, Ordering::Relaxed);
            let progress = done as f64 / state.total_words as f64;
            let alpha = (cfg.learning_rate * (1.0 - progress)).max(floor);
            match cfg.model {
                EmbeddingModel::SkipGram => train_sentence_sg(state, sentence, alpha, &mut rng),
                EmbeddingModel::Cbow => train_sentence_cbow(state, sentence, alpha, &mut rng),
            }
        }
    }
}

fn train_sentence_sg(state: &TrainState<'_>, sentence: &[u32], alpha: f64, rng: &mut Rng) {
    let cfg = state.config;
    let dim = cfg.dim;
    let mut v = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    for t in 0..sentence.len() {
        let center = sentence[t] as usize;
        let b = rng.next_range_inclusive(1, cfg.window);
        let lo = t.saturating_sub(b);
        let hi = (t + b).min(sentence.len() - 1);
        for (pos, &ctx_word) in sentence.iter().enumerate().take(hi + 1).skip(lo) {
            if pos == t {
                continue;
            }
            let ctx = ctx_word as usize;
            state.input.snapshot_row(center, &mut v);
            err.fill(0.0);
            update_against_target(state, &v, &mut err, ctx, 1.0, alpha);
            for _ in 0..cfg.negative {
                let neg = state.sampler.sample(rng);
                if neg == ctx {
                    continue;
                }
                update_against_target(state, &v, &mut err, neg, 0.0, alpha);
            }
            for (j, &e) in err.iter().enumerate() {
                state.input.add(center, j, e);
            }
        }
    }
}

fn train_sentence_cbow(state: &TrainState<'_>, sentence: &[u32], alpha: f64, rng: &mut Rng) {
    let cfg = state.config;
    let dim = cfg.dim;
    let mut h = vec![0.0; dim];
    let mut row = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    for t in 0..sentence.len() {
        let center = sentence[t] as usize;
        let b = rng.next_range_inclusive(1, cfg.window);
        let lo = t.saturating_sub(b);
        let hi = (t + b).min(sentence.len() - 1);
        let ctx_positions: Vec<usize> = (lo..=hi).filter(|&p| p != t).collect();
        if ctx_positions.is_empty() {
            continue;
        }
        h.fill(0.0);
        for &pos in &ctx_positions {
            state.input.snapshot_row(sentence[pos] as usize, &mut row);
            for j in 0..dim {
                h[j] += row[j];
            }
        }
        let inv = 1.0 / ctx_positions.len() as f64;
        for x in &mut h {
            *x *= inv;
        }
        err.fill(0.0);
        update_against_target(state, &h, &mut err, center, 1.0, alpha);
        for _ in 0..cfg.negative {
            let neg = state.sampler.sample(rng);
            if neg == center {
                continue;
            }
            update_against_target(state, &h, &mut err, neg, 0.0, alpha);
        }
        for &pos in &ctx_positions {
            let word = sentence[pos] as usize;
            for (j, &e) in err.iter().enumerate() {
                state.input.add(word, j, e);
            }
        }
    }
}

/// One positive/negative step: accumulates the input-side error in
/// `err` and updates the target's output vector in place.
fn update_against_target(
    state: &TrainState<'_>,
    v: &[f64],
    err: &mut [f64],
    target: usize,
    label: f64,
    alpha: f64,
) {
    let mut dot = 0.0;
    for (j, &vj) in v.iter().enumerate() {
        dot += vj * state.output.get(target, j);
    }
    let g = (label - sigmoid(dot)) * alpha;
    for (j, (e, &vj)) in err.iter_mut().zip(v).enumerate() {
        let u = state.output.get(target, j);
        *e += g * u;
        state.output.set(target, j, u + g * vj);
    }
}
