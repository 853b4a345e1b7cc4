//! Versioned text serialization of fitted models. Floats are written
//! with 17 significant digits, so save/load round trips are exact and
//! identical runs produce byte-identical files.

use std::path::Path;

use super::{Model, StandardizationStats, TrainConfig, TrainMeta};
use crate::error::{Error, Result};
use crate::lexfeatures::BlockLayout;

const HEADER: &str = "verity model 1";

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

impl Model {
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        out.push_str(&format!(
            "layout {} {} {}\n",
            self.layout.credibility, self.layout.linguistic, self.layout.semantic
        ));
        out.push_str(&format!(
            "config lambda {} alpha {} max_iter {} tolerance {} seed {}\n",
            fmt(self.config.lambda),
            fmt(self.config.alpha),
            self.config.max_iter,
            fmt(self.config.tolerance),
            self.config.seed
        ));
        out.push_str(&format!("stats {}\n", self.stats.mean.len()));
        for i in 0..self.stats.mean.len() {
            out.push_str(&format!(
                "{} {} {}\n",
                fmt(self.stats.mean[i]),
                fmt(self.stats.stddev[i]),
                u8::from(self.stats.constant[i])
            ));
        }
        out.push_str(&format!("intercept {}\n", fmt(self.intercept)));
        out.push_str(&format!("weights {}\n", self.weights.len()));
        for w in &self.weights {
            out.push_str(&fmt(*w));
            out.push('\n');
        }
        out.push_str(&format!(
            "meta iterations {} converged {} final_loss {}\n",
            self.meta.iterations,
            u8::from(self.meta.converged),
            fmt(self.meta.final_loss)
        ));
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let p = path.display().to_string();
        let mut lines = content.lines().enumerate();

        let mut next = |expect: &str| -> Result<(usize, Vec<String>)> {
            let (i, line) = lines
                .next()
                .ok_or_else(|| Error::parse(&p, 0, format!("unexpected end, wanted {expect}")))?;
            Ok((i + 1, line.split_whitespace().map(str::to_string).collect()))
        };
        fn want<T: std::str::FromStr>(p: &str, line: usize, field: &str) -> Result<T> {
            field
                .parse()
                .map_err(|_| Error::parse(p, line, format!("bad value `{field}`")))
        }

        let (line, fields) = next("header")?;
        if fields.join(" ") != HEADER {
            return Err(Error::parse(&p, line, "expected header `verity model 1`"));
        }

        let (line, fields) = next("layout")?;
        if fields.len() != 4 || fields[0] != "layout" {
            return Err(Error::parse(&p, line, "malformed layout line"));
        }
        let layout = BlockLayout {
            credibility: want(&p, line, &fields[1])?,
            linguistic: want(&p, line, &fields[2])?,
            semantic: want(&p, line, &fields[3])?,
        };

        let (line, fields) = next("config")?;
        if fields.len() != 11 || fields[0] != "config" {
            return Err(Error::parse(&p, line, "malformed config line"));
        }
        let config = TrainConfig {
            lambda: want(&p, line, &fields[2])?,
            alpha: want(&p, line, &fields[4])?,
            max_iter: want(&p, line, &fields[6])?,
            tolerance: want(&p, line, &fields[8])?,
            seed: want(&p, line, &fields[10])?,
        };

        let (line, fields) = next("stats")?;
        if fields.len() != 2 || fields[0] != "stats" {
            return Err(Error::parse(&p, line, "malformed stats line"));
        }
        let n_stats: usize = want(&p, line, &fields[1])?;
        let mut stats = StandardizationStats {
            mean: Vec::with_capacity(n_stats),
            stddev: Vec::with_capacity(n_stats),
            constant: Vec::with_capacity(n_stats),
        };
        for _ in 0..n_stats {
            let (line, fields) = next("stats row")?;
            if fields.len() != 3 {
                return Err(Error::parse(&p, line, "expected `mean stddev constant`"));
            }
            stats.mean.push(want(&p, line, &fields[0])?);
            stats.stddev.push(want(&p, line, &fields[1])?);
            stats.constant.push(want::<u8>(&p, line, &fields[2])? != 0);
        }

        let (line, fields) = next("intercept")?;
        if fields.len() != 2 || fields[0] != "intercept" {
            return Err(Error::parse(&p, line, "malformed intercept line"));
        }
        let intercept: f64 = want(&p, line, &fields[1])?;

        let (line, fields) = next("weights")?;
        if fields.len() != 2 || fields[0] != "weights" {
            return Err(Error::parse(&p, line, "malformed weights line"));
        }
        let n_weights: usize = want(&p, line, &fields[1])?;
        if n_weights != layout.total() {
            return Err(Error::parse(
                &p,
                line,
                format!(
                    "weight count {n_weights} does not match layout total {}",
                    layout.total()
                ),
            ));
        }
        let mut weights = Vec::with_capacity(n_weights);
        for _ in 0..n_weights {
            let (line, fields) = next("weight")?;
            if fields.len() != 1 {
                return Err(Error::parse(&p, line, "expected one weight per line"));
            }
            weights.push(want(&p, line, &fields[0])?);
        }

        let (line, fields) = next("meta")?;
        if fields.len() != 7 || fields[0] != "meta" {
            return Err(Error::parse(&p, line, "malformed meta line"));
        }
        let meta = TrainMeta {
            iterations: want(&p, line, &fields[2])?,
            converged: want::<u8>(&p, line, &fields[4])? != 0,
            final_loss: want(&p, line, &fields[6])?,
            objective_trace: Vec::new(),
        };

        Ok(Model {
            weights,
            intercept,
            stats,
            config,
            layout,
            meta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{fit, TrainConfig};
    use super::*;
    use crate::corpus::Label;
    use crate::lexfeatures::FeatureVector;
    use crate::rng::Rng;

    fn training_data() -> (Vec<FeatureVector>, Vec<Label>) {
        let layout = BlockLayout {
            credibility: 3,
            linguistic: 0,
            semantic: 0,
        };
        let mut rng = Rng::new(4);
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..40 {
            let y = if i % 2 == 0 { 1.0 } else { -1.0 };
            features.push(FeatureVector {
                credibility: vec![
                    y + rng.next_f64() * 0.3,
                    rng.next_f64(),
                    -y * 0.5 + rng.next_f64() * 0.2,
                ],
                linguistic: Vec::new(),
                semantic: Vec::new(),
                layout,
            });
            labels.push(if y > 0.0 {
                Label::Fake
            } else {
                Label::Credible
            });
        }
        (features, labels)
    }

    #[test]
    fn save_load_roundtrip_is_exact() {
        let (features, labels) = training_data();
        let config = TrainConfig {
            lambda: 0.037,
            alpha: 0.64,
            ..TrainConfig::default()
        };
        let model = fit(&features, &labels, &config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        model.save(&path).unwrap();
        let loaded = Model::load(&path).unwrap();

        assert_eq!(loaded.weights, model.weights);
        assert_eq!(loaded.intercept, model.intercept);
        assert_eq!(loaded.stats, model.stats);
        assert_eq!(loaded.config, model.config);
        assert_eq!(loaded.layout, model.layout);
        assert_eq!(loaded.meta.iterations, model.meta.iterations);

        // Saving again gives byte-identical files.
        let path2 = dir.path().join("model2.txt");
        loaded.save(&path2).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            std::fs::read(&path2).unwrap()
        );

        // Predictions agree bit-for-bit.
        for fv in &features {
            assert_eq!(
                model.predict_proba(fv).unwrap().to_bits(),
                loaded.predict_proba(fv).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn malformed_files_are_rejected_with_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "not a model\n").unwrap();
        assert!(matches!(
            Model::load(&path),
            Err(Error::Parse { line: 1, .. })
        ));

        std::fs::write(&path, "verity model 1\nlayout 1 0\n").unwrap();
        assert!(matches!(
            Model::load(&path),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
