//! Run configuration: built-in defaults, optionally overlaid by a TOML file and `--set` pairs.

use std::path::Path;

use anyhow::{bail, Context, Result};
use motifgae::generate::GeneratorParams;
use motifgae::train::TrainConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    /// Nearest-rank percentile of training errors used as the flag threshold.
    pub threshold_percentile: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            threshold_percentile: 95.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub generator: GeneratorParams,
    pub train: TrainConfig,
    pub eval: EvalConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(cfg)
    }

    /// Applies `section.sub.field=value`; the value is read as JSON, falling back to a bare string.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .with_context(|| format!("override `{assignment}` is not key=value"))?;
        let key = key.trim();
        let mut doc = serde_json::to_value(&*self)?;
        let mut slot = &mut doc;
        for part in key.split('.') {
            slot = match slot.get_mut(part) {
                Some(s) => s,
                None => bail!("unknown config key `{key}`"),
            };
        }
        *slot = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
        *self = serde_json::from_value(doc).with_context(|| format!("bad value for `{key}`"))?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.generator.validate()?;
        self.train.validate()?;
        let p = self.eval.threshold_percentile;
        if !(p > 0.0 && p <= 100.0) {
            bail!("eval.threshold_percentile must be in (0, 100], got {p}");
        }
        Ok(())
    }

    pub fn resolve(file: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut cfg = match file {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        for o in overrides {
            cfg.set(o)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut c = RunConfig::default();
        c.set("generator.collector.noise_prob=0.1").unwrap();
        c.set("train.learning_rate = 0.005").unwrap();
        c.set("generator.sg.mid_range=[4,6]").unwrap();
        assert_eq!(c.generator.collector.noise_prob, 0.1);
        assert_eq!(c.train.learning_rate, 0.005);
        assert_eq!(c.generator.sg.mid_range.hi, 6);
        assert!(c.set("train.nope=1").is_err());
        assert!(c.set("train.batch_size=\"x\"").is_err());
        assert!(c.set("no_equals").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let c = RunConfig::default();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(toml::from_str::<RunConfig>(&text).unwrap(), c);
        let partial: RunConfig = toml::from_str("[train]\nmax_epochs = 5\n").unwrap();
        assert_eq!(partial.train.max_epochs, 5);
        assert_eq!(partial.generator, GeneratorParams::default());
    }
}
