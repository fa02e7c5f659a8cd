use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bdg::ChainParams;
use crate::codes::{detection_intervals, CodeSpec};
use crate::error::{Error, Result};

/// Fully resolved run configuration; serialized verbatim into the sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[derive(Default)]
pub struct RunConfig {
    pub physics: PhysicsConfig,
    pub code: CodeConfig,
    pub noise: NoiseConfig,
    pub mc: McConfig,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsConfig {
    pub mu: f64,
    pub w: f64,
    pub delta: f64,
    pub n: usize,
    /// Uniform on-site disorder amplitude.
    pub dmu: f64,
    pub realizations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodeConfig {
    pub d: Vec<usize>,
    /// Detector inverse resolution; `max(d, 1)` per code when absent.
    pub lambda: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub q: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// Enumerate all error patterns instead of sampling.
    pub exhaustive: bool,
}


impl Default for PhysicsConfig {
    fn default() -> Self {
        PhysicsConfig {
            mu: 0.0,
            w: 1.0,
            delta: 1.0,
            n: 16,
            dmu: 0.0,
            realizations: 1,
        }
    }
}

impl Default for CodeConfig {
    fn default() -> Self {
        CodeConfig {
            d: vec![0, 1, 2],
            lambda: None,
        }
    }
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig { q: vec![0.05, 0.1] }
    }
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            samples: 10_000,
            seed: 1,
            exhaustive: false,
        }
    }
}

impl RunConfig {
    pub fn chain_params(&self) -> ChainParams {
        let p = &self.physics;
        ChainParams::new(p.mu, p.w, p.delta, p.n)
    }

    pub fn codes(&self) -> Result<Vec<CodeSpec>> {
        self.code
            .d
            .iter()
            .map(|&d| CodeSpec::new(self.physics.n, d, self.code.lambda.unwrap_or(d.max(1))))
            .collect()
    }

    /// Checks every grid and module precondition up front.
    pub fn validate(&self) -> Result<()> {
        let p = &self.physics;
        self.chain_params().validate()?;
        if !(p.dmu >= 0.0 && p.dmu.is_finite()) {
            return Err(Error::Config(format!("dmu must be a finite value >= 0, got {}", p.dmu)));
        }
        if p.realizations == 0 {
            return Err(Error::Config("realizations must be >= 1".into()));
        }
        if self.code.d.is_empty() {
            return Err(Error::Config("code.d grid is empty".into()));
        }
        if self.noise.q.is_empty() {
            return Err(Error::Config("noise.q grid is empty".into()));
        }
        if let Some(q) = self.noise.q.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(Error::Config(format!("q = {q} not in [0, 1]")));
        }
        for code in self.codes()? {
            detection_intervals(&code)?;
        }
        if !self.mc.exhaustive && self.mc.samples < 2 {
            return Err(Error::Config("mc.samples must be >= 2".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Deep-merges `overlay` into `base`; tables merge key by key, other values replace.
fn merge(base: &mut toml::Table, overlay: toml::Table) {
    for (k, v) in overlay {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// `base` with the contents of a TOML file layered on top.
pub fn layer_file(base: &RunConfig, path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    layer_str(base, &text)
}

pub fn layer_str(base: &RunConfig, text: &str) -> Result<RunConfig> {
    let overlay: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut table = toml::Table::try_from(base).map_err(|e| Error::Config(e.to_string()))?;
    merge(&mut table, overlay);
    table.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let c = RunConfig::default();
        c.validate().unwrap();
        let back: RunConfig = toml::from_str(&c.to_toml()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn file_layers_over_base() {
        let c = layer_str(&RunConfig::default(), "[physics]\nmu = 0.3\n[noise]\nq = [0.01]\n").unwrap();
        assert_eq!(c.physics.mu, 0.3);
        assert_eq!(c.physics.delta, 1.0);
        assert_eq!(c.noise.q, vec![0.01]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(layer_str(&RunConfig::default(), "[physics]\nbogus = 1\n").is_err());
        assert!(layer_str(&RunConfig::default(), "physics = 3").is_err());
        let mut c = RunConfig::default();
        c.noise.q.clear();
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.code.d = vec![8];
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.code.lambda = Some(3);
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.physics.w = 0.0;
        assert!(c.validate().is_err());
    }
}
