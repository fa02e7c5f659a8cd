use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::RateEstimate;

/// Header of every rates CSV, in order.
pub const RATE_COLUMNS: [&str; 15] = [
    "mu",
    "w",
    "delta",
    "n",
    "dmu",
    "realization",
    "d",
    "lambda",
    "q",
    "samples",
    "seed",
    "p_loss",
    "p_loss_se",
    "p_bitflip",
    "p_bitflip_se",
];

/// Header of the Wannier-amplitude CSV.
pub const WANNIER_COLUMNS: [&str; 5] = ["chain", "l", "x_l", "site", "amplitude"];

/// One rates row. `realization` is the disorder draw index, or `mean` for
/// the aggregate over draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub mu: f64,
    pub w: f64,
    pub delta: f64,
    pub n: usize,
    pub dmu: f64,
    pub realization: String,
    pub d: usize,
    pub lambda: usize,
    pub q: f64,
    pub samples: u64,
    pub seed: u64,
    pub p_loss: f64,
    pub p_loss_se: f64,
    pub p_bitflip: f64,
    pub p_bitflip_se: f64,
}

impl RateRow {
    pub fn set_rates(&mut self, r: &RateEstimate) {
        self.samples = r.samples;
        self.seed = r.seed;
        self.p_loss = r.p_loss;
        self.p_loss_se = r.p_loss_se;
        self.p_bitflip = r.p_bitflip;
        self.p_bitflip_se = r.p_bitflip_se;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WannierRow {
    pub chain: u8,
    pub l: usize,
    pub x_l: f64,
    pub site: usize,
    pub amplitude: f64,
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Fails unless the file's header is exactly `expected`.
pub fn check_header(path: &Path, expected: &[&str]) -> Result<()> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != expected {
        return Err(Error::Config(format!(
            "{}: header {:?} does not match schema {:?}",
            path.display(),
            header,
            expected
        )));
    }
    Ok(())
}

/// Reads a rates CSV after checking its header.
pub fn read_rates(path: &Path) -> Result<Vec<RateRow>> {
    check_header(path, &RATE_COLUMNS)?;
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// `<path>.meta.toml`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.toml");
    PathBuf::from(s)
}

/// Current `git rev-parse HEAD`, or `unknown`.
pub fn git_revision() -> String {
    std::process::Command::new("git")
        .args(["rev-parse", "HEAD"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_owned())
        .unwrap_or_else(|| "unknown".into())
}

/// Writes the metadata sidecar: run info, any extra tables, then the resolved config.
pub fn write_sidecar(
    csv_path: &Path,
    mode: &str,
    seed: u64,
    config: &super::config::RunConfig,
    extra: toml::Table,
) -> Result<PathBuf> {
    let mut run = toml::Table::new();
    run.insert("mode".into(), mode.into());
    run.insert("git_revision".into(), git_revision().into());
    run.insert("seed".into(), toml::Value::Integer(seed as i64));
    run.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    run.insert("csv".into(), csv_path.display().to_string().into());
    let mut doc = toml::Table::new();
    doc.insert("run".into(), run.into());
    for (k, v) in extra {
        doc.insert(k, v);
    }
    let config = toml::Table::try_from(config).map_err(|e| Error::Config(e.to_string()))?;
    doc.insert("config".into(), config.into());
    let path = sidecar_path(csv_path);
    std::fs::write(&path, toml::to_string(&doc).map_err(|e| Error::Config(e.to_string()))?)?;
    Ok(path)
}

/// Per-`(d, q)` mean over realizations with standard error `s/√R`.
pub fn aggregate(rows: &[RateRow]) -> Vec<RateRow> {
    let mut keys: Vec<(usize, usize, u64)> = Vec::new();
    for r in rows {
        let k = (r.d, r.lambda, r.q.to_bits());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .filter_map(|(d, lambda, qb)| {
            let group: Vec<&RateRow> = rows
                .iter()
                .filter(|r| r.d == d && r.lambda == lambda && r.q.to_bits() == qb)
                .collect();
            if group.len() < 2 {
                return None;
            }
            let stats = |f: &dyn Fn(&RateRow) -> f64| {
                let m = group.len() as f64;
                let mean = group.iter().map(|r| f(r)).sum::<f64>() / m;
                let var = group.iter().map(|r| (f(r) - mean).powi(2)).sum::<f64>() / (m - 1.0);
                (mean, (var / m).sqrt())
            };
            let (p_loss, p_loss_se) = stats(&|r| r.p_loss);
            let (p_bitflip, p_bitflip_se) = stats(&|r| r.p_bitflip);
            let first = group[0];
            Some(RateRow {
                realization: "mean".into(),
                samples: group.iter().map(|r| r.samples).sum(),
                p_loss,
                p_loss_se,
                p_bitflip,
                p_bitflip_se,
                ..first.clone()
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(real: &str, d: usize, q: f64, pl: f64, pb: f64) -> RateRow {
        RateRow {
            mu: 0.3,
            w: 1.0,
            delta: 0.4,
            n: 8,
            dmu: 0.3,
            realization: real.into(),
            d,
            lambda: d.max(1),
            q,
            samples: 10,
            seed: 1,
            p_loss: pl,
            p_loss_se: 0.0,
            p_bitflip: pb,
            p_bitflip_se: 0.0,
        }
    }

    #[test]
    fn csv_round_trip_and_header_check() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let rows = vec![row("0", 1, 0.05, 0.1, 0.01), row("mean", 1, 0.05, 0.2, 0.02)];
        write_csv(&path, &rows).unwrap();
        assert_eq!(read_rates(&path).unwrap(), rows);
        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "mu,w,delta\n0,1,1\n").unwrap();
        assert!(matches!(read_rates(&bad), Err(Error::Config(_))));
        assert!(check_header(&path, &WANNIER_COLUMNS).is_err());
    }

    #[test]
    fn aggregate_is_mean_and_stderr() {
        let rows = vec![row("0", 1, 0.05, 0.1, 0.01), row("1", 1, 0.05, 0.3, 0.03), row("0", 2, 0.05, 0.5, 0.0)];
        let agg = aggregate(&rows);
        assert_eq!(agg.len(), 1);
        assert!((agg[0].p_loss - 0.2).abs() < 1e-15);
        assert!((agg[0].p_loss_se - 0.1).abs() < 1e-15);
        assert_eq!(agg[0].realization, "mean");
        assert_eq!(agg[0].samples, 20);
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("out/a.csv")), PathBuf::from("out/a.csv.meta.toml"));
    }
}
