use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::RunConfig;
use super::output::{aggregate, RateRow, WannierRow};
use crate::analytic;
use crate::bdg::ChainParams;
use crate::error::{Error, Result};
use crate::gaussian::BasisChange;
use crate::noise::{estimate_rates_grid, Sampling};
use crate::wannier::{chain_basis, site_amplitudes};

/// Figure presets runnable through `sweep --preset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig3,
    Fig5a,
    Fig5b,
    Fig5c,
    Fig5d,
    Fig6,
}

/// Bit-flip and loss levels a second code layer is assumed to tolerate.
pub const BITFLIP_LEVEL: f64 = 0.01;
pub const LOSS_LEVEL: f64 = 0.5;

pub const FIG6_Q: [f64; 11] = [0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.1, 0.12, 0.15];

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
            Preset::Fig5c => "fig5c",
            Preset::Fig5d => "fig5d",
            Preset::Fig6 => "fig6",
        }
    }

    /// Base configuration; a config file and flags are layered on top.
    pub fn config(self) -> RunConfig {
        let mut c = RunConfig::default();
        let fig5 = |c: &mut RunConfig, mu: f64, delta: f64| {
            c.physics.mu = mu;
            c.physics.delta = delta;
            c.physics.n = 30;
            c.code.d = (0..=6).collect();
            c.noise.q = vec![0.01, 0.05, 0.1];
        };
        match self {
            Preset::Fig3 => {
                c.physics.mu = 0.3;
                c.physics.delta = 0.4;
                c.physics.n = 50;
            }
            Preset::Fig5a => fig5(&mut c, 0.0, 1.0),
            Preset::Fig5b => fig5(&mut c, 0.3, 0.4),
            Preset::Fig5c => {
                fig5(&mut c, 0.3, 0.4);
                c.physics.dmu = 0.3;
                c.physics.realizations = 10;
            }
            Preset::Fig5d => fig5(&mut c, 0.99, 0.1),
            Preset::Fig6 => {
                c.physics.mu = 0.95;
                c.physics.delta = 0.05;
                c.physics.n = 30;
                c.code.d = vec![0, 2, 4, 6];
                c.noise.q = FIG6_Q.to_vec();
            }
        }
        c
    }
}

/// Near-boundary companion panel drawn next to the configured one in `fig3`.
pub const FIG3_BOUNDARY: (f64, f64) = (0.99, 0.05);

fn disorder_rng(seed: u64, realization: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6469_736f_7264_6572);
    rng.set_stream(realization);
    rng
}

/// Chain parameters of both chains for one disorder draw. Without disorder
/// both chains are identical.
pub fn realization_params(cfg: &RunConfig, realization: u64) -> (ChainParams, ChainParams) {
    let base = cfg.chain_params();
    if cfg.physics.dmu == 0.0 {
        return (base.clone(), base);
    }
    let mut rng = disorder_rng(cfg.mc.seed, realization);
    let first = base.clone().with_random_disorder(cfg.physics.dmu, &mut rng);
    let second = base.with_random_disorder(cfg.physics.dmu, &mut rng);
    (first, second)
}

pub fn realization_basis(cfg: &RunConfig, realization: u64) -> Result<BasisChange> {
    let (a, b) = realization_params(cfg, realization);
    BasisChange::from_params(&a, &b)
}

fn template_row(cfg: &RunConfig, realization: String, d: usize, lambda: usize, q: f64) -> RateRow {
    let p = &cfg.physics;
    RateRow {
        mu: p.mu,
        w: p.w,
        delta: p.delta,
        n: p.n,
        dmu: p.dmu,
        realization,
        d,
        lambda,
        q,
        samples: 0,
        seed: 0,
        p_loss: 0.0,
        p_loss_se: 0.0,
        p_bitflip: 0.0,
        p_bitflip_se: 0.0,
    }
}

/// Closed-form fixed-point rates over the `(d, q)` grid. Physics parameters
/// other than `n` are ignored.
pub fn fixed_rate_rows(cfg: &RunConfig) -> Result<Vec<RateRow>> {
    let mut fixed = cfg.clone();
    fixed.physics.mu = 0.0;
    fixed.physics.w = 1.0;
    fixed.physics.delta = 1.0;
    fixed.physics.dmu = 0.0;
    fixed.physics.realizations = 1;
    let mut rows = Vec::new();
    for code in fixed.codes()? {
        for &q in &fixed.noise.q {
            let r = analytic::fixed_point_rates(code.d, q)?;
            let mut row = template_row(&fixed, "0".into(), code.d, code.lambda, q);
            row.p_loss = r.p_loss;
            row.p_bitflip = r.p_bitflip;
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Monte Carlo (or exhaustive) rates, one block per disorder realization
/// followed by the aggregate rows when there is more than one realization.
pub fn mc_rate_rows(cfg: &RunConfig) -> Result<Vec<RateRow>> {
    let codes = cfg.codes()?;
    let sampling = if cfg.mc.exhaustive {
        Sampling::Exhaustive
    } else {
        Sampling::MonteCarlo {
            samples: cfg.mc.samples,
            seed: cfg.mc.seed,
        }
    };
    let mut rows = Vec::new();
    for r in 0..cfg.physics.realizations as u64 {
        log::info!("realization {r}: building Wannier bases");
        let basis = realization_basis(cfg, r)?;
        if let Some(chains) = basis.chains() {
            for c in chains.iter().filter(|c| c.spectrum.mzm_warning) {
                log::warn!(
                    "realization {r}, chain {}: zero mode {:.3e} not well below gap {:.3e}",
                    c.params.chain_id,
                    c.spectrum.mzm_energy(),
                    c.spectrum.gap()
                );
            }
        }
        log::info!("realization {r}: evaluating {} codes x {} q", codes.len(), cfg.noise.q.len());
        let grid = estimate_rates_grid(&basis, &codes, &cfg.noise.q, sampling)?;
        for (code, per_q) in codes.iter().zip(grid) {
            for (&q, est) in cfg.noise.q.iter().zip(per_q) {
                let mut row = template_row(cfg, r.to_string(), code.d, code.lambda, q);
                row.set_rates(&est);
                rows.push(row);
            }
        }
    }
    if cfg.physics.realizations > 1 {
        let agg = aggregate(&rows);
        rows.extend(agg);
    }
    Ok(rows)
}

/// Site amplitudes of every WQP of both chains.
pub fn wannier_rows(cfg: &RunConfig) -> Result<(Vec<WannierRow>, toml::Table)> {
    let (a, b) = realization_params(cfg, 0);
    let mut rows = Vec::new();
    let mut meta = toml::Table::new();
    for (id, params) in [(1u8, a), (2u8, b)] {
        let chain = chain_basis(&params.with_chain_id(id))?;
        let wb = &chain.wannier;
        for (l, &x) in wb.centers.iter().enumerate() {
            let amps = site_amplitudes(&wb.creation.column(l).into_owned());
            for (j, amp) in amps.into_iter().enumerate() {
                rows.push(WannierRow {
                    chain: id,
                    l: l + 1,
                    x_l: x,
                    site: j + 1,
                    amplitude: amp,
                });
            }
        }
        let mut t = toml::Table::new();
        t.insert("gap".into(), chain.spectrum.gap().into());
        t.insert("mzm_energy".into(), chain.spectrum.mzm_energy().into());
        let ints = |v: &[usize]| toml::Value::Array(v.iter().map(|&l| (l as i64).into()).collect());
        t.insert("relabelled".into(), ints(&wb.relabelled));
        let pairs = wb
            .degenerate_centers
            .iter()
            .map(|&(a, b)| ints(&[a, b]))
            .collect::<Vec<_>>();
        t.insert("degenerate_centers".into(), toml::Value::Array(pairs));
        meta.insert(format!("chain{id}"), t.into());
    }
    Ok((rows, meta))
}

/// A level crossing located between two grid points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub q: f64,
    pub q_below: f64,
    pub q_above: f64,
}

/// First `q` at which `values` rises through `level`, interpolating
/// `ln value` linearly in `q` between the bracketing grid points (plain
/// linear interpolation if the lower value is zero). `None` when the series
/// never crosses inside the grid.
pub fn threshold_estimate(qs: &[f64], values: &[f64], level: f64) -> Result<Option<Crossing>> {
    if qs.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: qs.len(),
            got: values.len(),
        });
    }
    if qs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("q grid must be strictly increasing".into()));
    }
    for i in 1..qs.len() {
        let (v0, v1) = (values[i - 1], values[i]);
        if v0 < level && v1 >= level {
            let t = if v0 > 0.0 {
                (level.ln() - v0.ln()) / (v1.ln() - v0.ln())
            } else {
                (level - v0) / (v1 - v0)
            };
            return Ok(Some(Crossing {
                q: qs[i - 1] + t * (qs[i] - qs[i - 1]),
                q_below: qs[i - 1],
                q_above: qs[i],
            }));
        }
    }
    Ok(None)
}

/// Per-`d` threshold summary of a rates table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub d: usize,
    /// `q` where `p_bitflip` reaches the bit-flip level, empty if not reached.
    pub q_bitflip: Option<f64>,
    pub q_bitflip_below: Option<f64>,
    pub q_bitflip_above: Option<f64>,
    /// `q` where `p_loss` reaches the loss level.
    pub q_loss: Option<f64>,
    pub q_loss_below: Option<f64>,
    pub q_loss_above: Option<f64>,
    /// `p_loss` interpolated at the bit-flip crossing.
    pub p_loss_at_bitflip: Option<f64>,
}

/// Crossings of [`BITFLIP_LEVEL`] and [`LOSS_LEVEL`] for every `d` in rows
/// of a single realization (or the aggregate rows).
pub fn thresholds(rows: &[RateRow]) -> Result<Vec<ThresholdRow>> {
    let mut ds: Vec<usize> = rows.iter().map(|r| r.d).collect();
    ds.dedup();
    ds.into_iter()
        .map(|d| {
            let series: Vec<&RateRow> = rows.iter().filter(|r| r.d == d).collect();
            let qs: Vec<f64> = series.iter().map(|r| r.q).collect();
            let bf: Vec<f64> = series.iter().map(|r| r.p_bitflip).collect();
            let loss: Vec<f64> = series.iter().map(|r| r.p_loss).collect();
            let b = threshold_estimate(&qs, &bf, BITFLIP_LEVEL)?;
            let l = threshold_estimate(&qs, &loss, LOSS_LEVEL)?;
            let p_loss_at_bitflip = b.map(|c| interpolate(&qs, &loss, c.q));
            Ok(ThresholdRow {
                d,
                q_bitflip: b.map(|c| c.q),
                q_bitflip_below: b.map(|c| c.q_below),
                q_bitflip_above: b.map(|c| c.q_above),
                q_loss: l.map(|c| c.q),
                q_loss_below: l.map(|c| c.q_below),
                q_loss_above: l.map(|c| c.q_above),
                p_loss_at_bitflip,
            })
        })
        .collect()
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&v| v < x).clamp(1, xs.len() - 1);
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    ys[i - 1] + t * (ys[i] - ys[i - 1])
}
