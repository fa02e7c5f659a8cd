//! The i.i.d. elementary-error channel and Monte Carlo / exhaustive
//! estimation of qubit-loss and logical bit-flip rates.
//!
//! Each site `j` of each chain independently suffers `E_{p,j} = −i c_{2j−1} c_{2j}`
//! with probability `q`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::{stabilizer_set, CodeSpec, StabilizerSet};
use crate::error::{Error, Result};
use crate::gaussian::{evaluate_codes, BasisChange};

/// Largest `n` accepted by [`Sampling::Exhaustive`] (`4^n` error patterns).
pub const MAX_EXHAUSTIVE_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    q: f64,
}

impl NoiseModel {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidInput(format!("error probability q = {q} not in [0, 1]")));
        }
        Ok(NoiseModel { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// `E(J_1, J_2)`: sorted 1-based site subsets of chain 1 and chain 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErrorSample {
    j1: Vec<usize>,
    j2: Vec<usize>,
}

impl ErrorSample {
    pub fn new(n: usize, mut j1: Vec<usize>, mut j2: Vec<usize>) -> Result<Self> {
        for j in [&mut j1, &mut j2] {
            j.sort_unstable();
            if j.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput("repeated site in error subset".into()));
            }
            if let Some(&bad) = j.iter().find(|&&s| s == 0 || s > n) {
                return Err(Error::InvalidInput(format!("site {bad} outside 1..={n}")));
            }
        }
        Ok(ErrorSample { j1, j2 })
    }

    pub fn empty() -> Self {
        ErrorSample {
            j1: Vec::new(),
            j2: Vec::new(),
        }
    }

    /// Bit `j−1` of `m1` (`m2`) selects site `j` of chain 1 (2).
    pub fn from_masks(n: usize, m1: u64, m2: u64) -> Self {
        let bits = |m: u64| (1..=n).filter(|&j| m >> (j - 1) & 1 == 1).collect();
        ErrorSample {
            j1: bits(m1),
            j2: bits(m2),
        }
    }

    pub fn j1(&self) -> &[usize] {
        &self.j1
    }

    pub fn j2(&self) -> &[usize] {
        &self.j2
    }

    pub fn is_empty(&self) -> bool {
        self.j1.is_empty() && self.j2.is_empty()
    }

    /// Total number of elementary errors `|J_1| + |J_2|`.
    pub fn count(&self) -> usize {
        self.j1.len() + self.j2.len()
    }

    /// Tetron site-Majorana indices (0-based, chain 2 offset by `2n`) whose
    /// sign the error flips under conjugation.
    pub fn flipped_majoranas(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.count());
        for (off, js) in [(0, &self.j1), (2 * n, &self.j2)] {
            for &j in js.iter() {
                out.push(off + 2 * j - 2);
                out.push(off + 2 * j - 1);
            }
        }
        out
    }

    /// Boolean form of [`Self::flipped_majoranas`], length `4n`.
    pub fn flip_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; 4 * n];
        for i in self.flipped_majoranas(n) {
            mask[i] = true;
        }
        mask
    }
}

/// Includes every site of each chain independently with probability `q`.
pub fn sample_error<R: Rng + ?Sized>(rng: &mut R, q: f64, n: usize) -> ErrorSample {
    let mut draw = || (1..=n).filter(|_| rng.random::<f64>() < q).collect::<Vec<_>>();
    let j1 = draw();
    let j2 = draw();
    ErrorSample { j1, j2 }
}

/// `q^{|J_1|+|J_2|} (1−q)^{2n−|J_1|−|J_2|}`.
pub fn sample_probability(sample: &ErrorSample, q: f64, n: usize) -> f64 {
    let k = sample.count() as i32;
    q.powi(k) * (1.0 - q).powi(2 * n as i32 - k)
}

/// Per-sample RNG: stream `index` of the ChaCha8 generator keyed by `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    MonteCarlo { samples: u64, seed: u64 },
    /// Exact channel average over all `4^n` error patterns.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub p_loss: f64,
    pub p_loss_se: f64,
    pub p_bitflip: f64,
    pub p_bitflip_se: f64,
    /// Monte Carlo draws, or the number of enumerated patterns.
    pub samples: u64,
    pub seed: u64,
}

/// Rates for a single code and error probability.
pub fn estimate_rates(basis: &BasisChange, code: &CodeSpec, q: f64, sampling: Sampling) -> Result<RateEstimate> {
    let mut grid = estimate_rates_grid(basis, std::slice::from_ref(code), &[q], sampling)?;
    Ok(grid.remove(0).remove(0))
}

/// Rates for every `(code, q)` pair, indexed `[code][q]`.
///
/// All codes are evaluated on the same error samples. Monte Carlo draws for
/// different `q` reuse the same uniform variates, so neighbouring grid points
/// are positively correlated.
pub fn estimate_rates_grid(
    basis: &BasisChange,
    codes: &[CodeSpec],
    qs: &[f64],
    sampling: Sampling,
) -> Result<Vec<Vec<RateEstimate>>> {
    let n = basis.n();
    let stabs = codes
        .iter()
        .map(|code| {
            if code.n != n {
                return Err(Error::DimensionMismatch { expected: n, got: code.n });
            }
            stabilizer_set(code)
        })
        .collect::<Result<Vec<_>>>()?;
    for &q in qs {
        NoiseModel::new(q)?;
    }
    match sampling {
        Sampling::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::InvalidInput("need at least 2 Monte Carlo samples".into()));
            }
            let per_q = qs
                .iter()
                .map(|&q| monte_carlo(basis, &stabs, q, samples, seed))
                .collect::<Result<Vec<_>>>()?;
            Ok(transpose(per_q, codes.len()))
        }
        Sampling::Exhaustive => {
            let per_q = exhaustive(basis, &stabs, qs)?;
            Ok(transpose(per_q, codes.len()))
        }
    }
}

fn transpose(per_q: Vec<Vec<RateEstimate>>, n_codes: usize) -> Vec<Vec<RateEstimate>> {
    (0..n_codes)
        .map(|c| per_q.iter().map(|row| row[c]).collect())
        .collect()
}

fn identity_channel(samples: u64, seed: u64) -> RateEstimate {
    RateEstimate {
        p_loss: 0.0,
        p_loss_se: 0.0,
        p_bitflip: 0.0,
        p_bitflip_se: 0.0,
        samples,
        seed,
    }
}

fn monte_carlo(
    basis: &BasisChange,
    stabs: &[StabilizerSet],
    q: f64,
    samples: u64,
    seed: u64,
) -> Result<Vec<RateEstimate>> {
    if q == 0.0 {
        return Ok(vec![identity_channel(samples, seed); stabs.len()]);
    }
    let n = basis.n();
    let values: Vec<Vec<(f64, f64)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let sample = sample_error(&mut sample_rng(seed, i), q, n);
            evaluate_codes(basis, stabs, &sample)
        })
        .collect::<Result<_>>()?;
    (0..stabs.len())
        .map(|c| {
            let ps: Vec<f64> = values.iter().map(|v| v[c].0).collect();
            let zn: Vec<f64> = values.iter().map(|v| v[c].1).collect();
            summarize(&ps, &zn, seed)
        })
        .collect()
}

/// Turns per-sample `(⟨P_S⟩, Znum)` into rates with delta-method errors.
///
/// Standard errors are floored at the one-event resolution so that a series
/// with no observed events still carries a meaningful uncertainty.
pub fn summarize(ps: &[f64], zn: &[f64], seed: u64) -> Result<RateEstimate> {
    let count = ps.len() as f64;
    let mean_ps = pairwise_sum(ps) / count;
    let mean_zn = pairwise_sum(zn) / count;
    let dps: Vec<f64> = ps.iter().map(|x| x - mean_ps).collect();
    let dzn: Vec<f64> = zn.iter().map(|x| x - mean_zn).collect();
    let var_ps = pairwise_sum(&dps.iter().map(|x| x * x).collect::<Vec<_>>()) / (count - 1.0);
    let se_ps = (var_ps / count).sqrt().max(1.0 / count);
    if mean_ps < 10.0 * se_ps {
        return Err(Error::InsufficientStatistics {
            mean: mean_ps,
            stderr: se_ps,
        });
    }
    let ratio = mean_zn / mean_ps;
    // Var of Zn − R·PS, the linearization of the ratio of means.
    let lin: Vec<f64> = dzn.iter().zip(&dps).map(|(z, p)| (z - ratio * p).powi(2)).collect();
    let var_lin = pairwise_sum(&lin) / (count - 1.0);
    let se_ratio = (var_lin / count).sqrt() / mean_ps;
    Ok(RateEstimate {
        p_loss: (1.0 - mean_ps).clamp(0.0, 1.0),
        p_loss_se: se_ps,
        p_bitflip: ((1.0 - ratio) / 2.0).clamp(0.0, 1.0),
        p_bitflip_se: (se_ratio / 2.0).max(1.0 / (count * mean_ps)),
        samples: ps.len() as u64,
        seed,
    })
}

fn exhaustive(basis: &BasisChange, stabs: &[StabilizerSet], qs: &[f64]) -> Result<Vec<Vec<RateEstimate>>> {
    let n = basis.n();
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge { n, max: MAX_EXHAUSTIVE_N });
    }
    let patterns = 1u64 << (2 * n);
    let size = 1u64 << n;
    // Lexicographic over (J_1, J_2); each pattern's expectations do not depend on q.
    let values: Vec<(usize, Vec<(f64, f64)>)> = (0..patterns)
        .into_par_iter()
        .map(|k| {
            let sample = ErrorSample::from_masks(n, k / size, k % size);
            Ok((sample.count(), evaluate_codes(basis, stabs, &sample)?))
        })
        .collect::<Result<_>>()?;
    qs.iter()
        .map(|&q| {
            if q == 0.0 {
                return Ok(vec![identity_channel(patterns, 0); stabs.len()]);
            }
            let weights: Vec<f64> = values
                .iter()
                .map(|(k, _)| q.powi(*k as i32) * (1.0 - q).powi((2 * n - k) as i32))
                .collect();
            (0..stabs.len())
                .map(|c| {
                    let ps = pairwise_sum(&values.iter().zip(&weights).map(|((_, v), w)| w * v[c].0).collect::<Vec<_>>());
                    let zn = pairwise_sum(&values.iter().zip(&weights).map(|((_, v), w)| w * v[c].1).collect::<Vec<_>>());
                    if !(ps > 0.0) {
                        return Err(Error::InsufficientStatistics { mean: ps, stderr: 0.0 });
                    }
                    Ok(RateEstimate {
                        p_loss: (1.0 - ps).clamp(0.0, 1.0),
                        p_loss_se: 0.0,
                        p_bitflip: ((1.0 - zn / ps) / 2.0).clamp(0.0, 1.0),
                        p_bitflip_se: 0.0,
                        samples: patterns,
                        seed: 0,
                    })
                })
                .collect()
        })
        .collect()
}

/// Summation by recursive halving; the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        xs.iter().sum()
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_q_draws() {
        let mut rng = sample_rng(1, 0);
        for _ in 0..100 {
            assert!(sample_error(&mut rng, 0.0, 7).is_empty());
            let full = sample_error(&mut rng, 1.0, 7);
            assert_eq!(full.j1(), &[1, 2, 3, 4, 5, 6, 7]);
            assert_eq!(full.j2(), full.j1());
        }
    }

    #[test]
    fn mean_subset_size_is_binomial() {
        let (q, n, draws) = (0.1, 30, 100_000u64);
        let sizes: Vec<f64> = (0..draws)
            .map(|i| sample_error(&mut sample_rng(7, i), q, n).j1().len() as f64)
            .collect();
        let mean = sizes.iter().sum::<f64>() / draws as f64;
        let se = (n as f64 * q * (1.0 - q) / draws as f64).sqrt();
        assert!((mean - 3.0).abs() < 4.0 * se, "mean {mean}");
    }

    #[test]
    fn probabilities() {
        assert!((sample_probability(&ErrorSample::empty(), 0.1, 2) - 0.6561).abs() < 1e-15);
        let full = ErrorSample::from_masks(2, 0b11, 0b11);
        assert_eq!(sample_probability(&full, 0.5, 2), 0.5f64.powi(4));
        for n in 1..=3 {
            for q in [0.0, 0.1, 0.37, 1.0] {
                let total: f64 = (0..1u64 << (2 * n))
                    .map(|k| sample_probability(&ErrorSample::from_masks(n, k >> n, k & ((1 << n) - 1)), q, n))
                    .sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sample_validation_and_masks() {
        assert!(ErrorSample::new(3, vec![0], vec![]).is_err());
        assert!(ErrorSample::new(3, vec![4], vec![]).is_err());
        assert!(ErrorSample::new(3, vec![2, 2], vec![]).is_err());
        let s = ErrorSample::new(3, vec![3, 1], vec![2]).unwrap();
        assert_eq!(s.j1(), &[1, 3]);
        assert_eq!(s, ErrorSample::from_masks(3, 0b101, 0b010));
        assert_eq!(s.flipped_majoranas(3), vec![0, 1, 4, 5, 8, 9]);
        assert!(NoiseModel::new(1.5).is_err());
        assert!(NoiseModel::new(-0.1).is_err());
    }

    #[test]
    fn summarize_ratio_of_means() {
        let ps: Vec<f64> = [1.0, 1.0, 0.0, 1.0].repeat(50);
        let zn: Vec<f64> = [1.0, -1.0, 0.0, 1.0].repeat(50);
        let r = summarize(&ps, &zn, 3).unwrap();
        assert_eq!(r.samples, 200);
        assert!((r.p_loss - 0.25).abs() < 1e-15);
        assert!((r.p_bitflip - 1.0 / 3.0).abs() < 1e-15);
        assert!(summarize(&[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0], 0).is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        assert!((pairwise_sum(&xs) - xs.iter().sum::<f64>()).abs() < 1e-12);
    }
}
