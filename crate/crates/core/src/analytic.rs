//! Closed-form rates at the fixed point `μ = 0`, `w = Δ = 1`.
//!
//! There an error goes undetected iff it covers all Majoranas of zero, two or
//! all four detection regions (each region holds `2d + 2` Majoranas counting
//! the adjacent MZM), and it flips `Z̄` iff it covers one region per chain.

use crate::error::{Error, Result};

fn check_q(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidInput(format!("q = {q} not in [0, 1]")));
    }
    Ok(())
}

/// Probability that no detection event occurs.
fn survival(d: usize, q: f64) -> f64 {
    let k = 2 * d as i32 + 2;
    (1.0 - q).powi(2 * k) + 6.0 * q.powi(k) * (1.0 - q).powi(k) + q.powi(2 * k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointRates {
    pub p_loss: f64,
    pub p_bitflip: f64,
}

/// `1 − (1−q)^{4d+4} − 6q^{2d+2}(1−q)^{2d+2} − q^{4d+4}`.
pub fn p_loss_fixed(d: usize, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok((1.0 - survival(d, q)).max(0.0))
}

/// `4q^{2d+2}(1−q)^{2d+2} / (1 − p_loss)`.
pub fn p_bitflip_fixed(d: usize, q: f64) -> Result<f64> {
    check_q(q)?;
    let k = 2 * d as i32 + 2;
    Ok(4.0 * q.powi(k) * (1.0 - q).powi(k) / survival(d, q))
}

pub fn fixed_point_rates(d: usize, q: f64) -> Result<FixedPointRates> {
    Ok(FixedPointRates {
        p_loss: p_loss_fixed(d, q)?,
        p_bitflip: p_bitflip_fixed(d, q)?,
    })
}

/// `4 q^{p_loss / 4q}`: bit-flip rate reachable at a tolerated loss rate when
/// `d` may be chosen freely. Asymptotic, meaningful only for `q ≪ 1/d ≪ 1`.
pub fn tradeoff_bound(q: f64, p_loss_target: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidInput(format!("tradeoff needs 0 < q <= 1, got {q}")));
    }
    if !(0.0..1.0).contains(&p_loss_target) {
        return Err(Error::InvalidInput(format!("target loss {p_loss_target} not in [0, 1)")));
    }
    Ok(4.0 * q.powf(p_loss_target / (4.0 * q)))
}

/// Bisection for the `q ∈ (0, 1/2)` at which `p_bitflip_fixed(d, q) = level`.
pub fn fixed_point_threshold(d: usize, level: f64) -> Option<f64> {
    let f = |q: f64| p_bitflip_fixed(d, q).unwrap() - level;
    let (mut lo, mut hi) = (1e-12, 0.5 - 1e-12);
    if f(lo) > 0.0 || f(hi) < 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
