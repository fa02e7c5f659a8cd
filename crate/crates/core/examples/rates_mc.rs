//! Monte Carlo loss and bit-flip rates, checked against the fixed-point closed forms.

use tetron::analytic::fixed_point_rates;
use tetron::bdg::ChainParams;
use tetron::codes::CodeSpec;
use tetron::gaussian::BasisChange;
use tetron::noise::{estimate_rates_grid, Sampling};

fn main() -> tetron::Result<()> {
    let n = 16;
    let qs = [0.05, 0.1];
    let codes: Vec<CodeSpec> = (0..=2).map(|d| CodeSpec::coarsest(n, d)).collect::<Result<_, _>>()?;
    let sampling = Sampling::MonteCarlo { samples: 20_000, seed: 1 };

    let basis = BasisChange::uniform(&ChainParams::fixed_point(n))?;
    let grid = estimate_rates_grid(&basis, &codes, &qs, sampling)?;
    println!("fixed point, n = {n}");
    for (code, row) in codes.iter().zip(&grid) {
        for (&q, r) in qs.iter().zip(row) {
            let exact = fixed_point_rates(code.d, q)?;
            println!(
                "  d={} q={q:<5} p_loss {:.4} ± {:.4} (exact {:.4})  p_bitflip {:.2e} ± {:.1e} (exact {:.2e})",
                code.d, r.p_loss, r.p_loss_se, exact.p_loss, r.p_bitflip, r.p_bitflip_se, exact.p_bitflip
            );
        }
    }

    let basis = BasisChange::uniform(&ChainParams::new(0.3, 1.0, 0.4, n))?;
    let grid = estimate_rates_grid(&basis, &codes, &qs, sampling)?;
    println!("mu = 0.3, delta = 0.4, n = {n}");
    for (code, row) in codes.iter().zip(&grid) {
        for (&q, r) in qs.iter().zip(row) {
            println!(
                "  d={} q={q:<5} p_loss {:.4} ± {:.4}  p_bitflip {:.2e} ± {:.1e}",
                code.d, r.p_loss, r.p_loss_se, r.p_bitflip, r.p_bitflip_se
            );
        }
    }
    Ok(())
}
