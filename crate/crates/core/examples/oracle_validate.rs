//! Dense Fock-space cross-checks of the Gaussian engine (small n only).

use tetron::bdg::ChainParams;
use tetron::codes::CodeSpec;
use tetron::gaussian::BasisChange;
use tetron::noise::{estimate_rates, Sampling};
use tetron::oracle::{exact_rates, gaussian_dense_deviation, validate_suite};

fn main() -> tetron::Result<()> {
    for c in validate_suite(1) {
        println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }

    let (dps, dzn) = gaussian_dense_deviation(3, 20, 5)?;
    println!("\n20 random chains at n = 3: max |dP_S| {dps:.1e}, max |dZnum| {dzn:.1e}");

    let n = 3;
    let basis = BasisChange::uniform(&ChainParams::new(0.5, 1.0, 0.7, n))?;
    let code = CodeSpec::coarsest(n, 1)?;
    let dense = exact_rates(&basis, &code, 0.1, Sampling::Exhaustive)?;
    let gauss = estimate_rates(&basis, &code, 0.1, Sampling::Exhaustive)?;
    println!(
        "exhaustive n = 3, d = 1, q = 0.1: dense ({:.6e}, {:.6e}), gaussian ({:.6e}, {:.6e})",
        dense.p_loss, dense.p_bitflip, gauss.p_loss, gauss.p_bitflip
    );
    Ok(())
}
