//! Stabilizer-space weight and logical Z of a code state after one error pattern.

use tetron::bdg::ChainParams;
use tetron::codes::{stabilizer_set, CodeSpec};
use tetron::gaussian::{error_rotation, evaluate_sample, expectation_ps, expectation_znum, initial_covariance, BasisChange};
use tetron::noise::ErrorSample;

fn main() -> tetron::Result<()> {
    let n = 12;
    let basis = BasisChange::uniform(&ChainParams::new(0.3, 1.0, 0.4, n))?;
    let stabs = stabilizer_set(&CodeSpec::coarsest(n, 2)?)?;
    let m0 = initial_covariance(n, 0)?;
    println!("code state: <P_S> = {:.6}, Znum = {:.6}", expectation_ps(&m0, &stabs)?, expectation_znum(&m0, &stabs)?);

    let patterns: [(&str, Vec<usize>, Vec<usize>); 4] = [
        ("bulk site 6, chain 1", vec![6], vec![]),
        ("site 1, chain 1", vec![1], vec![]),
        ("site 1 on both chains", vec![1], vec![1]),
        ("sites 1 and 12 on both chains", vec![1, 12], vec![1, 12]),
    ];
    for (name, j1, j2) in patterns {
        let e = ErrorSample::new(n, j1, j2)?;
        // The general path: rotate the whole covariance matrix.
        let m = m0.rotated(&error_rotation(&e, &basis)?)?;
        let (ps, zn) = evaluate_sample(&basis, &stabs, &e)?;
        println!(
            "{name:<30} <P_S> = {ps:.6}  Znum = {zn:+.6}  purity residual {:.1e}",
            m.purity_residual()
        );
    }
    Ok(())
}
