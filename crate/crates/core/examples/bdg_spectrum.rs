//! Quasiparticle spectrum of a Kitaev chain and the splitting of its zero modes.
//!
//! cargo run --example bdg_spectrum -- 0.3 0.4

use tetron::bdg::{build_bdg, diagonalize, ChainParams};

fn main() -> tetron::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("number")).collect();
    let (mu, delta) = match args[..] {
        [mu, delta] => (mu, delta),
        _ => (0.3, 0.4),
    };

    println!("mu = {mu}, w = 1, delta = {delta}");
    println!("{:>4} {:>14} {:>14}", "n", "eps_0", "gap");
    for n in [8, 16, 24, 32, 48] {
        let spec = diagonalize(&build_bdg(&ChainParams::new(mu, 1.0, delta, n))?)?;
        println!("{n:>4} {:>14.6e} {:>14.6}", spec.mzm_energy(), spec.gap());
    }

    let spec = diagonalize(&build_bdg(&ChainParams::new(mu, 1.0, delta, 12))?)?;
    println!("\nn = 12 energies:");
    for (k, e) in spec.energies().iter().enumerate() {
        println!("  eps_{k:<2} = {e:.6}");
    }
    Ok(())
}
