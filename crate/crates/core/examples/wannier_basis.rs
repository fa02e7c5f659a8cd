//! Wannier quasiparticles: centers, MZM weights and exponential localization.

use tetron::bdg::ChainParams;
use tetron::wannier::{chain_basis, left_weight, localization_fit, site_amplitudes};

fn main() -> tetron::Result<()> {
    for (mu, delta) in [(0.3, 0.4), (0.99, 0.05)] {
        let n = 50;
        let chain = chain_basis(&ChainParams::new(mu, 1.0, delta, n))?;
        let wb = &chain.wannier;
        println!("mu = {mu}, delta = {delta}, n = {n}");
        println!("  gap {:.4}, zero mode {:.3e}", chain.spectrum.gap(), chain.spectrum.mzm_energy());
        println!(
            "  gamma_L left weight {:.4}, gamma_R left weight {:.4}",
            left_weight(&wb.gamma_left()),
            left_weight(&wb.gamma_right())
        );
        println!("  orthogonality residual {:.2e}", wb.orthogonality_residual());
        if !wb.relabelled.is_empty() {
            println!("  relabelled WQPs: {:?}", wb.relabelled);
        }

        let l = n / 2;
        let amps = site_amplitudes(&wb.creation.column(l - 1).into_owned());
        let fit = localization_fit(&amps, wb.centers[l - 1]);
        println!(
            "  WQP {l}: center {:.3}, decay rate {:.3}, fit R^2 {:.3}",
            wb.centers[l - 1], fit.rate, fit.fit_quality
        );
        for (j, a) in amps.iter().enumerate().skip(l - 6).take(11) {
            println!("    site {:>2}  {:.3e}", j + 1, a);
        }
    }
    Ok(())
}
