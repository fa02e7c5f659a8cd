//! Rates averaged over disorder realizations, with per-draw rows and the mean.

use tetron::cli::sweep::{mc_rate_rows, Preset};

fn main() -> tetron::Result<()> {
    let mut cfg = Preset::Fig5c.config();
    cfg.physics.n = 14;
    cfg.physics.realizations = 4;
    cfg.code.d = vec![0, 1, 2];
    cfg.noise.q = vec![0.05];
    cfg.mc.samples = 2000;
    cfg.validate()?;

    for r in mc_rate_rows(&cfg)? {
        println!(
            "{:>4}  d={}  p_loss {:.4} ± {:.4}  p_bitflip {:.2e} ± {:.1e}",
            r.realization, r.d, r.p_loss, r.p_loss_se, r.p_bitflip, r.p_bitflip_se
        );
    }
    Ok(())
}
