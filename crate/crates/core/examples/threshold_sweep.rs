//! A reduced threshold sweep: rates over a q grid and where they cross 0.01 and 0.5.
//!
//! The full sweep is `tetron sweep --preset fig6`.

use tetron::cli::sweep::{mc_rate_rows, thresholds, Preset};

fn main() -> tetron::Result<()> {
    let mut cfg = Preset::Fig6.config();
    cfg.physics.n = 16;
    cfg.code.d = vec![0, 2, 4];
    cfg.noise.q = vec![0.01, 0.02, 0.04, 0.06, 0.08, 0.1, 0.15];
    cfg.mc.samples = 2000;
    cfg.validate()?;

    let rows = mc_rate_rows(&cfg)?;
    for r in &rows {
        println!("d={} q={:<5} p_loss {:.3}  p_bitflip {:.2e}", r.d, r.q, r.p_loss, r.p_bitflip);
    }
    for t in thresholds(&rows)? {
        let show = |q: Option<f64>| q.map_or("not reached".to_owned(), |q| format!("{q:.3}"));
        println!("d={}: bit flip crosses 0.01 at {}, loss crosses 0.5 at {}", t.d, show(t.q_bitflip), show(t.q_loss));
    }
    Ok(())
}
