//! Closed-form rates at the fixed point: loss grows with d, bit flips fall as q^(2d+2).

use tetron::analytic::{fixed_point_rates, fixed_point_threshold, tradeoff_bound};

fn main() -> tetron::Result<()> {
    for q in [0.01, 0.05, 0.1] {
        println!("q = {q}");
        for d in 0..=6 {
            let r = fixed_point_rates(d, q)?;
            println!("  d={d}  p_loss {:.4}  p_bitflip {:.3e}", r.p_loss, r.p_bitflip);
        }
    }

    println!("\nq at which p_bitflip reaches 0.01:");
    for d in [0, 2, 4, 6] {
        match fixed_point_threshold(d, 0.01) {
            Some(q) => println!("  d={d}  q = {q:.4}"),
            None => println!("  d={d}  not reached"),
        }
    }

    println!("\ntradeoff estimate at q = 0.01:");
    for target in [0.04, 0.08, 0.12] {
        println!("  p_loss {target} -> p_bitflip ~ {:.1e}", tradeoff_bound(0.01, target)?);
    }
    Ok(())
}
