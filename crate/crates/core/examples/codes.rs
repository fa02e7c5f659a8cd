//! Stabilizers of C_d, detection intervals, and which fixed-point errors they catch.

use tetron::codes::{detection_intervals, even_distance, majorana_length, stabilizer_set, CodeSpec};
use tetron::noise::ErrorSample;

fn main() -> tetron::Result<()> {
    let n = 8;
    for d in 0..=3 {
        let spec = CodeSpec::coarsest(n, d)?;
        let stabs = stabilizer_set(&spec)?;
        println!("C_{d} on n = {n}: {} stabilizers, even distance {}", stabs.labels.len(), even_distance(&spec));
        let ints = detection_intervals(&spec)?;
        for i in &ints.intervals {
            println!("  chain {} WQPs {}..={}", i.chain, i.l_min, i.l_max);
        }
    }

    // Errors at the left end of both chains: invisible to parity, caught by QP detection.
    let e = ErrorSample::new(n, vec![1], vec![1])?;
    for d in 0..=1 {
        let stabs = stabilizer_set(&CodeSpec::coarsest(n, d)?)?;
        println!(
            "E_11 E_21 (length {}), d = {d}: syndrome {:?}, flips Z = {}",
            majorana_length(&e),
            stabs.fixed_point_syndrome(&e),
            stabs.fixed_point_flips_logical_z(&e)
        );
    }
    Ok(())
}
