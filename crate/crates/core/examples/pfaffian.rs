//! Pfaffians of random antisymmetric matrices; Pf(A)^2 = det(A).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tetron::gaussian::{pfaffian, pfaffian_real};

fn main() -> tetron::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for dim in [2, 4, 8, 16] {
        let mut a = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                a[(i, j)] = z;
                a[(j, i)] = -z;
            }
        }
        let pf = pfaffian(&a)?;
        let det = a.clone().determinant();
        println!("dim {dim:>2}: Pf = {pf:.6}, |Pf^2 - det| / |det| = {:.1e}", (pf * pf - det).norm() / det.norm());
    }

    // The 2x2 block [[0, x], [-x, 0]] has Pfaffian x.
    let b = DMatrix::from_row_slice(2, 2, &[0.0, 3.5, -3.5, 0.0]);
    println!("Pf [[0, 3.5], [-3.5, 0]] = {}", pfaffian_real(&b)?);
    assert!(pfaffian_real(&DMatrix::<f64>::zeros(3, 3)).is_err());
    Ok(())
}
