//! Pfaffians of complex antisymmetric matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pfaffian by skew-symmetric tridiagonalization (Parlett–Reid elimination
/// with partial pivoting), `O(m³)`.
///
/// Only the strictly lower triangle of `a` is read; the matrix is assumed
/// antisymmetric. An empty matrix has Pfaffian 1.
pub fn pfaffian(a: &DMatrix<Complex64>) -> Result<Complex64> {
    let m = a.nrows();
    if a.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: a.ncols(),
        });
    }
    if !m.is_multiple_of(2) {
        return Err(Error::OddDimension(m));
    }
    let mut a = a.clone();
    for r in 0..m {
        a[(r, r)] = Complex64::new(0.0, 0.0);
        for k in 0..r {
            a[(k, r)] = -a[(r, k)];
        }
    }
    let mut pf = Complex64::new(1.0, 0.0);
    for k in (0..m.saturating_sub(1)).step_by(2) {
        let (mut kp, mut best) = (k + 1, a[(k + 1, k)].norm());
        for r in k + 2..m {
            let v = a[(r, k)].norm();
            if v > best {
                kp = r;
                best = v;
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        if best == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let pivot = a[(k, k + 1)];
        pf *= pivot;
        if k + 2 < m {
            let tau: Vec<Complex64> = (k + 2..m).map(|c| a[(k, c)] / pivot).collect();
            let col: Vec<Complex64> = (k + 2..m).map(|r| a[(r, k + 1)]).collect();
            for (i, r) in (k + 2..m).enumerate() {
                for (j, c) in (k + 2..m).enumerate() {
                    a[(r, c)] += tau[i] * col[j] - col[i] * tau[j];
                }
            }
        }
    }
    Ok(pf)
}

/// Pfaffian of a real antisymmetric matrix.
pub fn pfaffian_real(a: &DMatrix<f64>) -> Result<f64> {
    Ok(pfaffian(&a.map(|x| Complex64::new(x, 0.0)))?.re)
}
