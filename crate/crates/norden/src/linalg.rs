//! Small dense linear algebra over either scalar field.
//!
//! Metric dimensions are tiny (≤ 16), so inversion is Gauss-Jordan with
//! partial pivoting, generic over the field so complex metrics reuse the
//! real code path. Signature counting is the one place that needs a real
//! symmetric eigensolver, which comes from `nalgebra`.

use nalgebra::DMatrix;
use ndarray::Array2;

use crate::error::Error;
use crate::field::Scalar;
use crate::Result;

/// A matrix counts as singular when `|det| ≤ SINGULAR_REL_TOL · ‖A‖∞ⁿ`.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

/// An eigenvalue counts as numerically null when `|λ| < NULL_EIGEN_REL_TOL · max|λ|`.
pub const NULL_EIGEN_REL_TOL: f64 = 1e-9;

/// Invert a square matrix, returning `(inverse, determinant)`.
///
/// Gauss-Jordan with partial pivoting on `|·|`. Fails with
/// [`Error::SingularMetric`] when the determinant falls under the
/// size-relative threshold; callers inverting frames should remap that to
/// [`Error::FrameSingular`].
pub fn invert<S: Scalar>(m: &Array2<S>) -> Result<(Array2<S>, S)> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "invert expects a square matrix");

    // ∞-norm for the relative singularity threshold.
    let mut max_row_norm = 0.0_f64;
    for i in 0..n {
        let row_sum: f64 = (0..n).map(|j| m[[i, j]].abs()).sum();
        max_row_norm = max_row_norm.max(row_sum);
    }
    let threshold = SINGULAR_REL_TOL * max_row_norm.powi(n as i32);

    // Work matrix [A | I].
    let mut a: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| m[[i, j]]).collect()).collect();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect()
        })
        .collect();

    let mut det = S::one();
    for col in 0..n {
        // Partial pivot: largest |entry| in this column at or below the diagonal.
        let mut pivot_row = col;
        let mut pivot_abs = a[col][col].abs();
        for r in col + 1..n {
            let cand = a[r][col].abs();
            if cand > pivot_abs {
                pivot_abs = cand;
                pivot_row = r;
            }
        }
        if pivot_abs == 0.0 {
            return Err(Error::SingularMetric {
                det: 0.0,
                threshold,
            });
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            inv.swap(pivot_row, col);
            det = -det;
        }
        let pivot = a[col][col];
        det = det * pivot;
        let pivot_inv = S::one() / pivot;
        for j in 0..n {
            a[col][j] = a[col][j] * pivot_inv;
            inv[col][j] = inv[col][j] * pivot_inv;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r][col];
            if factor.abs() == 0.0 {
                continue;
            }
            for j in 0..n {
                a[r][j] = a[r][j] - factor * a[col][j];
                inv[r][j] = inv[r][j] - factor * inv[col][j];
            }
        }
    }

    if det.abs() <= threshold {
        return Err(Error::SingularMetric {
            det: det.abs(),
            threshold,
        });
    }

    let inverse = Array2::from_shape_fn((n, n), |(i, j)| inv[i][j]);
    Ok((inverse, det))
}

/// Determinant alone (same pivoting and threshold reporting as [`invert`],
/// but a singular matrix is a legitimate answer here, so no threshold check).
pub fn det<S: Scalar>(m: &Array2<S>) -> S {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "det expects a square matrix");
    let mut a: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| m[[i, j]]).collect()).collect();
    let mut det = S::one();
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_abs = a[col][col].abs();
        for r in col + 1..n {
            let cand = a[r][col].abs();
            if cand > pivot_abs {
                pivot_abs = cand;
                pivot_row = r;
            }
        }
        if pivot_abs == 0.0 {
            return S::zero();
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            det = -det;
        }
        let pivot = a[col][col];
        det = det * pivot;
        let pivot_inv = S::one() / pivot;
        for r in col + 1..n {
            let factor = a[r][col] * pivot_inv;
            if factor.abs() == 0.0 {
                continue;
            }
            for j in col..n {
                a[r][j] = a[r][j] - factor * a[col][j];
            }
        }
    }
    det
}

/// Signature `(p, q)` of a real symmetric matrix: counts of positive and
/// negative eigenvalues. Fails with [`Error::NearNullEigenvalue`] when any
/// eigenvalue is too close to zero relative to the largest, since the sign
/// count would then be numerically meaningless.
pub fn signature(g: &Array2<f64>) -> Result<(usize, usize)> {
    let n = g.nrows();
    assert_eq!(n, g.ncols(), "signature expects a square matrix");
    // Symmetrize to guard against roundoff asymmetry before the eigensolver.
    let sym = DMatrix::from_fn(n, n, |i, j| 0.5 * (g[[i, j]] + g[[j, i]]));
    let eigen = sym.symmetric_eigen();
    let max_abs = eigen
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &l| acc.max(l.abs()));
    if max_abs == 0.0 {
        return Err(Error::NearNullEigenvalue {
            value: 0.0,
            max_abs: 0.0,
        });
    }
    let mut pos = 0;
    let mut neg = 0;
    for &l in eigen.eigenvalues.iter() {
        if l.abs() < NULL_EIGEN_REL_TOL * max_abs {
            return Err(Error::NearNullEigenvalue {
                value: l,
                max_abs,
            });
        }
        if l > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    Ok((pos, neg))
}
