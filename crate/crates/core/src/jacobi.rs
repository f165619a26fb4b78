//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Stop once the off-diagonal Frobenius norm falls below this fraction of
/// the full Frobenius norm.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Maximum number of full cyclic sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// symmetric matrix.
///
/// Only the upper triangle of `a` is read. Each eigenvector is normalised
/// so that its first entry with magnitude above `1e-12` is positive, which
/// makes the output a deterministic function of the input.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");

    // row-major working copy, symmetrised from the upper triangle
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            m[i * n + j] = a[(i, j)];
            m[j * n + i] = a[(i, j)];
        }
    }
    // v is stored row-major too: v[r * n + c]
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let total: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * total;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m, n);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));

    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let sign = (0..n)
            .map(|r| v[r * n + src])
            .find(|x| x.abs() > 1e-12)
            .map_or(1.0, f64::signum);
        for r in 0..n {
            vectors[(r, col)] = sign * v[r * n + src];
        }
    }
    Ok((values, vectors))
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += 2.0 * m[i * n + j] * m[i * n + j];
        }
    }
    s.sqrt()
}

/// Applies the rotation in the (p, q) plane that annihilates `m[p][q]`.
fn rotate(m: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let tau = (aqq - app) / (2.0 * apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + tau.hypot(1.0))
    } else {
        -1.0 / (-tau + tau.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    m[p * n + p] = app - t * apq;
    m[q * n + q] = aqq + t * apq;
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = m[r * n + p];
        let arq = m[r * n + q];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        m[r * n + p] = new_rp;
        m[p * n + r] = new_rp;
        m[r * n + q] = new_rq;
        m[q * n + r] = new_rq;
    }
    for r in 0..n {
        let vrp = v[r * n + p];
        let vrq = v[r * n + q];
        v[r * n + p] = c * vrp - s * vrq;
        v[r * n + q] = s * vrp + c * vrq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_decomposition(a: &DMatrix<f64>, values: &[f64], vectors: &DMatrix<f64>, tol: f64) {
        let n = a.nrows();
        let gram = vectors.transpose() * vectors;
        assert!((gram - DMatrix::<f64>::identity(n, n)).amax() < tol);
        for (i, &lambda) in values.iter().enumerate() {
            let col = vectors.column(i);
            let residual = a * col - col * lambda;
            assert!(residual.norm() < tol, "residual {}", residual.norm());
        }
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_matrix() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let (values, vectors) = symmetric_eigen(&a).unwrap();
        assert_eq!(values, vec![1.0, 2.0, 3.0]);
        check_decomposition(&a, &values, &vectors, 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let a = DMatrix::zeros(3, 3);
        let (values, vectors) = symmetric_eigen(&a).unwrap();
        assert_eq!(values, vec![0.0; 3]);
        assert_eq!(vectors, DMatrix::identity(3, 3));
    }

    #[test]
    fn two_by_two_closed_form() {
        // eigenvalues of [[2, 1], [1, 2]] are 1 and 3
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (values, vectors) = symmetric_eigen(&a).unwrap();
        assert!((values[0] - 1.0).abs() < 1e-15);
        assert!((values[1] - 3.0).abs() < 1e-15);
        check_decomposition(&a, &values, &vectors, 1e-14);
        // sign convention: first nonzero entry positive
        assert!(vectors[(0, 0)] > 0.0 && vectors[(0, 1)] > 0.0);
    }

    #[test]
    fn dense_symmetric_matrix() {
        let n = 9;
        let a = DMatrix::from_fn(n, n, |i, j| {
            let (i, j) = (i.min(j) as f64, i.max(j) as f64);
            (1.0 + i * 0.7 - j * 0.3).sin() + if i == j { 2.0 } else { 0.0 }
        });
        let (values, vectors) = symmetric_eigen(&a).unwrap();
        check_decomposition(&a, &values, &vectors, 1e-12);
        let trace: f64 = (0..n).map(|i| a[(i, i)]).sum();
        assert!((values.iter().sum::<f64>() - trace).abs() < 1e-12);
    }

    #[test]
    fn repeated_calls_are_bit_identical() {
        let a = DMatrix::from_fn(6, 6, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let first = symmetric_eigen(&a).unwrap();
        let second = symmetric_eigen(&a).unwrap();
        assert_eq!(first, second);
    }
}
