//! Jacobi-rotation kernels: cyclic two-sided Jacobi for symmetric
//! eigenproblems and one-sided (Hestenes) Jacobi for the SVD.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues ascending; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }
}

/// Full spectrum of a symmetric matrix. Sweeps stop once the off-diagonal
/// Frobenius norm drops below `tol·‖S‖_F`.
pub fn symmetric_eigen(s: &Matrix, tol: f64) -> Result<SymmetricEigen> {
    if !s.is_square() {
        return Err(Error::NotSymmetric(f64::INFINITY));
    }
    let asym = s.asymmetry();
    if asym > 1e-12 * s.max_abs().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let n = s.nrows();
    let mut a = Matrix::from_fn(n, n, |i, j| 0.5 * (s[(i, j)] + s[(j, i)]));
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();
    let target = (tol * scale).powi(2);

    let off = |a: &Matrix| -> f64 {
        let mut sum = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                sum += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        sum
    };

    let mut sweeps = 0;
    while off(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    Ok(SymmetricEigen {
        values: order.iter().map(|&i| a[(i, i)]).collect(),
        vectors: Matrix::from_fn(n, n, |r, c| v[(r, order[c])]),
    })
}

/// Singular values ascending with matching right singular vectors (columns).
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub right: Matrix,
}

impl Svd {
    pub fn right_vector(&self, k: usize) -> Vec<f64> {
        self.right.column(k)
    }
}

/// One-sided Jacobi SVD of a square matrix.
pub fn svd(m: &Matrix) -> Result<Svd> {
    assert!(m.is_square());
    let n = m.nrows();
    let mut u = m.clone();
    let mut v = Matrix::identity(n);
    // pairs orthogonal to a few ulps would otherwise flip back and forth
    let eps = n as f64 * f64::EPSILON;
    // columns at the rounding floor carry no direction worth orthogonalising
    let floor = (8.0 * eps * m.frobenius_norm()).powi(2);
    for sweep in 0.. {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut al, mut be, mut ga) = (0.0, 0.0, 0.0);
                for i in 0..n {
                    let (x, y) = (u[(i, p)], u[(i, q)]);
                    al += x * x;
                    be += y * y;
                    ga += x * y;
                }
                if ga == 0.0 || ga.abs() <= eps * (al * be).sqrt() || al.min(be) <= floor {
                    continue;
                }
                rotated = true;
                let zeta = (be - al) / (2.0 * ga);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let (x, y) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * x - s * y;
                    u[(i, q)] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sig: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| u[(i, j)] * u[(i, j)]).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sig[i].total_cmp(&sig[j]));
    Ok(Svd {
        values: order.iter().map(|&i| sig[i]).collect(),
        right: Matrix::from_fn(n, n, |r, c| v[(r, order[c])]),
    })
}
