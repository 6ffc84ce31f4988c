//! Self-contained factorizations: partial-pivoting LU, one-sided Jacobi SVD
//! and a cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! One-sided Jacobi is used for every rank decision because it delivers small
//! singular values with high relative accuracy, which keeps the rank
//! ambiguity bands meaningful.

use num_complex::Complex64;

use crate::error::Error;
use crate::matrix::ComplexMatrix;
use crate::Result;

const JACOBI_SWEEPS: usize = 60;
const JACOBI_TOL: f64 = 1e-14;

/// LU factorization with partial pivoting; solves and inverts.
pub struct Lu {
    dim: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(m: &ComplexMatrix) -> Result<Lu> {
        let n = m.dim();
        let mut lu: Vec<Complex64> = m.entries().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut pivot = k;
            let mut best = lu[k * n + k].norm();
            for i in (k + 1)..n {
                let mag = lu[i * n + k].norm();
                if mag > best {
                    best = mag;
                    pivot = i;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular);
            }
            if pivot != k {
                for j in 0..n {
                    lu.swap(k * n + j, pivot * n + j);
                }
                perm.swap(k, pivot);
            }
            let d = lu[k * n + k];
            for i in (k + 1)..n {
                let f = lu[i * n + k] / d;
                lu[i * n + k] = f;
                for j in (k + 1)..n {
                    let sub = f * lu[k * n + j];
                    lu[i * n + j] -= sub;
                }
            }
        }
        Ok(Lu { dim: n, lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut inv = ComplexMatrix::zeros(n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e);
            e[j] = Complex64::new(0.0, 0.0);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Inverse by partial-pivoting elimination.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(Lu::factor(m)?.inverse())
}

/// One-norm condition estimate ||M||_1 ||M^-1||_1; infinity when singular.
pub fn cond_one(m: &ComplexMatrix) -> f64 {
    match inverse(m) {
        Ok(inv) => m.norm_one() * inv.norm_one(),
        Err(_) => f64::INFINITY,
    }
}

/// Singular values (descending) of a set of column vectors, by one-sided
/// Jacobi orthogonalization. Optionally accumulates the right factor V so a
/// null vector can be read off.
///
/// The columns all must share one length; the count may differ from it.
pub fn jacobi_svd(
    columns: &mut [Vec<Complex64>],
    want_v: bool,
) -> (Vec<f64>, Option<Vec<Vec<Complex64>>>) {
    let k = columns.len();
    let mut v: Option<Vec<Vec<Complex64>>> = if want_v {
        Some(
            (0..k)
                .map(|j| {
                    let mut col = vec![Complex64::new(0.0, 0.0); k];
                    col[j] = Complex64::new(1.0, 0.0);
                    col
                })
                .collect(),
        )
    } else {
        None
    };

    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let (a, b, g) = gram_entries(&columns[p], &columns[q]);
                if g.norm() <= JACOBI_TOL * (a * b).sqrt() || g.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = g / g.norm();
                let tau = (b - a) / (2.0 * g.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(columns, p, q, c, s, phase);
                if let Some(vcols) = v.as_mut() {
                    rotate_pair(vcols, p, q, c, s, phase);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..k).collect();
    let norms: Vec<f64> = columns
        .iter()
        .map(|col| col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));
    let sigma: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let v_sorted = v.map(|vcols| order.iter().map(|&i| vcols[i].clone()).collect());
    (sigma, v_sorted)
}

fn gram_entries(u: &[Complex64], w: &[Complex64]) -> (f64, f64, Complex64) {
    let mut a = 0.0;
    let mut b = 0.0;
    let mut g = Complex64::new(0.0, 0.0);
    for (x, y) in u.iter().zip(w.iter()) {
        a += x.norm_sqr();
        b += y.norm_sqr();
        g += x.conj() * y;
    }
    (a, b, g)
}

/// Applies the two-column rotation [u, w] <- [c u - s e^{-i phi} w,
/// s u + c e^{-i phi} w] that orthogonalizes the pair.
fn rotate_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let phase_conj = phase.conj();
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (up, wq) in cp.iter_mut().zip(cq.iter_mut()) {
        let u = *up;
        let w = phase_conj * *wq;
        *up = u * c - w * s;
        *wq = u * s + w * c;
    }
}

/// Singular values of a square matrix, descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut cols = m.columns();
    jacobi_svd(&mut cols, false).0
}

/// Rank decision against an explicit singular-value cut, flagging values in
/// the ambiguity band one decade wide on each side of the cut.
pub fn rank_with_cut(sigma: &[f64], cut: f64) -> (usize, bool) {
    if cut <= 0.0 {
        return (sigma.iter().filter(|&&s| s > 0.0).count(), false);
    }
    let rank = sigma.iter().filter(|&&s| s > cut).count();
    let ambiguous = sigma.iter().any(|&s| s > cut / 10.0 && s < cut * 10.0);
    (rank, ambiguous)
}

/// Rank decision from singular values with a relative threshold and an
/// ambiguity band one decade wide on each side.
///
/// `scale` sets the threshold reference: the cut is
/// `rank_tol * max(sigma_max, scale)`, so matrices that are small because
/// they are powers of a contraction are measured against the power of the
/// base scale rather than against their own noise floor.
pub fn rank_from_singular_values(sigma: &[f64], rank_tol: f64, scale: f64) -> (usize, bool) {
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let reference = sigma_max.max(scale);
    if reference == 0.0 {
        return (0, false);
    }
    rank_with_cut(sigma, rank_tol * reference)
}

/// Eigenvalues (ascending) of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input is trusted to be Hermitian; only its lower triangle is read
/// through the Hermitian symmetrization below.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    // work on a Hermitian-averaged copy so tiny asymmetries cannot drift
    let mut h = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let fro = h.norm_fro().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += h[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= JACOBI_TOL * fro {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = h[(p, q)];
                if hpq.norm() <= 1e-300 {
                    continue;
                }
                let phase = hpq / hpq.norm();
                let tau = (h[(q, q)].re - h[(p, p)].re) / (2.0 * hpq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // columns p, q of h
                for i in 0..n {
                    let u = h[(i, p)];
                    let w = phase.conj() * h[(i, q)];
                    h[(i, p)] = u * c - w * s;
                    h[(i, q)] = u * s + w * c;
                }
                // rows p, q of h (conjugate rotation)
                for j in 0..n {
                    let u = h[(p, j)];
                    let w = phase * h[(q, j)];
                    h[(p, j)] = u * c - w * s;
                    h[(q, j)] = u * s + w * c;
                }
                h[(p, q)] = Complex64::new(0.0, 0.0);
                h[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    eig
}
