//! Complex polynomial arithmetic, evaluation and simultaneous root-finding.
//!
//! Roots are found by Aberth–Ehrlich iteration started from a perturbed
//! circle, then single-linkage clustered so multiple roots come back as one
//! cluster with a multiplicity. Clustering is what downstream spectral code
//! uses to recover algebraic multiplicities.

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Hard cap on Aberth–Ehrlich sweeps.
const MAX_SWEEPS: usize = 500;

/// Scaled-residual acceptance bound: every root r must satisfy
/// |p(r)| / (1 + |r|)^degree <= RESIDUAL_TOL for the monic normalization.
const RESIDUAL_TOL: f64 = 1e-10;

/// Per-root stagnation bound: iteration stops once every correction
/// satisfies |dz| <= STAGNATION_TOL * (1 + |z|). Multiple roots converge
/// linearly, so the loop must run past the residual bound to collapse the
/// root ring tightly enough for clustering.
const STAGNATION_TOL: f64 = 1e-14;

/// Default single-linkage clustering tolerance for eigenvalue-scale problems.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// A polynomial with complex coefficients in ascending degree order.
///
/// Trailing coefficients that are exactly zero are trimmed at construction;
/// the zero polynomial is the empty coefficient list.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

/// A cluster of numerically coincident roots.
#[derive(Debug, Clone, PartialEq)]
pub struct RootCluster {
    /// Mean of the clustered raw roots.
    pub center: Complex64,
    /// Number of raw roots absorbed by the cluster.
    pub multiplicity: usize,
    /// Largest distance from a member root to the center.
    pub spread: f64,
    /// Largest inclusion radius among the members: the accuracy to which the
    /// cluster can be located at all in working precision.
    pub uncertainty: f64,
}

impl RootCluster {
    pub fn simple(center: Complex64) -> Self {
        Self::new(center, 1)
    }

    pub fn new(center: Complex64, multiplicity: usize) -> Self {
        RootCluster {
            center,
            multiplicity,
            spread: 0.0,
            uncertainty: 0.0,
        }
    }
}

impl ComplexPolynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// exact zeros.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        ComplexPolynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        ComplexPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ComplexPolynomial {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// z^k
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        ComplexPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of z^k (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self, tol: f64) -> bool {
        self.leading()
            .is_some_and(|l| (l - Complex64::new(1.0, 0.0)).norm() <= tol)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        ComplexPolynomial { coeffs }
    }

    /// Product of two polynomials (convolution).
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }

    /// Monic rescaling. Errors on the zero polynomial.
    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        Ok(ComplexPolynomial {
            coeffs: self.coeffs.iter().map(|&c| c / lead).collect(),
        })
    }

    /// Monic polynomial with exactly the given roots and multiplicities,
    /// built by repeated linear-factor multiplication. The empty list gives
    /// the constant 1.
    pub fn from_roots(clusters: &[RootCluster]) -> Self {
        let mut p = Self::one();
        for cl in clusters {
            let factor = ComplexPolynomial::new(vec![-cl.center, Complex64::new(1.0, 0.0)]);
            for _ in 0..cl.multiplicity {
                p = p.mul(&factor);
            }
        }
        p
    }

    /// All roots with multiplicity, as clusters at tolerance `cluster_tol`.
    ///
    /// Raw roots are linked when they sit within `cluster_tol` of each other
    /// or when their Newton inclusion disks overlap: an m-fold root of an
    /// inexactly evaluated polynomial can only be located to ~eps^(1/m), and
    /// the Newton correction at a converged point measures exactly that
    /// attainable accuracy, so disk overlap recovers the multiplicity where
    /// a fixed tolerance cannot.
    ///
    /// A nonzero constant has no roots; the zero polynomial is rejected.
    pub fn roots(&self, cluster_tol: f64) -> Result<Vec<RootCluster>> {
        let degree = self.degree().ok_or(Error::ZeroPolynomial)?;
        if degree == 0 {
            return Ok(Vec::new());
        }
        let monic = self.monic()?;
        let (raw, radii) = aberth_ehrlich(&monic)?;
        let mut clusters = single_linkage(&raw, &radii, cluster_tol);
        refine_cluster_centers(&monic, &mut clusters, cluster_tol);
        Ok(clusters)
    }
}

/// Sharpens the center of every multiple-root cluster by Newton iteration on
/// the (m-1)-th derivative, which has a simple root where the original
/// polynomial has an m-fold one. The mean of an eps^(1/m) root ring is only
/// accurate to roughly the ring's asymmetry; the derivative root recovers
/// the center to near machine precision whenever the coefficients carry it.
///
/// On success the cluster's uncertainty becomes the size of the last Newton
/// correction: the member inclusion radii measure where the raw ring roots
/// can be, not how well the refined center is pinned down. A refinement that
/// leaves the cluster's own extent is discarded.
fn refine_cluster_centers(p: &ComplexPolynomial, clusters: &mut [RootCluster], cluster_tol: f64) {
    for cl in clusters.iter_mut() {
        if cl.multiplicity < 2 {
            continue;
        }
        let mut q = p.clone();
        for _ in 1..cl.multiplicity {
            q = q.derivative();
        }
        let dq = q.derivative();
        let mut x = cl.center;
        let mut last_step = f64::INFINITY;
        for _ in 0..20 {
            let qv = q.eval(x);
            let dv = dq.eval(x);
            if dv.norm() == 0.0 {
                break;
            }
            let step = qv / dv;
            x -= step;
            last_step = step.norm();
            if last_step <= 1e-16 * (1.0 + x.norm()) {
                break;
            }
        }
        let leash = cl.spread + cl.uncertainty + cluster_tol;
        if last_step.is_finite() && (x - cl.center).norm() <= leash {
            cl.center = x;
            cl.uncertainty = last_step.max(4.0 * f64::EPSILON * (1.0 + x.norm()));
        }
    }
}

/// Cap on Newton inclusion radii so a vanishing derivative cannot glue
/// together roots across the whole domain.
const INCLUSION_RADIUS_CAP: f64 = 1e-2;

/// Aberth–Ehrlich simultaneous iteration on a monic polynomial of degree >= 1.
///
/// Initial guesses sit on a circle of radius 1 + max |coefficient| at
/// golden-angle phases, which keeps runs deterministic and avoids the
/// symmetric stalls of equispaced starts. Returns the converged roots and a
/// per-root Newton inclusion radius degree * |p(z)| / |p'(z)|.
fn aberth_ehrlich(p: &ComplexPolynomial) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let degree = p.degree().expect("nonzero by caller");
    let dp = p.derivative();

    let radius = 1.0 + p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    // golden angle in radians
    let golden = std::f64::consts::TAU * (1.0 - 0.618_033_988_749_894_9);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(radius, 0.1 + golden * k as f64))
        .collect();

    let mut corrections = vec![Complex64::new(0.0, 0.0); degree];
    for _sweep in 0..MAX_SWEEPS {
        let mut stagnated = true;
        for i in 0..degree {
            let pv = p.eval(z[i]);
            let dv = dp.eval(z[i]);
            let newton = if dv.norm() == 0.0 {
                // flat spot: nudge off it deterministically
                Complex64::new(1e-12, 1e-12)
            } else {
                pv / dv
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..degree {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        continue;
                    }
                    repulsion += diff.inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let w = if denom.norm() == 0.0 {
                newton
            } else {
                newton / denom
            };
            corrections[i] = w;
            if w.norm() > STAGNATION_TOL * (1.0 + z[i].norm()) {
                stagnated = false;
            }
        }
        for i in 0..degree {
            z[i] -= corrections[i];
        }
        if stagnated {
            break;
        }
    }

    let mut worst = 0.0f64;
    let mut radii = Vec::with_capacity(degree);
    for &r in &z {
        let pv = p.eval(r).norm();
        let dv = dp.eval(r).norm();
        let scaled = pv / (1.0 + r.norm()).powi(degree as i32);
        worst = worst.max(scaled);
        // effective noise at r: evaluation rounding plus inherited
        // coefficient error, both proportional to sum_j |c_j| |r|^j. At a
        // point of an eps^(1/m) root ring the first-order radius
        // noise/|p'| comes out at ring/m, so the degree factor in front
        // restores overlap between neighbouring ring members.
        let noise = 25.0
            * f64::EPSILON
            * p.coeffs()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * r.norm() + c.norm());
        let incl = if dv == 0.0 {
            if pv == 0.0 {
                0.0
            } else {
                INCLUSION_RADIUS_CAP
            }
        } else {
            (degree as f64 * (pv + noise) / dv).min(INCLUSION_RADIUS_CAP)
        };
        radii.push(incl);
    }
    if worst > RESIDUAL_TOL {
        return Err(Error::NonConvergence { residual: worst });
    }
    Ok((z, radii))
}

/// Single-linkage clustering of raw roots: two roots link when closer than
/// `tol` or when their inclusion disks overlap.
///
/// Cluster order is deterministic: sorted by (re, im) of the center.
fn single_linkage(points: &[Complex64], radii: &[f64], tol: f64) -> Vec<RootCluster> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();

    fn find(label: &mut [usize], i: usize) -> usize {
        let mut root = i;
        while label[root] != root {
            root = label[root];
        }
        let mut cur = i;
        while label[cur] != root {
            let next = label[cur];
            label[cur] = root;
            cur = next;
        }
        root
    }

    for i in 0..n {
        for j in (i + 1)..n {
            let link = tol.max(radii[i] + radii[j]);
            if (points[i] - points[j]).norm() <= link {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }

    let mut groups: Vec<Vec<(Complex64, f64)>> = Vec::new();
    let mut group_of = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut label, i);
        if group_of[root] == usize::MAX {
            group_of[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of[root]].push((points[i], radii[i]));
    }

    let mut clusters: Vec<RootCluster> = groups
        .into_iter()
        .map(|members| {
            let m = members.len();
            let center = members.iter().map(|&(p, _)| p).sum::<Complex64>() / m as f64;
            let spread = members
                .iter()
                .map(|&(p, _)| (p - center).norm())
                .fold(0.0, f64::max);
            let uncertainty = members.iter().map(|&(_, r)| r).fold(0.0, f64::max);
            RootCluster {
                center,
                multiplicity: m,
                spread,
                uncertainty,
            }
        })
        .collect();
    clusters.sort_by(|a, b| {
        (a.center.re, a.center.im)
            .partial_cmp(&(b.center.re, b.center.im))
            .expect("finite root centers")
    });
    clusters
}
