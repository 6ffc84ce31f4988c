//! Symmetrized-polydisc machinery: the coordinate projection of a matrix,
//! the scalar rational function attached to a point, the chain of coordinate
//! reductions, membership tests and the torus max distance.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Error;
use crate::hypgeom;
use crate::matrix::ComplexMatrix;
use crate::matspec::char_poly;
use crate::poly::ComplexPolynomial;
use crate::Result;

/// Denominator magnitudes below this are treated as vanishing.
const DENOM_TOL: f64 = 1e-14;

/// Chain evaluation works on stack buffers of this size.
const MAX_CHAIN_DIM: usize = 16;

/// Fraction of skipped grid nodes above which the result carries a warning.
const SKIP_WARN_FRACTION: f64 = 0.01;

/// A point (s_1, ..., s_n) of coefficient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmPoint {
    s: Vec<Complex64>,
}

impl SymmPoint {
    pub fn new(s: Vec<Complex64>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::invalid("a coordinate point needs n >= 1 entries"));
        }
        Ok(SymmPoint { s })
    }

    pub fn origin(n: usize) -> Self {
        SymmPoint {
            s: vec![Complex64::new(0.0, 0.0); n.max(1)],
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.s
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.s.len()
    }

    /// The monic polynomial z^n + sum_j (-1)^j s_j z^{n-j} whose root
    /// locations define membership in the symmetrized polydisc.
    pub fn associated_poly(&self) -> ComplexPolynomial {
        let n = self.s.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        let mut sign = -1.0;
        for (j, &sj) in self.s.iter().enumerate() {
            coeffs[n - 1 - j] = sj * sign;
            sign = -sign;
        }
        ComplexPolynomial::new(coeffs)
    }
}

/// Coefficient projection: s_j(W) read off the characteristic polynomial
/// with the sign convention chi(z) = z^n + sum (-1)^j s_j z^{n-j}.
pub fn pi_n(w: &ComplexMatrix) -> SymmPoint {
    let chi = char_poly(w);
    let n = w.dim();
    let mut s = Vec::with_capacity(n);
    let mut sign = -1.0;
    for j in 1..=n {
        s.push(chi.coeff(n - j) * sign);
        sign = -sign;
    }
    SymmPoint { s }
}

/// The scalar rational function
/// f(z; S) = sum_{j=1..n} j s_j (-1)^j z^{j-1} / sum_{j=0..n-1} (n-j) s_j (-1)^j z^j
/// with s_0 = 1.
pub fn f_scalar(z: Complex64, s: &SymmPoint) -> Result<Complex64> {
    let n = s.len();
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(n as f64, 0.0);
    let mut sign = -1.0;
    let mut zpow = Complex64::new(1.0, 0.0);
    for j in 1..=n {
        let sj = s.s[j - 1] * sign;
        num += sj * (j as f64) * zpow;
        if j < n {
            den += sj * ((n - j) as f64) * zpow * z;
        }
        zpow *= z;
        sign = -sign;
    }
    if den.norm() <= DENOM_TOL {
        return Err(Error::DenominatorVanishes { z, stage: 0 });
    }
    Ok(num / den)
}

/// One coordinate reduction: maps an n-point to an (n-1)-point via
/// s~_j = ((n-j) s_j - z (j+1) s_{j+1}) / (n - z s_1).
pub fn coord_map(z: Complex64, s: &SymmPoint) -> Result<SymmPoint> {
    let n = s.len();
    if n < 2 {
        return Err(Error::invalid("coordinate reduction needs n >= 2"));
    }
    let den = Complex64::new(n as f64, 0.0) - z * s.s[0];
    if den.norm() <= DENOM_TOL {
        return Err(Error::DenominatorVanishes { z, stage: n });
    }
    let coords = (1..n)
        .map(|j| (s.s[j - 1] * ((n - j) as f64) - z * s.s[j] * ((j + 1) as f64)) / den)
        .collect();
    Ok(SymmPoint { s: coords })
}

/// The full reduction chain: applies the size-n map with z_{n-1} first, down
/// to the size-2 map with z_1, then the size-1 instance of the scalar
/// formula, which is the negated lone coordinate. On the diagonal
/// Z = (z, ..., z) this reproduces `f_scalar` identically.
pub fn chain_f(zs: &[Complex64], s: &SymmPoint) -> Result<Complex64> {
    let n = s.len();
    if n > MAX_CHAIN_DIM {
        return Err(Error::invalid(format!(
            "chain evaluation supports n <= {MAX_CHAIN_DIM}, got {n}"
        )));
    }
    if zs.len() + 1 != n {
        return Err(Error::invalid(format!(
            "chain over an (n-1)-torus needs {} arguments for n = {n}, got {}",
            n - 1,
            zs.len()
        )));
    }
    let mut cur = [Complex64::new(0.0, 0.0); MAX_CHAIN_DIM];
    cur[..n].copy_from_slice(&s.s);
    let mut size = n;
    while size >= 2 {
        let z = zs[size - 2];
        let den = Complex64::new(size as f64, 0.0) - z * cur[0];
        if den.norm() <= DENOM_TOL {
            return Err(Error::DenominatorVanishes { z, stage: size });
        }
        for j in 1..size {
            cur[j - 1] = (cur[j - 1] * ((size - j) as f64) - z * cur[j] * ((j + 1) as f64)) / den;
        }
        size -= 1;
    }
    Ok(-cur[0])
}

/// Membership in the symmetrized polydisc, with margin 1 - max |root|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnMembership {
    pub inside: bool,
    pub margin: f64,
}

/// Root-location membership test: all roots of the associated polynomial
/// strictly inside the disc.
pub fn in_gn(s: &SymmPoint, cluster_tol: f64) -> Result<GnMembership> {
    let clusters = s.associated_poly().roots(cluster_tol)?;
    let max_mod = clusters
        .iter()
        .map(|cl| cl.center.norm())
        .fold(0.0, f64::max);
    Ok(GnMembership {
        inside: max_mod < 1.0,
        margin: 1.0 - max_mod,
    })
}

/// Boundary-grid supremum of |f(z; S)|, the validator form of the
/// membership test. Returns the supremum and the number of skipped nodes.
pub fn in_gn_boundary_sup(s: &SymmPoint, grid: usize) -> (f64, usize) {
    let mut sup = 0.0f64;
    let mut skipped = 0usize;
    for k in 0..grid {
        let theta = std::f64::consts::TAU * k as f64 / grid as f64;
        match f_scalar(Complex64::from_polar(1.0, theta), s) {
            Ok(v) => sup = sup.max(v.norm()),
            Err(_) => skipped += 1,
        }
    }
    (sup, skipped)
}

/// Default per-angle grid for the torus distance, sized to the torus
/// dimension so desk-scale runs stay in seconds.
pub fn default_pn_grid(n: usize) -> usize {
    match n {
        0..=3 => 4096,
        4 => 512,
        _ => 128,
    }
}

/// Torus distance evaluation result.
#[derive(Debug, Clone, PartialEq)]
pub struct PnDistance {
    pub value: f64,
    /// The maximizing torus point.
    pub witness: Vec<Complex64>,
    pub skipped: usize,
    pub total: usize,
    /// Set when more than 1% of grid nodes had vanishing denominators.
    pub high_skip_rate: bool,
}

/// Max over the (n-1)-torus of the Poincaré distance between the chain
/// values of S and T, by exhaustive grid search with optional coordinate-wise
/// golden-section refinement from the best node.
///
/// Both points must lie in the symmetrized polydisc. Grid nodes where a
/// denominator vanishes are skipped and counted.
pub fn pn_distance(
    s: &SymmPoint,
    t: &SymmPoint,
    grid: usize,
    refine: bool,
    serial: bool,
    cluster_tol: f64,
) -> Result<PnDistance> {
    let n = s.len();
    if t.len() != n {
        return Err(Error::invalid("distance arguments must share a dimension"));
    }
    if n < 2 {
        return Err(Error::invalid("the torus distance needs n >= 2"));
    }
    if grid < 2 {
        return Err(Error::invalid("grid must have at least 2 nodes per angle"));
    }
    for point in [s, t] {
        let membership = in_gn(point, cluster_tol)?;
        if !membership.inside {
            return Err(Error::NotInSymmetrizedPolydisc {
                margin: membership.margin,
            });
        }
    }

    let torus_dim = n - 1;
    let total: usize = grid.pow(torus_dim as u32);

    let eval_node = |flat: usize| -> Option<f64> {
        let mut zs = [Complex64::new(0.0, 0.0); MAX_CHAIN_DIM];
        decode_angles(flat, grid, torus_dim, &mut zs);
        node_value(&zs[..torus_dim], s, t)
    };

    // reduce to (best value, earliest best index, skipped count)
    let combine = |a: (f64, usize, usize), b: (f64, usize, usize)| -> (f64, usize, usize) {
        let skipped = a.2 + b.2;
        if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
            (b.0, b.1, skipped)
        } else {
            (a.0, a.1, skipped)
        }
    };
    let fold_one = |acc: (f64, usize, usize), flat: usize| -> (f64, usize, usize) {
        match eval_node(flat) {
            Some(v) => combine(acc, (v, flat, 0)),
            None => (acc.0, acc.1, acc.2 + 1),
        }
    };

    let identity = (f64::NEG_INFINITY, usize::MAX, 0usize);
    let (best_value, best_flat, skipped) = if serial {
        (0..total).fold(identity, fold_one)
    } else {
        (0..total)
            .into_par_iter()
            .fold(|| identity, fold_one)
            .reduce(|| identity, combine)
    };

    if best_flat == usize::MAX {
        return Err(Error::invalid(
            "every torus node was skipped; the distance is undefined at this grid",
        ));
    }

    let mut angles = vec![0.0f64; torus_dim];
    {
        let mut flat = best_flat;
        for angle in angles.iter_mut() {
            *angle = std::f64::consts::TAU * (flat % grid) as f64 / grid as f64;
            flat /= grid;
        }
    }
    let mut value = best_value;
    if refine {
        let step = std::f64::consts::TAU / grid as f64;
        value = refine_angles(&mut angles, step, s, t).max(value);
    }

    let witness = angles
        .iter()
        .map(|&theta| Complex64::from_polar(1.0, theta))
        .collect();
    Ok(PnDistance {
        value,
        witness,
        skipped,
        total,
        high_skip_rate: (skipped as f64) > SKIP_WARN_FRACTION * (total as f64),
    })
}

fn decode_angles(
    mut flat: usize,
    grid: usize,
    torus_dim: usize,
    out: &mut [Complex64; MAX_CHAIN_DIM],
) {
    for slot in out.iter_mut().take(torus_dim) {
        let k = flat % grid;
        flat /= grid;
        *slot = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / grid as f64);
    }
}

fn node_value(zs: &[Complex64], s: &SymmPoint, t: &SymmPoint) -> Option<f64> {
    let fs = chain_f(zs, s).ok()?;
    let ft = chain_f(zs, t).ok()?;
    hypgeom::poincare_dist(fs, ft).ok()
}

/// Two passes of coordinate-wise golden-section maximization around the best
/// grid node, each over a window of one grid step on either side.
fn refine_angles(angles: &mut [f64], step: f64, s: &SymmPoint, t: &SymmPoint) -> f64 {
    let eval = |angles: &[f64]| -> f64 {
        let zs: Vec<Complex64> = angles
            .iter()
            .map(|&theta| Complex64::from_polar(1.0, theta))
            .collect();
        node_value(&zs, s, t).unwrap_or(f64::NEG_INFINITY)
    };
    let mut best = eval(angles);
    let inv_phi = 0.618_033_988_749_894_9;
    for _pass in 0..2 {
        for i in 0..angles.len() {
            let mut lo = angles[i] - step;
            let mut hi = angles[i] + step;
            let mut x1 = hi - inv_phi * (hi - lo);
            let mut x2 = lo + inv_phi * (hi - lo);
            let mut work = angles.to_vec();
            work[i] = x1;
            let mut f1 = eval(&work);
            work[i] = x2;
            let mut f2 = eval(&work);
            while hi - lo > 1e-12 {
                if f1 < f2 {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    work[i] = x2;
                    f2 = eval(&work);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    work[i] = x1;
                    f1 = eval(&work);
                }
            }
            let candidate = 0.5 * (lo + hi);
            work[i] = candidate;
            let value = eval(&work);
            if value > best {
                best = value;
                angles[i] = candidate;
            }
        }
    }
    best
}
