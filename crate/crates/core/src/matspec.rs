//! Spectral analysis of complex matrices.
//!
//! Eigenvalues are taken as clustered roots of the characteristic polynomial
//! (Faddeev–LeVerrier recurrence + Aberth iteration). The index of an
//! eigenvalue — its multiplicity in the minimal polynomial — comes from rank
//! stabilization of powers of `A - lambda I`, with ranks decided by
//! one-sided Jacobi singular values. Rank decisions that land in the
//! ambiguity band abort with [`Error::RankAmbiguity`] instead of guessing a
//! Jordan structure.

use num_complex::Complex64;

use crate::error::Error;
use crate::linalg;
use crate::matrix::ComplexMatrix;
use crate::poly::{ComplexPolynomial, RootCluster, DEFAULT_CLUSTER_TOL};
use crate::Result;

/// Default relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Tolerances shared by the spectral routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Single-linkage clustering tolerance for eigenvalues.
    pub cluster_tol: f64,
    /// Relative singular-value threshold for rank decisions.
    pub rank_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cluster_tol: DEFAULT_CLUSTER_TOL,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

/// One eigenvalue cluster with its algebraic multiplicity and index.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenClass {
    pub value: Complex64,
    pub alg_mult: usize,
    /// Multiplicity of the eigenvalue as a zero of the minimal polynomial.
    pub index: usize,
    /// Spread of the underlying root cluster.
    pub spread: f64,
}

/// Structure warnings produced while assembling a summary.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralWarning {
    /// Distinct-looking roots were merged into one eigenvalue cluster.
    MergedCluster { center: Complex64, spread: f64 },
    /// The rank chain did not stabilize by the algebraic multiplicity;
    /// the index was capped there.
    IndexSearchUnstable { lambda: Complex64 },
}

impl std::fmt::Display for SpectralWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectralWarning::MergedCluster { center, spread } => write!(
                f,
                "eigenvalue cluster at {center} merges roots spread over {spread:.3e}"
            ),
            SpectralWarning::IndexSearchUnstable { lambda } => write!(
                f,
                "rank chain for eigenvalue {lambda} did not stabilize; index capped at the algebraic multiplicity"
            ),
        }
    }
}

/// Eigenvalue clusters, spectral radius, characteristic and minimal
/// polynomials of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub eigen: Vec<EigenClass>,
    pub spectral_radius: f64,
    pub char_poly: ComplexPolynomial,
    pub min_poly: ComplexPolynomial,
    pub min_poly_degree: usize,
    pub warnings: Vec<SpectralWarning>,
}

impl SpectralSummary {
    pub fn is_non_derogatory(&self, dim: usize) -> bool {
        self.min_poly_degree == dim
    }
}

/// Spectral-ball membership with the margin 1 - r(A).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallMembership {
    pub inside: bool,
    pub margin: f64,
}

/// Monic characteristic polynomial by the Faddeev–LeVerrier trace recurrence.
pub fn char_poly(a: &ComplexMatrix) -> ComplexPolynomial {
    let n = a.dim();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = a.clone();
    coeffs[n - 1] = -m.trace();
    for k in 2..=n {
        // M_k = A (M_{k-1} + c_{n-k+1} I)
        let mut shifted = m;
        for i in 0..n {
            shifted[(i, i)] += coeffs[n - k + 1];
        }
        m = a * &shifted;
        coeffs[n - k] = -m.trace() / k as f64;
    }
    ComplexPolynomial::new(coeffs)
}

/// Horner evaluation of a polynomial at a matrix argument.
pub fn poly_at_matrix(p: &ComplexPolynomial, a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut acc = ComplexMatrix::zeros(n);
    for &c in p.coeffs().iter().rev() {
        acc = &(&acc * a) + &ComplexMatrix::identity(n).scale(c);
    }
    acc
}

/// Singular-value cuts for rank((A - lambda I)^k).
///
/// Two regimes: the relative floor
/// `rank_tol * max(sigma_max(B^k), sigma_max(B)^k)` (powers of a contraction
/// must not be judged against their own rounding floor), and the propagated
/// cluster uncertainty `10 k * spread * sigma_max(B)^{k-1}` — the center of
/// a clustered eigenvalue is only known to about its spread, and that error
/// enters B^k linearly k times. The ambiguity band applies to the first cut
/// only; the second is a semantic threshold (how finely eigenvalues are
/// resolved at all), not a noise boundary.
fn power_rank_cuts(
    sigma_max_power: f64,
    base_sigma_max: f64,
    k: usize,
    spread: f64,
    rank_tol: f64,
) -> (f64, f64) {
    let base = base_sigma_max.max(1e-300);
    let reference = sigma_max_power.max(base.powi(k as i32));
    let uncertainty = 10.0 * k as f64 * spread * base.powi(k as i32 - 1);
    (rank_tol * reference, uncertainty)
}

/// Rank below the combined cut; ambiguous when a singular value sits in the
/// decade band around the rank_tol cut without being absorbed by the
/// uncertainty threshold.
fn rank_with_cuts(sigma: &[f64], rank_cut: f64, uncertainty_cut: f64) -> (usize, bool) {
    let cut = rank_cut.max(uncertainty_cut);
    let rank = sigma.iter().filter(|&&s| s > cut).count();
    let ambiguous = sigma
        .iter()
        .any(|&s| s > uncertainty_cut && s > rank_cut / 10.0 && s < rank_cut * 10.0);
    (rank, ambiguous)
}

/// Index of `lambda` (multiplicity in the minimal polynomial): the smallest
/// k >= 1 with rank((A - lambda I)^k) = rank((A - lambda I)^{k+1}).
///
/// Simple eigenvalues short-circuit to 1. The search is capped at the
/// algebraic multiplicity, where the chain must have stabilized in exact
/// arithmetic; failure to do so is reported as a warning, an ambiguous rank
/// decision as an error.
fn eigen_index(
    a: &ComplexMatrix,
    lambda: Complex64,
    alg_mult: usize,
    uncertainty: f64,
    tols: &Tolerances,
) -> Result<(usize, bool)> {
    if alg_mult == 1 {
        return Ok((1, false));
    }
    let b = a.shifted(lambda);
    let base_sigma = linalg::singular_values(&b);
    let base_sigma_max = base_sigma.first().copied().unwrap_or(0.0);

    let rank_of = |power: &ComplexMatrix, k: usize| -> (usize, bool) {
        let sigma = linalg::singular_values(power);
        let sigma_max = sigma.first().copied().unwrap_or(0.0);
        let (rank_cut, unc_cut) =
            power_rank_cuts(sigma_max, base_sigma_max, k, uncertainty, tols.rank_tol);
        rank_with_cuts(&sigma, rank_cut, unc_cut)
    };

    let (rank_cut1, unc_cut1) = power_rank_cuts(
        base_sigma_max,
        base_sigma_max,
        1,
        uncertainty,
        tols.rank_tol,
    );
    let (mut prev_rank, mut prev_amb) = rank_with_cuts(&base_sigma, rank_cut1, unc_cut1);
    let mut power = b.clone();
    for k in 1..=alg_mult {
        power = &power * &b;
        let (next_rank, next_amb) = rank_of(&power, k + 1);
        if next_rank == prev_rank {
            if prev_amb || next_amb {
                return Err(Error::RankAmbiguity {
                    lambda: Some(lambda),
                });
            }
            return Ok((k, false));
        }
        if prev_amb || next_amb {
            return Err(Error::RankAmbiguity {
                lambda: Some(lambda),
            });
        }
        prev_rank = next_rank;
        prev_amb = next_amb;
    }
    Ok((alg_mult, true))
}

/// Full spectral summary at the given tolerances.
pub fn spectral_summary(a: &ComplexMatrix, tols: &Tolerances) -> Result<SpectralSummary> {
    let chi = char_poly(a);
    let clusters = chi.roots(tols.cluster_tol)?;

    let mut warnings = Vec::new();
    let mut eigen = Vec::with_capacity(clusters.len());
    for cl in &clusters {
        if cl.multiplicity >= 2 && cl.spread > tols.cluster_tol / 10.0 {
            warnings.push(SpectralWarning::MergedCluster {
                center: cl.center,
                spread: cl.spread,
            });
        }
        let uncertainty = cl.spread.max(cl.uncertainty);
        let (index, unstable) = eigen_index(a, cl.center, cl.multiplicity, uncertainty, tols)?;
        if unstable {
            warnings.push(SpectralWarning::IndexSearchUnstable { lambda: cl.center });
        }
        eigen.push(EigenClass {
            value: cl.center,
            alg_mult: cl.multiplicity,
            index,
            spread: cl.spread,
        });
    }

    let spectral_radius = eigen.iter().map(|e| e.value.norm()).fold(0.0, f64::max);
    let min_poly = ComplexPolynomial::from_roots(
        &eigen
            .iter()
            .map(|e| RootCluster::new(e.value, e.index))
            .collect::<Vec<_>>(),
    );
    let min_poly_degree = eigen.iter().map(|e| e.index).sum();

    Ok(SpectralSummary {
        eigen,
        spectral_radius,
        char_poly: chi,
        min_poly,
        min_poly_degree,
        warnings,
    })
}

/// Minimal polynomial found independently of eigenvalues: the smallest d
/// with {I, A, ..., A^d} linearly dependent, detected by singular values of
/// the vectorized Krylov matrix. The monic dependence polynomial is read off
/// the right singular vector of the vanishing singular value.
pub fn min_poly_krylov(a: &ComplexMatrix, tols: &Tolerances) -> Result<ComplexPolynomial> {
    let n = a.dim();
    let mut krylov: Vec<Vec<Complex64>> = vec![ComplexMatrix::identity(n).vectorize()];
    let mut power = ComplexMatrix::identity(n);
    for d in 1..=n {
        power = &power * a;
        krylov.push(power.vectorize());

        let mut cols = krylov.clone();
        let (sigma, v) = linalg::jacobi_svd(&mut cols, true);
        let (rank, ambiguous) = linalg::rank_from_singular_values(&sigma, tols.rank_tol, 0.0);
        if rank == d + 1 {
            if ambiguous {
                return Err(Error::RankAmbiguity { lambda: None });
            }
            continue;
        }
        if ambiguous {
            return Err(Error::RankAmbiguity { lambda: None });
        }
        // dependence found: null direction is the trailing right singular vector
        let v = v.expect("V requested");
        let null = &v[d];
        let lead = null[d];
        if lead.norm() < 1e-8 * null.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() {
            return Err(Error::RankAmbiguity { lambda: None });
        }
        let coeffs: Vec<Complex64> = null.iter().map(|&c| c / lead).collect();
        return Ok(ComplexPolynomial::new(coeffs));
    }
    // the characteristic polynomial annihilates, so dependence must appear
    // by d = n; reaching here means every rank decision overshot
    Err(Error::RankAmbiguity { lambda: None })
}

/// Membership in the spectral unit ball, with margin 1 - r(A).
pub fn is_in_spectral_ball(a: &ComplexMatrix, tols: &Tolerances) -> Result<BallMembership> {
    let chi = char_poly(a);
    let clusters = chi.roots(tols.cluster_tol)?;
    let r = clusters
        .iter()
        .map(|cl| cl.center.norm())
        .fold(0.0, f64::max);
    Ok(BallMembership {
        inside: r < 1.0,
        margin: 1.0 - r,
    })
}

/// Non-derogatory test: the minimal polynomial has full degree, equivalently
/// every eigenvalue has geometric multiplicity one.
pub fn is_non_derogatory(a: &ComplexMatrix, tols: &Tolerances) -> Result<bool> {
    let summary = spectral_summary(a, tols)?;
    Ok(summary.min_poly_degree == a.dim())
}

/// Companion matrix of a monic polynomial, unit subdiagonal with the negated
/// ascending coefficients down the last column.
pub fn companion(p: &ComplexPolynomial) -> Result<ComplexMatrix> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    if degree < 1 {
        return Err(Error::invalid("companion matrix needs degree >= 1"));
    }
    if !p.is_monic(1e-12) {
        return Err(Error::NotMonic {
            leading: p.leading().unwrap(),
        });
    }
    let mut m = ComplexMatrix::zeros(degree);
    for i in 1..degree {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        m[(i, degree - 1)] = -p.coeff(i);
    }
    Ok(m)
}

/// The holomorphic family F_d: a d x d shift block with `zeta` in its
/// top-right corner, direct-summed with `zeta` times the identity.
///
/// Requires n >= 3, 2 <= d <= n-1 and |zeta| < 1.
pub fn example_fd(n: usize, d: usize, zeta: Complex64) -> Result<ComplexMatrix> {
    if n < 3 {
        return Err(Error::invalid("example_fd needs n >= 3"));
    }
    if d < 2 || d > n - 1 {
        return Err(Error::invalid(format!(
            "example_fd needs 2 <= d <= n-1, got d = {d}, n = {n}"
        )));
    }
    if zeta.norm() >= 1.0 {
        return Err(Error::OutsideDisc { z: zeta });
    }
    let mut m = ComplexMatrix::zeros(n);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    m[(0, d - 1)] = zeta;
    for i in d..n {
        m[(i, i)] = zeta;
    }
    Ok(m)
}

/// The sharpness self-map block: for input X of dimension n, builds the
/// block-diagonal matrix with the d x d companion-style block carrying
/// tr(X)/n in its corner (the bare scalar for d = 1) and (tr(X)/n) I on the
/// rest of the diagonal. Output has dimension n.
pub fn sharpness_map(d: usize, n: usize, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if d < 1 || d > n {
        return Err(Error::invalid(format!(
            "sharpness_map needs 1 <= d <= n, got d = {d}, n = {n}"
        )));
    }
    if x.dim() != n {
        return Err(Error::invalid(format!(
            "sharpness_map input has dimension {}, expected {n}",
            x.dim()
        )));
    }
    let mean_trace = x.trace() / n as f64;
    let mut m = ComplexMatrix::zeros(n);
    if d == 1 {
        m[(0, 0)] = mean_trace;
    } else {
        for i in 1..d {
            m[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        m[(0, d - 1)] = mean_trace;
    }
    for i in d..n {
        m[(i, i)] = mean_trace;
    }
    Ok(m)
}
