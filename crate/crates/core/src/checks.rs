//! Executable necessary-condition checkers for disc-to-spectral-ball
//! interpolation data, plus generators for random holomorphic test maps.
//!
//! A `Pass` never certifies that an interpolant exists — these are necessary
//! conditions only. `Fail` is reserved for "no interpolant can exist":
//! checkers whose hypotheses are not met by the data report `Inconclusive`
//! rather than guessing.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::hypgeom::{self, BlaschkeProduct};
use crate::linalg;
use crate::matrix::ComplexMatrix;
use crate::matspec::{self, SpectralSummary, SpectralWarning, Tolerances};
use crate::symm::{self, SymmPoint};
use crate::Result;

/// Absolute slack used by the inequality checkers when comparing O(1)
/// quantities for pass/fail and for equality detection.
pub const EQ_TOL: f64 = 1e-9;

/// Slack for the Blaschke bound |B(mu)| <= |zeta|.
pub const BLASCHKE_SLACK: f64 = 1e-7;

/// Shared checker options. The grid fields apply to the samplers that use
/// them; tolerances feed every spectral computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Angular nodes on the unit circle.
    pub boundary_grid: usize,
    /// Interior polar rings at radii k/(rings+1), each with the boundary
    /// angular resolution.
    pub interior_rings: usize,
    /// The Pick matrix passes when its smallest eigenvalue stays above
    /// -psd_tol at every sampled point.
    pub psd_tol: f64,
    /// Disable data-parallel grid scans.
    pub serial: bool,
    pub tolerances: Tolerances,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            boundary_grid: 2048,
            interior_rings: 8,
            psd_tol: 1e-9,
            serial: false,
            tolerances: Tolerances::default(),
        }
    }
}

/// Checker outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Which checker produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Pick-matrix positivity over the sampled disc.
    PickPositivity,
    /// Two-point boundary supremum against the pseudohyperbolic distance.
    TwoPointBound,
    /// Eigenvalue-product bound with minimal-polynomial multiplicities.
    SchwarzProducts,
    /// Spectral-radius growth bound for self-maps.
    SelfMapBound,
    /// Blaschke bound |B(mu)| <= |zeta| along a holomorphic map.
    BlaschkeBound,
    /// Single-node data: a constant interpolant always exists.
    ConstantInterpolant,
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::PickPositivity => "pick-positivity",
            CheckKind::TwoPointBound => "two-point-bound",
            CheckKind::SchwarzProducts => "schwarz-products",
            CheckKind::SelfMapBound => "selfmap-bound",
            CheckKind::BlaschkeBound => "blaschke-bound",
            CheckKind::ConstantInterpolant => "constant-interpolant",
        }
    }
}

/// Which side of the two-sided eigenvalue-product maximum was extremal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductSide {
    /// Maximum over the second spectrum of products over the first.
    OverFirstSpectrum,
    /// Maximum over the first spectrum of products over the second.
    OverSecondSpectrum,
}

/// Checker-specific evidence for the verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Extremal sample point in the closed disc.
    Point { z: Complex64 },
    /// Extremal eigenvalue and the product value it attains.
    Eigen {
        side: ProductSide,
        value: Complex64,
        product: f64,
    },
    /// Measured spectral radius against the bound it must not exceed.
    Radii { spectral_radius: f64, bound: f64 },
    /// Worst sample of the Blaschke bound.
    Sample {
        zeta: Complex64,
        eigenvalue: Complex64,
        excess: f64,
    },
}

/// Structured warnings attached to a report.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// A node matrix is derogatory, so the Pick-type conditions carry no
    /// obstruction force on this data.
    NotNonDerogatory { node: usize },
    /// A Jordan-structure decision was numerically ambiguous.
    RankAmbiguity {
        node: Option<usize>,
        lambda: Option<Complex64>,
    },
    /// Grid nodes skipped over vanishing denominators.
    GridSkips { skipped: usize, total: usize },
    /// An eigenvalue cluster merged roots with visible spread.
    MergedCluster {
        node: usize,
        center: Complex64,
        spread: f64,
    },
    /// The rank chain was capped at the algebraic multiplicity.
    IndexSearchUnstable { node: usize, lambda: Complex64 },
    /// A map value expected in the spectral unit ball was outside it.
    NotInBall { location: &'static str, radius: f64 },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::NotNonDerogatory { node } => {
                write!(f, "node {node} is derogatory; the condition is only an obstruction for non-derogatory data")
            }
            Diagnostic::RankAmbiguity { node, lambda } => {
                write!(f, "rank decision ambiguous")?;
                if let Some(n) = node {
                    write!(f, " at node {n}")?;
                }
                if let Some(l) = lambda {
                    write!(f, " near eigenvalue {l}")?;
                }
                Ok(())
            }
            Diagnostic::GridSkips { skipped, total } => {
                write!(
                    f,
                    "{skipped} of {total} grid nodes skipped (vanishing denominators)"
                )
            }
            Diagnostic::MergedCluster {
                node,
                center,
                spread,
            } => {
                write!(f, "node {node}: eigenvalue cluster at {center} merges roots spread over {spread:.3e}")
            }
            Diagnostic::IndexSearchUnstable { node, lambda } => {
                write!(f, "node {node}: index search capped at eigenvalue {lambda}")
            }
            Diagnostic::NotInBall { location, radius } => {
                write!(
                    f,
                    "map value at {location} has spectral radius {radius:.6} >= 1"
                )
            }
        }
    }
}

/// Result of one checker run. `Fail` always carries a witness and
/// `Inconclusive` always carries at least one diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub kind: CheckKind,
    pub verdict: Verdict,
    /// Signed distance to the decision boundary; positive is comfortable.
    pub margin: f64,
    pub witness: Option<Witness>,
    pub diagnostics: Vec<Diagnostic>,
}

impl CheckReport {
    fn new(
        kind: CheckKind,
        verdict: Verdict,
        margin: f64,
        witness: Option<Witness>,
        diagnostics: Vec<Diagnostic>,
    ) -> Self {
        debug_assert!(verdict != Verdict::Fail || witness.is_some());
        debug_assert!(verdict != Verdict::Inconclusive || !diagnostics.is_empty());
        CheckReport {
            kind,
            verdict,
            margin,
            witness,
            diagnostics,
        }
    }
}

/// Validated interpolation data: distinct disc nodes with same-dimension
/// matrices of spectral radius below one.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationDataset {
    nodes: Vec<(Complex64, ComplexMatrix)>,
    dim: usize,
}

impl InterpolationDataset {
    pub fn new(nodes: Vec<(Complex64, ComplexMatrix)>, tols: &Tolerances) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::invalid("a dataset needs at least one node"));
        }
        let dim = nodes[0].1.dim();
        for (j, (zeta, w)) in nodes.iter().enumerate() {
            if w.dim() != dim {
                return Err(Error::invalid(format!(
                    "node {j}: matrix dimension {} differs from {dim}",
                    w.dim()
                )));
            }
            if zeta.norm() >= 1.0 {
                return Err(Error::invalid(format!(
                    "node {j}: interpolation point {zeta} is not inside the unit disc"
                )));
            }
            let membership = matspec::is_in_spectral_ball(w, tols)?;
            if !membership.inside {
                return Err(Error::invalid(format!(
                    "node {j}: matrix has spectral radius {:.6} >= 1",
                    1.0 - membership.margin
                )));
            }
        }
        for j in 0..nodes.len() {
            for k in (j + 1)..nodes.len() {
                if (nodes[j].0 - nodes[k].0).norm() <= 1e-10 {
                    return Err(Error::invalid(format!(
                        "nodes {j} and {k}: interpolation points coincide"
                    )));
                }
            }
        }
        Ok(InterpolationDataset { nodes, dim })
    }

    pub fn nodes(&self) -> &[(Complex64, ComplexMatrix)] {
        &self.nodes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
}

/// Outcome of probing every node for the non-derogatory hypothesis.
struct HypothesisProbe {
    derogatory: Vec<usize>,
    ambiguous: Vec<Diagnostic>,
}

fn probe_non_derogatory(data: &InterpolationDataset, tols: &Tolerances) -> Result<HypothesisProbe> {
    let mut derogatory = Vec::new();
    let mut ambiguous = Vec::new();
    for (j, (_, w)) in data.nodes().iter().enumerate() {
        match matspec::is_non_derogatory(w, tols) {
            Ok(true) => {}
            Ok(false) => derogatory.push(j),
            Err(Error::RankAmbiguity { lambda }) => {
                ambiguous.push(Diagnostic::RankAmbiguity {
                    node: Some(j),
                    lambda,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(HypothesisProbe {
        derogatory,
        ambiguous,
    })
}

/// Sample points for the Pick condition: the boundary circle plus interior
/// polar rings, in a fixed deterministic order.
fn pick_sample_points(boundary_grid: usize, interior_rings: usize) -> Vec<Complex64> {
    let mut points = Vec::with_capacity(boundary_grid * (interior_rings + 1));
    for ring in 0..=interior_rings {
        let radius = if ring == 0 {
            1.0
        } else {
            ring as f64 / (interior_rings + 1) as f64
        };
        for k in 0..boundary_grid {
            let theta = std::f64::consts::TAU * k as f64 / boundary_grid as f64;
            points.push(Complex64::from_polar(radius, theta));
        }
    }
    points
}

/// Smallest eigenvalue of the Pick matrix at z, or None when a denominator
/// vanishes.
fn pick_smallest_eig(z: Complex64, zetas: &[Complex64], points: &[SymmPoint]) -> Option<f64> {
    let m = zetas.len();
    let values: Option<Vec<Complex64>> = points.iter().map(|s| symm::f_scalar(z, s).ok()).collect();
    let values = values?;
    let mut pick = ComplexMatrix::zeros(m);
    let one = Complex64::new(1.0, 0.0);
    for j in 0..m {
        for k in 0..m {
            pick[(j, k)] =
                (one - values[j].conj() * values[k]) / (one - zetas[j].conj() * zetas[k]);
        }
    }
    let eig = linalg::hermitian_eigenvalues(&pick);
    eig.first().copied()
}

/// The Pick-matrix positivity condition sampled over the closed disc.
///
/// The condition is an obstruction only for non-derogatory data. On
/// derogatory data the matrix inequality is still evaluated: if it holds the
/// verdict is `Pass` (there is no obstruction either way) with a diagnostic;
/// if it fails nothing can be concluded and the verdict is `Inconclusive`.
pub fn check_necc(data: &InterpolationDataset, opts: &CheckOptions) -> Result<CheckReport> {
    let kind = CheckKind::PickPositivity;
    let probe = probe_non_derogatory(data, &opts.tolerances)?;
    if !probe.ambiguous.is_empty() {
        return Ok(CheckReport::new(
            kind,
            Verdict::Inconclusive,
            f64::NAN,
            None,
            probe.ambiguous,
        ));
    }

    let zetas: Vec<Complex64> = data.nodes().iter().map(|(z, _)| *z).collect();
    let points: Vec<SymmPoint> = data.nodes().iter().map(|(_, w)| symm::pi_n(w)).collect();
    let samples = pick_sample_points(opts.boundary_grid, opts.interior_rings);
    let total = samples.len();

    // reduce to (lowest eigenvalue, earliest index, skipped count)
    let combine = |a: (f64, usize, usize), b: (f64, usize, usize)| {
        let skipped = a.2 + b.2;
        if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
            (b.0, b.1, skipped)
        } else {
            (a.0, a.1, skipped)
        }
    };
    let fold_one = |acc: (f64, usize, usize), idx: usize| match pick_smallest_eig(
        samples[idx],
        &zetas,
        &points,
    ) {
        Some(v) => combine(acc, (v, idx, 0)),
        None => (acc.0, acc.1, acc.2 + 1),
    };
    let identity = (f64::INFINITY, usize::MAX, 0usize);
    let (min_eig, min_idx, skipped) = if opts.serial {
        (0..total).fold(identity, fold_one)
    } else {
        (0..total)
            .into_par_iter()
            .fold(|| identity, fold_one)
            .reduce(|| identity, combine)
    };
    if min_idx == usize::MAX {
        return Err(Error::invalid("every sample point was skipped"));
    }

    let mut diagnostics = Vec::new();
    if skipped > 0 {
        diagnostics.push(Diagnostic::GridSkips { skipped, total });
    }
    for &node in &probe.derogatory {
        diagnostics.push(Diagnostic::NotNonDerogatory { node });
    }

    let holds = min_eig >= -opts.psd_tol;
    let witness = Witness::Point {
        z: samples[min_idx],
    };
    let report = if holds {
        CheckReport::new(kind, Verdict::Pass, min_eig, Some(witness), diagnostics)
    } else if probe.derogatory.is_empty() {
        CheckReport::new(kind, Verdict::Fail, min_eig, Some(witness), diagnostics)
    } else {
        // violated, but the hypothesis does not cover this data
        CheckReport::new(
            kind,
            Verdict::Inconclusive,
            min_eig,
            Some(witness),
            diagnostics,
        )
    };
    Ok(report)
}

/// The two-point form: boundary supremum of the pseudohyperbolic distance
/// between the two scalar rational functions, compared against the
/// pseudohyperbolic distance of the interpolation points. Golden-section
/// refinement sharpens the grid maximum.
pub fn check_necc_two_point(
    data: &InterpolationDataset,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let kind = CheckKind::TwoPointBound;
    if data.len() != 2 {
        return Err(Error::invalid(
            "the two-point condition needs exactly two nodes",
        ));
    }
    let probe = probe_non_derogatory(data, &opts.tolerances)?;
    if !probe.ambiguous.is_empty() {
        return Ok(CheckReport::new(
            kind,
            Verdict::Inconclusive,
            f64::NAN,
            None,
            probe.ambiguous,
        ));
    }

    let (zeta1, zeta2) = (data.nodes()[0].0, data.nodes()[1].0);
    let s1 = symm::pi_n(&data.nodes()[0].1);
    let s2 = symm::pi_n(&data.nodes()[1].1);

    let objective = |theta: f64| -> Option<f64> {
        let z = Complex64::from_polar(1.0, theta);
        let f1 = symm::f_scalar(z, &s1).ok()?;
        let f2 = symm::f_scalar(z, &s2).ok()?;
        let denom = Complex64::new(1.0, 0.0) - f2.conj() * f1;
        Some((f1 - f2).norm() / denom.norm())
    };

    let grid = opts.boundary_grid.max(2);
    let mut best = f64::NEG_INFINITY;
    let mut best_theta = 0.0;
    let mut skipped = 0usize;
    for k in 0..grid {
        let theta = std::f64::consts::TAU * k as f64 / grid as f64;
        match objective(theta) {
            Some(v) => {
                if v > best {
                    best = v;
                    best_theta = theta;
                }
            }
            None => skipped += 1,
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(Error::invalid("every boundary node was skipped"));
    }
    let step = std::f64::consts::TAU / grid as f64;
    let (refined_theta, refined_value) = golden_max(best_theta - step, best_theta + step, |t| {
        objective(t).unwrap_or(f64::NEG_INFINITY)
    });
    let sup = refined_value.max(best);

    let mut diagnostics = Vec::new();
    if skipped > 0 {
        diagnostics.push(Diagnostic::GridSkips {
            skipped,
            total: grid,
        });
    }
    for &node in &probe.derogatory {
        diagnostics.push(Diagnostic::NotNonDerogatory { node });
    }

    let pd = hypgeom::pseudo_dist(zeta1, zeta2)?;
    let margin = pd - sup;
    let holds = sup <= pd + EQ_TOL;
    let witness = Witness::Point {
        z: Complex64::from_polar(1.0, refined_theta),
    };
    let verdict = if holds {
        Verdict::Pass
    } else if probe.derogatory.is_empty() {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    Ok(CheckReport::new(
        kind,
        verdict,
        margin,
        Some(witness),
        diagnostics,
    ))
}

/// Golden-section maximization on [lo, hi]; returns (argmax, max).
fn golden_max(lo0: f64, hi0: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let inv_phi = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (lo0, hi0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-13 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

fn summary_diagnostics(node: usize, summary: &SpectralSummary, out: &mut Vec<Diagnostic>) {
    for w in &summary.warnings {
        match w {
            SpectralWarning::MergedCluster { center, spread } => {
                out.push(Diagnostic::MergedCluster {
                    node,
                    center: *center,
                    spread: *spread,
                });
            }
            SpectralWarning::IndexSearchUnstable { lambda } => {
                out.push(Diagnostic::IndexSearchUnstable {
                    node,
                    lambda: *lambda,
                });
            }
        }
    }
}

/// The two-sided eigenvalue-product bound with minimal-polynomial
/// multiplicities. Valid for arbitrary (including derogatory) data.
pub fn check_schwarz(data: &InterpolationDataset, opts: &CheckOptions) -> Result<CheckReport> {
    let kind = CheckKind::SchwarzProducts;
    if data.len() != 2 {
        return Err(Error::invalid("the product bound needs exactly two nodes"));
    }
    let (zeta1, w1) = &data.nodes()[0];
    let (zeta2, w2) = &data.nodes()[1];

    let mut diagnostics = Vec::new();
    let summaries: Vec<SpectralSummary> = {
        let mut out = Vec::with_capacity(2);
        for (j, w) in [w1, w2].into_iter().enumerate() {
            match matspec::spectral_summary(w, &opts.tolerances) {
                Ok(s) => {
                    summary_diagnostics(j, &s, &mut diagnostics);
                    out.push(s);
                }
                Err(Error::RankAmbiguity { lambda }) => {
                    diagnostics.push(Diagnostic::RankAmbiguity {
                        node: Some(j),
                        lambda,
                    });
                    return Ok(CheckReport::new(
                        kind,
                        Verdict::Inconclusive,
                        f64::NAN,
                        None,
                        diagnostics,
                    ));
                }
                Err(e) => return Err(e),
            }
        }
        out
    };

    let product_against = |mu: Complex64, against: &SpectralSummary| -> Result<f64> {
        let mut product = 1.0;
        for e in &against.eigen {
            product *= hypgeom::pseudo_dist(mu, e.value)?.powi(e.index as i32);
        }
        Ok(product)
    };

    let mut best: Option<Witness> = None;
    let mut bound = f64::NEG_INFINITY;
    for e in &summaries[1].eigen {
        let p = product_against(e.value, &summaries[0])?;
        if p > bound {
            bound = p;
            best = Some(Witness::Eigen {
                side: ProductSide::OverFirstSpectrum,
                value: e.value,
                product: p,
            });
        }
    }
    for e in &summaries[0].eigen {
        let p = product_against(e.value, &summaries[1])?;
        if p > bound {
            bound = p;
            best = Some(Witness::Eigen {
                side: ProductSide::OverSecondSpectrum,
                value: e.value,
                product: p,
            });
        }
    }

    let pd = hypgeom::pseudo_dist(*zeta1, *zeta2)?;
    let margin = pd - bound;
    let verdict = if bound <= pd + EQ_TOL {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckReport::new(kind, verdict, margin, best, diagnostics))
}

/// The spectral-radius growth bound for a self-map handle `g`, spot-checked
/// at 0 and at `x`.
///
/// `x` must be inside the spectral unit ball (input error otherwise). If
/// g(0) or g(x) falls outside the ball the hypothesis fails and the verdict
/// is `Inconclusive`.
pub fn check_selfmap_bound(
    g: &dyn Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
    x: &ComplexMatrix,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let kind = CheckKind::SelfMapBound;
    let tols = &opts.tolerances;
    let x_membership = matspec::is_in_spectral_ball(x, tols)?;
    if !x_membership.inside {
        return Err(Error::NotInBall {
            radius: 1.0 - x_membership.margin,
        });
    }

    let g0 = g(&ComplexMatrix::zeros(x.dim()))?;
    let gx = g(x)?;
    let mut diagnostics = Vec::new();
    let g0_membership = matspec::is_in_spectral_ball(&g0, tols)?;
    if !g0_membership.inside {
        diagnostics.push(Diagnostic::NotInBall {
            location: "0",
            radius: 1.0 - g0_membership.margin,
        });
    }
    let gx_membership = matspec::is_in_spectral_ball(&gx, tols)?;
    if !gx_membership.inside {
        diagnostics.push(Diagnostic::NotInBall {
            location: "X",
            radius: 1.0 - gx_membership.margin,
        });
    }
    if !diagnostics.is_empty() {
        return Ok(CheckReport::new(
            kind,
            Verdict::Inconclusive,
            f64::NAN,
            None,
            diagnostics,
        ));
    }

    let g0_summary = match matspec::spectral_summary(&g0, tols) {
        Ok(s) => s,
        Err(Error::RankAmbiguity { lambda }) => {
            diagnostics.push(Diagnostic::RankAmbiguity { node: None, lambda });
            return Ok(CheckReport::new(
                kind,
                Verdict::Inconclusive,
                f64::NAN,
                None,
                diagnostics,
            ));
        }
        Err(e) => return Err(e),
    };
    let degree = g0_summary.min_poly_degree;
    let r_x = 1.0 - x_membership.margin;
    let r_g0 = g0_summary.spectral_radius;
    let r_gx = 1.0 - gx_membership.margin;

    let root = r_x.powf(1.0 / degree as f64);
    let bound = (root + r_g0) / (1.0 + r_g0 * root);
    let margin = bound - r_gx;
    let verdict = if r_gx <= bound + EQ_TOL {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckReport::new(
        kind,
        verdict,
        margin,
        Some(Witness::Radii {
            spectral_radius: r_gx,
            bound,
        }),
        diagnostics,
    ))
}

/// A matrix-coefficient polynomial map zeta -> scale * sum C_j zeta^j.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomialMap {
    coeffs: Vec<ComplexMatrix>,
    scale: f64,
}

impl MatrixPolynomialMap {
    pub fn new(coeffs: Vec<ComplexMatrix>, scale: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid(
                "a polynomial map needs at least one coefficient",
            ));
        }
        let dim = coeffs[0].dim();
        if coeffs.iter().any(|c| c.dim() != dim) {
            return Err(Error::invalid("coefficient dimensions must agree"));
        }
        if scale <= 0.0 || !scale.is_finite() {
            return Err(Error::invalid("the scale must be positive"));
        }
        Ok(MatrixPolynomialMap { coeffs, scale })
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    /// Horner evaluation times the scale.
    pub fn eval(&self, zeta: Complex64) -> ComplexMatrix {
        let n = self.dim();
        let mut acc = ComplexMatrix::zeros(n);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(zeta) + c;
        }
        acc.scale(Complex64::new(self.scale, 0.0))
    }

    /// Max spectral radius over a boundary grid.
    pub fn boundary_radius_max(&self, grid: usize, tols: &Tolerances, serial: bool) -> Result<f64> {
        let radius_at = |k: usize| -> Result<f64> {
            let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / grid as f64);
            let m = matspec::is_in_spectral_ball(&self.eval(zeta), tols)?;
            Ok(1.0 - m.margin)
        };
        if serial {
            let mut worst = 0.0f64;
            for k in 0..grid {
                worst = worst.max(radius_at(k)?);
            }
            Ok(worst)
        } else {
            (0..grid)
                .into_par_iter()
                .map(radius_at)
                .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
        }
    }
}

/// Draws a random polynomial map with entries uniform in a centered square,
/// then rescales so the spectral radius stays at 0.9 on a 1024-point
/// boundary grid (subharmonicity keeps interior values below boundary
/// values). Deterministic per seed.
pub fn generate_map(dim: usize, degree: usize, seed: u64) -> Result<MatrixPolynomialMap> {
    if dim < 2 {
        return Err(Error::invalid("generated maps need dimension >= 2"));
    }
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..10 {
        let coeffs: Vec<ComplexMatrix> = (0..=degree)
            .map(|_| {
                ComplexMatrix::from_fn(dim, |_, _| {
                    Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
                })
            })
            .collect();
        let raw = MatrixPolynomialMap::new(coeffs, 1.0)?;
        let s = raw.boundary_radius_max(1024, &tols, false)?;
        if s == 0.0 {
            if degree == 0 {
                return Ok(raw);
            }
            continue;
        }
        return MatrixPolynomialMap::new(raw.coeffs, 0.9 / s);
    }
    Err(Error::DegenerateDraw)
}

/// Checks the Blaschke bound |B(mu)| <= |zeta| + slack for the product built
/// from the map's value at 0, over random interior samples. Deterministic
/// per seed.
pub fn verify_blaschke_bound(
    map: &MatrixPolynomialMap,
    samples: usize,
    seed: u64,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let kind = CheckKind::BlaschkeBound;
    let tols = &opts.tolerances;
    let mut diagnostics = Vec::new();

    let at_zero = map.eval(Complex64::new(0.0, 0.0));
    let summary = match matspec::spectral_summary(&at_zero, tols) {
        Ok(s) => s,
        Err(Error::RankAmbiguity { lambda }) => {
            diagnostics.push(Diagnostic::RankAmbiguity { node: None, lambda });
            return Ok(CheckReport::new(
                kind,
                Verdict::Inconclusive,
                f64::NAN,
                None,
                diagnostics,
            ));
        }
        Err(e) => return Err(e),
    };
    summary_diagnostics(0, &summary, &mut diagnostics);
    let product = BlaschkeProduct::from_summary(&summary)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst: Option<Witness> = None;
    for _ in 0..samples {
        let zeta = loop {
            let cand = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if cand.norm() < 1.0 {
                break cand;
            }
        };
        let value = map.eval(zeta);
        let chi = matspec::char_poly(&value);
        let clusters = chi.roots(tols.cluster_tol)?;
        for cl in &clusters {
            let b_mu = product.eval(cl.center)?.norm();
            let excess = b_mu - zeta.norm();
            if excess > worst_excess {
                worst_excess = excess;
                worst = Some(Witness::Sample {
                    zeta,
                    eigenvalue: cl.center,
                    excess,
                });
            }
        }
    }

    let margin = -worst_excess;
    let verdict = if worst_excess <= BLASCHKE_SLACK {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckReport::new(kind, verdict, margin, worst, diagnostics))
}
