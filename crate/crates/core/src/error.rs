use num_complex::Complex64;
use thiserror::Error;

/// Errors shared by the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Root-finding was asked for the zero polynomial.
    #[error("root-finding is undefined for the zero polynomial")]
    ZeroPolynomial,

    /// The simultaneous root iteration left a residual above tolerance.
    #[error("root iteration did not converge (worst scaled residual {residual:.3e})")]
    NonConvergence { residual: f64 },

    /// A companion matrix was requested for a non-monic polynomial.
    #[error("polynomial is not monic (leading coefficient {leading})")]
    NotMonic { leading: Complex64 },

    /// A point expected inside the open unit disc lies outside it.
    #[error("point {z} lies outside the open unit disc")]
    OutsideDisc { z: Complex64 },

    /// A matrix expected inside the spectral unit ball has spectral radius >= 1.
    #[error("matrix has spectral radius {radius:.6} >= 1")]
    NotInBall { radius: f64 },

    /// A Blaschke factor inversion is too ill-conditioned to trust.
    #[error("factor (I - conj({lambda}) A) has condition estimate {cond:.3e}")]
    SingularFactor { lambda: Complex64, cond: f64 },

    /// A Blaschke factor zero sits on or outside the unit circle.
    #[error("Blaschke zero {lambda} is not strictly inside the unit disc")]
    FactorOutsideDisc { lambda: Complex64 },

    /// The Möbius coefficients are degenerate (ad - bc ~ 0).
    #[error("Möbius map is degenerate: |ad - bc| is below tolerance")]
    DegenerateMobius,

    /// The image of the unit circle is a line, not a circle (|c| = |d|).
    #[error("Möbius map sends the unit circle to a line (|c| = |d|)")]
    LineImage,

    /// A rational-map denominator vanished at the evaluation point.
    /// `stage` is the size of the coordinate map being applied (0 when the
    /// evaluation is not part of a chain).
    #[error("denominator vanished at z = {z} (stage {stage})")]
    DenominatorVanishes { z: Complex64, stage: usize },

    /// A rank decision fell inside the ambiguity band around the threshold;
    /// the Jordan structure at `lambda` (when known) is not numerically
    /// resolvable at the current tolerance.
    #[error("rank decision ambiguous near eigenvalue {}", fmt_opt_lambda(.lambda))]
    RankAmbiguity { lambda: Option<Complex64> },

    /// A matrix inversion hit an exactly singular pivot.
    #[error("matrix is singular to working precision")]
    Singular,

    /// Random map generation produced an identically-zero boundary radius.
    #[error("map generation drew a degenerate (zero) coefficient set")]
    DegenerateDraw,

    /// A point expected in the symmetrized polydisc is outside it.
    #[error("point is outside the symmetrized polydisc (margin {margin:.3e})")]
    NotInSymmetrizedPolydisc { margin: f64 },

    /// Domain or argument violation described in plain text.
    #[error("{0}")]
    InvalidInput(String),
}

fn fmt_opt_lambda(lambda: &Option<Complex64>) -> String {
    match lambda {
        Some(l) => format!("{l}"),
        None => "(unlocated)".to_string(),
    }
}

impl Error {
    /// Shorthand for `Error::InvalidInput` with formatted text.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
