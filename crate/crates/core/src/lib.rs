//! Numerical machinery for holomorphic interpolation diagnostics on the
//! spectral unit ball.
//!
//! The crate decides, for prescribed data `(zeta_1, W_1), ..., (zeta_M, W_M)`
//! with `zeta_j` in the unit disc and `W_j` complex matrices of spectral
//! radius below one, whether known necessary conditions for the existence of
//! a holomorphic interpolant from the disc into the spectral unit ball are
//! satisfied. It also verifies the associated Schwarz-type inequalities and
//! their sharpness constructions at small dimensions.
//!
//! Layout:
//! - [`poly`]: complex polynomial arithmetic and simultaneous root-finding;
//! - [`matrix`] / [`linalg`]: dense complex matrices and the factorizations
//!   (LU, one-sided Jacobi SVD, Hermitian Jacobi) used throughout;
//! - [`matspec`]: spectral summaries — eigenvalue clusters, indices, minimal
//!   polynomials, companion and block constructions;
//! - [`hypgeom`]: disc geometry — pseudohyperbolic/Poincaré distances,
//!   Blaschke products and their matrix counterparts, Möbius circle images;
//! - [`symm`]: symmetrized-polydisc coordinates, membership and the torus
//!   distance;
//! - [`checks`]: the condition checkers and random map generators.

pub mod checks;
pub mod error;
pub mod hypgeom;
pub mod linalg;
pub mod matrix;
pub mod matspec;
pub mod poly;
pub mod symm;

pub use error::Error;
pub use matrix::ComplexMatrix;
pub use matspec::{SpectralSummary, Tolerances};
pub use poly::{ComplexPolynomial, RootCluster};
pub use symm::SymmPoint;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
