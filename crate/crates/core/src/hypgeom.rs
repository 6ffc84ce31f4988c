//! Hyperbolic geometry of the unit disc: pseudohyperbolic and Poincaré
//! distances, finite Blaschke products with multiplicities, the induced
//! matrix Blaschke product, and the circle image of a Möbius map.

use num_complex::Complex64;

use crate::error::Error;
use crate::linalg;
use crate::matrix::ComplexMatrix;
use crate::matspec::{self, SpectralSummary, Tolerances};
use crate::Result;

/// Margin with which Blaschke zeros must sit inside the disc.
const ZERO_MARGIN: f64 = 1e-12;

/// Condition-number threshold beyond which a factor inversion is refused.
const FACTOR_COND_LIMIT: f64 = 1e12;

fn check_in_disc(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisc { z })
    }
}

/// Pseudohyperbolic distance |z1 - z2| / |1 - conj(z2) z1| on the open disc.
pub fn pseudo_dist(z1: Complex64, z2: Complex64) -> Result<f64> {
    check_in_disc(z1)?;
    check_in_disc(z2)?;
    let denom = Complex64::new(1.0, 0.0) - z2.conj() * z1;
    Ok((z1 - z2).norm() / denom.norm())
}

/// Poincaré distance atanh of the pseudohyperbolic distance.
pub fn poincare_dist(z1: Complex64, z2: Complex64) -> Result<f64> {
    Ok(pseudo_dist(z1, z2)?.atanh())
}

/// A finite Blaschke product prod ((z - lambda)/(1 - conj(lambda) z))^m.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    factors: Vec<(Complex64, usize)>,
}

impl BlaschkeProduct {
    /// Builds from (zero, exponent) pairs; zeros must sit strictly inside
    /// the disc with margin, exponents must be positive.
    pub fn new(factors: Vec<(Complex64, usize)>) -> Result<Self> {
        for &(lambda, exponent) in &factors {
            if lambda.norm() > 1.0 - ZERO_MARGIN {
                return Err(Error::FactorOutsideDisc { lambda });
            }
            if exponent == 0 {
                return Err(Error::invalid("Blaschke exponents must be positive"));
            }
        }
        Ok(BlaschkeProduct { factors })
    }

    /// The product vanishing at each eigenvalue of the summary with its
    /// index as exponent.
    pub fn from_summary(summary: &SpectralSummary) -> Result<Self> {
        Self::new(summary.eigen.iter().map(|e| (e.value, e.index)).collect())
    }

    pub fn factors(&self) -> &[(Complex64, usize)] {
        &self.factors
    }

    /// Total degree (sum of exponents).
    pub fn degree(&self) -> usize {
        self.factors.iter().map(|&(_, m)| m).sum()
    }

    /// Evaluation on the closed disc. The modulus is at most 1, with
    /// equality exactly on the unit circle.
    pub fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        if zeta.norm() > 1.0 + 1e-12 {
            return Err(Error::OutsideDisc { z: zeta });
        }
        let one = Complex64::new(1.0, 0.0);
        let mut acc = one;
        for &(lambda, exponent) in &self.factors {
            let factor = (zeta - lambda) / (one - lambda.conj() * zeta);
            acc *= factor.powu(exponent as u32);
        }
        Ok(acc)
    }

    /// The induced matrix function
    /// prod (I - conj(lambda) A)^{-m} (A - lambda I)^m,
    /// factors multiplied in stored order (they commute, but the order is
    /// fixed for reproducibility). Requires r(A) < 1 so every resolvent
    /// factor is invertible; refuses factors with condition estimate beyond
    /// 1e12.
    pub fn eval_matrix(&self, a: &ComplexMatrix, tols: &Tolerances) -> Result<ComplexMatrix> {
        let membership = matspec::is_in_spectral_ball(a, tols)?;
        if !membership.inside {
            return Err(Error::NotInBall {
                radius: 1.0 - membership.margin,
            });
        }
        let n = a.dim();
        let mut acc = ComplexMatrix::identity(n);
        for &(lambda, exponent) in &self.factors {
            let resolvent = {
                let mut m = (-a).scale(lambda.conj());
                for i in 0..n {
                    m[(i, i)] += Complex64::new(1.0, 0.0);
                }
                m
            };
            let cond = linalg::cond_one(&resolvent);
            if !cond.is_finite() || cond > FACTOR_COND_LIMIT {
                return Err(Error::SingularFactor { lambda, cond });
            }
            let inv = linalg::inverse(&resolvent)?;
            let shifted = a.shifted(lambda);
            for _ in 0..exponent {
                acc = &acc * &inv;
            }
            for _ in 0..exponent {
                acc = &acc * &shifted;
            }
        }
        Ok(acc)
    }
}

/// A fractional-linear map (az + b)/(cz + d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm() + b.norm() + c.norm() + d.norm();
        if det.norm() <= 1e-14 * scale * scale {
            return Err(Error::DegenerateMobius);
        }
        Ok(MobiusMap { a, b, c, d })
    }

    /// The disc automorphism (z - lambda)/(1 - conj(lambda) z).
    pub fn blaschke_factor(lambda: Complex64) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::new(one, -lambda, -lambda.conj(), one)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Centre and radius of the image of the unit circle, by the closed
    /// forms centre = (b conj(d) - a conj(c)) / (|d|^2 - |c|^2) and
    /// radius = |ad - bc| / ||d|^2 - |c|^2|.
    ///
    /// When |c| = |d| the image is unbounded (a line) and `LineImage` is
    /// returned.
    pub fn circle_image(&self) -> Result<(Complex64, f64)> {
        let denom = self.d.norm_sqr() - self.c.norm_sqr();
        if denom.abs() < 1e-12 * (self.c.norm_sqr() + self.d.norm_sqr()) {
            return Err(Error::LineImage);
        }
        let centre = (self.b * self.d.conj() - self.a * self.c.conj()) / denom;
        let radius = (self.a * self.d - self.b * self.c).norm() / denom.abs();
        Ok((centre, radius))
    }
}
