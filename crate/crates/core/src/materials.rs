//! Lamé parameter bookkeeping and convexity classification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of checking the two strong convexity conditions
/// `mu > 0` and `3 lambda + 2 mu > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convexity {
    /// Both inequalities hold strictly.
    BothHold,
    /// `mu <= 0` only.
    FirstBroken,
    /// `3 lambda + 2 mu <= 0` only.
    SecondBroken,
    /// Both inequalities fail.
    BothBroken,
}

/// Classify a real Lamé pair against the strong convexity conditions.
pub fn convexity_status(lambda: f64, mu: f64) -> Result<Convexity> {
    if !lambda.is_finite() || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "convexity_status requires finite moduli, got lambda={lambda}, mu={mu}"
        )));
    }
    let first = mu <= 0.0;
    let second = 3.0 * lambda + 2.0 * mu <= 0.0;
    Ok(match (first, second) {
        (false, false) => Convexity::BothHold,
        (true, false) => Convexity::FirstBroken,
        (false, true) => Convexity::SecondBroken,
        (true, true) => Convexity::BothBroken,
    })
}

/// A complex Lamé pair `(lambda, mu)`.
///
/// Background media are real and strongly convex; plasmon variants are
/// `((eps1 + i delta) lambda0, (eps2 + i delta) mu0)` and core variants
/// `(eps3 lambda0, eps4 mu0)`. All spectral formulas accept the complex
/// values uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LameParams {
    pub lambda: Complex64,
    pub mu: Complex64,
}

impl LameParams {
    /// Background medium: real moduli satisfying both convexity conditions.
    pub fn background(lambda0: f64, mu0: f64) -> Result<Self> {
        match convexity_status(lambda0, mu0)? {
            Convexity::BothHold => Ok(Self {
                lambda: Complex64::new(lambda0, 0.0),
                mu: Complex64::new(mu0, 0.0),
            }),
            other => Err(Error::InvalidArgument(format!(
                "background medium must satisfy both convexity conditions, got {other:?} \
                 for lambda0={lambda0}, mu0={mu0}"
            ))),
        }
    }

    /// Arbitrary complex pair; no convexity requirement.
    pub fn complex(lambda: Complex64, mu: Complex64) -> Self {
        Self { lambda, mu }
    }

    /// Lossy plasmon variant `((eps1 + i delta) lambda0, (eps2 + i delta) mu0)`
    /// of a background medium.
    pub fn plasmon(background: &LameParams, eps1: f64, eps2: f64, delta: f64) -> Self {
        let lambda0 = background.lambda.re;
        let mu0 = background.mu.re;
        Self {
            lambda: Complex64::new(eps1, delta) * lambda0,
            mu: Complex64::new(eps2, delta) * mu0,
        }
    }

    /// Lossless core variant `(eps3 lambda0, eps4 mu0)` of a background medium.
    pub fn core(background: &LameParams, eps3: f64, eps4: f64) -> Self {
        Self {
            lambda: Complex64::new(eps3 * background.lambda.re, 0.0),
            mu: Complex64::new(eps4 * background.mu.re, 0.0),
        }
    }

    /// Shear wave speed `sqrt(mu0)` of a (real) background.
    pub fn c_t(&self) -> f64 {
        self.mu.re.sqrt()
    }

    /// Pressure wave speed `sqrt(lambda0 + 2 mu0)` of a (real) background.
    pub fn c_l(&self) -> f64 {
        (self.lambda.re + 2.0 * self.mu.re).sqrt()
    }

    /// `lambda + 2 mu`.
    pub fn lambda_plus_2mu(&self) -> Complex64 {
        self.lambda + 2.0 * self.mu
    }

    /// Fail when the spectral closed forms degenerate.
    pub(crate) fn check_nondegenerate(&self) -> Result<()> {
        if self.mu.norm() == 0.0 {
            return Err(Error::DegenerateMaterial("mu = 0".into()));
        }
        if self.lambda_plus_2mu().norm() == 0.0 {
            return Err(Error::DegenerateMaterial("lambda + 2 mu = 0".into()));
        }
        Ok(())
    }
}
