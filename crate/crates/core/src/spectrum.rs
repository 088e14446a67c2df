//! Closed-form spectra of the Neumann-Poincaré and single-layer operators on
//! the ball, resonance denominators, critical plasmon parameters and
//! dissipation weights.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::{convexity_status, Convexity, LameParams};

fn check_family(family: u8) -> Result<()> {
    if !(1..=3).contains(&family) {
        return Err(Error::InvalidArgument(format!("family must be 1, 2 or 3, got {family}")));
    }
    Ok(())
}

fn check_degree(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    Ok(())
}

/// Eigenvalue `xi_i^n` of the Neumann-Poincaré operator `K*_D` on the ball.
///
/// Accepts complex Lamé values, yielding the tilde variants used by the
/// resonance denominators.
pub fn np_eigenvalue(family: u8, n: u32, params: &LameParams) -> Result<Complex64> {
    check_family(family)?;
    check_degree(n)?;
    params.check_nondegenerate()?;
    let nf = n as f64;
    let lam = params.lambda;
    let mu = params.mu;
    Ok(match family {
        1 => Complex64::new(3.0 / (4.0 * nf + 2.0), 0.0),
        2 => {
            (3.0 * lam - 2.0 * mu * (2.0 * nf * nf - 2.0 * nf - 3.0))
                / (2.0 * params.lambda_plus_2mu() * (4.0 * nf * nf - 1.0))
        }
        _ => {
            (-3.0 * lam + 2.0 * mu * (2.0 * nf * nf + 2.0 * nf - 3.0))
                / (2.0 * params.lambda_plus_2mu() * (4.0 * nf * nf - 1.0))
        }
    })
}

/// Eigenvalue `e_i^n` of the single-layer operator: `S_D[kappa] = e_i^n r0 kappa`.
pub fn sl_eigenvalue(family: u8, n: u32, params: &LameParams) -> Result<Complex64> {
    check_family(family)?;
    check_degree(n)?;
    params.check_nondegenerate()?;
    let nf = n as f64;
    let lam = params.lambda;
    let mu = params.mu;
    let denom = mu * params.lambda_plus_2mu() * (4.0 * nf * nf - 1.0);
    Ok(match family {
        1 => -1.0 / (mu * (2.0 * nf + 1.0)),
        2 => -(mu * (2.0 + 3.0 * nf) + lam * (nf + 1.0)) / denom,
        _ => -(lam * (nf - 1.0) + mu * (3.0 * nf - 2.0)) / denom,
    })
}

/// Lossy plasmon configuration for a single spherical inclusion.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PlasmonConfig {
    pub eps1: f64,
    pub eps2: f64,
    /// Loss parameter; `delta = 0` is admitted as the quasi-limit used by
    /// the delta -> 0 denominator evaluations.
    pub delta: f64,
    pub background: LameParams,
    pub r0: f64,
}

impl PlasmonConfig {
    pub fn new(eps1: f64, eps2: f64, delta: f64, background: LameParams, r0: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::InvalidArgument(format!("delta must be >= 0, got {delta}")));
        }
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::InvalidArgument(format!("r0 must be positive, got {r0}")));
        }
        if !eps1.is_finite() || !eps2.is_finite() {
            return Err(Error::InvalidArgument("eps1, eps2 must be finite".into()));
        }
        Ok(Self { eps1, eps2, delta, background, r0 })
    }

    /// Plasmon Lamé pair `((eps1 + i delta) lambda0, (eps2 + i delta) mu0)`.
    pub fn tilde(&self) -> LameParams {
        LameParams::plasmon(&self.background, self.eps1, self.eps2, self.delta)
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.eps1, self.eps2, delta, self.background, self.r0)
    }
}

/// `-1/2 + xi_i^n` in factored form.
///
/// Algebraically identical to the literal subtraction but conditioned so that
/// the exact identities at `n = 1` (families 1 and 2) come out as exact
/// floating-point zeros:
/// family 1 -> `-(n-1)/(2n+1)`, family 2 -> `2 (n-1) mu e_2^n`,
/// family 3 -> `-(lambda (2n^2+1) + 2 mu (n^2-n+1)) / ((lambda+2mu)(4n^2-1))`.
pub fn xi_minus_half(family: u8, n: u32, params: &LameParams) -> Result<Complex64> {
    check_family(family)?;
    check_degree(n)?;
    params.check_nondegenerate()?;
    let nf = n as f64;
    Ok(match family {
        1 => Complex64::new(-(nf - 1.0) / (2.0 * nf + 1.0), 0.0),
        2 => 2.0 * (nf - 1.0) * params.mu * sl_eigenvalue(2, n, params)?,
        _ => {
            -(params.lambda * (2.0 * nf * nf + 1.0)
                + 2.0 * params.mu * (nf * nf - nf + 1.0))
                / (params.lambda_plus_2mu() * (4.0 * nf * nf - 1.0))
        }
    })
}

/// Per-mode resonance denominator
/// `D = -1/2 + xi~_i^n - (1/2 + xi_i^n) e~_i^n / e_i^n`.
pub fn resonance_denominator(family: u8, n: u32, cfg: &PlasmonConfig) -> Result<Complex64> {
    let tilde = cfg.tilde();
    let xi_t = np_eigenvalue(family, n, &tilde)?;
    let xi = np_eigenvalue(family, n, &cfg.background)?;
    let e_t = sl_eigenvalue(family, n, &tilde)?;
    let e = sl_eigenvalue(family, n, &cfg.background)?;
    Ok(-0.5 + xi_t - (0.5 + xi) * e_t / e)
}

/// Critical branches of the resonance denominators.
///
/// `C1(n)` and `C22(n)` require `n >= 2`; `C21(n)` and `C3(n)` exist for all
/// `n >= 1`. `C1`, `C21`, `C22` are values of `eps2`; `C3` is a value of
/// `eps1` given `eps2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalBranch {
    C1(u32),
    C21(u32),
    C22(u32),
    C3(u32),
}

impl CriticalBranch {
    pub fn family(&self) -> u8 {
        match self {
            CriticalBranch::C1(_) => 1,
            CriticalBranch::C21(_) | CriticalBranch::C22(_) => 2,
            CriticalBranch::C3(_) => 3,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            CriticalBranch::C1(n)
            | CriticalBranch::C21(n)
            | CriticalBranch::C22(n)
            | CriticalBranch::C3(n) => *n,
        }
    }

    fn check_degree_bounds(&self) -> Result<()> {
        let n = self.degree();
        check_degree(n)?;
        match self {
            CriticalBranch::C1(_) | CriticalBranch::C22(_) if n < 2 => Err(Error::Degree(
                format!("{self:?} requires degree >= 2"),
            )),
            _ => Ok(()),
        }
    }
}

/// Critical plasmon parameter of a branch.
///
/// For `C21` and `C3`, `eps_other` is the other scaling parameter (`eps1`
/// resp. `eps2`); `C1` and `C22` ignore it.
pub fn critical_value(branch: CriticalBranch, eps_other: f64, bg: &LameParams) -> Result<f64> {
    branch.check_degree_bounds()?;
    let n = branch.degree() as f64;
    let lam0 = bg.lambda.re;
    let mu0 = bg.mu.re;
    Ok(match branch {
        CriticalBranch::C1(_) => -(n + 2.0) / (n - 1.0),
        CriticalBranch::C21(_) => -eps_other * (n + 1.0) * lam0 / ((3.0 * n + 2.0) * mu0),
        CriticalBranch::C22(_) => {
            -((2.0 * n * n + 1.0) * lam0 + (2.0 * n * n + 2.0 * n + 2.0) * mu0)
                / (2.0 * (n - 1.0) * ((n + 1.0) * lam0 + (3.0 * n + 2.0) * mu0))
        }
        CriticalBranch::C3(_) => {
            let eps2 = eps_other;
            let denom = (2.0 * n * n + 1.0) * eps2 + 2.0 * n * n - 2.0;
            if denom == 0.0 {
                return Err(Error::Pole(format!(
                    "C3 branch pole: (2n^2+1) eps2 + 2n^2 - 2 = 0 at n={n}, eps2={eps2}"
                )));
            }
            -2.0 * eps2 * ((n * n - n + 1.0) * eps2 + 3.0 * n * n + n - 2.0) * mu0 / (denom * lam0)
        }
    })
}

/// Convexity classification of the plasmon pair `(eps1 lambda0, eps2 mu0)`.
pub fn classify_violation(eps1: f64, eps2: f64, bg: &LameParams) -> Result<Convexity> {
    convexity_status(eps1 * bg.lambda.re, eps2 * bg.mu.re)
}

/// Dissipation weight `Im(conj(e~_i^n) (-1/2 + xi~_i^n))` by direct complex
/// evaluation.
///
/// `-1/2 + xi~` enters through [`xi_minus_half`], so the families 1 and 2
/// weights vanish exactly at `n = 1`.
pub fn dissipation_weight(family: u8, n: u32, cfg: &PlasmonConfig) -> Result<f64> {
    let tilde = cfg.tilde();
    let e_t = sl_eigenvalue(family, n, &tilde)?;
    Ok((e_t.conj() * xi_minus_half(family, n, &tilde)?).im)
}

/// The `d1, d2, d3` coefficients of the family-3 weight closed form.
///
/// `d1` is positive for every convex background and all real `(eps1, eps2)`
/// with `n >= 1` (up to the measure-zero line `n = 1`, `eps2 = 0`).
pub fn d_coefficients(n: u32, cfg: &PlasmonConfig) -> (f64, f64, f64) {
    let nf = n as f64;
    let lam0 = cfg.background.lambda.re;
    let mu0 = cfg.background.mu.re;
    let (e1, e2) = (cfg.eps1, cfg.eps2);
    let d1 = 4.0 * e1 * e2 * lam0 * mu0 * (nf.powi(3) - 2.0 * nf * nf + 2.0 * nf - 1.0)
        + e1 * e1 * lam0 * lam0 * (2.0 * nf.powi(3) - 2.0 * nf * nf + nf - 1.0)
        + e2 * e2
            * mu0
            * (lam0 * (4.0 * nf * nf - 1.0) * nf
                + 2.0 * mu0 * (3.0 * nf.powi(3) - 5.0 * nf * nf + 5.0 * nf - 2.0));
    let d2 = (lam0 * (nf - 1.0) + mu0 * (3.0 * nf - 2.0))
        * (lam0 * (2.0 * nf * nf + 1.0) + 2.0 * mu0 * (nf * nf - nf + 1.0));
    let tilde = cfg.tilde();
    let d3 = (tilde.lambda_plus_2mu() * (4.0 * nf * nf - 1.0)).norm_sqr();
    (d1, d2, d3)
}

/// Closed-form dissipation weights.
///
/// Family 1: `(n-1) delta / ((2n+1)^2 (eps2^2 + delta^2) mu0)`.
/// Family 2: `2 (n-1) |e~_2^n mu~|^2 delta / ((eps2^2 + delta^2) mu0)`.
/// Family 3: `(delta mu0 d1 + delta^3 mu0 d2) / ((eps2^2 + delta^2) mu0^2 d3)`;
/// the `(eps2^2 + delta^2) mu0^2 = |mu~|^2` factor restores the dimensions of
/// the printed `d3` and makes the identity exact.
pub fn weight_closed_form(family: u8, n: u32, cfg: &PlasmonConfig) -> Result<f64> {
    check_family(family)?;
    check_degree(n)?;
    let nf = n as f64;
    let mu0 = cfg.background.mu.re;
    let delta = cfg.delta;
    let mu_abs2 = (cfg.eps2 * cfg.eps2 + delta * delta) * mu0 * mu0;
    Ok(match family {
        1 => (nf - 1.0) * delta / ((2.0 * nf + 1.0).powi(2) * mu_abs2 / mu0),
        2 => {
            let tilde = cfg.tilde();
            let e_t = sl_eigenvalue(2, n, &tilde)?;
            2.0 * (nf - 1.0) * (e_t * tilde.mu).norm_sqr() * delta / (mu_abs2 / mu0)
        }
        _ => {
            let (d1, d2, d3) = d_coefficients(n, cfg);
            (delta * mu0 * d1 + delta.powi(3) * mu0 * d2) / (mu_abs2 * d3)
        }
    })
}

/// The literal printed reading of the family-1/2 closed forms, with
/// `eps1^2 + delta^2` in the denominator. Exposed so the discrepancy against
/// the direct evaluation can be demonstrated; do not use for computation.
pub fn weight_closed_form_eps1_literal(family: u8, n: u32, cfg: &PlasmonConfig) -> Result<f64> {
    check_family(family)?;
    check_degree(n)?;
    let nf = n as f64;
    let mu0 = cfg.background.mu.re;
    let delta = cfg.delta;
    let denom = (cfg.eps1 * cfg.eps1 + delta * delta) * mu0;
    Ok(match family {
        1 => (nf - 1.0) * delta / ((2.0 * nf + 1.0).powi(2) * denom),
        2 => {
            let tilde = cfg.tilde();
            let e_t = sl_eigenvalue(2, n, &tilde)?;
            2.0 * (nf - 1.0) * (e_t * tilde.mu).norm_sqr() * delta / denom
        }
        _ => {
            return Err(Error::InvalidArgument(
                "literal eps1 reading applies to families 1 and 2 only".into(),
            ))
        }
    })
}

/// Matching predicate for "configuration sits at a critical value".
pub fn at_critical_value(eps: f64, critical: f64) -> bool {
    (eps - critical).abs() <= 1e-9 * (1.0 + critical.abs())
}

/// A resonant `(family, degree)` pair found by [`scan_resonant_degrees`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResonantDegree {
    pub family: u8,
    pub n: u32,
    pub branch: CriticalBranch,
    /// `|D|` at `delta = 0`.
    pub abs_d_at_zero: f64,
}

/// Scan all `(family, n <= n_max)` whose `delta -> 0` denominator magnitude
/// falls below `tol`, labeling each hit with the matching critical branch.
pub fn scan_resonant_degrees(
    eps1: f64,
    eps2: f64,
    bg: &LameParams,
    n_max: u32,
    tol: f64,
) -> Result<Vec<ResonantDegree>> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("n_max must be >= 2".into()));
    }
    let mut hits = Vec::new();
    for n in 1..=n_max {
        for family in 1u8..=3 {
            let cfg = PlasmonConfig::new(eps1, eps2, 0.0, *bg, 1.0)?;
            let d = resonance_denominator(family, n, &cfg)?;
            if d.norm() >= tol {
                continue;
            }
            let branch = match family {
                1 => CriticalBranch::C1(n),
                2 => {
                    // Quadratic in eps2: pick the root the configuration sits on.
                    let c21 = critical_value(CriticalBranch::C21(n), eps1, bg)?;
                    if n >= 2 {
                        let c22 = critical_value(CriticalBranch::C22(n), eps1, bg)?;
                        if (eps2 - c21).abs() <= (eps2 - c22).abs() {
                            CriticalBranch::C21(n)
                        } else {
                            CriticalBranch::C22(n)
                        }
                    } else {
                        let _ = c21;
                        CriticalBranch::C21(n)
                    }
                }
                _ => CriticalBranch::C3(n),
            };
            hits.push(ResonantDegree { family, n, branch, abs_d_at_zero: d.norm() });
        }
    }
    Ok(hits)
}

/// JSON rendering of a scan per the external interface:
/// `[{family, n, branch, abs_D_at_zero}]`.
pub fn scan_to_json(hits: &[ResonantDegree]) -> String {
    let items: Vec<serde_json::Value> = hits
        .iter()
        .map(|h| {
            serde_json::json!({
                "family": h.family,
                "n": h.n,
                "branch": format!("{:?}", h.branch),
                "abs_D_at_zero": h.abs_d_at_zero,
            })
        })
        .collect();
    serde_json::to_string_pretty(&items).expect("serializable")
}
