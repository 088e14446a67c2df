//! Fundamental solutions of the static and time-harmonic Lamé operators.
//!
//! `kelvin_matrix` is the static (Kelvin) matrix, `kupradze_matrix` the
//! time-harmonic (Kupradze) matrix evaluated through its closed exponential
//! form, and `m_omega` the series remainder in the decomposition
//! `Gamma^omega = Gamma^0 + omega * M^omega`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::materials::LameParams;

/// Real 3-vector.
pub type Vec3 = [f64; 3];
/// Complex 3-vector.
pub type Vec3C = [Complex64; 3];

pub(crate) fn norm(x: &Vec3) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

pub(crate) fn scale3(x: &Vec3, s: f64) -> Vec3 {
    [x[0] * s, x[1] * s, x[2] * s]
}

pub(crate) fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// 3x3 complex matrix in displacement-response units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix3C(pub [[Complex64; 3]; 3]);

impl Matrix3C {
    pub fn zero() -> Self {
        Self([[Complex64::new(0.0, 0.0); 3]; 3])
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for j in 0..3 {
            for k in 0..3 {
                out.0[j][k] = self.0[j][k] + other.0[j][k];
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for j in 0..3 {
            for k in 0..3 {
                out.0[j][k] = self.0[j][k] - other.0[j][k];
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero();
        for j in 0..3 {
            for k in 0..3 {
                out.0[j][k] = self.0[j][k] * s;
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &Vec3C) -> Vec3C {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for j in 0..3 {
            for k in 0..3 {
                out[j] += self.0[j][k] * v[k];
            }
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for row in &self.0 {
            for e in row {
                m = m.max(e.norm());
            }
        }
        m
    }

    /// Largest asymmetry `|a_jk - a_kj|`.
    pub fn asymmetry(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 0..3 {
            for k in 0..3 {
                m = m.max((self.0[j][k] - self.0[k][j]).norm());
            }
        }
        m
    }
}

fn check_off_origin(x: &Vec3) -> Result<f64> {
    let r = norm(x);
    if r == 0.0 {
        return Err(Error::Singularity("kernel evaluated at x = 0".into()));
    }
    if !r.is_finite() {
        return Err(Error::InvalidArgument("non-finite evaluation point".into()));
    }
    Ok(r)
}

/// Kelvin matrix `Gamma^0(x)` for (possibly complex) Lamé parameters.
///
/// `Gamma^0_jk = -gamma1 delta_jk / (4 pi |x|) - gamma2 x_j x_k / (4 pi |x|^3)`
/// with `gamma1 = (1/mu + 1/(2mu+lambda))/2`, `gamma2 = (1/mu - 1/(2mu+lambda))/2`.
pub fn kelvin_matrix(x: &Vec3, params: &LameParams) -> Result<Matrix3C> {
    let r = check_off_origin(x)?;
    params.check_nondegenerate()?;
    let one = Complex64::new(1.0, 0.0);
    let gamma1 = 0.5 * (one / params.mu + one / params.lambda_plus_2mu());
    let gamma2 = 0.5 * (one / params.mu - one / params.lambda_plus_2mu());
    let four_pi = 4.0 * std::f64::consts::PI;
    let mut out = Matrix3C::zero();
    for j in 0..3 {
        for k in 0..3 {
            let mut v = -gamma2 * x[j] * x[k] / (four_pi * r * r * r);
            if j == k {
                v -= gamma1 / (four_pi * r);
            }
            out.0[j][k] = v;
        }
    }
    Ok(out)
}

/// Kupradze matrix `Gamma^omega(x)` via the closed exponential form.
///
/// At `omega = 0` this returns the Kelvin matrix exactly. `n_terms` is kept
/// for interface parity with the series evaluation; the closed form needs no
/// truncation.
pub fn kupradze_matrix(x: &Vec3, omega: f64, bg: &LameParams, n_terms: usize) -> Result<Matrix3C> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("n_terms must be >= 1".into()));
    }
    if omega < 0.0 || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("omega must be finite and >= 0, got {omega}")));
    }
    let r = check_off_origin(x)?;
    if omega == 0.0 {
        return kelvin_matrix(x, bg);
    }
    let mu0 = bg.mu.re;
    // The dyadic part carries (e^{i omega r / c_L} - e^{i omega r / c_T})/r:
    // this is the ordering consistent with the low-frequency power series and
    // the Kelvin limit.
    let a = omega / bg.c_l();
    let b = omega / bg.c_t();
    let i = Complex64::i();
    let ear = (i * a * r).exp();
    let ebr = (i * b * r).exp();
    // g(r) = (e^{iar} - e^{ibr})/r and its radial derivatives.
    let gp = (i * a * ear - i * b * ebr) / r - (ear - ebr) / (r * r);
    let gpp = (-a * a * ear + b * b * ebr) / r - 2.0 * (i * a * ear - i * b * ebr) / (r * r)
        + 2.0 * (ear - ebr) / (r * r * r);
    let four_pi = 4.0 * std::f64::consts::PI;
    let xhat = scale3(x, 1.0 / r);
    let pref = 1.0 / (four_pi * omega * omega);
    let mut out = Matrix3C::zero();
    for j in 0..3 {
        for k in 0..3 {
            // d_j d_k g = g'' xh_j xh_k + (g'/r)(delta_jk - xh_j xh_k)
            let mut v = pref * (gpp * xhat[j] * xhat[k]);
            if j == k {
                v += pref * gp / r;
                v -= ebr / (four_pi * mu0 * r);
            }
            v -= pref * (gp / r) * xhat[j] * xhat[k];
            out.0[j][k] = v;
        }
    }
    Ok(out)
}

/// Gradient of the Kelvin matrix: `out[l].0[j][k] = d_l Gamma^0_jk(x)`.
///
/// Exact closed form; used by the oracle to compute tractions of quadrature
/// potentials without finite differences.
pub fn kelvin_gradient(x: &Vec3, params: &LameParams) -> Result<[Matrix3C; 3]> {
    let r = check_off_origin(x)?;
    params.check_nondegenerate()?;
    let one = Complex64::new(1.0, 0.0);
    let gamma1 = 0.5 * (one / params.mu + one / params.lambda_plus_2mu());
    let gamma2 = 0.5 * (one / params.mu - one / params.lambda_plus_2mu());
    let four_pi = 4.0 * std::f64::consts::PI;
    let r3 = r * r * r;
    let r5 = r3 * r * r;
    let mut out = [Matrix3C::zero(), Matrix3C::zero(), Matrix3C::zero()];
    for (l, slot) in out.iter_mut().enumerate() {
        for j in 0..3 {
            for k in 0..3 {
                let mut v = 3.0 * gamma2 * x[j] * x[k] * x[l] / (four_pi * r5);
                if j == k {
                    v += gamma1 * x[l] / (four_pi * r3);
                }
                if j == l {
                    v -= gamma2 * x[k] / (four_pi * r3);
                }
                if k == l {
                    v -= gamma2 * x[j] / (four_pi * r3);
                }
                slot.0[j][k] = v;
            }
        }
    }
    Ok(out)
}

/// Series remainder with reported truncation tail.
#[derive(Debug, Clone, Copy)]
pub struct MOmega {
    pub matrix: Matrix3C,
    /// Upper estimate of the truncated tail (max-entry magnitude).
    pub tail_bound: f64,
}

/// `M^omega(x)` such that `Gamma^omega = Gamma^0 + omega M^omega`, evaluated
/// from the analytic power series truncated at `n_terms`.
pub fn m_omega(x: &Vec3, omega: f64, bg: &LameParams, n_terms: usize) -> Result<MOmega> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("n_terms must be >= 1".into()));
    }
    if omega < 0.0 || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("omega must be finite and >= 0, got {omega}")));
    }
    let r = check_off_origin(x)?;
    let ct = bg.c_t();
    let cl = bg.c_l();
    let four_pi = 4.0 * std::f64::consts::PI;
    let i = Complex64::i();

    // Both sums share omega^(n-1) r^(n-1): the dyadic part's r^(n-3) x_j x_k
    // equals r^(n-1) xh_j xh_k.
    let mut diag_sum = Complex64::new(0.0, 0.0);
    let mut dyad_sum = Complex64::new(0.0, 0.0);
    let mut pow_or = 1.0; // (omega r)^(n-1)
    let mut fact = 1.0; // n!
    let mut ct_pow = ct.powi(-3); // c_T^-(n+2) at n = 1
    let mut cl_pow = cl.powi(-3);
    let mut i_pow = i; // i^n at n = 1
    for n in 1..=n_terms {
        let nf = n as f64;
        fact *= nf;
        let common = i_pow / ((nf + 2.0) * fact * four_pi) * pow_or;
        diag_sum -= common * ((nf + 1.0) * ct_pow + cl_pow);
        // The n = 1 term of the dyadic sum carries the explicit zero (n - 1).
        dyad_sum += common * (nf - 1.0) * (ct_pow - cl_pow);
        pow_or *= omega * r;
        ct_pow /= ct;
        cl_pow /= cl;
        i_pow *= i;
    }
    // Tail estimate: the next term, doubled. Consecutive-term ratio is
    // omega r / (c n), far below 1/2 in the intended omega r <= 0.2 regime.
    let n_next = n_terms as f64 + 1.0;
    let next_mag =
        pow_or / (fact * n_next * (n_next + 2.0) * four_pi) * ((n_next + 2.0) * ct_pow + cl_pow);
    let tail_bound = 2.0 * next_mag;

    let xhat = scale3(x, 1.0 / r);
    let mut out = Matrix3C::zero();
    for j in 0..3 {
        for k in 0..3 {
            let mut v = dyad_sum * xhat[j] * xhat[k];
            if j == k {
                v += diag_sum;
            }
            out.0[j][k] = v;
        }
    }
    Ok(MOmega { matrix: out, tail_bound })
}
