//! Scalar and vector spherical harmonics, the three eigenfunction families of
//! the Neumann-Poincaré operator on the sphere, and modal projection of
//! boundary fields.
//!
//! Scalar harmonics are fully normalized complex harmonics with the
//! Condon-Shortley phase: `Y_n^m = Pbar_n^m(cos theta) e^{i m phi}` with
//! `int_S |Y|^2 = 1` and `Y_n^{-m} = (-1)^m conj(Y_n^m)`. Surface gradients
//! are evaluated from pole-safe ladder recurrences on the normalized
//! associated Legendre functions (no division by `sin theta` anywhere).

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::SphereGrid;
use crate::kernels::{Vec3, Vec3C};
use crate::materials::LameParams;
use crate::spectrum::sl_eigenvalue;

/// Index of one eigenfunction `kappa_i^{n,m}`.
///
/// Family 3 at degree `n` is built on the scalar harmonic of degree `n - 1`,
/// so its order satisfies `|m| <= n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub family: u8,
    pub degree: u32,
    pub order: i32,
}

impl ModeIndex {
    pub fn new(family: u8, degree: u32, order: i32) -> Result<Self> {
        if !(1..=3).contains(&family) {
            return Err(Error::InvalidArgument(format!("family must be 1..3, got {family}")));
        }
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be >= 1".into()));
        }
        let scalar_degree = if family == 3 { degree - 1 } else { degree };
        if order.unsigned_abs() > scalar_degree {
            return Err(Error::InvalidArgument(format!(
                "order {order} out of range for family {family}, degree {degree} \
                 (scalar degree {scalar_degree})"
            )));
        }
        Ok(Self { family, degree, order })
    }

    /// Degree of the scalar harmonic this eigenfunction is built on.
    pub fn scalar_degree(&self) -> u32 {
        if self.family == 3 {
            self.degree - 1
        } else {
            self.degree
        }
    }

    /// All valid indices with `degree <= n_max`, in table order.
    pub fn all_up_to(n_max: u32) -> Vec<ModeIndex> {
        let mut out = Vec::new();
        for family in 1u8..=3 {
            for n in 1..=n_max {
                let sd = if family == 3 { n - 1 } else { n };
                for m in -(sd as i32)..=(sd as i32) {
                    out.push(ModeIndex { family, degree: n, order: m });
                }
            }
        }
        out
    }
}

/// Normalized associated Legendre tables at a single direction, plus the
/// pole-safe companions needed for surface gradients:
///
/// * `p[n][m] = Pbar_n^m(cos theta)` for `0 <= m <= n`,
/// * `q[n][m] = Pbar_n^m(cos theta) / sin theta` for `1 <= m <= n`.
///
/// `q` obeys the same recurrences as `p` because they are linear and
/// homogeneous at fixed `m`; only the sectoral seed changes.
pub struct AngularBasis {
    n_max: usize,
    p: Vec<f64>,
    q: Vec<f64>,
    cos_theta: f64,
    sin_theta: f64,
    phi: f64,
}

impl AngularBasis {
    fn idx(&self, n: usize, m: usize) -> usize {
        n * (self.n_max + 2) + m
    }

    /// Build tables up to scalar degree `n_max` at the given angles.
    pub fn from_angles(cos_theta: f64, sin_theta: f64, phi: f64, n_max: u32) -> Self {
        let nm = n_max as usize + 1; // table covers degrees 0..=n_max (+1 headroom for ladders)
        let dim = (nm + 2) * (nm + 2);
        let mut basis = AngularBasis {
            n_max: nm,
            p: vec![0.0; dim],
            q: vec![0.0; dim],
            cos_theta,
            sin_theta,
            phi,
        };
        let ct = cos_theta;
        let st = sin_theta;
        let inv_sqrt4pi = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
        let ip = |n: usize, m: usize| n * (nm + 2) + m;

        basis.p[ip(0, 0)] = inv_sqrt4pi;
        // Sectoral seeds with Condon-Shortley sign.
        for m in 1..=nm {
            let f = -((2.0 * m as f64 + 1.0) / (2.0 * m as f64)).sqrt();
            basis.p[ip(m, m)] = f * st * basis.p[ip(m - 1, m - 1)];
        }
        basis.q[ip(1, 1)] = -(3.0f64 / 2.0).sqrt() * inv_sqrt4pi;
        for m in 2..=nm {
            let f = -((2.0 * m as f64 + 1.0) / (2.0 * m as f64)).sqrt();
            basis.q[ip(m, m)] = f * st * basis.q[ip(m - 1, m - 1)];
        }
        // Upward in degree at fixed order.
        for m in 0..=nm {
            if m + 1 <= nm {
                let f = (2.0 * m as f64 + 3.0).sqrt();
                basis.p[ip(m + 1, m)] = f * ct * basis.p[ip(m, m)];
                if m >= 1 {
                    basis.q[ip(m + 1, m)] = f * ct * basis.q[ip(m, m)];
                }
            }
            for n in (m + 2)..=nm {
                let nf = n as f64;
                let mf = m as f64;
                let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
                let b = (((nf - 1.0) * (nf - 1.0) - mf * mf) / (4.0 * (nf - 1.0) * (nf - 1.0) - 1.0))
                    .sqrt();
                basis.p[ip(n, m)] = a * (ct * basis.p[ip(n - 1, m)] - b * basis.p[ip(n - 2, m)]);
                if m >= 1 {
                    basis.q[ip(n, m)] = a * (ct * basis.q[ip(n - 1, m)] - b * basis.q[ip(n - 2, m)]);
                }
            }
        }
        basis
    }

    /// Build tables from a unit direction.
    pub fn from_direction(dir: &Vec3, n_max: u32) -> Result<Self> {
        let norm = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "direction must be a unit vector, |dir| = {norm}"
            )));
        }
        let ct = dir[2].clamp(-1.0, 1.0);
        let st = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
        let phi = if st == 0.0 { 0.0 } else { dir[1].atan2(dir[0]) };
        Ok(Self::from_angles(ct, st, phi, n_max))
    }

    /// `Pbar_n^m` with the signed-order extension `Pbar_n^{-m} = (-1)^m Pbar_n^m`.
    pub fn pbar(&self, n: u32, m: i32) -> f64 {
        let n = n as usize;
        if m.unsigned_abs() as usize > n || n > self.n_max {
            return 0.0;
        }
        let ma = m.unsigned_abs() as usize;
        let v = self.p[self.idx(n, ma)];
        if m < 0 && ma % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// `d Pbar_n^m / d theta` via the pole-safe ladder
    /// `2 P' = sqrt((n-m)(n+m+1)) P^{m+1} - sqrt((n+m)(n-m+1)) P^{m-1}`.
    pub fn dpbar_dtheta(&self, n: u32, m: i32) -> f64 {
        let nf = n as f64;
        let mf = m as f64;
        let up = ((nf - mf) * (nf + mf + 1.0)).max(0.0).sqrt();
        let dn = ((nf + mf) * (nf - mf + 1.0)).max(0.0).sqrt();
        0.5 * (up * self.pbar(n, m + 1) - dn * self.pbar(n, m - 1))
    }

    /// `m Pbar_n^m / sin theta`, finite at the poles.
    pub fn m_pbar_over_sin(&self, n: u32, m: i32) -> f64 {
        if m == 0 {
            return 0.0;
        }
        let n = n as usize;
        let ma = m.unsigned_abs() as usize;
        if ma > n || n > self.n_max {
            return 0.0;
        }
        let q = self.q[self.idx(n, ma)];
        let signed = if m < 0 && ma % 2 == 1 { -q } else { q };
        m as f64 * signed
    }

    /// Scalar harmonic `Y_n^m`.
    pub fn harmonic(&self, n: u32, m: i32) -> Complex64 {
        self.pbar(n, m) * Complex64::from_polar(1.0, m as f64 * self.phi)
    }

    fn frame(&self) -> (Vec3, Vec3, Vec3) {
        let (ct, st, phi) = (self.cos_theta, self.sin_theta, self.phi);
        let r_hat = [st * phi.cos(), st * phi.sin(), ct];
        let theta_hat = [ct * phi.cos(), ct * phi.sin(), -st];
        let phi_hat = [-phi.sin(), phi.cos(), 0.0];
        (r_hat, theta_hat, phi_hat)
    }

    /// Surface gradient `grad_S Y_n^m` (Cartesian components).
    pub fn surface_gradient(&self, n: u32, m: i32) -> Vec3C {
        let (_, theta_hat, phi_hat) = self.frame();
        let a = self.dpbar_dtheta(n, m);
        let g = self.m_pbar_over_sin(n, m);
        let em = Complex64::from_polar(1.0, m as f64 * self.phi);
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for c in 0..3 {
            out[c] = em * (a * theta_hat[c] + Complex64::i() * g * phi_hat[c]);
        }
        out
    }

    /// Unnormalized eigenfunction `kappa_i^{n,m}` at this direction.
    pub fn kappa(&self, idx: &ModeIndex) -> Vec3C {
        let (r_hat, theta_hat, phi_hat) = self.frame();
        let n = idx.degree;
        let m = idx.order;
        let em = Complex64::from_polar(1.0, m as f64 * self.phi);
        let i = Complex64::i();
        let mut out = [Complex64::new(0.0, 0.0); 3];
        match idx.family {
            1 => {
                // grad_S Y x nu = e^{im phi} (i G theta_hat - A phi_hat)
                let a = self.dpbar_dtheta(n, m);
                let g = self.m_pbar_over_sin(n, m);
                for c in 0..3 {
                    out[c] = em * (i * g * theta_hat[c] - a * phi_hat[c]);
                }
            }
            2 => {
                let a = self.dpbar_dtheta(n, m);
                let g = self.m_pbar_over_sin(n, m);
                let y = self.pbar(n, m);
                for c in 0..3 {
                    out[c] =
                        em * (a * theta_hat[c] + i * g * phi_hat[c] + n as f64 * y * r_hat[c]);
                }
            }
            _ => {
                let sd = n - 1;
                let a = self.dpbar_dtheta(sd, m);
                let g = self.m_pbar_over_sin(sd, m);
                let y = self.pbar(sd, m);
                for c in 0..3 {
                    out[c] =
                        em * (-a * theta_hat[c] - i * g * phi_hat[c] + n as f64 * y * r_hat[c]);
                }
            }
        }
        out
    }
}

/// Orthonormal complex spherical harmonic `Y_n^m(dir)`.
pub fn spherical_harmonic(n: u32, m: i32, unit_dir: &Vec3) -> Result<Complex64> {
    if m.unsigned_abs() > n {
        return Err(Error::InvalidArgument(format!("|m| = {} exceeds n = {n}", m.unsigned_abs())));
    }
    let basis = AngularBasis::from_direction(unit_dir, n)?;
    Ok(basis.harmonic(n, m))
}

/// Unnormalized eigenfunction `kappa_i^{n,m}(dir)`.
pub fn raw_eigenfunction(idx: &ModeIndex, unit_dir: &Vec3) -> Result<Vec3C> {
    let basis = AngularBasis::from_direction(unit_dir, idx.scalar_degree())?;
    Ok(basis.kappa(idx))
}

/// Analytic `L^2` norm squared of the raw eigenfunction on the radius-`r0`
/// sphere: family 1 -> `n(n+1) r0^2`, family 2 -> `n(2n+1) r0^2`,
/// family 3 -> `n(2n-1) r0^2`.
pub fn l2_norm_squared(idx: &ModeIndex, r0: f64) -> f64 {
    let n = idx.degree as f64;
    let angular = match idx.family {
        1 => n * (n + 1.0),
        2 => n * (2.0 * n + 1.0),
        _ => n * (2.0 * n - 1.0),
    };
    angular * r0 * r0
}

/// Normalizer `c` making `c kappa_raw` a unit vector in the `H*` inner
/// product: `c = (-e_i^n r0 ||kappa_raw||^2_{L^2})^{-1/2}`.
pub fn hstar_normalizer(idx: &ModeIndex, r0: f64, bg: &LameParams) -> Result<f64> {
    let e = sl_eigenvalue(idx.family, idx.degree, bg)?;
    let l2 = l2_norm_squared(idx, r0);
    let s = -e.re * r0 * l2;
    if s <= 0.0 {
        return Err(Error::InvalidArgument(
            "H* normalizer requires a convex background (e_i^n < 0)".into(),
        ));
    }
    Ok(1.0 / s.sqrt())
}

/// Truncated coefficient table over the `H*`-normalized eigenbasis.
///
/// Absent entries are zero. Iteration order is the `ModeIndex` ordering, so
/// serialized output is deterministic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModalField {
    n_max: u32,
    coeffs: BTreeMap<ModeIndex, Complex64>,
}

/// Serialized form of a [`ModalField`]: `n_max` header plus
/// `{family, n, m, re, im}` entries.
#[derive(Serialize, Deserialize)]
struct ModalFieldRepr {
    n_max: u32,
    entries: Vec<ModalFieldEntry>,
}

#[derive(Serialize, Deserialize)]
struct ModalFieldEntry {
    family: u8,
    n: u32,
    m: i32,
    re: f64,
    im: f64,
}

impl ModalField {
    pub fn new(n_max: u32) -> Self {
        Self { n_max, coeffs: BTreeMap::new() }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Insert or overwrite one coefficient. Zero coefficients are dropped.
    pub fn set(&mut self, idx: ModeIndex, value: Complex64) -> Result<()> {
        if idx.degree > self.n_max {
            return Err(Error::InvalidArgument(format!(
                "degree {} exceeds field truncation {}",
                idx.degree, self.n_max
            )));
        }
        if value.norm() == 0.0 {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, value);
        }
        Ok(())
    }

    pub fn get(&self, idx: &ModeIndex) -> Complex64 {
        self.coeffs.get(idx).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModeIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// `l^2` norm of the coefficient table (the `H*` norm of the field).
    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Sub-table of the families 1, 2 entries at degree 1 (the part carrying
    /// no dissipation).
    pub fn degree_one_part(&self) -> ModalField {
        let mut out = ModalField::new(self.n_max);
        for (idx, c) in &self.coeffs {
            if idx.degree == 1 && (idx.family == 1 || idx.family == 2) {
                out.coeffs.insert(*idx, *c);
            }
        }
        out
    }

    /// Complement of [`Self::degree_one_part`].
    pub fn dissipative_part(&self) -> ModalField {
        let mut out = ModalField::new(self.n_max);
        for (idx, c) in &self.coeffs {
            if !(idx.degree == 1 && (idx.family == 1 || idx.family == 2)) {
                out.coeffs.insert(*idx, *c);
            }
        }
        out
    }

    /// JSON per the external interface: array of `{family, n, m, re, im}`
    /// plus an `n_max` header.
    pub fn to_json(&self) -> String {
        let repr = ModalFieldRepr {
            n_max: self.n_max,
            entries: self
                .coeffs
                .iter()
                .map(|(idx, c)| ModalFieldEntry {
                    family: idx.family,
                    n: idx.degree,
                    m: idx.order,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ModalFieldRepr = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("modal field JSON: {e}")))?;
        let mut out = ModalField::new(repr.n_max);
        for e in repr.entries {
            let idx = ModeIndex::new(e.family, e.n, e.m)?;
            out.set(idx, Complex64::new(e.re, e.im))?;
        }
        Ok(out)
    }

    /// Evaluate the field (sum of `H*`-normalized eigenfunctions) at one
    /// direction on the radius-`r0` sphere.
    pub fn evaluate(&self, dir: &Vec3, r0: f64, bg: &LameParams) -> Result<Vec3C> {
        let basis = AngularBasis::from_direction(dir, self.n_max)?;
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (idx, coef) in &self.coeffs {
            let c = hstar_normalizer(idx, r0, bg)?;
            let kap = basis.kappa(idx);
            for comp in 0..3 {
                out[comp] += *coef * c * kap[comp];
            }
        }
        Ok(out)
    }

    /// Evaluate on every node of a grid (radius taken from the grid).
    pub fn synthesize(&self, grid: &SphereGrid, bg: &LameParams) -> Result<Vec<Vec3C>> {
        let normalizers: BTreeMap<ModeIndex, f64> = self
            .coeffs
            .keys()
            .map(|idx| Ok((*idx, hstar_normalizer(idx, grid.radius, bg)?)))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(grid.nodes.len());
        for node in &grid.nodes {
            let basis =
                AngularBasis::from_angles(node.cos_theta, node.sin_theta, node.phi, self.n_max);
            let mut v = [Complex64::new(0.0, 0.0); 3];
            for (idx, coef) in &self.coeffs {
                let kap = basis.kappa(idx);
                let c = normalizers[idx];
                for comp in 0..3 {
                    v[comp] += *coef * c * kap[comp];
                }
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// Result of projecting grid samples onto the truncated eigenbasis.
#[derive(Debug, Clone)]
pub struct Projection {
    pub field: ModalField,
    /// Relative `L^2` reconstruction residual on the grid.
    pub residual: f64,
}

/// Project a sampled boundary vector field onto the `H*`-normalized
/// eigenbasis by `L^2` quadrature against the raw eigenfunctions.
///
/// `samples` must align with `grid.nodes`. The grid must resolve the
/// truncation: at least `2 n_max + 2` nodes in each direction.
pub fn project_modal(
    samples: &[Vec3C],
    grid: &SphereGrid,
    n_max: u32,
    bg: &LameParams,
) -> Result<Projection> {
    if samples.len() != grid.nodes.len() {
        return Err(Error::InvalidArgument(format!(
            "sample count {} does not match grid size {}",
            samples.len(),
            grid.nodes.len()
        )));
    }
    let need = (2 * n_max + 2) as usize;
    if grid.n_theta < need || grid.n_phi < need {
        return Err(Error::Resolution(format!(
            "grid {}x{} under-resolves n_max = {n_max} (need >= {need} each direction)",
            grid.n_theta, grid.n_phi
        )));
    }

    let indices = ModeIndex::all_up_to(n_max);
    let mut raw = vec![Complex64::new(0.0, 0.0); indices.len()];
    for (node, sample) in grid.nodes.iter().zip(samples) {
        let basis = AngularBasis::from_angles(node.cos_theta, node.sin_theta, node.phi, n_max);
        for (k, idx) in indices.iter().enumerate() {
            let kap = basis.kappa(idx);
            let mut dot = Complex64::new(0.0, 0.0);
            for c in 0..3 {
                dot += sample[c] * kap[c].conj();
            }
            raw[k] += dot * node.weight;
        }
    }

    let mut coefs = Vec::with_capacity(indices.len());
    let mut max_mag = 0.0f64;
    for (k, idx) in indices.iter().enumerate() {
        let a_raw = raw[k] / l2_norm_squared(idx, grid.radius);
        let c = hstar_normalizer(idx, grid.radius, bg)?;
        let coef = a_raw / c;
        max_mag = max_mag.max(coef.norm());
        coefs.push((*idx, coef));
    }
    // Coefficients below quadrature roundoff are exact zeros of the
    // band-limited projection; keep the table sparse.
    let floor = 1e-12 * max_mag;
    let mut field = ModalField::new(n_max);
    for (idx, coef) in coefs {
        if coef.norm() > floor {
            field.set(idx, coef)?;
        }
    }

    // Reconstruction residual.
    let recon = field.synthesize(grid, bg)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for ((node, sample), rec) in grid.nodes.iter().zip(samples).zip(&recon) {
        for c in 0..3 {
            num += (sample[c] - rec[c]).norm_sqr() * node.weight;
            den += sample[c].norm_sqr() * node.weight;
        }
    }
    let residual = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
    Ok(Projection { field, residual })
}
