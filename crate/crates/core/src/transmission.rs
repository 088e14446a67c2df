//! Modal solution of the single-inclusion transmission problem in the
//! quasi-static regime, with energy-dissipation bookkeeping and field
//! evaluation inside and outside the ball.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{Vec3, Vec3C};
use crate::modes::{hstar_normalizer, AngularBasis, ModalField, ModeIndex};
use crate::spectrum::{
    dissipation_weight, np_eigenvalue, sl_eigenvalue, xi_minus_half, PlasmonConfig,
};

/// Trace data of the incident potential on the inclusion boundary:
/// `h` is the Dirichlet trace, `g` the conormal (traction) trace.
#[derive(Debug, Clone)]
pub struct SourceData {
    pub h: ModalField,
    pub g: ModalField,
    pub r0: f64,
}

impl SourceData {
    pub fn new(h: ModalField, g: ModalField, r0: f64) -> Result<Self> {
        if h.n_max() != g.n_max() {
            return Err(Error::InvalidArgument(format!(
                "h and g truncation degrees differ: {} vs {}",
                h.n_max(),
                g.n_max()
            )));
        }
        if !(r0 > 0.0) {
            return Err(Error::InvalidArgument("r0 must be positive".into()));
        }
        Ok(Self { h, g, r0 })
    }
}

/// Interior and exterior layer densities of the transmission solve.
#[derive(Debug, Clone)]
pub struct DensityPair {
    /// Interior density (the plasmonic single layer).
    pub phi: ModalField,
    /// Exterior density (the background single layer).
    pub psi: ModalField,
}

impl DensityPair {
    /// The dissipation-free part: families 1, 2 at degree 1.
    pub fn phi_double_prime(&self) -> ModalField {
        self.phi.degree_one_part()
    }

    /// The dissipative complement.
    pub fn phi_prime(&self) -> ModalField {
        self.phi.dissipative_part()
    }
}

/// Solver outcome: densities plus diagnostics about resonant modes that the
/// source fails to excite.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub densities: DensityPair,
    /// Modes whose denominator magnitude is below the reporting threshold but
    /// whose numerator is zero: a resonant denominator is present but
    /// unexcited, so no blowup claim attaches to them.
    pub unexcited_resonances: Vec<ModeIndex>,
}

const DENOMINATOR_FLOOR: f64 = 1e-14;

/// Solve the single-inclusion transmission problem mode by mode:
/// `phi = (g - (1/2 + xi) h / (r0 e)) / D`, `psi = (e~/e) phi - h / (e r0)`.
pub fn solve_single_inclusion(src: &SourceData, cfg: &PlasmonConfig) -> Result<SolveOutcome> {
    if (src.r0 - cfg.r0).abs() > 1e-12 * cfg.r0 {
        return Err(Error::InvalidArgument(format!(
            "source radius {} does not match configuration radius {}",
            src.r0, cfg.r0
        )));
    }
    let tilde = cfg.tilde();
    let n_max = src.h.n_max();
    let mut phi = ModalField::new(n_max);
    let mut psi = ModalField::new(n_max);
    let mut unexcited = Vec::new();

    for idx in ModeIndex::all_up_to(n_max) {
        let h = src.h.get(&idx);
        let g = src.g.get(&idx);
        let e = sl_eigenvalue(idx.family, idx.degree, &cfg.background)?;
        let e_t = sl_eigenvalue(idx.family, idx.degree, &tilde)?;
        let xi = np_eigenvalue(idx.family, idx.degree, &cfg.background)?;
        let d = xi_minus_half(idx.family, idx.degree, &tilde)? - (0.5 + xi) * e_t / e;
        let numerator = g - (0.5 + xi) * h / (e * cfg.r0);
        if d.norm() < DENOMINATOR_FLOOR {
            if numerator.norm() == 0.0 {
                unexcited.push(idx);
                continue;
            }
            return Err(Error::SingularSystem(format!(
                "mode {idx:?}: |D| = {:.3e} below floor at delta = {} with excited numerator",
                d.norm(),
                cfg.delta
            )));
        }
        let phi_c = numerator / d;
        let psi_c = (e_t / e) * phi_c - h / (e * cfg.r0);
        phi.set(idx, phi_c)?;
        psi.set(idx, psi_c)?;
    }
    Ok(SolveOutcome { densities: DensityPair { phi, psi }, unexcited_resonances: unexcited })
}

/// Rebuild the source traces `(h, g)` from densities: the forward map of the
/// modal system, used as the solver's round-trip check.
pub fn forward_modal_map(dp: &DensityPair, cfg: &PlasmonConfig) -> Result<SourceData> {
    let tilde = cfg.tilde();
    let n_max = dp.phi.n_max();
    let mut h = ModalField::new(n_max);
    let mut g = ModalField::new(n_max);
    for idx in ModeIndex::all_up_to(n_max) {
        let phi = dp.phi.get(&idx);
        let psi = dp.psi.get(&idx);
        if phi.norm() == 0.0 && psi.norm() == 0.0 {
            continue;
        }
        let e = sl_eigenvalue(idx.family, idx.degree, &cfg.background)?;
        let e_t = sl_eigenvalue(idx.family, idx.degree, &tilde)?;
        let xi = np_eigenvalue(idx.family, idx.degree, &cfg.background)?;
        // S~[phi] - S[psi] = h; (-1/2 + K~*)[phi] - (1/2 + K*)[psi] = g.
        h.set(idx, cfg.r0 * (e_t * phi - e * psi))?;
        g.set(idx, xi_minus_half(idx.family, idx.degree, &tilde)? * phi - (0.5 + xi) * psi)?;
    }
    SourceData::new(h, g, cfg.r0)
}

/// Build the trace data of a family-1 potential
/// `F = sum f^{n,m} (r/r_e)^n kappa_1^{n,m}`:
/// `h` entries are `f^{n,m}`, `g` entries `f^{n,m} mu0 (n-1)/r_e`.
pub fn modal_source_from_family1(
    coeffs: &[(u32, i32, Complex64)],
    r_e: f64,
    n_max: u32,
    bg_mu0: f64,
) -> Result<SourceData> {
    let mut h = ModalField::new(n_max);
    let mut g = ModalField::new(n_max);
    for &(n, m, f) in coeffs {
        if !f.is_finite() {
            return Err(Error::InvalidArgument("source coefficient not finite".into()));
        }
        let idx = ModeIndex::new(1, n, m)?;
        h.set(idx, f)?;
        g.set(idx, f * bg_mu0 * (n as f64 - 1.0) / r_e)?;
    }
    SourceData::new(h, g, r_e)
}

/// Fixed `L^2 <-> H*` factor in the mode-wise energy:
/// `nu_i^n = -1 / e_i^n(lambda0, mu0)`, the exact value of
/// `r0 int_{dD} |kappa^|^2 ds` for the `H*`-normalized eigenbasis.
pub fn energy_normalization(family: u8, n: u32, cfg: &PlasmonConfig) -> Result<f64> {
    let e = sl_eigenvalue(family, n, &cfg.background)?;
    Ok(-1.0 / e.re)
}

/// Quasi-static dissipated energy
/// `E = Im int_{dD} d_nu~ S~[phi]|_- . conj(S~[phi]) ds`
/// evaluated mode-wise: `E = sum |phi_i^{n,m}|^2 w_i^n nu_i^n`.
pub fn dissipated_energy(dp: &DensityPair, cfg: &PlasmonConfig) -> Result<f64> {
    let mut total = 0.0;
    for (idx, coef) in dp.phi.iter() {
        let w = dissipation_weight(idx.family, idx.degree, cfg)?;
        let nu = energy_normalization(idx.family, idx.degree, cfg)?;
        total += coef.norm_sqr() * w * nu;
    }
    Ok(total)
}

/// Radial solution kinds of the family-1 profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialKind {
    /// `r^n kappa_1^{n,m}`.
    Solid,
    /// `r^{-(n+1)} kappa_1^{n,m}`.
    Decaying,
}

/// Traction coefficient of the family-1 radial solutions on the radius-`r`
/// sphere: `Solid -> mu (n-1) r^{n-1}`, `Decaying -> -mu (n+2) r^{-(n+2)}`.
pub fn family1_traction_coeff(kind: RadialKind, n: u32, mu: Complex64, r: f64) -> Complex64 {
    let nf = n as f64;
    match kind {
        RadialKind::Solid => mu * (nf - 1.0) * r.powi(n as i32 - 1),
        RadialKind::Decaying => -mu * (nf + 2.0) * r.powf(-(nf + 2.0)),
    }
}

/// How a field value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EvaluationMethod {
    /// Family-1 closed radial profiles only.
    Analytic,
    /// Some modes required surface quadrature (families 2, 3).
    Quadrature,
}

/// A field value together with the method that produced it.
#[derive(Debug, Clone, Copy)]
pub struct FieldValue {
    pub value: Vec3C,
    pub method: EvaluationMethod,
}

/// Evaluate the transmission solution at `x`:
/// `u = S~[phi]` inside, `u = S[psi] + F` outside.
///
/// Family-1 modes use the closed radial profiles. Modes of families 2 and 3
/// are evaluated by surface quadrature through the oracle machinery and the
/// result is flagged [`EvaluationMethod::Quadrature`].
pub fn evaluate_field(
    dp: &DensityPair,
    src: &SourceData,
    x: &Vec3,
    cfg: &PlasmonConfig,
) -> Result<FieldValue> {
    let r = crate::kernels::norm(x);
    let r0 = cfg.r0;
    if (r - r0).abs() < 1e-12 * r0 {
        return Err(Error::Domain(
            "evaluation on the boundary; take one-sided limits instead".into(),
        ));
    }
    let interior = r < r0;
    let density = if interior { &dp.phi } else { &dp.psi };
    let material = if interior { cfg.tilde() } else { cfg.background };

    let mut value = [Complex64::new(0.0, 0.0); 3];
    let mut method = EvaluationMethod::Analytic;

    // Family 1 analytic; families 2, 3 deferred to quadrature.
    let mut needs_quadrature = ModalField::new(density.n_max());
    let dir = if r > 0.0 { [x[0] / r, x[1] / r, x[2] / r] } else { [0.0, 0.0, 1.0] };
    let basis = AngularBasis::from_direction(&dir, density.n_max())?;
    for (idx, coef) in density.iter() {
        if idx.family == 1 {
            let e = sl_eigenvalue(1, idx.degree, &material)?;
            let n = idx.degree as i32;
            let radial = if interior {
                e * r.powi(n) / r0.powi(n - 1)
            } else {
                e * r0.powi(n + 2) / r.powi(n + 1)
            };
            let c = hstar_normalizer(idx, r0, &cfg.background)?;
            let kap = basis.kappa(idx);
            for comp in 0..3 {
                value[comp] += *coef * radial * c * kap[comp];
            }
        } else {
            needs_quadrature.set(*idx, *coef)?;
            method = EvaluationMethod::Quadrature;
        }
    }
    if !needs_quadrature.is_empty() {
        let spec = crate::oracle::QuadratureSpec::default();
        let v = crate::oracle::single_layer_quadrature(
            &needs_quadrature,
            &cfg.background,
            x,
            r0,
            &material,
            &spec,
        )?;
        for comp in 0..3 {
            value[comp] += v[comp];
        }
    }

    if !interior {
        // Add the incident potential: family-1 h-entries of the source are
        // the coefficients of F = sum f (r/r0)^n kappa^.
        for (idx, coef) in src.h.iter() {
            if idx.family != 1 {
                continue;
            }
            let c = hstar_normalizer(idx, r0, &cfg.background)?;
            let kap = basis.kappa(idx);
            let radial = (r / r0).powi(idx.degree as i32);
            for comp in 0..3 {
                value[comp] += *coef * radial * c * kap[comp];
            }
        }
    }
    Ok(FieldValue { value, method })
}

/// `(||phi||, ||phi'||, ||phi''||)` diagnostics for sweep reports.
pub fn density_norms(dp: &DensityPair) -> (f64, f64, f64) {
    (dp.phi.norm(), dp.phi_prime().norm(), dp.phi_double_prime().norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::LameParams;
    use crate::spectrum::{critical_value, CriticalBranch};

    fn bg() -> LameParams {
        LameParams::background(2.0, 1.0).unwrap()
    }

    fn lstsq_slope(points: &[(f64, f64)]) -> f64 {
        let n = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn zero_source_gives_zero_densities() {
        let src = modal_source_from_family1(&[], 1.0, 5, 1.0).unwrap();
        let cfg = PlasmonConfig::new(1.0, -4.0, 1e-3, bg(), 1.0).unwrap();
        let out = solve_single_inclusion(&src, &cfg).unwrap();
        assert!(out.densities.phi.is_empty());
        assert!(out.densities.psi.is_empty());
    }

    #[test]
    fn family1_source_traction_factors() {
        let src = modal_source_from_family1(
            &[(1, 0, Complex64::new(1.0, 0.0)), (3, 0, Complex64::new(2.0, 0.0))],
            1.0,
            4,
            1.0,
        )
        .unwrap();
        let i1 = ModeIndex::new(1, 1, 0).unwrap();
        let i3 = ModeIndex::new(1, 3, 0).unwrap();
        assert_eq!(src.g.get(&i1), Complex64::new(0.0, 0.0));
        assert_eq!(src.g.get(&i3), Complex64::new(4.0, 0.0));
    }

    #[test]
    fn round_trip_solver_forward_map() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let cfgs = [
            PlasmonConfig::new(1.7, -3.2, 1e-4, bg(), 1.0).unwrap(),
            PlasmonConfig::new(-0.6, 0.9, 1e-1, bg(), 1.0).unwrap(),
            PlasmonConfig::new(2.0, 2.0, 1e-6, bg(), 1.0).unwrap(),
        ];
        for cfg in cfgs {
            let n_max = 6;
            let mut h = ModalField::new(n_max);
            let mut g = ModalField::new(n_max);
            for idx in ModeIndex::all_up_to(n_max) {
                h.set(idx, Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .unwrap();
                g.set(idx, Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .unwrap();
            }
            let src = SourceData::new(h, g, 1.0).unwrap();
            let out = solve_single_inclusion(&src, &cfg).unwrap();
            let back = forward_modal_map(&out.densities, &cfg).unwrap();
            for idx in ModeIndex::all_up_to(n_max) {
                let dh = (back.h.get(&idx) - src.h.get(&idx)).norm();
                let dg = (back.g.get(&idx) - src.g.get(&idx)).norm();
                assert!(dh <= 1e-12 * src.h.get(&idx).norm().max(1.0), "{idx:?}: dh={dh}");
                assert!(dg <= 1e-12 * src.g.get(&idx).norm().max(1.0), "{idx:?}: dg={dg}");
            }
        }
    }

    #[test]
    fn background_material_consistency_at_zero_delta() {
        // eps1 = eps2 = 1, delta = 0: the inclusion is the background; the
        // solver stays regular (D = -1) and the exterior field equals F.
        let cfg = PlasmonConfig::new(1.0, 1.0, 0.0, bg(), 1.0).unwrap();
        let src = modal_source_from_family1(
            &[(2, 1, Complex64::new(1.0, 0.0)), (3, 0, Complex64::new(0.5, 0.0))],
            1.0,
            4,
            1.0,
        )
        .unwrap();
        let out = solve_single_inclusion(&src, &cfg).unwrap();
        // No scattering off an identical material.
        assert!(out.densities.psi.norm() < 1e-14, "psi norm {}", out.densities.psi.norm());
        // Continuity across the boundary for the full solution.
        let dir = {
            let raw = [0.3f64, -0.5, 0.81];
            let n = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
            [raw[0] / n, raw[1] / n, raw[2] / n]
        };
        let h = 1e-6;
        let xm = [dir[0] * (1.0 - h), dir[1] * (1.0 - h), dir[2] * (1.0 - h)];
        let xp = [dir[0] * (1.0 + h), dir[1] * (1.0 + h), dir[2] * (1.0 + h)];
        let inner = evaluate_field(&out.densities, &src, &xm, &cfg).unwrap();
        let outer = evaluate_field(&out.densities, &src, &xp, &cfg).unwrap();
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for c in 0..3 {
            diff = diff.max((inner.value[c] - outer.value[c]).norm());
            scale = scale.max(outer.value[c].norm());
        }
        assert!(diff < 1e-4 * scale.max(1e-12), "jump {diff} vs scale {scale}");
    }

    #[test]
    fn resonant_mode_blows_up_like_inverse_delta() {
        let m = bg();
        let c13 = critical_value(CriticalBranch::C1(3), 0.0, &m).unwrap();
        let src =
            modal_source_from_family1(&[(3, 0, Complex64::new(1.0, 0.0))], 1.0, 3, 1.0).unwrap();
        let mut pts = Vec::new();
        for k in 3..=7 {
            let delta = 10f64.powi(-k);
            let cfg = PlasmonConfig::new(1.0, c13, delta, m, 1.0).unwrap();
            let out = solve_single_inclusion(&src, &cfg).unwrap();
            pts.push((delta.ln(), out.densities.phi.norm().ln()));
        }
        let slope = lstsq_slope(&pts);
        assert!((slope + 1.0).abs() < 0.02, "slope {slope}");
    }

    #[test]
    fn off_critical_densities_stay_bounded() {
        let m = bg();
        let src =
            modal_source_from_family1(&[(3, 0, Complex64::new(1.0, 0.0))], 1.0, 3, 1.0).unwrap();
        let mut norms = Vec::new();
        for k in 3..=7 {
            let cfg = PlasmonConfig::new(2.0, 2.0, 10f64.powi(-k), m, 1.0).unwrap();
            let out = solve_single_inclusion(&src, &cfg).unwrap();
            norms.push(out.densities.phi.norm());
        }
        let max = norms.iter().cloned().fold(0.0, f64::max);
        let min = norms.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 1.01, "norms should be flat off criticality: {norms:?}");
    }

    #[test]
    fn unexcited_resonance_reported_not_fatal() {
        let m = bg();
        let c12 = critical_value(CriticalBranch::C1(2), 0.0, &m).unwrap();
        // Exactly critical with delta = 0, but the source only carries a
        // family-1 degree-3 mode: the degree-2 resonance stays unexcited.
        let cfg = PlasmonConfig::new(1.0, c12, 0.0, m, 1.0).unwrap();
        let src =
            modal_source_from_family1(&[(3, 0, Complex64::new(1.0, 0.0))], 1.0, 3, 1.0).unwrap();
        let out = solve_single_inclusion(&src, &cfg).unwrap();
        assert!(out
            .unexcited_resonances
            .iter()
            .any(|idx| idx.family == 1 && idx.degree == 2));

        // The same configuration with the critical mode excited is singular.
        let src2 =
            modal_source_from_family1(&[(2, 0, Complex64::new(1.0, 0.0))], 1.0, 3, 1.0).unwrap();
        assert!(matches!(
            solve_single_inclusion(&src2, &cfg),
            Err(Error::SingularSystem(_))
        ));
    }

    #[test]
    fn energy_zero_for_degree_one_modes() {
        let cfg = PlasmonConfig::new(1.0, -4.0, 1e-3, bg(), 1.0).unwrap();
        let mut phi = ModalField::new(2);
        phi.set(ModeIndex::new(1, 1, 0).unwrap(), Complex64::new(3.0, 1.0)).unwrap();
        phi.set(ModeIndex::new(2, 1, -1).unwrap(), Complex64::new(0.0, 2.0)).unwrap();
        let dp = DensityPair { phi, psi: ModalField::new(2) };
        assert_eq!(dissipated_energy(&dp, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn energy_slope_at_criticality() {
        let m = bg();
        let c13 = critical_value(CriticalBranch::C1(3), 0.0, &m).unwrap();
        let src =
            modal_source_from_family1(&[(3, 0, Complex64::new(1.0, 0.0))], 1.0, 3, 1.0).unwrap();
        let mut pts = Vec::new();
        for k in 3..=6 {
            let delta = 10f64.powi(-k);
            let cfg = PlasmonConfig::new(1.0, c13, delta, m, 1.0).unwrap();
            let out = solve_single_inclusion(&src, &cfg).unwrap();
            let e = dissipated_energy(&out.densities, &cfg).unwrap();
            assert!(e >= 0.0);
            pts.push((delta.ln(), e.ln()));
        }
        let slope = lstsq_slope(&pts);
        assert!((slope + 1.0).abs() < 0.05, "energy slope {slope}");
    }

    #[test]
    fn energy_nonnegative_for_random_densities() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let l0 = rng.random::<f64>() * 9.0 + 0.5;
            let m0 = rng.random::<f64>() * 9.0 + 0.5;
            let m = LameParams::background(l0, m0).unwrap();
            let cfg = PlasmonConfig::new(
                rng.random::<f64>() * 20.0 - 10.0,
                rng.random::<f64>() * 20.0 - 10.0,
                10f64.powf(-6.0 * rng.random::<f64>()),
                m,
                1.0,
            )
            .unwrap();
            let mut phi = ModalField::new(5);
            for idx in ModeIndex::all_up_to(5) {
                if rng.random::<f64>() < 0.3 {
                    phi.set(
                        idx,
                        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                    )
                    .unwrap();
                }
            }
            let dp = DensityPair { phi, psi: ModalField::new(5) };
            let e = dissipated_energy(&dp, &cfg).unwrap();
            assert!(e >= -1e-14, "negative energy {e}");
        }
    }

    #[test]
    fn traction_coeff_identities() {
        // e_1^n mu (n-1) = -(n-1)/(2n+1) = -1/2 + xi_1^n, and the traction
        // jump across the boundary equals the density.
        for n in 1..=10u32 {
            let mu = Complex64::new(1.7, 0.0);
            let nf = n as f64;
            let e = -1.0 / (mu * (2.0 * nf + 1.0));
            let interior = e * family1_traction_coeff(RadialKind::Solid, n, mu, 1.0);
            assert!(
                (interior - Complex64::new(-(nf - 1.0) / (2.0 * nf + 1.0), 0.0)).norm() < 1e-15
            );
            let exterior = e * family1_traction_coeff(RadialKind::Decaying, n, mu, 1.0);
            assert!((exterior - interior - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn solid_n1_traction_vanishes() {
        let v = family1_traction_coeff(RadialKind::Solid, 1, Complex64::new(2.5, 0.1), 0.7);
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn interior_field_matches_radial_profile() {
        // Single family-1 density mode (n=2, m=0), amplitude 1, r0 = 1:
        // u(x) = e~_1^2 r^2 kappa^(x^) inside.
        let cfg = PlasmonConfig::new(1.0, 0.8, 0.05, bg(), 1.0).unwrap();
        let tilde = cfg.tilde();
        let idx = ModeIndex::new(1, 2, 0).unwrap();
        let mut phi = ModalField::new(3);
        phi.set(idx, Complex64::new(1.0, 0.0)).unwrap();
        let dp = DensityPair { phi, psi: ModalField::new(3) };
        let src = modal_source_from_family1(&[], 1.0, 3, 1.0).unwrap();

        let dir = {
            let raw = [0.48f64, 0.6, 0.64];
            let n = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
            [raw[0] / n, raw[1] / n, raw[2] / n]
        };
        let r = 0.5;
        let x = [dir[0] * r, dir[1] * r, dir[2] * r];
        let got = evaluate_field(&dp, &src, &x, &cfg).unwrap();
        assert_eq!(got.method, EvaluationMethod::Analytic);

        let e_t = sl_eigenvalue(1, 2, &tilde).unwrap();
        let c = hstar_normalizer(&idx, 1.0, &cfg.background).unwrap();
        let kap = crate::modes::raw_eigenfunction(&idx, &dir).unwrap();
        for comp in 0..3 {
            let expect = e_t * r * r * c * kap[comp];
            assert!((got.value[comp] - expect).norm() < 1e-13);
        }

        // Exterior with the density on psi at r = 2: e_1^2 / 2^3 profile.
        let mut psi = ModalField::new(3);
        psi.set(idx, Complex64::new(1.0, 0.0)).unwrap();
        let dp2 = DensityPair { phi: ModalField::new(3), psi };
        let x2 = [dir[0] * 2.0, dir[1] * 2.0, dir[2] * 2.0];
        let got2 = evaluate_field(&dp2, &src, &x2, &cfg).unwrap();
        let e = sl_eigenvalue(1, 2, &cfg.background).unwrap();
        for comp in 0..3 {
            let expect = e / 8.0 * c * kap[comp];
            assert!((got2.value[comp] - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn boundary_evaluation_rejected() {
        let cfg = PlasmonConfig::new(1.0, 1.0, 0.1, bg(), 1.0).unwrap();
        let dp = DensityPair { phi: ModalField::new(2), psi: ModalField::new(2) };
        let src = modal_source_from_family1(&[], 1.0, 2, 1.0).unwrap();
        assert!(matches!(
            evaluate_field(&dp, &src, &[1.0, 0.0, 0.0], &cfg),
            Err(Error::Domain(_))
        ));
    }
}
