//! Point-wise integrands of the force formulations.
//!
//! Every evaluator returns the printed integrand including the printed
//! constant prefactor, but without the normalisation of the measure: the
//! quadrature supplies `dω/2π · d²q/(2π)²` (or `dω/2π · dx`).
//!
//! The quadrature never evaluates the bare integrands because they carry
//! `1/κ` or `1/q_z`. Each sector therefore also exposes a *slice*: all
//! quantities that only depend on `ω` and the vertical wave constant are
//! computed once, and the remaining dependence on the lateral direction is
//! evaluated with that factor already multiplied out.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, ForceError, Result};
use crate::physics::{
    coth_excess, doppler, medium_kappa1, reflection_unchecked, sign, thermal_argument, weights_unchecked,
    DopplerBranch, Kinematics, ModePoint, ReflectionPair, Sector, ThermalPair,
    TransverseConstant,
};
use crate::response::{DrudeModel, LorentzOscillator};

/// Everything that defines one physical configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub kin: Kinematics,
    pub thermal: ThermalPair,
    pub surface: DrudeModel,
    pub particle: LorentzOscillator,
}

impl ScenarioParams {
    pub fn new(
        beta: f64,
        z: f64,
        t1: f64,
        t2: f64,
        surface: DrudeModel,
        particle: LorentzOscillator,
    ) -> Result<Self> {
        Ok(Self {
            kin: Kinematics::new(beta)?.with_distance(z)?,
            thermal: ThermalPair::new(t1, t2)?,
            surface,
            particle,
        })
    }
}

/// The three published formulations. DK is available in its literal
/// one-quadrant form and folded onto the full `q`-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formulation {
    #[serde(rename = "ph")]
    Ph,
    #[serde(rename = "vp")]
    Vp,
    #[serde(rename = "dk")]
    DkFolded,
    #[serde(rename = "dk-quadrant")]
    DkQuadrant,
}

impl Formulation {
    pub const ALL: [Formulation; 4] = [
        Formulation::Ph,
        Formulation::Vp,
        Formulation::DkFolded,
        Formulation::DkQuadrant,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Formulation::Ph => "ph",
            Formulation::Vp => "vp",
            Formulation::DkFolded => "dk",
            Formulation::DkQuadrant => "dk-quadrant",
        }
    }
}

impl std::fmt::Display for Formulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Formulation {
    type Err = ForceError;

    fn from_str(s: &str) -> Result<Self> {
        Formulation::ALL
            .into_iter()
            .find(|f| f.label() == s)
            .ok_or_else(|| ForceError::Domain(format!("unknown formulation '{s}'")))
    }
}

/// `Im α(ω′)[N₁(ω) − N₂(ω′)]`.
///
/// On the line `ω′ = 0` the product is replaced by its limit
/// `−T₂ · dIm α/dω|₀` (zero at `T₂ = 0`).
#[inline]
pub(crate) fn thermal_factor(p: &ScenarioParams, omega: f64, omega_prime: f64) -> f64 {
    ThermalKernel::new(p, omega).factor(omega_prime)
}

/// The thermal factor at fixed lab frequency `ω`, with the `ω`-dependent
/// part of the occupation difference computed once.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ThermalKernel {
    particle: LorentzOscillator,
    excess1: f64,
    sign1: f64,
    /// `1/(2T₂)`, infinite at `T₂ = 0`.
    inv_2t2: f64,
    at_zero: f64,
}

impl ThermalKernel {
    pub(crate) fn new(p: &ScenarioParams, omega: f64) -> Self {
        // Both arguments are formed as ω · (1/2T) so that equal frequencies
        // at equal temperatures give bit-identical occupations.
        let inv = |t: f64| if t == 0.0 { f64::INFINITY } else { 0.5 / t };
        let (t1, t2) = (p.thermal.t1(), p.thermal.t2());
        let arg1 = if t1 == 0.0 { thermal_argument(omega, 0.0) } else { omega * inv(t1) };
        Self {
            particle: p.particle,
            excess1: coth_excess(arg1),
            sign1: sign(omega),
            inv_2t2: inv(t2),
            at_zero: -p.particle.im_alpha_slope_at_zero() * t2,
        }
    }

    /// `N₁(ω) − N₂(ω′)` for `ω′ ≠ 0`.
    #[inline]
    pub(crate) fn occupation(&self, omega_prime: f64) -> f64 {
        let excess2 = coth_excess(omega_prime * self.inv_2t2);
        0.5 * ((self.excess1 - excess2) + (self.sign1 - sign(omega_prime)))
    }

    #[inline]
    pub(crate) fn factor(&self, omega_prime: f64) -> f64 {
        if omega_prime == 0.0 {
            return self.at_zero;
        }
        self.particle.im_alpha(omega_prime) * self.occupation(omega_prime)
    }
}

/// Reflection amplitudes of the surface for the mode `(ω, vertical constant)`.
#[inline]
pub(crate) fn surface_reflection(
    p: &ScenarioParams,
    omega: f64,
    transverse: TransverseConstant,
) -> ReflectionPair {
    let eps1 = p.surface.eps_unchecked(omega);
    let kappa1 = medium_kappa1(omega, transverse, eps1);
    reflection_unchecked(transverse.complex_kappa(omega), kappa1, eps1)
}

/// Lateral direction `(q_x, q_y)` for a polar angle `θ`.
#[inline]
pub(crate) fn lateral(q: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (q * c, q * s)
}

/// Evanescent integrand at fixed `(ω, κ)`, with the `1/κ` removed.
#[derive(Debug, Clone, Copy)]
pub struct EvanescentSlice<'a> {
    p: &'a ScenarioParams,
    thermal: ThermalKernel,
    omega: f64,
    q: f64,
    ratio: f64,
    decay: f64,
    im_rs: f64,
    im_rp: f64,
}

impl<'a> EvanescentSlice<'a> {
    /// `κ ≥ 0`; `q = sqrt(κ² + ω²)`.
    pub fn new(p: &'a ScenarioParams, omega: f64, kappa: f64) -> Self {
        let q = kappa.hypot(omega);
        let transverse = TransverseConstant {
            sector: Sector::Evanescent,
            value: kappa,
        };
        let r = surface_reflection(p, omega, transverse);
        Self {
            p,
            thermal: ThermalKernel::new(p, omega),
            omega,
            q,
            ratio: kappa * kappa / (q * q),
            decay: (-2.0 * kappa * p.kin.z()).exp(),
            im_rs: r.rs.im,
            im_rp: r.rp.im,
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `Im α(ω′_b)[N₁(ω) − N₂(ω′_b)] Σ_μ φ_μ(ω′_b) Im R_μ`.
    #[inline]
    fn branch(&self, qx: f64, qy: f64, b: DopplerBranch) -> f64 {
        let kin = &self.p.kin;
        let wp = doppler(self.omega, qx, kin, b);
        let w = weights_unchecked(wp, qx * qx, qy * qy, self.ratio, kin);
        self.thermal.factor(wp) * (w.phis * self.im_rs + w.phip * self.im_rp)
    }

    /// `κ ×` integrand at lateral components `(q_x, q_y)` on the circle of
    /// radius `q`.
    #[inline]
    pub fn reduced_at(&self, f: Formulation, qx: f64, qy: f64) -> f64 {
        let kin = &self.p.kin;
        let common = qx * self.decay;
        match f {
            Formulation::Ph => common * self.branch(qx, qy, DopplerBranch::Minus) / kin.gamma(),
            Formulation::Vp => -8.0 * PI * common * self.branch(qx, qy, DopplerBranch::Minus),
            Formulation::DkFolded => {
                8.0 * PI / kin.gamma() * common * self.branch(qx, qy, DopplerBranch::Minus)
            }
            Formulation::DkQuadrant => {
                16.0 * PI / kin.gamma()
                    * common
                    * (self.branch(qx, qy, DopplerBranch::Minus)
                        - self.branch(qx, qy, DopplerBranch::Plus))
            }
        }
    }

    /// `κ ×` integrand at polar angle `θ` of the lateral wave vector.
    #[inline]
    pub fn reduced(&self, f: Formulation, theta: f64) -> f64 {
        let (qx, qy) = lateral(self.q, theta);
        self.reduced_at(f, qx, qy)
    }
}

/// Propagating-surface integrand at fixed `(ω, q_z)`, with the `1/q_z`
/// removed.
#[derive(Debug, Clone, Copy)]
pub struct PropagatingSlice<'a> {
    p: &'a ScenarioParams,
    thermal: ThermalKernel,
    omega: f64,
    q: f64,
    ratio: f64,
    cos2: f64,
    sin2: f64,
    r: ReflectionPair,
}

impl<'a> PropagatingSlice<'a> {
    /// `0 ≤ q_z ≤ ω`, `q = sqrt(ω² − q_z²)` unless given explicitly.
    pub fn new(p: &'a ScenarioParams, omega: f64, qz: f64) -> Self {
        let q = ((omega - qz) * (omega + qz)).max(0.0).sqrt();
        Self::with_q(p, omega, qz, q)
    }

    pub(crate) fn with_q(p: &'a ScenarioParams, omega: f64, qz: f64, q: f64) -> Self {
        let transverse = TransverseConstant {
            sector: Sector::Propagating,
            value: qz,
        };
        let (sin2, cos2) = (2.0 * qz * p.kin.z()).sin_cos();
        Self {
            p,
            thermal: ThermalKernel::new(p, omega),
            omega,
            q,
            ratio: -qz * qz / (q * q),
            cos2,
            sin2,
            r: surface_reflection(p, omega, transverse),
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn reflection(&self) -> ReflectionPair {
        self.r
    }

    /// `Im α(ω′_b)[N₁ − N₂(ω′_b)] Σ_μ φ_μ(ω′_b)(Re R_μ cos 2q_z z − Im R_μ sin 2q_z z)`.
    #[inline]
    fn branch(&self, qx: f64, qy: f64, b: DopplerBranch) -> f64 {
        let kin = &self.p.kin;
        let wp = doppler(self.omega, qx, kin, b);
        let w = weights_unchecked(wp, qx * qx, qy * qy, self.ratio, kin);
        let re = w.phis * self.r.rs.re + w.phip * self.r.rp.re;
        let im = w.phis * self.r.rs.im + w.phip * self.r.rp.im;
        self.thermal.factor(wp) * (re * self.cos2 - im * self.sin2)
    }

    #[inline]
    pub fn reduced_at(&self, f: Formulation, qx: f64, qy: f64) -> f64 {
        let g = self.p.kin.gamma();
        match f {
            Formulation::Ph => 2.0 / g * qx * self.branch(qx, qy, DopplerBranch::Minus),
            Formulation::DkFolded => 8.0 * PI / g * qx * self.branch(qx, qy, DopplerBranch::Minus),
            Formulation::DkQuadrant => {
                16.0 * PI / g
                    * qx
                    * (self.branch(qx, qy, DopplerBranch::Minus)
                        - self.branch(qx, qy, DopplerBranch::Plus))
            }
            // Rejected before a slice is built.
            Formulation::Vp => f64::NAN,
        }
    }

    #[inline]
    pub fn reduced(&self, f: Formulation, theta: f64) -> f64 {
        let (qx, qy) = lateral(self.q, theta);
        self.reduced_at(f, qx, qy)
    }

    /// Integrand of the propagating stress of the sliding-bodies approach,
    /// `−q_x(2 − |R_p|² − |R_s|²)[N₁(ω) − N₂(ω′)]`.
    #[inline]
    pub fn stress_at(&self, qx: f64) -> f64 {
        let wp = doppler(self.omega, qx, &self.p.kin, DopplerBranch::Minus);
        if wp == 0.0 {
            // N₂ diverges on the anomalous-Doppler line; the integrand is
            // integrable and this single point carries no weight.
            return 0.0;
        }
        let absorbed = 2.0 - self.r.rp.norm_sqr() - self.r.rs.norm_sqr();
        -qx * absorbed * self.thermal.occupation(wp)
    }

    #[inline]
    pub fn stress(&self, theta: f64) -> f64 {
        self.stress_at(self.q * theta.cos())
    }
}

fn require_positive_omega(f: Formulation, omega: f64) -> Result<()> {
    if omega > 0.0 {
        Ok(())
    } else {
        domain(format!("formulation {f} is defined for omega > 0 only, got {omega}"))
    }
}

/// Evanescent force integrand of formulation `f`.
///
/// PH accepts any real `ω`; VP and DK are printed for `ω > 0`. The quadrant
/// form additionally requires `q_x, q_y ≥ 0`.
pub fn ev_integrand(f: Formulation, mode: &ModePoint, p: &ScenarioParams) -> Result<f64> {
    if mode.sector() != Sector::Evanescent {
        return domain("evanescent integrand requested for a propagating mode");
    }
    let kappa = mode.transverse.value;
    if kappa == 0.0 {
        return Err(ForceError::Singular("kappa = 0 on the light line".into()));
    }
    if f != Formulation::Ph {
        require_positive_omega(f, mode.omega)?;
    }
    if f == Formulation::DkQuadrant && (mode.qx < 0.0 || mode.qy < 0.0) {
        return domain("quadrant form needs qx >= 0 and qy >= 0");
    }
    let slice = EvanescentSlice::new(p, mode.omega, kappa);
    Ok(slice.reduced_at(f, mode.qx, mode.qy) / kappa)
}

/// Literal one-quadrant DK evanescent integrand.
pub fn dk_ev_quadrant_integrand(mode: &ModePoint, p: &ScenarioParams) -> Result<f64> {
    ev_integrand(Formulation::DkQuadrant, mode, p)
}

/// Surface-dependent propagating force integrand (PH, DK folded, DK quadrant).
pub fn prop_surface_integrand(f: Formulation, mode: &ModePoint, p: &ScenarioParams) -> Result<f64> {
    if f == Formulation::Vp {
        return Err(ForceError::Unsupported(
            "no per-particle propagating-surface force is printed for vp".into(),
        ));
    }
    if mode.sector() != Sector::Propagating {
        return domain("propagating integrand requested for an evanescent mode");
    }
    require_positive_omega(f, mode.omega)?;
    if f == Formulation::DkQuadrant && (mode.qx < 0.0 || mode.qy < 0.0) {
        return domain("quadrant form needs qx >= 0 and qy >= 0");
    }
    let qz = mode.transverse.value;
    if qz == 0.0 {
        return Err(ForceError::Singular("q_z = 0 on the light line".into()));
    }
    let slice = PropagatingSlice::with_q(p, mode.omega, qz, mode.q);
    Ok(slice.reduced_at(f, mode.qx, mode.qy) / qz)
}

/// Free-space (blackbody) force integrand in the reduced angular variable
/// `x ∈ [−1, 1]`.
pub fn freespace_integrand(f: Formulation, omega: f64, x: f64, p: &ScenarioParams) -> Result<f64> {
    if !(omega > 0.0) {
        return domain(format!("free-space integrand needs omega > 0, got {omega}"));
    }
    if !(-1.0..=1.0).contains(&x) {
        return domain(format!("free-space integrand needs x in [-1, 1], got {x}"));
    }
    match f {
        Formulation::Ph | Formulation::DkFolded => Ok(freespace_unchecked(f, omega, x, p)),
        _ => Err(ForceError::Unsupported(format!(
            "no free-space force is printed for {f}"
        ))),
    }
}

#[inline]
pub(crate) fn freespace_unchecked(f: Formulation, omega: f64, x: f64, p: &ScenarioParams) -> f64 {
    let (beta, gamma) = (p.kin.beta(), p.kin.gamma());
    let w4 = omega * omega * omega * omega;
    match f {
        Formulation::DkFolded => {
            let s = 1.0 + beta * x;
            let w1 = gamma * omega * s;
            -4.0 * gamma * w4 * x * s * s * thermal_factor(p, omega, w1)
        }
        _ => {
            let s = 1.0 - beta * x;
            let wp = gamma * omega * s;
            gamma / PI * w4 * x * s * s * thermal_factor(p, omega, wp)
        }
    }
}

/// Integrand of the propagating stress on the surface in the sliding-bodies
/// approach. This is a force per unit area, not a per-particle force.
pub fn vp_stress_integrand(mode: &ModePoint, p: &ScenarioParams) -> Result<f64> {
    if mode.sector() != Sector::Propagating {
        return domain("stress integrand requested for an evanescent mode");
    }
    require_positive_omega(Formulation::Vp, mode.omega)?;
    let slice = PropagatingSlice::with_q(p, mode.omega, mode.transverse.value, mode.q);
    Ok(slice.stress_at(mode.qx))
}

/// `|I(ω, q_x, q_y) − I(−ω, −q_x, q_y)|` for the PH evanescent integrand.
pub fn symmetry_residual(mode: &ModePoint, p: &ScenarioParams) -> Result<f64> {
    let a = ev_integrand(Formulation::Ph, mode, p)?;
    let b = ev_integrand(Formulation::Ph, &mode.reversed(), p)?;
    Ok((a - b).abs())
}

/// Reflection amplitudes for an arbitrary mode, for diagnostics and tests.
pub fn mode_reflection(mode: &ModePoint, p: &ScenarioParams) -> ReflectionPair {
    surface_reflection(p, mode.omega, mode.transverse)
}

/// Complex `κ` of a mode on the retarded branch.
pub fn mode_kappa(mode: &ModePoint) -> Complex64 {
    mode.transverse.complex_kappa(mode.omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scenario(beta: f64, t1: f64, t2: f64) -> ScenarioParams {
        ScenarioParams::new(
            beta,
            1.0,
            t1,
            t2,
            DrudeModel::new(1.0, 0.1).unwrap(),
            LorentzOscillator::new(1.0, 1.0, 0.1).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn equilibrium_integrands_vanish() {
        let p = scenario(0.0, 0.4, 0.4);
        let ev = ModePoint::new(0.4, 0.7, 0.2);
        for f in Formulation::ALL {
            assert_eq!(ev_integrand(f, &ev, &p).unwrap(), 0.0);
        }
        let pr = ModePoint::new(1.2, 0.5, 0.3);
        assert_eq!(prop_surface_integrand(Formulation::Ph, &pr, &p).unwrap(), 0.0);
        assert_eq!(vp_stress_integrand(&pr, &p).unwrap(), 0.0);
        assert_eq!(freespace_integrand(Formulation::DkFolded, 0.8, 0.3, &p).unwrap(), 0.0);
    }

    #[test]
    fn quadrant_vanishes_on_qx_zero() {
        let p = scenario(0.5, 0.5, 0.2);
        let m = ModePoint::new(0.4, 0.0, 0.9);
        assert_eq!(dk_ev_quadrant_integrand(&m, &p).unwrap(), 0.0);
    }

    #[test]
    fn sector_and_domain_errors() {
        let p = scenario(0.5, 0.5, 0.2);
        let pr = ModePoint::new(1.2, 0.5, 0.3);
        assert!(ev_integrand(Formulation::Ph, &pr, &p).is_err());
        let ev = ModePoint::new(-0.4, 0.7, 0.2);
        assert!(ev_integrand(Formulation::Ph, &ev, &p).is_ok());
        assert!(ev_integrand(Formulation::Vp, &ev, &p).is_err());
        let neg = ModePoint::new(0.4, -0.7, 0.2);
        assert!(dk_ev_quadrant_integrand(&neg, &p).is_err());
        let light = ModePoint::new(0.5, 0.3, 0.4);
        assert!(matches!(
            ev_integrand(Formulation::Ph, &light, &p),
            Err(ForceError::Singular(_))
        ));
        assert!(matches!(
            prop_surface_integrand(Formulation::Vp, &pr, &p),
            Err(ForceError::Unsupported(_))
        ));
        assert!(freespace_integrand(Formulation::Vp, 0.5, 0.1, &p).is_err());
        assert!(freespace_integrand(Formulation::Ph, 0.5, 1.5, &p).is_err());
    }

    #[test]
    fn freespace_zero_on_x_zero() {
        let p = scenario(0.5, 1.0, 0.0);
        assert_eq!(freespace_integrand(Formulation::Ph, 0.8, 0.0, &p).unwrap(), 0.0);
        assert_eq!(freespace_integrand(Formulation::DkFolded, 0.8, 0.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn thermal_factor_is_continuous_across_doppler_zero() {
        let p = scenario(0.5, 0.5, 0.2);
        let at = thermal_factor(&p, 0.3, 0.0);
        let near = thermal_factor(&p, 0.3, 1e-7);
        assert_relative_eq!(at, near, max_relative = 1e-5);
    }

    #[test]
    fn perfect_mirror_stress_is_small() {
        let mut p = scenario(0.5, 0.5, 0.2);
        let m = ModePoint::new(1.2, 0.5, 0.3);
        let lossy = vp_stress_integrand(&m, &p).unwrap();
        p.surface = DrudeModel::new(1e6, 0.1).unwrap();
        let mirror = vp_stress_integrand(&m, &p).unwrap();
        assert!(mirror.abs() < 1e-6 * lossy.abs());
    }

    #[test]
    fn formulation_labels_round_trip() {
        for f in Formulation::ALL {
            assert_eq!(f.label().parse::<Formulation>().unwrap(), f);
        }
        assert!("xx".parse::<Formulation>().is_err());
    }
}
