//! Algebraic building blocks shared by every force formulation.
//!
//! Natural units are used throughout: `ħ = c = k_B = 1` and unit vacuum
//! permittivity. Frequencies set the base scale; lengths are inverse
//! frequencies and temperatures are frequencies.

use num_complex::Complex64;

use crate::error::{domain, ForceError, Result};

/// Particle velocity and distance from the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    beta: f64,
    gamma: f64,
    z: f64,
}

impl Kinematics {
    /// Builds the kinematics for velocity `beta = v/c` at unit distance.
    pub fn new(beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&beta) {
            return domain(format!("beta must lie in [0, 1), got {beta}"));
        }
        let gamma = 1.0 / (1.0 - beta * beta).sqrt();
        Ok(Self { beta, gamma, z: 1.0 })
    }

    /// Attaches the particle-surface distance.
    pub fn with_distance(self, z: f64) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return domain(format!("distance z must be positive and finite, got {z}"));
        }
        Ok(Self { z, ..self })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// Surface temperature `t1` (surface rest frame) and particle temperature
/// `t2` (co-moving frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPair {
    t1: f64,
    t2: f64,
}

impl ThermalPair {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        for (name, t) in [("t1", t1), ("t2", t2)] {
            if !(t >= 0.0 && t.is_finite()) {
                return domain(format!("{name} must be non-negative and finite, got {t}"));
            }
        }
        Ok(Self { t1, t2 })
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }
}

/// Evanescent (`q > |ω|`) or propagating (`q < |ω|`) photon modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    Evanescent,
    Propagating,
}

/// Vertical wave constant of a mode: `κ = sqrt(q² − ω²)` for evanescent
/// modes, `q_z = sqrt(ω² − q²)` for propagating ones. Both are stored as
/// non-negative reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseConstant {
    pub sector: Sector,
    pub value: f64,
}

impl TransverseConstant {
    /// `κ²`, analytically continued to `−q_z²` for propagating modes.
    #[inline]
    pub fn kappa_sq(&self) -> f64 {
        match self.sector {
            Sector::Evanescent => self.value * self.value,
            Sector::Propagating => -self.value * self.value,
        }
    }

    /// `κ` as a complex number on the retarded branch: real for evanescent
    /// modes, `−i q_z sgn ω` for propagating ones.
    #[inline]
    pub fn complex_kappa(&self, omega: f64) -> Complex64 {
        match self.sector {
            Sector::Evanescent => Complex64::new(self.value, 0.0),
            Sector::Propagating => Complex64::new(0.0, -self.value * sign(omega)),
        }
    }
}

/// One photon mode `(ω, q_x, q_y)` with its lateral magnitude and
/// vertical wave constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePoint {
    pub omega: f64,
    pub qx: f64,
    pub qy: f64,
    pub q: f64,
    pub transverse: TransverseConstant,
}

impl ModePoint {
    pub fn new(omega: f64, qx: f64, qy: f64) -> Self {
        let q = qx.hypot(qy);
        Self {
            omega,
            qx,
            qy,
            q,
            transverse: transverse_constant(omega, q),
        }
    }

    pub fn sector(&self) -> Sector {
        self.transverse.sector
    }

    /// The image under `(ω, q_x) ↦ (−ω, −q_x)`.
    pub fn reversed(&self) -> Self {
        Self {
            omega: -self.omega,
            qx: -self.qx,
            ..*self
        }
    }
}

/// Which Doppler-shifted frequency to form: `ω′₋ = γ(ω − q_x v)` or
/// `ω′₊ = γ(ω + q_x v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DopplerBranch {
    Minus,
    Plus,
}

/// Frequency of the mode seen in the particle's co-moving frame.
#[inline]
pub fn doppler(omega: f64, qx: f64, kin: &Kinematics, branch: DopplerBranch) -> f64 {
    match branch {
        DopplerBranch::Minus => kin.gamma * (omega - kin.beta * qx),
        DopplerBranch::Plus => kin.gamma * (omega + kin.beta * qx),
    }
}

/// `sgn x`, with `sgn 0 = 0`.
#[inline]
pub(crate) fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `coth x − sgn x`, evaluated without cancellation. Odd in `x`, zero at
/// `|x| = ∞`.
#[inline]
pub(crate) fn coth_excess(x: f64) -> f64 {
    let ax = x.abs();
    if ax.is_infinite() {
        return 0.0;
    }
    sign(x) * 2.0 / (2.0 * ax).exp_m1()
}

/// Half argument of the `coth` in the occupation number; `±∞` at `t = 0`.
#[inline]
pub(crate) fn thermal_argument(omega: f64, t: f64) -> f64 {
    if t == 0.0 {
        if omega < 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        omega / (2.0 * t)
    }
}

/// Bose-Einstein occupation `N(ω, T) = ½[coth(ω/2T) − 1]`.
///
/// At `T = 0` this is the step `0` for `ω > 0` and `−1` for `ω < 0`.
pub fn occupation(omega: f64, t: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(ForceError::Singular(
            "occupation number evaluated at omega = 0".into(),
        ));
    }
    if !(t >= 0.0) {
        return domain(format!("temperature must be non-negative, got {t}"));
    }
    let x = thermal_argument(omega, t);
    Ok(0.5 * (coth_excess(x) + sign(omega) - 1.0))
}

/// `N₁(ω) − N₂(ω′)` written as a difference of `coth` functions, so that it
/// is exactly odd under `(ω, ω′) ↦ (−ω, −ω′)`.
#[inline]
pub fn occupation_difference(omega: f64, t1: f64, omega_prime: f64, t2: f64) -> f64 {
    let smooth = coth_excess(thermal_argument(omega, t1))
        - coth_excess(thermal_argument(omega_prime, t2));
    0.5 * (smooth + sign(omega) - sign(omega_prime))
}

/// Classifies `(ω, q)` and returns the matching vertical wave constant.
///
/// The boundary `q = |ω|` is tagged evanescent with value zero.
pub fn transverse_constant(omega: f64, q: f64) -> TransverseConstant {
    let w = omega.abs();
    if q >= w {
        TransverseConstant {
            sector: Sector::Evanescent,
            value: ((q - w) * (q + w)).sqrt(),
        }
    } else {
        TransverseConstant {
            sector: Sector::Propagating,
            value: ((w - q) * (w + q)).sqrt(),
        }
    }
}

/// Propagation constant inside the half-space,
/// `κ₁ = sqrt(κ² − (ε₁ − 1)ω²)` with `Re κ₁ ≥ 0`.
///
/// `eps1` is the permittivity at `ω` (already conjugated for `ω < 0`). For
/// negative frequencies the result is `κ₁(|ω|)*`.
#[inline]
pub fn medium_kappa1(omega: f64, transverse: TransverseConstant, eps1: Complex64) -> Complex64 {
    let negative = omega < 0.0;
    let eps_pos = if negative { eps1.conj() } else { eps1 };
    let k = (transverse.kappa_sq() - (eps_pos - 1.0) * (omega * omega)).sqrt();
    if negative {
        k.conj()
    } else {
        k
    }
}

/// Complex reflection amplitudes of the half-space for both polarizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub rs: Complex64,
    pub rp: Complex64,
}

/// Fresnel amplitudes `R_s = (κ − κ₁)/(κ + κ₁)` and
/// `R_p = (ε₁κ − κ₁)/(ε₁κ + κ₁)`.
pub fn reflection_coeffs(
    kappa: Complex64,
    kappa1: Complex64,
    eps1: Complex64,
) -> Result<ReflectionPair> {
    let den_s = kappa + kappa1;
    let den_p = eps1 * kappa + kappa1;
    if den_s.norm_sqr() == 0.0 || den_p.norm_sqr() == 0.0 {
        return Err(ForceError::Singular(
            "reflection amplitude denominator vanishes (surface-mode pole)".into(),
        ));
    }
    Ok(reflection_unchecked(kappa, kappa1, eps1))
}

#[inline]
pub(crate) fn reflection_unchecked(
    kappa: Complex64,
    kappa1: Complex64,
    eps1: Complex64,
) -> ReflectionPair {
    let ek = eps1 * kappa;
    ReflectionPair {
        rs: (kappa - kappa1) / (kappa + kappa1),
        rp: (ek - kappa1) / (ek + kappa1),
    }
}

/// Polarization weights `φ_s`, `φ_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair {
    pub phis: f64,
    pub phip: f64,
}

/// `φ_s = ω′² + 2γ²β² q_y² κ²/q²` and `φ_p = ω′² + 2γ²(q² − β² q_x²) κ²/q²`.
///
/// For propagating modes `κ²` continues to `−q_z²`.
pub fn polarization_weights(
    omega_prime: f64,
    qx: f64,
    qy: f64,
    transverse: TransverseConstant,
    kin: &Kinematics,
) -> Result<WeightPair> {
    let q2 = qx * qx + qy * qy;
    if q2 == 0.0 {
        return domain("polarization weights are undefined at q = 0");
    }
    Ok(weights_unchecked(
        omega_prime,
        qx * qx,
        qy * qy,
        transverse.kappa_sq() / q2,
        kin,
    ))
}

/// Weights from squared components and the ratio `κ²/q²`.
#[inline]
pub(crate) fn weights_unchecked(
    omega_prime: f64,
    qx2: f64,
    qy2: f64,
    kappa_sq_over_q_sq: f64,
    kin: &Kinematics,
) -> WeightPair {
    let g2 = kin.gamma * kin.gamma;
    let b2 = kin.beta * kin.beta;
    let w2 = omega_prime * omega_prime;
    WeightPair {
        phis: w2 + 2.0 * g2 * b2 * qy2 * kappa_sq_over_q_sq,
        phip: w2 + 2.0 * g2 * (qx2 + qy2 - b2 * qx2) * kappa_sq_over_q_sq,
    }
}
