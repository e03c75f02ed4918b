//! Material response of the half-space and of the particle.

use num_complex::Complex64;

use crate::error::{domain, ForceError, Result};

/// Drude permittivity `ε₁(ω) = 1 − ω_p²/(ω(ω + iΓ))` of the half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeModel {
    omega_p: f64,
    gamma_d: f64,
}

impl DrudeModel {
    /// Both the plasma frequency and the damping must be positive: a
    /// lossless metal has a real surface-plasmon pole in `R_p`.
    pub fn new(omega_p: f64, gamma_d: f64) -> Result<Self> {
        if !(omega_p > 0.0 && omega_p.is_finite()) {
            return domain(format!("omega_p must be positive, got {omega_p}"));
        }
        if !(gamma_d > 0.0 && gamma_d.is_finite()) {
            return domain(format!(
                "gamma_d must be positive (lossless media are rejected), got {gamma_d}"
            ));
        }
        Ok(Self { omega_p, gamma_d })
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn gamma_d(&self) -> f64 {
        self.gamma_d
    }

    /// Permittivity at real `ω ≠ 0`, with `ε₁(−ω) = ε₁(ω)*`.
    pub fn eps(&self, omega: f64) -> Result<Complex64> {
        if omega == 0.0 {
            return Err(ForceError::Singular("Drude permittivity at omega = 0".into()));
        }
        Ok(self.eps_unchecked(omega))
    }

    #[inline]
    pub(crate) fn eps_unchecked(&self, omega: f64) -> Complex64 {
        let w = omega.abs();
        let e = 1.0 - self.omega_p * self.omega_p / (w * Complex64::new(w, self.gamma_d));
        if omega < 0.0 {
            e.conj()
        } else {
            e
        }
    }
}

/// Single-resonance polarizability
/// `α(ω) = α₀ω₀²/(ω₀² − ω² − iγ_a ω)` of the particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzOscillator {
    alpha0: f64,
    omega0: f64,
    gamma_a: f64,
}

impl LorentzOscillator {
    pub fn new(alpha0: f64, omega0: f64, gamma_a: f64) -> Result<Self> {
        for (name, v) in [("alpha0", alpha0), ("omega0", omega0), ("gamma_a", gamma_a)] {
            if !(v > 0.0 && v.is_finite()) {
                return domain(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(Self {
            alpha0,
            omega0,
            gamma_a,
        })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn gamma_a(&self) -> f64 {
        self.gamma_a
    }

    /// Polarizability at real `ω`, with `α(−ω) = α(ω)*`.
    pub fn alpha(&self, omega: f64) -> Complex64 {
        let w = omega.abs();
        let w02 = self.omega0 * self.omega0;
        let a = self.alpha0 * w02 / Complex64::new(w02 - w * w, -self.gamma_a * w);
        if omega < 0.0 {
            a.conj()
        } else {
            a
        }
    }

    /// `Im α(ω)`, odd in `ω`.
    #[inline]
    pub fn im_alpha(&self, omega: f64) -> f64 {
        let w = omega.abs();
        let w02 = self.omega0 * self.omega0;
        let d = w02 - w * w;
        let g = self.gamma_a * w;
        let im = self.alpha0 * w02 * g / (d * d + g * g);
        if omega < 0.0 {
            -im
        } else {
            im
        }
    }

    /// `d Im α/dω` at `ω = 0`.
    pub fn im_alpha_slope_at_zero(&self) -> f64 {
        self.alpha0 * self.gamma_a / (self.omega0 * self.omega0)
    }
}

/// Number density of the constituents of a diluted body, in its rest frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiluteParams {
    pub n2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiluteReport {
    /// `max |4π n₂ α(ω)|` over the grid.
    pub max_abs: f64,
    /// Grid frequency at which the maximum occurs.
    pub at_omega: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Checks `|4π n₂ α(ω)| ≤ threshold` on a frequency grid.
///
/// The force formulas never use `n₂`, so a failing report is advisory.
pub fn dilute_check<F>(
    alpha: F,
    params: DiluteParams,
    omega_grid: &[f64],
    threshold: f64,
) -> Result<DiluteReport>
where
    F: Fn(f64) -> Complex64,
{
    if omega_grid.is_empty() {
        return domain("dilute check needs a non-empty frequency grid");
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return domain(format!("threshold must lie in (0, 1), got {threshold}"));
    }
    if !(params.n2 >= 0.0) {
        return domain(format!("n2 must be non-negative, got {}", params.n2));
    }
    let scale = 4.0 * std::f64::consts::PI * params.n2;
    let (at_omega, max_abs) = omega_grid
        .iter()
        .map(|&w| (w, scale * alpha(w).norm()))
        .fold((omega_grid[0], 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(DiluteReport {
        max_abs,
        at_omega,
        threshold,
        pass: max_abs <= threshold,
    })
}

impl Default for DiluteParams {
    fn default() -> Self {
        Self { n2: 0.0 }
    }
}
