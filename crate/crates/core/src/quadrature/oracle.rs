//! Midpoint-rule reference values.
//!
//! This is deliberately simple and shares nothing with the adaptive engine
//! except the integrand slices and the truncated domain. It is used to
//! cross-check the adaptive results and to measure the observed
//! convergence order of the midpoint sum.

use std::f64::consts::{FRAC_PI_2, TAU};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{ForceSector, QuadratureSpec};
use crate::error::{domain, ForceError, Result};
use crate::integrands::{
    freespace_unchecked, EvanescentSlice, Formulation, PropagatingSlice, ScenarioParams,
};

fn midpoints(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = (f64, f64)> {
    let h = (hi - lo) / n as f64;
    (0..n).map(move |i| (lo + (i as f64 + 0.5) * h, h))
}

/// Sums `row(i)` for `i in 0..n` in index order, in parallel when enabled.
fn ordered_sum<R: Fn(usize) -> f64 + Sync>(n: usize, parallel: bool, row: R) -> f64 {
    #[cfg(feature = "parallel")]
    let rows: Vec<f64> = if parallel {
        (0..n).into_par_iter().map(&row).collect()
    } else {
        (0..n).map(&row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<f64> = {
        let _ = parallel;
        (0..n).map(&row).collect()
    };
    rows.iter().sum()
}

/// Midpoint sum with `grid_n` points per dimension over the truncated domain.
///
/// PH (evanescent sector) is summed over the symmetric range `(−ω_c, ω_c)`.
pub fn riemann_oracle(
    sector: ForceSector,
    f: Formulation,
    p: &ScenarioParams,
    spec: &QuadratureSpec,
    grid_n: usize,
) -> Result<f64> {
    if grid_n < 32 {
        return domain(format!("oracle grid needs at least 32 points, got {grid_n}"));
    }
    spec.validate()?;
    let n = grid_n;
    let wc = spec.omega_cutoff(p);
    let theta_hi = if f == Formulation::DkQuadrant { FRAC_PI_2 } else { TAU };
    let ht = theta_hi / n as f64;
    let thetas: Vec<f64> = midpoints(0.0, theta_hi, n).map(|(t, _)| t).collect();
    let cube = TAU.powi(-3);
    match sector {
        ForceSector::Evanescent => {
            let wlo = if f == Formulation::Ph { -wc } else { 0.0 };
            let kmax = spec.kappa_max(p);
            let omegas: Vec<(f64, f64)> = midpoints(wlo, wc, n).collect();
            let sum = ordered_sum(n, spec.parallel, |i| {
                let (w, hw) = omegas[i];
                let mut acc = 0.0;
                for (k, hk) in midpoints(0.0, kmax, n) {
                    let s = EvanescentSlice::new(p, w, k);
                    let line: f64 = thetas.iter().map(|&t| s.reduced(f, t)).sum();
                    acc += hk * ht * line;
                }
                hw * acc
            });
            Ok(cube * sum)
        }
        ForceSector::PropSurface | ForceSector::VpStress => {
            let stress = sector == ForceSector::VpStress;
            if stress != (f == Formulation::Vp) {
                return Err(ForceError::Unsupported(format!(
                    "no {sector} integral is printed for {f}"
                )));
            }
            let omegas: Vec<(f64, f64)> = midpoints(0.0, wc, n).collect();
            let sum = ordered_sum(n, spec.parallel, |i| {
                let (w, hw) = omegas[i];
                let mut acc = 0.0;
                for (psi, hp) in midpoints(0.0, FRAC_PI_2, n) {
                    let (q, qz) = (w * psi.sin(), w * psi.cos());
                    let s = PropagatingSlice::with_q(p, w, qz, q);
                    let line: f64 = if stress {
                        thetas.iter().map(|&t| q * qz * s.stress(t)).sum()
                    } else {
                        thetas.iter().map(|&t| q * s.reduced(f, t)).sum()
                    };
                    acc += hp * ht * line;
                }
                hw * acc
            });
            Ok(cube * sum)
        }
        ForceSector::FreeSpace => {
            if !matches!(f, Formulation::Ph | Formulation::DkFolded) {
                return Err(ForceError::Unsupported(format!(
                    "no free-space force is printed for {f}"
                )));
            }
            let omegas: Vec<(f64, f64)> = midpoints(0.0, wc, n).collect();
            let sum = ordered_sum(n, spec.parallel, |i| {
                let (w, hw) = omegas[i];
                let row: f64 = midpoints(-1.0, 1.0, n)
                    .map(|(x, hx)| hx * freespace_unchecked(f, w, x, p))
                    .sum();
                hw * row
            });
            Ok(sum / TAU)
        }
    }
}

/// Midpoint sums on three successively doubled grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConvergence {
    pub coarse: f64,
    pub medium: f64,
    pub fine: f64,
}

impl OracleConvergence {
    /// `|R_fine − R_medium|`, used as the error of the fine sum.
    pub fn self_error(&self) -> f64 {
        (self.fine - self.medium).abs()
    }

    /// `log₂(|R_c − R_m| / |R_m − R_f|)`.
    pub fn observed_order(&self) -> f64 {
        ((self.coarse - self.medium).abs() / (self.medium - self.fine).abs()).log2()
    }
}

/// Oracle sums at `grid_n/4`, `grid_n/2` and `grid_n`.
pub fn oracle_convergence(
    sector: ForceSector,
    f: Formulation,
    p: &ScenarioParams,
    spec: &QuadratureSpec,
    grid_n: usize,
) -> Result<OracleConvergence> {
    if grid_n < 128 || grid_n % 4 != 0 {
        return domain(format!(
            "convergence study needs a multiple of 4 no smaller than 128, got {grid_n}"
        ));
    }
    Ok(OracleConvergence {
        coarse: riemann_oracle(sector, f, p, spec, grid_n / 4)?,
        medium: riemann_oracle(sector, f, p, spec, grid_n / 2)?,
        fine: riemann_oracle(sector, f, p, spec, grid_n)?,
    })
}
