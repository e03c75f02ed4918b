//! Cross-formulation harness.
//!
//! Every formulation is integrated separately and the integrated values are
//! divided. The expected ratios are constants per sector, so no fitting is
//! involved.

use std::f64::consts::PI;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ForceError, Result};
use crate::integrands::{Formulation, ScenarioParams};
use crate::quadrature::{
    integrate_evanescent, integrate_freespace, integrate_prop_surface, integrate_vp_stress,
    ForceResult, ForceSector, QuadratureSpec,
};
use crate::response::{DrudeModel, LorentzOscillator};

/// Relative deviation accepted between a measured and an expected ratio.
pub const RATIO_TOLERANCE: f64 = 1e-5;

/// Integrates formulation `f` in `sector`.
///
/// Pairs without a printed formula (VP per particle outside the evanescent
/// sector, anything but VP for the stress) are rejected.
pub fn force(
    f: Formulation,
    sector: ForceSector,
    p: &ScenarioParams,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    match sector {
        ForceSector::Evanescent => integrate_evanescent(f, p, spec),
        ForceSector::PropSurface => integrate_prop_surface(f, p, spec),
        ForceSector::FreeSpace => integrate_freespace(f, p, spec),
        ForceSector::VpStress => {
            if f != Formulation::Vp {
                return Err(ForceError::Unsupported(format!(
                    "the propagating stress is only printed for vp, not {f}"
                )));
            }
            integrate_vp_stress(p, spec)
        }
    }
}

/// Factor by which formulation `f` exceeds PH in `sector`, if one is claimed.
fn factor_over_ph(f: Formulation, sector: ForceSector, gamma: f64) -> Option<f64> {
    match (f, sector) {
        (_, ForceSector::VpStress) => None,
        (Formulation::Ph, _) => Some(1.0),
        (Formulation::Vp, ForceSector::Evanescent) => Some(-4.0 * PI * gamma),
        (Formulation::Vp, _) => None,
        (Formulation::DkFolded | Formulation::DkQuadrant, ForceSector::Evanescent) => {
            Some(4.0 * PI)
        }
        (Formulation::DkFolded | Formulation::DkQuadrant, ForceSector::PropSurface) => {
            Some(4.0 * PI)
        }
        (Formulation::DkFolded, ForceSector::FreeSpace) => Some(4.0 * PI),
        (Formulation::DkQuadrant, ForceSector::FreeSpace) => None,
    }
}

/// Expected value of `force_a / force_b` in `sector` at velocity factor `gamma`.
pub fn expected_ratio(
    a: Formulation,
    b: Formulation,
    sector: ForceSector,
    gamma: f64,
) -> Result<f64> {
    match (factor_over_ph(a, sector, gamma), factor_over_ph(b, sector, gamma)) {
        (Some(fa), Some(fb)) => Ok(fa / fb),
        _ => Err(ForceError::Unsupported(format!(
            "no conversion factor between {a} and {b} is claimed in sector {sector}"
        ))),
    }
}

/// The ratios certified by [`prefactor_suite`], in reporting order.
pub const SUITE_PAIRS: [(Formulation, Formulation, ForceSector); 5] = [
    (Formulation::Vp, Formulation::Ph, ForceSector::Evanescent),
    (Formulation::DkFolded, Formulation::Vp, ForceSector::Evanescent),
    (Formulation::DkFolded, Formulation::Ph, ForceSector::Evanescent),
    (Formulation::DkFolded, Formulation::Ph, ForceSector::PropSurface),
    (Formulation::DkFolded, Formulation::Ph, ForceSector::FreeSpace),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioReport {
    pub pair: (Formulation, Formulation),
    pub sector: ForceSector,
    #[serde(skip)]
    pub scenario: ScenarioParams,
    pub numerator: ForceResult,
    pub denominator: ForceResult,
    pub measured_ratio: f64,
    pub expected_ratio: f64,
    pub rel_deviation: f64,
    pub pass: bool,
}

impl RatioReport {
    fn from_forces(
        a: ForceResult,
        b: ForceResult,
        p: &ScenarioParams,
        spec: &QuadratureSpec,
    ) -> Result<Self> {
        let expected = expected_ratio(a.formulation, b.formulation, a.sector, p.kin.gamma())?;
        if !(b.value.abs() > spec.abs_floor) {
            return Err(ForceError::Indeterminate {
                denominator: b.value,
                floor: spec.abs_floor,
            });
        }
        let measured = a.value / b.value;
        let rel_deviation = ((measured - expected) / expected).abs();
        Ok(Self {
            pair: (a.formulation, b.formulation),
            sector: a.sector,
            scenario: *p,
            numerator: a,
            denominator: b,
            measured_ratio: measured,
            expected_ratio: expected,
            rel_deviation,
            // Both forces are only ever constructed from converged integrals.
            pass: rel_deviation <= RATIO_TOLERANCE,
        })
    }
}

/// Compares two already integrated forces of the same sector.
pub fn ratio_from_forces(
    a: ForceResult,
    b: ForceResult,
    p: &ScenarioParams,
    spec: &QuadratureSpec,
) -> Result<RatioReport> {
    RatioReport::from_forces(a, b, p, spec)
}

/// Integrates `a` and `b` in `sector` and compares their ratio with the
/// claimed conversion factor.
pub fn ratio_check(
    a: Formulation,
    b: Formulation,
    sector: ForceSector,
    p: &ScenarioParams,
    spec: &QuadratureSpec,
) -> Result<RatioReport> {
    expected_ratio(a, b, sector, p.kin.gamma())?;
    let fa = force(a, sector, p, spec)?;
    let fb = force(b, sector, p, spec)?;
    RatioReport::from_forces(fa, fb, p, spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    Pass,
    Fail,
    /// The denominator vanished, as it does in equilibrium.
    Indeterminate,
    /// One of the integrals did not converge or could not be evaluated.
    Error,
}

/// One ratio of the suite, for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub scenario_index: usize,
    pub pair: (Formulation, Formulation),
    pub sector: ForceSector,
    pub outcome: std::result::Result<RatioReport, ForceError>,
}

impl SuiteEntry {
    pub fn status(&self) -> EntryStatus {
        match &self.outcome {
            Ok(r) if r.pass => EntryStatus::Pass,
            Ok(_) => EntryStatus::Fail,
            Err(ForceError::Indeterminate { .. }) => EntryStatus::Indeterminate,
            Err(_) => EntryStatus::Error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Every entry was indeterminate, so nothing was tested.
    NoInformation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn count(&self, status: EntryStatus) -> usize {
        self.entries.iter().filter(|e| e.status() == status).count()
    }

    pub fn verdict(&self) -> Verdict {
        let failing = self.count(EntryStatus::Fail) + self.count(EntryStatus::Error);
        if failing > 0 {
            Verdict::Fail
        } else if self.count(EntryStatus::Pass) == 0 {
            Verdict::NoInformation
        } else {
            Verdict::Pass
        }
    }

    /// Largest relative deviation over the entries that produced a ratio.
    pub fn max_deviation(&self) -> f64 {
        self.entries
            .iter()
            .filter_map(|e| e.outcome.as_ref().ok())
            .map(|r| r.rel_deviation)
            .fold(0.0, f64::max)
    }
}

/// All forces the suite needs for one scenario, integrated once each.
fn scenario_entries(
    index: usize,
    p: &ScenarioParams,
    spec: &QuadratureSpec,
) -> Vec<SuiteEntry> {
    let mut needed: Vec<(Formulation, ForceSector)> = Vec::new();
    for (a, b, s) in SUITE_PAIRS {
        for key in [(a, s), (b, s)] {
            if !needed.contains(&key) {
                needed.push(key);
            }
        }
    }
    let forces: Vec<Result<ForceResult>> =
        needed.iter().map(|&(f, s)| force(f, s, p, spec)).collect();
    let lookup = |f, s| {
        let i = needed.iter().position(|&k| k == (f, s)).expect("force was scheduled");
        forces[i].clone()
    };
    SUITE_PAIRS
        .iter()
        .map(|&(a, b, sector)| {
            let outcome = lookup(a, sector).and_then(|fa| {
                lookup(b, sector).and_then(|fb| RatioReport::from_forces(fa, fb, p, spec))
            });
            SuiteEntry {
                scenario_index: index,
                pair: (a, b),
                sector,
                outcome,
            }
        })
        .collect()
}

/// Evaluates every pair of [`SUITE_PAIRS`] on every scenario of `grid`.
///
/// Member failures are recorded per entry and never abort the suite. The
/// entries are ordered by scenario, then by pair, whatever the scheduling.
pub fn prefactor_suite(grid: &[ScenarioParams], spec: &QuadratureSpec) -> Result<SuiteReport> {
    if grid.is_empty() {
        return Err(ForceError::Domain("the scenario grid is empty".into()));
    }
    spec.validate()?;
    #[cfg(feature = "parallel")]
    let per_scenario: Vec<Vec<SuiteEntry>> = if spec.parallel {
        grid.par_iter()
            .enumerate()
            .map(|(i, p)| scenario_entries(i, p, spec))
            .collect()
    } else {
        grid.iter().enumerate().map(|(i, p)| scenario_entries(i, p, spec)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_scenario: Vec<Vec<SuiteEntry>> =
        grid.iter().enumerate().map(|(i, p)| scenario_entries(i, p, spec)).collect();
    Ok(SuiteReport {
        entries: per_scenario.into_iter().flatten().collect(),
    })
}

/// Half-space used by the default grid.
pub fn default_surface() -> DrudeModel {
    DrudeModel::new(1.0, 0.1).expect("valid Drude parameters")
}

/// Particle used by the default grid.
pub fn default_particle() -> LorentzOscillator {
    LorentzOscillator::new(1.0, 1.0, 0.1).expect("valid Lorentz parameters")
}

/// The 27-point verification grid: three velocities, three distances and
/// three temperature pairs, ordered with the velocity varying slowest.
pub fn default_grid() -> Vec<ScenarioParams> {
    let mut grid = Vec::with_capacity(27);
    for beta in [0.1, 0.5, 0.9] {
        for z in [0.5, 1.0, 2.0] {
            for (t1, t2) in [(0.5, 0.2), (0.5, 0.5), (0.0, 0.0)] {
                grid.push(
                    ScenarioParams::new(beta, z, t1, t2, default_surface(), default_particle())
                        .expect("grid points are in range"),
                );
            }
        }
    }
    grid
}
