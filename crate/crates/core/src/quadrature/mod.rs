//! Integration of each sector's integrand over its printed domain.
//!
//! The lateral plane is parametrised by a vertical wave constant and the
//! polar angle `θ` of `q`:
//!
//! * evanescent: `(κ, θ)` with `q dq = κ dκ`, which cancels the `1/κ`;
//! * propagating: `(ψ, θ)` with `q = ω sin ψ`, `q_z = ω cos ψ`, so that
//!   `d²q / q_z = q dψ dθ` and the `1/q_z` cancels.
//!
//! Each 3-D integral is an adaptive Gauss-Kronrod rule nested three deep
//! (`ω` outermost, `θ` innermost). Panel boundaries are seeded where the
//! Doppler-shifted frequency crosses zero or the particle resonance, and at
//! the tangency points where those lines enter the lateral circle.
//!
//! A first loose pass fixes the magnitude of the result; the second pass
//! runs with absolute tolerances distributed over the nesting levels.

mod gk;
pub mod oracle;
mod panels;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{domain, ForceError, Result};
use crate::integrands::{
    freespace_unchecked, EvanescentSlice, Formulation, PropagatingSlice, ScenarioParams,
};
use crate::physics::DopplerBranch;
use gk::{Limits, Outcome, Sample, Tol};
use panels::{pieces, Peak, Piece};

pub use oracle::{oracle_convergence, riemann_oracle, OracleConvergence};

/// Which force (or stress) integral is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ForceSector {
    #[serde(rename = "ev")]
    Evanescent,
    #[serde(rename = "prop-surface")]
    PropSurface,
    #[serde(rename = "free-space")]
    FreeSpace,
    /// Propagating stress of the sliding-bodies approach; a force per area.
    #[serde(rename = "vp-stress")]
    VpStress,
}

impl ForceSector {
    pub const ALL: [ForceSector; 4] = [
        ForceSector::Evanescent,
        ForceSector::PropSurface,
        ForceSector::FreeSpace,
        ForceSector::VpStress,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ForceSector::Evanescent => "ev",
            ForceSector::PropSurface => "prop-surface",
            ForceSector::FreeSpace => "free-space",
            ForceSector::VpStress => "vp-stress",
        }
    }
}

impl std::fmt::Display for ForceSector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for ForceSector {
    type Err = ForceError;

    fn from_str(s: &str) -> Result<Self> {
        ForceSector::ALL
            .into_iter()
            .find(|x| x.label() == s)
            .ok_or_else(|| ForceError::Domain(format!("unknown sector '{s}'")))
    }
}

/// Tolerances, truncation and budget for one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_floor: f64,
    /// Total integrand evaluations allowed for one integral.
    pub max_evals: u64,
    /// `Λ`: the evanescent `κ` range is cut at `Λ/(2z)`.
    pub tail_exponent: f64,
    /// The frequency range is cut at this multiple of the largest material
    /// or thermal frequency, times `γ(1 + β)`.
    pub omega_cutoff_factor: f64,
    /// Evaluate outer panels on the rayon pool (needs the `parallel` feature).
    pub parallel: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_floor: 1e-14,
            max_evals: 20_000_000_000,
            tail_exponent: 40.0,
            omega_cutoff_factor: 30.0,
            parallel: true,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return domain(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol));
        }
        if !(self.abs_floor >= 0.0) {
            return domain(format!("abs_floor must be non-negative, got {}", self.abs_floor));
        }
        if self.max_evals == 0 {
            return domain("max_evals must be positive");
        }
        if !((-self.tail_exponent).exp() < self.rel_tol * 1e-3) {
            return domain(format!(
                "tail_exponent {} leaves a tail above rel_tol * 1e-3",
                self.tail_exponent
            ));
        }
        if !(self.omega_cutoff_factor > 0.0 && self.omega_cutoff_factor.is_finite()) {
            return domain("omega_cutoff_factor must be positive");
        }
        Ok(())
    }

    /// Upper end of the frequency range.
    pub fn omega_cutoff(&self, p: &ScenarioParams) -> f64 {
        let scale = p
            .thermal
            .t1()
            .max(p.thermal.t2())
            .max(p.particle.omega0())
            .max(p.surface.omega_p());
        self.omega_cutoff_factor * scale * p.kin.gamma() * (1.0 + p.kin.beta())
    }

    /// Upper end of the evanescent `κ` range.
    pub fn kappa_max(&self, p: &ScenarioParams) -> f64 {
        self.tail_exponent / (2.0 * p.kin.z())
    }
}

/// An integrated force, in natural units (force per area for the stress).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evals: u64,
    pub formulation: Formulation,
    pub sector: ForceSector,
}

/// Seeded panel boundaries for one integration variable.
fn finish_edges(mut e: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    e.retain(|x| x.is_finite() && *x > lo && *x < hi);
    e.push(lo);
    e.push(hi);
    e.sort_by(f64::total_cmp);
    e.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (hi - lo));
    e
}

/// `lo, lo + s, lo + 2s, lo + 4s, …` below `hi`.
fn geometric(s: f64, hi: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut x = s;
    while x < hi {
        v.push(x);
        x *= 2.0;
    }
    v
}

/// Doppler-shifted frequencies at which the lateral integrand changes
/// character: the anomalous-Doppler line `ω′ = 0` and the resonance `±ω₀`.
fn doppler_targets(p: &ScenarioParams) -> [f64; 3] {
    let w0 = p.particle.omega0();
    [0.0, w0, -w0]
}

fn branches(f: Formulation) -> &'static [DopplerBranch] {
    match f {
        Formulation::DkQuadrant => &[DopplerBranch::Minus, DopplerBranch::Plus],
        _ => &[DopplerBranch::Minus],
    }
}

/// Angular distance from `θ_r` over which `cos θ` moves by `δ`.
fn angular_width(theta_r: f64, delta: f64) -> f64 {
    let (sn, cs) = theta_r.sin_cos();
    let sn = sn.abs();
    2.0 * delta / (sn + (sn * sn + 2.0 * delta * cs.abs()).sqrt())
}

/// Panels in the polar angle on `[0, hi]`, split where a Doppler branch
/// hits one of the targets; the resonance crossings are mapped.
fn theta_pieces(p: &ScenarioParams, f: Formulation, omega: f64, q: f64, hi: f64) -> Vec<Piece> {
    let (beta, gamma) = (p.kin.beta(), p.kin.gamma());
    let mut e = Vec::with_capacity(16);
    let mut peaks = Vec::with_capacity(8);
    if hi > PI {
        e.push(PI);
    }
    if beta > 0.0 && q > 0.0 {
        // Half-width of the resonance, as a change of cos θ.
        let delta = 0.5 * p.particle.gamma_a() / (gamma * beta * q);
        for &b in branches(f) {
            for t in doppler_targets(p) {
                let c = match b {
                    DopplerBranch::Minus => (omega - t / gamma) / (beta * q),
                    DopplerBranch::Plus => (t / gamma - omega) / (beta * q),
                };
                if c.abs() < 1.0 {
                    let th = c.acos();
                    e.push(th);
                    e.push(TAU - th);
                    if t != 0.0 {
                        let width = angular_width(th, delta);
                        peaks.push(Peak { at: th, width });
                        peaks.push(Peak { at: TAU - th, width });
                    }
                }
            }
        }
    }
    pieces(&finish_edges(e, 0.0, hi), &peaks)
}

/// Lateral magnitudes at which a Doppler line becomes tangent to the
/// circle, with the width in `q` of the resonance (zero for the `ω′ = 0`
/// line, which is not a peak).
fn tangency_q(p: &ScenarioParams, omega: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let (beta, gamma) = (p.kin.beta(), p.kin.gamma());
    let width = 0.5 * p.particle.gamma_a() / (gamma * beta);
    doppler_targets(p)
        .into_iter()
        .filter(move |_| beta > 0.0)
        .map(move |t| {
            let w = if t == 0.0 { 0.0 } else { width };
            ((omega - t / gamma).abs() / beta, w)
        })
}

/// Angular range that is integrated and the factor that restores the full
/// circle. Every integrand is even in `q_y`, so the full-plane forms are
/// integrated over the upper half plane and doubled; the quadrant form is
/// integrated as printed.
fn theta_range(f: Formulation) -> (f64, f64) {
    if f == Formulation::DkQuadrant {
        (FRAC_PI_2, 1.0)
    } else {
        (PI, 2.0)
    }
}

/// `(2π)⁻³` of `dω d²q`, and `(2π)⁻¹` of `dω dx`.
const NORM_3D: f64 = 1.0 / (TAU * TAU * TAU);
const NORM_2D: f64 = 1.0 / TAU;

const INNER_LIMITS: Limits = Limits {
    max_panels: 400,
    max_evals: u64::MAX,
};

/// Tolerances for the three nesting levels; `None` asks for a quick
/// non-adaptive estimate.
#[derive(Debug, Clone, Copy)]
struct Plan {
    outer: Option<Tol>,
    middle: Option<Tol>,
    inner: Option<Tol>,
}

impl Plan {
    const PROBE: Plan = Plan {
        outer: None,
        middle: None,
        inner: None,
    };
}

fn outermost<F>(f: &F, pieces: &[Piece], tol: Option<Tol>, max_evals: u64, parallel: bool) -> Outcome
where
    F: Fn(f64) -> Sample + Sync,
{
    let limits = Limits {
        max_panels: 4000,
        max_evals,
    };
    match tol {
        Some(tol) => panels::integrate(f, pieces, tol, limits, parallel),
        None => {
            let s = panels::probe(f, pieces);
            Outcome {
                value: s.value,
                resabs: s.mass,
                evals: s.evals,
                converged: true,
                ..Outcome::default()
            }
        }
    }
}

trait Nested3: Sync {
    fn outer_pieces(&self) -> Vec<Piece>;
    fn middle_pieces(&self, x: f64) -> Vec<Piece>;
    /// Innermost integral at `(x, y)`, including all Jacobian factors.
    fn line(&self, x: f64, y: f64, tol: Option<Tol>) -> Sample;
}

fn run3<N: Nested3>(n: &N, plan: Plan, max_evals: u64, parallel: bool) -> Outcome {
    let outer = |x: f64| {
        let middle = |y: f64| n.line(x, y, plan.inner);
        panels::level(&middle, &n.middle_pieces(x), plan.middle, INNER_LIMITS, false)
    };
    outermost(&outer, &n.outer_pieces(), plan.outer, max_evals, parallel)
}

trait Nested2: Sync {
    fn outer_pieces(&self) -> Vec<Piece>;
    fn inner_pieces(&self, x: f64) -> Vec<Piece>;
    fn point(&self, x: f64, y: f64) -> f64;
}

fn run2<N: Nested2>(n: &N, plan: Plan, max_evals: u64, parallel: bool) -> Outcome {
    let outer = |x: f64| {
        let inner = |y: f64| Sample::exact(n.point(x, y));
        panels::level(&inner, &n.inner_pieces(x), plan.middle, INNER_LIMITS, false)
    };
    outermost(&outer, &n.outer_pieces(), plan.outer, max_evals, parallel)
}

/// A quick non-adaptive estimate, then adaptive passes whose tolerances
/// are scaled to the magnitude found so far.
///
/// Every inner integral is asked for an error below `η ∫|f|` over its own
/// range, so that the propagated inner error stays below `η` times the
/// total mass of `|f|`. Lines carrying little mass may instead meet an
/// absolute tolerance, spread uniformly over the `lengths` of the outer and
/// middle ranges. The outer level gets the rest of the budget. `norm` is
/// the measure normalisation applied to the returned value, so that the
/// absolute floor refers to the normalised result.
fn two_pass<R>(run: R, spec: &QuadratureSpec, norm: f64, lengths: (f64, f64)) -> Outcome
where
    R: Fn(Plan) -> Outcome,
{
    let first = run(Plan::PROBE);
    let floor = spec.abs_floor / norm;
    let bound = |o: &Outcome| spec.rel_tol * o.value.abs() + floor;
    let mut evals = first.evals;
    let mut target = bound(&first);
    let mut mass = first.resabs;
    let mut out = first;
    for _ in 0..3 {
        let eta = if mass > 0.0 { 0.25 * target / mass } else { 0.0 };
        let middle = 0.25 * target / lengths.0;
        out = run(Plan {
            outer: Some(Tol::absolute(0.8 * target)),
            middle: Some(Tol {
                abs: middle,
                rel: 0.0,
                rel_abs: eta,
            }),
            inner: Some(Tol {
                abs: middle / lengths.1,
                rel: 0.0,
                rel_abs: eta,
            }),
        });
        evals += out.evals;
        if out.error() <= bound(&out) || !out.converged {
            break;
        }
        target = 0.5 * bound(&out);
        mass = out.resabs;
    }
    out.evals = evals;
    out.converged = out.converged && out.error() <= bound(&out);
    out
}

fn finish(
    parts: &[Outcome],
    norm: f64,
    f: Formulation,
    sector: ForceSector,
) -> Result<ForceResult> {
    let value = norm * parts.iter().map(|o| o.value).sum::<f64>();
    let error = norm * parts.iter().map(|o| o.error()).sum::<f64>();
    let evals = parts.iter().map(|o| o.evals).sum();
    if parts.iter().all(|o| o.converged) {
        Ok(ForceResult {
            value,
            error_estimate: error,
            evals,
            formulation: f,
            sector,
        })
    } else {
        Err(ForceError::Nonconverged {
            value,
            error,
            evals,
        })
    }
}

/// Initial frequency panels: a geometric ladder from the smallest material
/// or thermal scale, plus the surface-plasmon and resonance frequencies,
/// both mapped as peaks.
fn omega_pieces(p: &ScenarioParams, wc: f64) -> Vec<Piece> {
    let wsp = p.surface.omega_p() / 2f64.sqrt();
    let w0 = p.particle.omega0();
    let mut scales = vec![wsp, w0];
    scales.extend([p.thermal.t1(), p.thermal.t2()].into_iter().filter(|t| *t > 0.0));
    let base = scales.iter().copied().fold(f64::INFINITY, f64::min) / 8.0;
    let mut e = geometric(base, wc);
    e.extend([wsp, w0, w0 / p.kin.gamma()]);
    let peaks = [
        Peak {
            at: wsp,
            width: 0.5 * p.surface.gamma_d(),
        },
        Peak {
            at: w0,
            width: 0.5 * p.particle.gamma_a(),
        },
    ];
    pieces(&finish_edges(e, 0.0, wc), &peaks)
}

struct Evanescent<'a> {
    p: &'a ScenarioParams,
    f: Formulation,
    sign: f64,
    wc: f64,
    kmax: f64,
}

impl Nested3 for Evanescent<'_> {
    fn outer_pieces(&self) -> Vec<Piece> {
        omega_pieces(self.p, self.wc)
    }

    fn middle_pieces(&self, w: f64) -> Vec<Piece> {
        let omega = self.sign * w;
        let mut e = geometric(0.25 / self.p.kin.z(), self.kmax);
        let mut peaks = Vec::new();
        for (q, width) in tangency_q(self.p, omega).filter(|(q, _)| *q > w) {
            let kappa = ((q - w) * (q + w)).sqrt();
            e.push(kappa);
            if width > 0.0 {
                let width = (width * q / kappa).min(q);
                peaks.push(Peak { at: kappa, width });
            }
        }
        pieces(&finish_edges(e, 0.0, self.kmax), &peaks)
    }

    fn line(&self, w: f64, kappa: f64, tol: Option<Tol>) -> Sample {
        let omega = self.sign * w;
        let slice = EvanescentSlice::new(self.p, omega, kappa);
        let (hi, fold) = theta_range(self.f);
        let ps = theta_pieces(self.p, self.f, omega, slice.q(), hi);
        let g = |th: f64| Sample::exact(slice.reduced(self.f, th));
        panels::level(&g, &ps, tol, INNER_LIMITS, false).scaled(fold)
    }
}

/// Evanescent contribution `f_x^{part,ev}` of formulation `f`.
///
/// PH is integrated over the full frequency axis as printed (both halves
/// separately); VP and DK over `ω > 0`.
pub fn integrate_evanescent(
    f: Formulation,
    p: &ScenarioParams,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    spec.validate()?;
    let wc = spec.omega_cutoff(p);
    let kmax = spec.kappa_max(p);
    let signs: &[f64] = if f == Formulation::Ph { &[1.0, -1.0] } else { &[1.0] };
    let parts: Vec<Outcome> = signs
        .iter()
        .map(|&sign| {
            let n = Evanescent {
                p,
                f,
                sign,
                wc,
                kmax,
            };
            let run = |plan| run3(&n, plan, spec.max_evals, spec.parallel);
            two_pass(run, spec, NORM_3D, (wc, kmax))
        })
        .collect();
    finish(&parts, NORM_3D, f, ForceSector::Evanescent)
}

/// Propagating-sector lateral integral; `stress` selects the stress
/// integrand instead of the surface force.
struct Propagating<'a> {
    p: &'a ScenarioParams,
    f: Formulation,
    wc: f64,
    stress: bool,
}

impl Nested3 for Propagating<'_> {
    fn outer_pieces(&self) -> Vec<Piece> {
        omega_pieces(self.p, self.wc)
    }

    fn middle_pieces(&self, w: f64) -> Vec<Piece> {
        // Equal steps in q_z, one per half period of cos(2 q_z z).
        let n = ((2.0 * w * self.p.kin.z() / PI).ceil() as usize).max(1);
        let mut e: Vec<f64> = (1..n).map(|k| (1.0 - k as f64 / n as f64).acos()).collect();
        let mut peaks = Vec::new();
        for (q, width) in tangency_q(self.p, w).filter(|(q, _)| *q < w) {
            let psi = (q / w).asin();
            e.push(psi);
            if width > 0.0 {
                let width = (width / (w * psi.cos())).min(1.0);
                peaks.push(Peak { at: psi, width });
            }
        }
        pieces(&finish_edges(e, 0.0, FRAC_PI_2), &peaks)
    }

    fn line(&self, w: f64, psi: f64, tol: Option<Tol>) -> Sample {
        let (s, c) = psi.sin_cos();
        let (q, qz) = (w * s, w * c);
        let slice = PropagatingSlice::with_q(self.p, w, qz, q);
        let (hi, fold) = theta_range(self.f);
        let ps = theta_pieces(self.p, self.f, w, q, hi);
        let half = if self.stress {
            let g = |th: f64| Sample::exact(q * qz * slice.stress(th));
            panels::level(&g, &ps, tol, INNER_LIMITS, false)
        } else {
            let g = |th: f64| Sample::exact(q * slice.reduced(self.f, th));
            panels::level(&g, &ps, tol, INNER_LIMITS, false)
        };
        half.scaled(fold)
    }
}

/// Surface-dependent propagating contribution `f_x^{part,pr}|_surf`.
pub fn integrate_prop_surface(
    f: Formulation,
    p: &ScenarioParams,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    spec.validate()?;
    if f == Formulation::Vp {
        return Err(ForceError::Unsupported(
            "no per-particle propagating-surface force is printed for vp".into(),
        ));
    }
    let wc = spec.omega_cutoff(p);
    let n = Propagating {
        p,
        f,
        wc,
        stress: false,
    };
    let run = |plan| run3(&n, plan, spec.max_evals, spec.parallel);
    let out = two_pass(run, spec, NORM_3D, (wc, FRAC_PI_2));
    finish(&[out], NORM_3D, f, ForceSector::PropSurface)
}

/// Propagating stress `σ_xz^pr` of the sliding-bodies approach.
pub fn integrate_vp_stress(p: &ScenarioParams, spec: &QuadratureSpec) -> Result<ForceResult> {
    spec.validate()?;
    let wc = spec.omega_cutoff(p);
    let n = Propagating {
        p,
        f: Formulation::Vp,
        wc,
        stress: true,
    };
    let run = |plan| run3(&n, plan, spec.max_evals, spec.parallel);
    let out = two_pass(run, spec, NORM_3D, (wc, FRAC_PI_2));
    finish(&[out], NORM_3D, Formulation::Vp, ForceSector::VpStress)
}

struct FreeSpace<'a> {
    p: &'a ScenarioParams,
    f: Formulation,
    wc: f64,
}

impl Nested2 for FreeSpace<'_> {
    fn outer_pieces(&self) -> Vec<Piece> {
        omega_pieces(self.p, self.wc)
    }

    fn inner_pieces(&self, w: f64) -> Vec<Piece> {
        let (beta, gamma) = (self.p.kin.beta(), self.p.kin.gamma());
        let mut e = Vec::new();
        let mut peaks = Vec::new();
        if beta > 0.0 {
            let r = self.p.particle.omega0() / (gamma * w);
            // ω′ = γω(1 ∓ βx) = ω₀
            let x = (1.0 - r) / beta;
            let at = if self.f == Formulation::DkFolded { -x } else { x };
            e.push(at);
            let width = 0.5 * self.p.particle.gamma_a() / (gamma * w * beta);
            peaks.push(Peak { at, width });
        }
        pieces(&finish_edges(e, -1.0, 1.0), &peaks)
    }

    fn point(&self, w: f64, x: f64) -> f64 {
        freespace_unchecked(self.f, w, x, self.p)
    }
}

/// Free-space (blackbody) contribution `f_x^{part,pr}|_fs`.
pub fn integrate_freespace(
    f: Formulation,
    p: &ScenarioParams,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    spec.validate()?;
    if !matches!(f, Formulation::Ph | Formulation::DkFolded) {
        return Err(ForceError::Unsupported(format!(
            "no free-space force is printed for {f}"
        )));
    }
    let wc = spec.omega_cutoff(p);
    let n = FreeSpace { p, f, wc };
    let run = |plan| run2(&n, plan, spec.max_evals, spec.parallel);
    let out = two_pass(run, spec, NORM_2D, (wc, 2.0));
    finish(&[out], NORM_2D, f, ForceSector::FreeSpace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::{DrudeModel, LorentzOscillator};

    fn scenario(beta: f64, z: f64, t1: f64, t2: f64) -> ScenarioParams {
        ScenarioParams::new(
            beta,
            z,
            t1,
            t2,
            DrudeModel::new(1.0, 0.1).unwrap(),
            LorentzOscillator::new(1.0, 1.0, 0.1).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        let bad = QuadratureSpec {
            tail_exponent: 10.0,
            ..QuadratureSpec::default()
        };
        assert!(bad.validate().is_err());
        let bad = QuadratureSpec {
            rel_tol: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn theta_edges_hit_anomalous_doppler_line() {
        let p = scenario(0.5, 1.0, 0.0, 0.0);
        let (omega, q) = (0.4, 2.0);
        let ps = theta_pieces(&p, Formulation::Ph, omega, q, TAU);
        // The full circle is still supported by the panel builder.
        let e: Vec<f64> = ps.iter().map(|p| p.start()).chain([ps.last().unwrap().end()]).collect();
        let th = (omega / (0.5 * q)).acos();
        assert!(e.iter().any(|x| (x - th).abs() < 1e-15));
        assert!(e.iter().any(|x| (x - (TAU - th)).abs() < 1e-15));
        assert_eq!(e[0], 0.0);
        assert_eq!(*e.last().unwrap(), TAU);
        assert!(e.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn equilibrium_force_is_zero() {
        let p = scenario(0.0, 1.0, 0.5, 0.5);
        let spec = QuadratureSpec::default();
        let r = integrate_evanescent(Formulation::Ph, &p, &spec).unwrap();
        assert_eq!(r.value, 0.0);
        let r = integrate_freespace(Formulation::Ph, &p, &spec).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn unsupported_combinations() {
        let p = scenario(0.5, 1.0, 0.5, 0.2);
        let spec = QuadratureSpec::default();
        assert!(matches!(
            integrate_prop_surface(Formulation::Vp, &p, &spec),
            Err(ForceError::Unsupported(_))
        ));
        assert!(matches!(
            integrate_freespace(Formulation::DkQuadrant, &p, &spec),
            Err(ForceError::Unsupported(_))
        ));
    }

    #[test]
    fn tiny_budget_reports_nonconvergence() {
        let p = scenario(0.5, 1.0, 0.5, 0.2);
        let spec = QuadratureSpec {
            max_evals: 10_000,
            ..QuadratureSpec::default()
        };
        let r = integrate_freespace(Formulation::Ph, &p, &spec);
        assert!(matches!(r, Err(ForceError::Nonconverged { .. })), "{r:?}");
    }
}
