//! Initial panels with an optional change of variable that flattens a
//! Lorentzian peak sitting at one panel end.
//!
//! Next to a peak of half-width `w` at `a`, the core `[a, a + 3w]` is
//! integrated in `u` with `x = a + w tan(u)`, so that `dx = w sec²u du`
//! cancels the Lorentzian exactly. The tail beyond it is cut into panels
//! growing geometrically away from the peak. All panels are laid end to
//! end on `s ∈ [0, n]`, one unit per panel, and integrated by a single
//! adaptive call so that the error budget is shared between them.

use super::gk::{adaptive, gauss10, Limits, Outcome, Sample, Tol};

/// A resonance location and its half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Peak {
    pub at: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Linear,
    /// `x = a + w tan(s U)`, `U = atan((b − a)/w)`.
    PeakAtStart { w: f64, u: f64 },
    /// `x = b − w tan((1 − s) U)`.
    PeakAtEnd { w: f64, u: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Piece {
    a: f64,
    b: f64,
    shape: Shape,
}

impl Piece {
    #[cfg(test)]
    pub fn start(&self) -> f64 {
        self.a
    }

    #[cfg(test)]
    pub fn end(&self) -> f64 {
        self.b
    }

    /// Point and Jacobian at the local coordinate `s ∈ [0, 1]`.
    #[inline]
    fn map(&self, s: f64) -> (f64, f64) {
        let (a, b) = (self.a, self.b);
        match self.shape {
            Shape::Linear => (a + (b - a) * s, b - a),
            Shape::PeakAtStart { w, u } => {
                let (sn, cs) = (s * u).sin_cos();
                (a + w * sn / cs, w * u / (cs * cs))
            }
            Shape::PeakAtEnd { w, u } => {
                let (sn, cs) = ((1.0 - s) * u).sin_cos();
                (b - w * sn / cs, w * u / (cs * cs))
            }
        }
    }
}

fn peak_at(peaks: &[Peak], x: f64, scale: f64) -> Option<f64> {
    peaks
        .iter()
        .find(|p| (p.at - x).abs() <= 1e-12 * scale)
        .map(|p| p.width)
}

/// Width of the mapped core, in units of the peak half-width.
const CORE: f64 = 3.0;
/// Growth factor of the tail panels.
const GRADE: f64 = 3.0;

/// Pieces covering `[a, b]` for a peak of half-width `w` at `a` (or at `b`
/// when `at_start` is false).
fn graded(a: f64, b: f64, w: f64, at_start: bool, out: &mut Vec<Piece>) {
    let len = b - a;
    let core = (CORE * w).min(len);
    let u = (core / w).atan();
    // Distances from the peak of the panel boundaries.
    let mut cuts = vec![core];
    let mut d = core;
    while d < len {
        d = if GRADE * d > len || len - GRADE * d < 0.5 * (GRADE - 1.0) * d {
            len
        } else {
            GRADE * d
        };
        cuts.push(d);
    }
    if at_start {
        out.push(Piece {
            a,
            b: a + core,
            shape: Shape::PeakAtStart { w, u },
        });
        for c in cuts.windows(2) {
            out.push(Piece {
                a: a + c[0],
                b: if c[1] == len { b } else { a + c[1] },
                shape: Shape::Linear,
            });
        }
    } else {
        for c in cuts.windows(2).rev() {
            out.push(Piece {
                a: if c[1] == len { a } else { b - c[1] },
                b: b - c[0],
                shape: Shape::Linear,
            });
        }
        out.push(Piece {
            a: b - core,
            b,
            shape: Shape::PeakAtEnd { w, u },
        });
    }
}

/// Builds pieces from sorted `edges`; every peak should be one of the
/// edges.
pub(crate) fn pieces(edges: &[f64], peaks: &[Peak]) -> Vec<Piece> {
    let scale = edges
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(edges.len() + 8);
    for e in edges.windows(2) {
        let (a, b) = (e[0], e[1]);
        if !(b > a) {
            continue;
        }
        match (peak_at(peaks, a, scale), peak_at(peaks, b, scale)) {
            (None, None) => out.push(Piece {
                a,
                b,
                shape: Shape::Linear,
            }),
            (Some(w), None) => graded(a, b, w, true, &mut out),
            (None, Some(w)) => graded(a, b, w, false, &mut out),
            (Some(wa), Some(wb)) => {
                let m = 0.5 * (a + b);
                graded(a, m, wa, true, &mut out);
                graded(m, b, wb, false, &mut out);
            }
        }
    }
    out
}

/// Quick estimate: one ten-point Gauss rule per piece, no refinement.
/// The error field is left at zero.
pub(crate) fn probe<F>(f: &F, pieces: &[Piece]) -> Sample
where
    F: Fn(f64) -> Sample,
{
    let mut out = Sample::default();
    for p in pieces {
        let g = |s: f64| {
            let (x, jac) = p.map(s);
            f(x).scaled(jac)
        };
        let r = gauss10(&g, 0.0, 1.0);
        out.value += r.value;
        out.mass += r.mass;
        out.evals += r.evals;
    }
    out
}

/// Adaptive integration to `tol`, or a [`probe`] when `tol` is `None`.
pub(crate) fn level<F>(f: &F, pieces: &[Piece], tol: Option<Tol>, limits: Limits, parallel: bool) -> Sample
where
    F: Fn(f64) -> Sample + Sync,
{
    match tol {
        Some(tol) => integrate(f, pieces, tol, limits, parallel).sample(),
        None => probe(f, pieces),
    }
}

/// Integrates `f` over the union of `pieces`.
pub(crate) fn integrate<F>(
    f: &F,
    pieces: &[Piece],
    tol: Tol,
    limits: Limits,
    parallel: bool,
) -> Outcome
where
    F: Fn(f64) -> Sample + Sync,
{
    let n = pieces.len();
    let g = |s: f64| {
        let k = (s.floor().max(0.0) as usize).min(n - 1);
        let (x, jac) = pieces[k].map(s - k as f64);
        f(x).scaled(jac)
    };
    let edges: Vec<f64> = (0..=n).map(|k| k as f64).collect();
    adaptive(&g, &edges, tol, limits, parallel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const LIMITS: Limits = Limits {
        max_panels: 200,
        max_evals: 1_000_000,
    };

    #[test]
    fn maps_cover_their_panels() {
        let ps = pieces(&[0.0, 1.0, 3.0], &[Peak { at: 1.0, width: 0.01 }]);
        assert!(ps.len() > 4);
        assert_eq!(ps[0].a, 0.0);
        assert_eq!(ps.last().unwrap().b, 3.0);
        for w in ps.windows(2) {
            assert_eq!(w[0].b, w[1].a);
        }
        for p in &ps {
            assert!(p.b > p.a);
            assert_relative_eq!(p.map(0.0).0, p.a, max_relative = 1e-14);
            assert_relative_eq!(p.map(1.0).0, p.b, max_relative = 1e-14);
        }
    }

    #[test]
    fn narrow_lorentzian_is_cheap() {
        let w = 1e-4;
        let f = |x: f64| Sample::exact(w / ((x - 0.3) * (x - 0.3) + w * w));
        let exact = (0.7 / w).atan() + (0.3 / w).atan();
        let tol = Tol {
            abs: 0.0,
            rel: 1e-12,
            rel_abs: 0.0,
        };
        let ps = pieces(&[0.0, 0.3, 1.0], &[Peak { at: 0.3, width: w }]);
        let mapped = integrate(&f, &ps, tol, LIMITS, false);
        let plain = adaptive(&f, &[0.0, 0.3, 1.0], tol, LIMITS, false);
        assert!(mapped.converged && plain.converged);
        assert_relative_eq!(mapped.value, exact, max_relative = 1e-12);
        assert!(mapped.evals * 3 < plain.evals, "{} vs {}", mapped.evals, plain.evals);
    }

    #[test]
    fn peaks_at_both_ends_split_the_panel() {
        let ps = pieces(
            &[0.0, 1.0],
            &[Peak { at: 0.0, width: 0.1 }, Peak { at: 1.0, width: 0.1 }],
        );
        let mid = ps.iter().position(|p| p.b == 0.5).unwrap();
        assert!(matches!(ps[0].shape, Shape::PeakAtStart { .. }));
        assert!(matches!(ps.last().unwrap().shape, Shape::PeakAtEnd { .. }));
        assert_eq!(ps[mid + 1].a, 0.5);
    }
}
