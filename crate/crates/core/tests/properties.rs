use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use frictionkit::integrands::{
    ev_integrand, freespace_integrand, mode_kappa, mode_reflection, prop_surface_integrand,
    symmetry_residual, Formulation, ScenarioParams,
};
use frictionkit::physics::{
    doppler, medium_kappa1, occupation, occupation_difference, polarization_weights,
    transverse_constant, DopplerBranch, ModePoint, Sector,
};
use frictionkit::response::{DrudeModel, LorentzOscillator};

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn scenario_strategy() -> impl Strategy<Value = ScenarioParams> {
    (
        0.0..0.95f64,
        0.2..3.0f64,
        0.0..2.0f64,
        0.0..2.0f64,
        0.3..3.0f64,
        0.02..1.0f64,
        0.5..2.0f64,
        0.3..3.0f64,
        0.02..0.5f64,
    )
        .prop_map(|(beta, z, t1, t2, wp, gd, a0, w0, ga)| {
            ScenarioParams::new(
                beta,
                z,
                t1,
                t2,
                DrudeModel::new(wp, gd).unwrap(),
                LorentzOscillator::new(a0, w0, ga).unwrap(),
            )
            .unwrap()
        })
}

/// Evanescent mode with `|q| > |ω|`, `ω ≠ 0`.
fn evanescent_strategy() -> impl Strategy<Value = ModePoint> {
    (0.01..4.0f64, prop::bool::ANY, 0.01..5.0f64, 0.0..std::f64::consts::TAU).prop_map(
        |(w, neg, dq, th)| {
            let omega = if neg { -w } else { w };
            let q = w + dq;
            ModePoint::new(omega, q * th.cos(), q * th.sin())
        },
    )
}

fn positive_evanescent_strategy() -> impl Strategy<Value = ModePoint> {
    evanescent_strategy().prop_map(|m| {
        if m.omega < 0.0 {
            m.reversed()
        } else {
            m
        }
    })
}

/// Propagating mode with `0 < q < ω`.
fn propagating_strategy() -> impl Strategy<Value = ModePoint> {
    (0.05..4.0f64, 0.02..0.98f64, 0.0..std::f64::consts::TAU).prop_map(|(w, s, th)| {
        let q = w * s;
        ModePoint::new(w, q * th.cos(), q * th.sin())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn im_commutes_with_real_decay(mode in evanescent_strategy(), p in scenario_strategy()) {
        let r = mode_reflection(&mode, &p);
        let kappa = mode.transverse.value;
        let f = (-2.0 * kappa * p.kin.z()).exp() / kappa;
        for rmu in [r.rs, r.rp] {
            let lhs = (rmu * Complex64::new((-2.0 * kappa * p.kin.z()).exp(), 0.0)
                / Complex64::new(kappa, 0.0))
            .im;
            prop_assert!(rel(lhs, f * rmu.im) <= 1e-15, "{lhs} vs {}", f * rmu.im);
        }
    }

    #[test]
    fn response_functions_are_real_in_time(w in 0.001..20.0f64, p in scenario_strategy()) {
        prop_assert_eq!(p.surface.eps(-w).unwrap(), p.surface.eps(w).unwrap().conj());
        prop_assert_eq!(p.particle.alpha(-w), p.particle.alpha(w).conj());
        prop_assert!(p.surface.eps(w).unwrap().im > 0.0);
        prop_assert!(p.particle.im_alpha(w) > 0.0);
        let t = transverse_constant(0.0, w + 0.5);
        let k_plus = medium_kappa1(w, t, p.surface.eps(w).unwrap());
        let k_minus = medium_kappa1(-w, t, p.surface.eps(-w).unwrap());
        prop_assert_eq!(k_minus, k_plus.conj());
        prop_assert!(k_plus.re >= 0.0);
    }

    #[test]
    fn odd_and_even_factors(mode in evanescent_strategy(), p in scenario_strategy()) {
        let rev = mode.reversed();
        let kin = &p.kin;
        prop_assert_eq!(rev.qx, -mode.qx);
        prop_assert_eq!(rev.transverse.value, mode.transverse.value);

        let wp = doppler(mode.omega, mode.qx, kin, DopplerBranch::Minus);
        let wp_rev = doppler(rev.omega, rev.qx, kin, DopplerBranch::Minus);
        prop_assert!(rel(wp_rev, -wp) <= 1e-15);

        let (t1, t2) = (p.thermal.t1(), p.thermal.t2());
        if wp != 0.0 {
            let d = occupation_difference(mode.omega, t1, wp, t2);
            let d_rev = occupation_difference(rev.omega, t1, wp_rev, t2);
            prop_assert!(rel(d_rev, -d) <= 1e-13, "{d} {d_rev}");
        }
        prop_assert!(rel(p.particle.im_alpha(wp_rev), -p.particle.im_alpha(wp)) <= 1e-15);

        let r = mode_reflection(&mode, &p);
        let r_rev = mode_reflection(&rev, &p);
        prop_assert!(rel(r_rev.rs.im, -r.rs.im) <= 1e-14);
        prop_assert!(rel(r_rev.rp.im, -r.rp.im) <= 1e-14);
        prop_assert_eq!(mode_kappa(&rev), mode_kappa(&mode));

        let w = polarization_weights(wp, mode.qx, mode.qy, mode.transverse, kin).unwrap();
        let w_rev = polarization_weights(wp_rev, rev.qx, rev.qy, rev.transverse, kin).unwrap();
        prop_assert!(rel(w.phis, w_rev.phis) <= 1e-14);
        prop_assert!(rel(w.phip, w_rev.phip) <= 1e-14);
        prop_assert!(w.phis >= 0.0 && w.phip >= 0.0);
    }

    #[test]
    fn ph_integrand_is_even(mode in evanescent_strategy(), p in scenario_strategy()) {
        let a = ev_integrand(Formulation::Ph, &mode, &p).unwrap();
        let res = symmetry_residual(&mode, &p).unwrap();
        prop_assert!(res <= 1e-12 * a.abs().max(1e-300), "{res} vs {a}");
    }

    #[test]
    fn occupation_reflection(w in 0.001..50.0f64, t in 0.01..10.0f64) {
        let n = occupation(w, t).unwrap();
        let m = occupation(-w, t).unwrap();
        prop_assert!((m + 1.0 + n).abs() <= 1e-13 * (1.0 + n.abs()));
    }

    #[test]
    fn transverse_constant_closes(w in -5.0..5.0f64, q in 0.0..8.0f64) {
        let t = transverse_constant(w, q);
        let v2 = t.value * t.value;
        match t.sector {
            Sector::Evanescent => prop_assert!(rel(v2 + w * w, q * q) <= 1e-14),
            Sector::Propagating => prop_assert!(rel(v2 + q * q, w * w) <= 1e-14),
        }
    }

    /// PH is printed over the whole frequency axis, so on `ω > 0` its folded
    /// integrand is twice the printed one.
    #[test]
    fn evanescent_ratios_pointwise(mode in positive_evanescent_strategy(), p in scenario_strategy()) {
        let ph = 2.0 * ev_integrand(Formulation::Ph, &mode, &p).unwrap();
        prop_assume!(ph != 0.0);
        let vp = ev_integrand(Formulation::Vp, &mode, &p).unwrap();
        let dk = ev_integrand(Formulation::DkFolded, &mode, &p).unwrap();
        let g = p.kin.gamma();
        prop_assert!(rel(vp / ph, -4.0 * PI * g) <= 1e-12);
        prop_assert!(rel(dk / ph, 4.0 * PI) <= 1e-12);
        prop_assert!(rel(dk / vp, -1.0 / g) <= 1e-12);
    }

    #[test]
    fn quadrant_form_is_the_fold(mode in positive_evanescent_strategy(), p in scenario_strategy()) {
        let (qx, qy) = (mode.qx.abs(), mode.qy.abs());
        let m = ModePoint::new(mode.omega, qx, qy);
        let quadrant = ev_integrand(Formulation::DkQuadrant, &m, &p).unwrap();
        let folded: f64 = [(qx, qy), (-qx, qy), (qx, -qy), (-qx, -qy)]
            .iter()
            .map(|&(x, y)| ev_integrand(Formulation::DkFolded, &ModePoint::new(mode.omega, x, y), &p).unwrap())
            .sum();
        let scale = ev_integrand(Formulation::DkFolded, &m, &p).unwrap().abs();
        prop_assert!((quadrant - folded).abs() <= 1e-12 * scale.max(quadrant.abs()).max(1e-300));
    }

    #[test]
    fn propagating_ratios_pointwise(mode in propagating_strategy(), p in scenario_strategy()) {
        let ph = prop_surface_integrand(Formulation::Ph, &mode, &p).unwrap();
        prop_assume!(ph != 0.0);
        let dk = prop_surface_integrand(Formulation::DkFolded, &mode, &p).unwrap();
        prop_assert!(rel(dk / ph, 4.0 * PI) <= 1e-12);
    }

    #[test]
    fn freespace_flip(w in 0.01..10.0f64, x in -1.0..=1.0f64, p in scenario_strategy()) {
        let dk = freespace_integrand(Formulation::DkFolded, w, x, &p).unwrap();
        let ph = freespace_integrand(Formulation::Ph, w, -x, &p).unwrap();
        prop_assert!(rel(dk, 4.0 * PI * ph) <= 1e-12, "{dk} vs {}", 4.0 * PI * ph);
    }

    #[test]
    fn equilibrium_integrands_vanish(mode in evanescent_strategy(), t in 0.0..2.0f64) {
        let p = ScenarioParams::new(
            0.0,
            1.0,
            t,
            t,
            DrudeModel::new(1.0, 0.1).unwrap(),
            LorentzOscillator::new(1.0, 1.0, 0.1).unwrap(),
        )
        .unwrap();
        prop_assert_eq!(ev_integrand(Formulation::Ph, &mode, &p).unwrap(), 0.0);
        prop_assert_eq!(symmetry_residual(&mode, &p).unwrap(), 0.0);
    }
}
