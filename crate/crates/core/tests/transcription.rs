//! Point values of the integrands against an independent high-precision
//! transcription (`tools/transcription_oracle.py`).

use approx::assert_relative_eq;
use num_complex::Complex64;

use frictionkit::integrands::{
    ev_integrand, freespace_integrand, prop_surface_integrand, symmetry_residual,
    vp_stress_integrand, Formulation, ScenarioParams,
};
use frictionkit::physics::{
    medium_kappa1, polarization_weights, reflection_coeffs, transverse_constant, Kinematics,
    ModePoint,
};
use frictionkit::response::{DrudeModel, LorentzOscillator};

const TOL: f64 = 1e-12;

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
fn lorentz_factor_near_light_speed() {
    let k = Kinematics::new(0.99).unwrap();
    assert_relative_eq!(k.gamma(), 7.088812050083359, max_relative = 1e-15);
}

#[test]
fn fresnel_amplitudes() {
    let drude = DrudeModel::new(3.0, 0.3).unwrap();
    let eps = drude.eps(1.0).unwrap();
    let t = transverse_constant(0.0, 2.0);
    let k1 = medium_kappa1(1.0, t, eps);
    let r = reflection_coeffs(Complex64::new(2.0, 0.0), k1, eps).unwrap();
    assert_relative_eq!(r.rs.re, -0.27811960573816522, max_relative = TOL);
    assert_relative_eq!(r.rs.im, 0.046043358892326378, max_relative = TOL);
    assert_relative_eq!(r.rp.re, 1.5674249316639666, max_relative = TOL);
    assert_relative_eq!(r.rp.im, 0.17347518771676928, max_relative = TOL);
}

#[test]
fn negative_frequency_kappa1_is_conjugate() {
    let drude = DrudeModel::new(1.0, 0.1).unwrap();
    let t = transverse_constant(0.0, 1.0);
    let plus = medium_kappa1(1.0, t, drude.eps(1.0).unwrap());
    let minus = medium_kappa1(-1.0, t, drude.eps(-1.0).unwrap());
    assert_eq!(minus, plus.conj());
    assert!(plus.re >= 0.0);
}

#[test]
fn weights_at_a_propagating_point() {
    let kin = Kinematics::new(0.5).unwrap();
    let mode = ModePoint::new(1.0, 0.3, 0.4);
    let wp = kin.gamma() * (1.0 - 0.5 * 0.3);
    let w = polarization_weights(wp, 0.3, 0.4, mode.transverse, &kin).unwrap();
    assert_relative_eq!(w.phis, 0.64333333333333333, max_relative = TOL);
    assert_relative_eq!(w.phip, -0.85666666666666667, max_relative = TOL);
}

#[test]
fn evanescent_integrands() {
    let p = scenario(0.5, 0.5, 0.2);
    let mode = ModePoint::new(0.4, 0.7, 0.2);
    let cases = [
        (Formulation::Ph, -0.0010475291708486809),
        (Formulation::Vp, 0.030400123905634156),
        (Formulation::DkFolded, -0.026327279580473786),
        (Formulation::DkQuadrant, -8.6817858062277079),
    ];
    for (f, want) in cases {
        let got = ev_integrand(f, &mode, &p).unwrap();
        assert_relative_eq!(got, want, max_relative = TOL);
    }
    let reversed = ev_integrand(Formulation::Ph, &mode.reversed(), &p).unwrap();
    assert_relative_eq!(reversed, -0.0010475291708486809, max_relative = TOL);
    assert!(symmetry_residual(&mode, &p).unwrap() <= TOL * reversed.abs());
}

#[test]
fn propagating_integrands() {
    let p = scenario(0.5, 0.5, 0.2);
    let mode = ModePoint::new(1.2, 0.5, 0.3);
    let cases = [
        (Formulation::Ph, -0.039775583032189843),
        (Formulation::DkFolded, -0.49983471778471377),
        (Formulation::DkQuadrant, -0.96581371763985354),
    ];
    for (f, want) in cases {
        let got = prop_surface_integrand(f, &mode, &p).unwrap();
        assert_relative_eq!(got, want, max_relative = TOL);
    }
    assert_relative_eq!(
        vp_stress_integrand(&mode, &p).unwrap(),
        -0.082919294398579057,
        max_relative = TOL
    );
}

#[test]
fn freespace_integrands() {
    let p = scenario(0.5, 1.0, 0.0);
    assert_relative_eq!(
        freespace_integrand(Formulation::Ph, 0.8, 0.5, &p).unwrap(),
        0.0086979387318570329,
        max_relative = TOL
    );
    assert_relative_eq!(
        freespace_integrand(Formulation::DkFolded, 0.8, 0.5, &p).unwrap(),
        -1.1190393886849292,
        max_relative = TOL
    );
    assert_relative_eq!(
        freespace_integrand(Formulation::DkFolded, 0.8, -0.5, &p).unwrap(),
        0.10930152168550471,
        max_relative = TOL
    );
}
