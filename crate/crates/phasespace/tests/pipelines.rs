use std::f64::consts::PI;

use phasespace::numerics::{Field1D, PhaseGrid};
use phasespace::propagators::{hermite_functions, propagate, PropagatorSpec};
use phasespace::star::{bopp_left, star_kernel, PolySymbol};
use phasespace::starexp::{ho_level, project_level, propagator_from_star_exp, star_exp_field, Route, StarExponentialClosedForm};
use phasespace::weyl::{kernel_from_symbol, wigner_from_wavefunction, SampledSymbol};
use phasespace::Complex64;

#[test]
fn eigenfunction_wigner_matches_projected_level() {
    let g = PhaseGrid::square(128, 1.0).unwrap();
    let cf = StarExponentialClosedForm::harmonic(1.0, 1.0, 1.0).unwrap();
    for n in 0..4 {
        let psi = Field1D::from_fn_x(g, |x| hermite_functions(n + 1, x, 1.0, 1.0, 1.0)[n].into());
        let w = wigner_from_wavefunction(&psi).unwrap();
        let level = project_level(&cf, n as i64, g).unwrap();
        let e = w.max_diff(level.rho()).unwrap();
        assert!(e < 1e-8, "{n} {e}");
    }
}

#[test]
fn projected_levels_are_orthogonal_projectors() {
    let g = PhaseGrid::square(64, 1.0).unwrap();
    let cf = StarExponentialClosedForm::harmonic(1.0, 1.0, 1.0).unwrap();
    let hb = g.hbar();
    for n in 0..3 {
        let rho = project_level(&cf, n, g).unwrap();
        let k = kernel_from_symbol(&rho.rho().scale((2.0 * PI * hb).into()));
        assert!((k.trace().re - 1.0).abs() < 1e-8);
        assert!((k.compose(&k).unwrap().matrix - &k.matrix).camax() < 1e-8);
    }
}

#[test]
fn star_exponential_solves_the_evolution_equation() {
    // i hbar d/dt Exp* = H * Exp*, at a damped time so the field decays
    let g = PhaseGrid::square(128, 1.0).unwrap();
    let cf = StarExponentialClosedForm::harmonic(1.0, 1.0, 1.0).unwrap();
    let t = Complex64::new(0.6, -0.4);
    let h = 1e-3;
    let at = |s: f64| cf.sample(g, t + s).unwrap();
    let d = at(-2.0 * h)
        .sub(&at(-h).scale(8.0.into()))
        .unwrap()
        .add(&at(h).scale(8.0.into()))
        .unwrap()
        .sub(&at(2.0 * h))
        .unwrap()
        .scale(Complex64::new(0.0, 1.0 / (12.0 * h)));
    let e = at(0.0);
    let ham = PolySymbol::harmonic(1.0, 1.0, 1.0);
    let scale = d.interior_max_abs();
    assert!(bopp_left(&ham, &e).unwrap().interior_diff(&d).unwrap() < 1e-4 * scale);
    let tapered = ham.sample_tapered(g, 0.8, 0.05);
    assert!(star_kernel(&tapered, &e).unwrap().interior_diff(&d).unwrap() < 1e-4 * scale);
}

#[test]
fn classical_limit_rate() {
    // f * g - fg = O(hbar)
    let defect = |hb: f64| {
        let g = PhaseGrid::centered(6.0, 256, hb).unwrap();
        let f = SampledSymbol::from_real_fn(g, "f", |x, p| (-(x - 0.3).powi(2) - p * p).exp());
        let k = SampledSymbol::from_real_fn(g, "g", |x, p| (-x * x - (p + 0.2).powi(2)).exp());
        star_kernel(&f, &k).unwrap().interior_diff(&f.mul(&k).unwrap()).unwrap()
    };
    let slope = (defect(0.1) / defect(0.05)).log2();
    assert!((slope - 1.0).abs() < 0.05, "{slope}");
}

#[test]
fn star_exponential_round_trip_through_propagator() {
    let spec = PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap();
    let g = PhaseGrid::centered(5.0, 32, 1.0).unwrap();
    let field = star_exp_field(&spec, g, 1.1, Route::Fresnel).unwrap();
    let cf = StarExponentialClosedForm::harmonic(1.0, 1.0, 1.0).unwrap();
    assert!(field.interior_diff(&cf.sample(g, 1.1.into()).unwrap()).unwrap() < 1e-10);
    for (xf, x0) in [(0.3, -0.2), (1.5, 0.7)] {
        let k = propagator_from_star_exp(&cf, xf, 1.1.into(), x0).unwrap();
        assert!((k - propagate(&spec, xf, 1.1, x0).unwrap()).norm() < 1e-8);
    }
}

#[test]
fn free_kernel_density() {
    let spec = PropagatorSpec::free(1.7, 0.8).unwrap();
    for t in [0.3, 1.0, 4.0] {
        let k = propagate(&spec, 0.4, t, -1.1).unwrap();
        assert!((k.norm_sqr() - 1.7 / (2.0 * PI * 0.8 * t)).abs() < 1e-12);
    }
}

#[test]
fn levels_follow_the_laguerre_form_at_other_hbar() {
    let hb = 0.5;
    let g = PhaseGrid::square(64, hb).unwrap();
    let cf = StarExponentialClosedForm::harmonic(2.0, 0.7, hb).unwrap();
    let level = project_level(&cf, 2, g).unwrap();
    let exact = SampledSymbol::from_real_fn(g, "", |q, p| ho_level(2, q, p, 2.0, 0.7, hb).unwrap());
    assert!(level.rho().max_diff(&exact).unwrap() < 1e-10);
    assert!((level.energy() - 2.5 * 0.7 * hb).abs() < 1e-15);
}
