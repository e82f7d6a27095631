//! `Exp*(q, p) = 2 int e^{-2i q' p/hbar} K(q + q', t; q - q', 0) dq'` and its
//! inverse `K(x_f, x_0) = (1/2 pi hbar) int e^{i (x_f - x_0) p/hbar} Exp*((x_f + x_0)/2, p) dp`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ClosedFamily, StarExponentialClosedForm};
use crate::error::{Error, Result};
use crate::numerics::fourier::fft;
use crate::numerics::fresnel::{fresnel_integral, GaussianExponent};
use crate::numerics::grid::PhaseGrid;
use crate::numerics::quadrature::{gauss_legendre, richardson_to_zero};
use crate::propagators::{circle_damping, circle_theta, gaussian_kernel, Family, GaussianKernel, PropagatorSpec};
use crate::weyl::{nondiag_symbol, SampledSymbol};

/// How the `q'` integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Closed-form Gaussian integral of the Gaussian propagator.
    Fresnel,
    /// Damped Riemann sums (an FFT for whole fields) at three damping levels,
    /// extrapolated to zero damping.
    Fft,
}

/// Relative damping at the first level of the FFT route.
const FFT_EPS0: f64 = 0.1;
const FFT_LEVELS: usize = 3;
/// `exp(-23)`: relative tail left outside the damped window.
const TAIL_EXPONENT: f64 = 23.0;
const MAX_FFT_POINTS: usize = 1 << 24;

/// Coefficients of the exponent in `q'` after substituting
/// `x_f = q + q'`, `x_0 = q - q'` and multiplying by `e^{-2iq'p/hbar}`.
fn qprime_exponent(k: &GaussianKernel, q: f64, p: f64, hbar: f64) -> GaussianExponent {
    let a = k.a - k.b + k.c;
    let b = 2.0 * (k.a - k.c) * q + k.d - k.e - 2.0 * p / hbar;
    let c = (k.a + k.b + k.c) * q * q + (k.d + k.e) * q + k.f;
    GaussianExponent::new(a, b, c)
}

fn caustic(e: Error) -> Error {
    match e {
        Error::DegenerateQuadratic => Error::CausticSingularity("the q' integral loses its quadratic term".into()),
        other => other,
    }
}

/// Circle: the propagator at complex time integrated over `q'` in
/// `[-pi/2, pi/2]`, i.e. angle differences in one period.
fn circle_star_exp(inertia: f64, hbar: f64, n_max: usize, p: f64, t: Complex64) -> Result<Complex64> {
    let nodes = 4 * (n_max + (p.abs() / hbar).ceil() as usize) + 64;
    let (xs, ws) = gauss_legendre(nodes);
    let h = PI / 2.0;
    let mut s = Complex64::new(0.0, 0.0);
    for (x, w) in xs.iter().zip(&ws) {
        let qp = h * x;
        s += circle_theta(inertia, hbar, qp, t, -qp)? * Complex64::from_polar(*w, -2.0 * qp * p / hbar);
    }
    Ok(2.0 * h * s)
}

/// Star exponential from the propagator at a real time. Circle propagators
/// are evaluated at the damped time `t - i eta` of
/// [`crate::propagators::circle_damping`] by Gauss-Legendre quadrature over
/// one period, whatever the route.
pub fn star_exp_from_propagator(spec: &PropagatorSpec, q: f64, p: f64, t: f64, route: Route) -> Result<Complex64> {
    if t == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if let Family::Circle { inertia, n_max } = spec.family {
        let tc = Complex64::new(t, -circle_damping(inertia, n_max, spec.hbar));
        return circle_star_exp(inertia, spec.hbar, n_max, p, tc);
    }
    let k = gaussian_kernel(spec, t.into())?;
    match route {
        Route::Fresnel => {
            let g = qprime_exponent(&k, q, p, spec.hbar);
            Ok(2.0 * k.pref * fresnel_integral(&g).map_err(caustic)?)
        }
        Route::Fft => fft_point(&k, q, p, spec.hbar),
    }
}

/// Fresnel route at a complex time with `Im t <= 0` (circle: theta-form
/// quadrature at that time).
pub fn star_exp_from_propagator_complex(spec: &PropagatorSpec, q: f64, p: f64, t: Complex64) -> Result<Complex64> {
    if t.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if let Family::Circle { inertia, n_max } = spec.family {
        return circle_star_exp(inertia, spec.hbar, n_max, p, t);
    }
    let k = gaussian_kernel(spec, t)?;
    let g = qprime_exponent(&k, q, p, spec.hbar);
    Ok(2.0 * k.pref * fresnel_integral(&g).map_err(caustic)?)
}

/// Damping, half-window and step for one level of the FFT route.
struct Level {
    delta: f64,
    half: f64,
    step: f64,
}

fn levels(a: Complex64, b_max: f64) -> Result<Vec<Level>> {
    let am = a.norm();
    if am == 0.0 {
        return Err(Error::CausticSingularity("the q' integral loses its quadratic term".into()));
    }
    let beta = (b_max * b_max / (4.0 * am)).max(1.0);
    let delta0 = FFT_EPS0 * am / beta;
    (0..FFT_LEVELS)
        .map(|j| {
            let delta = delta0 / (1 << j) as f64;
            let half = (TAIL_EXPONENT / delta).sqrt();
            let step = PI / (1.5 * (2.0 * am * half + b_max));
            if 2.0 * half / step > MAX_FFT_POINTS as f64 {
                return Err(Error::WindowTooSmall { tail: (-delta * half * half).exp() });
            }
            Ok(Level { delta, half, step })
        })
        .collect()
}

fn fft_point(k: &GaussianKernel, q: f64, p: f64, hbar: f64) -> Result<Complex64> {
    let g = qprime_exponent(k, q, p, hbar);
    let lv = levels(g.a, g.b.norm())?;
    let mut ys = Vec::with_capacity(lv.len());
    for l in &lv {
        let m = (l.half / l.step).ceil() as i64;
        let mut s = Complex64::new(0.0, 0.0);
        for j in -m..=m {
            let qp = j as f64 * l.step;
            s += k.eval(q + qp, q - qp) * Complex64::from_polar((-l.delta * qp * qp).exp(), -2.0 * qp * p / hbar);
        }
        ys.push(2.0 * s * l.step);
    }
    let xs: Vec<f64> = lv.iter().map(|l| l.delta).collect();
    Ok(richardson_to_zero(&xs, &ys))
}

/// Star exponential sampled on a grid. The FFT route does one transform per
/// row `q` for all momenta.
pub fn star_exp_field(spec: &PropagatorSpec, grid: PhaseGrid, t: f64, route: Route) -> Result<SampledSymbol> {
    let n = grid.n();
    let (xs, ps) = (grid.xs(), grid.ps());
    let mut out = DMatrix::zeros(n, n);
    let is_gaussian = !matches!(spec.family, Family::Circle { .. });
    if route == Route::Fresnel || !is_gaussian || t == 0.0 {
        for i in 0..n {
            for l in 0..n {
                out[(i, l)] = star_exp_from_propagator(spec, xs[i], ps[l], t, route)?;
            }
        }
        return SampledSymbol::new(grid, out, "star_exp");
    }
    let hb = spec.hbar;
    let k = gaussian_kernel(spec, t.into())?;
    let dp = grid.dp();
    for i in 0..n {
        let q = xs[i];
        let g0 = qprime_exponent(&k, q, 0.0, hb);
        let b_max = g0.b.norm() + 2.0 * grid.p_max() / hb;
        let lv = levels(g0.a, b_max)?;
        let mut ys: Vec<Vec<Complex64>> = Vec::with_capacity(lv.len());
        for l in &lv {
            // q'_k = k h with 2 h dp / hbar = 2 pi j / M, window M h >= 2 * half
            let span = PI * hb / dp;
            let j = (2.0 * l.half / span).ceil().max(1.0) as usize;
            let mut m = 1usize;
            while (j as f64 * span) / (m as f64) > l.step {
                m <<= 1;
            }
            if m > MAX_FFT_POINTS {
                return Err(Error::WindowTooSmall { tail: (-l.delta * l.half * l.half).exp() });
            }
            let h = j as f64 * span / m as f64;
            let mi = m as i64;
            let mut buf: Vec<Complex64> = (0..mi)
                .map(|r| {
                    let kk = if r < mi / 2 { r } else { r - mi };
                    let qp = kk as f64 * h;
                    k.eval(q + qp, q - qp) * (-l.delta * qp * qp).exp()
                })
                .collect();
            fft(&mut buf);
            let row = (0..n)
                .map(|lidx| {
                    let r = (j as i64 * (lidx as i64 - (n / 2) as i64)).rem_euclid(mi) as usize;
                    2.0 * h * buf[r]
                })
                .collect();
            ys.push(row);
        }
        let xs_d: Vec<f64> = lv.iter().map(|l| l.delta).collect();
        for lidx in 0..n {
            let col: Vec<Complex64> = ys.iter().map(|r| r[lidx]).collect();
            out[(i, lidx)] = richardson_to_zero(&xs_d, &col);
        }
    }
    SampledSymbol::new(grid, out, "star_exp")
}

/// Propagator rebuilt from a closed-form star exponential, pairing it with
/// the nondiagonal Wigner function of `(x_0, x_f)`. Gaussian families reduce
/// to a Fresnel integral in `p`; the circle's `p` integral of each sinc is the
/// indicator of `|x_f - x_0| < pi`.
pub fn propagator_from_star_exp(cf: &StarExponentialClosedForm, xf: f64, t: Complex64, x0: f64) -> Result<Complex64> {
    let hb = cf.hbar;
    if t.norm() == 0.0 {
        return Err(Error::ZeroTime);
    }
    let rho = nondiag_symbol(x0, xf, hb);
    let q = rho.center();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (pref, g) = match cf.family {
        ClosedFamily::Free { m } => (one, GaussianExponent::new(-t / (2.0 * m * hb), zero, zero)),
        ClosedFamily::HarmonicOscillator { m, omega } => {
            let half = 0.5 * omega * t;
            let tan = half.tan();
            let k = 2.0 / (hb * omega);
            let pref = one / half.cos();
            let g = GaussianExponent::new(-k * tan / (2.0 * m), zero, -k * tan * 0.5 * m * omega * omega * q * q);
            (pref, g)
        }
        ClosedFamily::Linear => (one, GaussianExponent::new(-t / hb, zero, -t * (q + t * t / 12.0) / hb)),
        ClosedFamily::Circle { inertia, n_max } => {
            return Ok(crate::propagators::circle_dual_sum(inertia, hb, n_max, xf, t, x0));
        }
    };
    rho.pair_gaussian(pref, &g).map_err(caustic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagators::{propagate, propagate_complex};
    use rand::{Rng, SeedableRng};

    #[test]
    fn free_fresnel_exact() {
        let spec = PropagatorSpec::free(1.0, 1.0).unwrap();
        let cf = StarExponentialClosedForm::free(1.0, 1.0).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let (q, p, t) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-2.0..2.0));
            let a = star_exp_from_propagator(&spec, q, p, t, Route::Fresnel).unwrap();
            let b = cf.eval(q, p, t.into()).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn fft_route_close() {
        let spec = PropagatorSpec::free(1.0, 1.0).unwrap();
        let cf = StarExponentialClosedForm::free(1.0, 1.0).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let mut worst = 0.0f64;
        for _ in 0..40 {
            let (q, p, t) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(0.1..2.0));
            let a = star_exp_from_propagator(&spec, q, p, t, Route::Fft).unwrap();
            worst = worst.max((a - cf.eval(q, p, t.into()).unwrap()).norm());
        }
        assert!(worst < 1e-3, "{worst}");
    }

    #[test]
    fn ho_and_linear_fresnel() {
        let ho = PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap();
        let lin = PropagatorSpec::linear(1.0).unwrap();
        let cho = StarExponentialClosedForm::harmonic(1.0, 1.0, 1.0).unwrap();
        let clin = StarExponentialClosedForm::linear(1.0).unwrap();
        for &t in &[0.5, 1.0, 2.0, 4.0, -1.3] {
            for &(q, p) in &[(0.0, 0.0), (1.2, -0.4), (-2.0, 2.5)] {
                let a = star_exp_from_propagator(&ho, q, p, t, Route::Fresnel).unwrap();
                let b = cho.eval(q, p, t.into()).unwrap();
                assert!((a - b).norm() < 1e-10 * b.norm(), "{t} {q} {p}");
                let a = star_exp_from_propagator(&lin, q, p, t, Route::Fresnel).unwrap();
                let b = clin.eval(q, p, t.into()).unwrap();
                assert!((a - b).norm() < 1e-10, "{t} {q} {p}");
            }
        }
    }

    #[test]
    fn circle_transform_matches_sinc_sum() {
        let spec = PropagatorSpec::circle(1.0, 12, 1.0).unwrap();
        let cf = StarExponentialClosedForm::circle(1.0, 12, 1.0).unwrap();
        let eta = circle_damping(1.0, 12, 1.0);
        for &p in &[0.0, 0.37, 2.0, -5.5] {
            let a = star_exp_from_propagator(&spec, 0.0, p, 0.9, Route::Fresnel).unwrap();
            let b = cf.eval(0.0, p, Complex64::new(0.9, -eta)).unwrap();
            assert!((a - b).norm() < 1e-10, "{p} {}", (a - b).norm());
        }
    }

    #[test]
    fn round_trip_propagators() {
        let hb = 1.0;
        for (spec, cf) in [
            (PropagatorSpec::free(1.0, hb).unwrap(), StarExponentialClosedForm::free(1.0, hb).unwrap()),
            (PropagatorSpec::harmonic(1.0, 1.0, hb).unwrap(), StarExponentialClosedForm::harmonic(1.0, 1.0, hb).unwrap()),
            (PropagatorSpec::linear(hb).unwrap(), StarExponentialClosedForm::linear(hb).unwrap()),
        ] {
            for &t in &[0.4, PI / 2.0, 2.5] {
                let a = propagator_from_star_exp(&cf, 0.7, t.into(), -0.4).unwrap();
                let b = propagate(&spec, 0.7, t, -0.4).unwrap();
                assert!((a - b).norm() < 1e-8 * b.norm(), "{:?} {t}", spec.family);
            }
        }
        let circ = StarExponentialClosedForm::circle(1.0, 20, 1.0).unwrap();
        let t = Complex64::new(0.8, -circle_damping(1.0, 20, 1.0));
        let a = propagator_from_star_exp(&circ, 2.5, t, 0.3).unwrap();
        let b = propagate_complex(&PropagatorSpec::circle(1.0, 20, 1.0).unwrap(), 2.5, t, 0.3).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn field_routes_agree() {
        let spec = PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap();
        let grid = PhaseGrid::centered(4.0, 32, 1.0).unwrap();
        let a = star_exp_field(&spec, grid, 1.0, Route::Fresnel).unwrap();
        let b = star_exp_field(&spec, grid, 1.0, Route::Fft).unwrap();
        assert!(a.interior_diff(&b).unwrap() < 1e-3, "{}", a.interior_diff(&b).unwrap());
    }
}
