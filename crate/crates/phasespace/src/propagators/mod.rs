//! Quantum propagators `K(x_f, t; x_0, 0)`.
//!
//! Closed forms for the free particle, the harmonic oscillator, the linear
//! potential `H = p^2 + q` and the particle on a circle; Gelfand-Yaglom and
//! time-sliced propagators for general quadratic Lagrangians
//! `L = m qdot^2/2 - c(t) q^2/2 + f(t) q`; truncated eigenfunction sums.
//!
//! Gaussian propagators are represented by [`GaussianKernel`]. Complex times
//! with `Im t <= 0` are accepted wherever the closed form continues
//! analytically; this is how every oscillatory integral downstream is damped.

pub(crate) mod circle;
mod quadratic;
mod spectral;

pub use circle::{circle_damping, circle_dual_sum, circle_theta};
pub use quadratic::{gelfand_yaglom, time_sliced, time_sliced_interval, GelfandYaglom};
pub use spectral::{hermite_functions, spectral_form};

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default RK4 step count for Gelfand-Yaglom evaluations.
pub const DEFAULT_GY_STEPS: usize = 4096;

/// Half-width of the window around `omega t = k pi` where the oscillator
/// propagator is refused.
pub const CAUSTIC_WINDOW: f64 = 1e-6;

/// A time-dependent coefficient of a quadratic Lagrangian.
pub type Coefficient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `L = m qdot^2 / 2 - c(t) q^2 / 2 + f(t) q`.
#[derive(Clone)]
pub struct QuadraticModel {
    pub m: f64,
    pub c: Coefficient,
    pub f: Coefficient,
}

impl fmt::Debug for QuadraticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticModel {{ m: {}, c(0): {}, f(0): {} }}", self.m, (self.c)(0.0), (self.f)(0.0))
    }
}

impl QuadraticModel {
    pub fn new(
        m: f64,
        c: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass {m} must be positive")));
        }
        Ok(Self { m, c: Arc::new(c), f: Arc::new(f) })
    }

    pub fn free(m: f64) -> Result<Self> {
        Self::new(m, |_| 0.0, |_| 0.0)
    }

    /// `c = m omega^2`, no force.
    pub fn harmonic(m: f64, omega: f64) -> Result<Self> {
        let k = m * omega * omega;
        Self::new(m, move |_| k, |_| 0.0)
    }

    /// `H = p^2 + q`, i.e. `m = 1/2`, unit force towards negative `q`.
    pub fn linear() -> Self {
        Self::new(0.5, |_| 0.0, |_| -1.0).expect("valid constants")
    }
}

#[derive(Debug, Clone)]
pub enum Family {
    Free { m: f64 },
    HarmonicOscillator { m: f64, omega: f64 },
    /// `H = p^2 + q`.
    LinearPotential,
    Quadratic(QuadraticModel),
    /// Particle on a circle with moment of inertia `inertia`; `n_max` bounds
    /// the angular-momentum sums.
    Circle { inertia: f64, n_max: usize },
    Sliced { model: QuadraticModel, slices: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Free { .. } => "free",
            Family::HarmonicOscillator { .. } => "ho",
            Family::LinearPotential => "linear",
            Family::Quadratic(_) => "quadratic",
            Family::Circle { .. } => "circle",
            Family::Sliced { .. } => "sliced",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PropagatorSpec {
    pub family: Family,
    pub hbar: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be positive")))
    }
}

impl PropagatorSpec {
    pub fn new(family: Family, hbar: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        match &family {
            Family::Free { m } => positive("m", *m)?,
            Family::HarmonicOscillator { m, omega } => {
                positive("m", *m)?;
                positive("omega", *omega)?;
            }
            Family::LinearPotential => {}
            Family::Quadratic(model) => positive("m", model.m)?,
            Family::Circle { inertia, n_max } => {
                positive("inertia", *inertia)?;
                if *n_max < 1 {
                    return Err(Error::InvalidParameter("n_max must be at least 1".into()));
                }
            }
            Family::Sliced { model, slices } => {
                positive("m", model.m)?;
                if *slices < 2 {
                    return Err(Error::InvalidParameter("at least 2 slices are needed".into()));
                }
            }
        }
        Ok(Self { family, hbar })
    }

    pub fn free(m: f64, hbar: f64) -> Result<Self> {
        Self::new(Family::Free { m }, hbar)
    }

    pub fn harmonic(m: f64, omega: f64, hbar: f64) -> Result<Self> {
        Self::new(Family::HarmonicOscillator { m, omega }, hbar)
    }

    pub fn linear(hbar: f64) -> Result<Self> {
        Self::new(Family::LinearPotential, hbar)
    }

    pub fn circle(inertia: f64, n_max: usize, hbar: f64) -> Result<Self> {
        Self::new(Family::Circle { inertia, n_max }, hbar)
    }
}

/// `pref * exp(i (A xf^2 + B xf x0 + C x0^2 + D xf + E x0 + F))`, with the
/// action already divided by `hbar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKernel {
    pub pref: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
    pub f: Complex64,
}

impl GaussianKernel {
    pub fn eval(&self, xf: f64, x0: f64) -> Complex64 {
        let s = self.a * xf * xf + self.b * xf * x0 + self.c * x0 * x0 + self.d * xf + self.e * x0 + self.f;
        self.pref * (Complex64::i() * s).exp()
    }

    /// Kernel of "`earlier` then `self`": `int self(x, y) earlier(y, x0) dy`.
    pub fn compose(&self, earlier: &GaussianKernel) -> Result<GaussianKernel> {
        let q = earlier.a + self.c;
        let scale = earlier.a.norm().max(self.c.norm());
        if q.norm() <= 1e-13 * scale {
            return Err(Error::CausticCrossing { slice: 0 });
        }
        let lin = earlier.d + self.e;
        let four_q = 4.0 * q;
        Ok(GaussianKernel {
            pref: self.pref * earlier.pref * (Complex64::new(0.0, PI) / q).sqrt(),
            a: self.a - self.b * self.b / four_q,
            b: -self.b * earlier.b / (2.0 * q),
            c: earlier.c - earlier.b * earlier.b / four_q,
            d: self.d - self.b * lin / (2.0 * q),
            e: earlier.e - earlier.b * lin / (2.0 * q),
            f: self.f + earlier.f - lin * lin / four_q,
        })
    }

    /// Largest difference between exponent coefficients, each relative to
    /// `max(1, |reference|)`, and the relative prefactor difference.
    pub fn max_rel_diff(&self, other: &GaussianKernel) -> f64 {
        let pairs = [
            (self.a, other.a),
            (self.b, other.b),
            (self.c, other.c),
            (self.d, other.d),
            (self.e, other.e),
            (self.f, other.f),
        ];
        let coeff = pairs.iter().map(|(x, y)| (x - y).norm() / y.norm().max(1.0)).fold(0.0, f64::max);
        coeff.max((self.pref - other.pref).norm() / other.pref.norm())
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `sqrt(m / (2 pi i hbar t))` on the branch continuous from `t > 0`
/// through the lower half-plane.
fn free_prefactor(m: f64, hbar: f64, t: Complex64) -> Complex64 {
    (m / (2.0 * PI * hbar * Complex64::i() * t)).sqrt()
}

fn free_kernel(m: f64, hbar: f64, t: Complex64) -> GaussianKernel {
    let a = m / (2.0 * hbar * t);
    GaussianKernel { pref: free_prefactor(m, hbar, t), a, b: -2.0 * a, c: a, d: zero(), e: zero(), f: zero() }
}

fn linear_kernel(hbar: f64, t: Complex64) -> GaussianKernel {
    let a = 1.0 / (4.0 * hbar * t);
    let d = -t / (2.0 * hbar);
    GaussianKernel {
        pref: free_prefactor(0.5, hbar, t),
        a,
        b: -2.0 * a,
        c: a,
        d,
        e: d,
        f: -t * t * t / (12.0 * hbar),
    }
}

/// Oscillator prefactor `sqrt(m omega / 2 pi i hbar sin(omega t))` with the
/// Maslov phase. Writing `omega t = w + nu pi` with `nu` the nearest integer,
/// `i sin w` stays in the right half-plane for `Im t <= 0`, so
/// `e^{-i pi nu/2} sqrt(m omega / 2 pi i hbar sin w)` with the principal root is
/// analytic there and reduces to `e^{-i pi/4 - i pi floor(omega t/pi)/2} / sqrt|sin|`
/// on the real axis.
fn ho_prefactor(m: f64, omega: f64, hbar: f64, t: Complex64) -> Complex64 {
    let wt = omega * t;
    let nu = (wt.re / PI).round();
    let w = wt - nu * PI;
    let root = (m * omega / (2.0 * PI * hbar * Complex64::i() * w.sin())).sqrt();
    root * Complex64::from_polar(1.0, -PI * nu / 2.0)
}

fn ho_kernel(m: f64, omega: f64, hbar: f64, t: Complex64) -> Result<GaussianKernel> {
    let wt = omega * t;
    let k = (wt.re / PI).round();
    if (wt - k * PI).norm() < CAUSTIC_WINDOW {
        return Err(Error::CausticSingularity(format!("omega t = {} is a multiple of pi", wt.re)));
    }
    let (s, c) = (wt.sin(), wt.cos());
    let a = m * omega * c / (2.0 * hbar * s);
    Ok(GaussianKernel {
        pref: ho_prefactor(m, omega, hbar, t),
        a,
        b: -m * omega / (hbar * s),
        c: a,
        d: zero(),
        e: zero(),
        f: zero(),
    })
}

fn check_time(t: Complex64) -> Result<()> {
    if t.norm() == 0.0 {
        return Err(Error::ZeroTime);
    }
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(Error::NonFinite("time"));
    }
    if t.im > 0.0 {
        return Err(Error::InvalidParameter(format!("Im t = {} must not be positive", t.im)));
    }
    Ok(())
}

fn real_time(t: Complex64, what: &str) -> Result<f64> {
    if t.im != 0.0 {
        return Err(Error::InvalidParameter(format!("{what} needs a real time")));
    }
    Ok(t.re)
}

/// Gaussian form of the propagator; every family except the circle.
pub fn gaussian_kernel(spec: &PropagatorSpec, t: Complex64) -> Result<GaussianKernel> {
    check_time(t)?;
    let hb = spec.hbar;
    match &spec.family {
        Family::Free { m } => Ok(free_kernel(*m, hb, t)),
        Family::HarmonicOscillator { m, omega } => ho_kernel(*m, *omega, hb, t),
        Family::LinearPotential => Ok(linear_kernel(hb, t)),
        Family::Quadratic(model) => {
            Ok(gelfand_yaglom(model, real_time(t, "the Gelfand-Yaglom propagator")?, DEFAULT_GY_STEPS, hb)?.kernel)
        }
        Family::Sliced { model, slices } => {
            time_sliced(model, real_time(t, "the time-sliced propagator")?, *slices, hb)
        }
        Family::Circle { .. } => Err(Error::UnsupportedFamily("the circle propagator is not Gaussian".into())),
    }
}

/// `K(x_f, t; x_0, 0)` at a real time. The circle propagator is returned at
/// the damped time `t - i eta` of [`circle_damping`], after checking the
/// theta form against the dual sum.
pub fn propagate(spec: &PropagatorSpec, xf: f64, t: f64, x0: f64) -> Result<Complex64> {
    if let Family::Circle { inertia, n_max } = spec.family {
        check_time(t.into())?;
        let tc = Complex64::new(t, -circle_damping(inertia, n_max, spec.hbar));
        let theta = circle_theta(inertia, spec.hbar, xf, tc, x0)?;
        let dual = circle_dual_sum(inertia, spec.hbar, n_max, xf, tc, x0);
        if (theta - dual).norm() > 1e-10 * theta.norm().max(1.0) {
            return Err(Error::NonConvergent(format!(
                "theta form and dual sum differ by {:e}",
                (theta - dual).norm()
            )));
        }
        return Ok(theta);
    }
    propagate_complex(spec, xf, t.into(), x0)
}

/// `K(x_f, t; x_0, 0)` at a complex time with `Im t <= 0`.
pub fn propagate_complex(spec: &PropagatorSpec, xf: f64, t: Complex64, x0: f64) -> Result<Complex64> {
    match spec.family {
        Family::Circle { inertia, .. } => {
            check_time(t)?;
            circle_theta(inertia, spec.hbar, xf, t, x0)
        }
        _ => Ok(gaussian_kernel(spec, t)?.eval(xf, x0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::integrate_gl;

    fn c(v: f64) -> Complex64 {
        v.into()
    }

    #[test]
    fn free_example() {
        let s = PropagatorSpec::free(1.0, 1.0).unwrap();
        let k = propagate(&s, 0.4, 1.0, 0.4).unwrap();
        let expect = (1.0 / (2.0 * PI * Complex64::i())).sqrt();
        assert!((k - expect).norm() < 1e-15);
        assert!((k.norm_sqr() - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let s = PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap();
        assert_eq!(propagate(&s, 0.0, 0.0, 0.0), Err(Error::ZeroTime));
        assert!(matches!(propagate(&s, 0.0, PI, 0.0), Err(Error::CausticSingularity(_))));
        assert!(matches!(propagate(&s, 0.0, PI + 5e-7, 0.0), Err(Error::CausticSingularity(_))));
        assert!(propagate(&s, 0.0, PI + 1e-5, 0.0).is_ok());
        assert!(PropagatorSpec::free(-1.0, 1.0).is_err());
        assert!(PropagatorSpec::circle(1.0, 0, 1.0).is_err());
        assert!(PropagatorSpec::harmonic(1.0, 1.0, 0.0).is_err());
        let circ = PropagatorSpec::circle(1.0, 10, 1.0).unwrap();
        assert!(matches!(gaussian_kernel(&circ, c(1.0)), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn ho_small_omega_is_free() {
        let free = PropagatorSpec::free(1.3, 0.8).unwrap();
        let d: Vec<f64> = [1e-2, 5e-3]
            .iter()
            .map(|&w| {
                let ho = PropagatorSpec::harmonic(1.3, w, 0.8).unwrap();
                (propagate(&ho, 0.7, 1.1, -0.2).unwrap() - propagate(&free, 0.7, 1.1, -0.2).unwrap()).norm()
            })
            .collect();
        assert!(d[0] < 1e-4);
        assert!((d[0] / d[1] - 4.0).abs() < 0.01);
    }

    #[test]
    fn ho_maslov_phase_continuous() {
        // |K| is smooth and the phase of the prefactor jumps by -pi/2 across
        // each caustic, matching the limit from Im t < 0.
        let s = PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap();
        for k in 1..4 {
            let tc = k as f64 * PI;
            let before = gaussian_kernel(&s, c(tc - 1e-3)).unwrap().pref;
            let after = gaussian_kernel(&s, c(tc + 1e-3)).unwrap().pref;
            let ratio = after / before;
            assert!((ratio.arg() + PI / 2.0).abs() < 1e-5, "{k} {}", ratio.arg());
            // damped times pass smoothly through the caustic
            let d1 = gaussian_kernel(&s, Complex64::new(tc - 1e-3, -0.05)).unwrap().pref;
            let d2 = gaussian_kernel(&s, Complex64::new(tc + 1e-3, -0.05)).unwrap().pref;
            let d0 = gaussian_kernel(&s, Complex64::new(tc, -0.05)).unwrap().pref;
            assert!((0.5 * (d1 + d2) - d0).norm() < 1e-3 * d0.norm());
        }
    }

    #[test]
    fn negative_time_is_conjugate() {
        for s in [
            PropagatorSpec::harmonic(1.0, 1.3, 0.7).unwrap(),
            PropagatorSpec::free(2.0, 0.7).unwrap(),
            PropagatorSpec::linear(0.7).unwrap(),
        ] {
            for t in [0.4, 2.9, 4.0] {
                let a = propagate(&s, 0.3, t, -0.6).unwrap();
                let b = propagate(&s, -0.6, -t, 0.3).unwrap();
                assert!((a - b.conj()).norm() < 1e-12);
            }
        }
    }

    fn chapman(s: &PropagatorSpec, t1: Complex64, t2: Complex64) -> f64 {
        let (xf, x0) = (0.4, -0.3);
        let direct = propagate_complex(s, xf, t1 + t2, x0).unwrap();
        let via = integrate_gl(
            |y| propagate_complex(s, xf, t2, y).unwrap() * propagate_complex(s, y, t1, x0).unwrap(),
            -14.0,
            14.0,
            400,
        );
        (direct - via).norm() / direct.norm()
    }

    #[test]
    fn semigroup_damped() {
        let t1 = Complex64::new(0.7, -0.3);
        let t2 = Complex64::new(0.4, -0.2);
        for s in [
            PropagatorSpec::free(1.0, 1.0).unwrap(),
            PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap(),
            PropagatorSpec::linear(1.0).unwrap(),
        ] {
            assert!(chapman(&s, t1, t2) < 1e-8, "{:?}", s.family);
        }
    }

    #[test]
    fn semigroup_via_kernel_composition() {
        let s = PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap();
        for (t1, t2) in [(0.8, 1.1), (2.0, 2.5), (1.2, 3.0)] {
            let k1 = gaussian_kernel(&s, c(t1)).unwrap();
            let k2 = gaussian_kernel(&s, c(t2)).unwrap();
            let k = k2.compose(&k1).unwrap();
            assert!(k.max_rel_diff(&gaussian_kernel(&s, c(t1 + t2)).unwrap()) < 1e-12);
        }
        let l = PropagatorSpec::linear(1.0).unwrap();
        let k = gaussian_kernel(&l, c(0.6)).unwrap().compose(&gaussian_kernel(&l, c(0.9)).unwrap()).unwrap();
        assert!(k.max_rel_diff(&gaussian_kernel(&l, c(1.5)).unwrap()) < 1e-12);
    }

    #[test]
    fn initial_condition() {
        // int K(x, t, y) phi(y) dy -> phi(x) as t -> 0 with damping
        let s = PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap();
        let phi = |y: f64| (-(y - 0.3).powi(2)).exp();
        let mut last = f64::INFINITY;
        for t in [0.2, 0.1, 0.05, 0.025] {
            let tc = Complex64::new(t, -t * 0.5);
            let v = integrate_gl(|y| propagate_complex(&s, 0.1, tc, y).unwrap() * phi(y), -8.0, 8.0, 400);
            let err = (v - phi(0.1)).norm();
            assert!(err < last);
            last = err;
        }
        assert!(last < 0.05);
    }
}
