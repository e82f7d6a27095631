use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative size of `Im(a)` below which `a` is treated as real.
pub const REAL_AXIS_TOL: f64 = 1e-12;

/// The exponent `i (a y^2 + b y + c)` of a one-dimensional Gaussian integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianExponent {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl GaussianExponent {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Self { a, b, c }
    }

    pub fn real(a: f64, b: f64, c: f64) -> Self {
        Self::new(a.into(), b.into(), c.into())
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        (Complex64::i() * (self.a * y * y + self.b * y + self.c)).exp()
    }
}

/// `int exp[i(a y^2 + b y + c)] dy` over the real line.
///
/// The integral converges for `Im(a) > 0`; on the real axis it is the limit
/// from the upper half-plane, which is where a damped time `t - i eps` puts
/// every quadratic phase of the form `m/(hbar t)`. The principal square root of
/// `i pi / a` is continuous on the closed upper half-plane, so no branch
/// bookkeeping is needed.
pub fn fresnel_integral(g: &GaussianExponent) -> Result<Complex64> {
    let mut a = g.a;
    if a.norm() == 0.0 || !a.norm().is_finite() {
        return Err(Error::DegenerateQuadratic);
    }
    if a.im < 0.0 {
        if -a.im <= REAL_AXIS_TOL * a.norm() {
            a.im = 0.0;
        } else {
            return Err(Error::BranchAmbiguity { im_a: a.im });
        }
    }
    let root = (Complex64::new(0.0, PI) / a).sqrt();
    let phase = Complex64::i() * (g.c - g.b * g.b / (4.0 * a));
    let v = root * phase.exp();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite("fresnel_integral"));
    }
    Ok(v)
}
