//! Propagators of quadratic Lagrangians: Jacobi fields (Gelfand-Yaglom) and
//! exact composition of short-time Gaussian kernels.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{GaussianKernel, QuadraticModel};
use crate::error::{Error, Result};
use crate::numerics::ode::{count_zeros, rk4_forced, rk4_linear};
use crate::numerics::quadrature::simpson;

/// Result of [`gelfand_yaglom`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GelfandYaglom {
    pub kernel: GaussianKernel,
    /// Sign changes of the Jacobi field on `(0, t]`.
    pub maslov: u32,
    /// Jacobi field at the final time.
    pub phi: f64,
    hbar: f64,
}

impl GelfandYaglom {
    pub fn prefactor(&self) -> Complex64 {
        self.kernel.pref
    }

    /// Classical action `S_c(x_f, x_0)`.
    pub fn action(&self, xf: f64, x0: f64) -> f64 {
        let k = &self.kernel;
        self.hbar * (k.a * xf * xf + k.b * xf * x0 + k.c * x0 * x0 + k.d * xf + k.e * x0 + k.f).re
    }
}

/// Propagator of `L = m qdot^2/2 - c q^2/2 + f q` over `[0, t]`.
///
/// The Jacobi field `phi` (`phi(0) = 0`, `phi'(0) = 1`) gives the prefactor
/// `sqrt(m / 2 pi hbar |phi(t)|) e^{-i pi/4} e^{-i pi nu/2}` with `nu` its zero
/// count. The classical path is assembled from `phi`, the companion solution
/// `chi` (`chi(0) = 1`, `chi'(0) = 0`) and a particular solution of the forced
/// equation, and the action is integrated with Simpson's rule on the RK4
/// grid. `steps` must be even and at least 16.
pub fn gelfand_yaglom(model: &QuadraticModel, t: f64, steps: usize, hbar: f64) -> Result<GelfandYaglom> {
    if t == 0.0 {
        return Err(Error::ZeroTime);
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    if steps % 2 == 1 {
        return Err(Error::InvalidParameter(format!("steps = {steps} must be even")));
    }
    let (m, c, f) = (model.m, &*model.c, &*model.f);
    let phi = rk4_linear(c, m, 0.0, t, steps, [0.0, 1.0])?;
    let chi = rk4_linear(c, m, 0.0, t, steps, [1.0, 0.0])?;
    let part = rk4_forced(c, f, m, 0.0, t, steps, [0.0, 0.0])?;
    let phi_t = phi[steps].0;
    if phi_t.abs() < 1e-10 {
        return Err(Error::CausticAtEndpoint { phi: phi_t });
    }
    let maslov = count_zeros(phi.iter().skip(1).map(|s| s.0), 1.0);
    let (chi_t, w_t) = (chi[steps].0, part[steps].0);
    let h = t / steps as f64;
    // path = x0 u0 + xf u1 + w
    let u1: Vec<(f64, f64)> = phi.iter().map(|&(y, dy)| (y / phi_t, dy / phi_t)).collect();
    let u0: Vec<(f64, f64)> = chi
        .iter()
        .zip(&phi)
        .map(|(&(y, dy), &(p, dp))| (y - chi_t * p / phi_t, dy - chi_t * dp / phi_t))
        .collect();
    let w: Vec<(f64, f64)> = part
        .iter()
        .zip(&phi)
        .map(|(&(y, dy), &(p, dp))| (y - w_t * p / phi_t, dy - w_t * dp / phi_t))
        .collect();
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 * h).collect();
    let integrate = |g: &dyn Fn(usize) -> f64| simpson(&(0..=steps).map(g).collect::<Vec<_>>(), h);
    let cc = |k: usize| c(times[k]);
    let ff = |k: usize| f(times[k]);
    let a = integrate(&|k| 0.5 * m * u1[k].1 * u1[k].1 - 0.5 * cc(k) * u1[k].0 * u1[k].0);
    let cx = integrate(&|k| 0.5 * m * u0[k].1 * u0[k].1 - 0.5 * cc(k) * u0[k].0 * u0[k].0);
    let b = integrate(&|k| m * u0[k].1 * u1[k].1 - cc(k) * u0[k].0 * u1[k].0);
    let d = integrate(&|k| m * u1[k].1 * w[k].1 - cc(k) * u1[k].0 * w[k].0 + ff(k) * u1[k].0);
    let e = integrate(&|k| m * u0[k].1 * w[k].1 - cc(k) * u0[k].0 * w[k].0 + ff(k) * u0[k].0);
    let fc = integrate(&|k| 0.5 * m * w[k].1 * w[k].1 - 0.5 * cc(k) * w[k].0 * w[k].0 + ff(k) * w[k].0);
    let pref = Complex64::from_polar(
        (m / (2.0 * PI * hbar * phi_t.abs())).sqrt(),
        -PI / 4.0 - PI * maslov as f64 / 2.0,
    );
    let kernel = GaussianKernel {
        pref,
        a: (a / hbar).into(),
        b: (b / hbar).into(),
        c: (cx / hbar).into(),
        d: (d / hbar).into(),
        e: (e / hbar).into(),
        f: (fc / hbar).into(),
    };
    Ok(GelfandYaglom { kernel, maslov, phi: phi_t, hbar })
}

/// Short-time kernel over `[t0, t0 + dt]` from the midpoint action
/// `m (x' - x)^2 / 2dt - dt c_mid (x'^2 + x^2)/4 + dt f_mid (x' + x)/2`.
fn slice_kernel(model: &QuadraticModel, t0: f64, dt: f64, hbar: f64) -> GaussianKernel {
    let tm = t0 + 0.5 * dt;
    let (m, cm, fm) = (model.m, (model.c)(tm), (model.f)(tm));
    let alpha = (m / (2.0 * dt) - dt * cm / 4.0) / hbar;
    let delta = dt * fm / (2.0 * hbar);
    GaussianKernel {
        pref: (m / (2.0 * PI * hbar * Complex64::i() * dt)).sqrt(),
        a: alpha.into(),
        b: (-m / (dt * hbar)).into(),
        c: alpha.into(),
        d: delta.into(),
        e: delta.into(),
        f: 0.0.into(),
    }
}

/// `N`-slice propagator over `[t0, t1]`, composed analytically slice by slice.
/// Each composition is a Fresnel integral; the branch of its square root is
/// the limit from `Im Q > 0`, which tracks the Maslov phase automatically.
pub fn time_sliced_interval(model: &QuadraticModel, t0: f64, t1: f64, slices: usize, hbar: f64) -> Result<GaussianKernel> {
    if slices < 2 {
        return Err(Error::InvalidParameter("at least 2 slices are needed".into()));
    }
    if t1 == t0 {
        return Err(Error::ZeroTime);
    }
    let dt = (t1 - t0) / slices as f64;
    let mut acc = slice_kernel(model, t0, dt, hbar);
    for k in 1..slices {
        let next = slice_kernel(model, t0 + k as f64 * dt, dt, hbar);
        acc = next.compose(&acc).map_err(|_| Error::CausticCrossing { slice: k })?;
    }
    Ok(acc)
}

/// [`time_sliced_interval`] over `[0, t]`.
pub fn time_sliced(model: &QuadraticModel, t: f64, slices: usize, hbar: f64) -> Result<GaussianKernel> {
    time_sliced_interval(model, 0.0, t, slices, hbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagators::{gaussian_kernel, PropagatorSpec};
    use rand::{Rng, SeedableRng};

    fn c(v: f64) -> Complex64 {
        v.into()
    }

    #[test]
    fn gy_matches_closed_forms() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let cases = [
            (QuadraticModel::harmonic(1.0, 1.0).unwrap(), PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap()),
            (QuadraticModel::free(1.0).unwrap(), PropagatorSpec::free(1.0, 1.0).unwrap()),
            (QuadraticModel::linear(), PropagatorSpec::linear(1.0).unwrap()),
        ];
        for (model, spec) in &cases {
            for _ in 0..5 {
                let t = rng.random_range(0.2..3.0);
                let gy = gelfand_yaglom(model, t, 2048, 1.0).unwrap();
                let exact = gaussian_kernel(spec, c(t)).unwrap();
                for _ in 0..5 {
                    let (xf, x0) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
                    let (a, b) = (gy.kernel.eval(xf, x0), exact.eval(xf, x0));
                    assert!((a - b).norm() < 1e-8 * b.norm(), "{model:?} {t}");
                }
            }
        }
    }

    #[test]
    fn gy_past_caustics() {
        let model = QuadraticModel::harmonic(1.0, 1.0).unwrap();
        let spec = PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap();
        for (t, nu) in [(2.0, 0), (4.0, 1), (7.5, 2)] {
            let gy = gelfand_yaglom(&model, t, 4096, 1.0).unwrap();
            assert_eq!(gy.maslov, nu);
            let exact = gaussian_kernel(&spec, c(t)).unwrap();
            assert!((gy.kernel.eval(0.3, -1.1) - exact.eval(0.3, -1.1)).norm() < 1e-8);
        }
        assert!(matches!(gelfand_yaglom(&model, PI, 4096, 1.0), Err(Error::CausticAtEndpoint { .. })));
        assert_eq!(gelfand_yaglom(&model, 0.0, 64, 1.0), Err(Error::ZeroTime));
    }

    #[test]
    fn gy_action_free() {
        let gy = gelfand_yaglom(&QuadraticModel::free(2.0).unwrap(), 1.5, 64, 1.0).unwrap();
        let s = gy.action(1.0, -0.5);
        assert!((s - 2.0 * 1.5f64.powi(2) / (2.0 * 1.5)).abs() < 1e-12);
        assert!((gy.prefactor() - (2.0 / (2.0 * PI * Complex64::i() * 1.5)).sqrt()).norm() < 1e-12);
    }

    #[test]
    fn sliced_free_is_exact() {
        let model = QuadraticModel::free(1.3).unwrap();
        let exact = gaussian_kernel(&PropagatorSpec::free(1.3, 0.9).unwrap(), c(2.0)).unwrap();
        for n in [2, 7, 64] {
            assert!(time_sliced(&model, 2.0, n, 0.9).unwrap().max_rel_diff(&exact) < 1e-12);
        }
    }

    #[test]
    fn sliced_second_order() {
        let model = QuadraticModel::harmonic(1.0, 1.0).unwrap();
        let exact = gaussian_kernel(&PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap(), c(1.0)).unwrap();
        let errs: Vec<f64> = [8, 16, 32, 64, 128, 256, 512]
            .iter()
            .map(|&n| time_sliced(&model, 1.0, n, 1.0).unwrap().max_rel_diff(&exact))
            .collect();
        let slope = (errs[6].ln() - errs[0].ln()) / (512f64.ln() - 8f64.ln());
        assert!((slope + 2.0).abs() < 0.2, "{slope}");
    }

    #[test]
    fn chapman_kolmogorov() {
        let model = QuadraticModel::new(1.0, |t| 1.0 + 0.3 * t, |t| (2.0 * t).sin()).unwrap();
        let full = time_sliced_interval(&model, 0.0, 2.0, 64, 1.0).unwrap();
        let first = time_sliced_interval(&model, 0.0, 1.0, 32, 1.0).unwrap();
        let second = time_sliced_interval(&model, 1.0, 2.0, 32, 1.0).unwrap();
        assert!(second.compose(&first).unwrap().max_rel_diff(&full) < 1e-10);
    }

    #[test]
    fn sliced_tracks_maslov_phase() {
        let model = QuadraticModel::harmonic(1.0, 1.0).unwrap();
        let exact = gaussian_kernel(&PropagatorSpec::harmonic(1.0, 1.0, 1.0).unwrap(), c(4.0)).unwrap();
        let k = time_sliced(&model, 4.0, 2000, 1.0).unwrap();
        assert!((k.pref - exact.pref).norm() < 1e-3 * exact.pref.norm());
    }

    #[test]
    fn time_dependent_gy_vs_slicing() {
        let model = QuadraticModel::new(1.0, |t| 1.0 + 0.3 * t, |t| (2.0 * t).sin()).unwrap();
        let gy = gelfand_yaglom(&model, 2.0, 4096, 1.0).unwrap();
        let sl = time_sliced(&model, 2.0, 2048, 1.0).unwrap();
        assert!(sl.max_rel_diff(&gy.kernel) < 1e-5);
    }
}
