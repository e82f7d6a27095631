//! Spectral inversion of star exponentials.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ClosedFamily, StarExponentialClosedForm};
use crate::error::{Error, Result};
use crate::numerics::fourier::ifft;
use crate::numerics::grid::PhaseGrid;
use crate::numerics::quadrature::richardson_to_zero;
use crate::numerics::special::{laguerre, sinc};
use crate::weyl::SampledSymbol;

/// One term of the spectral decomposition of a star exponential.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralSlice {
    Discrete { family: &'static str, n: i64, energy: f64, rho: SampledSymbol },
    Continuous { family: &'static str, energy: f64, rho: SampledSymbol },
}

impl SpectralSlice {
    pub fn rho(&self) -> &SampledSymbol {
        match self {
            SpectralSlice::Discrete { rho, .. } | SpectralSlice::Continuous { rho, .. } => rho,
        }
    }

    pub fn energy(&self) -> f64 {
        match self {
            SpectralSlice::Discrete { energy, .. } | SpectralSlice::Continuous { energy, .. } => *energy,
        }
    }
}

/// Oscillator level `rho_n = ((-1)^n / pi hbar) e^{-2H/hbar omega} L_n(4H/hbar omega)`.
pub fn ho_level(n: usize, q: f64, p: f64, m: f64, omega: f64, hbar: f64) -> Result<f64> {
    let h = p * p / (2.0 * m) + 0.5 * m * omega * omega * q * q;
    let x = h / (hbar * omega);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign / (PI * hbar) * (-2.0 * x).exp() * laguerre(n, 4.0 * x)?)
}

/// Circle level `|n|`: `(1/2 pi hbar) [sinc(pi(p/hbar - n)) + sinc(pi(p/hbar + n))]`
/// for `n != 0`, since `+n` and `-n` share an energy and cannot be separated
/// by the time transform; `(1/2 pi hbar) sinc(pi p/hbar)` for `n = 0`.
pub fn circle_level(n: i64, p: f64, hbar: f64) -> f64 {
    let u = p / hbar;
    let nf = n.unsigned_abs() as f64;
    let s = if n == 0 { sinc(PI * u) } else { sinc(PI * (u - nf)) + sinc(PI * (u + nf)) };
    s / (2.0 * PI * hbar)
}

/// `rho_n` from the star exponential by the period integral
/// `(1/2 pi hbar)(1/T) int_0^T Exp*(t) e^{i E_n t/hbar} dt`.
///
/// Oscillator: the integrand is periodic and analytic below the real axis,
/// so the contour is moved to `Im t = -1/omega`, clear of the poles of
/// `sec(omega t/2)`, and the trapezoidal rule converges geometrically.
/// Circle: the integrand is a trigonometric polynomial and the trapezoidal
/// rule with enough nodes is exact; the result is the `+-n` pair (see
/// [`circle_level`]).
pub fn project_level(cf: &StarExponentialClosedForm, n: i64, grid: PhaseGrid) -> Result<SpectralSlice> {
    let hb = cf.hbar;
    let energy = cf.energy(n)?;
    let gn = grid.n();
    let (xs, ps) = (grid.xs(), grid.ps());
    let mut out = DMatrix::<Complex64>::zeros(gn, gn);
    match cf.family {
        ClosedFamily::HarmonicOscillator { omega, .. } => {
            let nodes = 128;
            let period = 2.0 * PI / omega;
            let tau = 1.0 / omega;
            let times: Vec<Complex64> =
                (0..nodes).map(|k| Complex64::new(k as f64 * period / nodes as f64, -tau)).collect();
            let weights: Vec<Complex64> = times
                .iter()
                .map(|t| (Complex64::i() * energy * t / hb).exp() / (nodes as f64 * 2.0 * PI * hb))
                .collect();
            for i in 0..gn {
                for l in 0..gn {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (t, w) in times.iter().zip(&weights) {
                        s += cf.eval(xs[i], ps[l], *t)? * w;
                    }
                    out[(i, l)] = s;
                }
            }
        }
        ClosedFamily::Circle { inertia, n_max } => {
            let period = 4.0 * PI * inertia / hb;
            let spread = 2 * (n_max * n_max + (n * n) as usize) + 2;
            let nodes = spread.next_power_of_two();
            let times: Vec<f64> = (0..nodes).map(|k| k as f64 * period / nodes as f64).collect();
            for l in 0..gn {
                let mut s = Complex64::new(0.0, 0.0);
                for &t in &times {
                    s += cf.eval(0.0, ps[l], t.into())? * Complex64::from_polar(1.0, energy * t / hb);
                }
                let v = s / (nodes as f64 * 2.0 * PI * hb);
                for i in 0..gn {
                    out[(i, l)] = v;
                }
            }
        }
        _ => unreachable!("energy() rejects continuous families"),
    }
    let rho = SampledSymbol::new(grid, out, format!("{}_level_{n}", cf.name()))?;
    Ok(SpectralSlice::Discrete { family: cf.name(), n, energy, rho })
}

/// `sum e^{-i E_n t/hbar} 2 pi hbar rho_n(q, p)` over the levels `n <= n_top`
/// (circle: `|n| <= n_top`).
pub fn fd_partial_sum(cf: &StarExponentialClosedForm, n_top: usize, q: f64, p: f64, t: Complex64) -> Result<Complex64> {
    let hb = cf.hbar;
    let i = Complex64::i();
    match cf.family {
        ClosedFamily::HarmonicOscillator { m, omega } => {
            let mut s = Complex64::new(0.0, 0.0);
            for n in 0..=n_top {
                let e = cf.energy(n as i64)?;
                s += (-i * e * t / hb).exp() * ho_level(n, q, p, m, omega, hb)?;
            }
            Ok(s * 2.0 * PI * hb)
        }
        ClosedFamily::Circle { .. } => {
            let mut s = Complex64::new(0.0, 0.0);
            for n in 0..=n_top as i64 {
                s += (-i * cf.energy(n)? * t / hb).exp() * circle_level(n, p, hb);
            }
            Ok(s * 2.0 * PI * hb)
        }
        _ => Err(Error::UnsupportedFamily(format!("{} has a continuous spectrum", cf.name()))),
    }
}

/// Largest tail `e^{-(eps T)^2}` accepted at the edge of the time window.
pub const TIME_TAIL: f64 = 1e-6;

/// `rho_E(q, p) = (2 pi hbar)^{-2} int Exp*(t) e^{iEt/hbar} e^{-(eps t)^2} dt`
/// over `|t| <= t_window`.
///
/// For the free particle and the linear potential `Exp* = e^{-i t H/hbar} g(t)`
/// with `g` independent of the phase-space point, so `rho_E = R(E - H(q, p))`
/// for one function `R`, computed by a single FFT over `t` and interpolated.
/// The Gaussian window smears `R` by a Gaussian of width `~hbar eps` in energy.
pub fn wigner_continuous(
    cf: &StarExponentialClosedForm,
    energy: f64,
    grid: PhaseGrid,
    t_window: f64,
    eps: f64,
) -> Result<SampledSymbol> {
    let hb = cf.hbar;
    let cubic = match cf.family {
        ClosedFamily::Free { .. } => false,
        ClosedFamily::Linear => true,
        _ => {
            return Err(Error::UnsupportedFamily(format!(
                "{} has a discrete spectrum; use project_level",
                cf.name()
            )))
        }
    };
    if !(eps > 0.0 && t_window > 0.0) {
        return Err(Error::InvalidParameter("eps and t_window must be positive".into()));
    }
    let tail = (-(eps * t_window).powi(2)).exp();
    if tail > TIME_TAIL {
        return Err(Error::WindowTooSmall { tail });
    }
    let gn = grid.n();
    let (xs, ps) = (grid.xs(), grid.ps());
    let mut hmin = f64::INFINITY;
    let mut hmax = f64::NEG_INFINITY;
    for &x in &xs {
        for &p in &ps {
            let h = cf.hamiltonian(x, p);
            hmin = hmin.min(h);
            hmax = hmax.max(h);
        }
    }
    let dw_max = hb * eps / 4.0;
    let w_max = (energy - hmin).abs().max((energy - hmax).abs()) + 16.0 * dw_max;
    let chirp = if cubic { t_window * t_window / 4.0 } else { 0.0 };
    let dt = PI * hb / (1.5 * (chirp + w_max) + 2.0 * eps * eps * t_window);
    let mut m = 1usize;
    while (m as f64) * dt < 2.0 * t_window || 2.0 * PI * hb / (m as f64 * dt) > dw_max {
        m <<= 1;
    }
    if m > 1 << 26 {
        return Err(Error::WindowTooSmall { tail });
    }
    let half = (m / 2) as i64;
    let mut buf: Vec<Complex64> = (0..m as i64)
        .map(|j| {
            let t = (j - half) as f64 * dt;
            if t.abs() > t_window {
                return Complex64::new(0.0, 0.0);
            }
            let g = if cubic { Complex64::from_polar(1.0, -t * t * t / (12.0 * hb)) } else { Complex64::new(1.0, 0.0) };
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            g * (sign * (-(eps * t).powi(2)).exp())
        })
        .collect();
    ifft(&mut buf);
    let scale = dt / (2.0 * PI * hb).powi(2);
    for (k, v) in buf.iter_mut().enumerate() {
        *v *= if k % 2 == 0 { scale } else { -scale };
    }
    let dw = 2.0 * PI * hb / (m as f64 * dt);
    let interp = |w: f64| -> Complex64 {
        let u = w / dw + half as f64;
        let base = u.floor() as i64 - 3;
        let nodes: Vec<i64> = (base..base + 8).collect();
        let mut s = Complex64::new(0.0, 0.0);
        for &a in &nodes {
            let mut wgt = 1.0;
            for &b in &nodes {
                if a != b {
                    wgt *= (u - b as f64) / (a - b) as f64;
                }
            }
            s += buf[a.rem_euclid(m as i64) as usize] * wgt;
        }
        s
    };
    let mut out = DMatrix::<Complex64>::zeros(gn, gn);
    for i in 0..gn {
        for l in 0..gn {
            out[(i, l)] = interp(energy - cf.hamiltonian(xs[i], ps[l]));
        }
    }
    SampledSymbol::new(grid, out, format!("{}_E", cf.name()))
}

/// [`wigner_continuous`] at `eps0 {1, 1/sqrt 2, 1/2}` with windows `5/eps`,
/// extrapolated polynomially in `eps^2` to zero damping.
pub fn wigner_continuous_extrapolated(
    cf: &StarExponentialClosedForm,
    energy: f64,
    grid: PhaseGrid,
    eps0: f64,
) -> Result<SampledSymbol> {
    let epss = [eps0, eps0 / 2f64.sqrt(), eps0 / 2.0];
    let fields = epss
        .iter()
        .map(|&e| wigner_continuous(cf, energy, grid, 5.0 / e, e))
        .collect::<Result<Vec<_>>>()?;
    let x2: Vec<f64> = epss.iter().map(|e| e * e).collect();
    let n = grid.n();
    let out = DMatrix::from_fn(n, n, |i, l| {
        let ys: Vec<Complex64> = fields.iter().map(|f| f.values[(i, l)]).collect();
        richardson_to_zero(&x2, &ys)
    });
    SampledSymbol::new(grid, out, format!("{}_E", cf.name()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::airy_ai;
    use crate::star::{star_genvalue_residual, PolySymbol};

    #[test]
    fn ho_levels_projected() {
        let cf = StarExponentialClosedForm::harmonic(1.0, 1.0, 1.0).unwrap();
        let grid = PhaseGrid::square(32, 1.0).unwrap();
        for n in 0..4 {
            let s = project_level(&cf, n, grid).unwrap();
            let exact = SampledSymbol::from_real_fn(grid, "", |q, p| ho_level(n as usize, q, p, 1.0, 1.0, 1.0).unwrap());
            assert!(s.rho().max_diff(&exact).unwrap() < 1e-10);
            assert_eq!(s.energy(), n as f64 + 0.5);
        }
        let s0 = project_level(&cf, 0, grid).unwrap();
        let c = grid.n() / 2;
        let x = grid.x(c);
        assert!((s0.rho().values[(c, c)].re - (-x * x).exp() / PI).abs() < 1e-12);
        let s1 = project_level(&cf, 1, grid).unwrap();
        assert!(s1.rho().values[(c, c)].re < -0.25);
        let fine = PhaseGrid::square(64, 1.0).unwrap();
        let s1 = project_level(&cf, 1, fine).unwrap();
        let h = PolySymbol::harmonic(1.0, 1.0, 1.0);
        let r = star_genvalue_residual(&h, s1.rho(), 1.5).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn circle_levels() {
        let cf = StarExponentialClosedForm::circle(1.0, 10, 1.0).unwrap();
        let grid = PhaseGrid::centered(PI, 32, 1.0).unwrap();
        for n in [0, 2, 5] {
            let s = project_level(&cf, n, grid).unwrap();
            let exact = SampledSymbol::from_real_fn(grid, "", |_, p| circle_level(n, p, 1.0));
            assert!(s.rho().max_diff(&exact).unwrap() < 1e-12);
        }
        assert!((circle_level(2, 2.0, 1.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn partial_sums() {
        let ho = StarExponentialClosedForm::harmonic(1.0, 1.0, 1.0).unwrap();
        let t = Complex64::new(1.0, -0.5);
        let exact = ho.eval(0.5, -0.3, t).unwrap();
        let mut last = f64::INFINITY;
        for n in [2, 5, 10, 20, 40] {
            let e = (fd_partial_sum(&ho, n, 0.5, -0.3, t).unwrap() - exact).norm();
            assert!(e < last);
            last = e;
        }
        assert!(last < 1e-8);
        let deep = Complex64::new(0.2, -30.0);
        let r = fd_partial_sum(&ho, 0, 0.5, -0.3, deep).unwrap() / ho.eval(0.5, -0.3, deep).unwrap();
        assert!((r - 1.0).norm() < 1e-10);
        let circ = StarExponentialClosedForm::circle(1.0, 10, 1.0).unwrap();
        for p in [0.0, 0.4, 3.0, -7.7] {
            let t = Complex64::new(0.9, 0.0);
            assert!((fd_partial_sum(&circ, 10, 0.0, p, t).unwrap() - circ.eval(0.0, p, t).unwrap()).norm() < 1e-12);
        }
        let free = StarExponentialClosedForm::free(1.0, 1.0).unwrap();
        assert!(matches!(fd_partial_sum(&free, 3, 0.0, 0.0, t), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn linear_airy() {
        let cf = StarExponentialClosedForm::linear(1.0).unwrap();
        let grid = PhaseGrid::centered(4.0, 32, 1.0).unwrap();
        let k = 2f64.powf(2.0 / 3.0);
        for e in [-1.0, 0.0] {
            let w = wigner_continuous_extrapolated(&cf, e, grid, 0.08).unwrap();
            let exact =
                SampledSymbol::from_real_fn(grid, "", |q, p| {
                    let z = k * (p * p + q - e);
                    if z > 40.0 { 0.0 } else { k / (2.0 * PI) * airy_ai(z).unwrap() }
                });
            let err = w.interior_diff(&exact).unwrap();
            assert!(err < 1e-4, "{e} {err}");
        }
    }

    #[test]
    fn free_delta_scaling() {
        // smeared delta on the shell H = E: on-shell height ~ 1/eps
        let cf = StarExponentialClosedForm::free(1.0, 1.0).unwrap();
        let grid = PhaseGrid::centered(2.0, 16, 1.0).unwrap();
        let r1 = wigner_continuous(&cf, 0.0, grid, 5.0 / 0.1, 0.1).unwrap();
        let r2 = wigner_continuous(&cf, 0.0, grid, 5.0 / 0.05, 0.05).unwrap();
        // at p = 0 (l = n/2) the shell E = 0 is hit exactly
        let c = grid.n() / 2;
        let ratio = r2.values[(c, c)].re / r1.values[(c, c)].re;
        assert!((ratio - 2.0).abs() < 1e-6, "{ratio}");
        // R(omega) = (2 pi hbar)^{-2} sqrt(pi)/eps e^{-omega^2/(4 eps^2 hbar^2)}
        let expect = PI.sqrt() / 0.1 / (2.0 * PI).powi(2);
        assert!((r1.values[(c, c)].re - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn window_checks() {
        let cf = StarExponentialClosedForm::linear(1.0).unwrap();
        let grid = PhaseGrid::centered(4.0, 16, 1.0).unwrap();
        assert!(matches!(wigner_continuous(&cf, 0.0, grid, 10.0, 0.1), Err(Error::WindowTooSmall { .. })));
        let ho = StarExponentialClosedForm::harmonic(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(wigner_continuous(&ho, 0.0, grid, 50.0, 0.1), Err(Error::UnsupportedFamily(_))));
    }
}
