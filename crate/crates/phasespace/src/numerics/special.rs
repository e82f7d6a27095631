use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest Laguerre order served by [`laguerre`].
pub const LAGUERRE_MAX_ORDER: usize = 64;
/// `|x|` bound for [`airy_ai`].
pub const AIRY_RANGE: f64 = 40.0;

/// Laguerre polynomial `L_n(x)` from the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> Result<f64> {
    if n > LAGUERRE_MAX_ORDER {
        return Err(Error::OrderTooLarge { n });
    }
    let (mut l0, mut l1) = (1.0, 1.0 - x);
    if n == 0 {
        return Ok(l0);
    }
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 - x) * l1 - kf * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    Ok(l1)
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = -0.258_819_403_792_806_8;
/// Where the asymptotic expansions take over from Taylor stepping.
const AIRY_SWITCH: f64 = 8.0;

/// Airy function `Ai(x)` for `|x| <= 40`.
///
/// `x >= 8` and `x <= -8` use the large-argument asymptotic series. In between
/// the Airy equation `y'' = x y` is stepped by local Taylor series: backwards
/// from `x = 8` on the positive side (the decaying solution grows in that
/// direction, so the step is stable) and forwards from `x = 0` on the negative
/// side, starting from the Maclaurin values `Ai(0)`, `Ai'(0)`.
pub fn airy_ai(x: f64) -> Result<f64> {
    airy_pair(x).map(|(a, _)| a)
}

/// Derivative `Ai'(x)`, same range and method as [`airy_ai`].
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    airy_pair(x).map(|(_, d)| d)
}

fn airy_pair(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || x.abs() > AIRY_RANGE {
        return Err(Error::OutOfRange { x });
    }
    Ok(if x >= AIRY_SWITCH {
        airy_asym_pos(x)
    } else if x >= 0.0 {
        let (a, d) = airy_asym_pos(AIRY_SWITCH);
        taylor_walk(AIRY_SWITCH, a, d, x)
    } else if x > -AIRY_SWITCH {
        taylor_walk(0.0, AI0, AIP0, x)
    } else {
        airy_asym_neg(-x)
    })
}

fn taylor_walk(mut x0: f64, mut y: f64, mut dy: f64, target: f64) -> (f64, f64) {
    let steps = ((target - x0).abs() / 0.5).ceil().max(1.0) as usize;
    let h = (target - x0) / steps as f64;
    for _ in 0..steps {
        // y(x0 + s) = sum c_k s^k with (k+2)(k+1) c_{k+2} = x0 c_k + c_{k-1}
        let mut c = [0.0f64; 48];
        c[0] = y;
        c[1] = dy;
        c[2] = x0 * y / 2.0;
        for k in 1..46 {
            c[k + 2] = (x0 * c[k] + c[k - 1]) / ((k + 2) * (k + 1)) as f64;
        }
        let (mut v, mut d) = (0.0, 0.0);
        for k in (0..48).rev() {
            v = v * h + c[k];
        }
        for k in (1..48).rev() {
            d = d * h + k as f64 * c[k];
        }
        y = v;
        dy = d;
        x0 += h;
    }
    (y, dy)
}

/// Coefficients `u_k` and `v_k` of the Airy asymptotic series.
fn airy_uv(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf));
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k]);
    }
    (u, v)
}

/// Sums `sum_k sign^k c_k zeta^{-k}` up to the smallest term.
fn asym_sum(c: &[f64], zeta: f64, stride: usize, start: usize, alternate: bool) -> f64 {
    let mut s = 0.0f64;
    let mut last = f64::INFINITY;
    let mut j = 0;
    let mut k = start;
    while k < c.len() {
        let term = c[k] / zeta.powi(k as i32);
        if term.abs() > last || term.abs() < 1e-18 * s.abs().max(1e-300) {
            break;
        }
        last = term.abs();
        let sign = if alternate && j % 2 == 1 { -1.0 } else { 1.0 };
        s += sign * term;
        j += 1;
        k += stride;
    }
    s
}

fn airy_asym_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = airy_uv(40);
    let su = asym_sum(&u, zeta, 1, 0, true);
    let sv = asym_sum(&v, zeta, 1, 0, true);
    let pre = (-zeta).exp() / (2.0 * PI.sqrt());
    (pre * su / x.powf(0.25), -pre * x.powf(0.25) * sv)
}

fn airy_asym_neg(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let (u, v) = airy_uv(40);
    let ue = asym_sum(&u, zeta, 2, 0, true);
    let uo = asym_sum(&u, zeta, 2, 1, true);
    let ve = asym_sum(&v, zeta, 2, 0, true);
    let vo = asym_sum(&v, zeta, 2, 1, true);
    let (s, c) = (zeta - PI / 4.0).sin_cos();
    let a = (c * ue + s * uo) / (PI.sqrt() * z.powf(0.25));
    let d = z.powf(0.25) / PI.sqrt() * (s * ve - c * vo);
    (a, d)
}

/// Relative size of the dropped theta-series tail.
const THETA_TAIL: f64 = 32.0;

/// Jacobi theta function `theta_3(z | tau) = sum_n exp(i pi tau n^2 + 2 i n z)`.
///
/// Accepts complex `z` (the quasi-periodicity shift `z + pi tau` leaves the
/// real axis). The summation window is centered on the largest term and wide
/// enough that the neglected terms are below `e^{-32}` relative to it.
pub fn theta3(z: Complex64, tau: Complex64) -> Result<Complex64> {
    if tau.im <= 0.0 || !tau.im.is_finite() {
        return Err(Error::NonConvergent(format!("theta3 needs Im(tau) > 0, got {}", tau.im)));
    }
    let a = PI * tau.im;
    let center = -z.im / a;
    let log_max = z.im * z.im / a;
    if log_max > 600.0 {
        return Err(Error::NonConvergent("theta3 terms overflow".into()));
    }
    let half = (THETA_TAIL / a).sqrt() + 1.0;
    let lo = (center - half).floor() as i64;
    let hi = (center + half).ceil() as i64;
    if hi - lo > 4_000_000 {
        return Err(Error::NonConvergent("theta3 needs too many terms".into()));
    }
    let i = Complex64::i();
    let mut s = Complex64::new(0.0, 0.0);
    for n in lo..=hi {
        let nf = n as f64;
        s += (i * PI * tau * nf * nf + 2.0 * i * nf * z).exp();
    }
    Ok(s)
}

/// `theta_3(z | tau + i eps)`, the damping used when `tau` is real.
pub fn theta3_damped(z: Complex64, tau: Complex64, eps: f64) -> Result<Complex64> {
    theta3(z, tau + Complex64::new(0.0, eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_small_orders() {
        assert_eq!(laguerre(0, 3.7).unwrap(), 1.0);
        assert_eq!(laguerre(1, 2.0).unwrap(), -1.0);
        let x = 1.5;
        let explicit = 1.0 - 3.0 * x + 1.5 * x * x - x * x * x / 6.0;
        assert!((laguerre(3, x).unwrap() - explicit).abs() < 1e-14);
        assert!(matches!(laguerre(65, 1.0), Err(Error::OrderTooLarge { n: 65 })));
    }

    #[test]
    fn laguerre_matches_explicit_polynomials() {
        // L_n(x) = sum_k (-1)^k C(n,k) x^k / k!
        for n in 0..=5usize {
            for s in 0..20 {
                let x = -3.0 + 0.47 * s as f64;
                let mut explicit = 0.0;
                let mut binom = 1.0;
                let mut fact = 1.0;
                for k in 0..=n {
                    if k > 0 {
                        binom *= (n - k + 1) as f64 / k as f64;
                        fact *= k as f64;
                    }
                    explicit += (-1f64).powi(k as i32) * binom * x.powi(k as i32) / fact;
                }
                let v = laguerre(n, x).unwrap();
                assert!((v - explicit).abs() < 1e-10 * (1.0 + explicit.abs()));
            }
        }
    }

    // (x, Ai(x), Ai'(x)) from a 30-digit reference evaluation.
    const AIRY_TABLE: &[(f64, f64, f64)] = &[
        (-40.0, -0.045933923437957249632, -1.389090875260718381),
        (-25.0, 0.16352657883042946949, 0.96237885138769741004),
        (-12.0, -0.066555175054373129474, 1.0231104533679707299),
        (-8.5, -0.33029023763020887902, -0.032313348284639135873),
        (-8.0, -0.052705050356386202622, 0.93556093819830655103),
        (-7.3, 0.33577037051514727697, -0.18009580448329365985),
        (-5.0, 0.35076100902411431979, 0.32719281855444313679),
        (-2.5, -0.11232506769296608919, 0.67885273426479436337),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (-0.3, 0.4309030952855808556, -0.24054512725815461017),
        (0.0, 0.35502805388781723926, -0.25881940379280679841),
        (0.4, 0.25474235429567634084, -0.23583203441920821501),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (2.0, 0.034924130423274379135, -0.053090384433653631704),
        (3.7, 0.0017455720006099785209, -0.0034669407490276270702),
        (5.0, 0.00010834442813607441735, -0.000247413890868462476),
        (7.9, 6.2396400972839341797e-8, -1.7729958329430335231e-7),
        (8.0, 4.6922076160992316256e-8, -1.3414392979067865743e-7),
        (8.1, 3.5224356235735714843e-8, -1.0130972032660844188e-7),
        (12.0, 1.393184688875360839e-13, -4.854736554985308463e-13),
        (20.0, 1.6916728686705403136e-27, -7.5863916257483549605e-27),
        (30.0, 3.2082175915504955711e-49, -1.7598765814327259821e-48),
        (40.0, 6.3657426585529149096e-75, -4.0300179776006780423e-74),
    ];

    #[test]
    fn airy_reference_values() {
        for &(x, a, d) in AIRY_TABLE {
            // relative to the local envelope on the oscillatory side
            let scale_a = if x < 0.0 { (-x).powf(-0.25) / PI.sqrt() } else { a.abs() };
            let scale_d = if x < 0.0 { (-x).powf(0.25) / PI.sqrt() } else { d.abs() };
            let va = airy_ai(x).unwrap();
            let vd = airy_ai_prime(x).unwrap();
            assert!((va - a).abs() < 1e-10 * scale_a, "Ai({x}) = {va}, want {a}");
            assert!((vd - d).abs() < 1e-10 * scale_d, "Ai'({x}) = {vd}, want {d}");
        }
    }

    #[test]
    fn airy_at_zero_and_decay() {
        assert!((airy_ai(0.0).unwrap() - 0.3550280539).abs() < 1e-10);
        assert!(airy_ai(10.0).unwrap() < 1e-9);
        assert!(matches!(airy_ai(40.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(airy_ai(f64::NAN), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn airy_ode_residual() {
        let h = 1e-2;
        for k in 0..60 {
            let x = -9.0 + 0.31 * k as f64;
            let f = |x| airy_ai(x).unwrap();
            let d2 = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h)
                - f(x - 2.0 * h))
                / (12.0 * h * h);
            assert!((d2 - x * f(x)).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn airy_is_continuous_at_switches() {
        for &x0 in &[AIRY_SWITCH, -AIRY_SWITCH, 0.0] {
            let a = airy_ai(x0 - 1e-12).unwrap();
            let b = airy_ai(x0 + 1e-12).unwrap();
            assert!((a - b).abs() < 1e-10 * a.abs(), "x0={x0}: {a} vs {b}");
        }
    }

    #[test]
    fn theta_only_n0_survives_for_large_imaginary_tau() {
        let v = theta3(Complex64::new(0.7, 0.0), Complex64::new(0.3, 12.0)).unwrap();
        assert!((v - 1.0).norm() < 3.0 * (-PI * 12.0).exp());
    }

    #[test]
    fn theta_quasiperiodicity() {
        let tau = Complex64::new(0.4, 0.8);
        let z = Complex64::new(0.3, 0.1);
        let t = theta3(z, tau).unwrap();
        let t_pi = theta3(z + PI, tau).unwrap();
        assert!((t - t_pi).norm() < 1e-12 * t.norm());
        let t_tau = theta3(z + PI * tau, tau).unwrap();
        let expect = (-Complex64::i() * PI * tau - 2.0 * Complex64::i() * z).exp() * t;
        assert!((t_tau - expect).norm() < 1e-10 * expect.norm());
        assert!((theta3(-z, tau).unwrap() - t).norm() < 1e-12 * t.norm());
    }

    #[test]
    fn theta_rejects_lower_half_plane() {
        assert!(theta3(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).is_err());
        assert!(theta3_damped(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), 0.5).is_ok());
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(PI)).abs() < 1e-16);
        assert!((sinc(1e-5) - (1e-5f64).sin() / 1e-5).abs() < 1e-15);
    }
}
