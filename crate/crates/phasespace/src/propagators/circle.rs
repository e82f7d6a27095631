//! Free particle on a circle of moment of inertia `I`, angles in radians.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::numerics::special::theta3;

/// Imaginary time shift `eta` used for real-time circle propagators: the
/// dual sum's terms at `|n| = n_max` are damped by `e^{-30}`.
pub fn circle_damping(inertia: f64, n_max: usize, hbar: f64) -> f64 {
    60.0 * inertia / (hbar * (n_max * n_max) as f64)
}

/// Angle difference reduced to `[-pi, pi)`.
pub(crate) fn wrap(d: f64) -> f64 {
    (d + PI).rem_euclid(2.0 * PI) - PI
}

/// Image sum of free propagators written as a theta function:
/// `sqrt(I / 2 pi i hbar t) e^{i I D^2 / 2 hbar t} theta_3(pi I D / hbar t | 2 pi I / hbar t)`
/// with `D = phi_f - phi_0` reduced to `[-pi, pi)`. Needs `Im t < 0`.
pub fn circle_theta(inertia: f64, hbar: f64, phi_f: f64, t: Complex64, phi_0: f64) -> Result<Complex64> {
    let d = wrap(phi_f - phi_0);
    let k = inertia / (hbar * t);
    let pref = (k / (2.0 * PI * Complex64::i())).sqrt();
    let gauss = (Complex64::i() * k * d * d / 2.0).exp();
    Ok(pref * gauss * theta3(PI * k * d, 2.0 * PI * k)?)
}

/// `(1/2 pi) sum_{|n| <= n_max} e^{-i hbar n^2 t / 2I} e^{i n (phi_f - phi_0)}`.
pub fn circle_dual_sum(inertia: f64, hbar: f64, n_max: usize, phi_f: f64, t: Complex64, phi_0: f64) -> Complex64 {
    let d = phi_f - phi_0;
    let nm = n_max as i64;
    (-nm..=nm)
        .map(|n| {
            let nf = n as f64;
            (Complex64::i() * (-hbar * nf * nf * t / (2.0 * inertia) + nf * d)).exp()
        })
        .sum::<Complex64>()
        / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn theta_equals_dual_sum() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let inertia = rng.random_range(0.5..2.0);
            let hbar = rng.random_range(0.5..1.5);
            let n_max = 30;
            let t = Complex64::new(rng.random_range(0.1..3.0), -circle_damping(inertia, n_max, hbar));
            let (a, b) = (rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..2.0 * PI));
            let th = circle_theta(inertia, hbar, a, t, b).unwrap();
            let du = circle_dual_sum(inertia, hbar, n_max, a, t, b);
            assert!((th - du).norm() < 1e-10 * th.norm().max(1.0));
        }
    }

    #[test]
    fn periodic_in_angles() {
        let t = Complex64::new(0.8, -0.1);
        let a = circle_theta(1.0, 1.0, 0.3, t, 1.0).unwrap();
        let b = circle_theta(1.0, 1.0, 0.3 + 2.0 * PI, t, 1.0).unwrap();
        let c = circle_theta(1.0, 1.0, 0.3, t, 1.0 - 4.0 * PI).unwrap();
        assert!((a - b).norm() < 1e-12 && (a - c).norm() < 1e-12);
    }
}
