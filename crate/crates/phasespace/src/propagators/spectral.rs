//! Propagators as truncated sums over eigenfunctions.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Family, PropagatorSpec};
use crate::error::{Error, Result};

/// Oscillator eigenfunctions `psi_0 .. psi_{count-1}` at `x` by the
/// three-term recurrence.
pub fn hermite_functions(count: usize, x: f64, m: f64, omega: f64, hbar: f64) -> Vec<f64> {
    let s = (m * omega / hbar).sqrt();
    let xi = s * x;
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push((s * s / PI).powf(0.25) * (-0.5 * xi * xi).exp());
    if count > 1 {
        out.push(2f64.sqrt() * xi * out[0]);
    }
    for n in 1..count.saturating_sub(1) {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * xi * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// `sum_n e^{-i E_n t / hbar} psi_n(x_f) conj(psi_n(x_0))`, truncated to
/// `n < n_terms` (oscillator) or `|n| <= n_terms` (circle).
pub fn spectral_form(spec: &PropagatorSpec, xf: f64, t: Complex64, x0: f64, n_terms: usize) -> Result<Complex64> {
    if n_terms == 0 {
        return Err(Error::InvalidParameter("n_terms must be at least 1".into()));
    }
    let hb = spec.hbar;
    match spec.family {
        Family::HarmonicOscillator { m, omega } => {
            let a = hermite_functions(n_terms, xf, m, omega, hb);
            let b = hermite_functions(n_terms, x0, m, omega, hb);
            Ok((0..n_terms)
                .map(|n| {
                    let e = omega * (n as f64 + 0.5);
                    (-Complex64::i() * e * t).exp() * a[n] * b[n]
                })
                .sum())
        }
        Family::Circle { inertia, .. } => Ok(super::circle_dual_sum(inertia, hb, n_terms, xf, t, x0)),
        _ => Err(Error::UnsupportedFamily(format!(
            "{} has a continuous spectrum",
            spec.family.name()
        ))),
    }
}
