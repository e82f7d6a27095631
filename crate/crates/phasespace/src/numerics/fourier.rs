use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::{Axis, Field1D};
use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward FFT, `X_k = sum_j x_j e^{-2 pi i jk/n}`.
pub fn fft(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

/// Unnormalized inverse FFT, `x_j = sum_k X_k e^{+2 pi i jk/n}`.
pub fn ifft(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// `(1/2 pi hbar) int f(x) e^{-i x p / hbar} dx` sampled on the grid's
/// momentum axis.
pub fn fourier_x_to_p(f: &Field1D) -> Result<Field1D> {
    if f.axis != Axis::Position {
        return Err(Error::InvalidParameter("fourier_x_to_p needs a position-space field".into()));
    }
    let g = f.grid;
    let n = g.n();
    let x0 = g.x(0);
    let mut buf: Vec<Complex64> =
        f.values.iter().enumerate().map(|(j, v)| if j % 2 == 0 { *v } else { -*v }).collect();
    fft(&mut buf);
    let scale = g.dx() / (2.0 * PI * g.hbar());
    for (l, v) in buf.iter_mut().enumerate() {
        *v *= Complex64::from_polar(scale, -x0 * g.p(l) / g.hbar());
    }
    debug_assert_eq!(buf.len(), n);
    Field1D::new(g, Axis::Momentum, buf)
}

/// Inverse of [`fourier_x_to_p`]: `int F(p) e^{i x p / hbar} dp`.
pub fn fourier_p_to_x(fp: &Field1D) -> Result<Field1D> {
    if fp.axis != Axis::Momentum {
        return Err(Error::InvalidParameter("fourier_p_to_x needs a momentum-space field".into()));
    }
    let g = fp.grid;
    let x0 = g.x(0);
    let mut buf: Vec<Complex64> = fp
        .values
        .iter()
        .enumerate()
        .map(|(l, v)| v * Complex64::from_polar(1.0, x0 * g.p(l) / g.hbar()))
        .collect();
    ifft(&mut buf);
    let dp = g.dp();
    for (j, v) in buf.iter_mut().enumerate() {
        *v *= if j % 2 == 0 { dp } else { -dp };
    }
    Field1D::new(g, Axis::Position, buf)
}

/// Spectral derivative of order `k` of periodic samples with spacing `h`.
/// The Nyquist mode is dropped for odd orders.
pub fn spectral_derivative(values: &[Complex64], h: f64, k: u32) -> Vec<Complex64> {
    let n = values.len();
    if k == 0 {
        return values.to_vec();
    }
    let mut buf = values.to_vec();
    fft(&mut buf);
    for (m, v) in buf.iter_mut().enumerate() {
        let mm = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
        if m == n / 2 && k % 2 == 1 {
            *v = Complex64::new(0.0, 0.0);
            continue;
        }
        let w = 2.0 * PI * mm / (n as f64 * h);
        *v *= Complex64::new(0.0, w).powu(k);
    }
    ifft(&mut buf);
    let inv = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= inv);
    buf
}

/// Band-limited interpolation of periodic samples onto a grid twice as fine
/// (point `2j` of the output is sample `j`). The Nyquist coefficient is split
/// symmetrically.
pub fn refine2(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut spec = values.to_vec();
    fft(&mut spec);
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * n];
    for m in 0..n / 2 {
        out[m] = spec[m];
    }
    for m in n / 2 + 1..n {
        out[m + n] = spec[m];
    }
    out[n / 2] = 0.5 * spec[n / 2];
    out[n / 2 + n] = 0.5 * spec[n / 2];
    ifft(&mut out);
    let inv = 1.0 / n as f64;
    out.iter_mut().for_each(|v| *v *= inv);
    out
}
