//! Discrete Weyl correspondence between phase-space symbols and position
//! kernels.
//!
//! A kernel entry `K[i, j]` approximates `kappa(x_i, x_j)`; operators act as
//! `(K psi)_i = sum_j K[i, j] psi_j dx`. Entries whose column-minus-row offset
//! is even have their midpoint on the grid. Odd offsets have half-integer
//! midpoints and are moved onto the grid by a half-sample spectral shift
//! along the center coordinate.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::fourier::{fft, ifft};
use crate::numerics::fresnel::{fresnel_integral, GaussianExponent};
use crate::numerics::grid::{Axis, Field1D, PhaseGrid};

/// A complex function of `(x, p)` sampled on a grid; rows index `x`,
/// columns index `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSymbol {
    pub grid: PhaseGrid,
    pub values: DMatrix<Complex64>,
    pub label: String,
}

impl SampledSymbol {
    pub fn new(grid: PhaseGrid, values: DMatrix<Complex64>, label: impl Into<String>) -> Result<Self> {
        if values.nrows() != grid.n() || values.ncols() != grid.n() {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite("SampledSymbol::new"));
        }
        Ok(Self { grid, values, label: label.into() })
    }

    pub fn from_fn(grid: PhaseGrid, label: impl Into<String>, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let n = grid.n();
        let (xs, ps) = (grid.xs(), grid.ps());
        let values = DMatrix::from_fn(n, n, |i, l| f(xs[i], ps[l]));
        Self { grid, values, label: label.into() }
    }

    pub fn from_real_fn(grid: PhaseGrid, label: impl Into<String>, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::from_fn(grid, label, |x, p| Complex64::new(f(x, p), 0.0))
    }

    pub fn constant(grid: PhaseGrid, v: Complex64) -> Self {
        Self::from_fn(grid, "constant", |_, _| v)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid, values: self.values.map(f), label: self.label.clone() }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|v| v * s)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { grid: self.grid, values: &self.values + &other.values, label: self.label.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { grid: self.grid, values: &self.values - &other.values, label: self.label.clone() })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.component_mul(&other.values),
            label: self.label.clone(),
        })
    }

    /// Riemann sum `sum f dx dp`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.cell()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Largest `|self - other|` over the interior block.
    pub fn interior_diff(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok(self.interior_max_of(|i, l| (self.values[(i, l)] - other.values[(i, l)]).norm()))
    }

    pub fn interior_max_abs(&self) -> f64 {
        self.interior_max_of(|i, l| self.values[(i, l)].norm())
    }

    fn interior_max_of(&self, f: impl Fn(usize, usize) -> f64) -> f64 {
        let r = self.grid.interior();
        let mut m = 0.0f64;
        for i in r.clone() {
            for l in r.clone() {
                m = m.max(f(i, l));
            }
        }
        m
    }

    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Position-space kernel of an operator.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorKernel {
    pub grid: PhaseGrid,
    pub matrix: DMatrix<Complex64>,
}

impl OperatorKernel {
    pub fn new(grid: PhaseGrid, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != grid.n() || matrix.ncols() != grid.n() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, matrix })
    }

    /// The identity operator, `delta(x - y)` on the grid.
    pub fn identity(grid: PhaseGrid) -> Self {
        let n = grid.n();
        Self { grid, matrix: DMatrix::identity(n, n) * Complex64::new(1.0 / grid.dx(), 0.0) }
    }

    /// `psi(x) conj(phi(y))`.
    pub fn outer(psi: &Field1D, phi: &Field1D) -> Result<Self> {
        if psi.grid != phi.grid || psi.axis != Axis::Position || phi.axis != Axis::Position {
            return Err(Error::GridMismatch);
        }
        let n = psi.grid.n();
        let m = DMatrix::from_fn(n, n, |i, j| psi.values[i] * phi.values[j].conj());
        Ok(Self { grid: psi.grid, matrix: m })
    }

    /// Operator product, `int K1(x, z) K2(z, y) dz`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let m = (&self.matrix * &other.matrix) * Complex64::new(self.grid.dx(), 0.0);
        Ok(Self { grid: self.grid, matrix: m })
    }

    pub fn adjoint(&self) -> Self {
        Self { grid: self.grid, matrix: self.matrix.adjoint() }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.matrix.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        (&self.matrix - self.matrix.adjoint()).iter().all(|v| v.norm() <= tol * scale)
    }

    /// `int K(x, x) dx`.
    pub fn trace(&self) -> Complex64 {
        self.matrix.diagonal().iter().sum::<Complex64>() * self.grid.dx()
    }
}

/// Periodic sequence evaluated at `index + shift` by band-limited
/// interpolation. The Nyquist mode has no unique shifted value and is dropped.
fn shift_periodic(seq: &[Complex64], shift: f64) -> Vec<Complex64> {
    let n = seq.len();
    let mut buf = seq.to_vec();
    fft(&mut buf);
    for (m, v) in buf.iter_mut().enumerate() {
        if m == n / 2 {
            *v = Complex64::new(0.0, 0.0);
            continue;
        }
        let mm = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
        *v *= Complex64::from_polar(1.0 / n as f64, 2.0 * PI * mm * shift / n as f64);
    }
    ifft(&mut buf);
    buf
}

fn parity(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Weyl map: `kappa(x, y) = (1/2 pi hbar) int f((x+y)/2, p) e^{i p (x-y)/hbar} dp`.
pub fn kernel_from_symbol(f: &SampledSymbol) -> OperatorKernel {
    let g = f.grid;
    let n = g.n();
    let half = (n / 2) as i64;
    let scale = 1.0 / (n as f64 * g.dx());
    // offset coefficients G[c, k]; column kk holds offset k = kk - n/2
    let mut gm = DMatrix::<Complex64>::zeros(n, n);
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for l in 0..n {
            row[l] = f.values[(c, l)] * parity(l);
        }
        fft(&mut row);
        for kk in 0..n {
            gm[(c, kk)] = row[kk] * (scale * parity(kk));
        }
    }
    let mut k = DMatrix::<Complex64>::zeros(n, n);
    let ni = n as i64;
    let idx = |v: i64| v.rem_euclid(ni) as usize;
    for kk in 0..n {
        let off = kk as i64 - half;
        if off % 2 == 0 {
            let r = off / 2;
            for c in 0..ni {
                k[(idx(c - r), idx(c + r))] = gm[(c as usize, kk)];
            }
        } else {
            let col: Vec<Complex64> = gm.column(kk).iter().copied().collect();
            let shifted = shift_periodic(&col, 0.5);
            for c in 0..ni {
                k[(idx(c - (off - 1) / 2), idx(c + (off + 1) / 2))] = shifted[c as usize];
            }
        }
    }
    OperatorKernel { grid: g, matrix: k }
}

/// Inverse Weyl map: `f(x, p) = int kappa(x + s/2, x - s/2) e^{-i p s/hbar} ds`.
pub fn symbol_from_kernel(k: &OperatorKernel) -> SampledSymbol {
    let g = k.grid;
    let n = g.n();
    let ni = n as i64;
    let half = ni / 2;
    let idx = |v: i64| v.rem_euclid(ni) as usize;
    let mut gm = DMatrix::<Complex64>::zeros(n, n);
    for kk in 0..n {
        let off = kk as i64 - half;
        if off % 2 == 0 {
            let r = off / 2;
            for c in 0..ni {
                let a = k.matrix[(idx(c - r), idx(c + r))];
                gm[(c as usize, kk)] = if off == -half {
                    // the offset -n/2 has no +n/2 partner; symmetrize so that
                    // Hermitian kernels give real symbols
                    0.5 * (a + k.matrix[(idx(c + r), idx(c - r))])
                } else {
                    a
                };
            }
        } else {
            let seq: Vec<Complex64> = (0..ni)
                .map(|c| k.matrix[(idx(c - (off - 1) / 2), idx(c + (off + 1) / 2))])
                .collect();
            let shifted = shift_periodic(&seq, -0.5);
            for c in 0..n {
                gm[(c, kk)] = shifted[c];
            }
        }
    }
    let dx = g.dx();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for kk in 0..n {
            row[kk] = gm[(c, kk)] * parity(kk);
        }
        ifft(&mut row);
        for l in 0..n {
            out[(c, l)] = row[l] * (dx * parity(l));
        }
    }
    SampledSymbol { grid: g, values: out, label: "symbol".into() }
}

fn check_normalized(psi: &Field1D) -> Result<()> {
    if psi.axis != Axis::Position {
        return Err(Error::InvalidParameter("wavefunction must live on the position axis".into()));
    }
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Wigner function before the imaginary part is dropped.
pub fn wigner_raw(psi: &Field1D) -> Result<SampledSymbol> {
    check_normalized(psi)?;
    let k = OperatorKernel::outer(psi, psi)?;
    let hb = psi.grid.hbar();
    Ok(symbol_from_kernel(&k).scale(Complex64::new(1.0 / (2.0 * PI * hb), 0.0)).with_label("wigner"))
}

/// `rho(x, p) = (1/2 pi hbar) int psi(x + y/2) conj(psi(x - y/2)) e^{-i y p/hbar} dy`.
pub fn wigner_from_wavefunction(psi: &Field1D) -> Result<SampledSymbol> {
    Ok(wigner_raw(psi)?.map(|v| Complex64::new(v.re, 0.0)))
}

/// `int rho a dx dp` as a Riemann sum.
pub fn expectation(rho: &SampledSymbol, a: &SampledSymbol) -> Result<Complex64> {
    Ok(rho.mul(a)?.integral())
}

/// `(1/2 pi hbar) e^{i (x_f - x_0) p / hbar} delta(x - (x_f + x_0)/2)`, kept
/// analytic: the delta is never sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NondiagSymbol {
    pub x0: f64,
    pub xf: f64,
    pub hbar: f64,
}

pub fn nondiag_symbol(x0: f64, xf: f64, hbar: f64) -> NondiagSymbol {
    NondiagSymbol { x0, xf, hbar }
}

impl NondiagSymbol {
    /// Where the delta sits.
    pub fn center(&self) -> f64 {
        0.5 * (self.x0 + self.xf)
    }

    /// Momentum-dependent factor `(1/2 pi hbar) e^{i (x_f - x_0) p / hbar}`.
    pub fn phase(&self, p: f64) -> Complex64 {
        Complex64::from_polar(1.0 / (2.0 * PI * self.hbar), (self.xf - self.x0) * p / self.hbar)
    }

    /// `int int rho_{f,0} F dx dp` for `F(center, p) = pref exp[i(a p^2 + b p + c)]`.
    pub fn pair_gaussian(&self, pref: Complex64, g: &GaussianExponent) -> Result<Complex64> {
        let shifted = GaussianExponent::new(g.a, g.b + (self.xf - self.x0) / self.hbar, g.c);
        Ok(pref * fresnel_integral(&shifted)? / (2.0 * PI * self.hbar))
    }

    /// Same pairing by Gauss-Legendre quadrature over `[-p_cut, p_cut]`, for
    /// integrands that decay in `p`.
    pub fn pair_numeric(&self, f: impl Fn(f64, f64) -> Complex64, p_cut: f64, nodes: usize) -> Complex64 {
        let x = self.center();
        crate::numerics::quadrature::integrate_gl(|p| self.phase(p) * f(x, p), -p_cut, p_cut, nodes)
    }
}
