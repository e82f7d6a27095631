use std::f64::consts::PI;
use std::ops::Range;

use libm::erf;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform discretization of a one-dimensional phase space.
///
/// Positions sit at cell centers, `x_i = x_min + (i + 1/2) dx`. The momentum
/// axis is the FFT-conjugate grid `p_l = (l - n/2) dp` with
/// `dp = 2 pi hbar / (n dx)`, so it contains `-p_max` but not `+p_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
    hbar: f64,
}

impl PhaseGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize, hbar: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} must be a power of two >= 8")));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!("empty interval [{x_min}, {x_max}]")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidGrid(format!("hbar = {hbar} must be positive")));
        }
        Ok(Self { x_min, x_max, n, hbar })
    }

    /// Grid on `[-half_width, half_width]`.
    pub fn centered(half_width: f64, n: usize, hbar: f64) -> Result<Self> {
        Self::new(-half_width, half_width, n, hbar)
    }

    /// Centered grid whose momentum half-range equals its position half-range.
    pub fn square(n: usize, hbar: f64) -> Result<Self> {
        let half = (PI * hbar * n as f64 / 2.0).sqrt();
        Self::centered(half, n, hbar)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }
    pub fn dp(&self) -> f64 {
        2.0 * PI * self.hbar / (self.n as f64 * self.dx())
    }
    pub fn p_max(&self) -> f64 {
        self.dp() * (self.n / 2) as f64
    }
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }
    pub fn p(&self, l: usize) -> f64 {
        (l as f64 - (self.n / 2) as f64) * self.dp()
    }
    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }
    pub fn ps(&self) -> Vec<f64> {
        (0..self.n).map(|l| self.p(l)).collect()
    }
    /// Phase-space cell area `dx dp`.
    pub fn cell(&self) -> f64 {
        self.dx() * self.dp()
    }

    /// Indices of the central half of either axis. Grid-route assertions are
    /// made on this block to stay clear of FFT wraparound.
    pub fn interior(&self) -> Range<usize> {
        self.n / 4..3 * self.n / 4
    }

    pub fn same_as(&self, other: &PhaseGrid) -> bool {
        self == other
    }

    /// Smooth plateau window in x and p, close to 1 on the central half of
    /// the grid and decaying to 0 before the edges. `edge` is the plateau
    /// half-width as a fraction of the half-range, `soft` the transition width
    /// in the same units.
    pub fn plateau(&self, edge: f64, soft: f64) -> impl Fn(f64, f64) -> f64 {
        let xc = 0.5 * (self.x_min + self.x_max);
        let hx = 0.5 * (self.x_max - self.x_min);
        let hp = self.p_max();
        move |x, p| {
            let w = |u: f64, h: f64| {
                0.5 * (erf((u + edge * h) / (soft * h)) - erf((u - edge * h) / (soft * h)))
            };
            w(x - xc, hx) * w(p, hp)
        }
    }
}

/// Complex samples on one axis of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    pub grid: PhaseGrid,
    pub axis: Axis,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Position,
    Momentum,
}

impl Field1D {
    pub fn new(grid: PhaseGrid, axis: Axis, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidParameter(format!(
                "field length {} does not match grid size {}",
                values.len(),
                grid.n()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("Field1D::new"));
        }
        Ok(Self { grid, axis, values })
    }

    /// Sample `f` on the position axis.
    pub fn from_fn_x(grid: PhaseGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n()).map(|i| f(grid.x(i))).collect();
        Self { grid, axis: Axis::Position, values }
    }

    /// `sum |f|^2 d` with `d` the spacing of the field's axis.
    pub fn norm_sqr(&self) -> f64 {
        let d = match self.axis {
            Axis::Position => self.grid.dx(),
            Axis::Momentum => self.grid.dp(),
        };
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * d
    }
}
