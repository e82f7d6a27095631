//! Star exponentials `Exp*(-itH/hbar)`: closed forms, the transform from a
//! propagator and back, and spectral inversion to Wigner functions.
//!
//! The pairing between the star exponential and the Wigner functions of the
//! levels is `Exp* = 2 pi hbar sum_n e^{-i E_n t/hbar} rho_n` for unit-normalized
//! `rho_n`, and for continuous spectra
//! `rho_E = (2 pi hbar)^{-2} int Exp* e^{i E t/hbar} dt`.

mod levels;
mod transform;

pub use levels::{
    circle_level, fd_partial_sum, ho_level, project_level, wigner_continuous, wigner_continuous_extrapolated,
    SpectralSlice,
};
pub use transform::{
    propagator_from_star_exp, star_exp_field, star_exp_from_propagator, star_exp_from_propagator_complex, Route,
};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::grid::PhaseGrid;
use crate::numerics::special::sinc;
use crate::propagators::{Family, PropagatorSpec, CAUSTIC_WINDOW};
use crate::weyl::SampledSymbol;

/// Families with a closed-form star exponential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFamily {
    Free { m: f64 },
    HarmonicOscillator { m: f64, omega: f64 },
    /// `H = p^2 + q`.
    Linear,
    Circle { inertia: f64, n_max: usize },
}

/// A closed-form star exponential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarExponentialClosedForm {
    pub family: ClosedFamily,
    pub hbar: f64,
}

impl StarExponentialClosedForm {
    pub fn new(family: ClosedFamily, hbar: f64) -> Result<Self> {
        // reuse the propagator validation for the parameters
        PropagatorSpec::new(family.to_family(), hbar)?;
        Ok(Self { family, hbar })
    }

    pub fn free(m: f64, hbar: f64) -> Result<Self> {
        Self::new(ClosedFamily::Free { m }, hbar)
    }

    pub fn harmonic(m: f64, omega: f64, hbar: f64) -> Result<Self> {
        Self::new(ClosedFamily::HarmonicOscillator { m, omega }, hbar)
    }

    pub fn linear(hbar: f64) -> Result<Self> {
        Self::new(ClosedFamily::Linear, hbar)
    }

    pub fn circle(inertia: f64, n_max: usize, hbar: f64) -> Result<Self> {
        Self::new(ClosedFamily::Circle { inertia, n_max }, hbar)
    }

    /// The family's propagator, if it has one among the closed forms.
    pub fn from_spec(spec: &PropagatorSpec) -> Result<Self> {
        let family = match spec.family {
            Family::Free { m } => ClosedFamily::Free { m },
            Family::HarmonicOscillator { m, omega } => ClosedFamily::HarmonicOscillator { m, omega },
            Family::LinearPotential => ClosedFamily::Linear,
            Family::Circle { inertia, n_max } => ClosedFamily::Circle { inertia, n_max },
            _ => {
                return Err(Error::UnsupportedFamily(format!(
                    "no closed-form star exponential for {}",
                    spec.family.name()
                )))
            }
        };
        Self::new(family, spec.hbar)
    }

    pub fn spec(&self) -> PropagatorSpec {
        PropagatorSpec { family: self.family.to_family(), hbar: self.hbar }
    }

    pub fn name(&self) -> &'static str {
        self.family.to_family().name()
    }

    /// Classical Hamiltonian; the circle's is `p^2 / 2I`.
    pub fn hamiltonian(&self, q: f64, p: f64) -> f64 {
        match self.family {
            ClosedFamily::Free { m } => p * p / (2.0 * m),
            ClosedFamily::HarmonicOscillator { m, omega } => p * p / (2.0 * m) + 0.5 * m * omega * omega * q * q,
            ClosedFamily::Linear => p * p + q,
            ClosedFamily::Circle { inertia, .. } => p * p / (2.0 * inertia),
        }
    }

    /// `Exp*(-itH/hbar)(q, p)` at a complex time with `Im t <= 0`.
    pub fn eval(&self, q: f64, p: f64, t: Complex64) -> Result<Complex64> {
        let hb = self.hbar;
        let i = Complex64::i();
        let h = self.hamiltonian(q, p);
        let v = match self.family {
            ClosedFamily::Free { .. } => (-i * t * h / hb).exp(),
            ClosedFamily::HarmonicOscillator { omega, .. } => {
                let half = 0.5 * omega * t;
                let k = ((half.re - PI / 2.0) / PI).round();
                if (half - (k * PI + PI / 2.0)).norm() < CAUSTIC_WINDOW {
                    return Err(Error::CausticSingularity(format!(
                        "omega t = {} is an odd multiple of pi",
                        2.0 * half.re
                    )));
                }
                (-i * (2.0 * h / (hb * omega)) * half.tan()).exp() / half.cos()
            }
            ClosedFamily::Linear => (-i * t * (q + p * p + t * t / 12.0) / hb).exp(),
            ClosedFamily::Circle { inertia, n_max } => {
                let nm = n_max as i64;
                (-nm..=nm)
                    .map(|n| {
                        let nf = n as f64;
                        (-i * hb * nf * nf * t / (2.0 * inertia)).exp() * sinc(PI * (p / hb - nf))
                    })
                    .sum()
            }
        };
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite("star exponential"));
        }
        Ok(v)
    }

    /// Samples at a fixed time.
    pub fn sample(&self, grid: PhaseGrid, t: Complex64) -> Result<SampledSymbol> {
        let n = grid.n();
        let (xs, ps) = (grid.xs(), grid.ps());
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            for l in 0..n {
                m[(i, l)] = self.eval(xs[i], ps[l], t)?;
            }
        }
        SampledSymbol::new(grid, m, format!("star_exp_{}", self.name()))
    }

    /// Level energies for discrete families.
    pub fn energy(&self, n: i64) -> Result<f64> {
        match self.family {
            ClosedFamily::HarmonicOscillator { omega, .. } => {
                if n < 0 {
                    return Err(Error::InvalidParameter("oscillator levels start at 0".into()));
                }
                Ok(self.hbar * omega * (n as f64 + 0.5))
            }
            ClosedFamily::Circle { inertia, .. } => Ok(self.hbar * self.hbar * (n * n) as f64 / (2.0 * inertia)),
            _ => Err(Error::UnsupportedFamily(format!("{} has a continuous spectrum", self.name()))),
        }
    }
}

impl ClosedFamily {
    fn to_family(self) -> Family {
        match self {
            ClosedFamily::Free { m } => Family::Free { m },
            ClosedFamily::HarmonicOscillator { m, omega } => Family::HarmonicOscillator { m, omega },
            ClosedFamily::Linear => Family::LinearPotential,
            ClosedFamily::Circle { inertia, n_max } => Family::Circle { inertia, n_max },
        }
    }
}
