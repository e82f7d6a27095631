//! Grids, Fourier conventions, Fresnel integrals, special functions and ODEs.

pub mod fourier;
pub mod fresnel;
pub mod grid;
pub mod ode;
pub mod quadrature;
pub mod special;

pub use fourier::{fourier_p_to_x, fourier_x_to_p};
pub use fresnel::{fresnel_integral, GaussianExponent};
pub use grid::{Axis, Field1D, PhaseGrid};
pub use ode::{integrate_ode_2nd, OdeEnd};
pub use special::{airy_ai, airy_ai_prime, laguerre, sinc, theta3, theta3_damped};

pub use num_complex::Complex64 as C64;
