//! Numerical phase-space quantum mechanics.
//!
//! Weyl symbols and operator kernels on a discrete phase-space grid, Moyal
//! star products by three independent routes, closed-form and path-integral
//! propagators, and star exponentials obtained from propagators.

pub mod error;
pub mod numerics;
pub mod propagators;
pub mod star;
pub mod starexp;
pub mod validate;
pub mod weyl;

pub use error::{Error, Result};
pub use num_complex::Complex64;

// One module per book chapter, so `cargo test --doc` runs every snippet.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/grids.md")]
    mod grids {}
    #[doc = include_str!("../../../book/src/weyl.md")]
    mod weyl {}
    #[doc = include_str!("../../../book/src/star.md")]
    mod star {}
    #[doc = include_str!("../../../book/src/propagators.md")]
    mod propagators {}
    #[doc = include_str!("../../../book/src/star_exponentials.md")]
    mod star_exponentials {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
}
