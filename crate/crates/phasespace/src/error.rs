use thiserror::Error;

/// Errors raised by the library. Variants split into configuration problems
/// and numerical-domain problems; see [`Error::is_domain`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("grid too large: n = {n}, this route accepts n <= {max}")]
    GridTooLarge { n: usize, max: usize },
    #[error("polynomial degree {degree} exceeds the bound {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("unsupported family for this operation: {0}")]
    UnsupportedFamily(String),
    #[error("unsupported Hamiltonian: {0}")]
    UnsupportedHamiltonian(String),
    #[error("wavefunction not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("quadratic coefficient vanishes")]
    DegenerateQuadratic,
    #[error("Fresnel branch cannot be resolved: Im(a) = {im_a} is below the real axis")]
    BranchAmbiguity { im_a: f64 },
    #[error("Laguerre order {n} beyond the stable range (max 64)")]
    OrderTooLarge { n: usize },
    #[error("argument {x} outside the implemented range")]
    OutOfRange { x: f64 },
    #[error("series does not converge: {0}")]
    NonConvergent(String),
    #[error("caustic singularity: {0}")]
    CausticSingularity(String),
    #[error("zero propagation time")]
    ZeroTime,
    #[error("caustic at the endpoint: |phi(t_f)| = {phi}")]
    CausticAtEndpoint { phi: f64 },
    #[error("slice composition crossed a caustic at slice {slice}")]
    CausticCrossing { slice: usize },
    #[error("integration window too small: tail {tail:e}")]
    WindowTooSmall { tail: f64 },
    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

impl Error {
    /// True for errors caused by the mathematics (caustics, branch cuts,
    /// divergent sums), false for malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::DegenerateQuadratic
                | Error::BranchAmbiguity { .. }
                | Error::OrderTooLarge { .. }
                | Error::OutOfRange { .. }
                | Error::NonConvergent(_)
                | Error::CausticSingularity(_)
                | Error::ZeroTime
                | Error::CausticAtEndpoint { .. }
                | Error::CausticCrossing { .. }
                | Error::WindowTooSmall { .. }
                | Error::NonFinite(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
