//! Error type shared across all modules.

use thiserror::Error;

/// Errors produced by configuration validation and the numeric routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Inconsistent physical scenario (list lengths, signs, grids).
    #[error("configuration error: {0}")]
    Config(String),

    /// Closed forms exist only for 3-, 5- and 7-state atoms.
    #[error("unsupported chain length: n_ground = {0} (supported: {1})")]
    UnsupportedChainLength(usize, &'static str),

    /// Input degenerate for the requested operation (zero vector, zero Rabi
    /// frequency, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Linear system singular to working precision.
    #[error("singular linear system (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    SingularSystem { pivot: f64, threshold: f64 },

    /// Finite-difference step too large for the requested derivative.
    #[error("step size {step:.3e} too large (must be <= {max:.3e})")]
    StepSize { step: f64, max: f64 },

    /// Requested Lindblad mode unavailable for this chain length.
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    /// Dissipation-free (or otherwise degenerate) generator has no unique
    /// steady state.
    #[error("steady state is not unique (degenerate steady-state manifold)")]
    NonUniqueSteadyState,

    /// 1 + chi lies on the branch cut of the complex square root.
    #[error("refractive index branch cut: Re(1 + chi) = {0:.3e} <= 0")]
    BranchCut(f64),

    /// Time integration left the physical state manifold.
    #[error("integration instability: {0}")]
    IntegrationInstability(String),

    /// A density matrix violated its Hermiticity/trace/positivity bounds.
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
