//! Dark states, probe susceptibility, intensity-dependent dispersion and
//! group velocity for chain-Lambda multistate atoms under electromagnetically
//! induced transparency, with a full Lindblad master-equation solver to back
//! the closed-form results.
//!
//! A chain-Lambda atom concatenates Lambda systems sharing one probe and one
//! coupling field: `2n - 1` levels `g1, e1, g2, ..., gn`, probe on every
//! `g_j - e_j` transition, coupling on every `g_{j+1} - e_j`. Near two-photon
//! resonance the atom is transparent to the probe while the dispersion it
//! imprints grows steeply (and nonlinearly) with probe intensity; this crate
//! computes those quantities three ways and cross-checks them:
//!
//! * closed forms for the dark state and dispersion of 3-, 5- and 7-state
//!   atoms ([`darkstate`], [`optics`]),
//! * the nearest-zero eigenvector of the chain Hamiltonian for any length
//!   ([`linalg`], [`darkstate`]),
//! * steady states and time evolution of the dissipative master equation
//!   ([`master`]).
//!
//! The numeric kernel is generic over the scalar type via [`scalar::Scalar`]
//! (`f32` or `f64`); the `*64` aliases below pin the common case. Quoted
//! tolerances assume `f64`.
//!
//! ```
//! use chain_lambda::{
//!     build_hamiltonian, dark_state_numeric, dispersion_maximum, ChainConfig64, Detunings64,
//! };
//!
//! // 5-state atom, equal couplings, frequencies in units of Gamma
//! let config = ChainConfig64::equal_couplings(3, 0.25, 0.25, 1.0)?;
//! let h = build_hamiltonian(&config, &Detunings64::resonant());
//! let dark = dark_state_numeric(&h);
//! assert!(dark.excited_component(1).abs() < 1e-12);
//!
//! let (beta, _r_max) = dispersion_maximum::<f64>(3, 0.25)?;
//! assert!((beta - 0.476).abs() < 1e-3);
//! # Ok::<(), chain_lambda::Error>(())
//! ```

// `!(x > 0)`-style checks are deliberate: they reject NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod darkstate;
pub mod error;
pub mod linalg;
pub mod master;
pub mod model;
pub mod optics;
pub mod scalar;

pub use darkstate::{dark_state_analytic, dark_state_numeric, normalize, DarkState};
pub use error::{Error, Result};
pub use linalg::{
    eig_symmetric_tridiagonal, hermitian_eigenvalues, nearest_zero_eigenpair, solve_complex_linear,
    ComplexMatrix, SymmetricTridiagonal,
};
pub use master::{
    absorption_surface, build_liouvillian, dispersion_master, evolve, steady_state,
    susceptibility_from_rho, DensityMatrix, LindbladMode, Liouvillian, SurfaceRow,
};
pub use model::{build_hamiltonian, clebsch_gordan_couplings, kappa, ChainConfig, Detunings};
pub use optics::{
    dispersion_analytic, dispersion_maximum, dispersion_numeric, group_velocity,
    susceptibility_from_state, sweep_dispersion, CouplingMode, DispersionResult,
    GroupVelocityResult, Susceptibility, SweepRow,
};
pub use scalar::Scalar;

/// `f64` aliases for the domain types.
pub type ChainConfig64 = ChainConfig<f64>;
pub type Detunings64 = Detunings<f64>;
pub type SymmetricTridiagonal64 = SymmetricTridiagonal<f64>;
pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type DarkState64 = DarkState<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type Liouvillian64 = Liouvillian<f64>;
pub type Susceptibility64 = Susceptibility<f64>;
pub type DispersionResult64 = DispersionResult<f64>;
pub type GroupVelocityResult64 = GroupVelocityResult<f64>;
