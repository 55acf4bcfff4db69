//! Multiphoton transport between two remote resonators coupled through a
//! resonator chain, with an auxiliary resonator that switches the chain
//! between transmitting and reflecting.
//!
//! - [`lattice`]: network parameters, coupling matrix, chain modes.
//! - [`dynamics`]: exact and effective-model propagators.
//! - [`transport`]: Fock, superposition and Haar-averaged fidelities.
//! - [`bounds`]: perturbative leakage and infidelity upper bounds.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod transport;

pub use bounds::{BoundInput, BoundReport, Regime};
pub use dynamics::{EffectiveAmplitudes, Propagator, Spectral};
pub use error::{Error, Result};
pub use lattice::{ChainSpectrum, CouplingMatrix, ModeCouplings, NetworkConfig};
pub use num_complex::Complex64;
pub use transport::{FCoefficients, HaarEstimate, InputKind, InputState, SuperpositionState, TransportReport};
