//! Pure-state simulation of a quantum-dot spin in a weak-coupling micropillar
//! cavity used as a spin-photon interface.
//!
//! The cavity reflects a circularly polarized photon when the photon spin
//! matches the coupled dipole transition of the electron spin and transmits
//! it (with a π phase) otherwise. On top of that primitive the crate builds a
//! photon-spin CNOT gate, a multi-photon entangler that prepares GHZ states,
//! and a complete two-photon Bell-state analyzer, under an ideal or a lossy
//! cavity model.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod cavity;
pub mod circuitdsl;
mod error;
pub mod measurement;
pub mod optics;
pub mod protocols;
pub mod qstate;
mod scalar;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use scalar::{Amp, Real};

pub type StateVector64 = qstate::StateVector<f64>;
pub type StateVector32 = qstate::StateVector<f32>;
pub type OperatorMatrix64 = qstate::OperatorMatrix<f64>;
pub type InteractionModel64 = cavity::InteractionModel<f64>;
pub type ContrastParams64 = cavity::ContrastParams<f64>;
pub type CavityParams64 = cavity::CavityParams<f64>;
pub type Pipeline64 = optics::Pipeline<f64>;
pub type ProtocolResult64 = protocols::ProtocolResult<f64>;
pub type CompiledCircuit64 = circuitdsl::CompiledCircuit<f64>;
pub type Distribution64<K> = measurement::Distribution<K, f64>;
