//! Labeled tensor-product Hilbert space: registers, states, operators and bases.

mod basis;
mod operator;
mod register;
mod state;

pub use basis::Basis;
pub use operator::OperatorMatrix;
pub use register::{RegisterKey, RegisterKind, RegisterLabel, LOSS_PREFIX};
pub use state::{fidelity, phase_distance, StateVector};

/// Absolute tolerance for amplitude-level equality in `f64` arithmetic.
pub const AMP_TOL: f64 = 1e-12;
