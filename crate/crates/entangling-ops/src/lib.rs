//! Two-party quantum operations as states, and states as operations.
//!
//! This crate implements the channel-state duality for bipartite quantum
//! operations and everything needed to put it to work:
//!
//! * [`operator`] — dense complex operators on labeled tensor factors,
//!   with partial trace, partial transpose, embedding, Hermitian
//!   eigendecomposition, and a JSON codec.
//! * [`states`] — pure states, Bell structure, Schmidt decomposition,
//!   entropy of entanglement, and the four-qubit resource family used by
//!   the measurement protocol.
//! * [`channels`] — Kraus-form channels, their Choi operators, the
//!   positive-partial-transpose test, and classification of operations as
//!   entangling or separable.
//! * [`gates`] — the two-qubit phase-gate family, Pauli and canonical
//!   (Cartan) decompositions of two-qubit Hamiltonians, and dyadic phase
//!   approximation.
//! * [`protocol`] — the escalating Bell-measurement protocol that applies
//!   a phase gate with certainty while consuming a fraction of an ebit,
//!   plus its cost accounting and Monte Carlo harness.
//! * [`cli`] — the command-line front end (`constants`,
//!   `analyze-channel`, `simulate`, `expected-cost`, `decompose`,
//!   `approx-phase`).
//!
//! The `examples/` directory exercises each capability end to end; start
//! with `cargo run --example constants`.

pub mod channels;
pub mod cli;
pub mod error;
pub mod gates;
pub mod operator;
pub mod protocol;
pub mod states;

pub use channels::{ChoiOperator, Classification, EntanglingVerdict, QuantumChannel, TraceFlag};
pub use error::Error;
pub use gates::{CanonicalForm, PauliDecomposition, PhaseGate};
pub use operator::{Operator, C64};
pub use protocol::{CostReport, MonteCarloSummary, ProtocolTrace, StepRecord};
pub use states::{PureState, SchmidtForm};

/// Convenience alias used throughout: every result in this crate fails with [`Error`].
pub type Result<T> = std::result::Result<T, Error>;
