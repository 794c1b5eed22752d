//! Heisenberg-picture descriptor engine.
//!
//! Each qubit of a register is described by three operators
//! `(q_x, q_y, q_z)` that evolve under gates while the reference state
//! stays `|0…0⟩`. Expectation values, densities, relative descriptors and
//! equivalent descriptor sets are all computed in exact dyadic arithmetic;
//! the [`oracle`] module provides a dense state-vector cross-check.

pub mod circuit;
pub mod density;
pub mod descriptor;
pub mod dyadic;
pub mod error;
pub mod exact;
pub mod gates;
pub mod oracle;
pub mod par;
pub mod pauli;
pub mod protocols;
pub mod relative;
pub mod uniqueness;
pub mod verify;

pub use circuit::{parse_circuit, Circuit, Step};
pub use descriptor::{evolve_circuit, Descriptor, DescriptorSet};
pub use dyadic::{ComplexDyadic, Dyadic};
pub use error::{Error, Result};
pub use gates::{Gate, GateKind};
pub use pauli::{hs_inner, string_mul, sum_mul, PauliLetter, PauliString, PauliSum};
