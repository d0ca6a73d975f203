//! Truncated Fock-space toolkit for engineering superpositions of coherent
//! states.
//!
//! The crate builds displaced squeezed superpositions of two coherent states
//! (even and odd "cat" states), simulates the photon-addition/displacement
//! circuits that approximate them, optimizes the circuit parameters for
//! fidelity, derives the settings of a displacing Hadamard-style gate for
//! coherent-state qubits, and evaluates Wigner functions both analytically
//! and numerically.
//!
//! Module map:
//! - [`fock`]: states, operators, and norm-preserving displacement/squeeze
//!   application on a truncated Fock space.
//! - [`states`]: coherent states, cat superpositions, their displaced
//!   squeezed targets, and displaced-number-basis representations.
//! - [`circuit`]: the addition/displacement circuit, its coefficient algebra
//!   and inversions, the gate construction, and a simple noise model.
//! - [`optimizer`]: closed-form fidelity evaluation, simplex maximization,
//!   and reproduction of the bundled reference tables.
//! - [`reference`]: the bundled parameter tables the optimizer is checked
//!   against.
//! - [`wigner`]: analytic Wigner catalog, numeric evaluator, grids and
//!   marginals.
//! - [`verify`]: identity suite usable as a truncation canary.

pub mod circuit;
pub mod error;
pub mod fock;
pub mod optimizer;
pub mod reference;
pub mod ser;
pub mod states;
pub mod verify;
pub mod wigner;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, OperatorMatrix, StateVector, DEFAULT_DIM, MAX_SQUEEZE};
pub use states::{HalfFinished, TargetCat};
