//! Construction and verification of a six-qubit probabilistic-cloning unitary,
//! together with a small compiler that lowers any unitary on up to six qubits
//! to two-level unitaries, multi-controlled gates and finally CNOT plus
//! single-qubit gates.
//!
//! Qubit 0 is always the most significant bit of a basis index, so the basis
//! `|x0 x1 ... x(n-1)>` sits at index `sum x_k 2^(n-1-k)`.

pub mod cli;
pub mod cloning;
pub mod error;
pub mod ir;
pub mod linalg;
pub mod simulator;
pub mod synthesis;

pub use error::{Error, Result};
pub use num_complex::Complex64;
