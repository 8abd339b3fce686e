//! Dense complex linear algebra for dimensions up to a few hundred.
//!
//! Everything here is small and dense: the largest matrix in the crate is
//! 64x64. Storage is row-major `Vec<Complex64>`.

mod mat2;
mod matrix;
mod random;
mod state;
pub mod text;
mod two_level;

pub use mat2::Mat2;
pub use matrix::{PhaseMode, SquareMatrix, UnitaryMatrix};
pub use random::{random_state, random_unitary, random_unitary2};
pub use state::StateVector;
pub use two_level::TwoLevelUnitary;

use num_complex::Complex64;

/// Largest admissible `max |(M^dag M - I)_ij|` for a matrix to count as unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Equality tolerance for analytic identities (involutions, kron mixing, ...).
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Unit complex number `e^{i theta}`.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}
