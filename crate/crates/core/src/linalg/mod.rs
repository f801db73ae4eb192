//! Exact dense linear algebra over Q and F_p.

pub mod echelon;
pub mod matrix;
pub mod scalar;

pub use echelon::{quotient_basis, rref_rows, Echelon, Quotient, Rref, Subspace};
pub use matrix::{add_scaled, is_zero_vector, rank_of, sub_vectors, Matrix};
pub use scalar::{is_prime, FieldSpec, Scalar, MAX_PRIME};
