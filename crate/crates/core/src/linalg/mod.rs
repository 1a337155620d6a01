//! Exact scalar arithmetic and graded linear algebra.

mod field;
mod graded;
mod matrix;
mod tensor;

pub use field::{is_prime, Field, FieldSpec, PrimeField, Rationals};
pub use graded::{injections, projections, Cokernel, GradedLinearMap, GradedVectorSpace, Kernel};
pub use matrix::{Matrix, Rref};
pub use tensor::{tensor, Regrouped, TensorSpace, Tuple};
