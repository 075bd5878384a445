//! Exact linear algebra over Q and F_p plus integer-lattice computations.
//!
//! Everything is dense: the degree slices this library works with stay
//! small, and exactness matters more than sparsity. Integer routines use
//! arbitrary-precision entries throughout; pivots are chosen as the first
//! entry of minimal nonzero absolute value in a row-major scan, which keeps
//! every basis reproducible.

mod abelian;
mod int;
mod matrix;

pub use abelian::{quotient_type, subquotient_invariants, AbelianGroupType};
pub use int::{hnf_rows, integer_kernel, inverse_unimodular, smith_normal_form, solve_integer, SmithForm};
pub use matrix::ExactMatrix;
