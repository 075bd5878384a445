//! Exact-arithmetic computations around the cohomology ofBPU(p).
//!
//! The crate builds, degree by degree, the algebraic objects attached to
//! the projective unitary group PU(p) for an odd prime p: the kernel ring
//! K_n of the derivation sum-of-partials on symmetric polynomials, the
//! ideal I_p cut out by the weighted evaluation t_i -> i eta, the
//! SL_2(F_p)-invariants of the rank-two elementary abelian subgroup's
//! cohomology (Dickson and Mui generators), and the presented rings that
//! describe H*(BPU(p)) integrally and mod p. Every claim is checked by
//! exact linear algebra over Z, Q or F_p; nothing floats.

pub mod cache;
pub mod error;
pub mod gamma;
pub mod kernels;
pub mod linalg;
pub mod par;
pub mod present;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod symmetric;

pub use error::{Error, Result};
