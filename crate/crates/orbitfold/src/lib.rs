//! Exact computer algebra for a flat-pencil / Frobenius construction on the
//! orbit space of the hyperoctahedral group B_n.
//!
//! All arithmetic is exact (arbitrary-precision rationals); every claimed
//! identity is verified symbolically or at exact rational sample points,
//! never numerically.

pub mod chart;
pub mod classical;
pub mod dual;
pub mod error;
pub mod frobenius;
pub mod hierarchy;
pub mod invariants;
pub mod matrix;
pub mod pencil;
pub mod poly;
pub mod ratfun;
pub mod saito;
pub mod scalar;
pub mod tensor;
