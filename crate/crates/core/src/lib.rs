//! Exact analysis of the asymmetric annihilation process on `L` sites.
//!
//! The crate builds the Markov generators of the process and of its
//! generalization `M_L(alpha, beta) = A_L(alpha) - B_L(beta)`, conjugates
//! them by a rearranged Walsh-Hadamard transform into lower-triangular
//! form, and checks the closed-form spectrum, characteristic polynomial,
//! steady state, partition function and transfer matrices against
//! independent exact computations. All arithmetic is exact.

pub mod bits;
pub mod error;
pub mod exact;
pub mod operators;
pub mod sample;
pub mod simulate;
pub mod spectrum;
pub mod steady;
pub mod suite;
pub mod transfer;
pub mod transform;

pub use bits::{BitState, DeltaMap};
pub use error::{Error, Result};
pub use exact::{BigRational, ExactScalar, FactorProduct, FactoredRational, LinearForm, Matrix, Poly, Symbol, UniPoly};
pub use operators::Params;
