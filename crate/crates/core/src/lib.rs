//! Exact computations over the two-element field for restricted vector
//! spaces, their chain complexes and simplicial objects, the algebra of
//! higher divided squares, and the homotopy of free unstable algebras.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs: no IO, no randomness, no global state.
//!
//! Module map:
//!
//! * [`f2`] dense bit-packed linear algebra (rank, kernels, solving, complements)
//! * [`restricted`] restricted vector spaces and their decomposition into `F(n)`/`T(n,k)`
//! * [`rchain`] chain complexes, simplicial objects and the Dold–Kan functors
//! * [`delta`] admissible sequences, Adem rewriting and monomial-basis enumeration
//! * [`grading`] bigraded dimension tables and truncated Hilbert series
//! * [`unstable`] the free unstable algebra functor, its homotopy (closed form and oracle)
//! * [`loopspace`] generators of the suspension-spectrum E2-page and of `H_*(QX)`
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod delta;
pub mod error;
pub mod f2;
pub mod grading;
pub mod loopspace;
pub mod rchain;
pub mod restricted;
pub mod unstable;

pub use error::{Error, Result};
pub use f2::{F2Matrix, F2Vector, Subspace};
pub use grading::{BigradedDims, HilbertSeries};
pub use restricted::{RVSDecomposition, RVSMap, RestrictedVS, Summand};
