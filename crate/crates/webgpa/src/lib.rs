//! Exact evaluation of SL(n) web diagrams in the graph planar algebra of an
//! affine building.
//!
//! The crate builds two models of the building graph (the sl_n weight
//! lattice, and lattice classes over Q_q for a prime q), evaluates web
//! diagrams on boundary path pairs by counting internal labelings, and
//! checks the defining diagram relations exactly over Q or F_p. A functor
//! layer exposes the same data as natural-transformation matrices and fiber
//! functor matrices.

pub mod bruhat_tits;
pub mod coeffs;
pub mod error;
pub mod eval;
pub mod field;
pub mod functor;
pub mod graph;
pub mod parser;
pub mod projgeom;
pub mod relations;
#[doc(hidden)]
pub mod testutil;
pub mod web;
pub mod weight_lattice;

pub use error::{Error, Result};
pub use field::{CoeffField, FieldSpec, PrimeField, Rationals};

/// Exact integers used for all combinatorial counts.
pub type Int = num::BigInt;
/// Exact rational scalars (the characteristic-zero coefficient field).
pub type Rat = num::BigRational;
/// Elements of a runtime prime field, least nonnegative representatives.
pub type FpElem = u64;
