//! Exact confluence certificates for directed colimits of sequences of free
//! abelian groups `Z^r` and of simplicial groups (`Z^r` with the pointwise
//! order).
//!
//! Two sequences have isomorphic colimits exactly when they are connected by
//! a back-and-forth chain of maps `f_n`, `g_n` commuting with the transition
//! maps at every finite stage. This crate verifies such chains, searches for
//! them within an explicit budget, evaluates the induced isomorphism on
//! colimit elements, and collects invariant-level evidence against
//! isomorphism when no chain exists.
//!
//! All arithmetic is exact. The core types are generic over the integer type
//! (see [`ExactInt`]); the aliases at the crate root fix it to [`BigInt`],
//! which is what the CLI and file formats use.

pub mod cli;
pub mod colimit;
pub mod confluence;
pub mod diagram;
pub mod formats;
pub mod ints;
pub mod invariants;

pub use num_bigint::BigInt;

pub use colimit::{ColimitElement, Trilean};
pub use confluence::{ConfluenceCertificate, SearchBudget};
pub use diagram::{Mode, Period, SequenceDiagram};
pub use ints::{ExactInt, Matrix};
pub use invariants::SupernaturalNumber;

/// Arbitrary-precision integer matrix.
pub type IntMatrix = Matrix<BigInt>;
/// Fixed-width matrix, for small examples where overflow is ruled out.
pub type SmallMatrix = Matrix<i64>;
/// Sequence diagram with arbitrary-precision transitions.
pub type Diagram = SequenceDiagram<BigInt>;
/// Colimit element with an arbitrary-precision representative.
pub type Element = ColimitElement<BigInt>;
/// Confluence certificate with arbitrary-precision maps.
pub type Certificate = ConfluenceCertificate<BigInt>;
