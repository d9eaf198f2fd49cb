//! Exact computer algebra for Lifting cocycles.
//!
//! The crate is organised bottom-up:
//!
//! * [`symbol`]: formal pseudodifferential symbols in `n` variables with exact
//!   rational coefficients, the noncommutative residue and the logarithmic
//!   outer derivations `ad(ln x_i)`, `ad(ln ∂_i)`.
//! * [`matrix`]: finite matrices over symbols, augmented by scalar-identity
//!   components `Id ⊗ D`, with the composite trace.
//! * [`lifting`]: the combinatorics (marked intervals, even sequences, marked
//!   circles) and the evaluators of the Lifting cochains.
//! * [`ce`]: Chevalley–Eilenberg coboundary, boundary, contraction and exact
//!   cycle search.
//! * [`repro`]: scripted experiments comparing computed values against the
//!   published ones.
//! * [`parse`]: the textual operator syntax used by the command line tool.
//!
//! Everything is exact. No floating point is used anywhere in the evaluation
//! path.

pub mod ce;
pub mod error;
pub mod lifting;
pub mod matrix;
pub mod parse;
pub mod rational;
pub mod repro;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{AugmentedOp, FinMatrix};
pub use rational::Rational;
pub use symbol::{Derivation, Monomial, PsiSymbol, TruncationPolicy};
