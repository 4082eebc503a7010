//! Exact counting of winning strategies in first-order model-checking
//! games, proof-tree counting for constant-depth circuits, and compilers
//! between the two, together with the threshold-level constructions that
//! compare such counts.
//!
//! The crate is organized around a small pipeline:
//!
//! - [`logic`]: vocabularies, finite structures, word models, prenex
//!   formulas, and Boolean model checking.
//! - [`counting`]: the sum-product strategy count and two brute-force
//!   oracles (explicit game trees, Skolem-function enumeration).
//! - [`circuit`]: a DAG circuit IR with validation, evaluation,
//!   proof-tree counting, and the alternation/unfolding normalizers.
//! - [`compile`]: formulas to counting circuits and back.
//! - [`interp`]: first-order interpretations, count-preserving
//!   substitution, composition, and reductions.
//! - [`uniform`]: interpretation-defined circuit families and their
//!   instantiation.
//! - [`threshold`]: the two-sorted counting logic, count comparison,
//!   padded concatenation, and oracle circuits.
//! - [`corpus`] and [`difftest`]: seeded random instances and the
//!   cross-module differential test driver.
//!
//! Every quantity is an exact integer or boolean; all checks are
//! equalities, never approximations.

pub mod error;
pub mod logic;
pub mod counting;
pub mod circuit;
pub mod compile;
pub mod interp;
pub mod uniform;
pub mod threshold;
pub mod corpus;
pub mod difftest;

pub use error::{Error, Result};
