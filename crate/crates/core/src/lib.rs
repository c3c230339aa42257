//! Finitary algebraic theories over finite rigs.
//!
//! Operations on a finite carrier are stored as [`OpTable`]s, tables indexed
//! by little-endian tuple codes. On top of these the crate provides matrix
//! theories over rigs and their Kronecker products, closure of generator sets
//! into clones, commutant search, and preordered rings with the affine
//! extension property.
//!
//! ```
//! use clonelab::theories::{theory_generators, theory_slice, TheoryName};
//! use clonelab::{clones_equal_at_arity, commutant, SearchOptions};
//!
//! let aff = TheoryName::parse("aff@zmod3", None)?;
//! let pointed = TheoryName::parse("pointed@zmod3", None)?;
//! let found = commutant(&theory_generators(&aff)?, 2, &SearchOptions::default())?;
//! assert!(clones_equal_at_arity(&found.slice, &theory_slice(&pointed, 2)?)?);
//! # Ok::<(), clonelab::Error>(())
//! ```

pub mod cli;
pub mod clone;
mod error;
pub mod matrix;
pub mod optable;
pub mod ordered;
pub mod par;
pub mod rig;
pub mod theories;

pub use clone::{
    clones_equal_at_arity, commutant, commutation_witness, generate_clone, generate_clone_with,
    multiop_commutes, op_commutes, CloneSlice, CommutantResult, GeneratorSet, SearchOptions,
    DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use matrix::{kron_first, kron_second, mat_mul, matrices_commute, RigMatrix};
pub use optable::{MultiOp, OpTable, Side};
pub use ordered::DadicFraction;
pub use par::Execution;
pub use rig::{FiniteRig, RigHandle, StandardRig, Value};
