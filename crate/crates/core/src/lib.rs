//! Atoms of finitely generated σ-algebras and the closure classes around
//! them.
//!
//! The crate computes atom partitions from generator families, closes
//! families under the usual set-algebraic operations (κ, σ, λ, and the
//! finite union/intersection variants), classifies families structurally,
//! and verifies the generator-atom criteria over every small set system.

pub mod atoms;
pub mod cli;
pub mod closure;
pub mod error;
pub mod predicates;
pub mod sets;
pub mod setsys;
pub mod verify;

pub use atoms::{atom_partition, generator_atom, is_hausdorff, naive_atom, refines, Partition};
pub use closure::{close, named_closure, named_closure_with, sigma_via_atoms, ClosureOp, ClosureSpec, NamedClass, Nullary};
pub use error::{Error, Result};
pub use predicates::{classify, hypothesis_t31, kappa_equals_sigma, ClassProfile};
pub use sets::{set_op, EmptyMeetPolicy, SetFamily, SetOpKind, Subset, Universe, MAX_POINTS};
pub use setsys::{parse_set_system, serialize_set_system};
