//! Largest subsets of `{1, ..., N}` avoiding a set of forbidden differences.
//!
//! `D(X, N)` is the size of the largest `A ⊆ {1, ..., N}` in which no two
//! distinct elements differ by a member of `X`. It is computed exactly as one
//! plus the clique number of a compatibility graph on the offsets `1..N-1`.

pub mod cascade;
pub mod cli;
pub mod clique;
pub mod error;
pub mod formulas;
pub mod graph;
pub mod modular;
pub mod sets;
pub mod validate;

pub use cascade::{cascade, compute_d, CascadeOptions, CascadeRecord, DValue, TableRow};
pub use clique::{Budget, CliqueOutcome, CliqueSearch, SearchConfig};
pub use error::{Error, Result};
pub use graph::DiffGraph;
pub use sets::{Family, ForbiddenSet, Polynomial, ResidueSet};
