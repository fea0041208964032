//! Static symmetry breaking for matrix models.
//!
//! The crate provides a small finite-domain constraint solver together with
//! the row, column and value symmetry-breaking constraints commonly posted
//! on matrix models (DoubleLex, SnakeLex, Order1stRowCol, DoubleLexColSum,
//! value precedence and first-occurrence channeling), and an exact
//! canonicalizer that decides whether a complete matrix is the lex-leader of
//! its row x column symmetry class. Benchmark builders and an experiment
//! runner reproduce solution and symmetry-class counts.

pub mod canonical;
pub mod domain;
pub mod error;
pub mod experiment;
pub mod lex;
pub mod matrix;
pub mod model;
pub mod problems;
pub mod propagators;
pub mod search;
pub mod symbreak;

#[cfg(test)]
mod oracle;

pub use canonical::{canonical_form, classify, is_lex_leader, min_col_permutation, ClassReport};
pub use domain::DomainSet;
pub use error::{Error, Result};
pub use matrix::{Matrix, Permutation};
pub use model::{Constraint, Model, Store, Strength, VarGrid, VarId};
