//! Distributive extensional filter models and the λ-calculus with tests.

pub mod approximants;
pub mod error;
pub mod gen;
pub mod model;
pub mod reduction;
pub mod semantics;
pub mod suite;
pub mod syntax;
pub mod unfold;

pub use error::{ModelError, ParseError, ReduceError, SemanticsError};
pub use model::{Model, TypeExpr};
