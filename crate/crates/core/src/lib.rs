//! Symmetric triads with multiplicities: root systems, type-(IV) triads, double
//! Satake diagrams and σ-actions, all in exact rational arithmetic.

pub mod cli;
pub mod error;
pub mod expr;
pub(crate) mod iso;
pub mod product;
pub mod rootsys;
pub mod satake;
pub mod schema;
pub mod triads;
pub mod typeiv;
pub mod vector;

pub use error::{Error, Result};
