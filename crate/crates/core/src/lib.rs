//! Answer set semantics for programs with partial evaluable functions and
//! intensional sets.
//!
//! The main entry points are [`syntax::parse_program`],
//! [`ht::find_stable_models`] and [`gz::gz_stable_models`].

pub mod builtins;
pub mod domain;
pub mod error;
pub mod functional;
pub mod generate;
pub mod ground;
pub mod gz;
pub mod ht;
pub mod interp;
pub mod json;
pub mod props;
pub mod syntax;
pub mod transform;

pub use domain::{Atom, AtomSet, Domain, DomainBounds, Value};
pub use error::{Error, Result};
