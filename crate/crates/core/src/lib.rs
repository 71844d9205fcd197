//! Measures on Fraïssé classes of finite relational structures.
//!
//! The crate enumerates members of a class up to isomorphism, enumerates and
//! counts amalgamations, reduces marked structures to minimal ones, builds
//! the polynomial relation system satisfied by measures and solves it over
//! `{-1, 0, 1}` or a prime field.

pub mod amalgamation;
mod context;
mod error;
pub mod marked;
pub mod structures;
pub mod theta;

pub use context::Context;
pub use error::{Error, Result};
