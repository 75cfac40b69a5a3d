//! Finite-section laboratory for isometric representations of Z₊ on H², their
//! extensions by inner-function multipliers, and the involutive semigroups
//! they generate.

pub mod cli;
pub mod error;
pub mod extension_lab;
pub mod inner_function;
pub mod operator_core;
pub mod star_semigroup;

pub use error::{Error, Result};
