//! Shift spaces on the k-ary tree.
//!
//! The crate is organised bottom-up:
//!
//! * [`shift_core`]: one-sided shift spaces, their presentations and languages.
//! * [`tree_core`]: tree addresses, supports, patterns and prefix codes.
//! * [`hom_construct`]: tree-shifts built from one-sided shifts, plus the
//!   joint-constraint solver every other layer relies on.
//! * [`sofic_cover`]: the powerset cover of a labeled graph and pattern lifting.
//! * [`mixing`]: deciders and bounded checkers for gluing properties.
//! * [`catalog`]: the concrete shifts used throughout the tests and the CLI.

pub mod catalog;
pub mod error;
pub mod hom_construct;
pub mod mixing;
pub mod shift_core;
pub mod sofic_cover;
pub mod tree_core;

pub use error::{Error, Result};
