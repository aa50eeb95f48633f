//! Supersingular elliptic curves with level structure.
//!
//! This crate provides exact arithmetic over finite fields of odd
//! characteristic and, on top of it, the objects attached to supersingular
//! elliptic curves in characteristic p: curves and their automorphisms,
//! cyclic level-N structures up to isomorphism, separable isogenies in Vélu
//! form, the duality and Frobenius involutions on level structures together
//! with the resulting fiber classification, the level-N isogeny graphs, and
//! class-number based counts of conjugate isogenies.

pub mod counting;
pub mod curve;
pub mod error;
pub mod fibers;
pub mod field;
pub mod fixtures;
pub mod graphs;
pub mod isogeny;
pub mod level;
pub mod poly;
pub mod session;
pub mod textio;
pub mod verify;

pub use error::{Error, Result};
