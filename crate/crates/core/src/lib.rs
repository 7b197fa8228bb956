//! A workbench for programs over finite monoids.
//!
//! The crate covers the full pipeline from regular languages to program
//! lower bounds: finite monoids with Green's relations and variety tests
//! (`algebra`), syntactic and stable stamps with the essentially-V and
//! quasi-V decision procedures (`reglang`), the program-over-monoid model
//! with its closure transformers and explicit constructions (`programs`),
//! strongly unambiguous monomial hierarchies with program compression
//! (`sums`), and constructive fooling pairs showing the limits of programs
//! over monoids in DA (`fooling`).

pub mod algebra;
pub mod alphabet;
pub mod config;
pub mod error;
pub mod fooling;
pub mod programs;
pub mod reglang;
pub mod sums;

pub use config::{CancelToken, Config};
pub use error::{Error, Result};
