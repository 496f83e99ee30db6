//! Numerical checks for the Dirac-Kähler field on a curved background.
//!
//! The guide in `book/` walks through the modules; its code blocks are
//! compiled and run as doctests.

pub mod cli;
pub mod clifford;
pub mod dk_core;
pub mod error;
pub mod fermion_compare;
pub mod geometry;
pub mod jets;
pub mod sectors;
pub mod tolerance;

pub use error::{Error, Result};

// The guide's chapters, so that `cargo test --doc` runs their snippets.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/algebra.md")]
pub mod book_algebra {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/jets.md")]
pub mod book_jets {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/geometry.md")]
pub mod book_geometry {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/formulations.md")]
pub mod book_formulations {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/sectors.md")]
pub mod book_sectors {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/fermion_compare.md")]
pub mod book_fermion_compare {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod book_cli {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/report.md")]
pub mod book_report {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/conventions.md")]
pub mod book_conventions {}
