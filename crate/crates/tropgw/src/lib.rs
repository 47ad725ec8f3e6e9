//! Descendent tropical Gromov–Witten invariants of the projective plane.
//!
//! The pipeline runs from exact-rational point arrangements ([`geometry`])
//! through descendent scattering diagrams ([`scattering`]) and broken lines
//! ([`brokenlines`]) to invariants and their generating series
//! ([`invariants`]). An independent classical engine ([`oracle`]) computes
//! the same numbers from the axioms of Gromov–Witten theory.

pub mod brokenlines;
pub mod cli;
pub mod coeffring;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod oracle;
pub mod rational;
pub mod scattering;
pub mod verify;

pub use error::{Error, Result};
