//! Independent classical side: axiomatic Gromov–Witten invariants of ℙ²,
//! Givental's J-function with its mirror map, and two combinatorial
//! identity checks.

pub mod classical;
pub mod identities;
pub mod mirror;

pub use classical::{kontsevich_numbers, wdvv_violations, ClassicalOracle, GWKey, Insertion, Strategy};
pub use identities::{binomial_collapse_check, harmonic_identity};
