//! Exact computational invariant theory: matrix invariants, orbit-closure
//! tests, hitting sets, the Reynolds operator for SL_m and explicit systems
//! of parameters.

pub mod algebra;
pub mod circuit;
pub mod error;
pub mod esop;
pub mod hitting;
pub mod invariants;
pub mod orbit;
pub mod reynolds;
pub mod rng;
pub mod smt;

pub use error::{Error, Result};
