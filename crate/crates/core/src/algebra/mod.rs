//! Exact scalars, sparse polynomials and linear algebra.

pub mod linalg;
pub mod matrix;
pub mod modular;
pub mod mpoly;
pub mod rat;

pub use linalg::{det, inverse, linear_solve, linear_solve_many, nullspace, rank};
pub use matrix::Mat;
pub use mpoly::{grlex_cmp, indexed_vars, make_vars, Exponents, MPoly, Vars};
pub use rat::{format_rat, parse_rat, rat, ratio, Rat};
