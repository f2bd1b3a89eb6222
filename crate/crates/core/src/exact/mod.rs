//! Exact scalars, vectors, matrices and 2×2 symmetric matrix algebra.

pub mod lp;
pub mod matrix;
pub mod rat;
pub mod sym2;

pub use matrix::{solve_rational, RatMatrix, Solution};
pub use rat::{format_rat, parse_rat, rationalize, Rat, RatVector};
pub use sym2::{psd2_check, psd_shift_bound, Sym2};
