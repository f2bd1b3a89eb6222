//! Exact and numerical tools for the polyhedral-hull versus polyhedral-tensor
//! matrix convex sets of a polyhedral cone.

pub mod error;
pub mod exact;
pub mod io;
pub mod nc_sets;
pub mod polyhedral;
pub mod section;
pub mod solver;
pub mod witness;

pub use error::{CertSide, Error, Result};
pub use exact::{psd2_check, rationalize, solve_rational, Rat, RatMatrix, RatVector, Solution, Sym2};
pub use polyhedral::{dual_convert, ConeRep, ConvertMode, HRep, LinearIso, VRep};
pub use nc_sets::{MatTuple, PtDecomposition, SepCertificate};
pub use solver::{decide_and_certify, Decision, PtOracle, SolverConfig};
pub use witness::{base_witness, construct_witness, WitnessResult};
