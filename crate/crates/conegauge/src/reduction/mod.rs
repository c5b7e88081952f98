//! Conic feasibility problems, facial-reduction certificates and the
//! resulting Hölderian error-bound exponent.
//!
//! Certificates are checked, never searched for: the caller supplies
//! `z_1, …, z_{ℓ−1}` and [`verify_certificate`] confirms each step.

mod assemble;
mod chain;
mod problem;

pub use assemble::{
    assemble_chain, assemble_exponent, lipschitz_cases, AssembleOptions, Assembly, GammaChoice, LipschitzClass,
    StepFrf,
};
pub use chain::{
    dpps_upper_bound, verify_certificate, BlockFace, BlockStep, ReductionChain, StepReport, Transition,
    VerifiedChain,
};
pub use problem::{Block, ConeSpec, FeasProblem, MatrixInput, PreprocessReport, RANK_TOL};
