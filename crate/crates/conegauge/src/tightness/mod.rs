//! Empirical certification of exponents: witness curves, the (G1) limsup,
//! the γ infimum and log-log slope fits.

mod fit;
mod gamma;
mod offset;
mod witness;

pub use fit::{
    default_grid, fit_exponent, g1_limsup, log_grid, ExponentFit, G1Estimate, G1Row, LIMSUP_TAIL,
};
pub use gamma::{
    check_error_bound, error_bound_constant, estimate_gamma, estimate_gamma_with, BoundCheck,
    GammaConfig, GammaEstimate, TrendPoint,
};
pub use offset::{offset_distance, offset_ray_distance};
pub use witness::{
    default_small_index, witness_exp_beta, witness_exp_minus_infinity, witness_exp_plus_infinity,
    witness_large_support, witness_small_support, WitnessCurve, WitnessFamily, WitnessSample,
};
