//! Error-bound machinery for the p-cone `K_p = {(x0, x̄) : x0 ≥ ‖x̄‖_p}`.
//!
//! * [`pcone`]: projections, dual cone, exposed rays and their exponents `α_z`.
//! * [`frf`]: facial residual functions as small symbolic sums `Σ c_j ε^{a_j}`,
//!   with diamond composition and the product rule.
//! * [`tightness`]: witness curves, log-log slope fits, (G1) limsup estimates
//!   and Monte Carlo estimates of `γ_{z,η}`.
//! * [`reduction`]: conic feasibility problems, certificate verification and
//!   exponent assembly along a facial-reduction chain.
//! * [`kl`]: norm-regularized least squares, its conic form, KL exponent and
//!   a proximal-gradient solver.
//! * [`expcone`], [`rsoc`]: the exponential and rotated second-order cones.
//! * [`cli`]: the `conegauge` command line.
//!
//! Runnable examples live in `examples/`:
//! `projection_moreau`, `exposed_faces`, `frf_algebra`, `witness_slopes`,
//! `limsup_certificates`, `gamma_estimate`, `expcone_faces`,
//! `reduction_chain` and `kl_least_squares`.

pub mod cli;
pub mod error;
pub mod expcone;
pub mod frf;
pub mod kl;
pub mod exponent;
pub mod pcone;
mod roots;
pub mod tightness;
pub mod reduction;
pub mod rsoc;

pub use error::{Error, Result};
pub use exponent::{Exponent, Rational};
pub use pcone::{ConePoint, PExponent};
