//! Norm-regularized least squares `½‖Ax − b‖² + Σ λ_i ‖x_i‖_p`: its conic
//! reformulation, KL exponent and a proximal-gradient solver.

mod instance;
mod prox;
mod solve;

pub use instance::{kl_exponent, ConicReformulation, RegLsInstance};
pub use prox::{prox_optimality_residual, prox_pnorm};
pub use solve::{
    check_strict_complementarity, lipschitz_constant, solve_prox_grad, SolveOptions, SolveResult, StepRule, StopReason,
    TraceRow,
};
