use crate::error::{Error, Result};
use crate::pcone::{pnorm, project_qball, PExponent};

/// `prox_{w‖·‖_p}(x̄) = x̄ − P_{w·B_q}(x̄)` (Moreau).
pub fn prox_pnorm(xbar: &[f64], p: &PExponent, weight: f64, tol: f64) -> Result<Vec<f64>> {
    if !(weight > 0.0) {
        return Err(Error::invalid("prox weight must be positive"));
    }
    let proj = project_qball(xbar, p.q(), weight, tol)?;
    Ok(xbar.iter().zip(&proj).map(|(x, y)| x - y).collect())
}

/// Violation of `x̄ − y ∈ w·∂‖y‖_p`.
///
/// With `g = x̄ − y`: if `y = 0` the condition is `‖g‖_q ≤ w`; otherwise it
/// is `‖g‖_q = w` and `⟨g, y⟩ = w‖y‖_p`. The result is scaled by `w`.
pub fn prox_optimality_residual(xbar: &[f64], y: &[f64], p: &PExponent, weight: f64) -> f64 {
    let g: Vec<f64> = xbar.iter().zip(y).map(|(x, v)| x - v).collect();
    let gq = pnorm(&g, p.q());
    let yp = pnorm(y, p.p());
    if yp == 0.0 {
        return (gq - weight).max(0.0) / weight;
    }
    let ip: f64 = g.iter().zip(y).map(|(a, b)| a * b).sum();
    ((gq - weight).abs() / weight).max((ip - weight * yp).abs() / (weight * yp.max(1.0)))
}
