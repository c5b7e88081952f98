use serde::{Deserialize, Serialize};

use super::expr::{FrfExpr, Term};
use super::gfunc::GFunction;
use crate::error::{Error, Result};
use crate::exponent::{Exponent, Rational};
use crate::pcone::ExposedRay;

/// `ψ(s) = max{s, s/‖z‖} + κ·g(s + max{s, s/‖z‖})`.
#[derive(Debug, Clone)]
pub struct GFrf {
    pub g: GFunction,
    pub znorm: f64,
    pub kappa: f64,
}

pub fn frf_from_g(g: GFunction, znorm: f64, kappa: f64) -> Result<GFrf> {
    if !(znorm > 0.0) {
        return Err(Error::invalid("‖z‖ must be positive"));
    }
    if !(kappa >= 0.0) {
        return Err(Error::invalid("κ must be nonnegative"));
    }
    Ok(GFrf { g, znorm, kappa })
}

impl GFrf {
    fn lin(&self) -> f64 {
        1f64.max(1.0 / self.znorm)
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        let m = self.lin() * s;
        Ok(m + self.kappa * self.g.eval(s + m)?)
    }

    /// The two-term form `c·s + κ(1+c)^α s^α`, `c = max{1, 1/‖z‖}`, for power `g`.
    ///
    /// A non-rational α is replaced by a smaller rational, which keeps the
    /// expression an upper bound for `s ∈ [0, 1]`.
    pub fn to_expr(&self, t_bound: f64) -> Option<FrfExpr> {
        let GFunction::Power(alpha) = &self.g else {
            return None;
        };
        let c = self.lin();
        let a = alpha.lower_rational();
        let rho_hat = self.kappa * (1.0 + c).powf(alpha.value());
        FrfExpr::new(vec![Term::new(c, Rational::from_integer(1)), Term::new(rho_hat, a)], t_bound)
            .ok()
            .map(|e| e.canonical())
    }
}

/// The ray FRF `κε + max{2t^{1−α}, 2/γ̂}(κ+1)^α ε^α` with `κ = max{1, 1/‖z‖}`.
///
/// `gamma_hat = ∞` is allowed (it is the convention at `t = 0`).
pub fn ray_frf(znorm: f64, alpha: Exponent, t: f64, gamma_hat: f64) -> Result<FrfExpr> {
    if !(gamma_hat > 0.0) {
        return Err(Error::invalid(format!(
            "γ̂ must be positive, got {gamma_hat} (estimator failure?)"
        )));
    }
    if !(t >= 0.0) || !(znorm > 0.0) {
        return Err(Error::invalid("need t ≥ 0 and ‖z‖ > 0"));
    }
    let a = alpha.value();
    let kappa = 1f64.max(1.0 / znorm);
    let t_part = if t == 0.0 { 0.0 } else { 2.0 * t.powf(1.0 - a) };
    let rho_hat = t_part.max(2.0 / gamma_hat) * (kappa + 1.0).powf(a);
    FrfExpr::two_term(kappa, rho_hat, alpha.lower_rational(), t)
}

/// [`ray_frf`] for an exposed p-cone ray.
pub fn pcone_frf(ray: &ExposedRay, t: f64, gamma_hat: f64) -> Result<FrfExpr> {
    ray_frf(ray.z.norm(), ray.alpha, t, gamma_hat)
}

/// Faces of the exponential cone carrying a known residual shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpFaceTag {
    Beta,
    MinusInfinity,
    PlusInfinity,
}

/// `g_β = √t`, `g_{−∞} = −t ln t`, `g_∞ = −1/ln t`.
pub fn expcone_g(tag: ExpFaceTag) -> GFunction {
    match tag {
        ExpFaceTag::Beta => GFunction::Power(Exponent::Exact(Rational::new(1, 2))),
        ExpFaceTag::MinusInfinity => GFunction::NegTLogT,
        ExpFaceTag::PlusInfinity => GFunction::InvNegLog,
    }
}
