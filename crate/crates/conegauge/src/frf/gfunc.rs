use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exponent::Exponent;

/// Domain cap for `−1/ln t`.
pub const LOG_T_MAX: f64 = 0.5;

/// Domain cap for `−t ln t`, which peaks at `1/e`.
pub const TLOG_T_MAX: f64 = 1.0 / std::f64::consts::E;

type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A residual shape `g` with `g(0) = 0`, nondecreasing on `[0, t_max]`.
#[derive(Clone)]
pub enum GFunction {
    /// `t^α`.
    Power(Exponent),
    /// `−t·ln t`.
    NegTLogT,
    /// `−1/ln t`.
    InvNegLog,
    Custom { name: String, t_max: f64, f: Func },
}

impl fmt::Debug for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GFunction::Power(a) => write!(f, "Power({a})"),
            GFunction::NegTLogT => write!(f, "NegTLogT"),
            GFunction::InvNegLog => write!(f, "InvNegLog"),
            GFunction::Custom { name, t_max, .. } => write!(f, "Custom({name}, t_max={t_max})"),
        }
    }
}

impl GFunction {
    pub fn power(alpha: Exponent) -> Self {
        GFunction::Power(alpha)
    }

    pub fn custom(name: impl Into<String>, t_max: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        GFunction::Custom {
            name: name.into(),
            t_max,
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GFunction::Power(a) => format!("power({a})"),
            GFunction::NegTLogT => "neg_t_log_t".into(),
            GFunction::InvNegLog => "inv_neg_log".into(),
            GFunction::Custom { name, .. } => name.clone(),
        }
    }

    pub fn t_max(&self) -> f64 {
        match self {
            GFunction::Power(_) => f64::INFINITY,
            GFunction::NegTLogT => TLOG_T_MAX,
            GFunction::InvNegLog => LOG_T_MAX,
            GFunction::Custom { t_max, .. } => *t_max,
        }
    }

    fn check(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) || t > self.t_max() * (1.0 + 1e-12) {
            return Err(Error::invalid(format!(
                "{} evaluated at {t}, outside [0, {}]",
                self.name(),
                self.t_max()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok(match self {
            GFunction::Power(a) => t.powf(a.value()),
            GFunction::NegTLogT => -t * t.ln(),
            GFunction::InvNegLog => -1.0 / t.ln(),
            GFunction::Custom { f, .. } => f(t),
        })
    }

    /// `ln g(t)` from `ln t`; works where `t` itself underflows.
    pub fn eval_ln(&self, ln_t: f64) -> Result<f64> {
        if ln_t == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        if ln_t.is_nan() || ln_t > self.t_max().ln() + 1e-12 {
            return Err(Error::invalid(format!(
                "{} evaluated at ln t = {ln_t}, outside the domain",
                self.name()
            )));
        }
        Ok(match self {
            GFunction::Power(a) => a.value() * ln_t,
            GFunction::NegTLogT => ln_t + (-ln_t).ln(),
            GFunction::InvNegLog => -(-ln_t).ln(),
            GFunction::Custom { f, .. } => f(ln_t.exp()).ln(),
        })
    }

    /// Sampled check of `g(0) = 0` and monotonicity on `[0, min(t_max, 1)]`.
    pub fn is_admissible(&self, samples: usize) -> bool {
        let top = self.t_max().min(1.0);
        let Ok(g0) = self.eval(0.0) else { return false };
        if g0 != 0.0 {
            return false;
        }
        let mut prev = 0.0;
        for k in 1..=samples {
            let t = top * k as f64 / samples as f64;
            match self.eval(t) {
                Ok(v) if v >= prev => prev = v,
                _ => return false,
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Rational;

    #[test]
    fn log_forms() {
        let e = std::f64::consts::E;
        assert!((GFunction::NegTLogT.eval(1.0 / e).unwrap() - 1.0 / e).abs() < 1e-15);
        assert!((GFunction::InvNegLog.eval(e.powi(-2)).unwrap() - 0.5).abs() < 1e-15);
        assert!(GFunction::NegTLogT.eval(0.9).is_err());
        let lt = -1000.0;
        assert!((GFunction::InvNegLog.eval_ln(lt).unwrap() + 1000f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn admissibility() {
        let sqrt = GFunction::power(Exponent::Exact(Rational::new(1, 2)));
        assert_eq!(sqrt.eval(0.25).unwrap(), 0.5);
        for g in [sqrt, GFunction::NegTLogT, GFunction::InvNegLog] {
            assert!(g.is_admissible(1000), "{g:?}");
        }
        assert!(!GFunction::custom("bump", 1.0, |t| (6.0 * t).sin().abs()).is_admissible(100));
    }
}
