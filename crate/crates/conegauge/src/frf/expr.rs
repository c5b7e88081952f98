use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponent::Rational;

/// One summand `coeff · ε^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub exponent: Rational,
}

impl Term {
    pub fn new(coeff: f64, exponent: Rational) -> Self {
        Term { coeff, exponent }
    }

    fn eval(&self, eps: f64) -> f64 {
        if self.coeff == 0.0 {
            return 0.0;
        }
        self.coeff * eps.powf(self.exponent.to_f64().unwrap_or(1.0))
    }
}

/// A one-step facial residual function `ψ(ε) = Σ c_j ε^{e_j}` at a fixed norm bound.
///
/// Coefficients are nonnegative and exponents lie in `(0, 1]`, so ψ is
/// nondecreasing with `ψ(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrfExpr {
    terms: Vec<Term>,
    t_bound: f64,
}

fn t_compatible(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

impl FrfExpr {
    pub fn new(terms: Vec<Term>, t_bound: f64) -> Result<Self> {
        if !(t_bound >= 0.0) || !t_bound.is_finite() {
            return Err(Error::invalid(format!("t_bound must be ≥ 0, got {t_bound}")));
        }
        if terms.is_empty() {
            return Err(Error::invalid("an FRF needs at least one term"));
        }
        for t in &terms {
            if !(t.coeff >= 0.0) || !t.coeff.is_finite() {
                return Err(Error::invalid(format!("coefficient {} is not ≥ 0", t.coeff)));
            }
            if t.exponent <= Rational::zero() || t.exponent > Rational::one() {
                return Err(Error::invalid(format!("exponent {} outside (0, 1]", t.exponent)));
            }
        }
        Ok(FrfExpr { terms, t_bound })
    }

    /// `k·ε`.
    pub fn linear(k: f64, t_bound: f64) -> Result<Self> {
        FrfExpr::new(vec![Term::new(k, Rational::one())], t_bound)
    }

    /// `ρ·ε + ρ̂·ε^α`.
    pub fn two_term(rho: f64, rho_hat: f64, alpha: Rational, t_bound: f64) -> Result<Self> {
        if alpha == Rational::one() {
            return FrfExpr::linear(rho + rho_hat, t_bound);
        }
        FrfExpr::new(
            vec![Term::new(rho, Rational::one()), Term::new(rho_hat, alpha)],
            t_bound,
        )
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn t_bound(&self) -> f64 {
        self.t_bound
    }

    pub fn eval(&self, eps: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(eps)).sum()
    }

    /// Smallest exponent carrying a positive coefficient (1 if none).
    pub fn dominant_exponent(&self) -> Rational {
        self.terms
            .iter()
            .filter(|t| t.coeff > 0.0)
            .map(|t| t.exponent)
            .min()
            .unwrap_or_else(Rational::one)
    }

    /// Folds into `ρ·ε + ρ̂·ε^{α}` with `α` the dominant sublinear exponent.
    ///
    /// Valid as an upper bound on `ε ∈ [0, 1]`, where `ε^e ≤ ε^α` for `e ≥ α`.
    pub fn canonical(&self) -> FrfExpr {
        let one = Rational::one();
        let lin: f64 = self
            .terms
            .iter()
            .filter(|t| t.exponent == one)
            .map(|t| t.coeff)
            .sum();
        let sub: Vec<&Term> = self
            .terms
            .iter()
            .filter(|t| t.exponent < one && t.coeff > 0.0)
            .collect();
        let mut terms = vec![Term::new(lin, one)];
        if let Some(alpha) = sub.iter().map(|t| t.exponent).min() {
            terms.push(Term::new(sub.iter().map(|t| t.coeff).sum(), alpha));
        } else if let Some(t) = self.terms.iter().find(|t| t.exponent < one) {
            // keep a zero sublinear slot so the two-term shape survives
            terms.push(Term::new(0.0, t.exponent));
        }
        FrfExpr {
            terms,
            t_bound: self.t_bound,
        }
    }
}

/// `(f♦g)(a) = f(a + g(a))`, canonicalized.
///
/// Each term `c·x^e` of `f` is expanded over `x = a + Σ g_k a^{h_k}` with
/// `(x + y)^e ≤ x^e + y^e`; the dominant exponent of the result is the
/// product of the two dominant exponents.
pub fn diamond(f: &FrfExpr, g: &FrfExpr) -> Result<FrfExpr> {
    if !t_compatible(f.t_bound, g.t_bound) {
        return Err(Error::invalid(format!(
            "diamond: t_bound mismatch ({} vs {})",
            f.t_bound, g.t_bound
        )));
    }
    let mut pieces = vec![Term::new(1.0, Rational::one())];
    pieces.extend(g.terms.iter().copied());
    let mut out = Vec::new();
    for ft in &f.terms {
        let e = ft.exponent;
        let ef = e.to_f64().unwrap_or(1.0);
        for pc in &pieces {
            let coeff = if e == Rational::one() {
                ft.coeff * pc.coeff
            } else {
                ft.coeff * pc.coeff.powf(ef)
            };
            out.push(Term::new(coeff, e * pc.exponent));
        }
    }
    Ok(FrfExpr::new(out, f.t_bound)?.canonical())
}

/// `M3·ψ(M1·ε) + M4·ε` with the norm bound scaled by `M2`.
pub fn rescaled_shift(psi: &FrfExpr, m1: f64, m2: f64, m3: f64, m4: f64) -> Result<FrfExpr> {
    if !(m1 > 0.0 && m2 > 0.0 && m3 > 0.0 && m4 >= 0.0) {
        return Err(Error::invalid("rescaled_shift needs M1, M2, M3 > 0 and M4 ≥ 0"));
    }
    let mut terms: Vec<Term> = psi
        .terms
        .iter()
        .map(|t| Term::new(m3 * t.coeff * m1.powf(t.exponent.to_f64().unwrap_or(1.0)), t.exponent))
        .collect();
    terms.push(Term::new(m4, Rational::one()));
    Ok(FrfExpr::new(terms, psi.t_bound * m2)?.canonical())
}

/// `Σ_i ψ_i(κ·ε)`, the facial residual function of a product cone.
pub fn sum_product_frf(psis: &[FrfExpr], kappa: f64) -> Result<FrfExpr> {
    let first = psis
        .first()
        .ok_or_else(|| Error::invalid("sum_product_frf needs at least one block"))?;
    if !(kappa > 0.0) {
        return Err(Error::invalid("kappa must be positive"));
    }
    let mut terms = Vec::new();
    for psi in psis {
        if !t_compatible(psi.t_bound, first.t_bound) {
            return Err(Error::invalid("sum_product_frf: t_bound mismatch"));
        }
        terms.extend(psi.terms.iter().map(|t| {
            Term::new(t.coeff * kappa.powf(t.exponent.to_f64().unwrap_or(1.0)), t.exponent)
        }));
    }
    Ok(FrfExpr::new(terms, first.t_bound)?.canonical())
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: f64,
    exp_num: i64,
    exp_den: i64,
}

#[derive(Serialize, Deserialize)]
struct FrfJson {
    terms: Vec<TermJson>,
    t_bound: f64,
}

impl Serialize for FrfExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FrfJson {
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    coeff: t.coeff,
                    exp_num: *t.exponent.numer(),
                    exp_den: *t.exponent.denom(),
                })
                .collect(),
            t_bound: self.t_bound,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrfExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FrfJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            if t.exp_den <= 0 {
                return Err(serde::de::Error::custom("exp_den must be positive"));
            }
            terms.push(Term::new(t.coeff, Rational::new(t.exp_num, t.exp_den)));
        }
        FrfExpr::new(terms, raw.t_bound).map_err(serde::de::Error::custom)
    }
}
