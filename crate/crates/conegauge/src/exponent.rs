//! Exponents that stay exact whenever the cone parameter is rational.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = Ratio<i64>;

/// A Hölder-type exponent: exact rational when it can be, float otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Exact(Rational),
    Float(f64),
}

const MAX_DEN: i64 = 1_000_000;

/// Recovers a rational `n/d` with `d ≤ 10^6` when `x` is one to ~1e-13 relative.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DEN {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= 1e-13 * x.abs().max(1.0) {
            return Some(Rational::new(h1, k1));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

impl Exponent {
    pub fn one() -> Self {
        Exponent::Exact(Rational::one())
    }

    pub fn zero() -> Self {
        Exponent::Exact(Rational::zero())
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Exponent::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Exponent::Exact(r) => Some(*r),
            Exponent::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Exponent::Exact(_))
    }

    pub fn min(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Exact(a), Exponent::Exact(b)) => Exponent::Exact(a.min(b)),
            _ => {
                if self.value() <= other.value() {
                    self
                } else {
                    other
                }
            }
        }
    }

    pub fn mul(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Exact(a), Exponent::Exact(b)) => Exponent::Exact(a * b),
            _ => Exponent::Float(self.value() * other.value()),
        }
    }

    pub fn powi(self, d: u32) -> Exponent {
        (0..d).fold(Exponent::one(), |acc, _| acc.mul(self))
    }

    pub fn one_minus(self) -> Exponent {
        match self {
            Exponent::Exact(a) => Exponent::Exact(Rational::one() - a),
            Exponent::Float(x) => Exponent::Float(1.0 - x),
        }
    }

    /// Largest "nice" rational not exceeding the value.
    ///
    /// Replacing ε^α by ε^β with β ≤ α only increases the value on [0,1], so
    /// this is the safe direction for majorizing FRFs.
    pub fn lower_rational(&self) -> Rational {
        match self {
            Exponent::Exact(r) => *r,
            Exponent::Float(x) => {
                if let Some(r) = rational_from_f64(*x) {
                    return r;
                }
                let num = (x * MAX_DEN as f64).floor().max(1.0) as i64;
                Rational::new(num, MAX_DEN)
            }
        }
    }
}

impl From<Rational> for Exponent {
    fn from(r: Rational) -> Self {
        Exponent::Exact(r)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Exponent::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Exponent::Float(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_simple_fractions() {
        assert_eq!(rational_from_f64(1.5), Some(Rational::new(3, 2)));
        assert_eq!(rational_from_f64(3.0), Some(Rational::new(3, 1)));
        assert_eq!(rational_from_f64(1.0 / 3.0), Some(Rational::new(1, 3)));
        assert_eq!(rational_from_f64(std::f64::consts::PI), None);
    }

    #[test]
    fn lower_rational_never_exceeds() {
        let e = Exponent::Float(std::f64::consts::FRAC_1_SQRT_2);
        assert!(e.lower_rational().to_f64().unwrap() <= e.value());
    }

    #[test]
    fn display() {
        assert_eq!(Exponent::Exact(Rational::new(2, 3)).to_string(), "2/3");
        assert_eq!(Exponent::one().to_string(), "1");
    }
}
