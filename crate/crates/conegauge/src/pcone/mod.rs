//! Geometry of the p-cone `K_p = {(x0, x̄) : x0 ≥ ‖x̄‖_p}`.

mod automorphism;
mod face;
mod point;
mod projection;

pub use automorphism::{apply_automorphism, SignedPermutation};
pub use face::{
    classify_exposing, exposed_exponent, face_from_exposing, ray_distances, zeta_bar, ExposedRay, ExposingClass,
    RayDistances, BOUNDARY_TOL, DEFAULT_ZERO_TOL,
};
pub use point::ConePoint;
pub use projection::{
    polar_projection, project_cone, project_qball, ProjectOptions, Projection,
};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponent::{rational_from_f64, Exponent, Rational};

/// The cone parameter `p` together with its conjugate `q = p/(p−1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent {
    p: f64,
    q: f64,
    exact: Option<Rational>,
}

pub const P_MIN: f64 = 1.0 + 1e-9;
pub const P_MAX: f64 = 1e9;

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= P_MIN || p >= P_MAX {
            return Err(Error::invalid(format!(
                "p = {p} outside the supported range ({P_MIN}, {P_MAX})"
            )));
        }
        match rational_from_f64(p) {
            Some(r) => Self::from_rational(r),
            None => Ok(PExponent {
                p,
                q: p / (p - 1.0),
                exact: None,
            }),
        }
    }

    pub fn from_rational(r: Rational) -> Result<Self> {
        let p = *r.numer() as f64 / *r.denom() as f64;
        if p <= P_MIN || p >= P_MAX {
            return Err(Error::invalid(format!("p = {r} outside the supported range")));
        }
        let q = r / (r - Rational::from_integer(1));
        Ok(PExponent {
            p,
            q: *q.numer() as f64 / *q.denom() as f64,
            exact: Some(r),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn exact(&self) -> Option<Rational> {
        self.exact
    }

    /// The parameter of the dual cone.
    pub fn conjugate(&self) -> PExponent {
        PExponent {
            p: self.q,
            q: self.p,
            exact: self.exact.map(|r| r / (r - Rational::from_integer(1))),
        }
    }

    /// `1/p`, exact when `p` is rational.
    pub fn inv_p(&self) -> Exponent {
        match self.exact {
            Some(r) => Exponent::Exact(r.recip()),
            None => Exponent::Float(1.0 / self.p),
        }
    }

    /// `min{1/2, 1/p}`.
    pub fn worst_exponent(&self) -> Exponent {
        Exponent::Exact(Rational::new(1, 2)).min(self.inv_p())
    }
}

impl Serialize for PExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.p)
    }
}

impl<'de> Deserialize<'de> for PExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let p = match Raw::deserialize(d)? {
            Raw::Num(x) => PExponent::new(x),
            Raw::Text(s) => parse_p(&s),
        };
        p.map_err(serde::de::Error::custom)
    }
}

/// Parses `"3"`, `"1.5"` or `"3/2"`.
pub fn parse_p(s: &str) -> Result<PExponent> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| Error::Parse(format!("bad p '{s}'")))?;
        let d: i64 = d.trim().parse().map_err(|_| Error::Parse(format!("bad p '{s}'")))?;
        if d <= 0 {
            return Err(Error::Parse(format!("bad p '{s}'")));
        }
        PExponent::from_rational(Rational::new(n, d))
    } else {
        let x: f64 = s.parse().map_err(|_| Error::Parse(format!("bad p '{s}'")))?;
        PExponent::new(x)
    }
}

/// `‖x̄‖_p`, computed as `m·‖x̄/m‖_p` with `m = max|x̄_i|`.
pub fn pnorm(xbar: &[f64], p: f64) -> f64 {
    let m = xbar.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    if p == 2.0 {
        let s: f64 = xbar.iter().map(|x| (x / m) * (x / m)).sum();
        return m * s.sqrt();
    }
    let s: f64 = xbar.iter().map(|x| (x.abs() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}

/// `x0 ≥ ‖x̄‖_p − tol`.
pub fn in_cone(x: &ConePoint, p: &PExponent, tol: f64) -> bool {
    x.x0 >= pnorm(&x.xbar, p.p()) - tol
}

/// Membership in the dual cone `K_q`.
pub fn in_dual_cone(z: &ConePoint, p: &PExponent, tol: f64) -> bool {
    z.x0 >= pnorm(&z.xbar, p.q()) - tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_pairs() {
        for p in [1.5, 2.0, 3.0, 5.0, 7.0, 2.718281828] {
            let e = PExponent::new(p).unwrap();
            let s = 1.0 / e.p() + 1.0 / e.q();
            assert!((s - 1.0).abs() <= 1e-14, "{p}");
        }
        assert_eq!(PExponent::new(1.5).unwrap().q(), 3.0);
    }

    #[test]
    fn guard_rails() {
        assert!(PExponent::new(1.0).is_err());
        assert!(PExponent::new(1.0 + 1e-10).is_err());
        assert!(PExponent::new(2e9).is_err());
        assert!(PExponent::new(f64::NAN).is_err());
    }

    #[test]
    fn norms() {
        assert_eq!(pnorm(&[3.0, 4.0], 2.0), 5.0);
        for p in [1.5, 3.0, 11.0] {
            assert_eq!(pnorm(&[1.0, 0.0], p), 1.0);
        }
        assert!((pnorm(&[1.0, 1.0], 3.0) - 1.259_921_049_894_873).abs() < 1e-15);
        assert!(pnorm(&[1e300, 1e300], 3.0).is_finite());
    }

    #[test]
    fn membership() {
        let p3 = PExponent::new(3.0).unwrap();
        let p2 = PExponent::new(2.0).unwrap();
        assert!(in_cone(&ConePoint::new(1.0, vec![1.0, 0.0]), &p3, 0.0));
        assert!(!in_cone(&ConePoint::new(1.0, vec![1.0, 1.0]), &p2, 0.0));
        assert!(in_cone(&ConePoint::new(0.0, vec![0.0, 0.0]), &p2, 0.0));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_p("3/2").unwrap().exact(), Some(Rational::new(3, 2)));
        assert_eq!(parse_p("1.5").unwrap().exact(), Some(Rational::new(3, 2)));
        assert!(parse_p("x").is_err());
    }
}
