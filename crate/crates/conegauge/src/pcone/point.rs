use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A vector `(x0, x̄) ∈ R^{n+1}`; serialized as the flat array `[x0, x̄…]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePoint {
    pub x0: f64,
    pub xbar: Vec<f64>,
}

impl ConePoint {
    pub fn new(x0: f64, xbar: Vec<f64>) -> Self {
        ConePoint { x0, xbar }
    }

    pub fn zeros(n: usize) -> Self {
        ConePoint::new(0.0, vec![0.0; n])
    }

    /// Splits a flat slice; needs at least two entries.
    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::invalid(format!(
                "cone point needs length ≥ 2, got {}",
                v.len()
            )));
        }
        Ok(ConePoint::new(v[0], v[1..].to_vec()))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        v.push(self.x0);
        v.extend_from_slice(&self.xbar);
        v
    }

    /// Tail length `n`.
    pub fn n(&self) -> usize {
        self.xbar.len()
    }

    /// Ambient dimension `n + 1`.
    pub fn dim(&self) -> usize {
        self.xbar.len() + 1
    }

    pub fn dot(&self, other: &ConePoint) -> f64 {
        self.x0 * other.x0
            + self
                .xbar
                .iter()
                .zip(&other.xbar)
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        let m = self.xbar.iter().fold(self.x0.abs(), |m, x| m.max(x.abs()));
        if m == 0.0 {
            return 0.0;
        }
        let s = (self.x0 / m).powi(2) + self.xbar.iter().map(|x| (x / m).powi(2)).sum::<f64>();
        m * s.sqrt()
    }

    pub fn scale(&self, a: f64) -> ConePoint {
        ConePoint::new(a * self.x0, self.xbar.iter().map(|x| a * x).collect())
    }

    pub fn add(&self, other: &ConePoint) -> ConePoint {
        ConePoint::new(
            self.x0 + other.x0,
            self.xbar.iter().zip(&other.xbar).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &ConePoint) -> ConePoint {
        ConePoint::new(
            self.x0 - other.x0,
            self.xbar.iter().zip(&other.xbar).map(|(a, b)| a - b).collect(),
        )
    }

    /// `self + a·other`.
    pub fn axpy(&self, a: f64, other: &ConePoint) -> ConePoint {
        ConePoint::new(
            self.x0 + a * other.x0,
            self.xbar
                .iter()
                .zip(&other.xbar)
                .map(|(x, y)| x + a * y)
                .collect(),
        )
    }

    pub fn dist(&self, other: &ConePoint) -> f64 {
        self.sub(other).norm()
    }
}

impl Serialize for ConePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        ConePoint::from_slice(&v).map_err(serde::de::Error::custom)
    }
}
