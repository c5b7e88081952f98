//! The rotated second-order cone `{(t, u, x) : tu ≥ ‖x‖², t, u ≥ 0}`.

use crate::error::{Error, Result};

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `T(t,u,x) = (t+u, t−u, 2x)`, mapping the rotated cone onto `K_2`.
pub fn to_soc(v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len());
    out.push(v[0] + v[1]);
    out.push(v[0] - v[1]);
    out.extend(v[2..].iter().map(|x| 2.0 * x));
    out
}

/// Inverse of [`to_soc`].
pub fn from_soc(s: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(s.len());
    out.push(0.5 * (s[0] + s[1]));
    out.push(0.5 * (s[0] - s[1]));
    out.extend(s[2..].iter().map(|x| 0.5 * x));
    out
}

pub fn in_cone(v: &[f64], tol: f64) -> bool {
    let (t, u, x) = (v[0], v[1], &v[2..]);
    let r = ((t - u).powi(2) + 4.0 * x.iter().map(|a| a * a).sum::<f64>()).sqrt();
    t + u >= r - tol
}

/// Dual cone `{(a, b, c) : 4ab ≥ ‖c‖², a, b ≥ 0}`.
pub fn in_dual(z: &[f64], tol: f64) -> bool {
    dual_gap(z) >= -tol
}

fn dual_gap(z: &[f64]) -> f64 {
    let (a, b, c) = (z[0], z[1], &z[2..]);
    a + b - ((a - b).powi(2) + c.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// What a dual vector exposes in the rotated cone.
#[derive(Debug, Clone, PartialEq)]
pub enum RsocFace {
    Full,
    /// Extreme ray generated by `(b, a, −c/2)` for `z = (a, b, c)`.
    Ray(Vec<f64>),
    Zero,
}

pub fn classify_exposing(z: &[f64], tol: f64) -> Result<RsocFace> {
    if z.len() < 3 {
        return Err(Error::invalid("rotated cone needs dimension ≥ 3"));
    }
    let scale = norm2(z);
    if scale <= 1e-300 {
        return Ok(RsocFace::Full);
    }
    let g = dual_gap(z);
    if g < -tol * scale {
        return Err(Error::invalid(format!(
            "not in the dual rotated cone (gap {g:e})"
        )));
    }
    if g > tol * scale {
        return Ok(RsocFace::Zero);
    }
    let mut f = vec![z[1], z[0]];
    f.extend(z[2..].iter().map(|c| -0.5 * c));
    Ok(RsocFace::Ray(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_map() {
        assert_eq!(to_soc(&[1.0, 1.0, 0.0]), vec![2.0, 0.0, 0.0]);
        let v = [0.3, 2.0, -0.4, 0.1];
        let back = from_soc(&to_soc(&v));
        assert!(v.iter().zip(&back).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(in_cone(&[1.0, 1.0, 1.0], 1e-12));
        assert!(!in_cone(&[1.0, 1.0, 1.1], 0.0));
    }

    #[test]
    fn exposed_ray_is_orthogonal_and_feasible() {
        let z = [1.0, 4.0, 4.0, 0.0];
        let f = match classify_exposing(&z, 1e-9).unwrap() {
            RsocFace::Ray(f) => f,
            other => panic!("{other:?}"),
        };
        let ip: f64 = z.iter().zip(&f).map(|(a, b)| a * b).sum();
        assert!(ip.abs() < 1e-14);
        assert!(in_cone(&f, 1e-12));
        assert_eq!(classify_exposing(&[1.0, 1.0, 0.0], 1e-9).unwrap(), RsocFace::Zero);
        assert_eq!(classify_exposing(&[0.0; 3], 1e-9).unwrap(), RsocFace::Full);
    }
}
