//! The exponential cone `K_exp = cl{(x,y,z) : y > 0, z ≥ y·e^{x/y}}`.
//!
//! Used for the logarithmic facial residual functions; distances carry a
//! log-domain companion because near `F_∞` they fall far below `f64::MIN_POSITIVE`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::brent;

pub type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &Vec3) -> f64 {
    let m = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * a.iter().map(|x| (x / m).powi(2)).sum::<f64>().sqrt()
}

fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

pub fn in_cone(v: &Vec3, tol: f64) -> bool {
    let [x, y, z] = *v;
    if y > 0.0 {
        let r = x / y;
        if z > 0.0 && z.ln() >= y.ln() + r {
            return true;
        }
        tol > 0.0 && r <= 700.0 && z >= y * r.exp() - tol
    } else {
        y >= -tol && x <= tol && z >= -tol
    }
}

/// `K_exp* = {u < 0, −u·e^{v/u} ≤ e·w} ∪ {u = 0, v ≥ 0, w ≥ 0}`.
pub fn in_dual(s: &Vec3, tol: f64) -> bool {
    let [u, v, w] = *s;
    if u < -tol {
        let r = v / u;
        if r > 700.0 {
            return false;
        }
        -u * r.exp() <= std::f64::consts::E * w + tol
    } else {
        u <= tol && v >= -tol && w >= -tol
    }
}

/// Projection onto `K_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpProjection {
    pub point: Vec3,
    pub distance: f64,
    /// `ln(distance)`, accurate even where `distance` underflows to 0.
    pub ln_distance: f64,
}

struct Candidate {
    point: Vec3,
    distance: f64,
    ln_distance: f64,
}

/// Boundary ray direction `d(r) = (r, 1, e^r)` and outward normal
/// `n(r) = (e^r, e^r(1−r), −1)`, both rescaled by `e^{−r}` when `r > 0`.
fn frame(r: f64) -> (Vec3, Vec3) {
    if r > 0.0 {
        let em = (-r).exp();
        ([r * em, em, 1.0], [1.0, 1.0 - r, -em])
    } else {
        let e = r.exp();
        ([r, 1.0, e], [e, e * (1.0 - r), -1.0])
    }
}

/// `⟨v, d × n⟩` up to a positive factor; zero iff `v ∈ span{d(r), n(r)}`.
fn coplanarity(v: &Vec3, r: f64) -> f64 {
    let c = if r > 0.0 {
        let em2 = (-2.0 * r).exp();
        [-em2 - (1.0 - r), 1.0 + r * em2, (-r).exp() * (r - r * r - 1.0)]
    } else {
        let e2 = (2.0 * r).exp();
        [-1.0 - e2 * (1.0 - r), e2 + r, r.exp() * (r - r * r - 1.0)]
    };
    dot(v, &c)
}

fn boundary_candidate(v: &Vec3, r: f64) -> Option<Candidate> {
    let (d, n) = frame(r);
    let lam = dot(v, &d) / dot(&d, &d);
    let vn = dot(v, &n);
    if !(lam > 0.0) || vn < 0.0 {
        return None;
    }
    let nn = norm(&n);
    let point = [lam * d[0], lam * d[1], lam * d[2]];
    let distance = vn / nn;
    // ⟨v, n⟩ = e^r·(x + y(1−r)) − z: evaluate in logs when both parts are ≥ 0.
    let ln_distance = if r <= 0.0 {
        let a = v[0] + v[1] * (1.0 - r);
        if a >= 0.0 && v[2] <= 0.0 {
            let la = if a > 0.0 { a.ln() + r } else { f64::NEG_INFINITY };
            let lz = if v[2] < 0.0 { (-v[2]).ln() } else { f64::NEG_INFINITY };
            logaddexp(la, lz) - nn.ln()
        } else {
            distance.ln()
        }
    } else {
        distance.ln()
    };
    Some(Candidate {
        point,
        distance,
        ln_distance,
    })
}

/// Euclidean projection onto `K_exp`.
///
/// The smooth part of the boundary is scanned for parameters `r` where `v`
/// lies in the plane of the boundary ray and its normal (grid in
/// `asinh r`, refined by Brent); those candidates compete with the
/// projection onto the polyhedral face `{x ≤ 0, y = 0, z ≥ 0}`.
pub fn project(v: &Vec3) -> Result<ExpProjection> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite point"));
    }
    if in_cone(v, 0.0) {
        return Ok(ExpProjection {
            point: *v,
            distance: 0.0,
            ln_distance: f64::NEG_INFINITY,
        });
    }
    if in_dual(&[-v[0], -v[1], -v[2]], 0.0) {
        let d = norm(v);
        return Ok(ExpProjection {
            point: [0.0; 3],
            distance: d,
            ln_distance: d.ln(),
        });
    }
    let face_pt = [v[0].min(0.0), 0.0, v[2].max(0.0)];
    let fd = norm(&sub(v, &face_pt));
    let mut best = Candidate {
        point: face_pt,
        distance: fd,
        ln_distance: fd.ln(),
    };
    const STEPS: usize = 4400;
    const U_MAX: f64 = 22.0;
    let mut prev_r = (-U_MAX).sinh();
    let mut prev_h = coplanarity(v, prev_r);
    for k in 1..=STEPS {
        let r = (-U_MAX + 2.0 * U_MAX * k as f64 / STEPS as f64).sinh();
        let h = coplanarity(v, r);
        let root = if h == 0.0 {
            Some(r)
        } else if prev_h != 0.0 && h.signum() != prev_h.signum() {
            brent(|t| coplanarity(v, t), prev_r, r, 0.0, 200, "exponential cone root").ok()
        } else {
            None
        };
        if let Some(root) = root {
            if let Some(c) = boundary_candidate(v, root) {
                if c.ln_distance < best.ln_distance {
                    best = c;
                }
            }
        }
        prev_r = r;
        prev_h = h;
    }
    Ok(ExpProjection {
        point: best.point,
        distance: best.distance,
        ln_distance: best.ln_distance,
    })
}

/// Faces of `K_exp` exposed by a dual vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "face", content = "beta", rename_all = "snake_case")]
pub enum ExpFace {
    Full,
    /// `F_β = {(y−βy, y, e^{1−β}y) : y ≥ 0}`.
    Beta(f64),
    /// `F_∞ = {(x, 0, 0) : x ≤ 0}`.
    PlusInfinity,
    /// `F_{−∞} = {(x, 0, z) : x ≤ 0, z ≥ 0}` (two-dimensional, polyhedral).
    MinusInfinity,
    Zero,
}

impl ExpFace {
    /// Extreme-ray generators of a polyhedral face (`Full` has none listed).
    pub fn generators(&self) -> Vec<Vec3> {
        match *self {
            ExpFace::Full | ExpFace::Zero => vec![],
            ExpFace::Beta(b) => vec![[1.0 - b, 1.0, (1.0 - b).exp()]],
            ExpFace::PlusInfinity => vec![[-1.0, 0.0, 0.0]],
            ExpFace::MinusInfinity => vec![[-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }
}

/// The dual vector exposing `F_β`: `(−e^{1−β}, −β·e^{1−β}, 1)`.
pub fn beta_exposing(beta: f64) -> Vec3 {
    let e = (1.0 - beta).exp();
    [-e, -beta * e, 1.0]
}

/// Which face `s ∈ K_exp*` exposes, with `tol` relative to `‖s‖`.
pub fn classify_exposing(s: &Vec3, tol: f64) -> Result<ExpFace> {
    let scale = norm(s);
    if scale <= 1e-300 {
        return Ok(ExpFace::Full);
    }
    let t = tol * scale;
    if !in_dual(s, t) {
        return Err(Error::invalid(format!("{s:?} is not in the dual exponential cone")));
    }
    let [u, v, w] = *s;
    if u < -t {
        let gap = std::f64::consts::E * w - (-u) * (v / u).exp();
        if gap > t {
            Ok(ExpFace::Zero)
        } else {
            Ok(ExpFace::Beta(v / u))
        }
    } else if w > t {
        Ok(ExpFace::PlusInfinity)
    } else {
        Ok(ExpFace::MinusInfinity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moreau_ok(v: &Vec3) {
        let pr = project(v).unwrap();
        let r = sub(v, &pr.point);
        assert!(in_cone(&pr.point, 1e-9), "{v:?} -> {:?}", pr.point);
        assert!(in_dual(&[-r[0], -r[1], -r[2]], 1e-9), "{v:?}: residual {r:?}");
        assert!(dot(&pr.point, &r).abs() < 1e-9 * (1.0 + dot(v, v)));
        assert!((pr.distance - norm(&r)).abs() < 1e-9);
    }

    #[test]
    fn projection_moreau() {
        for v in [
            [1.0, 1.0, 1.0],
            [2.0, -1.0, 0.5],
            [-1.0, -1.0, 3.0],
            [0.3, 0.2, -0.7],
            [5.0, 0.1, 0.1],
            [-3.0, 2.0, 0.01],
            [1.0, 0.0, 0.0],
        ] {
            moreau_ok(&v);
        }
    }

    #[test]
    fn trivial_cases() {
        let inside = [0.0, 1.0, 2.0];
        assert_eq!(project(&inside).unwrap().distance, 0.0);
        let polar = [0.5, -1.0, -1.0];
        assert!(in_dual(&[-0.5, 1.0, 1.0], 0.0));
        assert_eq!(project(&polar).unwrap().point, [0.0; 3]);
    }

    #[test]
    fn log_distance_near_f_infinity() {
        let eps = 1e-4;
        let pr = project(&[-1.0, eps, 0.0]).unwrap();
        assert_eq!(pr.distance, 0.0);
        let want = eps.ln() - 1.0 / eps;
        assert!((pr.ln_distance - want).abs() < 1e-3 * want.abs());
    }

    #[test]
    fn faces() {
        let b = 0.3;
        match classify_exposing(&beta_exposing(b), 1e-9).unwrap() {
            ExpFace::Beta(x) => assert!((x - b).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(classify_exposing(&[0.0, 0.0, 1.0], 1e-9).unwrap(), ExpFace::PlusInfinity);
        assert_eq!(classify_exposing(&[0.0, 1.0, 0.0], 1e-9).unwrap(), ExpFace::MinusInfinity);
        assert_eq!(classify_exposing(&[-1.0, 0.0, 1.0], 1e-9).unwrap(), ExpFace::Zero);
        assert!(classify_exposing(&[1.0, 0.0, 0.0], 1e-9).is_err());
        let g = ExpFace::Beta(b).generators()[0];
        assert!(dot(&g, &beta_exposing(b)).abs() < 1e-14);
    }
}
