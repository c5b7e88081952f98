use serde::Serialize;

use super::offset::{offset_distance, offset_ray_distance};
use crate::error::{Error, Result};
use crate::expcone::{self, beta_exposing, ExpFace, Vec3};
use crate::pcone::{ConePoint, ExposedRay};

/// Which construction a curve follows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WitnessFamily {
    /// Perturb a coordinate `j ∉ J_z` of the generator by `ε`.
    SmallSupport { j: usize },
    /// Move along `{z}^⊥` using coordinate `i ∈ J_z`; `scale` maps `(0,1]` onto the admissible range.
    LargeSupport { i: usize, scale: f64 },
    /// `(−1, ε, 0)` near `F_∞`.
    ExpPlusInfinity,
    /// `(−ε ln ε, 0, 1)` near `F_{−∞}`.
    ExpMinusInfinity,
    /// `P_{{z}^⊥}(1−β+ε, 1, e^{1−β+ε})` near `F_β`.
    ExpBeta { beta: f64 },
}

#[derive(Debug, Clone)]
enum Geometry {
    PCone(ExposedRay),
    Exp { z: Vec3, face: ExpFace },
}

/// A curve `ε ↦ w_ε ∈ {z}^⊥ \ F` approaching a face.
#[derive(Debug, Clone)]
pub struct WitnessCurve {
    pub family: WitnessFamily,
    geometry: Geometry,
}

/// Distances of one curve point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSample {
    pub eps: f64,
    pub point: Vec<f64>,
    pub dist_k: f64,
    /// `ln dist(w_ε, K)`; finite even when `dist_k` underflows.
    pub ln_dist_k: f64,
    pub dist_f: f64,
    /// `|⟨z, w_ε⟩| / (‖z‖‖w_ε‖)`.
    pub hyperplane_residual: f64,
}

/// Curve of order `1/p` for rays with `|J_z| < n`.
pub fn witness_small_support(ray: &ExposedRay, j: usize) -> Result<WitnessCurve> {
    if ray.is_full_support() {
        return Err(Error::invalid("small-support witness needs |J_z| < n"));
    }
    if j >= ray.n() || ray.support.contains(&j) {
        return Err(Error::invalid(format!("index {j} must lie outside J_z and below n")));
    }
    Ok(WitnessCurve {
        family: WitnessFamily::SmallSupport { j },
        geometry: Geometry::PCone(ray.clone()),
    })
}

/// First admissible small-support index.
pub fn default_small_index(ray: &ExposedRay) -> Option<usize> {
    (0..ray.n()).find(|j| !ray.support.contains(j))
}

/// Curve of order `1/2` for rays with `|J_z| ≥ 2`, perturbing `i` (default: last of `J_z`).
pub fn witness_large_support(ray: &ExposedRay, i: Option<usize>) -> Result<WitnessCurve> {
    if ray.support.len() < 2 {
        return Err(Error::invalid("large-support witness needs |J_z| ≥ 2"));
    }
    let i = match i {
        Some(i) if ray.support.contains(&i) => i,
        Some(i) => return Err(Error::invalid(format!("index {i} is not in J_z"))),
        None => *ray.support.last().expect("nonempty support"),
    };
    let scale = (ray.z.xbar[i].abs() * ray.f.xbar[i].abs()).min(ray.z.x0);
    Ok(WitnessCurve {
        family: WitnessFamily::LargeSupport { i, scale },
        geometry: Geometry::PCone(ray.clone()),
    })
}

pub fn witness_exp_plus_infinity() -> WitnessCurve {
    WitnessCurve {
        family: WitnessFamily::ExpPlusInfinity,
        geometry: Geometry::Exp {
            z: [0.0, 0.0, 1.0],
            face: ExpFace::PlusInfinity,
        },
    }
}

pub fn witness_exp_minus_infinity() -> WitnessCurve {
    WitnessCurve {
        family: WitnessFamily::ExpMinusInfinity,
        geometry: Geometry::Exp {
            z: [0.0, 1.0, 0.0],
            face: ExpFace::MinusInfinity,
        },
    }
}

pub fn witness_exp_beta(beta: f64) -> Result<WitnessCurve> {
    if !beta.is_finite() {
        return Err(Error::invalid("β must be finite"));
    }
    Ok(WitnessCurve {
        family: WitnessFamily::ExpBeta { beta },
        geometry: Geometry::Exp {
            z: beta_exposing(beta),
            face: ExpFace::Beta(beta),
        },
    })
}

fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

impl WitnessCurve {
    /// The exposing vector as a flat array.
    pub fn exposing(&self) -> Vec<f64> {
        match &self.geometry {
            Geometry::PCone(ray) => ray.z.to_vec(),
            Geometry::Exp { z, .. } => z.to_vec(),
        }
    }

    pub fn ray(&self) -> Option<&ExposedRay> {
        match &self.geometry {
            Geometry::PCone(r) => Some(r),
            Geometry::Exp { .. } => None,
        }
    }

    /// `w_ε − f` for the p-cone families.
    fn pcone_offset(&self, ray: &ExposedRay, eps: f64) -> ConePoint {
        let mut h = ConePoint::zeros(ray.n());
        match self.family {
            WitnessFamily::SmallSupport { j } => h.xbar[j] = eps,
            WitnessFamily::LargeSupport { i, scale } => {
                let e = scale * eps;
                h.x0 = -e / ray.z.x0;
                h.xbar[i] = e / ray.z.xbar[i];
            }
            _ => unreachable!("exp families carry no p-cone offset"),
        }
        h
    }

    fn exp_point(&self, eps: f64) -> Vec3 {
        match self.family {
            WitnessFamily::ExpPlusInfinity => [-1.0, eps, 0.0],
            WitnessFamily::ExpMinusInfinity => [-eps * eps.ln(), 0.0, 1.0],
            WitnessFamily::ExpBeta { beta } => {
                let z = beta_exposing(beta);
                let r = 1.0 - beta + eps;
                let v = [r, 1.0, r.exp()];
                let c = dot3(&z, &v) / dot3(&z, &z);
                [v[0] - c * z[0], v[1] - c * z[1], v[2] - c * z[2]]
            }
            _ => unreachable!("p-cone families have no exp point"),
        }
    }

    fn check_eps(eps: f64) -> Result<()> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::invalid(format!("ε = {eps} outside (0, 1]")));
        }
        Ok(())
    }

    pub fn eval(&self, eps: f64) -> Result<Vec<f64>> {
        Self::check_eps(eps)?;
        Ok(match &self.geometry {
            Geometry::PCone(ray) => ray.f.add(&self.pcone_offset(ray, eps)).to_vec(),
            Geometry::Exp { .. } => self.exp_point(eps).to_vec(),
        })
    }

    /// Evaluates `w_ε` and both distances.
    pub fn sample(&self, eps: f64) -> Result<WitnessSample> {
        Self::check_eps(eps)?;
        let point = self.eval(eps)?;
        let z = self.exposing();
        let zw: f64 = z.iter().zip(&point).map(|(a, b)| a * b).sum();
        let zn = z.iter().map(|a| a * a).sum::<f64>().sqrt();
        let wn = point.iter().map(|a| a * a).sum::<f64>().sqrt();
        let hyperplane_residual = zw.abs() / (zn * wn);
        let (dist_k, ln_dist_k, dist_f) = match &self.geometry {
            Geometry::PCone(ray) => {
                let h = self.pcone_offset(ray, eps);
                let dk = offset_distance(&ray.f, &h, ray.p.p())?;
                (dk, dk.ln(), offset_ray_distance(&ray.f, &h))
            }
            Geometry::Exp { face, .. } => {
                let w = self.exp_point(eps);
                let pr = expcone::project(&w)?;
                (pr.distance, pr.ln_distance, exp_face_distance(face, &w))
            }
        };
        Ok(WitnessSample {
            eps,
            point,
            dist_k,
            ln_dist_k,
            dist_f,
            hyperplane_residual,
        })
    }
}

fn exp_face_distance(face: &ExpFace, w: &Vec3) -> f64 {
    match face {
        ExpFace::MinusInfinity => {
            let p = [w[0].min(0.0), 0.0, w[2].max(0.0)];
            norm3(&[w[0] - p[0], w[1] - p[1], w[2] - p[2]])
        }
        _ => {
            let f = face.generators()[0];
            let t = (dot3(&f, w) / dot3(&f, &f)).max(0.0);
            norm3(&[w[0] - t * f[0], w[1] - t * f[1], w[2] - t * f[2]])
        }
    }
}
