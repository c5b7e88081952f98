use serde::Serialize;

use super::{pnorm, ConePoint, PExponent};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, Rational};

/// Relative threshold below which a tail entry of `z` counts as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// Relative tolerance for `z0 = ‖z̄‖_q`.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// `ζ̄ = −sgn(ζ)∘|ζ|^{q−1}` for `ζ` on the unit q-sphere.
pub fn zeta_bar(zeta: &[f64], q: f64) -> Result<Vec<f64>> {
    let nrm = pnorm(zeta, q);
    if (nrm - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!(
            "ζ must lie on the unit q-sphere, ‖ζ‖_q = {nrm}"
        )));
    }
    Ok(zeta_bar_unchecked(zeta, q))
}

fn zeta_bar_unchecked(zeta: &[f64], q: f64) -> Vec<f64> {
    zeta.iter()
        .map(|&x| if x == 0.0 { 0.0 } else { -x.signum() * x.abs().powf(q - 1.0) })
        .collect()
}

/// An extreme ray `F_z = K_p ∩ {z}^⊥ = {t·f : t ≥ 0}` and its exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExposedRay {
    /// Exposing vector; entries below the zero tolerance are set to 0 and `z0 := ‖z̄‖_q`.
    pub z: ConePoint,
    /// Generator with `f0 = 1`.
    pub f: ConePoint,
    /// Zero-based indices into `z̄` of the nonzero entries.
    pub support: Vec<usize>,
    pub alpha: Exponent,
    pub p: PExponent,
}

impl ExposedRay {
    pub fn n(&self) -> usize {
        self.z.n()
    }

    pub fn is_full_support(&self) -> bool {
        self.support.len() == self.n()
    }

    /// `P_{F_z}(x)`.
    pub fn project_face(&self, x: &ConePoint) -> ConePoint {
        let fx = self.f.dot(x);
        if fx >= 0.0 {
            self.f.scale(fx / self.f.dot(&self.f))
        } else {
            ConePoint::zeros(x.n())
        }
    }

    pub fn dist_face(&self, x: &ConePoint) -> f64 {
        x.dist(&self.project_face(x))
    }

    /// `P_{{z}^⊥}(x)`.
    pub fn project_hyperplane(&self, x: &ConePoint) -> ConePoint {
        x.axpy(-self.z.dot(x) / self.z.dot(&self.z), &self.z)
    }
}

/// What a dual vector `z` exposes in `K_p`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExposingClass {
    /// `z ∈ ∂K_q \ {0}`: an extreme ray.
    Ray(ExposedRay),
    /// `z ∈ int K_q`: the face `{0}`.
    Zero,
    /// `z = 0`: the whole cone.
    Full,
    /// `z ∉ K_q`; carries `‖z̄‖_q − z0 > 0`.
    NotDual(f64),
}

/// Classifies `z` with a relative boundary tolerance and the support tolerance.
pub fn classify_exposing(
    z: &ConePoint,
    p: &PExponent,
    boundary_tol: f64,
    zero_tol: f64,
) -> ExposingClass {
    let scale = z.norm();
    if scale <= 1e-300 {
        return ExposingClass::Full;
    }
    let qn = pnorm(&z.xbar, p.q());
    let gap = z.x0 - qn;
    let slack = boundary_tol * qn.max(z.x0.abs());
    if gap < -slack {
        return ExposingClass::NotDual(-gap);
    }
    if gap > slack || qn == 0.0 {
        return ExposingClass::Zero;
    }
    let support: Vec<usize> = (0..z.n())
        .filter(|&i| z.xbar[i].abs() > zero_tol * qn)
        .collect();
    let mut zbar = vec![0.0; z.n()];
    for &i in &support {
        zbar[i] = z.xbar[i];
    }
    let z0 = pnorm(&zbar, p.q());
    let zeta: Vec<f64> = zbar.iter().map(|x| x / z0).collect();
    let f = ConePoint::new(1.0, zeta_bar_unchecked(&zeta, p.q()));
    let alpha = exposed_exponent(p, z.n(), support.len());
    ExposingClass::Ray(ExposedRay {
        z: ConePoint::new(z0, zbar),
        f,
        support,
        alpha,
        p: *p,
    })
}

/// Exponent of an exposed ray from `n` and `|J_z|`.
pub fn exposed_exponent(p: &PExponent, n: usize, support: usize) -> Exponent {
    if support == n {
        Exponent::Exact(Rational::new(1, 2))
    } else if support == 1 && p.p() < 2.0 {
        p.inv_p()
    } else {
        p.worst_exponent()
    }
}

/// The ray exposed by `z ∈ ∂K_q \ {0}`; any other `z` is an error.
pub fn face_from_exposing(z: &ConePoint, p: &PExponent, zero_tol: f64) -> Result<ExposedRay> {
    match classify_exposing(z, p, BOUNDARY_TOL, zero_tol) {
        ExposingClass::Ray(r) => Ok(r),
        ExposingClass::Zero => Err(Error::invalid(
            "z is interior to the dual cone: it exposes {0} (linear FRF)",
        )),
        ExposingClass::Full => Err(Error::invalid("z = 0 exposes the full cone (no reduction)")),
        ExposingClass::NotDual(g) => Err(Error::invalid(format!(
            "z is not in the dual cone (‖z̄‖_q − z0 = {g:e})"
        ))),
    }
}

/// Distances used by the exponent argument for `v ∈ ∂K_p`: `w = P_{{z}^⊥}v`, `u = P_{F_z}w`.
#[derive(Debug, Clone, PartialEq)]
pub struct RayDistances {
    pub dv_w: f64,
    pub du_w: f64,
    pub w: ConePoint,
    pub u: ConePoint,
}

pub fn ray_distances(v: &ConePoint, ray: &ExposedRay) -> RayDistances {
    let zv = ray.z.dot(v);
    let zz = ray.z.dot(&ray.z);
    let w = v.axpy(-zv / zz, &ray.z);
    let fv = ray.f.dot(v);
    let u = if fv >= 0.0 {
        ray.f.scale(fv / ray.f.dot(&ray.f))
    } else {
        ConePoint::zeros(v.n())
    };
    RayDistances {
        dv_w: zv.abs() / zz.sqrt(),
        du_w: u.dist(&w),
        w,
        u,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pe(p: f64) -> PExponent {
        PExponent::new(p).unwrap()
    }

    #[test]
    fn zeta_bar_examples() {
        assert_eq!(zeta_bar(&[0.0, -1.0], 2.0).unwrap(), vec![0.0, 1.0]);
        assert_eq!(zeta_bar(&[0.0, 1.0, 0.0], 3.0).unwrap(), vec![0.0, -1.0, 0.0]);
        let c = 2f64.powf(-1.0 / 3.0);
        let zb = zeta_bar(&[c, c], 3.0).unwrap();
        let want = -(2f64.powf(-2.0 / 3.0));
        assert!((zb[0] - want).abs() < 1e-15 && (zb[1] - want).abs() < 1e-15);
        assert!((pnorm(&zb, 1.5) - 1.0).abs() < 1e-14);
        assert!(zeta_bar(&[1.0, 1.0], 2.0).is_err());
    }

    #[test]
    fn face_examples() {
        let r = face_from_exposing(&ConePoint::new(1.0, vec![0.0, -1.0]), &pe(2.0), 1e-10).unwrap();
        assert_eq!(r.f, ConePoint::new(1.0, vec![0.0, 1.0]));
        assert_eq!(r.support, vec![1]);
        assert_eq!(r.alpha, Exponent::Exact(Rational::new(1, 2)));

        let r = face_from_exposing(&ConePoint::new(1.0, vec![-1.0, 0.0]), &pe(1.5), 1e-10).unwrap();
        assert_eq!(r.alpha, Exponent::Exact(Rational::new(2, 3)));

        let p3 = pe(3.0);
        let zbar = vec![0.4, -0.9];
        let z = ConePoint::new(pnorm(&zbar, p3.q()), zbar);
        let r = face_from_exposing(&z, &p3, 1e-10).unwrap();
        assert_eq!(r.alpha, Exponent::Exact(Rational::new(1, 2)));
        assert!(r.f.dot(&r.z).abs() < 1e-14);
    }

    #[test]
    fn face_rejections() {
        let p = pe(3.0);
        assert_eq!(
            classify_exposing(&ConePoint::new(2.0, vec![1.0, 0.0]), &p, 1e-9, 1e-10),
            ExposingClass::Zero
        );
        assert_eq!(
            classify_exposing(&ConePoint::zeros(2), &p, 1e-9, 1e-10),
            ExposingClass::Full
        );
        assert!(face_from_exposing(&ConePoint::new(0.5, vec![1.0, 0.0]), &p, 1e-10).is_err());
    }

    #[test]
    fn ray_distance_example() {
        let r = face_from_exposing(&ConePoint::new(1.0, vec![0.0, -1.0]), &pe(2.0), 1e-10).unwrap();
        let d = ray_distances(&ConePoint::new(1.0, vec![1.0, 0.0]), &r);
        assert!((d.dv_w - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((d.du_w - 1.0).abs() < 1e-15);
        assert!(d.w.dist(&ConePoint::new(0.5, vec![1.0, 0.5])) < 1e-15);
        assert!(d.u.dist(&ConePoint::new(0.5, vec![0.0, 0.5])) < 1e-15);

        let on = ray_distances(&r.f.scale(3.0), &r);
        assert!(on.dv_w < 1e-15 && on.du_w < 1e-15);

        let neg = ray_distances(&ConePoint::new(1.0, vec![0.0, -1.0]), &r);
        assert_eq!(neg.u, ConePoint::zeros(2));
    }
}
