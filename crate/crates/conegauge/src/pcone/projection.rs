use super::{in_cone, pnorm, ConePoint, PExponent};
use crate::error::Result;
use crate::roots::{bracket_decreasing, brent, power_shrink};

/// Tolerance/iteration settings for the projection root-finds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ProjectOptions {
    fn default() -> Self {
        ProjectOptions {
            tol: 1e-12,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub point: ConePoint,
    pub distance: f64,
}

/// Euclidean projection of `xbar` onto `{y : ‖y‖_q ≤ radius}`.
///
/// Stationarity gives `|y_i| + c·|y_i|^{q−1} = |x_i|` for one multiplier
/// `c ≥ 0`; each coordinate is a monotone Newton solve and `c` is found by
/// Brent on `‖y(c)‖_q − radius`.
pub fn project_qball(xbar: &[f64], q: f64, radius: f64, tol: f64) -> Result<Vec<f64>> {
    project_qball_with(
        xbar,
        q,
        radius,
        ProjectOptions {
            tol,
            ..Default::default()
        },
    )
}

pub(crate) fn project_qball_with(
    xbar: &[f64],
    q: f64,
    radius: f64,
    opts: ProjectOptions,
) -> Result<Vec<f64>> {
    let nrm = pnorm(xbar, q);
    if nrm <= radius {
        return Ok(xbar.to_vec());
    }
    if q == 2.0 {
        return Ok(xbar.iter().map(|x| x * radius / nrm).collect());
    }
    let a: Vec<f64> = xbar.iter().map(|x| x.abs()).collect();
    let shrink = |c: f64| -> Vec<f64> { a.iter().map(|&ai| power_shrink(ai, c, q - 1.0)).collect() };
    let resid = |c: f64| pnorm(&shrink(c), q) - radius;
    let (lo, hi) = bracket_decreasing(resid, "q-ball multiplier bracket")?;
    let c = brent(resid, lo, hi, opts.tol * hi, opts.max_iter, "q-ball multiplier")?;
    Ok(shrink(c)
        .into_iter()
        .zip(xbar)
        .map(|(s, x)| s.copysign(*x))
        .collect())
}

/// Projection onto `K_p` and the distance to it.
///
/// Points already in the cone (to `tol`) come back unchanged and points in
/// the polar cone `−K_q` map to the apex. Otherwise the projection
/// `(t, sgn(x̄)∘s)` solves `s_i + c·s_i^{p−1} = |x̄_i|` together with
/// `t − c·t^{p−1} = x0`, `t = ‖s‖_p`; the epigraph multiplier is `μ = c·t^{p−1}`.
pub fn project_cone(v: &ConePoint, p: &PExponent, tol: f64) -> Result<Projection> {
    project_cone_with(
        v,
        p,
        ProjectOptions {
            tol,
            ..Default::default()
        },
    )
}

pub(crate) fn project_cone_with(
    v: &ConePoint,
    p: &PExponent,
    opts: ProjectOptions,
) -> Result<Projection> {
    if in_cone(v, p, opts.tol) {
        return Ok(Projection {
            point: v.clone(),
            distance: 0.0,
        });
    }
    if -v.x0 >= pnorm(&v.xbar, p.q()) - opts.tol {
        return Ok(Projection {
            point: ConePoint::zeros(v.n()),
            distance: v.norm(),
        });
    }
    let pp = p.p();
    let a: Vec<f64> = v.xbar.iter().map(|x| x.abs()).collect();
    let shrink = |c: f64| -> Vec<f64> { a.iter().map(|&ai| power_shrink(ai, c, pp - 1.0)).collect() };
    let resid = |c: f64| {
        let t = pnorm(&shrink(c), pp);
        t - c * t.powf(pp - 1.0) - v.x0
    };
    let (lo, hi) = bracket_decreasing(resid, "cone multiplier bracket")?;
    let c = brent(resid, lo, hi, opts.tol * hi, opts.max_iter, "cone multiplier")?;
    let y: Vec<f64> = shrink(c)
        .into_iter()
        .zip(&v.xbar)
        .map(|(s, x)| s.copysign(*x))
        .collect();
    let t = pnorm(&y, pp);
    let point = ConePoint::new(t, y);
    let distance = v.dist(&point);
    Ok(Projection { point, distance })
}

/// `P_{−K_q}(v) = −P_{K_q}(−v)`, the polar half of the Moreau decomposition.
pub fn polar_projection(v: &ConePoint, p: &PExponent, tol: f64) -> Result<ConePoint> {
    let pr = project_cone(&v.scale(-1.0), &p.conjugate(), tol)?;
    Ok(pr.point.scale(-1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pe(p: f64) -> PExponent {
        PExponent::new(p).unwrap()
    }

    #[test]
    fn qball_examples() {
        let y = project_qball(&[3.0, 4.0], 2.0, 1.0, 1e-12).unwrap();
        assert!((y[0] - 0.6).abs() < 1e-15 && (y[1] - 0.8).abs() < 1e-15);
        let y = project_qball(&[2.0, 0.0, 0.0], 1.5, 1.0, 1e-12).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-12 && y[1] == 0.0 && y[2] == 0.0);
        let x = [0.1, -0.2];
        assert_eq!(project_qball(&x, 3.0, 1.0, 1e-12).unwrap(), x.to_vec());
    }

    #[test]
    fn cone_examples() {
        let v = ConePoint::new(1.0, vec![0.5, 0.5]);
        let pr = project_cone(&v, &pe(3.0), 1e-12).unwrap();
        assert_eq!(pr.point, v);
        assert_eq!(pr.distance, 0.0);

        let pr = project_cone(&ConePoint::new(-2.0, vec![0.0, 0.0]), &pe(5.0), 1e-12).unwrap();
        assert_eq!(pr.point, ConePoint::zeros(2));
        assert_eq!(pr.distance, 2.0);

        let pr = project_cone(&ConePoint::new(0.0, vec![2.0, 0.0]), &pe(2.0), 1e-12).unwrap();
        assert!(pr.point.dist(&ConePoint::new(1.0, vec![1.0, 0.0])) < 1e-12);
        assert!((pr.distance - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn moreau_spot_check() {
        let p = pe(1.5);
        let v = ConePoint::new(0.3, vec![1.0, -2.0, 0.5]);
        let pk = project_cone(&v, &p, 1e-12).unwrap().point;
        let pq = polar_projection(&v, &p, 1e-12).unwrap();
        assert!(v.sub(&pk).sub(&pq).norm() < 1e-10);
        assert!(pk.dot(&pq).abs() < 1e-10);
    }
}
