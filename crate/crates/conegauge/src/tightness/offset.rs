//! Distances to `K_p` for points of the form `b + h` with `b ∈ ∂K_p` and `h` small.
//!
//! Forming `b + h` in floating point and projecting loses everything below
//! ~1e−16·‖b‖, while witness distances go down to ~ε^p. Here `b` is taken as
//! exactly on the boundary (`b0 = ‖b̄‖_p`) and every quantity is a difference
//! relative to `b`, so the distance keeps full relative precision.

use crate::error::{Error, Result};
use crate::pcone::{pnorm, ConePoint};
use crate::roots::brent;

/// `Σ_i |b̄_i + e_i|^p − |b̄_i|^p`, each term relative-accurate.
fn power_sum_delta(bbar: &[f64], ebar: &[f64], p: f64) -> f64 {
    bbar.iter()
        .zip(ebar)
        .map(|(&b, &e)| {
            if b == 0.0 {
                e.abs().powf(p)
            } else {
                let r = e / b;
                if r > -0.5 {
                    b.abs().powf(p) * (p * r.ln_1p()).exp_m1()
                } else {
                    (b + e).abs().powf(p) - b.abs().powf(p)
                }
            }
        })
        .sum()
}

/// `‖b̄ + ē‖_p − b0 − e0` with `b0 = ‖b̄‖_p` taken as exact.
pub(crate) fn boundary_gap(b: &ConePoint, e: &ConePoint, p: f64) -> f64 {
    if b.x0 == 0.0 {
        return pnorm(&e.xbar, p) - e.x0;
    }
    let b0p = b.x0.powf(p);
    let s = power_sum_delta(&b.xbar, &e.xbar, p) / b0p;
    let norm_delta = if s > -1.0 {
        b.x0 * ((s.ln_1p()) / p).exp_m1()
    } else {
        -b.x0
    };
    norm_delta - e.x0
}

/// Outward normal `(−1, ∇‖ȳ‖_p)` of the cone boundary at `y`.
fn normal(y: &ConePoint, p: f64) -> ConePoint {
    let t = pnorm(&y.xbar, p);
    if t == 0.0 {
        return ConePoint::new(-1.0, vec![0.0; y.n()]);
    }
    ConePoint::new(
        -1.0,
        y.xbar
            .iter()
            .map(|&v| v.signum() * (v.abs() / t).powf(p - 1.0))
            .collect(),
    )
}

/// `dist(b + h, K_p)` for `b` on the boundary.
///
/// Solves `w − P = μ·n(P)` with `P` on the boundary: for a frozen normal
/// `n` the scalar `μ` is a root of the gap along `h − μn`; the normal is then
/// re-evaluated at the new projection until it stops moving.
pub fn offset_distance(b: &ConePoint, h: &ConePoint, p: f64) -> Result<f64> {
    if b.n() != h.n() {
        return Err(Error::invalid("offset_distance: dimension mismatch"));
    }
    let g0 = boundary_gap(b, h, p);
    if g0 <= 0.0 {
        return Ok(0.0);
    }
    let mut n = normal(&b.add(h), p);
    let mut mu = 0.0;
    for _ in 0..60 {
        let phi = |m: f64| boundary_gap(b, &h.axpy(-m, &n), p);
        let mut hi = g0 / n.dot(&n);
        let mut k = 0;
        while phi(hi) > 0.0 {
            hi *= 2.0;
            k += 1;
            if k > 200 {
                return Err(Error::Numerical {
                    what: "offset distance bracket",
                    iterations: k,
                    residual: phi(hi),
                });
            }
        }
        mu = brent(phi, 0.0, hi, 0.0, 300, "offset distance")?;
        let y = b.add(&h.axpy(-mu, &n));
        let n_new = normal(&y, p);
        let moved = n_new.dist(&n);
        n = n_new;
        if moved <= 1e-15 * n.norm() {
            break;
        }
    }
    Ok(mu * n.norm())
}

/// `dist(b + h, {t·f : t ≥ 0})` for `b` a positive multiple of `f`.
pub fn offset_ray_distance(f: &ConePoint, h: &ConePoint) -> f64 {
    h.axpy(-f.dot(h) / f.dot(f), f).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcone::{project_cone, PExponent};

    #[test]
    fn agrees_with_projection_at_moderate_offsets() {
        for &p in &[1.5, 2.0, 3.0, 5.0] {
            let pe = PExponent::new(p).unwrap();
            let xb = vec![0.6, -0.3, 0.2];
            let b = ConePoint::new(pnorm(&xb, p), xb);
            let h = ConePoint::new(-0.01, vec![0.02, 0.015, -0.01]);
            let direct = project_cone(&b.add(&h), &pe, 1e-14).unwrap().distance;
            let off = offset_distance(&b, &h, p).unwrap();
            assert!((direct - off).abs() <= 1e-9 * direct, "p={p}: {direct} vs {off}");
        }
    }

    #[test]
    fn resolves_tiny_distances() {
        // w = (1, (1, ε)): vertical gap (1+ε^p)^{1/p} − 1 ≈ ε^p/p, normal length √2.
        let p = 5.0;
        let b = ConePoint::new(1.0, vec![1.0, 0.0]);
        for k in 2..=6 {
            let eps = 10f64.powi(-k);
            let h = ConePoint::new(0.0, vec![0.0, eps]);
            let d = offset_distance(&b, &h, p).unwrap();
            let want = eps.powf(p) / p / 2f64.sqrt();
            assert!((d / want - 1.0).abs() < 1e-6, "ε={eps}: {d} vs {want}");
        }
    }

    #[test]
    fn inside_is_zero() {
        let b = ConePoint::new(1.0, vec![1.0, 0.0]);
        let h = ConePoint::new(0.1, vec![0.0, 0.01]);
        assert_eq!(offset_distance(&b, &h, 3.0).unwrap(), 0.0);
    }
}
