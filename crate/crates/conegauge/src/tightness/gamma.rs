use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::offset::{offset_distance, offset_ray_distance};
use crate::error::{Error, Result};
use crate::pcone::{pnorm, project_cone, ray_distances, ConePoint, ExposedRay};

/// Settings for the Monte Carlo estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaConfig {
    pub eta: f64,
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    pub workers: usize,
}

impl GammaConfig {
    pub fn new(eta: f64, samples: usize, seed: u64) -> Self {
        GammaConfig {
            eta,
            samples,
            seed,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendPoint {
    pub samples: usize,
    pub value: f64,
}

/// Empirical `γ_{z,η}` (an upper estimate of the infimum).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaEstimate {
    pub value: f64,
    /// Samples drawn.
    pub samples: usize,
    /// Samples that passed the side conditions.
    pub usable: usize,
    pub eta: f64,
    /// Running minimum after 10, 100, 1000, … draws and at the end.
    pub trend: Vec<TrendPoint>,
    /// `max{2η^{1−α}, 2/γ̂}`.
    pub kappa: f64,
}

/// Independent stream per sample index: any schedule gives the same draws.
fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Fills `out[i] = f(i)` using up to `workers` threads.
fn parallel_map<T: Send, F: Fn(usize) -> T + Sync>(n: usize, workers: usize, f: F) -> Vec<T> {
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(workers);
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    let lo = (w * chunk).min(n);
                    let hi = ((w + 1) * chunk).min(n);
                    (lo..hi).map(f).collect::<Vec<T>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Draws `v ∈ ∂K_p ∩ B(η)`: Gaussian tail direction on the unit p-sphere, radius uniform in `(0, η/2]`.
fn boundary_sample(ray: &ExposedRay, eta: f64, rng: &mut ChaCha8Rng) -> Option<ConePoint> {
    let g = gaussian_vec(rng, ray.n());
    let gn = pnorm(&g, ray.p.p());
    if gn == 0.0 {
        return None;
    }
    let r = 0.5 * eta * (1.0 - rng.random::<f64>());
    let v = ConePoint::new(r, g.iter().map(|x| r * x / gn).collect());
    (v.norm() <= eta).then_some(v)
}

fn gamma_ratio(ray: &ExposedRay, v: &ConePoint) -> Option<f64> {
    if ray.dist_face(v) < 1e-12 * v.norm() {
        return None;
    }
    let d = ray_distances(v, ray);
    if !(d.du_w > 0.0) {
        return None;
    }
    Some(d.dv_w.powf(ray.alpha.value()) / d.du_w)
}

pub fn estimate_gamma(ray: &ExposedRay, eta: f64, n_samples: usize, seed: u64) -> Result<GammaEstimate> {
    estimate_gamma_with(ray, &GammaConfig::new(eta, n_samples, seed))
}

pub fn estimate_gamma_with(ray: &ExposedRay, cfg: &GammaConfig) -> Result<GammaEstimate> {
    if !(cfg.eta > 0.0) || cfg.samples == 0 {
        return Err(Error::invalid("need η > 0 and at least one sample"));
    }
    if ray.n() < 2 {
        // every boundary point lies on F or on the opposite ray
        return Err(Error::invalid("K_p^2 is polyhedral: γ is infinite, pass it explicitly"));
    }
    let ratios = parallel_map(cfg.samples, cfg.workers, |i| {
        let mut rng = sample_rng(cfg.seed, i);
        boundary_sample(ray, cfg.eta, &mut rng).and_then(|v| gamma_ratio(ray, &v))
    });
    let mut best = f64::INFINITY;
    let mut usable = 0;
    let mut trend = Vec::new();
    let mut next_mark = 10;
    for (k, r) in ratios.iter().enumerate() {
        if let Some(r) = r {
            usable += 1;
            best = best.min(*r);
        }
        if k + 1 == next_mark {
            if best.is_finite() {
                trend.push(TrendPoint { samples: k + 1, value: best });
            }
            next_mark *= 10;
        }
    }
    if usable == 0 || !(best > 0.0) {
        return Err(Error::Numerical {
            what: "γ estimate (no usable samples)",
            iterations: cfg.samples,
            residual: best,
        });
    }
    if trend.last().map(|t| t.samples) != Some(cfg.samples) {
        trend.push(TrendPoint {
            samples: cfg.samples,
            value: best,
        });
    }
    Ok(GammaEstimate {
        value: best,
        samples: cfg.samples,
        usable,
        eta: cfg.eta,
        trend,
        kappa: error_bound_constant(ray, cfg.eta, best),
    })
}

/// `κ_{z,η} = max{2η^{1−α}, 2/γ}`.
pub fn error_bound_constant(ray: &ExposedRay, eta: f64, gamma: f64) -> f64 {
    (2.0 * eta.powf(1.0 - ray.alpha.value())).max(2.0 / gamma)
}

/// Outcome of checking `dist(x, F_z) ≤ κ·dist(x, K)^α` on held-out points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub samples: usize,
    pub violations: usize,
    /// Largest `dist(x,F) / (κ·dist(x,K)^α)` observed.
    pub worst_ratio: f64,
    pub kappa: f64,
}

/// Held-out points in `{z}^⊥ ∩ B(η)`: even indices are generic, odd ones
/// hug the face (`τf + h` with `‖h‖/τ` log-uniform in `[1e−5, 1]`).
pub fn check_error_bound(ray: &ExposedRay, gamma_hat: f64, cfg: &GammaConfig) -> Result<BoundCheck> {
    if !(gamma_hat > 0.0) {
        return Err(Error::invalid("γ̂ must be positive"));
    }
    let alpha = ray.alpha.value();
    let kappa = error_bound_constant(ray, cfg.eta, gamma_hat);
    let p = ray.p;
    let fnorm = ray.f.norm();
    let seed = cfg.seed ^ 0x9e37_79b9_7f4a_7c15;
    let results = parallel_map(cfg.samples, cfg.workers, |i| -> Result<Option<f64>> {
        let mut rng = sample_rng(seed, i);
        let g = ConePoint::from_slice(&gaussian_vec(&mut rng, ray.n() + 1)).expect("n ≥ 1");
        let dir = ray.project_hyperplane(&g);
        let dn = dir.norm();
        if dn == 0.0 {
            return Ok(None);
        }
        let (dk, df) = if i % 2 == 0 {
            let r = cfg.eta * (1.0 - rng.random::<f64>());
            let x = dir.scale(r / dn);
            let dk = project_cone(&x, &p, 1e-14)?.distance;
            let df = ray.dist_face(&x);
            // on the face up to rounding: the bound holds trivially
            if df <= 1e-12 * x.norm() {
                return Ok(None);
            }
            (dk, df)
        } else {
            let rel = 10f64.powf(-5.0 * rng.random::<f64>());
            let tau = cfg.eta * (1.0 - rng.random::<f64>()) / (fnorm * (1.0 + rel));
            let h = dir.scale(tau * fnorm * rel / dn);
            // fold the component along f into the base so the offset has no
            // first-order part that would cancel in the boundary gap
            let c = ray.f.dot(&h) / ray.f.dot(&ray.f);
            let b = ray.f.scale(tau + c);
            let mut h = h.axpy(-c, &ray.f);
            if ray.support.len() == 1 {
                // {z}^⊥ ∩ {f}^⊥ is then exactly the span of the off-support axes
                h.x0 = 0.0;
                h.xbar[ray.support[0]] = 0.0;
            }
            (offset_distance(&b, &h, p.p())?, offset_ray_distance(&ray.f, &h))
        };
        if df == 0.0 {
            return Ok(None);
        }
        Ok(Some(df / (kappa * dk.powf(alpha))))
    });
    let mut samples = 0;
    let mut violations = 0;
    let mut worst = 0.0f64;
    for r in results {
        if let Some(ratio) = r? {
            samples += 1;
            worst = worst.max(ratio);
            if ratio > 1.0 + 1e-9 {
                violations += 1;
            }
        }
    }
    Ok(BoundCheck {
        samples,
        violations,
        worst_ratio: worst,
        kappa,
    })
}
