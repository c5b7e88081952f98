//! Monte Carlo estimate of γ_{z,η} and a held-out check of the resulting error bound.

use std::time::Instant;

use conegauge::pcone::{face_from_exposing, pnorm, ConePoint, PExponent};
use conegauge::tightness::{check_error_bound, estimate_gamma_with, GammaConfig};

fn main() -> conegauge::Result<()> {
    let configs: [(f64, Vec<f64>, f64, u64); 5] = [
        (2.0, vec![-1.0, 0.0], 1.0, 11),
        (3.0, vec![-0.6, 0.8], 1.0, 12),
        (1.5, vec![0.0, -1.0, 0.0], 0.5, 13),
        (5.0, vec![-1.0, 0.0, 0.0, 0.0], 2.0, 14),
        (3.0, vec![0.3, -0.5, 0.0, 0.9], 1.0, 15),
    ];
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    for (p, zbar, eta, seed) in configs {
        let pe = PExponent::new(p)?;
        let z = ConePoint::new(pnorm(&zbar, pe.q()), zbar);
        let ray = face_from_exposing(&z, &pe, 1e-10)?;
        let t0 = Instant::now();
        let cfg = GammaConfig::new(eta, 100_000, seed).with_workers(workers);
        let est = estimate_gamma_with(&ray, &cfg)?;
        let check = check_error_bound(&ray, est.value, &GammaConfig::new(eta, 1000, seed).with_workers(workers))?;
        println!(
            "p = {p:<4} |J_z| = {} α = {:<4} η = {eta}: γ̂ = {:.5} (usable {}), κ = {:.4}; held-out violations {} / {}, worst ratio {:.4}  [{:.2?}]",
            ray.support.len(),
            ray.alpha.to_string(),
            est.value,
            est.usable,
            est.kappa,
            check.violations,
            check.samples,
            check.worst_ratio,
            t0.elapsed()
        );
        let trend: Vec<String> = est.trend.iter().map(|t| format!("{}:{:.4}", t.samples, t.value)).collect();
        println!("    trend {}", trend.join("  "));
    }
    Ok(())
}
