use serde::Serialize;

use super::witness::{WitnessCurve, WitnessSample};
use crate::error::{Error, Result};
use crate::frf::GFunction;

/// `count` log-spaced points from `eps_max` down to `eps_min`.
pub fn log_grid(eps_min: f64, eps_max: f64, count: usize) -> Result<Vec<f64>> {
    if !(eps_min > 0.0 && eps_max <= 1.0 && eps_min < eps_max) || count < 2 {
        return Err(Error::invalid(format!(
            "grid needs 0 < eps_min < eps_max ≤ 1 and ≥ 2 points (got {eps_min}, {eps_max}, {count})"
        )));
    }
    let (a, b) = (eps_max.ln(), eps_min.ln());
    Ok((0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect())
}

/// The default grid: 12 points from 1e−2 down to 1e−6.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-6, 1e-2, 12).expect("static grid")
}

/// Number of trailing (smallest-ε) grid points the limsup looks at.
pub const LIMSUP_TAIL: usize = 4;

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("empty ε grid"));
    }
    if grid.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::invalid("ε grid must lie in (0, 1]"));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("ε grid must be strictly decreasing"));
    }
    Ok(())
}

/// Log-log least-squares slope of `dist(w_ε, K)` against `dist(w_ε, F)`.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub samples: Vec<WitnessSample>,
}

pub fn fit_exponent(curve: &WitnessCurve, grid: &[f64]) -> Result<ExponentFit> {
    check_grid(grid)?;
    if grid.len() < 5 {
        return Err(Error::invalid("slope fit needs at least 5 grid points"));
    }
    let samples = grid
        .iter()
        .map(|&e| curve.sample(e))
        .collect::<Result<Vec<_>>>()?;
    let mut xs = Vec::with_capacity(samples.len());
    let mut ys = Vec::with_capacity(samples.len());
    for s in &samples {
        if !(s.dist_f > 0.0) || !s.ln_dist_k.is_finite() {
            return Err(Error::invalid(format!(
                "nonpositive distance at ε = {} (dist_K = {}, dist_F = {})",
                s.eps, s.dist_k, s.dist_f
            )));
        }
        xs.push(s.dist_f.ln());
        ys.push(s.ln_dist_k);
    }
    let (slope, intercept, r2) = ols(&xs, &ys)?;
    Ok(ExponentFit {
        slope,
        intercept,
        r2,
        samples,
    })
}

pub(crate) fn ols(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 1e-300) {
        return Err(Error::invalid("degenerate grid: zero variance in log dist_F"));
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Ok((slope, my - slope * mx, r2))
}

/// One row of the limsup table.
#[derive(Debug, Clone, Serialize)]
pub struct G1Row {
    pub eps: f64,
    pub dist_k: f64,
    pub dist_f: f64,
    pub ratio: f64,
}

/// Tail maximum of `g(dist(w_ε, K)) / dist(w_ε, F)`.
#[derive(Debug, Clone, Serialize)]
pub struct G1Estimate {
    pub estimate: f64,
    pub table: Vec<G1Row>,
    pub warnings: Vec<String>,
}

pub fn g1_limsup(curve: &WitnessCurve, g: &GFunction, grid: &[f64]) -> Result<G1Estimate> {
    check_grid(grid)?;
    let mut table = Vec::with_capacity(grid.len());
    let mut warnings = Vec::new();
    for &eps in grid {
        let s = curve.sample(eps)?;
        let ratio = match g.eval_ln(s.ln_dist_k) {
            Ok(lg) => (lg - s.dist_f.ln()).exp(),
            Err(e) => {
                warnings.push(format!("ε = {eps}: {e}"));
                f64::NAN
            }
        };
        if !ratio.is_finite() && !ratio.is_nan() {
            warnings.push(format!("ε = {eps}: ratio {ratio} (face distance underflow)"));
        }
        table.push(G1Row {
            eps,
            dist_k: s.dist_k,
            dist_f: s.dist_f,
            ratio,
        });
    }
    let tail = &table[table.len().saturating_sub(LIMSUP_TAIL)..];
    let usable: Vec<f64> = tail.iter().map(|r| r.ratio).filter(|r| r.is_finite()).collect();
    if usable.is_empty() {
        return Err(Error::Numerical {
            what: "limsup estimate (no finite ratios in the tail)",
            iterations: tail.len(),
            residual: f64::NAN,
        });
    }
    let estimate = usable.into_iter().fold(f64::NEG_INFINITY, f64::max);
    Ok(G1Estimate {
        estimate,
        table,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = default_grid();
        assert_eq!(g.len(), 12);
        assert!((g[0] - 1e-2).abs() < 1e-17 && (g[11] - 1e-6).abs() < 1e-20);
        assert!(log_grid(1e-2, 1e-3, 5).is_err());
    }

    #[test]
    fn ols_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let (s, i, r2) = ols(&xs, &ys).unwrap();
        assert!((s - 2.0).abs() < 1e-15 && (i - 1.0).abs() < 1e-15 && (r2 - 1.0).abs() < 1e-15);
        assert!(ols(&[1.0; 3], &ys[..3]).is_err());
    }
}
