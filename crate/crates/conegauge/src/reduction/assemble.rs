use serde::Serialize;

use super::chain::{verify_certificate, ReductionChain, Transition, VerifiedChain};
use super::problem::{norm, Block, FeasProblem};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, Rational};
use crate::frf::{diamond, expcone_g, frf_from_g, pcone_frf, rescaled_shift, sum_product_frf, ExpFaceTag, FrfExpr};
use crate::pcone::{pnorm, ExposedRay};
use crate::tightness::{estimate_gamma_with, GammaConfig};

/// Where the `γ̂` of ray steps comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaChoice {
    Fixed { value: f64 },
    Estimate { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssembleOptions {
    /// Norm bound `t` the residual functions are evaluated at.
    pub t: f64,
    pub gamma: GammaChoice,
    /// Constant in front of `√·` for `F_β` steps of the exponential cone.
    pub exp_beta_kappa: f64,
    pub workers: usize,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions {
            t: 1.0,
            gamma: GammaChoice::Estimate {
                samples: 20_000,
                seed: 0x5eed,
            },
            exp_beta_kappa: 1.0,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFrf {
    pub step: usize,
    /// Argument scaling of the product rule, `1 + Σ_j ‖z_j‖`.
    pub kappa: f64,
    pub exponent: Exponent,
    pub blocks: Vec<FrfExpr>,
    pub frf: FrfExpr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assembly {
    /// `∏_i α_i`, each `α_i` the smallest block exponent of step `i`.
    pub exponent: Exponent,
    /// `ψ_{ℓ−1} ♦ (⋯ ♦ (ψ_2 ♦ ψ_1))`, or `ε` when `ℓ = 1`.
    pub frf: FrfExpr,
    pub faces_count: usize,
    pub steps: Vec<StepFrf>,
}

fn gamma_for(ray: &ExposedRay, t: f64, opts: &AssembleOptions) -> Result<f64> {
    if t == 0.0 {
        return Ok(f64::INFINITY);
    }
    match opts.gamma {
        GammaChoice::Fixed { value } => Ok(value),
        GammaChoice::Estimate { samples, seed } => {
            let cfg = GammaConfig::new(t, samples, seed).with_workers(opts.workers);
            Ok(estimate_gamma_with(ray, &cfg)?.value)
        }
    }
}

fn half() -> Exponent {
    Exponent::Exact(Rational::new(1, 2))
}

fn block_frf(tr: &Transition, step: usize, block: usize, opts: &AssembleOptions) -> Result<(FrfExpr, Exponent)> {
    let t = opts.t;
    Ok(match tr {
        Transition::Unchanged => (FrfExpr::linear(1.0, t)?, Exponent::one()),
        Transition::Interior { kappa, znorm } => {
            (FrfExpr::linear(kappa + kappa * znorm + 1.0, t)?, Exponent::one())
        }
        Transition::PolyhedralCut { ratios } => {
            let c: f64 = ratios.iter().map(|r| 1.0 / r).sum();
            let k = 1.0 + ratios.iter().map(|r| ((1.0 + c) * r).max(1.0)).sum::<f64>();
            (FrfExpr::linear(k, t)?, Exponent::one())
        }
        Transition::PconeRay { ray } => (pcone_frf(ray, t, gamma_for(ray, t, opts)?)?, ray.alpha),
        Transition::RsocRay { soc_ray } => {
            // Pull the K_2 residual function back through T: ‖T‖ = 2, ‖T^{-1}‖ = 1/√2.
            let psi = pcone_frf(soc_ray, 2.0 * t, gamma_for(soc_ray, 2.0 * t, opts)?)?;
            (rescaled_shift(&psi, 2.0, 0.5, std::f64::consts::FRAC_1_SQRT_2, 0.0)?, soc_ray.alpha)
        }
        Transition::ExpBeta { znorm, .. } => {
            let g = frf_from_g(expcone_g(ExpFaceTag::Beta), *znorm, opts.exp_beta_kappa)?;
            let e = g.to_expr(t).ok_or_else(|| Error::invalid("power residual expected"))?;
            (e, half())
        }
        Transition::ExpPlusInfinity => {
            return Err(Error::NonHolder(format!(
                "step {step}, block {block}: the face F_∞ has residual −1/ln(t), which is not a power"
            )))
        }
        Transition::ExpMinusInfinity => {
            return Err(Error::NonHolder(format!(
                "step {step}, block {block}: the face F_−∞ has residual −t·ln(t), which is not a power"
            )))
        }
    })
}

/// Combines a verified chain into the composite residual function and its exponent.
pub fn assemble_exponent(chain: &VerifiedChain, opts: &AssembleOptions) -> Result<Assembly> {
    if !(opts.t >= 0.0) {
        return Err(Error::invalid("t must be nonnegative"));
    }
    let mut steps = Vec::with_capacity(chain.steps.len());
    let mut exponent = Exponent::one();
    let mut acc: Option<FrfExpr> = None;
    for step in &chain.steps {
        let mut blocks = Vec::with_capacity(step.blocks.len());
        let mut alpha = Exponent::one();
        let mut kappa = 1.0;
        for bs in &step.blocks {
            let (f, a) = block_frf(&bs.transition, step.step, bs.block, opts)?;
            blocks.push(f);
            alpha = alpha.min(a);
            kappa += bs.znorm;
        }
        let frf = sum_product_frf(&blocks, kappa)?;
        exponent = exponent.mul(alpha);
        acc = Some(match acc {
            None => frf.clone(),
            Some(prev) => diamond(&frf, &prev)?,
        });
        steps.push(StepFrf {
            step: step.step,
            kappa,
            exponent: alpha,
            blocks,
            frf,
        });
    }
    let frf = match acc {
        Some(f) => f,
        None => FrfExpr::linear(1.0, opts.t)?,
    };
    Ok(Assembly {
        exponent,
        frf,
        faces_count: chain.faces_count,
        steps,
    })
}

/// [`verify_certificate`] followed by [`assemble_exponent`].
pub fn assemble_chain(
    problem: &FeasProblem,
    chain: &ReductionChain,
    tol: f64,
    opts: &AssembleOptions,
) -> Result<(VerifiedChain, Assembly)> {
    let v = verify_certificate(problem, chain, tol)?;
    let a = assemble_exponent(&v, opts)?;
    Ok((v, a))
}

/// Outcome of the Lipschitz shortcut.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LipschitzClass {
    /// The hint is a strictly feasible point: exponent 1.
    Slater { affine_residual: f64, min_slack: f64 },
    /// Declared `(L + a) ∩ K = {0}`: exponent 1.
    ZeroIntersection,
    NeedsChain { reason: String },
}

impl LipschitzClass {
    pub fn exponent(&self) -> Option<Exponent> {
        match self {
            LipschitzClass::NeedsChain { .. } => None,
            _ => Some(Exponent::one()),
        }
    }
}

/// Smallest interiority slack over the blocks of `x`.
fn interior_slack(problem: &FeasProblem, x: &[f64]) -> f64 {
    problem
        .cone
        .blocks
        .iter()
        .zip(problem.cone.split(x))
        .map(|(b, xb)| match b {
            Block::Pcone { p, .. } => xb[0] - pnorm(&xb[1..], p.p()),
            Block::Rsoc { .. } => {
                let (t, u) = (xb[0], xb[1]);
                t + u - ((t - u).powi(2) + 4.0 * xb[2..].iter().map(|v| v * v).sum::<f64>()).sqrt()
            }
            Block::Expcone => {
                let (a, y, z) = (xb[0], xb[1], xb[2]);
                if y <= 0.0 {
                    y
                } else {
                    (z - y * (a / y).exp()).min(y)
                }
            }
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn lipschitz_cases(
    problem: &FeasProblem,
    hint: Option<&[f64]>,
    zero_intersection: bool,
    tol: f64,
) -> Result<LipschitzClass> {
    if zero_intersection {
        return Ok(LipschitzClass::ZeroIntersection);
    }
    let Some(x) = hint else {
        return Ok(LipschitzClass::NeedsChain {
            reason: "no strictly feasible hint supplied".into(),
        });
    };
    if x.len() != problem.dim() {
        return Err(Error::invalid(format!(
            "hint has length {}, expected {}",
            x.len(),
            problem.dim()
        )));
    }
    let res = problem.affine_residual(x);
    let scale = norm(problem.rhs()).max(1.0);
    if res > tol * scale {
        return Ok(LipschitzClass::NeedsChain {
            reason: format!("hint violates Ax = b (residual {res:e})"),
        });
    }
    let slack = interior_slack(problem, x);
    if slack > tol {
        Ok(LipschitzClass::Slater {
            affine_residual: res,
            min_slack: slack,
        })
    } else {
        Ok(LipschitzClass::NeedsChain {
            reason: format!("hint is not strictly interior (slack {slack:e})"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::problem::{ConeSpec, MatrixInput};
    use super::*;
    use crate::pcone::PExponent;

    fn pc(p: f64, dim: usize) -> Block {
        Block::Pcone {
            p: PExponent::new(p).unwrap(),
            dim,
        }
    }

    fn fixed() -> AssembleOptions {
        AssembleOptions {
            gamma: GammaChoice::Fixed { value: 1.0 },
            ..Default::default()
        }
    }

    fn one_row(blocks: Vec<Block>, row: Vec<f64>) -> FeasProblem {
        FeasProblem::new(ConeSpec::new(blocks).unwrap(), MatrixInput::Rows(vec![row]), vec![0.0]).unwrap()
    }

    fn run(fp: &FeasProblem, zs: Vec<Vec<f64>>) -> Assembly {
        assemble_chain(fp, &ReductionChain::new(zs), 1e-9, &fixed()).unwrap().1
    }

    #[test]
    fn single_block_examples() {
        let zbar = [0.4, -0.9];
        let z3 = pnorm(&zbar, 1.5);
        let z = vec![z3, zbar[0], zbar[1]];
        let a = run(&one_row(vec![pc(3.0, 3)], z.clone()), vec![z]);
        assert_eq!(a.exponent, Exponent::Exact(Rational::new(1, 2)));
        assert_eq!(a.frf.dominant_exponent(), Rational::new(1, 2));

        let z = vec![1.0, -1.0, 0.0];
        let a = run(&one_row(vec![pc(1.5, 3)], z.clone()), vec![z]);
        assert_eq!(a.exponent, Exponent::Exact(Rational::new(2, 3)));
        assert_eq!(a.frf.dominant_exponent(), Rational::new(2, 3));
    }

    #[test]
    fn two_worst_rays_give_one_sixteenth() {
        let q = 4.0 / 3.0;
        let zb = [-1.0, -1.0, 0.0];
        let z0 = pnorm(&zb, q);
        let z1 = vec![z0, zb[0], zb[1], zb[2], 0.0, 0.0, 0.0, 0.0];
        let z2 = vec![0.0, 0.0, 0.0, 0.0, z0, zb[0], zb[1], zb[2]];
        let cone = ConeSpec::new(vec![pc(4.0, 4), pc(4.0, 4)]).unwrap();
        let fp = FeasProblem::new(cone, MatrixInput::Rows(vec![z1.clone(), z2.clone()]), vec![0.0, 0.0]).unwrap();
        let a = run(&fp, vec![z1, z2]);
        assert_eq!(a.exponent, Exponent::Exact(Rational::new(1, 16)));
        assert_eq!(a.frf.dominant_exponent(), Rational::new(1, 16));
    }

    #[test]
    fn empty_chain_is_linear() {
        let fp = one_row(vec![pc(3.0, 3)], vec![1.0, 0.0, 0.0]);
        let a = run(&fp, vec![]);
        assert_eq!(a.exponent, Exponent::one());
        assert_eq!(a.frf.eval(0.25), 0.25);
    }

    #[test]
    fn linear_steps() {
        let z = vec![2.0, 1.0, 0.0];
        let a = run(&one_row(vec![pc(3.0, 3)], z.clone()), vec![z]);
        assert_eq!(a.exponent, Exponent::one());

        // Ray face of K_exp cut down to {0} in a second step.
        let s1 = crate::expcone::beta_exposing(0.0);
        let g = [1.0, 1.0, 1f64.exp()];
        let s2 = vec![1.0, 0.0, 0.0];
        assert!(s2.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() > 0.0);
        let fp = FeasProblem::new(
            ConeSpec::new(vec![Block::Expcone]).unwrap(),
            MatrixInput::Rows(vec![s1.to_vec(), s2.clone()]),
            vec![0.0, 0.0],
        )
        .unwrap();
        let a = run(&fp, vec![s1.to_vec(), s2]);
        assert_eq!(a.exponent, Exponent::Exact(Rational::new(1, 2)));
        assert_eq!(a.steps[1].exponent, Exponent::one());
    }

    #[test]
    fn non_holder_exp_steps() {
        let fp = one_row(vec![Block::Expcone], vec![0.0, 1.0, 0.0]);
        let e = assemble_chain(&fp, &ReductionChain::new(vec![vec![0.0, 1.0, 0.0]]), 1e-9, &fixed()).unwrap_err();
        assert!(matches!(e, Error::NonHolder(_)), "{e}");
    }

    #[test]
    fn rsoc_ray_has_exponent_half() {
        let z = vec![1.0, 4.0, 4.0];
        let a = run(&one_row(vec![Block::Rsoc { dim: 3 }], z.clone()), vec![z]);
        assert_eq!(a.exponent, Exponent::Exact(Rational::new(1, 2)));
    }

    #[test]
    fn lipschitz_examples() {
        let cone = ConeSpec::new(vec![pc(3.0, 3)]).unwrap();
        let fp = FeasProblem::new(cone, MatrixInput::Rows(vec![vec![1.0, 0.0, 0.0]]), vec![2.0]).unwrap();
        let c = lipschitz_cases(&fp, Some(&[2.0, 1.0, 0.0]), false, 1e-9).unwrap();
        assert!(matches!(c, LipschitzClass::Slater { .. }));
        assert_eq!(c.exponent(), Some(Exponent::one()));
        let c = lipschitz_cases(&fp, None, false, 1e-9).unwrap();
        assert!(matches!(c, LipschitzClass::NeedsChain { .. }));
        assert_eq!(lipschitz_cases(&fp, None, true, 1e-9).unwrap(), LipschitzClass::ZeroIntersection);
        let c = lipschitz_cases(&fp, Some(&[2.0, 2.0, 0.0]), false, 1e-9).unwrap();
        assert!(matches!(c, LipschitzClass::NeedsChain { .. }));
    }
}
