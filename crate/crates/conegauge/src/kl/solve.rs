use serde::Serialize;

use super::instance::RegLsInstance;
use super::prox::prox_pnorm;
use crate::error::{Error, Result};
use crate::expcone::{self, ExpFace};
use crate::pcone::{classify_exposing, pnorm, ConePoint, ExposingClass, DEFAULT_ZERO_TOL};
use crate::reduction::{Block, ConeSpec};
use crate::rsoc::{self, RsocFace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum StepRule {
    /// `0.99 / L` with `L` from power iteration on `AᵀA`.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveOptions {
    pub step: StepRule,
    pub max_iter: usize,
    /// Stop once `‖x^{k+1} − x^k‖ ≤ tol`.
    pub tol: f64,
    /// Tolerance of the inner q-ball projections.
    pub prox_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            step: StepRule::Auto,
            max_iter: 200_000,
            tol: 1e-12,
            prox_tol: 1e-15,
        }
    }
}

/// Why the iteration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    StepTolerance,
    /// The next objective value rose by a rounding-level amount (≤ 1e−10,
    /// relative); that iterate is discarded.
    Stagnation,
    IterationCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    pub objective: f64,
    pub step_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub x: Vec<f64>,
    pub objective: f64,
    pub trace: Vec<TraceRow>,
    pub converged: bool,
    pub stop: StopReason,
    pub step: f64,
    pub lipschitz: f64,
    /// `‖x − prox_{τh}(x − τ∇f(x))‖ / τ` at the returned iterate.
    pub optimality: f64,
}

impl SolveResult {
    /// The trace as CSV with a header, 17 significant digits.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iter,objective,step_norm\n");
        for r in &self.trace {
            out.push_str(&format!("{},{:.16e},{:.16e}\n", r.iter, r.objective, r.step_norm));
        }
        out
    }
}

const POWER_ITERS: usize = 100;
const POWER_TOL: f64 = 1e-6;

/// Largest eigenvalue of `AᵀA` by power iteration.
///
/// Falls back to `‖A‖_F²`, an upper bound, when the iteration has not settled.
pub fn lipschitz_constant(inst: &RegLsInstance) -> f64 {
    let n = inst.n();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 / (1.0 + i as f64)).collect();
    let mut lam = 0.0;
    let mut settled = false;
    for _ in 0..POWER_ITERS {
        let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if nv == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|a| *a /= nv);
        let w = inst.apply_t(&inst.apply(&v));
        let next: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        v = w;
        if (next - lam).abs() <= POWER_TOL * next.abs() {
            lam = next;
            settled = true;
            break;
        }
        lam = next;
    }
    if settled {
        lam
    } else {
        inst.matrix().iter().flatten().map(|a| a * a).sum()
    }
}

fn prox_step(inst: &RegLsInstance, x: &[f64], tau: f64, prox_tol: f64) -> Result<Vec<f64>> {
    let g = inst.gradient(x);
    let y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - tau * b).collect();
    let p = inst.p();
    let mut out = vec![0.0; y.len()];
    for (blk, l) in inst.blocks().into_iter().zip(inst.lambdas()) {
        let pr = prox_pnorm(&y[blk.clone()], &p, tau * l, prox_tol)?;
        out[blk].copy_from_slice(&pr);
    }
    Ok(out)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Proximal gradient from `x = 0`.
///
/// Every recorded iterate has an objective no larger than the one before.
pub fn solve_prox_grad(inst: &RegLsInstance, opts: &SolveOptions) -> Result<SolveResult> {
    let lipschitz = lipschitz_constant(inst);
    let step = match opts.step {
        StepRule::Auto if lipschitz > 0.0 => 0.99 / lipschitz,
        StepRule::Auto => 1.0,
        StepRule::Fixed(s) if s > 0.0 => s,
        StepRule::Fixed(s) => return Err(Error::invalid(format!("step must be positive, got {s}"))),
    };
    let mut x = vec![0.0; inst.n()];
    let mut obj = inst.objective(&x);
    let mut trace = vec![TraceRow {
        iter: 0,
        objective: obj,
        step_norm: 0.0,
    }];
    let mut stop = StopReason::IterationCap;
    for k in 1..=opts.max_iter {
        let next = prox_step(inst, &x, step, opts.prox_tol)?;
        let sn = dist(&next, &x);
        let nobj = inst.objective(&next);
        if nobj > obj + 1e-10 * obj.abs().max(1.0) {
            return Err(Error::Numerical {
                what: "proximal gradient (objective increased; step too large?)",
                iterations: k,
                residual: nobj - obj,
            });
        }
        if nobj > obj {
            stop = StopReason::Stagnation;
            break;
        }
        x = next;
        obj = nobj;
        trace.push(TraceRow {
            iter: k,
            objective: obj,
            step_norm: sn,
        });
        if sn <= opts.tol {
            stop = StopReason::StepTolerance;
            break;
        }
    }
    let optimality = dist(&x, &prox_step(inst, &x, step, opts.prox_tol)?) / step;
    Ok(SolveResult {
        x,
        objective: obj,
        trace,
        converged: stop != StopReason::IterationCap,
        stop,
        step,
        lipschitz,
        optimality,
    })
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `v` lies in `ri cone(gens)` for pairwise-orthogonal generators.
fn in_relint_generated(v: &[f64], gens: &[Vec<f64>], tol: f64) -> bool {
    let mut rest = v.to_vec();
    let mut coeffs = Vec::with_capacity(gens.len());
    for g in gens {
        let c = dot(v, g) / dot(g, g);
        rest.iter_mut().zip(g).for_each(|(r, gi)| *r -= c * gi);
        coeffs.push(c * norm(g));
    }
    norm(&rest) <= tol * norm(v).max(1.0) && coeffs.iter().all(|&c| c > tol)
}

fn strictly_interior(block: &Block, v: &[f64], tol: f64) -> bool {
    match block {
        Block::Pcone { p, .. } => v[0] - pnorm(&v[1..], p.p()) > tol,
        Block::Rsoc { .. } => {
            let s = rsoc::to_soc(v);
            s[0] - norm(&s[1..]) > tol
        }
        Block::Expcone => v[1] > tol && v[2] - v[1] * (v[0] / v[1]).exp() > tol,
    }
}

fn in_block_cone(block: &Block, v: &[f64], tol: f64) -> bool {
    match block {
        Block::Pcone { p, .. } => v[0] - pnorm(&v[1..], p.p()) >= -tol,
        Block::Rsoc { .. } => rsoc::in_cone(v, tol),
        Block::Expcone => expcone::in_cone(&[v[0], v[1], v[2]], tol),
    }
}

fn in_block_dual(block: &Block, s: &[f64], tol: f64) -> bool {
    match block {
        Block::Pcone { p, .. } => s[0] - pnorm(&s[1..], p.q()) >= -tol,
        Block::Rsoc { .. } => rsoc::in_dual(s, tol),
        Block::Expcone => expcone::in_dual(&[s[0], s[1], s[2]], tol),
    }
}

/// `v* ∈ ri(K ∩ {s*}^⊥)`, block by block.
pub fn check_strict_complementarity(v: &[f64], s: &[f64], cone: &ConeSpec, tol: f64) -> Result<bool> {
    let n = cone.dim();
    if v.len() != n || s.len() != n {
        return Err(Error::invalid(format!("v* and s* must have length {n}")));
    }
    let gap = dot(v, s);
    if gap.abs() > tol * norm(v).max(1.0) * norm(s).max(1.0) {
        return Err(Error::verification(format!("⟨v*, s*⟩ = {gap:e} is not zero")));
    }
    let mut all = true;
    for (i, ((block, vb), sb)) in cone.blocks.iter().zip(cone.split(v)).zip(cone.split(s)).enumerate() {
        if !in_block_cone(block, vb, tol) || !in_block_dual(block, sb, tol) {
            return Err(Error::invalid(format!("block {i}: v* or s* is not conic feasible")));
        }
        let ok = if norm(sb) == 0.0 {
            strictly_interior(block, vb, tol)
        } else {
            match block {
                Block::Pcone { p, .. } => {
                    let sp = ConePoint::from_slice(sb)?;
                    match classify_exposing(&sp, p, tol, DEFAULT_ZERO_TOL) {
                        ExposingClass::Ray(r) => in_relint_generated(vb, &[r.f.to_vec()], tol),
                        ExposingClass::Zero => norm(vb) <= tol,
                        ExposingClass::Full => strictly_interior(block, vb, tol),
                        ExposingClass::NotDual(_) => unreachable!("checked above"),
                    }
                }
                Block::Rsoc { .. } => match rsoc::classify_exposing(sb, tol)? {
                    RsocFace::Ray(f) => in_relint_generated(vb, &[f], tol),
                    RsocFace::Zero => norm(vb) <= tol,
                    RsocFace::Full => strictly_interior(block, vb, tol),
                },
                Block::Expcone => match expcone::classify_exposing(&[sb[0], sb[1], sb[2]], tol)? {
                    ExpFace::Full => strictly_interior(block, vb, tol),
                    ExpFace::Zero => norm(vb) <= tol,
                    face => {
                        let gens: Vec<Vec<f64>> = face.generators().iter().map(|g| g.to_vec()).collect();
                        in_relint_generated(vb, &gens, tol)
                    }
                },
            }
        };
        all &= ok;
    }
    Ok(all)
}
