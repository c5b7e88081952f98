use serde::{Deserialize, Serialize};

use super::problem::{norm, Block, FeasProblem};
use crate::error::{Error, Result};
use crate::expcone::{self, ExpFace};
use crate::pcone::{classify_exposing, face_from_exposing, pnorm, ConePoint, ExposedRay, ExposingClass, PExponent, DEFAULT_ZERO_TOL};
use crate::rsoc::{self, RsocFace};

/// Reducing certificates `z_1, …, z_{ℓ−1}`; the empty chain means `ℓ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ReductionChain {
    pub certificates: Vec<Vec<f64>>,
}

impl ReductionChain {
    pub fn new(certificates: Vec<Vec<f64>>) -> Self {
        ReductionChain { certificates }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("chain JSON: {e}")))
    }

    /// Number of faces `ℓ`.
    pub fn len_faces(&self) -> usize {
        self.certificates.len() + 1
    }
}

/// The current face of one block.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockFace {
    Full,
    /// `cone(generators)`; the generators are pairwise orthogonal.
    Polyhedral { generators: Vec<Vec<f64>> },
    Zero,
}

impl BlockFace {
    pub fn label(&self) -> &'static str {
        match self {
            BlockFace::Full => "full",
            BlockFace::Polyhedral { generators } if generators.len() == 1 => "ray",
            BlockFace::Polyhedral { .. } => "polyhedral",
            BlockFace::Zero => "zero",
        }
    }
}

/// How one block's face changed in one step; carries what the FRF needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transition {
    Unchanged,
    /// Full p-cone to an exposed ray.
    PconeRay { ray: ExposedRay },
    /// Full rotated cone to a ray; `soc_ray` is its image under `T`.
    RsocRay { soc_ray: ExposedRay },
    ExpBeta { beta: f64, znorm: f64 },
    ExpPlusInfinity,
    ExpMinusInfinity,
    /// Full block to `{0}` with `‖y‖ ≤ κ⟨y, z⟩` on the block.
    Interior { kappa: f64, znorm: f64 },
    /// Polyhedral face to a smaller one; `ratios` are `‖g‖/⟨g, z⟩` for dropped generators.
    PolyhedralCut { ratios: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockStep {
    pub block: usize,
    /// `‖z_i‖` restricted to this block.
    pub znorm: f64,
    /// Amount by which `z_i` misses the dual of the current face (0 when inside).
    pub dual_residual: f64,
    pub from: BlockFace,
    pub to: BlockFace,
    pub transition: Transition,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    /// One-based step index.
    pub step: usize,
    pub znorm: f64,
    /// `dist(z, L^⊥)`.
    pub lperp_residual: f64,
    /// `|⟨z, a⟩|`.
    pub a_residual: f64,
    pub blocks: Vec<BlockStep>,
}

/// A chain that passed [`verify_certificate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifiedChain {
    pub tol: f64,
    pub faces_count: usize,
    pub steps: Vec<StepReport>,
    /// Faces after each step, starting with the full cone.
    pub faces: Vec<Vec<BlockFace>>,
}

/// `min{#nonpolyhedral blocks, dim(L^⊥ ∩ {a}^⊥)}`.
pub fn dpps_upper_bound(problem: &FeasProblem) -> usize {
    problem.cone.nonpolyhedral_blocks().min(problem.dim_lperp_aperp())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Checks every step: `z_i ∈ F_i* ∩ L^⊥ ∩ {a}^⊥` and the faces strictly shrink.
///
/// `tol` is relative to `max(1, ‖z_i‖)`.
pub fn verify_certificate(problem: &FeasProblem, chain: &ReductionChain, tol: f64) -> Result<VerifiedChain> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = problem.dim();
    let mut faces = vec![vec![BlockFace::Full; problem.cone.blocks.len()]];
    let mut steps = Vec::with_capacity(chain.certificates.len());
    for (k, z) in chain.certificates.iter().enumerate() {
        let step = k + 1;
        if z.len() != n {
            return Err(Error::invalid(format!(
                "certificate {step} has length {}, expected {n}",
                z.len()
            )));
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("certificate {step} is not finite")));
        }
        let znorm = norm(z);
        let scale = znorm.max(1.0);
        let lperp = problem.lperp_residual(z);
        if lperp > tol * scale {
            return Err(Error::verification(format!(
                "step {step}: z is not in L^⊥ (distance {lperp:e})"
            )));
        }
        let za = problem.inner_with_particular(z);
        let a_scale = scale * norm(&problem.particular()).max(1.0);
        if za.abs() > tol * a_scale {
            return Err(Error::verification(format!(
                "step {step}: ⟨z, a⟩ = {za:e} is not zero"
            )));
        }
        let current = faces.last().expect("initial faces");
        let mut next = Vec::with_capacity(current.len());
        let mut blocks = Vec::with_capacity(current.len());
        for (bi, ((block, zb), from)) in problem
            .cone
            .blocks
            .iter()
            .zip(problem.cone.split(z))
            .zip(current)
            .enumerate()
        {
            let (to, transition, dual_residual) = block_step(block, zb, from, tol)
                .map_err(|e| match e {
                    Error::Verification(m) => {
                        Error::verification(format!("step {step}, block {bi} ({}): {m}", block.name()))
                    }
                    other => other,
                })?;
            next.push(to.clone());
            blocks.push(BlockStep {
                block: bi,
                znorm: norm(zb),
                dual_residual,
                from: from.clone(),
                to,
                transition,
            });
        }
        if next == *current {
            return Err(Error::verification(format!(
                "step {step}: no block face changes, the chain does not strictly decrease"
            )));
        }
        steps.push(StepReport {
            step,
            znorm,
            lperp_residual: lperp,
            a_residual: za.abs(),
            blocks,
        });
        faces.push(next);
    }
    Ok(VerifiedChain {
        tol,
        faces_count: chain.len_faces(),
        steps,
        faces,
    })
}

fn block_step(block: &Block, z: &[f64], from: &BlockFace, tol: f64) -> Result<(BlockFace, Transition, f64)> {
    let zn = norm(z);
    if zn == 0.0 {
        return Ok((from.clone(), Transition::Unchanged, 0.0));
    }
    match from {
        BlockFace::Zero => Ok((BlockFace::Zero, Transition::Unchanged, 0.0)),
        BlockFace::Polyhedral { generators } => polyhedral_step(generators, z, tol),
        BlockFace::Full => match block {
            Block::Pcone { p, .. } => pcone_step(p, z, tol),
            Block::Rsoc { .. } => rsoc_step(z, tol),
            Block::Expcone => exp_step(z, tol),
        },
    }
}

fn pcone_step(p: &PExponent, z: &[f64], tol: f64) -> Result<(BlockFace, Transition, f64)> {
    let zp = ConePoint::from_slice(z)?;
    match classify_exposing(&zp, p, tol, DEFAULT_ZERO_TOL) {
        ExposingClass::Full => Ok((BlockFace::Full, Transition::Unchanged, 0.0)),
        ExposingClass::NotDual(g) => Err(Error::verification(format!(
            "z is not in the dual cone (‖z̄‖_q − z0 = {g:e})"
        ))),
        ExposingClass::Zero => {
            // ‖y‖ ≤ √(1 + n^{2c}) y0 and ⟨y, z⟩ ≥ y0 (z0 − ‖z̄‖_q) on K_p, c = max{0, 1/2 − 1/p}.
            let n = zp.n() as f64;
            let c = (0.5 - 1.0 / p.p()).max(0.0);
            let slack = zp.x0 - pnorm(&zp.xbar, p.q());
            let kappa = (1.0 + n.powf(2.0 * c)).sqrt() / slack;
            Ok((BlockFace::Zero, Transition::Interior { kappa, znorm: norm(z) }, 0.0))
        }
        ExposingClass::Ray(ray) => {
            let f = ray.f.to_vec();
            let gap = ray.z.x0 - zp.x0;
            Ok((
                BlockFace::Polyhedral { generators: vec![f] },
                Transition::PconeRay { ray },
                gap.max(0.0),
            ))
        }
    }
}

fn rsoc_step(z: &[f64], tol: f64) -> Result<(BlockFace, Transition, f64)> {
    // Dual of the rotated cone is mapped onto K_2 by W = ((a+b)/2, (a−b)/2, c/2).
    let w = {
        let mut w = vec![0.5 * (z[0] + z[1]), 0.5 * (z[0] - z[1])];
        w.extend(z[2..].iter().map(|c| 0.5 * c));
        w
    };
    let face = rsoc::classify_exposing(z, tol).map_err(|e| Error::verification(e.to_string()))?;
    match face {
        RsocFace::Full => Ok((BlockFace::Full, Transition::Unchanged, 0.0)),
        RsocFace::Zero => {
            let slack = w[0] - norm(&w[1..]);
            Ok((BlockFace::Zero, Transition::Interior { kappa: 1.0 / slack, znorm: norm(z) }, 0.0))
        }
        RsocFace::Ray(f) => {
            let p2 = PExponent::new(2.0)?;
            let wp = ConePoint::from_slice(&w)?;
            let soc_ray = face_from_exposing(&wp, &p2, DEFAULT_ZERO_TOL)
                .or_else(|_| match classify_exposing(&wp, &p2, 10.0 * tol, DEFAULT_ZERO_TOL) {
                    ExposingClass::Ray(r) => Ok(r),
                    _ => Err(Error::verification("rotated-cone certificate is not on the boundary")),
                })?;
            let gap = (norm(&w[1..]) - w[0]).max(0.0);
            Ok((BlockFace::Polyhedral { generators: vec![f] }, Transition::RsocRay { soc_ray }, gap))
        }
    }
}

fn exp_step(z: &[f64], tol: f64) -> Result<(BlockFace, Transition, f64)> {
    let s = [z[0], z[1], z[2]];
    let face = expcone::classify_exposing(&s, tol).map_err(|e| Error::verification(e.to_string()))?;
    let znorm = norm(z);
    let tr = match face {
        ExpFace::Full => Transition::Unchanged,
        ExpFace::Zero => Transition::Interior {
            kappa: 1.0 / exp_min_ratio(&s),
            znorm,
        },
        ExpFace::Beta(beta) => Transition::ExpBeta { beta, znorm },
        ExpFace::PlusInfinity => Transition::ExpPlusInfinity,
        ExpFace::MinusInfinity => Transition::ExpMinusInfinity,
    };
    let to = match face {
        ExpFace::Full => BlockFace::Full,
        ExpFace::Zero => BlockFace::Zero,
        _ => BlockFace::Polyhedral {
            generators: face.generators().iter().map(|g| g.to_vec()).collect(),
        },
    };
    Ok((to, tr, 0.0))
}

/// `min ⟨d, s⟩` over unit directions `d` of `K_exp`, attained on an extreme ray.
fn exp_min_ratio(s: &[f64; 3]) -> f64 {
    let unit = |r: f64| -> f64 {
        // (r, 1, e^r) scaled by e^{−r} for r > 0 to avoid overflow.
        let d = if r > 0.0 {
            let e = (-r).exp();
            [r * e, e, 1.0]
        } else {
            [r, 1.0, r.exp()]
        };
        dot(&d, s) / norm(&d)
    };
    let steps = 6000;
    let (lo, hi) = (-30.0f64, 30.0f64);
    let h = (hi - lo) / steps as f64;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..=steps {
        let u = lo + h * k as f64;
        let v = unit(u.sinh());
        if v < best.0 {
            best = (v, u);
        }
    }
    // Golden-section refinement around the best grid cell.
    let (mut a, mut b) = (best.1 - h, best.1 + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if unit(c.sinh()) < unit(d.sinh()) {
            b = d;
        } else {
            a = c;
        }
    }
    let refined = unit((0.5 * (a + b)).sinh());
    best.0.min(refined).min(-s[0]).min(s[2])
}

fn polyhedral_step(generators: &[Vec<f64>], z: &[f64], tol: f64) -> Result<(BlockFace, Transition, f64)> {
    let zn = norm(z);
    let mut keep = Vec::new();
    let mut ratios = Vec::new();
    let mut worst = 0.0f64;
    for g in generators {
        let gn = norm(g);
        let ip = dot(g, z);
        let rel = ip / gn;
        if rel < -tol * zn.max(1.0) {
            return Err(Error::verification(format!(
                "z is not in the dual of the polyhedral face (⟨z, g⟩/‖g‖ = {rel:e})"
            )));
        }
        worst = worst.max(-rel);
        if rel.abs() <= tol * zn.max(1.0) {
            keep.push(g.clone());
        } else {
            ratios.push(gn / ip);
        }
    }
    if ratios.is_empty() {
        return Ok((
            BlockFace::Polyhedral {
                generators: generators.to_vec(),
            },
            Transition::Unchanged,
            worst,
        ));
    }
    let to = if keep.is_empty() {
        BlockFace::Zero
    } else {
        BlockFace::Polyhedral { generators: keep }
    };
    Ok((to, Transition::PolyhedralCut { ratios }, worst))
}
