use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pcone::PExponent;

/// One factor of a product cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Block {
    /// `K_p^{dim}`, i.e. `x0 ≥ ‖x̄‖_p` with `x̄ ∈ R^{dim−1}`.
    Pcone { p: PExponent, dim: usize },
    /// `{(t, u, x) : tu ≥ ‖x‖², t, u ≥ 0}`.
    Rsoc { dim: usize },
    Expcone,
}

impl Block {
    pub fn dim(&self) -> usize {
        match self {
            Block::Pcone { dim, .. } | Block::Rsoc { dim } => *dim,
            Block::Expcone => 3,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Block::Pcone { p, dim } => format!("pcone(p={}, dim={dim})", p.p()),
            Block::Rsoc { dim } => format!("rsoc(dim={dim})"),
            Block::Expcone => "expcone".into(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Block::Pcone { dim, .. } if *dim < 3 => {
                Err(Error::invalid(format!("p-cone blocks need dim ≥ 3, got {dim}")))
            }
            Block::Rsoc { dim } if *dim < 3 => {
                Err(Error::invalid(format!("rotated cone blocks need dim ≥ 3, got {dim}")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub blocks: Vec<Block>,
}

impl ConeSpec {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        let c = ConeSpec { blocks };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::invalid("cone needs at least one block"));
        }
        self.blocks.iter().try_for_each(Block::validate)
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Block::dim).sum()
    }

    /// Start offset of every block.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for b in &self.blocks {
            off.push(acc);
            acc += b.dim();
        }
        off
    }

    /// Splits a full-length vector into per-block slices.
    pub fn split<'a>(&self, x: &'a [f64]) -> Vec<&'a [f64]> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut rest = x;
        for b in &self.blocks {
            let (head, tail) = rest.split_at(b.dim());
            out.push(head);
            rest = tail;
        }
        out
    }

    /// Number of blocks that are not polyhedral (all supported blocks are not).
    pub fn nonpolyhedral_blocks(&self) -> usize {
        self.blocks.len()
    }
}

/// `A` either as rows or flattened row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixInput {
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FeasJson {
    cone: ConeSpec,
    #[serde(rename = "A")]
    a: MatrixInput,
    b: Vec<f64>,
}

/// Rows dropped by rank preprocessing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreprocessReport {
    pub rows_in: usize,
    pub rank: usize,
    /// Zero-based indices of linearly dependent (and consistent) rows.
    pub dropped: Vec<usize>,
}

/// `find x ∈ K ∩ {x : Ax = b}`, with `L = ker A` and `a` the minimum-norm solution.
#[derive(Debug, Clone)]
pub struct FeasProblem {
    pub cone: ConeSpec,
    rows: Vec<Vec<f64>>,
    b: Vec<f64>,
    /// Orthonormal basis of `range(Aᵀ) = L^⊥`.
    basis: Vec<Vec<f64>>,
    /// `⟨q_k, x⟩` for every solution `x`.
    beta: Vec<f64>,
    report: PreprocessReport,
}

/// Relative tolerance used to detect dependent rows.
pub const RANK_TOL: f64 = 1e-10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl FeasProblem {
    pub fn new(cone: ConeSpec, a: MatrixInput, b: Vec<f64>) -> Result<Self> {
        cone.validate()?;
        let n = cone.dim();
        let rows: Vec<Vec<f64>> = match a {
            MatrixInput::Rows(r) => r,
            MatrixInput::Flat(v) => {
                if v.len() != n * b.len() {
                    return Err(Error::invalid(format!(
                        "flat A has {} entries, expected {}×{n}",
                        v.len(),
                        b.len()
                    )));
                }
                v.chunks(n.max(1)).map(<[f64]>::to_vec).take(b.len()).collect()
            }
        };
        if rows.len() != b.len() {
            return Err(Error::invalid(format!("A has {} rows but b has {}", rows.len(), b.len())));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::invalid(format!(
                "row {i} of A has {} columns, cone dimension is {n}",
                r.len()
            )));
        }
        if rows.iter().flatten().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::invalid("A and b must be finite"));
        }

        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut beta = Vec::new();
        let mut dropped = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let rn = norm(row);
            let mut r = row.clone();
            let mut bi = b[i];
            // Two passes of Gram–Schmidt for stability.
            for _ in 0..2 {
                for (q, bq) in basis.iter().zip(&beta) {
                    let c = dot(&r, q);
                    r.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                    bi -= c * bq;
                }
            }
            let res = norm(&r);
            if res <= RANK_TOL * rn.max(f64::MIN_POSITIVE) || rn == 0.0 {
                let scale = b[i].abs().max(rn).max(1.0);
                if bi.abs() > 1e-8 * scale {
                    return Err(Error::invalid(format!(
                        "row {i} of A is dependent but b is inconsistent (residual {bi:e}): Ax = b has no solution"
                    )));
                }
                dropped.push(i);
                continue;
            }
            r.iter_mut().for_each(|x| *x /= res);
            basis.push(r);
            beta.push(bi / res);
        }
        let report = PreprocessReport {
            rows_in: rows.len(),
            rank: basis.len(),
            dropped,
        };
        Ok(FeasProblem {
            cone,
            rows,
            b,
            basis,
            beta,
            report,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FeasJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("problem JSON: {e}")))?;
        FeasProblem::new(raw.cone, raw.a, raw.b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cone": self.cone,
            "A": self.rows,
            "b": self.b,
        })
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn report(&self) -> &PreprocessReport {
        &self.report
    }

    /// `rank A = dim L^⊥`.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// The minimum-norm solution `a` of `Ax = b`.
    pub fn particular(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.dim()];
        for (q, bq) in self.basis.iter().zip(&self.beta) {
            a.iter_mut().zip(q).for_each(|(x, y)| *x += bq * y);
        }
        a
    }

    /// `dim(L^⊥ ∩ {a}^⊥)`.
    pub fn dim_lperp_aperp(&self) -> usize {
        let an = norm(&self.beta);
        let bn = norm(&self.b).max(1.0);
        self.rank() - usize::from(an > 1e-12 * bn)
    }

    /// Distance from `z` to `L^⊥`.
    pub fn lperp_residual(&self, z: &[f64]) -> f64 {
        let mut r = z.to_vec();
        for q in &self.basis {
            let c = dot(&r, q);
            r.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
        norm(&r)
    }

    /// `⟨z, a⟩`, using only the `L^⊥` component of `z`.
    pub fn inner_with_particular(&self, z: &[f64]) -> f64 {
        self.basis.iter().zip(&self.beta).map(|(q, bq)| dot(z, q) * bq).sum()
    }

    /// `‖Ax − b‖`.
    pub fn affine_residual(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.b)
            .map(|(r, bi)| (dot(r, x) - bi).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}
