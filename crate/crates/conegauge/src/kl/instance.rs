use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::pcone::{pnorm, PExponent};
use crate::reduction::{Block, ConeSpec, FeasProblem, MatrixInput};

/// `min ½‖Ax − b‖² + Σ_i λ_i ‖x_i‖_p` over `x = (x_1, …, x_s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct RegLsInstance {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    lambdas: Vec<f64>,
    block_dims: Vec<usize>,
    p: PExponent,
}

#[derive(Deserialize)]
struct RawInstance {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    lambdas: Vec<f64>,
    block_dims: Vec<usize>,
    p: PExponent,
}

impl TryFrom<RawInstance> for RegLsInstance {
    type Error = Error;

    fn try_from(r: RawInstance) -> Result<Self> {
        RegLsInstance::new(r.a, r.b, r.lambdas, r.block_dims, r.p)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RegLsInstance {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, lambdas: Vec<f64>, block_dims: Vec<usize>, p: PExponent) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::invalid(format!("A has {} rows but b has {}", a.len(), b.len())));
        }
        let n: usize = block_dims.iter().sum();
        if let Some(i) = a.iter().position(|r| r.len() != n) {
            return Err(Error::invalid(format!(
                "row {i} of A has {} columns, block dims sum to {n}",
                a[i].len()
            )));
        }
        if lambdas.len() != block_dims.len() || block_dims.is_empty() {
            return Err(Error::invalid("need one λ per block and at least one block"));
        }
        if block_dims.iter().any(|&d| d < 2) {
            return Err(Error::invalid("every block needs dimension ≥ 2"));
        }
        if lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::invalid("λ_i must be positive and finite"));
        }
        if a.iter().flatten().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::invalid("A and b must be finite"));
        }
        Ok(RegLsInstance { a, b, lambdas, block_dims, p })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("instance JSON: {e}")))
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn n(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn s(&self) -> usize {
        self.block_dims.len()
    }

    pub fn p(&self) -> PExponent {
        self.p
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    /// Coordinate range of every block.
    pub fn blocks(&self) -> Vec<Range<usize>> {
        let mut acc = 0;
        self.block_dims
            .iter()
            .map(|&d| {
                acc += d;
                acc - d..acc
            })
            .collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.a.iter().map(|r| dot(r, x)).collect()
    }

    pub fn apply_t(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        for (r, yi) in self.a.iter().zip(y) {
            out.iter_mut().zip(r).for_each(|(o, a)| *o += a * yi);
        }
        out
    }

    /// `Ax − b`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x).iter().zip(&self.b).map(|(a, b)| a - b).collect()
    }

    pub fn smooth_part(&self, x: &[f64]) -> f64 {
        0.5 * self.residual(x).iter().map(|r| r * r).sum::<f64>()
    }

    pub fn regularizer(&self, x: &[f64]) -> f64 {
        self.blocks()
            .into_iter()
            .zip(&self.lambdas)
            .map(|(r, l)| l * pnorm(&x[r], self.p.p()))
            .sum()
    }

    /// `g(x)`.
    pub fn objective(&self, x: &[f64]) -> f64 {
        self.smooth_part(x) + self.regularizer(x)
    }

    /// `Aᵀ(Ax − b)`.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.apply_t(&self.residual(x))
    }

    pub fn reformulate(&self) -> Result<ConicReformulation> {
        let m = self.m();
        let mut blocks = vec![Block::Rsoc { dim: m + 2 }];
        blocks.extend(self.block_dims.iter().map(|&d| Block::Pcone { p: self.p, dim: d + 1 }));
        let cone = ConeSpec::new(blocks)?;
        let nv = cone.dim();
        let offs = ConicReformulation::x_offsets(&self.block_dims, m);

        let mut rows = Vec::with_capacity(m + 1);
        for (j, arow) in self.a.iter().enumerate() {
            let mut row = vec![0.0; nv];
            row[2 + j] = -1.0;
            for (r, &off) in self.blocks().into_iter().zip(&offs) {
                row[off..off + r.len()].copy_from_slice(&arow[r]);
            }
            rows.push(row);
        }
        let mut urow = vec![0.0; nv];
        urow[1] = 1.0;
        rows.push(urow);
        let mut rhs = self.b.clone();
        rhs.push(1.0);

        let mut objective = vec![0.0; nv];
        objective[0] = 0.5;
        for (&off, l) in offs.iter().zip(&self.lambdas) {
            objective[off - 1] = *l;
        }
        let problem = FeasProblem::new(cone.clone(), MatrixInput::Rows(rows.clone()), rhs.clone())?;
        Ok(ConicReformulation {
            instance: self.clone(),
            cone,
            rows,
            rhs,
            objective,
            problem,
        })
    }
}

/// `min 0.5t + Σ λ_i y_i` over `(t, u, w) ∈ R_{m+2}`, `(y_i, x_i) ∈ K_p`, with
/// `Ax − w = b`, `u = 1`.
#[derive(Debug, Clone)]
pub struct ConicReformulation {
    instance: RegLsInstance,
    pub cone: ConeSpec,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    /// Linear objective coefficients over the stacked variables.
    pub objective: Vec<f64>,
    /// The feasible region as a [`FeasProblem`].
    pub problem: FeasProblem,
}

impl ConicReformulation {
    fn x_offsets(dims: &[usize], m: usize) -> Vec<usize> {
        let mut off = m + 2;
        dims.iter()
            .map(|&d| {
                let o = off + 1;
                off += d + 1;
                o
            })
            .collect()
    }

    pub fn num_vars(&self) -> usize {
        self.cone.dim()
    }

    pub fn num_equalities(&self) -> usize {
        self.rows.len()
    }

    /// `v = (‖Ax−b‖², 1, Ax−b, (‖x_1‖_p, x_1), …)`.
    pub fn lift(&self, x: &[f64]) -> Vec<f64> {
        let inst = &self.instance;
        let r = inst.residual(x);
        let mut v = Vec::with_capacity(self.num_vars());
        v.push(r.iter().map(|a| a * a).sum());
        v.push(1.0);
        v.extend(&r);
        for blk in inst.blocks() {
            v.push(pnorm(&x[blk.clone()], inst.p.p()));
            v.extend(&x[blk]);
        }
        v
    }

    /// Recovers `x` from a stacked variable.
    pub fn extract(&self, v: &[f64]) -> Vec<f64> {
        let offs = Self::x_offsets(&self.instance.block_dims, self.instance.m());
        offs.iter()
            .zip(&self.instance.block_dims)
            .flat_map(|(&o, &d)| v[o..o + d].iter().copied())
            .collect()
    }

    pub fn objective_value(&self, v: &[f64]) -> f64 {
        dot(&self.objective, v)
    }

    /// The optimal-set slice: the equalities plus `objective(v) = θ`.
    pub fn optimal_slice(&self, theta: f64) -> Result<FeasProblem> {
        let mut rows = self.rows.clone();
        rows.push(self.objective.clone());
        let mut rhs = self.rhs.clone();
        rhs.push(theta);
        FeasProblem::new(self.cone.clone(), MatrixInput::Rows(rows), rhs)
    }
}

/// `1 − min{1/2, 1/p}^d`.
pub fn kl_exponent(p: &PExponent, d: u32) -> Exponent {
    p.worst_exponent().powi(d).one_minus()
}
