use rand::seq::SliceRandom;
use rand::Rng;

use super::ConePoint;
use crate::error::{Error, Result};

/// A generalized permutation `D` with `(D x̄)_i = signs_i · x̄_{perm_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::invalid("perm and signs differ in length"));
        }
        let mut seen = vec![false; n];
        for &i in &perm {
            if i >= n || seen[i] {
                return Err(Error::invalid("perm is not a bijection"));
            }
            seen[i] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid("signs must be ±1"));
        }
        Ok(SignedPermutation { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let signs = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        SignedPermutation { perm, signs }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply(&self, xbar: &[f64]) -> Vec<f64> {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&i, &s)| f64::from(s) * xbar[i])
            .collect()
    }
}

/// `scale·(x0, D x̄)`, an automorphism of every `K_p` when `scale > 0`.
pub fn apply_automorphism(x: &ConePoint, scale: f64, perm: &SignedPermutation) -> Result<ConePoint> {
    if !(scale > 0.0) {
        return Err(Error::invalid("automorphism scale must be positive"));
    }
    if perm.len() != x.n() {
        return Err(Error::invalid("permutation size does not match the point"));
    }
    Ok(ConePoint::new(
        scale * x.x0,
        perm.apply(&x.xbar).into_iter().map(|v| scale * v).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let x = ConePoint::new(1.0, vec![1.0, 0.0]);
        assert_eq!(apply_automorphism(&x, 1.0, &SignedPermutation::identity(2)).unwrap(), x);
        let swap = SignedPermutation::new(vec![1, 0], vec![1, -1]).unwrap();
        assert_eq!(
            apply_automorphism(&x, 2.0, &swap).unwrap(),
            ConePoint::new(2.0, vec![0.0, -2.0])
        );
        assert!(SignedPermutation::new(vec![0, 0], vec![1, 1]).is_err());
    }
}
