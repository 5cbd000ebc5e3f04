//! Finitely presented groups as plain relator lists.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cokernel, AbelianGroup, IntMatrix};

/// A word in the generators: letter `+k` is generator `k` (1-based), `-k` its inverse.
pub type Word = Vec<i32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generator_count: usize,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            for &l in r {
                if l == 0 || l.unsigned_abs() as usize > generator_count {
                    return Err(Error::RelatorOutOfRange { generator: l as i64, count: generator_count });
                }
            }
        }
        Ok(GroupPresentation { generator_count, relators })
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.relators.len(), self.generator_count);
        for (i, r) in self.relators.iter().enumerate() {
            for &l in r {
                let j = l.unsigned_abs() as usize - 1;
                m[(i, j)] += BigInt::from(l.signum());
            }
        }
        m
    }

    pub fn abelianization(&self) -> AbelianGroup {
        cokernel(&self.relation_matrix())
    }

    /// Freely and cyclically reduces every relator and drops the trivial ones.
    pub fn simplified(&self) -> Self {
        let relators = self.relators.iter().map(|r| cyclically_reduce(&free_reduce(r))).filter(|r| !r.is_empty()).collect();
        GroupPresentation { generator_count: self.generator_count, relators }
    }
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Assumes `w` is freely reduced.
pub fn cyclically_reduce(w: &[i32]) -> Word {
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == -w[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|l| -l).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(free_reduce(&[1, -1]), Vec::<i32>::new());
        assert_eq!(cyclically_reduce(&[-1, 2, 3, 1]), vec![2, 3]);
        assert_eq!(inverse(&[1, -2, 3]), vec![-3, 2, -1]);
    }

    #[test]
    fn out_of_range_generator() {
        assert!(GroupPresentation::new(2, vec![vec![1, 3]]).is_err());
        assert!(GroupPresentation::new(2, vec![vec![0]]).is_err());
    }

    #[test]
    fn abelianization_of_z_cross_z3() {
        let g = GroupPresentation::new(2, vec![vec![2, 2, 2], vec![1, 2, -1, -2]]).unwrap();
        assert_eq!(g.abelianization().to_string(), "Z + Z/3");
    }
}
