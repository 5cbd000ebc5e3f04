//! Smith normal form over the integers.
//!
//! Pivoting always selects the nonzero entry of smallest absolute value in the
//! remaining block, breaking ties by lowest row and then lowest column. Every
//! elementary operation applied to the working matrix is mirrored, inverted, on
//! the transforms so that `A = U * D * V` holds throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::IntMatrix;

/// `A = U * D * V` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ... `, including trailing zeros up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct Transforms {
    u: IntMatrix,
    v: IntMatrix,
}

struct Reducer<'a> {
    a: IntMatrix,
    t: Option<&'a mut Transforms>,
}

impl Reducer<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(t) = self.t.as_deref_mut() {
            t.u.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(t) = self.t.as_deref_mut() {
            t.v.swap_rows(i, j);
        }
    }

    /// `row[dst] += k * row[src]`; `U` absorbs the inverse as a column operation.
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        if let Some(t) = self.t.as_deref_mut() {
            t.u.add_col_multiple(src, dst, &-k);
        }
    }

    /// `col[dst] += k * col[src]`; `V` absorbs the inverse as a row operation.
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        if let Some(t) = self.t.as_deref_mut() {
            t.v.add_row_multiple(src, dst, &-k);
        }
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        if let Some(t) = self.t.as_deref_mut() {
            t.u.negate_col(r);
        }
    }

    fn smallest_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    let unit = ax.is_one();
                    best = Some((i, j, ax));
                    if unit {
                        return best.map(|(i, j, _)| (i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) {
        let (m, n) = (self.a.rows(), self.a.cols());
        for t in 0..m.min(n) {
            loop {
                let Some((pi, pj)) = self.smallest_pivot(t) else {
                    return;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);

                let mut clean = true;
                for i in t + 1..m {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
                    self.add_row(i, t, &-q);
                    clean &= self.a[(i, t)].is_zero();
                }
                for j in t + 1..n {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
                    self.add_col(j, t, &-q);
                    clean &= self.a[(t, j)].is_zero();
                }
                if !clean {
                    continue;
                }

                // divisibility: fold an offending row into the pivot row and retry
                let pivot = self.a[(t, t)].clone();
                let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.a[(i, j)].is_multiple_of(&pivot)));
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut t = Transforms { u: IntMatrix::identity(a.rows()), v: IntMatrix::identity(a.cols()) };
    let mut r = Reducer { a: a.clone(), t: Some(&mut t) };
    r.run();
    let d = r.a;
    SmithForm { u: t.u, d, v: t.v }
}

/// Just the diagonal of the Smith normal form (length `min(rows, cols)`), skipping the transforms.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut r = Reducer { a: a.clone(), t: None };
    r.run();
    (0..a.rows().min(a.cols())).map(|i| r.a[(i, i)].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn already_normal() {
        let a = IntMatrix::from_rows(&[[2, 0], [0, 4]]).unwrap();
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), big(&[2, 4]));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn two_by_two_minors() {
        // d1 = gcd of entries = 2, d1*d2 = |det| = 8
        let a = IntMatrix::from_rows(&[[2, 4], [6, 8]]).unwrap();
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), big(&[2, 4]));
        assert_eq!(s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), a);
    }

    #[test]
    fn zero_matrix() {
        let s = smith_normal_form(&IntMatrix::zeros(3, 3));
        assert_eq!(s.diagonal(), big(&[0, 0, 0]));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn rectangular_and_empty() {
        let a = IntMatrix::from_rows(&[[1, 2, 3], [4, 5, 6]]).unwrap();
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), big(&[1, 3]));
        assert_eq!(s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), a);
        assert!(invariant_factors(&IntMatrix::zeros(0, 4)).is_empty());
    }

    #[test]
    fn deterministic() {
        let a = IntMatrix::from_rows(&[[6, -4, 2], [3, 9, -12], [0, 5, 7]]).unwrap();
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
        assert_eq!(invariant_factors(&a), smith_normal_form(&a).diagonal());
    }
}
