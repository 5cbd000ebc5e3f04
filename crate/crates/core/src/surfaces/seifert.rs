use num_bigint::BigInt;
use serde::Serialize;

use crate::diagram::BraidWord;
use crate::linalg::IntMatrix;

/// Seifert matrix of the braid-closure Seifert surface (one disk per strand, one band per letter).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeifertData {
    pub l: IntMatrix,
    pub genus: usize,
    pub symmetrized: IntMatrix,
}

impl SeifertData {
    /// Wraps a Seifert matrix given directly. `l` must be square of even size.
    pub fn from_matrix(l: IntMatrix) -> crate::Result<Self> {
        if !l.is_square() || !l.rows().is_multiple_of(2) {
            return Err(crate::Error::Dimension(format!("Seifert matrix must be square of even size, got {}x{}", l.rows(), l.cols())));
        }
        let symmetrized = l.symmetrized()?;
        Ok(SeifertData { genus: l.rows() / 2, l, symmetrized })
    }
}

/// Consecutive bands on the same generator bound a disk between two adjacent
/// strands; their boundaries form a basis of `H₁` of the surface. The cycle starting
/// at band `i` runs to the next band `h(i)` on the same generator.
pub fn seifert_matrix(b: &BraidWord) -> SeifertData {
    let x = b.letters();
    let next_same: Vec<Option<usize>> =
        (0..x.len()).map(|i| (i + 1..x.len()).find(|&j| x[j].abs() == x[i].abs())).collect();
    let cycles: Vec<(usize, usize)> = next_same.iter().enumerate().filter_map(|(i, h)| h.map(|h| (i, h))).collect();
    let n = cycles.len();
    let mut a = vec![vec![0i64; n]; n];
    for (ci, &(i, hi)) in cycles.iter().enumerate() {
        a[ci][ci] = -((x[i].signum() + x[hi].signum()) / 2) as i64;
        for (cj, &(j, hj)) in cycles.iter().enumerate().skip(ci + 1) {
            let (li, lj) = (x[i].abs(), x[j].abs());
            if li == lj && hi == j {
                if x[j] > 0 {
                    a[cj][ci] = 1;
                } else {
                    a[ci][cj] = -1;
                }
            } else if i < j && j < hi && hi < hj {
                if li - lj == 1 {
                    a[cj][ci] = -1;
                } else if lj - li == 1 {
                    a[ci][cj] = 1;
                }
            }
        }
    }
    // transpose so that the trefoil σ₁³ gives [[-1, 1], [0, -1]]
    let l = IntMatrix::from_fn(n, n, |r, c| BigInt::from(a[c][r]));
    SeifertData::from_matrix(l).expect("closure of a knot braid has an even-size Seifert matrix")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_braid;
    use num_traits::Signed;

    /// `det(L - t Lᵀ)` at an integer `t`.
    fn alexander_at(l: &IntMatrix, t: i64) -> BigInt {
        let lt = l.transpose();
        let m = IntMatrix::from_fn(l.rows(), l.cols(), |i, j| &l[(i, j)] - BigInt::from(t) * &lt[(i, j)]);
        m.determinant().unwrap()
    }

    #[test]
    fn trefoil() {
        let s = seifert_matrix(&parse_braid("k=2; 1 1 1").unwrap());
        assert_eq!(s.l, IntMatrix::from_rows(&[[-1, 1], [0, -1]]).unwrap());
        assert_eq!(s.genus, 1);
        assert_eq!(s.symmetrized.determinant().unwrap(), BigInt::from(3));
        // t^2 - t + 1 at t = 2, 3
        assert_eq!(alexander_at(&s.l, 2).abs(), BigInt::from(3));
        assert_eq!(alexander_at(&s.l, 3).abs(), BigInt::from(7));
    }

    #[test]
    fn figure_eight() {
        let s = seifert_matrix(&parse_braid("k=3; 1 -2 1 -2").unwrap());
        assert_eq!(s.genus, 1);
        assert_eq!(s.symmetrized.determinant().unwrap().abs(), BigInt::from(5));
        // t^2 - 3t + 1 at t = 2, 3
        assert_eq!(alexander_at(&s.l, 2).abs(), BigInt::from(1));
        assert_eq!(alexander_at(&s.l, 3).abs(), BigInt::from(1));
        assert_eq!(alexander_at(&s.l, 4).abs(), BigInt::from(5));
    }

    #[test]
    fn intersection_form_is_unimodular() {
        for w in ["k=2; 1 1 1 1 1", "k=3; 1 1 1 2 -1 2", "k=4; 1 1 2 -1 -3 2 -3", "k=4; -1 2 -3 -2 -2 -1 2 -3 2"] {
            let s = seifert_matrix(&parse_braid(w).unwrap());
            let skew = s.l.add(&s.l.transpose().neg()).unwrap();
            assert_eq!(skew.determinant().unwrap(), BigInt::from(1), "{w}");
        }
    }
}
