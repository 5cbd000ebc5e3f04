//! Goeritz and Seifert matrices, the double branched cover and its linking form.
//!
//! PD codes feed the Goeritz route, braid words feed the Seifert route. The two
//! are never converted into each other; agreement of determinants is a check.

mod linking;
mod seifert;

pub use linking::{
    coloring_passes_metabolizer_filter, linking_form, metabolizers, rho_bar, vanishes_on_some, LinkingForm, Metabolizer, METABOLIZER_BUDGET,
};
pub use seifert::{seifert_matrix, SeifertData};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::diagram::KnotDiagram;
use crate::error::{Error, Result};
use crate::linalg::{cokernel, AbelianGroup, IntMatrix};

/// Checkerboard coloring of the faces and the white regions used for the Goeritz matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkerboard {
    /// Color (0 or 1) of every face.
    pub color: Vec<u8>,
    /// White color class, in increasing face order.
    pub white: Vec<usize>,
}

/// Two faces meeting along an edge get different colors. The white class is the
/// smaller one (the class of face 0 on a tie).
pub fn checkerboard(d: &KnotDiagram) -> Checkerboard {
    let nf = d.faces().len();
    let mut adj = vec![Vec::new(); nf];
    for c in 0..d.crossing_count() {
        for k in 0..4 {
            let (f, g) = (d.corner_face(c, k), d.corner_face(c, (k + 1) % 4));
            adj[f].push(g);
            adj[g].push(f);
        }
    }
    let mut color = vec![u8::MAX; nf];
    for start in 0..nf {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            for &g in &adj[f] {
                if color[g] == u8::MAX {
                    color[g] = 1 - color[f];
                    stack.push(g);
                }
            }
        }
    }
    let zeros = color.iter().filter(|&&c| c == 0).count();
    let white_color = if zeros <= nf - zeros { 0 } else { 1 };
    let white = (0..nf).filter(|&f| color[f] == white_color).collect();
    Checkerboard { color, white }
}

/// `+1` if the white corners of crossing `c` are 0 and 2 (counterclockwise from the
/// understrand to the overstrand), `-1` if they are 1 and 3.
fn crossing_type(d: &KnotDiagram, board: &Checkerboard, c: usize) -> i64 {
    let white0 = board.color[d.corner_face(c, 0)] == board.color[board.white[0]];
    if white0 {
        1
    } else {
        -1
    }
}

/// Goeritz matrix on the white regions with the lowest-indexed white region deleted.
///
/// Off-diagonal entries are `-Σ η(c)` over crossings joining two regions, the diagonal
/// makes every row of the undeleted matrix sum to zero. Nugatory crossings (both white
/// corners in the same region) contribute nothing.
pub fn goeritz_matrix(d: &KnotDiagram) -> IntMatrix {
    if d.crossing_count() == 0 {
        return IntMatrix::zeros(0, 0);
    }
    let board = checkerboard(d);
    let m = board.white.len();
    let index_of = |f: usize| board.white.iter().position(|&w| w == f).expect("white face");
    let mut full = vec![vec![0i64; m]; m];
    for c in 0..d.crossing_count() {
        let eta = crossing_type(d, &board, c);
        let (k0, k1) = if eta == 1 { (0, 2) } else { (1, 3) };
        let (r, s) = (index_of(d.corner_face(c, k0)), index_of(d.corner_face(c, k1)));
        if r == s {
            continue;
        }
        full[r][s] -= eta;
        full[s][r] -= eta;
        full[r][r] += eta;
        full[s][s] += eta;
    }
    IntMatrix::from_fn(m - 1, m - 1, |i, j| BigInt::from(full[i + 1][j + 1]))
}

/// `|det G|`, the order of the first homology of the double branched cover.
pub fn determinant(d: &KnotDiagram) -> Result<u64> {
    let det = goeritz_matrix(d).determinant()?.abs();
    let det = det.to_u64().ok_or_else(|| Error::Internal(format!("determinant {det} exceeds u64")))?;
    if det == 0 {
        return Err(Error::Singular);
    }
    Ok(det)
}

pub fn double_cover_homology(d: &KnotDiagram) -> AbelianGroup {
    cokernel(&goeritz_matrix(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::coloring_matrix;
    use crate::diagram::parse_pd;

    /// `|Δ(-1)|` from the Fox matrix: any first minor of the coloring matrix.
    fn fox_determinant(d: &KnotDiagram) -> u64 {
        if d.crossing_count() == 0 {
            return 1;
        }
        coloring_matrix(d).minor(0, 0).determinant().unwrap().abs().to_u64().unwrap()
    }

    fn trefoil() -> KnotDiagram {
        parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap()
    }

    #[test]
    fn trefoil_goeritz() {
        let d = trefoil();
        let g = goeritz_matrix(&d);
        assert_eq!(g.determinant().unwrap().abs(), BigInt::from(3));
        assert_eq!(determinant(&d).unwrap(), fox_determinant(&d));
        assert_eq!(double_cover_homology(&d).to_string(), "Z/3");
    }

    #[test]
    fn figure_eight_and_six_one() {
        let f = parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)").unwrap();
        assert_eq!(determinant(&f).unwrap(), 5);
        assert_eq!(fox_determinant(&f), 5);
        let six = parse_pd("X(7,12,8,1) X(1,6,2,7) X(11,3,12,2) X(3,11,4,10) X(9,5,10,4) X(5,9,6,8)").unwrap();
        assert_eq!(determinant(&six).unwrap(), 9);
        assert_eq!(fox_determinant(&six), 9);
        assert_eq!(double_cover_homology(&six).to_string(), "Z/9");
    }

    #[test]
    fn unknot_is_trivial() {
        let u = KnotDiagram::unknot();
        assert_eq!(goeritz_matrix(&u).rows(), 0);
        assert_eq!(determinant(&u).unwrap(), 1);
        assert!(double_cover_homology(&u).is_trivial());
    }

    #[test]
    fn checkerboard_is_proper() {
        let d = trefoil();
        let b = checkerboard(&d);
        for c in 0..3 {
            for k in 0..4 {
                assert_ne!(b.color[d.corner_face(c, k)], b.color[d.corner_face(c, (k + 1) % 4)]);
            }
        }
        assert_eq!(b.white.len(), 2);
    }
}
