//! Fox `p`-colorings and the dihedral representations they define.
//!
//! A coloring labels every strand of a diagram by `Z/p` so that `a + c = 2b` at
//! each crossing (`b` the overstrand). The meridian of a strand colored `a` maps to
//! the reflection `x -> 2a - x` of `Z/p`, which is the action of `D_p` on the
//! cosets of the order-2 subgroup generated by the reflection at 0.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::diagram::KnotDiagram;
use crate::error::{Error, Result};
use crate::linalg::{kernel_mod_p, IntMatrix};
use crate::modulus::Modulus;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coloring {
    pub p: u64,
    pub labels: Vec<u64>,
    pub surjective: bool,
}

impl Coloring {
    /// Validates the crossing relations and computes the surjectivity flag.
    pub fn new(d: &KnotDiagram, p: u64, labels: Vec<u64>) -> Result<Self> {
        let m = Modulus::new(p)?;
        if labels.len() != d.strand_count() {
            return Err(Error::Dimension(format!("{} labels for {} strands", labels.len(), d.strand_count())));
        }
        if labels.iter().any(|&l| l >= p) {
            return Err(Error::InvalidArgument(format!("labels must lie in [0, {p})")));
        }
        for c in 0..d.crossing_count() {
            let (a, o, out) = d.crossing_strands(c);
            if (labels[a] + labels[out]) % p != (2 * labels[o]) % p {
                return Err(Error::InvalidArgument(format!("crossing relation fails at crossing {c}")));
            }
        }
        let surjective = is_surjective(&m, &labels);
        Ok(Coloring { p, labels, surjective })
    }

    /// Image under `a -> λa + μ`.
    pub fn affine_image(&self, lambda: u64, mu: u64) -> Coloring {
        let labels = self.labels.iter().map(|&a| (lambda * a + mu) % self.p).collect();
        Coloring { p: self.p, labels, surjective: self.surjective }
    }
}

fn is_surjective(m: &Modulus, labels: &[u64]) -> bool {
    m.primes().iter().all(|&q| labels.iter().any(|&l| l % q != labels[0] % q))
}

/// Rows are crossings, columns strands: `2 x_over - x_in - x_out`.
pub fn coloring_matrix(d: &KnotDiagram) -> IntMatrix {
    let mut m = IntMatrix::zeros(d.crossing_count(), d.strand_count());
    for c in 0..d.crossing_count() {
        let (a, o, out) = d.crossing_strands(c);
        m[(c, o)] += BigInt::from(2);
        m[(c, a)] -= BigInt::from(1);
        m[(c, out)] -= BigInt::from(1);
    }
    m
}

/// Every `p`-coloring of the diagram (constant ones included), in lexicographic order of labels.
pub fn fox_colorings(d: &KnotDiagram, p: u64) -> Result<Vec<Coloring>> {
    let m = Modulus::new(p)?;
    let kernel = kernel_mod_p(&coloring_matrix(d), p)?;
    Ok(kernel
        .enumerate()
        .into_iter()
        .map(|labels| {
            let surjective = is_surjective(&m, &labels);
            Coloring { p, labels, surjective }
        })
        .collect())
}

/// Colorings equivalent under `a -> λa + μ` (`λ` a unit mod `p`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringOrbit {
    /// Lexicographically least member.
    pub representative: Coloring,
    pub members: Vec<Coloring>,
}

impl ColoringOrbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

pub fn canonical_representative(c: &Coloring) -> Coloring {
    let m = Modulus::new(c.p).expect("coloring modulus is valid");
    m.units()
        .into_iter()
        .flat_map(|lambda| (0..c.p).map(move |mu| (lambda, mu)))
        .map(|(lambda, mu)| c.affine_image(lambda, mu))
        .min()
        .expect("the identity map is always present")
}

/// Groups colorings into affine orbits, ordered by representative.
pub fn coloring_orbits(colorings: &[Coloring]) -> Vec<ColoringOrbit> {
    let mut groups: BTreeMap<Coloring, Vec<Coloring>> = BTreeMap::new();
    for c in colorings {
        groups.entry(canonical_representative(c)).or_default().push(c.clone());
    }
    groups
        .into_iter()
        .map(|(representative, mut members)| {
            members.sort();
            ColoringOrbit { representative, members }
        })
        .collect()
}

/// Per-strand permutations of `{0, .., p-1}`: the meridian of a strand colored `a` acts by `x -> 2a - x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermutationRep {
    pub p: u64,
    pub permutations: Vec<Vec<usize>>,
}

impl PermutationRep {
    /// Cycles of the meridian permutation of `strand`, each sorted, listed by least element.
    pub fn cycles(&self, strand: usize) -> Vec<Vec<usize>> {
        let perm = &self.permutations[strand];
        let mut seen = vec![false; perm.len()];
        let mut out = Vec::new();
        for s in 0..perm.len() {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = perm[x];
            }
            cyc.sort_unstable();
            out.push(cyc);
        }
        out
    }
}

pub fn coloring_to_rep(c: &Coloring) -> Result<PermutationRep> {
    if !c.surjective {
        return Err(Error::NotSurjective);
    }
    let p = c.p;
    let permutations = c
        .labels
        .iter()
        .map(|&a| (0..p).map(|x| ((2 * a + p - x) % p) as usize).collect())
        .collect();
    Ok(PermutationRep { p, permutations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    fn trefoil() -> KnotDiagram {
        parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap()
    }

    fn figure_eight() -> KnotDiagram {
        parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)").unwrap()
    }

    /// Labels every PD arc independently and keeps the labelings that respect both
    /// the crossing relation and the overstrand continuity `b = d`.
    fn brute_force_counts(d: &KnotDiagram, p: u64) -> (usize, usize) {
        let arcs = d.arc_count();
        let (mut total, mut surj) = (0, 0);
        for code in 0..p.pow(arcs as u32) {
            let lab: Vec<u64> = (0..arcs).map(|k| code / p.pow(k as u32) % p).collect();
            let at = |arc: u32| lab[arc as usize - 1];
            let ok = d.pd().iter().all(|x| at(x[1]) == at(x[3]) && (at(x[0]) + at(x[2])) % p == 2 * at(x[1]) % p);
            if ok {
                total += 1;
                if lab.iter().any(|&l| l != lab[0]) {
                    surj += 1;
                }
            }
        }
        (total, surj)
    }

    #[test]
    fn trefoil_three_colorings() {
        let d = trefoil();
        let cs = fox_colorings(&d, 3).unwrap();
        assert_eq!(cs.len(), 9);
        assert_eq!(cs.iter().filter(|c| c.surjective).count(), 6);
        assert_eq!(brute_force_counts(&d, 3), (9, 6));
        let surj: Vec<Coloring> = cs.into_iter().filter(|c| c.surjective).collect();
        assert_eq!(coloring_orbits(&surj).len(), 1);
    }

    #[test]
    fn figure_eight_has_no_three_colorings() {
        let d = figure_eight();
        let cs = fox_colorings(&d, 3).unwrap();
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().all(|c| !c.surjective));
        assert_eq!(brute_force_counts(&d, 3), (3, 0));
        assert_eq!(fox_colorings(&d, 5).unwrap().iter().filter(|c| c.surjective).count(), 20);
    }

    #[test]
    fn unknot_colorings_are_constant() {
        let cs = fox_colorings(&KnotDiagram::unknot(), 7).unwrap();
        assert_eq!(cs.len(), 7);
        assert!(cs.iter().all(|c| !c.surjective));
    }

    #[test]
    fn invalid_modulus() {
        assert!(matches!(fox_colorings(&trefoil(), 4), Err(Error::InvalidModulus { .. })));
    }

    #[test]
    fn trefoil_rep_is_s3() {
        let c = fox_colorings(&trefoil(), 3).unwrap().into_iter().find(|c| c.surjective).unwrap();
        let rep = coloring_to_rep(&c).unwrap();
        let mut perms = rep.permutations.clone();
        perms.sort();
        // the three transpositions of S_3
        assert_eq!(perms, vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]]);
    }

    #[test]
    fn constant_coloring_has_no_rep() {
        let c = fox_colorings(&trefoil(), 3).unwrap().into_iter().find(|c| !c.surjective).unwrap();
        assert_eq!(coloring_to_rep(&c).unwrap_err(), Error::NotSurjective);
    }

    #[test]
    fn meridians_are_reflections_p5() {
        let d = figure_eight();
        for c in fox_colorings(&d, 5).unwrap().into_iter().filter(|c| c.surjective) {
            let rep = coloring_to_rep(&c).unwrap();
            for s in 0..d.strand_count() {
                let cycles = rep.cycles(s);
                assert_eq!(cycles.iter().filter(|c| c.len() == 1).count(), 1);
                assert_eq!(cycles.iter().filter(|c| c.len() == 2).count(), 2);
            }
        }
    }

    #[test]
    fn composite_modulus_surjectivity() {
        // 7_4 has determinant 15
        let seven_four = parse_pd("X(14,8,1,7) X(6,2,7,1) X(2,12,3,11) X(10,4,11,3) X(4,10,5,9) X(12,6,13,5) X(8,14,9,13)").unwrap();
        let cs = fox_colorings(&seven_four, 15).unwrap();
        let surj: Vec<_> = cs.iter().filter(|c| c.surjective).collect();
        assert!(!surj.is_empty());
        for c in surj {
            assert!(c.labels.iter().any(|&l| l % 3 != c.labels[0] % 3));
            assert!(c.labels.iter().any(|&l| l % 5 != c.labels[0] % 5));
        }
    }
}
