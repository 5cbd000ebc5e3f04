//! Irregular dihedral covers: coset tables, Reidemeister–Schreier, and the first
//! homology of the unbranched and branched covers.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::coloring::{coloring_to_rep, Coloring, PermutationRep};
use crate::diagram::KnotDiagram;
use crate::error::{Error, Result};
use crate::group::{free_reduce, GroupPresentation, Word};
use crate::linalg::AbelianGroup;

/// Right action of the generators on cosets, with a Schreier transversal rooted at coset 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetTable {
    pub degree: usize,
    /// `action[g][c]` is coset `c` acted on by generator `g + 1`.
    pub action: Vec<Vec<usize>>,
    pub transversal: Vec<Word>,
    #[serde(skip)]
    inverse: Vec<Vec<usize>>,
    /// `(coset, generator)` pairs used as spanning-tree edges `c -> c·x_g`.
    #[serde(skip)]
    tree: Vec<Vec<bool>>,
}

impl CosetTable {
    /// Builds the table from permutations; fails unless every entry is a permutation and the action is transitive.
    pub fn from_permutations(action: Vec<Vec<usize>>) -> Result<Self> {
        let degree = action.first().map_or(1, Vec::len);
        let mut inverse = Vec::with_capacity(action.len());
        for perm in &action {
            if perm.len() != degree {
                return Err(Error::Dimension(format!("permutation on {} points, expected {degree}", perm.len())));
            }
            let mut inv = vec![usize::MAX; degree];
            for (i, &j) in perm.iter().enumerate() {
                if j >= degree || inv[j] != usize::MAX {
                    return Err(Error::InvalidArgument("coset action entry is not a permutation".into()));
                }
                inv[j] = i;
            }
            inverse.push(inv);
        }

        // breadth first: generators ascending, then their inverses
        let g = action.len();
        let mut transversal: Vec<Option<Word>> = vec![None; degree];
        let mut tree = vec![vec![false; g]; degree];
        transversal[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let word = transversal[c].clone().expect("queued cosets have words");
            for letter in (1..=g as i32).chain((1..=g as i32).map(|l| -l)) {
                let j = letter.unsigned_abs() as usize - 1;
                let target = if letter > 0 { action[j][c] } else { inverse[j][c] };
                if transversal[target].is_none() {
                    let mut w = word.clone();
                    w.push(letter);
                    transversal[target] = Some(w);
                    if letter > 0 {
                        tree[c][j] = true;
                    } else {
                        tree[target][j] = true;
                    }
                    queue.push_back(target);
                }
            }
        }
        let transversal = transversal.into_iter().collect::<Option<Vec<_>>>().ok_or(Error::NotTransitive)?;
        Ok(CosetTable { degree, action, transversal, inverse, tree })
    }

    pub fn generator_count(&self) -> usize {
        self.action.len()
    }

    /// Coset reached from `c` by reading `w` left to right.
    pub fn apply(&self, c: usize, w: &[i32]) -> usize {
        w.iter().fold(c, |c, &l| self.step(c, l))
    }

    fn step(&self, c: usize, letter: i32) -> usize {
        let j = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            self.action[j][c]
        } else {
            self.inverse[j][c]
        }
    }

    /// Schreier generator numbering: non-tree edges `(coset, generator)` in row-major order, 1-based.
    fn schreier_index(&self) -> Vec<Vec<Option<i32>>> {
        let mut next = 1;
        (0..self.degree)
            .map(|c| {
                (0..self.generator_count())
                    .map(|j| {
                        (!self.tree[c][j]).then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect()
    }

    pub fn schreier_generator_count(&self) -> usize {
        self.degree * self.generator_count() - (self.degree - 1)
    }

    /// Rewrites `w`, read from coset `c`, in the Schreier generators.
    fn rewrite(&self, index: &[Vec<Option<i32>>], mut c: usize, w: &[i32]) -> Word {
        let mut out = Vec::new();
        for &letter in w {
            let j = letter.unsigned_abs() as usize - 1;
            if letter > 0 {
                if let Some(s) = index[c][j] {
                    out.push(s);
                }
                c = self.action[j][c];
            } else {
                let from = self.inverse[j][c];
                if let Some(s) = index[from][j] {
                    out.push(-s);
                }
                c = from;
            }
        }
        free_reduce(&out)
    }
}

/// Coset table of the permutation representation, checked against every relator at every coset.
pub fn coset_table(rep: &PermutationRep, pres: &GroupPresentation) -> Result<CosetTable> {
    if rep.permutations.len() != pres.generator_count {
        return Err(Error::Dimension(format!(
            "{} permutations for {} generators",
            rep.permutations.len(),
            pres.generator_count
        )));
    }
    let table = CosetTable::from_permutations(rep.permutations.clone())?;
    for (r, relator) in pres.relators.iter().enumerate() {
        for c in 0..table.degree {
            if table.apply(c, relator) != c {
                return Err(Error::RelatorViolated { relator: r, coset: c });
            }
        }
    }
    Ok(table)
}

/// Presentation of the stabilizer of coset 0 on the Schreier generators.
pub fn reidemeister_schreier(pres: &GroupPresentation, ct: &CosetTable) -> GroupPresentation {
    let index = ct.schreier_index();
    let mut relators = Vec::new();
    for r in &pres.relators {
        for c in 0..ct.degree {
            relators.push(ct.rewrite(&index, c, r));
        }
    }
    GroupPresentation::new(ct.schreier_generator_count(), relators).expect("Schreier indices in range").simplified()
}

/// Fixed points and 2-cycles of one strand's meridian on the cosets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftOrbits {
    pub strand: usize,
    pub index_one: usize,
    pub index_two: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverHomology {
    pub unbranched: AbelianGroup,
    pub branched: AbelianGroup,
    pub meridian_lift_orbits: Vec<LiftOrbits>,
}

/// `H₁` of the unbranched cover and of the cover branched along the knot. The branched
/// cover kills, for every strand and every cycle of its meridian on the cosets, the
/// lift of `μ` (fixed coset) or `μ²` (2-cycle).
pub fn branched_homology(d: &KnotDiagram, c: &Coloring) -> Result<CoverHomology> {
    let rep = coloring_to_rep(c)?;
    let pres = d.wirtinger();
    let ct = coset_table(&rep, &pres)?;
    let sub = reidemeister_schreier(&pres, &ct);
    let unbranched = sub.abelianization();

    let index = ct.schreier_index();
    let mut relators = sub.relators.clone();
    let mut orbits = Vec::new();
    for (s, perm) in rep.permutations.iter().enumerate() {
        let letter = s as i32 + 1;
        let (mut one, mut two) = (0, 0);
        for (x, &y) in perm.iter().enumerate() {
            if y == x {
                one += 1;
                relators.push(ct.rewrite(&index, x, &[letter]));
            } else if x < y {
                two += 1;
                relators.push(ct.rewrite(&index, x, &[letter, letter]));
            }
        }
        orbits.push(LiftOrbits { strand: s, index_one: one, index_two: two });
    }
    let branched = GroupPresentation::new(sub.generator_count, relators)?.simplified().abelianization();
    Ok(CoverHomology { unbranched, branched, meridian_lift_orbits: orbits })
}

/// Heegaard genus bound `(p-1)(n-2)/2` for the cover of an `n`-bridge knot.
pub fn genus_bound(p: u64, n: usize) -> Result<u64> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::InvalidModulus { p, reason: "must be odd and at least 3" });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("bridge number must be at least 2, got {n}")));
    }
    Ok((p - 1) * (n as u64 - 2) / 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SheetCensus {
    pub p: u64,
    /// Preimages of each meridian point with branching index 2 and 1 (identical over every strand).
    pub index_two: usize,
    pub index_one: usize,
    pub bridge_n: usize,
    /// Euler characteristic `2p - pn + n` of the preimage of a bridge sphere.
    pub bridge_sphere_euler: i64,
    pub bridge_sphere_genus: i64,
}

/// Preimage counts over the meridians and the bridge-sphere lift; `bridge_n` defaults to the diagram's bound.
pub fn sheet_census(d: &KnotDiagram, c: &Coloring, bridge_n: Option<usize>) -> Result<SheetCensus> {
    let rep = coloring_to_rep(c)?;
    let mut counts = None;
    for s in 0..d.strand_count() {
        let cycles = rep.cycles(s);
        let one = cycles.iter().filter(|c| c.len() == 1).count();
        let two = cycles.iter().filter(|c| c.len() == 2).count();
        if one + 2 * two != c.p as usize || counts.is_some_and(|prev| prev != (two, one)) {
            return Err(Error::Internal(format!("meridian of strand {s} is not a reflection")));
        }
        counts = Some((two, one));
    }
    let (index_two, index_one) = counts.unwrap_or(((c.p as usize - 1) / 2, 1));
    let n = bridge_n.unwrap_or_else(|| d.bridge_upper_bound());
    let (p, ni) = (c.p as i64, n as i64);
    let euler = 2 * p - p * ni + ni;
    Ok(SheetCensus { p: c.p, index_two, index_one, bridge_n: n, bridge_sphere_euler: euler, bridge_sphere_genus: (2 - euler) / 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::fox_colorings;
    use crate::diagram::parse_pd;

    fn trefoil() -> KnotDiagram {
        parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap()
    }

    fn surjective(d: &KnotDiagram, p: u64) -> Vec<Coloring> {
        fox_colorings(d, p).unwrap().into_iter().filter(|c| c.surjective).collect()
    }

    #[test]
    fn free_group_index_three() {
        // a 3-cycle and a transposition generate S_3 transitively
        let ct = CosetTable::from_permutations(vec![vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let pres = GroupPresentation::new(2, vec![]).unwrap();
        let sub = reidemeister_schreier(&pres, &ct);
        assert_eq!(sub.generator_count, 4);
        assert!(sub.relators.is_empty());
        assert_eq!(ct.transversal, vec![vec![], vec![1], vec![-1]]);
    }

    #[test]
    fn intransitive_action_is_rejected() {
        assert_eq!(CosetTable::from_permutations(vec![vec![1, 0, 2]]).unwrap_err(), Error::NotTransitive);
    }

    #[test]
    fn relator_violation() {
        let rep = PermutationRep { p: 3, permutations: vec![vec![0, 2, 1], vec![1, 0, 2], vec![1, 0, 2]] };
        let err = coset_table(&rep, &trefoil().wirtinger()).unwrap_err();
        assert!(matches!(err, Error::RelatorViolated { .. }));
    }

    #[test]
    fn trefoil_cover() {
        let d = trefoil();
        for c in surjective(&d, 3) {
            let rep = coloring_to_rep(&c).unwrap();
            let ct = coset_table(&rep, &d.wirtinger()).unwrap();
            assert_eq!(ct.degree, 3);
            let h = branched_homology(&d, &c).unwrap();
            assert_eq!(h.unbranched.rank, 2);
            assert!(h.branched.is_trivial());
            assert!(h.meridian_lift_orbits.iter().all(|o| o.index_one == 1 && o.index_two == 1));
        }
    }

    #[test]
    fn figure_eight_p5_sphere() {
        let d = parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)").unwrap();
        for c in surjective(&d, 5) {
            let h = branched_homology(&d, &c).unwrap();
            assert!(h.branched.is_trivial(), "{}", h.branched);
        }
    }

    #[test]
    fn genus_bounds() {
        assert_eq!(genus_bound(3, 2).unwrap(), 0);
        assert_eq!(genus_bound(5, 3).unwrap(), 2);
        assert_eq!(genus_bound(3, 4).unwrap(), 2);
        assert!(genus_bound(3, 1).is_err());
        assert!(genus_bound(4, 2).is_err());
    }

    #[test]
    fn census() {
        let d = trefoil();
        let c = &surjective(&d, 3)[0];
        let s = sheet_census(&d, c, Some(2)).unwrap();
        assert_eq!((s.index_two, s.index_one), (1, 1));
        assert_eq!(s.bridge_sphere_euler, 2);
        assert_eq!(s.bridge_sphere_genus, 0);
        let seven = parse_pd("X(14,8,1,7) X(6,2,7,1) X(2,12,3,11) X(10,4,11,3) X(4,10,5,9) X(12,6,13,5) X(8,14,9,13)").unwrap();
        let c7 = &surjective(&parse_pd("X(14,8,1,7) X(6,2,7,1) X(2,12,3,11) X(10,4,11,3) X(4,10,5,9) X(12,6,13,5) X(8,14,9,13)").unwrap(), 15)[0];
        let s = sheet_census(&seven, c7, Some(2)).unwrap();
        assert_eq!((s.index_two, s.index_one), (7, 1));
    }
}
