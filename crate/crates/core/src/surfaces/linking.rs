use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{checkerboard, goeritz_matrix};
use crate::coloring::Coloring;
use crate::diagram::KnotDiagram;
use crate::error::{Error, Result};
use crate::linalg::{cokernel, smith_normal_form, AbelianGroup};

/// Largest group order for which metabolizers are enumerated.
pub const METABOLIZER_BUDGET: u64 = 10_000;

/// The linking form `λ(x, y) = x G⁻¹ yᵀ mod 1` on the torsion of `coker G`,
/// expressed on Smith normal form generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkingForm {
    pub group: AbelianGroup,
    /// Orders of the cyclic summands, in divisibility order.
    pub orders: Vec<u64>,
    /// Generators as integer vectors on the Goeritz regions.
    #[serde(serialize_with = "serialize_bigint_rows")]
    pub generators: Vec<Vec<BigInt>>,
    /// `λ(g_i, g_j)` reduced into `[0, 1)`.
    #[serde(serialize_with = "serialize_rationals")]
    pub form: Vec<Vec<BigRational>>,
}

impl LinkingForm {
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// `λ(x, y)` for elements given by coordinates on the generators.
    pub fn value(&self, x: &[u64], y: &[u64]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, &a) in x.iter().enumerate() {
            for (j, &b) in y.iter().enumerate() {
                acc += &self.form[i][j] * BigRational::from(BigInt::from(a * b));
            }
        }
        frac(&acc)
    }

    /// Coordinates of the element with mixed-radix index `idx`.
    pub fn element(&self, mut idx: u64) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&d| {
                let a = idx % d;
                idx /= d;
                a
            })
            .collect()
    }

    fn index_of(&self, coords: &[u64]) -> u64 {
        self.orders.iter().zip(coords).rev().fold(0, |acc, (&d, &a)| acc * d + a % d)
    }

    /// Numerators of the form over the common denominator `e = max order`.
    fn integer_form(&self) -> (u64, Vec<Vec<u64>>) {
        let e = self.orders.last().copied().unwrap_or(1);
        let rows = self
            .form
            .iter()
            .map(|row| {
                row.iter()
                    .map(|q| {
                        let scaled = q * BigRational::from(BigInt::from(e));
                        debug_assert!(scaled.is_integer());
                        scaled.to_integer().mod_floor(&BigInt::from(e)).to_u64().expect("fits")
                    })
                    .collect()
            })
            .collect();
        (e, rows)
    }
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

fn serialize_bigint_rows<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<crate::linalg::JsonInt>> = rows.iter().map(|r| r.iter().map(Into::into).collect()).collect();
    v.serialize(s)
}

fn serialize_rationals<S: Serializer>(rows: &[Vec<BigRational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    v.serialize(s)
}

pub fn linking_form(d: &KnotDiagram) -> Result<LinkingForm> {
    let g = goeritz_matrix(d);
    if g.determinant()?.is_zero() {
        return Err(Error::Singular);
    }
    let inv = g.inverse_rational()?;
    let snf = smith_normal_form(&g);
    let mut orders = Vec::new();
    let mut generators = Vec::new();
    for (k, dk) in snf.diagonal().iter().enumerate() {
        if *dk > BigInt::one() {
            orders.push(dk.to_u64().ok_or_else(|| Error::Internal("torsion order exceeds u64".into()))?);
            generators.push(snf.v.row(k).to_vec());
        }
    }
    let n = g.rows();
    let form = generators
        .iter()
        .map(|x| {
            generators
                .iter()
                .map(|y| {
                    let mut acc = BigRational::zero();
                    for i in 0..n {
                        for j in 0..n {
                            acc += BigRational::from(&x[i] * &y[j]) * &inv[i][j];
                        }
                    }
                    frac(&acc)
                })
                .collect()
        })
        .collect();
    Ok(LinkingForm { group: cokernel(&g), orders, generators, form })
}

/// A subgroup of `H₁(Σ₂)` on which the linking form vanishes, of order `sqrt|H₁(Σ₂)|`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Metabolizer {
    /// Coordinates on the linking-form generators; a greedy generating set of the subgroup.
    pub generators: Vec<Vec<u64>>,
    pub order: u64,
    #[serde(skip)]
    elements: Vec<u64>,
}

impl Metabolizer {
    /// Mixed-radix indices of all elements, sorted.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }
}

fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&s| s * s == n)
}

/// Every metabolizer, by breadth-first search over isotropic subgroups.
/// Returns an empty list when the group order is not a perfect square.
pub fn metabolizers(lf: &LinkingForm) -> Result<Vec<Metabolizer>> {
    let order = lf.order();
    if order > METABOLIZER_BUDGET {
        return Err(Error::BudgetExceeded { order: order.to_string(), budget: METABOLIZER_BUDGET });
    }
    let Some(target) = exact_sqrt(order) else {
        return Ok(Vec::new());
    };
    let (e, nf) = lf.integer_form();
    let elems: Vec<Vec<u64>> = (0..order).map(|i| lf.element(i)).collect();
    let pair = |x: &[u64], y: &[u64]| -> u64 {
        let mut acc = 0u64;
        for (i, &a) in x.iter().enumerate() {
            for (j, &b) in y.iter().enumerate() {
                acc = (acc + a * b % e * nf[i][j]) % e;
            }
        }
        acc
    };
    let add = |x: &[u64], y: &[u64]| -> u64 {
        let sum: Vec<u64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        lf.index_of(&sum)
    };
    let self_isotropic: Vec<u64> = (0..order).filter(|&i| pair(&elems[i as usize], &elems[i as usize]) == 0).collect();

    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<u64>> = VecDeque::from([vec![0]]);
    seen.insert(vec![0]);
    while let Some(h) = queue.pop_front() {
        if h.len() as u64 == target {
            found.insert(h);
            continue;
        }
        let members: BTreeSet<u64> = h.iter().copied().collect();
        for &x in &self_isotropic {
            if members.contains(&x) || h.iter().any(|&y| pair(&elems[x as usize], &elems[y as usize]) != 0) {
                continue;
            }
            // closure of <h, x>
            let mut next: BTreeSet<u64> = members.clone();
            let mut multiple = x;
            while !members.contains(&multiple) {
                for &y in &h {
                    next.insert(add(&elems[multiple as usize], &elems[y as usize]));
                }
                multiple = add(&elems[multiple as usize], &elems[x as usize]);
            }
            let next: Vec<u64> = next.into_iter().collect();
            if (next.len() as u64) <= target && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(found.into_iter().map(|elements| metabolizer_from(lf, elements)).collect())
}

fn metabolizer_from(lf: &LinkingForm, elements: Vec<u64>) -> Metabolizer {
    let mut span: BTreeSet<u64> = BTreeSet::from([0]);
    let mut generators = Vec::new();
    for &x in &elements {
        if span.contains(&x) {
            continue;
        }
        let gx = lf.element(x);
        generators.push(gx.clone());
        let mut grown = span.clone();
        for &s in &span {
            let mut cur = lf.element(s);
            loop {
                cur = cur.iter().zip(&gx).map(|(a, b)| a + b).collect();
                let idx = lf.index_of(&cur);
                if !grown.insert(idx) {
                    break;
                }
            }
        }
        span = grown;
    }
    Metabolizer { generators, order: elements.len() as u64, elements }
}

/// The homomorphism `H₁(Σ₂) -> Z/p` induced by a coloring, as its values on the
/// linking-form generators.
///
/// Regions are labelled so that the two regions along an edge sum to the color of
/// that edge (a Dehn coloring); differences of white-region labels give a vector in
/// the kernel of the Goeritz matrix mod `p`, and pairing it with the generators gives
/// the values.
pub fn rho_bar(c: &Coloring, d: &KnotDiagram, lf: &LinkingForm) -> Result<Vec<u64>> {
    let p = c.p;
    if d.crossing_count() == 0 {
        return Ok(Vec::new());
    }
    let nf = d.faces().len();
    let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); nf];
    for x in 0..d.crossing_count() {
        for slot in 0..4 {
            let color = c.labels[d.strand_of(d.pd()[x][slot])];
            let (f, g) = (d.corner_face(x, (slot + 3) % 4), d.corner_face(x, slot));
            adj[f].push((g, color));
            adj[g].push((f, color));
        }
    }
    let mut region: Vec<Option<u64>> = vec![None; nf];
    region[0] = Some(0);
    let mut stack = vec![0usize];
    while let Some(f) = stack.pop() {
        let rf = region[f].expect("visited");
        for &(g, color) in &adj[f] {
            let want = (color + p - rf) % p;
            match region[g] {
                None => {
                    region[g] = Some(want);
                    stack.push(g);
                }
                Some(r) if r != want => return Err(Error::Internal("region labels are inconsistent".into())),
                Some(_) => {}
            }
        }
    }
    let board = checkerboard(d);
    let base = region[board.white[0]].expect("visited");
    let w: Vec<i64> = board.white[1..].iter().map(|&f| ((region[f].expect("visited") + p - base) % p) as i64).collect();

    let g = goeritz_matrix(d);
    let pb = BigInt::from(p);
    for i in 0..g.rows() {
        let s: BigInt = g.row(i).iter().zip(&w).map(|(a, &b)| a * b).sum();
        if !s.mod_floor(&pb).is_zero() {
            return Err(Error::Internal("region vector is not in the Goeritz kernel".into()));
        }
    }
    Ok(lf
        .generators
        .iter()
        .map(|gen| {
            let s: BigInt = gen.iter().zip(&w).map(|(a, &b)| a * b).sum();
            s.mod_floor(&pb).to_u64().expect("reduced")
        })
        .collect())
}

/// True iff the map induced by `c` vanishes on at least one metabolizer.
pub fn coloring_passes_metabolizer_filter(c: &Coloring, d: &KnotDiagram) -> Result<bool> {
    if !c.surjective {
        return Err(Error::NotSurjective);
    }
    let lf = linking_form(d)?;
    let mets = metabolizers(&lf)?;
    let phi = rho_bar(c, d, &lf)?;
    Ok(vanishes_on_some(&phi, c.p, &mets))
}

/// True iff the map with generator values `phi` (mod `p`) kills every generator of some metabolizer.
pub fn vanishes_on_some(phi: &[u64], p: u64, mets: &[Metabolizer]) -> bool {
    mets.iter().any(|m| m.generators.iter().all(|h| h.iter().zip(phi).map(|(a, b)| a * b % p).sum::<u64>() % p == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::fox_colorings;
    use crate::diagram::parse_pd;

    fn six_one() -> KnotDiagram {
        parse_pd("X(7,12,8,1) X(1,6,2,7) X(11,3,12,2) X(3,11,4,10) X(9,5,10,4) X(5,9,6,8)").unwrap()
    }

    fn trefoil() -> KnotDiagram {
        parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap()
    }

    /// All subgroups of a cyclic group `Z/n` are `<k>` for `k | n`; check isotropy directly.
    fn cyclic_metabolizer_oracle(n: u64, self_value: &BigRational) -> usize {
        (1..=n)
            .filter(|k| n.is_multiple_of(*k))
            .filter(|&k| (n / k) * (n / k) == n)
            .filter(|&k| frac(&(self_value * BigRational::from(BigInt::from(k * k)))).is_zero())
            .count()
    }

    #[test]
    fn trefoil_form() {
        let lf = linking_form(&trefoil()).unwrap();
        assert_eq!(lf.orders, vec![3]);
        let v = &lf.form[0][0];
        assert!(*v == BigRational::new(1.into(), 3.into()) || *v == BigRational::new(2.into(), 3.into()));
        assert!(metabolizers(&lf).unwrap().is_empty());
    }

    #[test]
    fn six_one_has_one_metabolizer() {
        let lf = linking_form(&six_one()).unwrap();
        assert_eq!(lf.orders, vec![9]);
        let numer = (&lf.form[0][0] * BigRational::from(BigInt::from(9))).to_integer();
        assert_eq!(numer.gcd(&BigInt::from(9)), BigInt::one());
        let mets = metabolizers(&lf).unwrap();
        assert_eq!(mets.len(), cyclic_metabolizer_oracle(9, &lf.form[0][0]));
        assert_eq!(mets.len(), 1);
        assert_eq!(mets[0].order, 3);
        assert_eq!(mets[0].elements(), &[0, 3, 6]);
        for c in fox_colorings(&six_one(), 3).unwrap().iter().filter(|c| c.surjective) {
            assert!(coloring_passes_metabolizer_filter(c, &six_one()).unwrap());
        }
    }

    #[test]
    fn trivial_group_has_trivial_metabolizer() {
        let lf = linking_form(&KnotDiagram::unknot()).unwrap();
        let mets = metabolizers(&lf).unwrap();
        assert_eq!(mets.len(), 1);
        assert_eq!(mets[0].order, 1);
    }

    #[test]
    fn trefoil_fails_filter() {
        for c in fox_colorings(&trefoil(), 3).unwrap().iter().filter(|c| c.surjective) {
            assert!(!coloring_passes_metabolizer_filter(c, &trefoil()).unwrap());
        }
    }

    #[test]
    fn rho_bar_is_nonzero_for_surjective_colorings() {
        let d = six_one();
        let lf = linking_form(&d).unwrap();
        for c in fox_colorings(&d, 3).unwrap() {
            let phi = rho_bar(&c, &d, &lf).unwrap();
            assert_eq!(phi.iter().any(|&v| v != 0), c.surjective);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let lf = LinkingForm {
            group: AbelianGroup::trivial(),
            orders: vec![101, 101],
            generators: vec![vec![], vec![]],
            form: vec![vec![BigRational::zero(); 2]; 2],
        };
        assert!(matches!(metabolizers(&lf), Err(Error::BudgetExceeded { .. })));
    }
}
