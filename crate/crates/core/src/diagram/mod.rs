//! Knot diagrams from PD codes, braid words, and the Wirtinger presentation.
//!
//! PD convention: `X(a,b,c,d)` lists the four arcs at a crossing counterclockwise,
//! starting from the incoming understrand `a`; `c` is the outgoing understrand and
//! `b`, `d` are the two halves of the overstrand. Orientation is read off by walking
//! the knot along the understrand passages `a -> c`.

mod braid;
mod parse;

pub use braid::{parse_braid, BraidWord};
pub use parse::parse_pd;

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::GroupPresentation;

/// A validated, canonically relabelled knot diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotDiagram {
    crossings: Vec<[u32; 4]>,
    signs: Vec<i8>,
    strand_of_arc: Vec<usize>,
    strand_count: usize,
    faces: Vec<Vec<(usize, usize)>>,
    corner_face: Vec<[usize; 4]>,
}

impl KnotDiagram {
    /// The round 0-crossing unknot.
    pub fn unknot() -> Self {
        KnotDiagram {
            crossings: Vec::new(),
            signs: Vec::new(),
            strand_of_arc: vec![0],
            strand_count: 1,
            faces: vec![Vec::new(), Vec::new()],
            corner_face: Vec::new(),
        }
    }

    /// Validates raw PD tuples and relabels arcs `1..=2n` along the orientation,
    /// starting with the incoming understrand of the first crossing.
    pub fn from_pd(raw: &[[u64; 4]]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        let n = raw.len();
        let mut occurrences: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, x) in raw.iter().enumerate() {
            for (pos, &arc) in x.iter().enumerate() {
                occurrences.entry(arc).or_default().push((c, pos));
            }
        }
        if let Some((&arc, occ)) = occurrences.iter().find(|(_, occ)| occ.len() != 2) {
            return Err(Error::ArcMultiplicity { arc, count: occ.len() });
        }
        let other = |c: usize, pos: usize| -> (usize, usize) {
            let occ = &occurrences[&raw[c][pos]];
            if occ[0] == (c, pos) {
                occ[1]
            } else {
                occ[0]
            }
        };

        // walk the knot, entering each crossing through some slot
        let mut labels = vec![[0u32; 4]; n];
        let mut over_entry: Vec<Option<usize>> = vec![None; n];
        let mut under_seen = vec![false; n];
        let mut next = 1u32;
        let (mut c, mut pos) = (0usize, 0usize);
        let label_edge = |labels: &mut Vec<[u32; 4]>, c: usize, pos: usize, l: u32| {
            let (c2, p2) = other(c, pos);
            labels[c][pos] = l;
            labels[c2][p2] = l;
        };
        label_edge(&mut labels, 0, 0, next);
        next += 1;
        let mut steps = 0usize;
        loop {
            match pos {
                0 => {
                    if std::mem::replace(&mut under_seen[c], true) {
                        return Err(Error::Orientation { arc: raw[c][pos], crossing: c });
                    }
                }
                2 => return Err(Error::Orientation { arc: raw[c][pos], crossing: c }),
                _ => {
                    if over_entry[c].replace(pos).is_some() {
                        return Err(Error::Orientation { arc: raw[c][pos], crossing: c });
                    }
                }
            }
            steps += 1;
            let exit = (pos + 2) % 4;
            let (c2, p2) = other(c, exit);
            if (c2, p2) == (0, 0) {
                break;
            }
            label_edge(&mut labels, c, exit, next);
            next += 1;
            (c, pos) = (c2, p2);
        }

        if steps < 2 * n {
            return Err(component_error(raw, &other));
        }

        let signs = over_entry.iter().map(|e| if *e == Some(3) { 1 } else { -1 }).collect();

        // strands: the two overstrand halves b, d belong to the same Wirtinger arc
        let arc_count = 2 * n;
        let mut uf = UnionFind::new(arc_count);
        for x in &labels {
            uf.union(x[1] as usize - 1, x[3] as usize - 1);
        }
        let mut strand_index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut strand_of_arc = vec![0; arc_count];
        for (a, slot) in strand_of_arc.iter_mut().enumerate() {
            let root = uf.find(a);
            let len = strand_index.len();
            *slot = *strand_index.entry(root).or_insert(len);
        }
        let strand_count = strand_index.len();

        // faces: corner k sits between slots k and k+1
        let mut corner_face = vec![[usize::MAX; 4]; n];
        let mut faces = Vec::new();
        for c0 in 0..n {
            for k0 in 0..4 {
                if corner_face[c0][k0] != usize::MAX {
                    continue;
                }
                let f = faces.len();
                let mut face = Vec::new();
                let (mut c, mut k) = (c0, k0);
                while corner_face[c][k] == usize::MAX {
                    corner_face[c][k] = f;
                    face.push((c, k));
                    (c, k) = other(c, (k + 1) % 4);
                }
                faces.push(face);
            }
        }
        if faces.len() != n + 2 {
            return Err(Error::NonPlanar { faces: faces.len(), crossings: n });
        }

        Ok(KnotDiagram { crossings: labels, signs, strand_of_arc, strand_count, faces, corner_face })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Arcs of the PD code (edges between crossings); 1 for the round unknot.
    pub fn arc_count(&self) -> usize {
        self.strand_of_arc.len()
    }

    /// Canonical PD tuples, 1-based.
    pub fn pd(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    /// Wirtinger arcs (maximal overstrands), the generators of the knot group.
    pub fn strand_count(&self) -> usize {
        self.strand_count
    }

    /// Strand (0-based) containing PD arc `arc` (1-based).
    pub fn strand_of(&self, arc: u32) -> usize {
        self.strand_of_arc[arc as usize - 1]
    }

    /// `(incoming under, over, outgoing under)` strands at crossing `c`.
    pub fn crossing_strands(&self, c: usize) -> (usize, usize, usize) {
        let x = self.crossings[c];
        (self.strand_of(x[0]), self.strand_of(x[1]), self.strand_of(x[2]))
    }

    /// Number of strands that pass over at least one crossing: an upper bound for the bridge number.
    pub fn bridge_upper_bound(&self) -> usize {
        let mut over: Vec<usize> = (0..self.crossing_count()).map(|c| self.crossing_strands(c).1).collect();
        over.sort_unstable();
        over.dedup();
        over.len().max(1)
    }

    /// Faces of the diagram on the sphere as lists of `(crossing, corner)`.
    pub fn faces(&self) -> &[Vec<(usize, usize)>] {
        &self.faces
    }

    /// Face index of corner `k` of crossing `c`.
    pub fn corner_face(&self, c: usize, k: usize) -> usize {
        self.corner_face[c][k]
    }

    /// One generator per strand, one relator per crossing: `x_c = x_o^s x_a x_o^-s` with `s` the crossing sign.
    pub fn wirtinger(&self) -> GroupPresentation {
        let relators = (0..self.crossing_count())
            .map(|c| {
                let (a, o, out) = self.crossing_strands(c);
                let (a, o, out) = (a as i32 + 1, o as i32 + 1, out as i32 + 1);
                let s = self.signs[c] as i32;
                vec![s * o, a, -s * o, -out]
            })
            .collect();
        GroupPresentation::new(self.strand_count, relators).expect("strand indices in range")
    }
}

impl Serialize for KnotDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pd<'a> {
            pd: &'a [[u32; 4]],
        }
        Pd { pd: &self.crossings }.serialize(s)
    }
}

fn component_error(raw: &[[u64; 4]], other: &dyn Fn(usize, usize) -> (usize, usize)) -> Error {
    let n = raw.len();
    let mut half_edges = UnionFind::new(4 * n);
    let mut crossings = UnionFind::new(n);
    for c in 0..n {
        half_edges.union(4 * c, 4 * c + 2);
        half_edges.union(4 * c + 1, 4 * c + 3);
        for pos in 0..4 {
            let (c2, p2) = other(c, pos);
            half_edges.union(4 * c + pos, 4 * c2 + p2);
            crossings.union(c, c2);
        }
    }
    if crossings.classes() > 1 {
        Error::Disconnected
    } else {
        Error::NotAKnot { components: half_edges.classes() }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Keeps the smaller root.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn classes(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
