//! Exhaustive vertex/face commutation checks for an arbitrary finite groupoid
//! on one face whose four edges carry morphisms.
//!
//! Slots: `g1` left edge (pointing up), `g2` top edge (pointing right), `g3`
//! right edge (pointing up), `g4` bottom edge (pointing right). The face
//! projector keeps a tuple when `g1 · g2 · g3⁻¹ · g4⁻¹ = h`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::groupoid::{Groupoid, MorphismId};
use crate::lattice::Corner;

pub type Tuple = [MorphismId; 4];

/// Sparse integer combination of basis tuples.
pub type SparseState = BTreeMap<Tuple, i64>;

/// Orientation of a face edge relative to a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Incidence {
    /// The edge ends at the vertex: `e ↦ e · g⁻¹`.
    Incoming,
    /// The edge starts at the vertex: `e ↦ g · e`.
    Outgoing,
}

/// The two slots meeting at a corner and how each meets the vertex.
fn corner_slots(corner: Corner) -> [(usize, Incidence); 2] {
    use Incidence::{Incoming, Outgoing};
    match corner {
        Corner::NW => [(0, Incoming), (1, Outgoing)],
        Corner::NE => [(1, Incoming), (2, Incoming)],
        Corner::SE => [(3, Incoming), (2, Outgoing)],
        Corner::SW => [(0, Outgoing), (3, Outgoing)],
    }
}

pub struct FaceVertexSpace<'a> {
    g: &'a Groupoid,
}

impl<'a> FaceVertexSpace<'a> {
    pub fn new(g: &'a Groupoid) -> Self {
        Self { g }
    }

    pub fn dimension(&self) -> usize {
        self.g.len().pow(4)
    }

    pub fn basis(&self) -> impl Iterator<Item = Tuple> + '_ {
        let size = self.g.len();
        (0..self.dimension()).map(move |i| {
            [
                MorphismId(i / (size * size * size)),
                MorphismId(i / (size * size) % size),
                MorphismId(i / size % size),
                MorphismId(i % size),
            ]
        })
    }

    pub fn holonomy(&self, t: &Tuple) -> Option<MorphismId> {
        let g3i = self.g.inverse(t[2])?;
        let g4i = self.g.inverse(t[3])?;
        self.g.compose_path(&[t[0], t[1], g3i, g4i])
    }

    /// `B^h` on a basis tuple.
    pub fn apply_face(&self, h: MorphismId, t: &Tuple) -> Option<Tuple> {
        (self.holonomy(t) == Some(h)).then_some(*t)
    }

    /// `Σ_{h ∈ hs} B^h` on a basis tuple.
    pub fn apply_face_sum(&self, hs: &[MorphismId], t: &Tuple) -> Option<Tuple> {
        self.holonomy(t).filter(|h| hs.contains(h)).map(|_| *t)
    }

    /// `A^g` at `corner` on a basis tuple.
    pub fn apply_vertex(&self, g: MorphismId, corner: Corner, t: &Tuple) -> Option<Tuple> {
        let mut out = *t;
        for (slot, inc) in corner_slots(corner) {
            let e = t[slot];
            out[slot] = match inc {
                Incidence::Incoming => {
                    if self.g.target(e) != self.g.target(g) {
                        return None;
                    }
                    self.g.compose(e, self.g.inverse(g)?)?
                }
                Incidence::Outgoing => {
                    if self.g.source(e) != self.g.target(g) {
                        return None;
                    }
                    self.g.compose(g, e)?
                }
            };
        }
        Some(out)
    }

    /// `Σ_g A^g` at `corner` on a sparse state.
    pub fn apply_vertex_sum(&self, corner: Corner, state: &SparseState) -> SparseState {
        let mut out = SparseState::new();
        for (t, &c) in state {
            for g in self.g.morphism_ids() {
                if let Some(img) = self.apply_vertex(g, corner, t) {
                    *out.entry(img).or_insert(0) += c;
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn apply_face_sum_sparse(&self, hs: &[MorphismId], state: &SparseState) -> SparseState {
        state
            .iter()
            .filter_map(|(t, &c)| self.apply_face_sum(hs, t).map(|img| (img, c)))
            .collect()
    }

    /// Basis tuples on which `A^g B^h` and `B^h A^g` disagree.
    pub fn commutator_deviation(&self, g: MorphismId, h: MorphismId, corner: Corner) -> usize {
        self.basis()
            .filter(|t| {
                let ab = self
                    .apply_face(h, t)
                    .and_then(|x| self.apply_vertex(g, corner, &x));
                let ba = self
                    .apply_vertex(g, corner, t)
                    .and_then(|x| self.apply_face(h, &x));
                ab != ba
            })
            .count()
    }

    /// Basis tuples on which `Σ_g A^g` and `Σ_{h ∈ hs} B^h` fail to commute.
    pub fn sum_commutator_deviation(&self, hs: &[MorphismId], corner: Corner) -> usize {
        self.basis()
            .filter(|t| {
                let e: SparseState = [(*t, 1)].into_iter().collect();
                let ab = self.apply_vertex_sum(corner, &self.apply_face_sum_sparse(hs, &e));
                let ba = self.apply_face_sum_sparse(hs, &self.apply_vertex_sum(corner, &e));
                ab != ba
            })
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub g: String,
    pub h: String,
    /// Basis tuples on which the two orders disagree.
    pub deviation: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerReport {
    pub corner: String,
    pub pairs_checked: usize,
    pub max_deviation: usize,
    pub violations: Vec<PairViolation>,
    /// Deviation of `Σ_g A^g` against the face projector summed over the
    /// identity morphisms.
    pub central_sum_deviation: usize,
}

impl CornerReport {
    pub fn all_pairs_commute(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Enumerates every `(g, h)` pair and every basis tuple at one corner.
pub fn check_corner_commutation(g: &Groupoid, corner: Corner) -> CornerReport {
    let space = FaceVertexSpace::new(g);
    let mut violations = Vec::new();
    let mut max_deviation = 0;
    let mut pairs_checked = 0;
    for a in g.morphism_ids() {
        for h in g.morphism_ids() {
            pairs_checked += 1;
            let dev = space.commutator_deviation(a, h, corner);
            max_deviation = max_deviation.max(dev);
            if dev > 0 {
                violations.push(PairViolation {
                    g: g.label(a).to_string(),
                    h: g.label(h).to_string(),
                    deviation: dev,
                });
            }
        }
    }
    let identities: Vec<MorphismId> = g.central_identity_sum().terms().map(|(m, _)| m).collect();
    CornerReport {
        corner: corner.to_string(),
        pairs_checked,
        max_deviation,
        violations,
        central_sum_deviation: space.sum_commutator_deviation(&identities, corner),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::morphism_face_projector;

    fn id(g: &Groupoid, s: &str) -> MorphismId {
        g.find(s).unwrap()
    }

    #[test]
    fn face_examples() {
        let g = Groupoid::sis(2).unwrap();
        let s = FaceVertexSpace::new(&g);
        let [x11, x12, x22] = ["x11", "x12", "x22"].map(|l| id(&g, l));
        assert_eq!(s.apply_face(x11, &[x11; 4]), Some([x11; 4]));
        // The bottom edge must start at object 2 for the path to compose.
        let t = [x11, x12, x22, x22];
        assert_eq!(s.apply_face(x12, &t), Some(t));
        assert_eq!(s.apply_face(x12, &[x11, x12, x22, x11]), None);
        assert_eq!(s.apply_face(x11, &[x12; 4]), None);
        // Left 1₁, top a, right 1₂, bottom a has holonomy 1₁.
        assert_eq!(s.holonomy(&[x11, x12, x22, x12]), Some(x11));
    }

    #[test]
    fn vertex_examples() {
        let g = Groupoid::sis(2).unwrap();
        let s = FaceVertexSpace::new(&g);
        let [x11, x12, x21, x22] = ["x11", "x12", "x21", "x22"].map(|l| id(&g, l));
        // NW with g = x12: g1 ↦ g1 · x21 needs t(g1) = 2; g2 ↦ x12 · g2 needs s(g2) = 2.
        let t = [x12, x22, x11, x11];
        assert_eq!(
            s.apply_vertex(x12, Corner::NW, &t),
            Some([x11, x12, x11, x11])
        );
        assert_eq!(s.apply_vertex(x22, Corner::NW, &t), Some(t));
        assert_eq!(s.apply_vertex(x12, Corner::NW, &[x11; 4]), None);
        let _ = x21;
    }

    #[test]
    fn corners_sis2() {
        let g = Groupoid::sis(2).unwrap();
        for c in [Corner::NW, Corner::NE, Corner::SE] {
            let r = check_corner_commutation(&g, c);
            assert_eq!(r.max_deviation, 0, "{c}");
            assert_eq!(r.pairs_checked, 16);
        }
        // Only loop holonomies survive A^g at the south-west corner, where
        // they are conjugated: x11 fails, while x12 states are annihilated
        // in either order.
        let sw = check_corner_commutation(&g, Corner::SW);
        assert!(sw.violations.iter().any(|v| v.h == "x11" && v.g == "x21"));
        assert!(sw.violations.iter().all(|v| v.h != "x12"));
        assert_eq!(sw.central_sum_deviation, 0);
    }

    #[test]
    fn face_matches_catalog() {
        let g = Groupoid::sis(2).unwrap();
        let s = FaceVertexSpace::new(&g);
        for h in g.morphism_ids() {
            let diag = morphism_face_projector(&g, &[true, true, false, false], Some(h)).unwrap();
            for (i, t) in s.basis().enumerate() {
                assert_eq!(diag[i], s.apply_face(h, &t).is_some());
            }
        }
    }
}
