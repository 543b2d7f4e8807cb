//! Finite groupoids with partial composition.
//!
//! Composition follows the "f then g" convention: `compose(f, g)` is defined
//! exactly when `target(f) == source(g)` and otherwise yields `None`, the zero
//! of the groupoid algebra.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Object index, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ObjectId(pub usize);

/// Index into a groupoid's morphism table, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MorphismId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: ObjectId,
    pub target: ObjectId,
    pub inverse: Option<MorphismId>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupoid {
    n_objects: usize,
    morphisms: Vec<Morphism>,
    table: Vec<Option<MorphismId>>,
}

/// One failed axiom check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// A composition is recorded for a pair whose endpoints do not meet.
    ComposedNonComposable {
        f: String,
        g: String,
    },
    /// A composable pair has no recorded product.
    MissingComposition {
        f: String,
        g: String,
    },
    /// A recorded product has the wrong source or target.
    BadEndpoints {
        f: String,
        g: String,
        product: String,
    },
    NotAssociative {
        f: String,
        g: String,
        h: String,
    },
    MissingIdentity {
        object: usize,
    },
    MissingInverse {
        morphism: String,
    },
    BadInverse {
        morphism: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ComposedNonComposable { f: a, g } => {
                write!(f, "composition recorded for non-composable pair ({a}, {g})")
            }
            Violation::MissingComposition { f: a, g } => {
                write!(f, "missing composition for composable pair ({a}, {g})")
            }
            Violation::BadEndpoints { f: a, g, product } => {
                write!(f, "product {a}·{g} = {product} has wrong endpoints")
            }
            Violation::NotAssociative { f: a, g, h } => {
                write!(f, "associativity fails on ({a}, {g}, {h})")
            }
            Violation::MissingIdentity { object } => {
                write!(f, "missing identity at object {object}")
            }
            Violation::MissingInverse { morphism } => write!(f, "missing inverse for {morphism}"),
            Violation::BadInverse { morphism } => {
                write!(f, "inverse of {morphism} is not two-sided")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Groupoid {
    /// Builds a groupoid from raw tables. Pairs absent from `compositions`
    /// compose to zero. Index errors are rejected; axioms are not checked here.
    pub fn from_parts(
        n_objects: usize,
        morphisms: Vec<Morphism>,
        compositions: impl IntoIterator<Item = (MorphismId, MorphismId, MorphismId)>,
    ) -> Result<Self> {
        let count = morphisms.len();
        for m in &morphisms {
            for obj in [m.source, m.target] {
                if obj.0 == 0 || obj.0 > n_objects {
                    return Err(Error::InvalidArgument(format!(
                        "morphism {} refers to object {} outside 1..={n_objects}",
                        m.label, obj.0
                    )));
                }
            }
            if let Some(inv) = m.inverse {
                if inv.0 >= count {
                    return Err(Error::InvalidArgument(format!(
                        "inverse index {} of {} out of range",
                        inv.0, m.label
                    )));
                }
            }
        }
        let mut table = vec![None; count * count];
        for (f, g, h) in compositions {
            if f.0 >= count || g.0 >= count || h.0 >= count {
                return Err(Error::InvalidArgument(format!(
                    "composition entry ({}, {}, {}) out of range",
                    f.0, g.0, h.0
                )));
            }
            table[f.0 * count + g.0] = Some(h);
        }
        Ok(Groupoid {
            n_objects,
            morphisms,
            table,
        })
    }

    /// The groupoid with `n` objects and exactly one morphism `x_ij` between
    /// every ordered pair, composing as `x_ij · x_kl = δ(j,k) x_il`.
    pub fn sis(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("S^n_1 needs n ≥ 1".into()));
        }
        let id = |i: usize, j: usize| MorphismId((i - 1) * n + (j - 1));
        let mut morphisms = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                morphisms.push(Morphism {
                    source: ObjectId(i),
                    target: ObjectId(j),
                    inverse: Some(id(j, i)),
                    label: sis_label(n, i, j),
                });
            }
        }
        let mut comps = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                for l in 1..=n {
                    comps.push((id(i, j), id(j, l), id(i, l)));
                }
            }
        }
        Groupoid::from_parts(n, morphisms, comps)
    }

    /// Two objects with morphisms `e_ij` and `z_ij`; `z` squares to `e`.
    pub fn isotropy_z2() -> Self {
        let id =
            |z: bool, i: usize, j: usize| MorphismId(usize::from(z) * 4 + (i - 1) * 2 + (j - 1));
        let mut morphisms = Vec::with_capacity(8);
        for z in [false, true] {
            for i in 1..=2 {
                for j in 1..=2 {
                    morphisms.push(Morphism {
                        source: ObjectId(i),
                        target: ObjectId(j),
                        inverse: Some(id(z, j, i)),
                        label: format!("{}{i}{j}", if z { 'z' } else { 'e' }),
                    });
                }
            }
        }
        let mut comps = Vec::new();
        for za in [false, true] {
            for zb in [false, true] {
                for i in 1..=2 {
                    for j in 1..=2 {
                        for l in 1..=2 {
                            comps.push((id(za, i, j), id(zb, j, l), id(za ^ zb, i, l)));
                        }
                    }
                }
            }
        }
        Groupoid::from_parts(2, morphisms, comps).expect("static table is in range")
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorphismId> {
        (0..self.morphisms.len()).map(MorphismId)
    }

    pub fn morphism(&self, m: MorphismId) -> &Morphism {
        &self.morphisms[m.0]
    }

    pub fn source(&self, m: MorphismId) -> ObjectId {
        self.morphisms[m.0].source
    }

    pub fn target(&self, m: MorphismId) -> ObjectId {
        self.morphisms[m.0].target
    }

    pub fn inverse(&self, m: MorphismId) -> Option<MorphismId> {
        self.morphisms[m.0].inverse
    }

    pub fn label(&self, m: MorphismId) -> &str {
        &self.morphisms[m.0].label
    }

    pub fn find(&self, label: &str) -> Option<MorphismId> {
        self.morphisms
            .iter()
            .position(|m| m.label == label)
            .map(MorphismId)
    }

    /// Replaces the recorded inverse of `m`, e.g. to build a defective table.
    pub fn with_inverse(mut self, m: MorphismId, inverse: Option<MorphismId>) -> Self {
        self.morphisms[m.0].inverse = inverse;
        self
    }

    /// `f` then `g`; `None` is the zero of the algebra.
    pub fn compose(&self, f: MorphismId, g: MorphismId) -> Option<MorphismId> {
        self.table[f.0 * self.morphisms.len() + g.0]
    }

    /// Left-to-right product of a sequence; `None` as soon as a step is zero.
    pub fn compose_path(&self, path: &[MorphismId]) -> Option<MorphismId> {
        let (first, rest) = path.split_first()?;
        rest.iter()
            .try_fold(*first, |acc, &next| self.compose(acc, next))
    }

    /// The morphism that acts as a two-sided unit at `object`, if any.
    pub fn identity_at(&self, object: ObjectId) -> Option<MorphismId> {
        self.morphism_ids().find(|&e| {
            self.source(e) == object
                && self.target(e) == object
                && self.morphism_ids().all(|m| {
                    let left_ok = self.source(m) != object || self.compose(e, m) == Some(m);
                    let right_ok = self.target(m) != object || self.compose(m, e) == Some(m);
                    left_ok && right_ok
                })
        })
    }

    /// True when every ordered pair of objects carries exactly one morphism.
    pub fn is_sis_type(&self) -> bool {
        let n = self.n_objects;
        let mut seen = vec![0usize; n * n];
        for m in &self.morphisms {
            seen[(m.source.0 - 1) * n + (m.target.0 - 1)] += 1;
        }
        seen.iter().all(|&c| c == 1)
    }

    /// Exhaustive check of closure, associativity, identities and inverses.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let lbl = |m: MorphismId| self.label(m).to_string();
        for f in self.morphism_ids() {
            for g in self.morphism_ids() {
                let composable = self.target(f) == self.source(g);
                match (composable, self.compose(f, g)) {
                    (false, Some(_)) => violations.push(Violation::ComposedNonComposable {
                        f: lbl(f),
                        g: lbl(g),
                    }),
                    (true, None) => violations.push(Violation::MissingComposition {
                        f: lbl(f),
                        g: lbl(g),
                    }),
                    (true, Some(h)) => {
                        if self.source(h) != self.source(f) || self.target(h) != self.target(g) {
                            violations.push(Violation::BadEndpoints {
                                f: lbl(f),
                                g: lbl(g),
                                product: lbl(h),
                            });
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for f in self.morphism_ids() {
            for g in self.morphism_ids() {
                let Some(fg) = self.compose(f, g) else {
                    continue;
                };
                for h in self.morphism_ids() {
                    let Some(fg_h) = self.compose(fg, h) else {
                        continue;
                    };
                    let f_gh = self.compose(g, h).and_then(|gh| self.compose(f, gh));
                    if f_gh != Some(fg_h) {
                        violations.push(Violation::NotAssociative {
                            f: lbl(f),
                            g: lbl(g),
                            h: lbl(h),
                        });
                    }
                }
            }
        }
        let identities: Vec<Option<MorphismId>> = (1..=self.n_objects)
            .map(|o| self.identity_at(ObjectId(o)))
            .collect();
        for (o, id) in identities.iter().enumerate() {
            if id.is_none() {
                violations.push(Violation::MissingIdentity { object: o + 1 });
            }
        }
        for m in self.morphism_ids() {
            let Some(inv) = self.inverse(m) else {
                violations.push(Violation::MissingInverse { morphism: lbl(m) });
                continue;
            };
            let at_source = identities[self.source(m).0 - 1];
            let at_target = identities[self.target(m).0 - 1];
            let ok = at_source.is_some()
                && at_target.is_some()
                && self.compose(m, inv) == at_source
                && self.compose(inv, m) == at_target;
            if !ok {
                violations.push(Violation::BadInverse { morphism: lbl(m) });
            }
        }
        ValidationReport { violations }
    }

    /// Sum of all identity morphisms; central in the groupoid algebra.
    pub fn central_identity_sum(&self) -> AlgebraElement {
        let mut el = AlgebraElement::zero();
        for o in 1..=self.n_objects {
            if let Some(e) = self.identity_at(ObjectId(o)) {
                el.add_term(e, Complex64::new(1.0, 0.0));
            }
        }
        el
    }

    /// Whether `el` commutes with every basis element under convolution.
    pub fn is_central(&self, el: &AlgebraElement) -> bool {
        self.morphism_ids().all(|m| {
            let basis = AlgebraElement::basis(m);
            let lhs = basis.convolve(el, self);
            let rhs = el.convolve(&basis, self);
            lhs.approx_eq(&rhs, 1e-12)
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = GroupoidJson {
            n_objects: self.n_objects,
            morphisms: self
                .morphisms
                .iter()
                .map(|m| MorphismJson {
                    label: m.label.clone(),
                    source: m.source.0,
                    target: m.target.0,
                    inverse: m.inverse.map(|i| i.0),
                })
                .collect(),
            composition: self
                .morphism_ids()
                .flat_map(|f| self.morphism_ids().map(move |g| (f, g)))
                .map(|(f, g)| (f.0, g.0, self.compose(f, g).map(|h| h.0)))
                .collect(),
        };
        serde_json::to_value(json).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: GroupoidJson =
            serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let morphisms = json
            .morphisms
            .into_iter()
            .map(|m| Morphism {
                source: ObjectId(m.source),
                target: ObjectId(m.target),
                inverse: m.inverse.map(MorphismId),
                label: m.label,
            })
            .collect();
        let comps = json
            .composition
            .into_iter()
            .filter_map(|(f, g, h)| h.map(|h| (MorphismId(f), MorphismId(g), MorphismId(h))));
        Groupoid::from_parts(json.n_objects, morphisms, comps)
    }
}

fn sis_label(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("x{i}{j}")
    } else {
        format!("x{i}_{j}")
    }
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    label: String,
    source: usize,
    target: usize,
    inverse: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupoidJson {
    n_objects: usize,
    morphisms: Vec<MorphismJson>,
    composition: Vec<(usize, usize, Option<usize>)>,
}

/// Finite complex combination of morphisms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlgebraElement {
    terms: BTreeMap<MorphismId, Complex64>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(m: MorphismId) -> Self {
        let mut el = Self::zero();
        el.add_term(m, Complex64::new(1.0, 0.0));
        el
    }

    pub fn add_term(&mut self, m: MorphismId, c: Complex64) {
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if entry.norm() == 0.0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (MorphismId, Complex64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: MorphismId) -> Complex64 {
        self.terms.get(&m).copied().unwrap_or_default()
    }

    /// Product in the groupoid algebra: φ_f φ_g = φ_{fg}, or 0 if undefined.
    pub fn convolve(&self, other: &AlgebraElement, g: &Groupoid) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some(ab) = g.compose(a, b) {
                    out.add_term(ab, ca * cb);
                }
            }
        }
        out
    }

    pub fn approx_eq(&self, other: &AlgebraElement, tol: f64) -> bool {
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|&m| (self.coefficient(m) - other.coefficient(m)).norm() <= tol)
    }
}
