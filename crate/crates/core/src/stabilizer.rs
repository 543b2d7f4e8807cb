//! Exact linear algebra over Z_n for stabilizer-form models.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::json;

use crate::catalog::{HamiltonianSpec, Location, TermKind};
use crate::error::{Error, Result};
use crate::lattice::{Direction, Lattice, SiteId, VertexId};
use crate::pauli::{symplectic_form, PauliString};
use crate::zmod::{is_prime, null_space_mod_prime, rank_mod_prime, rref_mod_prime, DiagonalForm};

/// One factor `S` with target eigenvalue `ω_n^target`, owned by term `term`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub pauli: PauliString,
    pub target: u32,
    pub term: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermInfo {
    pub kind: TermKind,
    pub location: Location,
}

#[derive(Debug, Clone)]
pub struct StabilizerModel {
    n: u32,
    n_sites: usize,
    generators: Vec<Generator>,
    terms: Vec<TermInfo>,
    lattice: Option<Lattice>,
    diagonal: DiagonalForm,
}

/// Result of the group-order and phase analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct GsdReport {
    pub gsd: BigUint,
    /// Rank over Z_n for prime n; otherwise the number of nonzero diagonal entries.
    pub rank: usize,
    /// Generators of the relation module that were checked.
    pub relations: usize,
    pub consistent: bool,
}

impl StabilizerModel {
    /// Checks that every generator is `n`-periodic and that all pairs commute.
    pub fn new(
        n: u32,
        n_sites: usize,
        generators: Vec<Generator>,
        terms: Vec<TermInfo>,
    ) -> Result<Self> {
        for g in &generators {
            if g.pauli.n() != n || g.pauli.n_sites() != n_sites {
                return Err(Error::DimensionMismatch(
                    "generator acts on a different system".into(),
                ));
            }
            if g.term >= terms.len() {
                return Err(Error::InvalidArgument(format!(
                    "generator refers to missing term {}",
                    g.term
                )));
            }
            if !g.pauli.pow(n).is_identity() {
                return Err(Error::InvalidModel(
                    "a generator does not satisfy S^n = 1".into(),
                ));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.pauli.commutes_with(&b.pauli)? {
                    return Err(Error::InvalidModel(format!(
                        "generators of terms {} and {} do not commute",
                        a.term, b.term
                    )));
                }
            }
        }
        let rows: Vec<Vec<u32>> = generators
            .iter()
            .map(|g| g.pauli.symplectic_vector())
            .collect();
        let diagonal = if rows.is_empty() {
            DiagonalForm::new(&[vec![0; 2 * n_sites]], n)
        } else {
            DiagonalForm::new(&rows, n)
        };
        Ok(Self {
            n,
            n_sites,
            generators,
            terms,
            lattice: None,
            diagonal,
        })
    }

    pub fn from_hamiltonian(h: &HamiltonianSpec) -> Result<Self> {
        let mut generators = Vec::new();
        let mut terms = Vec::new();
        for (i, t) in h.terms.iter().enumerate() {
            terms.push(TermInfo {
                kind: t.kind,
                location: t.location,
            });
            for f in &t.factors {
                generators.push(Generator {
                    pauli: f.pauli.clone(),
                    target: f.target % h.n,
                    term: i,
                });
            }
        }
        let mut model = Self::new(h.n, h.lattice.n_sites(), generators, terms)?;
        model.lattice = Some(h.lattice.clone());
        Ok(model)
    }

    /// Same model with one generator's target replaced.
    pub fn with_target(&self, generator: usize, target: u32) -> Result<Self> {
        let mut out = self.clone();
        let g = out
            .generators
            .get_mut(generator)
            .ok_or_else(|| Error::InvalidArgument(format!("no generator {generator}")))?;
        g.target = target % self.n;
        Ok(out)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn terms(&self) -> &[TermInfo] {
        &self.terms
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    fn exponent_rows(&self) -> Vec<Vec<u32>> {
        self.generators
            .iter()
            .map(|g| g.pauli.symplectic_vector())
            .collect()
    }

    /// Relation generators `r` (with `∏ g_i^{r_i}` a scalar) whose product
    /// phase disagrees with the targets.
    pub fn inconsistent_relations(&self) -> Vec<Vec<u32>> {
        if self.generators.is_empty() {
            return Vec::new();
        }
        let n = self.n as u64;
        self.diagonal
            .left_kernel()
            .into_iter()
            .filter(|r| {
                let mut prod = PauliString::identity(self.n, self.n_sites);
                let mut expected = 0u64;
                for (g, &e) in self.generators.iter().zip(r) {
                    prod = prod.multiply(&g.pauli.pow(e)).expect("same shape");
                    expected = (expected + e as u64 * g.target as u64) % n;
                }
                debug_assert!(prod.is_scalar());
                prod.phase_exp() as u64 != 2 * expected % (2 * n)
            })
            .collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistent_relations().is_empty()
    }

    /// Order of the group generated by the exponent vectors.
    pub fn group_order(&self) -> BigUint {
        self.diagonal
            .span_factors()
            .into_iter()
            .fold(BigUint::from(1u32), |acc, f| acc * f)
    }

    pub fn analyze(&self) -> GsdReport {
        let relations = if self.generators.is_empty() {
            0
        } else {
            self.diagonal.left_kernel().len()
        };
        let consistent = self.is_consistent();
        let rank = if is_prime(self.n) {
            rank_mod_prime(&self.exponent_rows(), self.n)
        } else {
            self.diagonal.nonzero_count()
        };
        let gsd = if !consistent {
            BigUint::from(0u32)
        } else if is_prime(self.n) {
            BigUint::from(self.n).pow((self.n_sites - rank) as u32)
        } else {
            BigUint::from(self.n).pow(self.n_sites as u32) / self.group_order()
        };
        GsdReport {
            gsd,
            rank,
            relations,
            consistent,
        }
    }

    /// Ground-state degeneracy; zero for a frustrated model.
    pub fn gsd(&self) -> BigUint {
        self.analyze().gsd
    }

    /// Per-generator flips and the violated terms.
    pub fn syndrome(&self, error: &PauliString) -> Result<Syndrome> {
        let flips: Vec<u32> = self
            .generators
            .iter()
            .map(|g| g.pauli.symplectic_phase(error))
            .collect::<Result<_>>()?;
        let mut violated = vec![false; self.terms.len()];
        for (g, &f) in self.generators.iter().zip(&flips) {
            if f != 0 {
                violated[g.term] = true;
            }
        }
        let violated_terms: Vec<usize> = (0..self.terms.len()).filter(|&t| violated[t]).collect();
        Ok(Syndrome {
            energy: violated_terms.len(),
            flips,
            violated_terms,
        })
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        if self.generators.is_empty() {
            return p.symplectic_vector().iter().all(|&e| e == 0);
        }
        self.diagonal.solve_left(&p.symplectic_vector()).is_some()
    }

    pub fn classify(&self, p: &PauliString) -> Result<Classification> {
        Ok(if self.syndrome(p)?.energy > 0 {
            Classification::Detectable
        } else if self.contains(p) {
            Classification::Stabilizer
        } else {
            Classification::Logical
        })
    }

    /// Whether `p · q⁻¹` lies in the stabilizer group.
    pub fn logically_equivalent(&self, p: &PauliString, q: &PauliString) -> Result<bool> {
        Ok(self.contains(&p.multiply(&q.inverse())?))
    }

    /// Symplectic basis of the logical operators for prime `n`: `k` pairs
    /// `(a_i, b_i)` commuting with every generator, with `a_i b_i = ω_n b_i a_i`
    /// and distinct pairs commuting.
    pub fn logical_basis(&self) -> Result<LogicalBasis> {
        let p = self.n;
        if !is_prime(p) {
            return Err(Error::Unsupported(
                "logical bases are computed for prime n".into(),
            ));
        }
        if !self.is_consistent() {
            return Err(Error::Frustrated("no ground space to act on".into()));
        }
        let half = self.n_sites;
        let stab = self.exponent_rows();
        // w is in the centralizer iff Σ g.x·w.z − w.x·g.z ≡ 0 for every generator g.
        let constraints: Vec<Vec<u32>> = stab
            .iter()
            .map(|g| {
                g[half..]
                    .iter()
                    .map(|&z| (p - z % p) % p)
                    .chain(g[..half].iter().copied())
                    .collect()
            })
            .collect();
        let centralizer = if constraints.is_empty() {
            (0..2 * half)
                .map(|i| (0..2 * half).map(|j| u32::from(i == j)).collect())
                .collect()
        } else {
            null_space_mod_prime(&constraints, 2 * half, p)
        };
        let omega = |a: &[u32], b: &[u32]| {
            symplectic_form(p, &a[..half], &a[half..], &b[..half], &b[half..])
        };
        let stab_rank = rank_mod_prime(&stab, p);
        let outside = |v: &[u32], span: &[Vec<u32>]| {
            let mut rows = span.to_vec();
            rows.push(v.to_vec());
            rank_mod_prime(&rows, p) > rank_mod_prime(span, p)
        };
        let (stab_basis, _) = rref_mod_prime(&stab, p);
        let mut pool: Vec<Vec<u32>> = Vec::new();
        let mut span = stab_basis.clone();
        for c in centralizer {
            if outside(&c, &span) {
                span.push(c.clone());
                pool.push(c);
            }
        }
        debug_assert_eq!(span.len(), pool.len() + stab_rank);
        let mut pairs = Vec::new();
        while let Some(a) = pool.first().cloned() {
            pool.remove(0);
            let Some(j) = pool.iter().position(|w| omega(&a, w) != 0) else {
                return Err(Error::InvalidModel(
                    "logical operators do not pair up".into(),
                ));
            };
            let mut b = pool.remove(j);
            let inv =
                crate::zmod::inv_mod(omega(&a, &b) as u64, p as u64).expect("prime modulus") as u32;
            for e in &mut b {
                *e = (*e as u64 * inv as u64 % p as u64) as u32;
            }
            for u in &mut pool {
                let ub = omega(u, &b) as u64;
                let ua = omega(u, &a) as u64;
                for i in 0..u.len() {
                    let val = u[i] as u64 + (p as u64 - ub) * a[i] as u64 + ua * b[i] as u64;
                    u[i] = (val % p as u64) as u32;
                }
            }
            pool.retain(|u| outside(u, &stab_basis));
            pairs.push((
                PauliString::from_symplectic_vector(p, &a),
                PauliString::from_symplectic_vector(p, &b),
            ));
        }
        Ok(LogicalBasis {
            k: pairs.len(),
            pairs,
        })
    }

    /// Report with the fields `model, lattice, n, gsd, k, rank, relations, consistency`.
    pub fn report_json(&self, model: &str) -> serde_json::Value {
        let a = self.analyze();
        let k = if a.consistent {
            log_n(&a.gsd, self.n)
        } else {
            None
        };
        json!({
            "model": model,
            "lattice": self.lattice.as_ref().map(|l| l.spec_string()),
            "n": self.n,
            "gsd": biguint_json(&a.gsd),
            "k": k,
            "rank": a.rank,
            "relations": a.relations,
            "consistency": a.consistent,
        })
    }
}

/// `k` with `n^k = value`, if `value` is an exact power.
pub fn log_n(value: &BigUint, n: u32) -> Option<u32> {
    let mut k = 0;
    let mut acc = BigUint::from(1u32);
    while &acc < value {
        acc *= n;
        k += 1;
    }
    (&acc == value).then_some(k)
}

/// Integer when it fits in `u64`, decimal string otherwise.
pub fn biguint_json(v: &BigUint) -> serde_json::Value {
    match u64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syndrome {
    /// Commutation exponent of each generator with the error.
    pub flips: Vec<u32>,
    pub violated_terms: Vec<usize>,
    /// Number of violated terms.
    pub energy: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Stabilizer,
    Logical,
    Detectable,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Stabilizer => "stabilizer",
            Classification::Logical => "logical",
            Classification::Detectable => "detectable",
        })
    }
}

#[derive(Debug, Clone)]
pub struct LogicalBasis {
    pub k: usize,
    pub pairs: Vec<(PauliString, PauliString)>,
}

/// Local X placements at a vertex from which flux strings are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constituent {
    /// West site.
    I,
    /// South site.
    II,
    /// West and south sites.
    III,
    /// North and east sites.
    IV,
}

impl Constituent {
    fn directions(self) -> &'static [Direction] {
        match self {
            Constituent::I => &[Direction::W],
            Constituent::II => &[Direction::S],
            Constituent::III => &[Direction::W, Direction::S],
            Constituent::IV => &[Direction::N, Direction::E],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathStep {
    pub vertex: VertexId,
    pub kind: Constituent,
}

/// A chain of constituents. Each constituent may appear once per vertex and
/// III never shares a vertex with IV, since together they form the vertex's
/// shift generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSpec {
    pub steps: Vec<PathStep>,
    pub closed: bool,
}

impl PathSpec {
    pub fn new(steps: Vec<PathStep>, closed: bool) -> Result<Self> {
        for (i, a) in steps.iter().enumerate() {
            for b in &steps[i + 1..] {
                if a.vertex != b.vertex {
                    continue;
                }
                if a.kind == b.kind {
                    return Err(Error::InvalidPath(format!(
                        "constituent {:?} repeated at {}",
                        a.kind, a.vertex
                    )));
                }
                let pair = [a.kind, b.kind];
                if pair.contains(&Constituent::III) && pair.contains(&Constituent::IV) {
                    return Err(Error::InvalidPath(format!(
                        "constituents III and IV together at {} form a vertex generator",
                        a.vertex
                    )));
                }
            }
        }
        Ok(Self { steps, closed })
    }

    /// Closed non-contractible loop of constituent I up column `x`.
    pub fn column_loop(l: &Lattice, x: usize) -> Result<Self> {
        let steps = (0..l.n())
            .map(|y| PathStep {
                vertex: VertexId { x, y },
                kind: Constituent::I,
            })
            .collect();
        Self::new(steps, true)
    }

    /// Closed non-contractible loop of constituent II along row `y`.
    pub fn row_loop(l: &Lattice, y: usize) -> Result<Self> {
        let steps = (0..l.m())
            .map(|x| PathStep {
                vertex: VertexId { x, y },
                kind: Constituent::II,
            })
            .collect();
        Self::new(steps, true)
    }
}

/// X on every site named by the path's constituents.
pub fn string_operator(l: &Lattice, path: &PathSpec, n: u32) -> Result<PauliString> {
    let mut entries = Vec::new();
    for step in &path.steps {
        if !l.contains_vertex(step.vertex) {
            return Err(Error::PathExceedsLattice(format!(
                "vertex {} is not on {l}",
                step.vertex
            )));
        }
        for &d in step.kind.directions() {
            let site = SiteId {
                vertex: step.vertex,
                dir: d,
            };
            let idx = l
                .site_index(site)
                .ok_or_else(|| Error::InvalidPath(format!("site {site} is missing")))?;
            entries.push((idx, 1));
        }
    }
    Ok(PauliString::x_string(n, l.n_sites(), &entries))
}

/// Open strings used to probe flux mobility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxString {
    /// Constituent I up a column.
    ConstituentVertical,
    /// Constituent II along a row.
    ConstituentHorizontal,
    /// East sites up a column: each step crosses a vertex's NE corner.
    CornerVertical,
    /// North sites along a row: each step crosses a vertex's NE corner.
    CornerHorizontal,
}

impl FromStr for FluxString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "allowed" | "allowed-vertical" => FluxString::ConstituentVertical,
            "allowed-horizontal" => FluxString::ConstituentHorizontal,
            "forbidden-vertical" => FluxString::CornerVertical,
            "forbidden-horizontal" => FluxString::CornerHorizontal,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown flux string {other:?}"
                )))
            }
        })
    }
}

/// Open string of `len` steps starting at the origin.
pub fn flux_string(l: &Lattice, kind: FluxString, len: usize, n: u32) -> Result<PauliString> {
    let vertical = matches!(
        kind,
        FluxString::ConstituentVertical | FluxString::CornerVertical
    );
    let extent = if vertical { l.n() } else { l.m() };
    if len == 0 || len >= extent {
        return Err(Error::PathExceedsLattice(format!(
            "an open string of length {len} needs between 1 and {} steps on {l}",
            extent.saturating_sub(1)
        )));
    }
    let at = |i: usize| {
        if vertical {
            VertexId { x: 0, y: i }
        } else {
            VertexId { x: i, y: 0 }
        }
    };
    let mut entries = Vec::new();
    for i in 0..len {
        let (v, d) = match kind {
            FluxString::ConstituentVertical => (at(i + 1), Direction::W),
            FluxString::ConstituentHorizontal => (at(i + 1), Direction::S),
            FluxString::CornerVertical => (at(i), Direction::E),
            FluxString::CornerHorizontal => (at(i), Direction::N),
        };
        let idx = l.site_index(SiteId { vertex: v, dir: d }).ok_or_else(|| {
            Error::PathExceedsLattice(format!("site {v}.{} is missing", d.letter()))
        })?;
        entries.push((idx, 1));
    }
    Ok(PauliString::x_string(n, l.n_sites(), &entries))
}

/// Energy of each open string length.
pub fn confinement_profile(
    m: &StabilizerModel,
    kind: FluxString,
    lengths: &[usize],
) -> Result<Vec<usize>> {
    let l = m
        .lattice()
        .ok_or_else(|| Error::InvalidArgument("model has no lattice".into()))?;
    lengths
        .iter()
        .map(|&len| Ok(m.syndrome(&flux_string(l, kind, len, m.n())?)?.energy))
        .collect()
}
