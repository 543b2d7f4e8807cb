//! Named operators: morphism actions and their qudit images, the vertex and
//! face projector families, and the model Hamiltonians.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, MorphismId, ObjectId};
use crate::lattice::{Corner, Direction, FaceId, Lattice, SiteId, Topology, VertexId};
use crate::pauli::{root_of_unity, OperatorSum, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Matrix of `m^l |h⟩ = |m h⟩` on the morphism basis.
pub fn left_action(g: &Groupoid, m: MorphismId) -> DMatrix<Complex64> {
    action_matrix(g, |h| g.compose(m, h))
}

/// Matrix of `m^r |h⟩ = |h m⟩` on the morphism basis.
pub fn right_action(g: &Groupoid, m: MorphismId) -> DMatrix<Complex64> {
    action_matrix(g, |h| g.compose(h, m))
}

fn action_matrix(
    g: &Groupoid,
    image: impl Fn(MorphismId) -> Option<MorphismId>,
) -> DMatrix<Complex64> {
    let dim = g.len();
    let mut out = DMatrix::zeros(dim, dim);
    for h in g.morphism_ids() {
        if let Some(k) = image(h) {
            out[(k.0, h.0)] = one();
        }
    }
    out
}

/// `x_ij ↦ (i, j)`: tail digit is the source object, head digit the target.
pub fn encode_edge_state(g: &Groupoid, m: MorphismId) -> Result<(usize, usize)> {
    require_sis(g)?;
    Ok((g.source(m).0, g.target(m).0))
}

pub fn decode_edge_state(g: &Groupoid, tail: usize, head: usize) -> Result<MorphismId> {
    require_sis(g)?;
    g.morphism_ids()
        .find(|&m| g.source(m) == ObjectId(tail) && g.target(m) == ObjectId(head))
        .ok_or_else(|| Error::InvalidArgument(format!("no morphism from {tail} to {head}")))
}

fn require_sis(g: &Groupoid) -> Result<()> {
    if g.is_sis_type() {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "edge encoding needs exactly one morphism per ordered pair of objects".into(),
        ))
    }
}

/// Permutation taking the morphism basis to the two-site qudit basis.
pub fn encoding_matrix(g: &Groupoid) -> Result<DMatrix<Complex64>> {
    let n = g.n_objects();
    let mut e = DMatrix::zeros(n * n, g.len());
    for m in g.morphism_ids() {
        let (i, j) = encode_edge_state(g, m)?;
        e[((i - 1) * n + (j - 1), m.0)] = one();
    }
    Ok(e)
}

/// `|to⟩⟨from|` on one site, expanded as `X^{to-from} · (1/n) Σ_k ω^{-from·k} Z^k`.
pub fn site_transition(n: u32, n_sites: usize, site: usize, to: usize, from: usize) -> OperatorSum {
    let shift = to as i64 - from as i64;
    let mut out = OperatorSum::zero(n, n_sites);
    for k in 0..n as i64 {
        let mut p = PauliString::x_string(n, n_sites, &[(site, shift)]);
        p = p
            .multiply(&PauliString::z_string(n, n_sites, &[(site, k)]))
            .expect("same shape");
        out.add_term(root_of_unity(n, -(from as i64) * k) / n as f64, &p);
    }
    out
}

/// `|i⟩⟨i|` on one site.
pub fn site_projector(n: u32, n_sites: usize, site: usize, object: usize) -> OperatorSum {
    site_transition(n, n_sites, site, object, object)
}

/// Image of `m^l` or `m^r` on an edge's two sites (tail = site 0, head = site 1).
pub fn qubit_image_of_action(g: &Groupoid, m: MorphismId, side: Side) -> Result<OperatorSum> {
    let (i, j) = encode_edge_state(g, m)?;
    let n = g.n_objects() as u32;
    Ok(match side {
        // x_ij x_kl = δ(j,k) x_il: the tail digit j becomes i.
        Side::Left => site_transition(n, 2, 0, i, j),
        // x_kl x_ij = δ(l,i) x_kj: the head digit i becomes j.
        Side::Right => site_transition(n, 2, 1, j, i),
    })
}

/// `(1/n) Σ_j ω_n^{kj} (Z_a Z_b^{-1})^j`: the corner pair differs by `-k` (k = n: matched).
pub fn corner_pair_projector(n: u32, n_sites: usize, a: usize, b: usize, k: u32) -> OperatorSum {
    let s = PauliString::z_string(n, n_sites, &[(a, 1), (b, -1)]);
    OperatorSum::eigen_projector(&s, (n - k % n) % n).expect("Z strings have order n")
}

/// `(1/n) Σ_j ω_n^{kj} (X on all given sites)^j`.
pub fn shift_projector(n: u32, n_sites: usize, sites: &[usize], k: u32) -> OperatorSum {
    let entries: Vec<(usize, i64)> = sites.iter().map(|&s| (s, 1)).collect();
    let s = PauliString::x_string(n, n_sites, &entries);
    OperatorSum::eigen_projector(&s, (n - k % n) % n).expect("X strings have order n")
}

/// Present vertex sites in the chain order N, W, S, E used for corner checks.
fn vertex_chain(l: &Lattice, v: VertexId) -> Vec<usize> {
    [Direction::N, Direction::W, Direction::S, Direction::E]
        .into_iter()
        .filter_map(|d| l.site_index(SiteId { vertex: v, dir: d }))
        .collect()
}

#[derive(Debug, Clone)]
pub struct VertexProjector {
    /// Label of the shift factor; `n` means the +1 eigenspace.
    pub shift_label: u32,
    /// Labels of the corner checks along the chain N–W–S–E; `n` means matched.
    pub corner_labels: Vec<u32>,
    pub operator: OperatorSum,
}

/// All `n^valence` vertex projectors at `v`: a shift projector times one
/// check on each consecutive corner of the chain N–W–S–E. At a four-valent
/// vertex the checked corners are NW, SW and SE.
pub fn vertex_projector_family(l: &Lattice, v: VertexId, n: u32) -> Result<Vec<VertexProjector>> {
    if !l.contains_vertex(v) {
        return Err(Error::InvalidArgument(format!("no vertex {v} on {l}")));
    }
    let chain = vertex_chain(l, v);
    let sites = l.n_sites();
    let corners = chain.len() - 1;
    let mut out = Vec::new();
    for k in 1..=n {
        let x = shift_projector(n, sites, &chain, k);
        for combo in 0..(n as usize).pow(corners as u32) {
            // Corner labels 1..=n, first corner most significant.
            let mut rest = combo;
            let mut labels = vec![0u32; corners];
            for slot in labels.iter_mut().rev() {
                *slot = (rest % n as usize) as u32 + 1;
                rest /= n as usize;
            }
            let mut op = x.clone();
            for (c, &kc) in labels.iter().enumerate() {
                op = &op * &corner_pair_projector(n, sites, chain[c], chain[c + 1], kc);
            }
            out.push(VertexProjector {
                shift_label: k,
                corner_labels: labels,
                operator: op,
            });
        }
    }
    Ok(out)
}

/// Corner sign patterns (NW, SW, SE) of the eight qubit projectors A^(0..7);
/// `true` is the matched (+) sign.
pub const QUBIT_VERTEX_SIGNS: [[bool; 3]; 8] = [
    [true, true, true],
    [false, true, true],
    [true, false, true],
    [true, true, false],
    [false, false, true],
    [false, true, false],
    [true, false, false],
    [false, false, false],
];

/// Qubit vertex projector A^(index) at a four-valent vertex, with the
/// `½(1 ± X⊗4)` factor chosen by `shift_plus`.
pub fn qubit_vertex_projector(
    l: &Lattice,
    v: VertexId,
    index: usize,
    shift_plus: bool,
) -> Result<OperatorSum> {
    let chain = vertex_chain(l, v);
    if chain.len() != 4 {
        return Err(Error::InvalidArgument(format!(
            "vertex {v} is not four-valent"
        )));
    }
    let signs = QUBIT_VERTEX_SIGNS.get(index).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "qubit vertex projectors are indexed 0..8, got {index}"
        ))
    })?;
    let sites = l.n_sites();
    let mut op = shift_projector(2, sites, &chain, if shift_plus { 2 } else { 1 });
    for (c, &plus) in signs.iter().enumerate() {
        op = &op
            * &corner_pair_projector(2, sites, chain[c], chain[c + 1], if plus { 2 } else { 1 });
    }
    Ok(op)
}

/// Site indices around a face, named by corner.
#[derive(Debug, Clone, Copy)]
pub struct FaceSites {
    pub nw_s: usize,
    pub nw_e: usize,
    pub ne_s: usize,
    pub ne_w: usize,
    pub se_n: usize,
    pub se_w: usize,
    pub sw_n: usize,
    pub sw_e: usize,
}

pub fn face_sites(l: &Lattice, f: FaceId) -> Result<FaceSites> {
    let idx = |c: Corner| -> Result<(usize, usize)> {
        let (a, b) = l.face_corner_sites(f, c)?;
        let get = |s: SiteId| {
            l.site_index(s)
                .ok_or_else(|| Error::MissingSite(s.to_string()))
        };
        Ok((get(a)?, get(b)?))
    };
    let (nw_s, nw_e) = idx(Corner::NW)?;
    let (ne_s, ne_w) = idx(Corner::NE)?;
    let (se_n, se_w) = idx(Corner::SE)?;
    let (sw_n, sw_e) = idx(Corner::SW)?;
    Ok(FaceSites {
        nw_s,
        nw_e,
        ne_s,
        ne_w,
        se_n,
        se_w,
        sw_n,
        sw_e,
    })
}

impl FaceSites {
    /// The two sites of a corner in the order (a, b) of the check `Z_a Z_b^{-1}`.
    pub fn corner_pair(&self, c: Corner) -> (usize, usize) {
        match c {
            Corner::NW => (self.nw_s, self.nw_e),
            Corner::NE => (self.ne_w, self.ne_s),
            Corner::SE => (self.se_n, self.se_w),
            Corner::SW => (self.sw_e, self.sw_n),
        }
    }

    /// Sites other than the south-west corner, clockwise from SE.W.
    pub fn non_sw(&self) -> [usize; 6] {
        [
            self.se_w, self.se_n, self.ne_s, self.ne_w, self.nw_e, self.nw_s,
        ]
    }
}

/// Face corner projector `F^{c,k}`; `k = n` is the matched corner.
pub fn face_corner_projector(
    l: &Lattice,
    f: FaceId,
    c: Corner,
    k: u32,
    n: u32,
) -> Result<OperatorSum> {
    let fs = face_sites(l, f)?;
    let (a, b) = fs.corner_pair(c);
    Ok(corner_pair_projector(n, l.n_sites(), a, b, k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FaceLabel {
    /// Holonomy `x_ij`, read clockwise from the south-west vertex.
    Holonomy(usize, usize),
    /// No composable holonomy.
    Zero,
}

/// The `n² + 1` face projectors: one per holonomy `x_ij` and `B^0`.
///
/// `B^{x_ij}` matches the NW, NE and SE corners and fixes the left edge's
/// tail (SW.N) to `i` and the bottom edge's tail (SW.E) to `j`.
pub fn face_projector_family(
    l: &Lattice,
    f: FaceId,
    n: u32,
) -> Result<BTreeMap<FaceLabel, OperatorSum>> {
    let fs = face_sites(l, f)?;
    let sites = l.n_sites();
    let corner = |c: Corner, k: u32| {
        let (a, b) = fs.corner_pair(c);
        corner_pair_projector(n, sites, a, b, k)
    };
    let matched = &(&corner(Corner::NW, n) * &corner(Corner::NE, n)) * &corner(Corner::SE, n);
    let mut out = BTreeMap::new();
    for i in 1..=n as usize {
        for j in 1..=n as usize {
            let hol = &(&matched * &site_projector(n, sites, fs.sw_n, i))
                * &site_projector(n, sites, fs.sw_e, j);
            out.insert(FaceLabel::Holonomy(i, j), hol);
        }
    }
    let mut zero = OperatorSum::zero(n, sites);
    for k1 in 1..=n {
        for k2 in 1..=n {
            for k3 in 1..=n {
                if (k1, k2, k3) == (n, n, n) {
                    continue;
                }
                let term =
                    &(&corner(Corner::NW, k1) * &corner(Corner::NE, k2)) * &corner(Corner::SE, k3);
                zero = &zero + &term;
            }
        }
    }
    out.insert(FaceLabel::Zero, zero);
    Ok(out)
}

/// Sum of the qubit corner products `F^{NW}F^{NE}F^{SE}` whose number of
/// mismatched corners has the given parity.
pub fn qubit_mismatch_parity_face(l: &Lattice, f: FaceId, odd: bool) -> Result<OperatorSum> {
    let mut out = OperatorSum::zero(2, l.n_sites());
    for mask in 0u32..8 {
        if (mask.count_ones() % 2 == 1) != odd {
            continue;
        }
        let mut term = OperatorSum::identity(2, l.n_sites());
        for (bit, c) in [Corner::NW, Corner::NE, Corner::SE].into_iter().enumerate() {
            let k = if mask & (1 << bit) != 0 { 1 } else { 2 };
            term = &term * &face_corner_projector(l, f, c, k, 2)?;
        }
        out = &out + &term;
    }
    Ok(out)
}

/// Diagonal of the morphism-level face projector on `|M|^k` edge tuples:
/// entry is true when the holonomy (edges composed in order, reversed edges
/// inverted) equals `h`; `h = None` selects tuples with no holonomy.
pub fn morphism_face_projector(
    g: &Groupoid,
    forward: &[bool],
    h: Option<MorphismId>,
) -> Result<Vec<bool>> {
    let k = forward.len();
    let size = g.len();
    let total = size
        .checked_pow(k as u32)
        .ok_or_else(|| Error::InvalidArgument("too many edges".into()))?;
    let mut out = Vec::with_capacity(total);
    let mut tuple = vec![MorphismId(0); k];
    for idx in 0..total {
        let mut rest = idx;
        for slot in (0..k).rev() {
            tuple[slot] = MorphismId(rest % size);
            rest /= size;
        }
        let path: Option<Vec<MorphismId>> = tuple
            .iter()
            .zip(forward)
            .map(|(&m, &fwd)| if fwd { Some(m) } else { g.inverse(m) })
            .collect();
        let hol = path.and_then(|p| g.compose_path(&p));
        out.push(hol == h);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ModelId {
    M1,
    M2,
    M3Exp,
    MHoriz,
    MVert,
    MNondeg,
    Zn(u32),
    Boundary,
}

impl ModelId {
    pub fn qudit_dimension(&self) -> u32 {
        match self {
            ModelId::Zn(n) => *n,
            _ => 2,
        }
    }

    pub fn all_qubit() -> [ModelId; 8] {
        [
            ModelId::M1,
            ModelId::M2,
            ModelId::M3Exp,
            ModelId::MHoriz,
            ModelId::MVert,
            ModelId::MNondeg,
            ModelId::Zn(2),
            ModelId::Boundary,
        ]
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::M1 => f.write_str("m1"),
            ModelId::M2 => f.write_str("m2"),
            ModelId::M3Exp => f.write_str("m3exp"),
            ModelId::MHoriz => f.write_str("mhoriz"),
            ModelId::MVert => f.write_str("mvert"),
            ModelId::MNondeg => f.write_str("mnondeg"),
            ModelId::Zn(n) => write!(f, "zn:{n}"),
            ModelId::Boundary => f.write_str("boundary"),
        }
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "m1" => ModelId::M1,
            "m2" => ModelId::M2,
            "m3exp" => ModelId::M3Exp,
            "mhoriz" => ModelId::MHoriz,
            "mvert" => ModelId::MVert,
            "mnondeg" => ModelId::MNondeg,
            "boundary" => ModelId::Boundary,
            other => {
                let n = other
                    .strip_prefix("zn:")
                    .and_then(|d| d.parse::<u32>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown model {other:?}")))?;
                if n < 2 {
                    return Err(Error::InvalidArgument("zn:N needs N ≥ 2".into()));
                }
                ModelId::Zn(n)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermKind {
    Vertex,
    Face,
    BoundaryVertex,
    CornerVertex,
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermKind::Vertex => "vertex",
            TermKind::Face => "face",
            TermKind::BoundaryVertex => "boundary-vertex",
            TermKind::CornerVertex => "corner-vertex",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Location {
    Vertex(VertexId),
    Face(FaceId),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Vertex(v) => write!(f, "vertex {v}"),
            Location::Face(x) => write!(f, "face {x}"),
        }
    }
}

/// One factor `(1/n) Σ_j ω_n^{-t j} S^j` of a term.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerFactor {
    pub pauli: PauliString,
    pub target: u32,
}

#[derive(Debug, Clone)]
pub struct Term {
    pub kind: TermKind,
    pub location: Location,
    pub factors: Vec<StabilizerFactor>,
    pub operator: OperatorSum,
}

/// `H = -Σ terms`, every term a commuting projector.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    pub model: ModelId,
    pub lattice: Lattice,
    pub n: u32,
    pub terms: Vec<Term>,
}

impl HamiltonianSpec {
    pub fn term_counts(&self) -> BTreeMap<TermKind, usize> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            *out.entry(t.kind).or_insert(0) += 1;
        }
        out
    }

    pub fn operators(&self) -> Vec<OperatorSum> {
        self.terms.iter().map(|t| t.operator.clone()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|t| {
                json!({
                    "kind": t.kind.to_string(),
                    "location": t.location.to_string(),
                    "factors": t.factors.iter().map(|f| json!({
                        "pauli": f.pauli.to_text(&self.lattice),
                        "target": f.target,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "model": self.model.to_string(),
            "lattice": self.lattice.spec_string(),
            "n": self.n,
            "term_counts": self.term_counts().iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
            "terms": terms,
        })
    }
}

/// Builds a model Hamiltonian with terms sorted by kind and location.
pub fn build_hamiltonian(model: ModelId, l: &Lattice) -> Result<HamiltonianSpec> {
    match (model, l.topology()) {
        (ModelId::Boundary, Topology::Torus) => {
            return Err(Error::IncompatibleTopology(
                "the boundary model needs an open lattice".into(),
            ))
        }
        (ModelId::Boundary, Topology::Open) => {}
        (_, Topology::Open) => {
            return Err(Error::IncompatibleTopology(format!(
                "model {model} is defined on the torus"
            )))
        }
        _ => {}
    }
    let n = model.qudit_dimension();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "qudit dimension must be at least 2".into(),
        ));
    }
    let mut terms = Vec::new();
    for v in l.vertices() {
        let (kind, factors) = vertex_factors(model, l, v, n)?;
        terms.push(make_term(kind, Location::Vertex(v), factors)?);
    }
    for f in l.faces() {
        let factors = face_factors(model, l, f, n)?;
        terms.push(make_term(TermKind::Face, Location::Face(f), factors)?);
    }
    terms.sort_by_key(|t| (t.kind, t.location));
    Ok(HamiltonianSpec {
        model,
        lattice: l.clone(),
        n,
        terms,
    })
}

fn make_term(kind: TermKind, location: Location, factors: Vec<StabilizerFactor>) -> Result<Term> {
    let first = &factors[0].pauli;
    let mut operator = OperatorSum::identity(first.n(), first.n_sites());
    for f in &factors {
        operator = &operator * &OperatorSum::eigen_projector(&f.pauli, f.target)?;
    }
    Ok(Term {
        kind,
        location,
        factors,
        operator,
    })
}

fn factor(pauli: PauliString, target: u32) -> StabilizerFactor {
    StabilizerFactor { pauli, target }
}

fn vertex_factors(
    model: ModelId,
    l: &Lattice,
    v: VertexId,
    n: u32,
) -> Result<(TermKind, Vec<StabilizerFactor>)> {
    let sites = l.n_sites();
    let at = |d: Direction| l.site_index(SiteId { vertex: v, dir: d });
    let present: Vec<usize> = l
        .vertex_sites(v)
        .iter()
        .filter_map(|&s| l.site_index(s))
        .collect();
    let shift = PauliString::x_string(
        n,
        sites,
        &present.iter().map(|&s| (s, 1)).collect::<Vec<_>>(),
    );
    let z = |pairs: &[(Direction, i64)]| -> Result<PauliString> {
        let mut entries = Vec::new();
        for &(d, e) in pairs {
            let s = at(d)
                .ok_or_else(|| Error::MissingSite(SiteId { vertex: v, dir: d }.to_string()))?;
            entries.push((s, e));
        }
        Ok(PauliString::z_string(n, sites, &entries))
    };
    use Direction::{E, N, S, W};
    let half = n / 2;
    if model == ModelId::Boundary && present.len() < 4 {
        let check = match present.len() {
            2 => {
                let pair = l.vertex_sites(v);
                PauliString::z_string(
                    n,
                    sites,
                    &[
                        (l.site_index(pair[0]).expect("present"), 1),
                        (l.site_index(pair[1]).expect("present"), 1),
                    ],
                )
            }
            3 if at(N).is_none() || at(S).is_none() => z(&[(W, 1), (E, 1)])?,
            _ => z(&[(S, 1), (N, 1)])?,
        };
        let kind = if present.len() == 2 {
            TermKind::CornerVertex
        } else {
            TermKind::BoundaryVertex
        };
        return Ok((kind, vec![factor(shift, 0), factor(check, half)]));
    }
    let factors = match model {
        ModelId::M1 | ModelId::Boundary => {
            vec![factor(shift, 0), factor(z(&[(E, 1), (N, 1)])?, half)]
        }
        ModelId::M2 => vec![factor(shift, 0), factor(z(&[(E, 1), (N, 1)])?, 0)],
        ModelId::M3Exp => vec![factor(shift, 0), factor(z(&[(W, 1), (S, 1)])?, 0)],
        ModelId::MHoriz => vec![factor(shift, 0), factor(z(&[(W, 1), (E, 1)])?, 0)],
        ModelId::MVert => vec![factor(shift, 0), factor(z(&[(S, 1), (N, 1)])?, 0)],
        ModelId::MNondeg => vec![
            factor(shift, 0),
            factor(z(&[(N, 1), (W, -1)])?, 0),
            factor(z(&[(W, 1), (S, -1)])?, 0),
            factor(z(&[(S, 1), (E, -1)])?, 0),
        ],
        ModelId::Zn(_) => vec![factor(shift, 0), factor(z(&[(N, -1), (E, 1)])?, 0)],
    };
    Ok((TermKind::Vertex, factors))
}

fn face_factors(model: ModelId, l: &Lattice, f: FaceId, n: u32) -> Result<Vec<StabilizerFactor>> {
    let fs = face_sites(l, f)?;
    let sites = l.n_sites();
    let zs = |entries: &[(usize, i64)]| PauliString::z_string(n, sites, entries);
    let six: Vec<(usize, i64)> = fs.non_sw().iter().map(|&s| (s, 1)).collect();
    Ok(match model {
        ModelId::M1 | ModelId::Boundary => vec![factor(zs(&six), n / 2)],
        ModelId::M2 => vec![factor(zs(&six), 0)],
        ModelId::M3Exp => vec![factor(zs(&[(fs.ne_s, 1), (fs.ne_w, 1)]), 0)],
        ModelId::MHoriz => vec![factor(
            zs(&[(fs.ne_s, 1), (fs.ne_w, 1), (fs.nw_e, 1), (fs.nw_s, 1)]),
            0,
        )],
        ModelId::MVert => vec![factor(
            zs(&[(fs.se_w, 1), (fs.se_n, 1), (fs.ne_s, 1), (fs.ne_w, 1)]),
            0,
        )],
        ModelId::MNondeg => Corner::ALL
            .into_iter()
            .map(|c| {
                let (a, b) = fs.corner_pair(c);
                factor(zs(&[(a, 1), (b, -1)]), 0)
            })
            .collect(),
        ModelId::Zn(_) => vec![factor(
            zs(&[
                (fs.se_w, -1),
                (fs.se_n, 1),
                (fs.ne_s, -1),
                (fs.ne_w, 1),
                (fs.nw_e, -1),
                (fs.nw_s, 1),
            ]),
            0,
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 1 << 24;

    fn mid(g: &Groupoid, label: &str) -> MorphismId {
        g.find(label).unwrap()
    }

    #[test]
    fn action_tables() {
        let g = Groupoid::sis(2).unwrap();
        let a = mid(&g, "x12");
        let l = left_action(&g, a);
        assert_eq!(l[(a.0, mid(&g, "x22").0)], one());
        assert_eq!(
            l.column(mid(&g, "x11").0)
                .iter()
                .map(|c| c.norm())
                .sum::<f64>(),
            0.0
        );
        let r = right_action(&g, mid(&g, "x22"));
        assert_eq!(r[(a.0, a.0)], one());

        let g3 = Groupoid::sis(3).unwrap();
        let l = left_action(&g3, mid(&g3, "x12"));
        assert_eq!(l[(mid(&g3, "x13").0, mid(&g3, "x23").0)], one());
        assert_eq!(
            l.column(mid(&g3, "x33").0)
                .iter()
                .map(|c| c.norm())
                .sum::<f64>(),
            0.0
        );
    }

    #[test]
    fn left_and_right_actions_commute() {
        for g in [Groupoid::sis(3).unwrap(), Groupoid::isotropy_z2()] {
            for a in g.morphism_ids() {
                for b in g.morphism_ids() {
                    let la = left_action(&g, a);
                    let rb = right_action(&g, b);
                    assert_eq!(&la * &rb, &rb * &la);
                }
            }
        }
    }

    #[test]
    fn edge_encoding() {
        let g = Groupoid::sis(2).unwrap();
        assert_eq!(encode_edge_state(&g, mid(&g, "x12")).unwrap(), (1, 2));
        assert_eq!(encode_edge_state(&g, mid(&g, "x11")).unwrap(), (1, 1));
        let g3 = Groupoid::sis(3).unwrap();
        assert_eq!(encode_edge_state(&g3, mid(&g3, "x32")).unwrap(), (3, 2));
        assert_eq!(decode_edge_state(&g3, 3, 2).unwrap(), mid(&g3, "x32"));
        let iz = Groupoid::isotropy_z2();
        assert!(matches!(
            encode_edge_state(&iz, MorphismId(0)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn qubit_images_in_clock_convention() {
        // Z|1⟩ = -|1⟩ for n = 2, so the projector on object 1 is ½(1 - Z).
        let g = Groupoid::sis(2).unwrap();
        let id = PauliString::identity(2, 2);
        let z_tail = PauliString::z_string(2, 2, &[(0, 1)]);
        let img = qubit_image_of_action(&g, mid(&g, "x11"), Side::Left).unwrap();
        assert!((img.coefficient(&id) - 0.5).norm() < 1e-15);
        assert!((img.coefficient(&z_tail) + 0.5).norm() < 1e-15);

        // a^r moves the head from object 1 to 2: X_head · ½(1 - Z_head).
        let img = qubit_image_of_action(&g, mid(&g, "x12"), Side::Right).unwrap();
        let x_head = PauliString::x_string(2, 2, &[(1, 1)]);
        let xz_head = x_head
            .multiply(&PauliString::z_string(2, 2, &[(1, 1)]))
            .unwrap();
        assert!((img.coefficient(&x_head) - 0.5).norm() < 1e-15);
        assert!((img.coefficient(&xz_head) + 0.5).norm() < 1e-15);
        assert_eq!(img.len(), 2);
    }

    #[test]
    fn intertwiner_small() {
        let g = Groupoid::sis(3).unwrap();
        let e = encoding_matrix(&g).unwrap();
        let m = mid(&g, "x12");
        let lhs = &e * left_action(&g, m) * e.transpose();
        let rhs = qubit_image_of_action(&g, m, Side::Left)
            .unwrap()
            .to_matrix(BUDGET)
            .unwrap();
        assert!((lhs - rhs).iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn qubit_vertex_family_labels_line_up() {
        let l = Lattice::torus(2, 2).unwrap();
        let v = VertexId { x: 0, y: 0 };
        let family = vertex_projector_family(&l, v, 2).unwrap();
        assert_eq!(family.len(), 16);
        for (idx, signs) in QUBIT_VERTEX_SIGNS.iter().enumerate() {
            let labels: Vec<u32> = signs.iter().map(|&p| if p { 2 } else { 1 }).collect();
            let entry = family
                .iter()
                .find(|p| p.shift_label == 2 && p.corner_labels == labels)
                .unwrap();
            let named = qubit_vertex_projector(&l, v, idx, true).unwrap();
            assert!(entry.operator.approx_eq(&named, 1e-12));
        }
    }

    #[test]
    fn model_vertex_sums() {
        let l = Lattice::torus(2, 2).unwrap();
        let v = VertexId { x: 1, y: 1 };
        let sum = |idx: &[usize]| {
            idx.iter()
                .fold(OperatorSum::zero(2, l.n_sites()), |acc, &i| {
                    &acc + &qubit_vertex_projector(&l, v, i, true).unwrap()
                })
        };
        let table: [(ModelId, [usize; 4]); 5] = [
            (ModelId::M1, [1, 2, 3, 7]),
            (ModelId::M2, [0, 4, 5, 6]),
            (ModelId::M3Exp, [0, 1, 3, 5]),
            (ModelId::MHoriz, [0, 1, 6, 7]),
            (ModelId::MVert, [0, 3, 4, 7]),
        ];
        for (model, idx) in table {
            let h = build_hamiltonian(model, &l).unwrap();
            let term = h
                .terms
                .iter()
                .find(|t| t.location == Location::Vertex(v))
                .unwrap();
            assert!(term.operator.approx_eq(&sum(&idx), 1e-12), "{model}");
        }
        let nondeg = build_hamiltonian(ModelId::MNondeg, &l).unwrap();
        let term = nondeg
            .terms
            .iter()
            .find(|t| t.location == Location::Vertex(v))
            .unwrap();
        assert!(term.operator.approx_eq(&sum(&[0]), 1e-12));
    }

    #[test]
    fn model_faces_from_corner_products() {
        let l = Lattice::torus(2, 2).unwrap();
        let f = FaceId { x: 0, y: 0 };
        let face_op = |model| {
            build_hamiltonian(model, &l)
                .unwrap()
                .terms
                .into_iter()
                .find(|t| t.location == Location::Face(f))
                .unwrap()
                .operator
        };
        let odd = qubit_mismatch_parity_face(&l, f, true).unwrap();
        let even = qubit_mismatch_parity_face(&l, f, false).unwrap();
        assert!(face_op(ModelId::M1).approx_eq(&odd, 1e-12));
        assert!(face_op(ModelId::M2).approx_eq(&even, 1e-12));

        let fam = face_projector_family(&l, f, 2).unwrap();
        let all_plus = Corner::ALL
            .into_iter()
            .fold(OperatorSum::identity(2, l.n_sites()), |acc, c| {
                &acc * &face_corner_projector(&l, f, c, 2, 2).unwrap()
            });
        let b11_b22 = &fam[&FaceLabel::Holonomy(1, 1)] + &fam[&FaceLabel::Holonomy(2, 2)];
        assert!(b11_b22.approx_eq(&all_plus, 1e-12));
        assert!(face_op(ModelId::MNondeg).approx_eq(&all_plus, 1e-12));
        assert!(face_op(ModelId::M3Exp).approx_eq(
            &face_corner_projector(&l, f, Corner::NE, 2, 2).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn six_non_sw_sites() {
        let l = Lattice::torus(2, 2).unwrap();
        let fs = face_sites(&l, FaceId { x: 0, y: 0 }).unwrap();
        let names: Vec<String> = fs.non_sw().iter().map(|&s| l.site(s).to_string()).collect();
        let mut names_sorted = names.clone();
        names_sorted.sort();
        let mut expected = [
            "(1,0).W", "(1,0).N", "(1,1).S", "(1,1).W", "(0,1).E", "(0,1).S",
        ]
        .map(String::from);
        expected.sort();
        assert_eq!(names_sorted, expected);
    }

    #[test]
    fn zn2_equals_m2() {
        for (m, n) in [(2, 2), (3, 2)] {
            let l = Lattice::torus(m, n).unwrap();
            let a = build_hamiltonian(ModelId::Zn(2), &l).unwrap();
            let b = build_hamiltonian(ModelId::M2, &l).unwrap();
            assert_eq!(a.terms.len(), b.terms.len());
            for (s, t) in a.terms.iter().zip(&b.terms) {
                assert_eq!((s.kind, s.location), (t.kind, t.location));
                assert!(s.operator.approx_eq(&t.operator, 1e-12));
            }
        }
    }

    #[test]
    fn term_inventories() {
        let l = Lattice::torus(2, 2).unwrap();
        let h = build_hamiltonian(ModelId::M1, &l).unwrap();
        assert_eq!(h.term_counts()[&TermKind::Vertex], 4);
        assert_eq!(h.term_counts()[&TermKind::Face], 4);
        for t in h.terms.iter().filter(|t| t.kind == TermKind::Face) {
            assert_eq!(t.factors[0].pauli.weight(), 6);
            assert_eq!(t.factors[0].target, 1);
        }
        let o = Lattice::open(2, 2).unwrap();
        let b = build_hamiltonian(ModelId::Boundary, &o).unwrap();
        let counts = b.term_counts();
        assert_eq!(counts[&TermKind::Vertex], 1);
        assert_eq!(counts[&TermKind::BoundaryVertex], 4);
        assert_eq!(counts[&TermKind::CornerVertex], 4);
        assert_eq!(counts[&TermKind::Face], 4);
        assert!(matches!(
            build_hamiltonian(ModelId::Boundary, &l),
            Err(Error::IncompatibleTopology(_))
        ));
        assert!(matches!(
            build_hamiltonian(ModelId::M1, &o),
            Err(Error::IncompatibleTopology(_))
        ));
    }

    #[test]
    fn model_ids_round_trip() {
        for s in [
            "m1", "m2", "m3exp", "mhoriz", "mvert", "mnondeg", "zn:3", "boundary",
        ] {
            assert_eq!(s.parse::<ModelId>().unwrap().to_string(), s);
        }
        assert!("zn:1".parse::<ModelId>().is_err());
        assert!("m9".parse::<ModelId>().is_err());
    }

    #[test]
    fn morphism_face_projector_two_edges() {
        // On a two-edge face the holonomy projectors are Σ_{g1 g2 = h} P^{g1} P^{g2}.
        let g = Groupoid::sis(2).unwrap();
        let x11 = mid(&g, "x11");
        let diag = morphism_face_projector(&g, &[true, true], Some(x11)).unwrap();
        let selected: Vec<(String, String)> = diag
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(i, _)| {
                (
                    g.label(MorphismId(i / 4)).into(),
                    g.label(MorphismId(i % 4)).into(),
                )
            })
            .collect();
        assert_eq!(
            selected,
            [("x11".into(), "x11".into()), ("x12".into(), "x21".into())]
        );
        let zero = morphism_face_projector(&g, &[true, true], None).unwrap();
        assert_eq!(zero.iter().filter(|&&b| b).count(), 8);
    }
}
