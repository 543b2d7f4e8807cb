//! Brute-force oracle for small systems.
//!
//! Every operator here is a sum of clock/shift strings, so it maps a basis
//! state `b` into the coset `b + G`, where `G` is the group generated by the
//! strings' shift parts. The basis therefore splits into orbits of `G` that
//! every operator preserves, and all checks run block by block.

use std::collections::{BTreeMap, HashSet};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::catalog::{HamiltonianSpec, TermKind};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::pauli::{decode, encode, root_of_unity, OperatorSum, PauliString};

/// Default cap on the number of stored amplitudes.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Environment variable that overrides [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "GTC_MEMORY_BUDGET";

/// Energies closer than this to the ground energy count as degenerate.
const EIGEN_TOL: f64 = 1e-6;

pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

fn check_dimension(n: u32, n_sites: usize, budget: u64) -> Result<usize> {
    let dim = (n as u128).checked_pow(n_sites as u32).unwrap_or(u128::MAX);
    if dim > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: dim,
            budget,
        });
    }
    Ok(dim as usize)
}

type Compiled = Vec<(Complex64, PauliString)>;

fn compile(op: &OperatorSum) -> Compiled {
    op.terms().collect()
}

/// Partition of the basis into orbits that every given operator preserves.
pub struct BlockSystem {
    n: u32,
    n_sites: usize,
    blocks: Vec<Vec<usize>>,
    /// `(block, position)` of every basis state.
    position: Vec<(u32, u32)>,
    roots: Vec<Complex64>,
}

impl BlockSystem {
    pub fn new(ops: &[OperatorSum], n: u32, n_sites: usize, budget: u64) -> Result<Self> {
        let dim = check_dimension(n, n_sites, budget)?;
        for op in ops {
            if op.n() != n || op.n_sites() != n_sites {
                return Err(Error::DimensionMismatch(
                    "operators act on different systems".into(),
                ));
            }
        }
        let shifts: HashSet<Vec<u32>> = ops
            .iter()
            .flat_map(|op| op.terms().map(|(_, p)| p.x_exps().to_vec()))
            .filter(|x| x.iter().any(|&e| e != 0))
            .collect();
        // Closure of the shift parts under addition.
        let mut group = vec![vec![0u32; n_sites]];
        let mut seen: HashSet<Vec<u32>> = group.iter().cloned().collect();
        let mut i = 0;
        while i < group.len() {
            for s in &shifts {
                let sum: Vec<u32> = group[i].iter().zip(s).map(|(a, b)| (a + b) % n).collect();
                if seen.insert(sum.clone()) {
                    if (group.len() as u128 + 1).pow(2) > budget as u128 {
                        return Err(Error::BudgetExceeded {
                            needed: (group.len() as u128 + 1).pow(2),
                            budget,
                        });
                    }
                    group.push(sum);
                }
            }
            i += 1;
        }
        let mut position = vec![(u32::MAX, 0u32); dim];
        let mut blocks = Vec::new();
        let mut digits = vec![0u32; n_sites];
        let mut moved = vec![0u32; n_sites];
        for b in 0..dim {
            if position[b].0 != u32::MAX {
                continue;
            }
            decode(b, n, &mut digits);
            let id = blocks.len() as u32;
            let mut members: Vec<usize> = group
                .iter()
                .map(|g| {
                    for s in 0..n_sites {
                        moved[s] = (digits[s] + g[s]) % n;
                    }
                    encode(&moved, n)
                })
                .collect();
            members.sort_unstable();
            for (p, &m) in members.iter().enumerate() {
                position[m] = (id, p as u32);
            }
            blocks.push(members);
        }
        Ok(Self {
            n,
            n_sites,
            blocks,
            position,
            roots: (0..2 * n).map(|k| root_of_unity(2 * n, k as i64)).collect(),
        })
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, index: usize) -> &[usize] {
        &self.blocks[index]
    }

    /// Nonzero entries `(row, col, value)` of `op` restricted to one block;
    /// repeated positions add up.
    fn block_entries(&self, op: &Compiled, index: usize) -> Vec<(usize, usize, Complex64)> {
        let members = &self.blocks[index];
        let mut out = Vec::with_capacity(members.len() * op.len());
        let mut digits = vec![0u32; self.n_sites];
        for (col, &b) in members.iter().enumerate() {
            for (c, p) in op {
                decode(b, self.n, &mut digits);
                let ph = p.apply_to_digits(&mut digits);
                let (blk, row) = self.position[encode(&digits, self.n)];
                debug_assert_eq!(blk as usize, index);
                out.push((row as usize, col, c * self.roots[ph as usize]));
            }
        }
        out
    }

    fn block_matrix(&self, op: &Compiled, index: usize) -> DMatrix<Complex64> {
        let size = self.blocks[index].len();
        let mut out = DMatrix::zeros(size, size);
        for (r, c, v) in self.block_entries(op, index) {
            out[(r, c)] += v;
        }
        out
    }

    /// Restrictions of `ops` to one block.
    pub fn block_matrices(&self, ops: &[OperatorSum], index: usize) -> Vec<DMatrix<Complex64>> {
        ops.iter()
            .map(|op| self.block_matrix(&compile(op), index))
            .collect()
    }
}

/// `Tr(T_1 T_2 ⋯ T_k)` over the full space. An empty list gives the dimension.
pub fn trace_product(terms: &[OperatorSum], n: u32, n_sites: usize, budget: u64) -> Result<f64> {
    let sys = BlockSystem::new(terms, n, n_sites, budget)?;
    let compiled: Vec<Compiled> = terms.iter().map(compile).collect();
    let mut total = 0.0;
    for b in 0..sys.block_count() {
        let size = sys.block(b).len();
        let mut prod = DMatrix::<Complex64>::identity(size, size);
        for op in compiled.iter().rev() {
            prod = left_multiply(&sys.block_entries(op, b), &prod);
        }
        total += prod.trace().re;
    }
    Ok(total)
}

/// `A · m` for `A` given by its entries; each entry costs one row update.
fn left_multiply(
    entries: &[(usize, usize, Complex64)],
    m: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for &(r, c, v) in entries {
        if v.norm_sqr() == 0.0 {
            continue;
        }
        for k in 0..m.ncols() {
            out[(r, k)] += v * m[(c, k)];
        }
    }
    out
}

/// Trace of the product of a Hamiltonian's terms.
pub fn hamiltonian_trace(h: &HamiltonianSpec, budget: u64) -> Result<f64> {
    trace_product(&h.operators(), h.n, h.lattice.n_sites(), budget)
}

/// Multiplicity of the energy `-(number of terms)` of `H = -Σ T`, found by
/// diagonalizing every block.
pub fn ground_space_dimension(h: &HamiltonianSpec, budget: u64) -> Result<u64> {
    ground_space_dimension_of(&h.operators(), h.n, h.lattice.n_sites(), budget)
}

pub fn ground_space_dimension_of(
    terms: &[OperatorSum],
    n: u32,
    n_sites: usize,
    budget: u64,
) -> Result<u64> {
    let sys = BlockSystem::new(terms, n, n_sites, budget)?;
    let compiled: Vec<Compiled> = terms.iter().map(compile).collect();
    let target = -(terms.len() as f64);
    let mut count = 0;
    for b in 0..sys.block_count() {
        let size = sys.block(b).len();
        let mut ham = DMatrix::<Complex64>::zeros(size, size);
        for op in &compiled {
            ham -= sys.block_matrix(op, b);
        }
        let eig = ham.symmetric_eigen();
        count += eig
            .eigenvalues
            .iter()
            .filter(|&&e| (e - target).abs() < EIGEN_TOL)
            .count() as u64;
    }
    Ok(count)
}

/// Largest entry of `f(blocks)` over all blocks, after restricting the
/// operators to their joint support.
pub fn block_deviation(
    ops: &[OperatorSum],
    budget: u64,
    f: impl Fn(&[DMatrix<Complex64>]) -> DMatrix<Complex64>,
) -> Result<f64> {
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidArgument("no operators to compare".into()))?;
    let mut support: Vec<usize> = ops.iter().flat_map(|o| o.support()).collect();
    support.sort_unstable();
    support.dedup();
    let local: Vec<OperatorSum> = ops
        .iter()
        .map(|o| o.restrict(&support))
        .collect::<Result<_>>()?;
    let sys = BlockSystem::new(&local, first.n(), support.len(), budget)?;
    let mut worst: f64 = 0.0;
    for b in 0..sys.block_count() {
        let mats = sys.block_matrices(&local, b);
        let m = f(&mats);
        worst = worst.max(m.iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

/// `max |P² - P|`.
pub fn projector_deviation(p: &OperatorSum, budget: u64) -> Result<f64> {
    block_deviation(std::slice::from_ref(p), budget, |m| &m[0] * &m[0] - &m[0])
}

/// `max |AB - BA|`.
pub fn commutator_deviation(a: &OperatorSum, b: &OperatorSum, budget: u64) -> Result<f64> {
    block_deviation(&[a.clone(), b.clone()], budget, |m| {
        &m[0] * &m[1] - &m[1] * &m[0]
    })
}

/// `max |AB|`.
pub fn product_deviation(a: &OperatorSum, b: &OperatorSum, budget: u64) -> Result<f64> {
    block_deviation(&[a.clone(), b.clone()], budget, |m| &m[0] * &m[1])
}

/// `max |Σ P_i - 1|`.
pub fn completeness_deviation(family: &[OperatorSum], budget: u64) -> Result<f64> {
    block_deviation(family, budget, |m| {
        let size = m[0].nrows();
        m.iter()
            .fold(-DMatrix::<Complex64>::identity(size, size), |acc, x| {
                acc + x
            })
    })
}

/// A state vector on a lattice's qudit sites.
#[derive(Debug, Clone)]
pub struct DenseState {
    pub amplitudes: Vec<Complex64>,
    pub lattice: Lattice,
    pub n: u32,
}

impl DenseState {
    /// Product state with the given object (1-based) on every site.
    pub fn basis(lattice: &Lattice, n: u32, objects: &[usize], budget: u64) -> Result<Self> {
        let dim = check_dimension(n, lattice.n_sites(), budget)?;
        let digits = objects_to_digits(objects, n, lattice.n_sites())?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[encode(&digits, n)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            lattice: lattice.clone(),
            n,
        })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < 1e-10
    }

    pub fn apply(&self, op: &OperatorSum) -> Result<DenseState> {
        Ok(DenseState {
            amplitudes: op.apply(&self.amplitudes)?,
            lattice: self.lattice.clone(),
            n: self.n,
        })
    }

    pub fn apply_pauli(&self, p: &PauliString) -> Result<DenseState> {
        self.apply(&OperatorSum::from_pauli(p.clone()))
    }

    /// `⟨self|op|self⟩`.
    pub fn expectation(&self, op: &OperatorSum) -> Result<Complex64> {
        let image = op.apply(&self.amplitudes)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&image)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

fn objects_to_digits(objects: &[usize], n: u32, n_sites: usize) -> Result<Vec<u32>> {
    if objects.len() != n_sites {
        return Err(Error::DimensionMismatch(format!(
            "configuration has {} entries, lattice has {n_sites} sites",
            objects.len()
        )));
    }
    objects
        .iter()
        .map(|&o| {
            if (1..=n as usize).contains(&o) {
                Ok(o as u32 - 1)
            } else {
                Err(Error::InvalidArgument(format!(
                    "object {o} outside 1..={n}"
                )))
            }
        })
        .collect()
}

/// Parses `"(x,y).D=i"` tokens and an optional `"*=i"` default (1 otherwise)
/// into one object per site.
pub fn parse_seed(text: &str, lattice: &Lattice, n: u32) -> Result<Vec<usize>> {
    let mut default = 1usize;
    let mut explicit = BTreeMap::new();
    let mut column = 1;
    for token in text.split(|c: char| c.is_whitespace() || c == ';') {
        let start = column;
        column += token.chars().count() + 1;
        if token.is_empty() {
            continue;
        }
        let (lhs, rhs) = token
            .split_once('=')
            .ok_or_else(|| Error::parse(start, format!("expected SITE=OBJECT, got {token:?}")))?;
        let value_col = start + lhs.chars().count() + 1;
        let value: usize = rhs
            .parse()
            .map_err(|_| Error::parse(value_col, format!("bad object {rhs:?}")))?;
        if !(1..=n as usize).contains(&value) {
            return Err(Error::parse(
                value_col,
                format!("object {value} outside 1..={n}"),
            ));
        }
        if lhs == "*" {
            default = value;
        } else {
            let site = lattice.parse_site(lhs).map_err(|e| match e {
                Error::Parse { column, message } => Error::parse(start + column - 1, message),
                other => Error::parse(start, other.to_string()),
            })?;
            explicit.insert(site, value);
        }
    }
    Ok((0..lattice.n_sites())
        .map(|s| *explicit.get(&s).unwrap_or(&default))
        .collect())
}

fn is_face(kind: TermKind) -> bool {
    kind == TermKind::Face
}

/// Projects a product seed with every non-face term: `∏ A_v |seed⟩`, normalized.
///
/// The seed must already satisfy every face term.
pub fn construct_ground_state(
    h: &HamiltonianSpec,
    seed: &[usize],
    budget: u64,
) -> Result<DenseState> {
    let mut state = DenseState::basis(&h.lattice, h.n, seed, budget)?;
    let violated: Vec<String> = h
        .terms
        .iter()
        .filter(|t| is_face(t.kind))
        .filter_map(|t| match state.expectation(&t.operator) {
            Ok(v) if (v.re - 1.0).abs() < 1e-10 => None,
            _ => Some(t.location.to_string()),
        })
        .collect();
    if !violated.is_empty() {
        return Err(Error::SeedViolatesFace(violated));
    }
    for t in h.terms.iter().filter(|t| !is_face(t.kind)) {
        state = state.apply(&t.operator)?;
    }
    let norm = state.norm();
    if norm < 1e-12 {
        return Err(Error::SeedAnnihilated);
    }
    for a in &mut state.amplitudes {
        *a /= norm;
    }
    let syndrome = measure_syndrome(h, &state)?;
    if let Some(i) = syndrome.iter().position(|&v| (v - 1.0).abs() > 1e-10) {
        return Err(Error::InvalidModel(format!(
            "projected seed is not a ground state: {} {} has expectation {}",
            h.terms[i].kind, h.terms[i].location, syndrome[i]
        )));
    }
    Ok(state)
}

/// `⟨T⟩` for every term, in term order.
pub fn measure_syndrome(h: &HamiltonianSpec, state: &DenseState) -> Result<Vec<f64>> {
    if state.n != h.n || state.lattice != h.lattice {
        return Err(Error::DimensionMismatch(
            "state and Hamiltonian live on different systems".into(),
        ));
    }
    h.terms
        .iter()
        .map(|t| state.expectation(&t.operator).map(|v| v.re))
        .collect()
}
