//! Clock/shift Pauli strings over Z_n and complex sums of them.
//!
//! A string is `ω_{2n}^phase · ∏_s X_s^{a_s} Z_s^{b_s}` with X to the left of Z
//! on every site. The computational basis of one qudit is `|1⟩, …, |n⟩`
//! (`|0⟩ ≡ |n⟩`), with `Z|i⟩ = ω_n^i |i⟩` and `X|i⟩ = |i+1 mod n⟩`. Internally
//! basis state `|i⟩` has index `i - 1`, and multi-site indices put site 0 in
//! the most significant position.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// `ω_{order}^k` with exact zeros on the axes.
pub fn root_of_unity(order: u32, k: i64) -> Complex64 {
    let k = k.rem_euclid(order as i64);
    let angle = 2.0 * PI * k as f64 / order as f64;
    let clean = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    Complex64::new(clean(angle.cos()), clean(angle.sin()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: u32,
    x: Vec<u32>,
    z: Vec<u32>,
    phase: u32,
}

impl PauliString {
    pub fn identity(n: u32, n_sites: usize) -> Self {
        assert!(n >= 1, "qudit dimension must be positive");
        PauliString {
            n,
            x: vec![0; n_sites],
            z: vec![0; n_sites],
            phase: 0,
        }
    }

    /// Builds a string from signed exponents; everything is reduced.
    pub fn from_exponents(n: u32, x: &[i64], z: &[i64], phase: i64) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} X exponents but {} Z exponents",
                x.len(),
                z.len()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidArgument(
                "qudit dimension must be positive".into(),
            ));
        }
        let red = |v: i64| v.rem_euclid(n as i64) as u32;
        Ok(PauliString {
            n,
            x: x.iter().map(|&v| red(v)).collect(),
            z: z.iter().map(|&v| red(v)).collect(),
            phase: phase.rem_euclid(2 * n as i64) as u32,
        })
    }

    /// Product of `X^e` over the listed `(site, e)` pairs.
    pub fn x_string(n: u32, n_sites: usize, entries: &[(usize, i64)]) -> Self {
        let mut p = PauliString::identity(n, n_sites);
        for &(s, e) in entries {
            p.x[s] = (p.x[s] as i64 + e).rem_euclid(n as i64) as u32;
        }
        p
    }

    /// Product of `Z^e` over the listed `(site, e)` pairs.
    pub fn z_string(n: u32, n_sites: usize, entries: &[(usize, i64)]) -> Self {
        let mut p = PauliString::identity(n, n_sites);
        for &(s, e) in entries {
            p.z[s] = (p.z[s] as i64 + e).rem_euclid(n as i64) as u32;
        }
        p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn n_sites(&self) -> usize {
        self.x.len()
    }

    pub fn x_exps(&self) -> &[u32] {
        &self.x
    }

    pub fn z_exps(&self) -> &[u32] {
        &self.z
    }

    /// Exponent of `ω_{2n}`.
    pub fn phase_exp(&self) -> u32 {
        self.phase
    }

    pub fn with_phase(mut self, phase: i64) -> Self {
        self.phase = phase.rem_euclid(2 * self.n as i64) as u32;
        self
    }

    pub fn phase(&self) -> Complex64 {
        root_of_unity(2 * self.n, self.phase as i64)
    }

    /// True when all exponents vanish (the phase may be anything).
    pub fn is_scalar(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.phase == 0
    }

    /// Sites where the string acts non-trivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n_sites())
            .filter(|&s| self.x[s] != 0 || self.z[s] != 0)
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    /// Exponent vector `(a | b)` of length `2 · n_sites`.
    pub fn symplectic_vector(&self) -> Vec<u32> {
        self.x.iter().chain(&self.z).copied().collect()
    }

    pub fn from_symplectic_vector(n: u32, v: &[u32]) -> Self {
        let half = v.len() / 2;
        PauliString {
            n,
            x: v[..half].iter().map(|&e| e % n).collect(),
            z: v[half..].iter().map(|&e| e % n).collect(),
            phase: 0,
        }
    }

    fn check_compatible(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n || self.n_sites() != other.n_sites() {
            return Err(Error::DimensionMismatch(format!(
                "n={} on {} sites vs n={} on {} sites",
                self.n,
                self.n_sites(),
                other.n,
                other.n_sites()
            )));
        }
        Ok(())
    }

    /// Canonical-form product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_compatible(other)?;
        let n = self.n;
        // Z^b X^c = ω_n^{bc} X^c Z^b.
        let cross: u64 = self
            .z
            .iter()
            .zip(&other.x)
            .map(|(&b, &c)| b as u64 * c as u64)
            .sum();
        let phase = (self.phase as u64 + other.phase as u64 + 2 * cross) % (2 * n as u64);
        Ok(PauliString {
            n,
            x: self
                .x
                .iter()
                .zip(&other.x)
                .map(|(a, c)| (a + c) % n)
                .collect(),
            z: self
                .z
                .iter()
                .zip(&other.z)
                .map(|(b, d)| (b + d) % n)
                .collect(),
            phase: phase as u32,
        })
    }

    pub fn pow(&self, k: u32) -> PauliString {
        let mut acc = PauliString::identity(self.n, self.n_sites());
        for _ in 0..k {
            acc = acc.multiply(self).expect("same shape");
        }
        acc
    }

    pub fn inverse(&self) -> PauliString {
        let n = self.n;
        let ab: u64 = self
            .x
            .iter()
            .zip(&self.z)
            .map(|(&a, &b)| a as u64 * b as u64)
            .sum();
        let phase = (2 * n as u64 * 2 - self.phase as u64 + 2 * ab) % (2 * n as u64);
        PauliString {
            n,
            x: self.x.iter().map(|&a| (n - a) % n).collect(),
            z: self.z.iter().map(|&b| (n - b) % n).collect(),
            phase: phase as u32,
        }
    }

    /// `c` with `other · self = ω_n^c · self · other`.
    pub fn symplectic_phase(&self, other: &PauliString) -> Result<u32> {
        self.check_compatible(other)?;
        Ok(symplectic_form(
            self.n, &self.x, &self.z, &other.x, &other.z,
        ))
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        Ok(self.symplectic_phase(other)? == 0)
    }

    /// Acts on the basis state `digits` in place and returns the acquired
    /// phase as an exponent of `ω_{2n}`.
    pub fn apply_to_digits(&self, digits: &mut [u32]) -> u32 {
        let n = self.n;
        let mut zphase: u64 = 0;
        for (s, d) in digits.iter_mut().enumerate() {
            zphase += self.z[s] as u64 * (*d as u64 + 1);
            *d = (*d + self.x[s]) % n;
        }
        ((self.phase as u64 + 2 * zphase) % (2 * n as u64)) as u32
    }

    pub fn apply(&self, state: &[Complex64]) -> Result<Vec<Complex64>> {
        OperatorSum::from_pauli(self.clone()).apply(state)
    }

    pub fn to_matrix(&self, budget: u64) -> Result<DMatrix<Complex64>> {
        OperatorSum::from_pauli(self.clone()).to_matrix(budget)
    }

    /// Text form, e.g. `w^2 X@(0,0).E Z^2@(1,0).W`; `I` for the identity.
    pub fn to_text(&self, lattice: &Lattice) -> String {
        let mut out = String::new();
        if self.phase != 0 {
            let _ = write!(out, "w^{}", self.phase);
        }
        for s in 0..self.n_sites() {
            let site = lattice.site(s);
            for (letter, e) in [('X', self.x[s]), ('Z', self.z[s])] {
                if e == 0 {
                    continue;
                }
                if !out.is_empty() {
                    out.push(' ');
                }
                if e == 1 {
                    let _ = write!(out, "{letter}@{site}");
                } else {
                    let _ = write!(out, "{letter}^{e}@{site}");
                }
            }
        }
        if self.is_scalar() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push('I');
        }
        out
    }

    /// Parses whitespace-separated factors `X^a@(x,y).D`, `Z^b@(x,y).D`,
    /// `w^k` and `I`, multiplied left to right. Exponents default to 1 and may
    /// be negative.
    pub fn parse(text: &str, lattice: &Lattice, n: u32) -> Result<PauliString> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "qudit dimension must be positive".into(),
            ));
        }
        let mut acc = PauliString::identity(n, lattice.n_sites());
        let mut any = false;
        for (col, token) in tokens(text) {
            any = true;
            if token == "I" {
                continue;
            }
            if let Some(k) = token.strip_prefix("w^") {
                let k: i64 = k
                    .parse()
                    .map_err(|_| Error::parse(col + 2, format!("bad phase exponent {k:?}")))?;
                let phase = acc.phase as i64 + k;
                acc = acc.with_phase(phase);
                continue;
            }
            let (op, site_text) = token.split_once('@').ok_or_else(|| {
                Error::parse(col, format!("expected OP@(x,y).D, found {token:?}"))
            })?;
            let site_col = col + op.chars().count() + 1;
            let mut chars = op.chars();
            let letter = chars.next().unwrap_or(' ');
            if letter != 'X' && letter != 'Z' {
                return Err(Error::parse(
                    col,
                    format!("unknown operator {letter:?}; expected X or Z"),
                ));
            }
            let rest: String = chars.collect();
            let exp: i64 = if rest.is_empty() {
                1
            } else {
                let digits = rest.strip_prefix('^').ok_or_else(|| {
                    Error::parse(col + 1, "expected '^' after the operator letter")
                })?;
                digits
                    .parse()
                    .map_err(|_| Error::parse(col + 2, format!("bad exponent {digits:?}")))?
            };
            let site = lattice.parse_site(site_text).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(site_col, message),
                Error::MissingSite(s) => {
                    Error::parse(site_col, format!("site {s} is not on {lattice}"))
                }
                other => other,
            })?;
            let factor = if letter == 'X' {
                PauliString::x_string(n, lattice.n_sites(), &[(site, exp)])
            } else {
                PauliString::z_string(n, lattice.n_sites(), &[(site, exp)])
            };
            acc = acc.multiply(&factor)?;
        }
        if !any {
            return Err(Error::parse(1, "empty operator string"));
        }
        Ok(acc)
    }
}

/// Whitespace-separated tokens with their 1-based starting columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in text.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (true, Some((c, b))) => {
                out.push((c + 1, &text[b..byte]));
                start = None;
            }
            (false, None) => start = Some((col, byte)),
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c + 1, &text[b..]));
    }
    out
}

pub(crate) fn symplectic_form(n: u32, ax: &[u32], az: &[u32], bx: &[u32], bz: &[u32]) -> u32 {
    let n = n as i64;
    let mut c: i64 = 0;
    for s in 0..ax.len() {
        c += ax[s] as i64 * bz[s] as i64 - bx[s] as i64 * az[s] as i64;
    }
    c.rem_euclid(n) as u32
}

/// Finite complex combination of Pauli strings with like terms merged.
///
/// Phases are folded into the coefficients, so each stored string has phase 0.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSum {
    n: u32,
    n_sites: usize,
    terms: BTreeMap<(Vec<u32>, Vec<u32>), Complex64>,
}

const DROP_TOL: f64 = 1e-14;

impl OperatorSum {
    pub fn zero(n: u32, n_sites: usize) -> Self {
        OperatorSum {
            n,
            n_sites,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: u32, n_sites: usize) -> Self {
        OperatorSum::from_pauli(PauliString::identity(n, n_sites))
    }

    pub fn from_pauli(p: PauliString) -> Self {
        let mut s = OperatorSum::zero(p.n, p.n_sites());
        s.add_term(Complex64::new(1.0, 0.0), &p);
        s
    }

    /// `(1/n) Σ_j ω_n^{-t j} S^j`, the projector onto `S = ω_n^t`.
    /// Requires `S^n = 1`.
    pub fn eigen_projector(s: &PauliString, target: u32) -> Result<Self> {
        let n = s.n;
        if !s.pow(n).is_identity() {
            return Err(Error::InvalidModel(format!(
                "generator does not satisfy S^{n} = 1, so its eigenvalues are not n-th roots of unity"
            )));
        }
        let mut out = OperatorSum::zero(n, s.n_sites());
        let mut power = PauliString::identity(n, s.n_sites());
        for j in 0..n {
            let c = root_of_unity(n, -(target as i64) * j as i64) / n as f64;
            out.add_term(c, &power);
            power = power.multiply(s)?;
        }
        Ok(out)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, c: Complex64, p: &PauliString) {
        assert_eq!(
            (p.n, p.n_sites()),
            (self.n, self.n_sites),
            "operator shape mismatch"
        );
        let key = (p.x.clone(), p.z.clone());
        let entry = self.terms.entry(key.clone()).or_default();
        *entry += c * p.phase();
        if entry.norm() < DROP_TOL {
            self.terms.remove(&key);
        }
    }

    /// Terms as `(coefficient, phase-free string)`.
    pub fn terms(&self) -> impl Iterator<Item = (Complex64, PauliString)> + '_ {
        self.terms.iter().map(move |((x, z), &c)| {
            (
                c,
                PauliString {
                    n: self.n,
                    x: x.clone(),
                    z: z.clone(),
                    phase: 0,
                },
            )
        })
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        let c = self
            .terms
            .get(&(p.x.clone(), p.z.clone()))
            .copied()
            .unwrap_or_default();
        c * p.phase().conj()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = OperatorSum::zero(self.n, self.n_sites);
        for (k, v) in &self.terms {
            let w = v * c;
            if w.norm() >= DROP_TOL {
                out.terms.insert(k.clone(), w);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = OperatorSum::zero(self.n, self.n_sites);
        for (c, p) in self.terms() {
            out.add_term(c.conj(), &p.inverse());
        }
        out
    }

    pub fn approx_eq(&self, other: &OperatorSum, tol: f64) -> bool {
        if (self.n, self.n_sites) != (other.n, other.n_sites) {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.terms.get(k).copied().unwrap_or_default();
            let b = other.terms.get(k).copied().unwrap_or_default();
            (a - b).norm() <= tol
        })
    }

    /// Largest coefficient magnitude; zero for the zero operator.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sites touched by any term.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.n_sites];
        for (x, z) in self.terms.keys() {
            for s in 0..self.n_sites {
                if x[s] != 0 || z[s] != 0 {
                    used[s] = true;
                }
            }
        }
        (0..self.n_sites).filter(|&s| used[s]).collect()
    }

    /// The same operator written on the listed sites only (in that order).
    pub fn restrict(&self, sites: &[usize]) -> Result<Self> {
        let mut out = OperatorSum::zero(self.n, sites.len());
        for ((x, z), &c) in &self.terms {
            let outside =
                (0..self.n_sites).any(|s| (x[s] != 0 || z[s] != 0) && !sites.contains(&s));
            if outside {
                return Err(Error::InvalidArgument(
                    "operator acts outside the requested sites".into(),
                ));
            }
            let p = PauliString {
                n: self.n,
                x: sites.iter().map(|&s| x[s]).collect(),
                z: sites.iter().map(|&s| z[s]).collect(),
                phase: 0,
            };
            out.add_term(c, &p);
        }
        Ok(out)
    }

    pub fn dimension(&self) -> u128 {
        (self.n as u128)
            .checked_pow(self.n_sites as u32)
            .unwrap_or(u128::MAX)
    }

    /// Applies the operator to a full state vector.
    pub fn apply(&self, state: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = self.dimension();
        if state.len() as u128 != dim {
            return Err(Error::DimensionMismatch(format!(
                "state has {} amplitudes, operator acts on {dim}",
                state.len()
            )));
        }
        let n = self.n;
        let sites = self.n_sites;
        let roots: Vec<Complex64> = (0..2 * n).map(|k| root_of_unity(2 * n, k as i64)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
        let mut digits = vec![0u32; sites];
        let mut image = vec![0u32; sites];
        for (b, &amp) in state.iter().enumerate() {
            if b > 0 {
                increment(&mut digits, n);
            }
            if amp.norm() == 0.0 {
                continue;
            }
            for (c, p) in self.terms() {
                image.copy_from_slice(&digits);
                let ph = p.apply_to_digits(&mut image);
                out[encode(&image, n)] += c * roots[ph as usize] * amp;
            }
        }
        Ok(out)
    }

    /// Dense matrix; refuses when the matrix would hold more than `budget`
    /// entries.
    pub fn to_matrix(&self, budget: u64) -> Result<DMatrix<Complex64>> {
        let dim = self.dimension();
        let entries = dim.saturating_mul(dim);
        if entries > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: entries,
                budget,
            });
        }
        let dim = dim as usize;
        let n = self.n;
        let roots: Vec<Complex64> = (0..2 * n).map(|k| root_of_unity(2 * n, k as i64)).collect();
        let mut m = DMatrix::zeros(dim, dim);
        let mut digits = vec![0u32; self.n_sites];
        let mut image = vec![0u32; self.n_sites];
        for col in 0..dim {
            if col > 0 {
                increment(&mut digits, n);
            }
            for (c, p) in self.terms() {
                image.copy_from_slice(&digits);
                let ph = p.apply_to_digits(&mut image);
                m[(encode(&image, n), col)] += c * roots[ph as usize];
            }
        }
        Ok(m)
    }
}

/// Odometer step over base-`n` digits, most significant first.
pub(crate) fn increment(digits: &mut [u32], n: u32) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d == n {
            *d = 0;
        } else {
            return;
        }
    }
}

pub(crate) fn encode(digits: &[u32], n: u32) -> usize {
    digits
        .iter()
        .fold(0usize, |acc, &d| acc * n as usize + d as usize)
}

pub(crate) fn decode(mut index: usize, n: u32, digits: &mut [u32]) {
    for d in digits.iter_mut().rev() {
        *d = (index % n as usize) as u32;
        index /= n as usize;
    }
}

impl Add for &OperatorSum {
    type Output = OperatorSum;

    fn add(self, rhs: &OperatorSum) -> OperatorSum {
        let mut out = self.clone();
        for (c, p) in rhs.terms() {
            out.add_term(c, &p);
        }
        out
    }
}

impl Sub for &OperatorSum {
    type Output = OperatorSum;

    fn sub(self, rhs: &OperatorSum) -> OperatorSum {
        let mut out = self.clone();
        for (c, p) in rhs.terms() {
            out.add_term(-c, &p);
        }
        out
    }
}

impl Mul for &OperatorSum {
    type Output = OperatorSum;

    /// Operator product; panics if the shapes differ.
    fn mul(self, rhs: &OperatorSum) -> OperatorSum {
        assert_eq!(
            (self.n, self.n_sites),
            (rhs.n, rhs.n_sites),
            "operator shape mismatch"
        );
        let mut out = OperatorSum::zero(self.n, self.n_sites);
        for (a, p) in self.terms() {
            for (b, q) in rhs.terms() {
                out.add_term(a * b, &p.multiply(&q).expect("same shape"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    const BIG: u64 = 1 << 24;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn commutation_phases() {
        let x = PauliString::x_string(2, 1, &[(0, 1)]);
        let z = PauliString::z_string(2, 1, &[(0, 1)]);
        let zx = z.multiply(&x).unwrap();
        let xz = x.multiply(&z).unwrap();
        assert_eq!(xz.phase_exp(), 0);
        assert_eq!(zx.phase_exp(), 2);
        assert_eq!(zx.x_exps(), xz.x_exps());

        let x3 = PauliString::x_string(3, 1, &[(0, 1)]);
        let z3 = PauliString::z_string(3, 1, &[(0, 1)]);
        let zx3 = z3.multiply(&x3).unwrap();
        // ω_3 = ω_6^2.
        assert_eq!(zx3.phase_exp(), 2);
    }

    #[test]
    fn symplectic_examples() {
        let x = PauliString::x_string(2, 2, &[(0, 1)]);
        let z = PauliString::z_string(2, 2, &[(0, 1)]);
        let z_other = PauliString::z_string(2, 2, &[(1, 1)]);
        assert_eq!(x.symplectic_phase(&z_other).unwrap(), 0);
        assert_eq!(x.symplectic_phase(&z).unwrap(), 1);
        let xx = PauliString::x_string(2, 2, &[(0, 1), (1, 1)]);
        let zz = PauliString::z_string(2, 2, &[(0, 1), (1, 1)]);
        assert_eq!(xx.symplectic_phase(&zz).unwrap(), 0);
    }

    #[test]
    fn small_matrices() {
        let x = PauliString::x_string(2, 1, &[(0, 1)]);
        let m = x.to_matrix(BIG).unwrap();
        assert_eq!(m[(0, 1)], c(1.0, 0.0));
        assert_eq!(m[(1, 0)], c(1.0, 0.0));
        assert_eq!(m[(0, 0)], c(0.0, 0.0));

        let z = PauliString::z_string(3, 1, &[(0, 1)]);
        let m = z.to_matrix(BIG).unwrap();
        let w = root_of_unity(3, 1);
        assert!((m[(0, 0)] - w).norm() < 1e-15);
        assert!((m[(1, 1)] - w * w).norm() < 1e-15);
        assert!((m[(2, 2)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn budget_is_enforced() {
        let p = PauliString::identity(2, 13);
        assert!(matches!(
            p.to_matrix(BIG),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let l = Lattice::torus(2, 2).unwrap();
        let p = PauliString::parse("w^3 X@(0,0).E Z^2@(1,1).S X^2@(1,1).S", &l, 3).unwrap();
        let text = p.to_text(&l);
        assert_eq!(PauliString::parse(&text, &l, 3).unwrap(), p);
        assert_eq!(
            PauliString::parse("I", &l, 2).unwrap(),
            PauliString::identity(2, 16)
        );

        let err = PauliString::parse("X@(0,0).E Q@(1,0).W", &l, 2).unwrap_err();
        assert_eq!(
            err,
            Error::parse(11, "unknown operator 'Q'; expected X or Z")
        );
        let err = PauliString::parse("X@(0,0).E  Z@(5,0).W", &l, 2).unwrap_err();
        assert!(matches!(err, Error::Parse { column: 14, .. }), "{err:?}");
    }

    #[test]
    fn projector_from_generator() {
        let zz = PauliString::z_string(2, 2, &[(0, 1), (1, 1)]);
        let p = OperatorSum::eigen_projector(&zz, 1).unwrap();
        assert!((p.coefficient(&PauliString::identity(2, 2)) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((p.coefficient(&zz) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((&p * &p).approx_eq(&p, 1e-12));
        let y_like = PauliString::x_string(2, 1, &[(0, 1)])
            .multiply(&PauliString::z_string(2, 1, &[(0, 1)]))
            .unwrap();
        assert!(OperatorSum::eigen_projector(&y_like, 0).is_err());
    }

    #[test]
    fn apply_matches_matrix() {
        let l = Lattice::open(1, 1).unwrap();
        let p = PauliString::parse("X@(0,0).N Z^2@(1,0).W X^2@(0,1).E", &l, 3).unwrap();
        let op = &OperatorSum::from_pauli(p) + &OperatorSum::identity(3, 8).scale(c(0.0, 2.0));
        let restricted = op.restrict(&op.support()).unwrap();
        let m = restricted.to_matrix(BIG).unwrap();
        let dim = m.nrows();
        let state: Vec<Complex64> = (0..dim)
            .map(|i| c(i as f64, 1.0 / (i as f64 + 1.0)))
            .collect();
        let direct = restricted.apply(&state).unwrap();
        let via = &m * nalgebra::DVector::from_vec(state);
        for i in 0..dim {
            assert!((direct[i] - via[i]).norm() < 1e-12);
        }
    }
}
