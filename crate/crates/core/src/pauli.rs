//! Pauli strings, weighted Pauli sums and the Hilbert–Schmidt decomposition
//! of dense `2^n × 2^n` matrices.
//!
//! A string is stored as symplectic bitmasks: bit `q` of `x` / `z` marks an
//! `X` / `Z` factor on qubit `q`, and `Y` sets both. Labels are written with
//! the highest qubit first, so `"ZI"` is `Z ⊗ I` with `Z` on qubit 1 and the
//! matrix is the Kronecker product in label order.
//!
//! Decomposition uses one Walsh–Hadamard pass per `x` mask: with
//! `P|c⟩ = i^{|x∧z|} (−1)^{|z∧c|} |c ⊕ x⟩`,
//! `Tr(P M) = i^{|x∧z|} Σ_c (−1)^{|z∧c|} M[c][c ⊕ x]`, which costs
//! `O(n · 4^n)` for all `4^n` strings together.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_PRUNE_EPS: f64 = 1e-12;

const NORM_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis on an `n`-qubit register (`n <= 64`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

#[inline]
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { n, x: 0, z: 0 }
    }

    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        debug_assert!(n <= 64);
        let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self {
            n,
            x: x & mask,
            z: z & mask,
        }
    }

    /// Single Pauli `p` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let bit = 1u64 << qubit;
        let (x, z) = match p {
            Pauli::I => (0, 0),
            Pauli::X => (bit, 0),
            Pauli::Y => (bit, bit),
            Pauli::Z => (0, bit),
        };
        Self { n, x, z }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| (self.x | self.z) >> q & 1 == 1)
            .collect()
    }

    pub fn label(&self) -> String {
        (0..self.n).rev().map(|q| self.get(q).as_char()).collect()
    }

    /// `P|c⟩ = phase · |c ⊕ x⟩`; returns `(c ⊕ x, phase)`.
    #[inline]
    pub fn apply_basis(&self, c: usize) -> (usize, Complex64) {
        let k = (self.x & self.z).count_ones() + 2 * ((self.z & c as u64).count_ones() & 1);
        (c ^ self.x as usize, i_pow(k))
    }

    /// `self · other = phase · result`.
    pub fn mul(&self, other: &PauliString) -> (Complex64, PauliString) {
        debug_assert_eq!(self.n, other.n);
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let a1 = (self.x & self.z).count_ones();
        let a2 = (other.x & other.z).count_ones();
        let a3 = (x & z).count_ones();
        let sign = 2 * ((self.z & other.x).count_ones() & 1);
        // i^{a1 + a2 + sign - a3}, kept non-negative mod 4.
        let k = (a1 + a2 + sign + 4 * 64 - a3) % 4;
        (i_pow(k), PauliString { n: self.n, x, z })
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for c in 0..dim {
            let (r, ph) = self.apply_basis(c);
            m[(r, c)] = ph;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        if n == 0 || n > 64 {
            return Err(Error::PauliFormat(format!(
                "label {s:?} must have 1..=64 factors"
            )));
        }
        let mut out = PauliString::identity(n);
        for (pos, ch) in s.chars().enumerate() {
            let q = n - 1 - pos;
            let p = match ch {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => {
                    return Err(Error::PauliFormat(format!(
                        "unknown factor {other:?} in {s:?}"
                    )))
                }
            };
            let single = PauliString::single(n, q, p);
            out.x |= single.x;
            out.z |= single.z;
        }
        Ok(out)
    }
}

impl Ord for PauliString {
    /// Lexicographic by label (I < X < Y < Z, highest qubit first).
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for q in (0..self.n).rev() {
                let o = (self.get(q) as u8).cmp(&(other.get(q) as u8));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Weighted sum of Pauli strings on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, coeff: f64) -> Self {
        let mut s = Self::zero(n);
        s.add_term(PauliString::identity(n), Complex64::new(coeff, 0.0));
        s
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (PauliString, Complex64)>) -> Self {
        let mut s = Self::zero(n);
        for (p, c) in terms {
            s.add_term(p, c);
        }
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    /// Adds `c · p`; exact cancellations remove the entry.
    pub fn add_term(&mut self, p: PauliString, c: Complex64) {
        debug_assert_eq!(p.n, self.n);
        let entry = self.terms.entry(p).or_default();
        *entry += c;
        if *entry == Complex64::default() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &PauliSum) -> PauliSum {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, *c);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> PauliSum {
        PauliSum {
            n: self.n,
            terms: self.terms.iter().map(|(p, c)| (*p, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (ph, p) = a.mul(b);
                out.add_term(p, ca * cb * ph);
            }
        }
        out
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            n: self.n,
            terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect(),
        }
    }

    /// Drops terms with `|c| < eps`.
    pub fn pruned(&self, eps: f64) -> PauliSum {
        PauliSum {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() >= eps && c.norm() > 0.0)
                .map(|(p, c)| (*p, *c))
                .collect(),
        }
    }

    pub fn max_imaginary(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// `Σ c_j P_j` as a dense matrix.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for (p, coeff) in &self.terms {
            for c in 0..dim {
                let (r, ph) = p.apply_basis(c);
                m[(r, c)] += coeff * ph;
            }
        }
        m
    }

    /// `(Σ c_j P_j) |ψ⟩`.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); psi.len()];
        for (p, coeff) in &self.terms {
            for (c, amp) in psi.iter().enumerate() {
                if *amp == Complex64::default() {
                    continue;
                }
                let (r, ph) = p.apply_basis(c);
                out[r] += coeff * ph * amp;
            }
        }
        out
    }

    /// `Re ⟨ψ|Σ c_j P_j|ψ⟩`, term by term without forming the matrix.
    pub fn expectation(&self, psi: &[Complex64]) -> Result<f64> {
        if psi.len() != 1usize << self.n {
            return Err(Error::Dimension(format!(
                "statevector has {} amplitudes for a {}-qubit operator",
                psi.len(),
                self.n
            )));
        }
        let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(self.expectation_unchecked(psi))
    }

    pub(crate) fn expectation_unchecked(&self, psi: &[Complex64]) -> f64 {
        let mut total = Complex64::default();
        for (p, coeff) in &self.terms {
            let mut acc = Complex64::default();
            for (c, amp) in psi.iter().enumerate() {
                let (r, ph) = p.apply_basis(c);
                acc += psi[r].conj() * ph * amp;
            }
            total += coeff * acc;
        }
        total.re
    }

    /// One line per term, `"<re> <label>"` with the real part as `%+.9f`;
    /// terms with a nonzero imaginary part are written `"<re><im>i <label>"`.
    /// Lines are sorted lexicographically by label.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, c) in &self.terms {
            if c.im == 0.0 {
                out.push_str(&format!("{:+.9} {}\n", c.re, p));
            } else {
                out.push_str(&format!("{:+.9}{:+.9}i {}\n", c.re, c.im, p));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<PauliSum> {
        let mut terms = Vec::new();
        let mut n = None;
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (coeff, label) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::PauliFormat(format!("line {line:?} lacks a label")))?;
            let p: PauliString = label.trim().parse()?;
            match n {
                None => n = Some(p.n),
                Some(k) if k != p.n => {
                    return Err(Error::PauliFormat(format!(
                        "mixed register sizes in {line:?}"
                    )))
                }
                _ => {}
            }
            terms.push((p, parse_coefficient(coeff)?));
        }
        let n = n.ok_or_else(|| Error::PauliFormat("no terms".into()))?;
        Ok(PauliSum::from_terms(n, terms))
    }
}

fn parse_coefficient(s: &str) -> Result<Complex64> {
    let bad = || Error::PauliFormat(format!("bad coefficient {s:?}"));
    if let Some(body) = s.strip_suffix('i') {
        // split before the sign of the imaginary part (skip the leading sign)
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(i, ch)| (ch == '+' || ch == '-') && !body[..i].ends_with(['e', 'E']))
            .map(|(i, _)| i)
            .last()
            .ok_or_else(bad)?;
        let re = body[..split].parse::<f64>().map_err(|_| bad())?;
        let im = body[split..].parse::<f64>().map_err(|_| bad())?;
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}

fn register_size(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::Dimension(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn walsh_hadamard(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        h *= 2;
    }
}

/// Pauli coefficients `c_j = Tr(P_j M) / 2^n` with `M = Σ c_j P_j` exactly;
/// terms with `|c_j| < prune_eps` are dropped.
pub fn decompose(m: &DMatrix<Complex64>, prune_eps: f64) -> Result<PauliSum> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "matrix is {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let dim = m.nrows();
    let n = register_size(dim)?;
    let scale = 1.0 / dim as f64;
    let rows: Vec<Vec<(PauliString, Complex64)>> = (0..dim)
        .into_par_iter()
        .map(|x| {
            let mut v: Vec<Complex64> = (0..dim).map(|c| m[(c, c ^ x)]).collect();
            walsh_hadamard(&mut v);
            v.into_iter()
                .enumerate()
                .filter_map(|(z, s)| {
                    let k = (x as u64 & z as u64).count_ones();
                    let coeff = i_pow(k) * s * scale;
                    (coeff.norm() >= prune_eps && coeff.norm() > 0.0)
                        .then(|| (PauliString::from_masks(n, x as u64, z as u64), coeff))
                })
                .collect()
        })
        .collect();
    Ok(PauliSum {
        n,
        terms: rows.into_iter().flatten().collect(),
    })
}

pub fn decompose_real(m: &DMatrix<f64>, prune_eps: f64) -> Result<PauliSum> {
    decompose(&m.map(|v| Complex64::new(v, 0.0)), prune_eps)
}

/// Dense matrix of a Pauli sum.
pub fn reconstruct(p: &PauliSum) -> DMatrix<Complex64> {
    p.to_dense()
}
