//! Pauli strings and sums over at most 128 qubits.
//!
//! A string is stored as a pair of bit masks: `x` marks qubits carrying X or Y,
//! `z` marks qubits carrying Z or Y. A set bit in both masks is a literal Y
//! (not XZ), so the string X₀Y₁ has `x = 0b11`, `z = 0b10`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn masks(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// i^k for k taken mod 4.
pub(crate) fn i_pow(k: i32) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliString {
    x: u128,
    z: u128,
    pub coeff: Complex64,
}

impl PauliString {
    pub fn identity(coeff: Complex64) -> Self {
        Self { x: 0, z: 0, coeff }
    }

    pub fn from_masks(x: u128, z: u128, coeff: Complex64) -> Self {
        Self { x, z, coeff }
    }

    /// Builds a string from `(qubit, axis)` factors. Each qubit may appear once.
    pub fn new(factors: &[(usize, Pauli)], coeff: Complex64) -> Result<Self> {
        let (mut x, mut z) = (0u128, 0u128);
        for &(q, p) in factors {
            if q >= MAX_QUBITS {
                return Err(Error::IndexOutOfRange { index: q, limit: MAX_QUBITS });
            }
            let bit = 1u128 << q;
            if (x | z) & bit != 0 {
                return Err(Error::InvalidExcitation(format!("qubit {q} repeated in Pauli string")));
            }
            let (bx, bz) = p.masks();
            if bx {
                x |= bit;
            }
            if bz {
                z |= bit;
            }
        }
        Ok(Self { x, z, coeff })
    }

    pub fn single(q: usize, p: Pauli, coeff: Complex64) -> Self {
        Self::new(&[(q, p)], coeff).expect("qubit index below 128")
    }

    pub fn x_mask(&self) -> u128 {
        self.x
    }

    pub fn z_mask(&self) -> u128 {
        self.z
    }

    pub fn y_mask(&self) -> u128 {
        self.x & self.z
    }

    pub fn support(&self) -> u128 {
        self.x | self.z
    }

    pub fn key(&self) -> (u128, u128) {
        (self.x, self.z)
    }

    pub fn get(&self, q: usize) -> Option<Pauli> {
        let bit = 1u128 << q;
        match (self.x & bit != 0, self.z & bit != 0) {
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
            (false, false) => None,
        }
    }

    pub fn factors(&self) -> Vec<(usize, Pauli)> {
        let mut out = Vec::with_capacity(self.weight());
        let mut s = self.support();
        while s != 0 {
            let q = s.trailing_zeros() as usize;
            out.push((q, self.get(q).unwrap()));
            s &= s - 1;
        }
        out
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    /// One past the highest qubit acted on (0 for the identity).
    pub fn n_qubits(&self) -> usize {
        128 - self.support().leading_zeros() as usize
    }

    pub fn with_coeff(&self, coeff: Complex64) -> Self {
        Self { coeff, ..*self }
    }

    pub fn multiply(&self, other: &PauliString) -> PauliString {
        let (x1, z1, x2, z2) = (self.x, self.z, other.x, other.z);
        let (px1, py1, pz1) = (x1 & !z1, x1 & z1, !x1 & z1);
        let (px2, py2, pz2) = (x2 & !z2, x2 & z2, !x2 & z2);
        // XY = iZ, YZ = iX, ZX = iY and the reversed products carry −i.
        let plus = (px1 & py2) | (py1 & pz2) | (pz1 & px2);
        let minus = (py1 & px2) | (pz1 & py2) | (px1 & pz2);
        let k = plus.count_ones() as i32 - minus.count_ones() as i32;
        PauliString {
            x: x1 ^ x2,
            z: z1 ^ z2,
            coeff: self.coeff * other.coeff * i_pow(k),
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 0
    }

    pub fn adjoint(&self) -> PauliString {
        self.with_coeff(self.coeff.conj())
    }

    /// Action on a computational basis state: P|b⟩ = phase·|b'⟩, coefficient included.
    #[inline]
    pub fn apply_to_basis(&self, b: u128) -> (u128, Complex64) {
        (b ^ self.x, self.coeff * self.basis_phase(b))
    }

    /// i^{#Y}·(−1)^{|b ∧ z|}, without the coefficient.
    #[inline]
    pub fn basis_phase(&self, b: u128) -> Complex64 {
        let k = self.y_mask().count_ones() as i32 + 2 * (b & self.z).count_ones() as i32;
        i_pow(k)
    }

    fn format_factors(&self) -> String {
        if self.is_identity() {
            return "I".to_string();
        }
        self.factors()
            .iter()
            .map(|(q, p)| format!("{}{}", p.symbol(), q))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn format_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", format_coeff(self.coeff), self.format_factors())
    }
}

/// Parses the factor part, e.g. `"X0 Z1 Y5"` or `"I"`, with unit coefficient.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "I" {
                continue;
            }
            let (head, idx) = tok.split_at(1);
            let p = match head {
                "X" => Pauli::X,
                "Y" => Pauli::Y,
                "Z" => Pauli::Z,
                _ => return Err(Error::InvalidExcitation(format!("bad Pauli token `{tok}`"))),
            };
            let q: usize = idx
                .parse()
                .map_err(|_| Error::InvalidExcitation(format!("bad Pauli token `{tok}`")))?;
            factors.push((q, p));
        }
        PauliString::new(&factors, Complex64::new(1.0, 0.0))
    }
}

fn sort_key(p: &PauliString) -> (u128, u128, u128) {
    (p.support(), p.x, p.z)
}

/// A simplified sum of Pauli strings: unique factor maps, sorted, tiny terms dropped.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PauliSum {
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub const DEFAULT_TOLERANCE: f64 = 1e-12;

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity(coeff: f64) -> Self {
        Self::from_terms([PauliString::identity(Complex64::new(coeff, 0.0))])
    }

    pub fn from_terms<I: IntoIterator<Item = PauliString>>(terms: I) -> Self {
        Self::from_terms_with_tolerance(terms, Self::DEFAULT_TOLERANCE)
    }

    pub fn from_terms_with_tolerance<I: IntoIterator<Item = PauliString>>(terms: I, tol: f64) -> Self {
        let mut acc: HashMap<(u128, u128), Complex64> = HashMap::new();
        for t in terms {
            *acc.entry(t.key()).or_default() += t.coeff;
        }
        let mut terms: Vec<PauliString> = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= tol)
            .map(|((x, z), c)| PauliString::from_masks(x, z, c))
            .collect();
        terms.sort_by_key(sort_key);
        Self { terms }
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn simplify(&self, tol: f64) -> Self {
        Self::from_terms_with_tolerance(self.terms.iter().copied(), tol)
    }

    pub fn n_qubits(&self) -> usize {
        self.terms.iter().map(|t| t.n_qubits()).max().unwrap_or(0)
    }

    pub fn support(&self) -> u128 {
        self.terms.iter().fold(0, |s, t| s | t.support())
    }

    /// Coefficient of the identity string.
    pub fn constant(&self) -> Complex64 {
        self.coefficient(0, 0)
    }

    pub fn coefficient(&self, x: u128, z: u128) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.key() == (x, z))
            .map(|t| t.coeff)
            .unwrap_or_default()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| t.with_coeff(t.coeff * c)))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|t| t.adjoint()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coeff.im.abs() <= tol)
    }

    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        (self - other).terms.iter().all(|t| t.coeff.norm() <= tol)
    }

    pub fn multiply(&self, other: &PauliSum) -> Self {
        let mut acc: HashMap<(u128, u128), Complex64> = HashMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let p = a.multiply(b);
                *acc.entry(p.key()).or_default() += p.coeff;
            }
        }
        Self::from_terms(acc.into_iter().map(|((x, z), c)| PauliString::from_masks(x, z, c)))
    }

    /// [a, b] = ab − ba.
    pub fn commutator(&self, other: &PauliSum) -> Self {
        &self.multiply(other) - &other.multiply(self)
    }

    /// True when all terms commute pairwise.
    pub fn terms_commute(&self) -> bool {
        self.terms
            .iter()
            .enumerate()
            .all(|(i, a)| self.terms[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Groups terms by X mask, which is how the simulators apply them.
    pub fn group_by_x(&self) -> Vec<(u128, Vec<(u128, Complex64)>)> {
        let mut groups: Vec<(u128, Vec<(u128, Complex64)>)> = Vec::new();
        let mut index: HashMap<u128, usize> = HashMap::new();
        for t in &self.terms {
            // Fold i^{#Y} into the coefficient so the action is c·(−1)^{|b∧z|}|b⊕x⟩.
            let c = t.coeff * i_pow(t.y_mask().count_ones() as i32);
            let slot = *index.entry(t.x).or_insert_with(|| {
                groups.push((t.x, Vec::new()));
                groups.len() - 1
            });
            groups[slot].1.push((t.z, c));
        }
        groups
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl From<PauliString> for PauliSum {
    fn from(p: PauliString) -> Self {
        PauliSum::from_terms([p])
    }
}

impl Add for &PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: &PauliSum) -> PauliSum {
        PauliSum::from_terms(self.terms.iter().chain(rhs.terms.iter()).copied())
    }
}

impl Sub for &PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: &PauliSum) -> PauliSum {
        PauliSum::from_terms(
            self.terms
                .iter()
                .copied()
                .chain(rhs.terms.iter().map(|t| t.with_coeff(-t.coeff))),
        )
    }
}

impl Mul for &PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: &PauliSum) -> PauliSum {
        self.multiply(rhs)
    }
}

impl Neg for &PauliSum {
    type Output = PauliSum;
    fn neg(self) -> PauliSum {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Add for PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: PauliSum) -> PauliSum {
        &self + &rhs
    }
}

impl Sub for PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: PauliSum) -> PauliSum {
        &self - &rhs
    }
}

impl Mul for PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: PauliSum) -> PauliSum {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn involution() {
        let r = p("X0").multiply(&p("X0"));
        assert!(r.is_identity());
        assert_eq!(r.coeff, c(1.0, 0.0));
    }

    #[test]
    fn xy_is_iz() {
        let r = p("X0").multiply(&p("Y0"));
        assert_eq!(r.key(), p("Z0").key());
        assert_eq!(r.coeff, c(0.0, 1.0));
    }

    #[test]
    fn two_qubit_product() {
        let r = p("X0 Z1").multiply(&p("Y0"));
        assert_eq!(r.key(), p("Z0 Z1").key());
        assert_eq!(r.coeff, c(0.0, 1.0));
    }

    #[test]
    fn repeated_qubit_rejected() {
        assert!(PauliString::new(&[(0, Pauli::X), (0, Pauli::Z)], c(1.0, 0.0)).is_err());
        assert!(PauliString::new(&[(128, Pauli::X)], c(1.0, 0.0)).is_err());
    }

    #[test]
    fn simplification_merges_and_drops() {
        let s = PauliSum::from_terms([
            p("X0").with_coeff(c(0.5, 0.0)),
            p("X0").with_coeff(c(0.5, 0.0)),
            p("Z1").with_coeff(c(1e-14, 0.0)),
        ]);
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms()[0].coeff, c(1.0, 0.0));
    }

    #[test]
    fn commutation() {
        assert!(p("X0 X1").commutes_with(&p("Y0 Y1")));
        assert!(!p("X0").commutes_with(&p("Z0")));
        let a = PauliSum::from(p("X0"));
        let b = PauliSum::from(p("Y0"));
        let comm = a.commutator(&b);
        assert!(comm.approx_eq(&PauliSum::from(p("Z0").with_coeff(c(0.0, 2.0))), 1e-15));
    }

    #[test]
    fn display_roundtrip_of_factors() {
        let s = p("X0 Y3 Z7");
        assert_eq!(s.to_string(), "1 X0 Y3 Z7");
        assert_eq!(s.factors(), vec![(0, Pauli::X), (3, Pauli::Y), (7, Pauli::Z)]);
        assert_eq!(s.n_qubits(), 8);
    }

    #[test]
    fn basis_action() {
        let y = p("Y0");
        assert_eq!(y.apply_to_basis(0), (1, c(0.0, 1.0)));
        assert_eq!(y.apply_to_basis(1), (0, c(0.0, -1.0)));
        let zx = p("Z0 X1");
        assert_eq!(zx.apply_to_basis(0b01), (0b11, c(-1.0, 0.0)));
    }
}
