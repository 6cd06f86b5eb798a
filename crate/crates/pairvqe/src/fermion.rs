//! Fermionic ladder operators, the Jordan-Wigner map and excitation generators.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ladder {
    Create,
    Annihilate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FermionTerm {
    pub ops: Vec<(usize, Ladder)>,
    pub coeff: Complex64,
}

/// A sum of products of ladder operators. Products are kept as written; no normal ordering.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FermionOperator {
    pub products: Vec<FermionTerm>,
}

impl FermionOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn term(ops: Vec<(usize, Ladder)>, coeff: Complex64) -> Self {
        Self { products: vec![FermionTerm { ops, coeff }] }
    }

    pub fn creation(p: usize) -> Self {
        Self::term(vec![(p, Ladder::Create)], Complex64::new(1.0, 0.0))
    }

    pub fn annihilation(p: usize) -> Self {
        Self::term(vec![(p, Ladder::Annihilate)], Complex64::new(1.0, 0.0))
    }

    pub fn number(p: usize) -> Self {
        Self::creation(p).multiply(&Self::annihilation(p))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut products = self.products.clone();
        products.extend(other.products.iter().cloned());
        Self { products }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            products: self
                .products
                .iter()
                .map(|t| FermionTerm { ops: t.ops.clone(), coeff: t.coeff * c })
                .collect(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut products = Vec::with_capacity(self.products.len() * other.products.len());
        for a in &self.products {
            for b in &other.products {
                let mut ops = a.ops.clone();
                ops.extend_from_slice(&b.ops);
                products.push(FermionTerm { ops, coeff: a.coeff * b.coeff });
            }
        }
        Self { products }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            products: self
                .products
                .iter()
                .map(|t| FermionTerm {
                    ops: t
                        .ops
                        .iter()
                        .rev()
                        .map(|&(p, l)| {
                            let l = match l {
                                Ladder::Create => Ladder::Annihilate,
                                Ladder::Annihilate => Ladder::Create,
                            };
                            (p, l)
                        })
                        .collect(),
                    coeff: t.coeff.conj(),
                })
                .collect(),
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.products.iter().flat_map(|t| t.ops.iter().map(|o| o.0)).max()
    }
}

/// Qubit image of a single ladder operator: a†_p = ½(X_p − iY_p)∏_{k<p} Z_k.
pub fn jw_ladder(p: usize, ladder: Ladder) -> PauliSum {
    let zmask: u128 = if p == 0 { 0 } else { (1u128 << p) - 1 };
    let bit = 1u128 << p;
    let sign = match ladder {
        Ladder::Create => -1.0,
        Ladder::Annihilate => 1.0,
    };
    PauliSum::from_terms([
        PauliString::from_masks(bit, zmask, Complex64::new(0.5, 0.0)),
        PauliString::from_masks(bit, zmask | bit, Complex64::new(0.0, 0.5 * sign)),
    ])
}

pub fn jordan_wigner(op: &FermionOperator, n_spin_orbitals: usize) -> Result<PauliSum> {
    let limit = n_spin_orbitals.min(MAX_QUBITS);
    if let Some(m) = op.max_index() {
        if m >= limit {
            return Err(Error::IndexOutOfRange { index: m, limit });
        }
    }
    let mut acc: Vec<PauliString> = Vec::new();
    for t in &op.products {
        let mut prod = PauliSum::from_terms([PauliString::identity(t.coeff)]);
        for &(p, l) in &t.ops {
            prod = prod.multiply(&jw_ladder(p, l));
        }
        acc.extend_from_slice(prod.terms());
    }
    Ok(PauliSum::from_terms(acc))
}

/// i(∏_k a†_{p_k} a_{q_k} − h.c.), the products taken in the listed order.
pub fn excitation_generator(creators: &[usize], annihilators: &[usize]) -> Result<FermionOperator> {
    if creators.is_empty() || creators.len() != annihilators.len() {
        return Err(Error::InvalidExcitation(format!(
            "need equal, non-zero numbers of creators and annihilators (got {} and {})",
            creators.len(),
            annihilators.len()
        )));
    }
    if let Some(p) = creators.iter().find(|p| annihilators.contains(p)) {
        return Err(Error::InvalidExcitation(format!("orbital {p} both created and annihilated")));
    }
    let mut seen = creators.to_vec();
    seen.extend_from_slice(annihilators);
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidExcitation("repeated orbital index".into()));
    }
    let ops = creators
        .iter()
        .zip(annihilators)
        .flat_map(|(&p, &q)| [(p, Ladder::Create), (q, Ladder::Annihilate)])
        .collect();
    let fwd = FermionOperator::term(ops, Complex64::new(1.0, 0.0));
    let diff = fwd.add(&fwd.adjoint().scale(Complex64::new(-1.0, 0.0)));
    Ok(diff.scale(Complex64::new(0.0, 1.0)))
}

/// 1 − ∏ n_p(1 − n_q) − ∏ n_q(1 − n_p): projector onto states the generator annihilates.
pub fn nullspace_projector(creators: &[usize], annihilators: &[usize]) -> FermionOperator {
    let one = Complex64::new(1.0, 0.0);
    let side = |occ: &[usize], emp: &[usize]| {
        let mut prod = FermionOperator::scalar(one);
        for (&p, &q) in occ.iter().zip(emp) {
            let np = FermionOperator::term(vec![(p, Ladder::Create), (p, Ladder::Annihilate)], one);
            let hq = FermionOperator::term(vec![(q, Ladder::Annihilate), (q, Ladder::Create)], one);
            prod = prod.multiply(&np).multiply(&hq);
        }
        prod
    };
    FermionOperator::scalar(one)
        .add(&side(creators, annihilators).scale(-one))
        .add(&side(annihilators, creators).scale(-one))
}

/// How spatial orbital p and spin map to a qubit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinLayout {
    /// p↑ → 2p, p↓ → 2p+1.
    #[default]
    Interleaved,
    /// p↑ → p, p↓ → p + N_o.
    Blocked,
}

impl SpinLayout {
    pub fn up(self, p: usize, n_orbitals: usize) -> usize {
        match self {
            SpinLayout::Interleaved => 2 * p,
            SpinLayout::Blocked => {
                let _ = n_orbitals;
                p
            }
        }
    }

    pub fn down(self, p: usize, n_orbitals: usize) -> usize {
        match self {
            SpinLayout::Interleaved => 2 * p + 1,
            SpinLayout::Blocked => p + n_orbitals,
        }
    }

    pub fn spin_orbital(self, p: usize, down: bool, n_orbitals: usize) -> usize {
        if down {
            self.down(p, n_orbitals)
        } else {
            self.up(p, n_orbitals)
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpinLayout::Interleaved => "interleaved",
            SpinLayout::Blocked => "blocked",
        }
    }
}

impl std::str::FromStr for SpinLayout {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interleaved" => Ok(SpinLayout::Interleaved),
            "blocked" => Ok(SpinLayout::Blocked),
            _ => Err(Error::InvalidAnsatz(format!("unknown spin layout `{s}`"))),
        }
    }
}

/// JW image of the paired double moving a pair from spatial orbital q to p.
pub fn paired_generator_jw(p: usize, q: usize, n_orbitals: usize, layout: SpinLayout) -> Result<PauliSum> {
    if p == q {
        return Err(Error::InvalidExcitation(format!("paired excitation needs p ≠ q (got {p})")));
    }
    if p.max(q) >= n_orbitals {
        return Err(Error::IndexOutOfRange { index: p.max(q), limit: n_orbitals });
    }
    let creators = [layout.up(p, n_orbitals), layout.down(p, n_orbitals)];
    let annihilators = [layout.up(q, n_orbitals), layout.down(q, n_orbitals)];
    let g = excitation_generator(&creators, &annihilators)?;
    jordan_wigner(&g, 2 * n_orbitals)
}

/// i(σ⁺_p σ⁻_q − h.c.) = ½(Y_p X_q − X_p Y_q).
pub fn paired_generator_hcb(p: usize, q: usize) -> Result<PauliSum> {
    if p == q {
        return Err(Error::InvalidExcitation(format!("paired excitation needs p ≠ q (got {p})")));
    }
    if p.max(q) >= MAX_QUBITS {
        return Err(Error::IndexOutOfRange { index: p.max(q), limit: MAX_QUBITS });
    }
    let half = Complex64::new(0.5, 0.0);
    Ok(PauliSum::from_terms([
        PauliString::new(&[(p, Pauli::Y), (q, Pauli::X)], half)?,
        PauliString::new(&[(p, Pauli::X), (q, Pauli::Y)], -half)?,
    ]))
}

/// JW image of the single excitation q → p on spin orbitals.
pub fn single_generator_jw(p: usize, q: usize, n_spin_orbitals: usize) -> Result<PauliSum> {
    jordan_wigner(&excitation_generator(&[p], &[q])?, n_spin_orbitals)
}

/// The single q → p with its Z string removed: ½(Y_p X_q − X_p Y_q).
pub fn approximate_single_generator(p: usize, q: usize) -> Result<PauliSum> {
    paired_generator_hcb(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn creation_on_qubit_zero() {
        let a = jordan_wigner(&FermionOperator::creation(0), 1).unwrap();
        let expected = PauliSum::from_terms([
            "X0".parse::<PauliString>().unwrap().with_coeff(c(0.5, 0.0)),
            "Y0".parse::<PauliString>().unwrap().with_coeff(c(0.0, -0.5)),
        ]);
        assert!(a.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn creation_carries_z_string() {
        let a = jordan_wigner(&FermionOperator::creation(2), 3).unwrap();
        for t in a.terms() {
            assert_eq!(t.get(0), Some(Pauli::Z));
            assert_eq!(t.get(1), Some(Pauli::Z));
        }
        // σ⁺ = |1⟩⟨0| on qubit 2
        let m = dense::pauli_sum(&a, 3);
        assert!((m[(0b100, 0b000)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((m[(0b111, 0b011)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((m[(0b110, 0b010)] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn number_operator() {
        let n = jordan_wigner(&FermionOperator::number(0), 1).unwrap();
        let expected = PauliSum::from_terms([
            PauliString::identity(c(0.5, 0.0)),
            "Z0".parse::<PauliString>().unwrap().with_coeff(c(-0.5, 0.0)),
        ]);
        assert!(n.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            jordan_wigner(&FermionOperator::creation(4), 4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn generator_shapes() {
        let g = excitation_generator(&[1], &[0]).unwrap();
        assert_eq!(g.products.len(), 2);
        assert_eq!(g.products[0].ops, vec![(1, Ladder::Create), (0, Ladder::Annihilate)]);
        assert_eq!(g.products[0].coeff, c(0.0, 1.0));
        assert_eq!(g.products[1].ops, vec![(0, Ladder::Create), (1, Ladder::Annihilate)]);
        assert_eq!(g.products[1].coeff, c(0.0, -1.0));
        let d = excitation_generator(&[2, 3], &[0, 1]).unwrap();
        assert_eq!(d.products[0].ops.len(), 4);
        assert!(excitation_generator(&[0], &[0]).is_err());
        assert!(excitation_generator(&[0, 1], &[2]).is_err());
    }

    #[test]
    fn paired_jw_is_eight_weight_four_strings() {
        let g = paired_generator_jw(0, 1, 2, SpinLayout::Interleaved).unwrap();
        assert_eq!(g.len(), 8);
        for t in g.terms() {
            assert_eq!(t.weight(), 4);
            assert!((t.coeff.norm() - 0.125).abs() < 1e-15);
            assert_eq!(t.coeff.im, 0.0);
        }
        assert!(g.approx_eq(&g.adjoint(), 1e-15));
    }

    #[test]
    fn blocked_layout_keeps_z_strings_for_distant_pairs() {
        let g = paired_generator_jw(0, 2, 3, SpinLayout::Blocked).unwrap();
        assert!(g.terms().iter().any(|t| t.weight() > 4));
        let near = paired_generator_jw(0, 1, 2, SpinLayout::Blocked).unwrap();
        assert!(near.terms().iter().all(|t| t.weight() == 4));
    }

    #[test]
    fn hcb_generator_matrix() {
        let g = paired_generator_hcb(0, 1).unwrap();
        let m = dense::pauli_sum(&g, 2);
        // G|from=1 (qubit 1)⟩ = i|to=1 (qubit 0)⟩
        assert!((m[(0b01, 0b10)] - c(0.0, 1.0)).norm() < 1e-15);
        assert!((m[(0b10, 0b01)] - c(0.0, -1.0)).norm() < 1e-15);
        let eig = m.clone().symmetric_eigen();
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in ev.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(m.column(0).iter().all(|v| v.norm() < 1e-15));
        assert!(paired_generator_hcb(3, 3).is_err());
    }

    #[test]
    fn hcb_quarter_turn_moves_the_pair() {
        let g = dense::pauli_sum(&paired_generator_hcb(0, 1).unwrap(), 2);
        let u = dense::expm_hermitian(&g, std::f64::consts::PI);
        // |0_p 1_q⟩ (basis index 0b10) → |1_p 0_q⟩ with phase +1
        assert!((u[(0b01, 0b10)] - c(1.0, 0.0)).norm() < 1e-12);
    }
}
