//! Dense matrices for small systems, built from Kronecker products of 2×2 blocks.
//! Used as an independent reference for the sparse machinery.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::{Pauli, PauliString, PauliSum};

pub type CMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn single_qubit(p: Option<Pauli>) -> CMatrix {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    match p {
        None => CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Some(Pauli::X) => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Some(Pauli::Y) => CMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        Some(Pauli::Z) => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Little-endian: qubit 0 is the least significant tensor factor.
pub fn pauli_string(p: &PauliString, n_qubits: usize) -> CMatrix {
    let mut m = CMatrix::from_element(1, 1, p.coeff);
    for q in (0..n_qubits).rev() {
        m = m.kronecker(&single_qubit(p.get(q)));
    }
    m
}

pub fn pauli_sum(s: &PauliSum, n_qubits: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    let mut m = CMatrix::zeros(dim, dim);
    for t in s.terms() {
        m += pauli_string(t, n_qubits);
    }
    m
}

/// Embeds a 2^k × 2^k operator acting on `qubits` (first listed = least significant).
pub fn embed(op: &CMatrix, qubits: &[usize], n_qubits: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    let k = qubits.len();
    assert_eq!(op.nrows(), 1 << k);
    let mut out = CMatrix::zeros(dim, dim);
    let mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
    let local = |b: usize| -> usize {
        qubits
            .iter()
            .enumerate()
            .map(|(i, &q)| ((b >> q) & 1) << i)
            .sum()
    };
    for col in 0..dim {
        let lc = local(col);
        let rest = col & !mask;
        for lr in 0..(1usize << k) {
            let v = op[(lr, lc)];
            if v == c(0.0, 0.0) {
                continue;
            }
            let row = rest
                | qubits
                    .iter()
                    .enumerate()
                    .map(|(i, &q)| ((lr >> i) & 1) << q)
                    .sum::<usize>();
            out[(row, col)] += v;
        }
    }
    out
}

/// exp(−iθ/2·G) for Hermitian G via eigendecomposition.
pub fn expm_hermitian(g: &CMatrix, theta: f64) -> CMatrix {
    let eig = g.clone().symmetric_eigen();
    let n = g.nrows();
    let mut d = CMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = Complex64::from_polar(1.0, -0.5 * theta * eig.eigenvalues[i]);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Distance between two matrices after removing the best global phase.
pub fn distance_up_to_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    (a * phase - b).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn identity(n_qubits: usize) -> CMatrix {
    CMatrix::identity(1 << n_qubits, 1 << n_qubits)
}
