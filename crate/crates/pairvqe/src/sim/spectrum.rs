use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Statevector;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

pub const MAX_SPECTRUM_QUBITS: usize = 16;
pub const MAX_SECTOR_DIMENSION: usize = 5000;

/// Eigenpairs of a qubit operator, optionally restricted to fixed Hamming weight.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub sector: Option<usize>,
    pub n_qubits: usize,
    basis: Vec<usize>,
    /// Columns follow `eigenvalues`.
    vectors: Option<DMatrix<Complex64>>,
}

impl SpectrumResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn has_vectors(&self) -> bool {
        self.vectors.is_some()
    }

    /// The k-th eigenvector on the full register.
    pub fn eigenvector(&self, k: usize) -> Option<Statevector> {
        let v = self.vectors.as_ref()?;
        if k >= v.ncols() {
            return None;
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n_qubits];
        for (i, &b) in self.basis.iter().enumerate() {
            amps[b] = v[(i, k)];
        }
        Statevector::from_amplitudes(amps).ok()
    }
}

/// Dense diagonalization of `h` on `n_qubits`, restricted to basis states with
/// `n_particles` set bits when given.
pub fn exact_spectrum(
    h: &PauliSum,
    n_qubits: usize,
    n_particles: Option<usize>,
    with_vectors: bool,
) -> Result<SpectrumResult> {
    if n_qubits > MAX_SPECTRUM_QUBITS {
        return Err(Error::SizeCap(format!("{n_qubits} qubits exceeds the dense limit of {MAX_SPECTRUM_QUBITS}")));
    }
    if h.n_qubits() > n_qubits {
        return Err(Error::DimensionMismatch { expected: n_qubits, got: h.n_qubits() });
    }
    let basis: Vec<usize> = (0..1usize << n_qubits)
        .filter(|b| n_particles.is_none_or(|n| b.count_ones() as usize == n))
        .collect();
    let dim = basis.len();
    if dim > MAX_SECTOR_DIMENSION {
        return Err(Error::SizeCap(format!("sector dimension {dim} exceeds {MAX_SECTOR_DIMENSION}")));
    }
    if dim == 0 {
        return Err(Error::Simulation("empty particle-number sector".into()));
    }
    let index: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (x, terms) in h.group_by_x() {
        let x = x as usize;
        for (j, &b) in basis.iter().enumerate() {
            let Some(&i) = index.get(&(b ^ x)) else { continue };
            let f: Complex64 = terms
                .iter()
                .map(|&(z, c)| if (b as u128 & z).count_ones() % 2 == 0 { c } else { -c })
                .sum();
            m[(i, j)] += f;
        }
    }
    let real = m.iter().all(|v| v.im.abs() < 1e-14);
    let (values, vectors): (Vec<f64>, Option<DMatrix<Complex64>>) = if real {
        let eig = m.map(|v| v.re).symmetric_eigen();
        let vecs = with_vectors.then(|| eig.eigenvectors.map(|v| Complex64::new(v, 0.0)));
        (eig.eigenvalues.iter().copied().collect(), vecs)
    } else {
        let eig = m.symmetric_eigen();
        let vecs = with_vectors.then(|| eig.eigenvectors.clone());
        (eig.eigenvalues.iter().copied().collect(), vecs)
    };
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let eigenvalues = order.iter().map(|&k| values[k]).collect();
    let vectors = vectors.map(|v| DMatrix::from_fn(dim, dim, |i, k| v[(i, order[k])]));
    Ok(SpectrumResult { eigenvalues, sector: n_particles, n_qubits, basis, vectors })
}
