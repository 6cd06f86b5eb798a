use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use super::Statevector;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Work (terms × amplitudes) below which expectation values stay on one thread.
const PARALLEL_THRESHOLD: usize = 1 << 16;

struct Group {
    x: usize,
    terms: Vec<(u128, Complex64)>,
}

/// A Hermitian operator prepared for repeated expectation values.
///
/// Strings sharing an X pattern are evaluated together; H² for variances is built
/// on first use and kept.
pub struct Observable {
    op: PauliSum,
    groups: Vec<Group>,
    square: OnceLock<Box<Observable>>,
}

impl Observable {
    pub fn new(op: PauliSum) -> Self {
        let groups = op
            .group_by_x()
            .into_iter()
            .map(|(x, terms)| Group { x: x as usize, terms })
            .collect();
        Self { op, groups, square: OnceLock::new() }
    }

    pub fn op(&self) -> &PauliSum {
        &self.op
    }

    pub fn n_qubits(&self) -> usize {
        self.op.n_qubits()
    }

    fn check(&self, psi: &Statevector) -> Result<()> {
        if self.op.n_qubits() > psi.n_qubits() {
            return Err(Error::DimensionMismatch { expected: self.op.n_qubits(), got: psi.n_qubits() });
        }
        Ok(())
    }

    /// ⟨ψ|H|ψ⟩ (real part).
    pub fn expectation(&self, psi: &Statevector) -> Result<f64> {
        self.check(psi)?;
        let amps = psi.amplitudes();
        let support: Vec<usize> = (0..amps.len()).filter(|&b| amps[b] != Complex64::new(0.0, 0.0)).collect();
        let group_value = |g: &Group| -> f64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for &b in &support {
                let f: Complex64 = g
                    .terms
                    .iter()
                    .map(|&(z, c)| if (b as u128 & z).count_ones() % 2 == 0 { c } else { -c })
                    .sum();
                acc += amps[b ^ g.x].conj() * f * amps[b];
            }
            acc.re
        };
        let work = support.len() * self.op.len();
        let parts: Vec<f64> = if work >= PARALLEL_THRESHOLD {
            self.groups.par_iter().map(group_value).collect()
        } else {
            self.groups.iter().map(group_value).collect()
        };
        Ok(parts.iter().sum())
    }

    /// H|ψ⟩.
    pub fn apply(&self, psi: &Statevector) -> Result<Statevector> {
        self.check(psi)?;
        Ok(psi.apply_pauli_sum(&self.op))
    }

    pub fn square(&self) -> &Observable {
        self.square.get_or_init(|| Box::new(Observable::new(self.op.multiply(&self.op))))
    }

    /// |⟨H²⟩ − ⟨H⟩²|.
    pub fn variance(&self, psi: &Statevector) -> Result<f64> {
        let e = self.expectation(psi)?;
        let e2 = self.square().expectation(psi)?;
        Ok((e2 - e * e).abs())
    }
}

pub fn expectation(psi: &Statevector, h: &PauliSum) -> Result<f64> {
    Observable::new(h.clone()).expectation(psi)
}

pub fn variance(psi: &Statevector, h: &PauliSum) -> Result<f64> {
    Observable::new(h.clone()).variance(psi)
}
