use std::io::{Read, Write};

use num_complex::Complex64;

use crate::circuit::{Circuit, Excitation, Gate, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

/// Largest register [`simulate`] allocates unless told otherwise.
pub const DEFAULT_MAX_QUBITS: usize = 28;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense state; amplitude index bit q is qubit q.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_cap(n_qubits: usize, cap: usize) -> Result<()> {
    if n_qubits > cap {
        return Err(Error::SizeCap(format!("{n_qubits} qubits exceeds the limit of {cap}")));
    }
    Ok(())
}

impl Statevector {
    /// |0…0⟩.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_cap(n_qubits, DEFAULT_MAX_QUBITS)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, limit: dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Wraps amplitudes whose length is a power of two. No normalization is applied.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::Simulation(format!("length {} is not a power of two", amps.len())));
        }
        Ok(Self { n_qubits: amps.len().trailing_zeros() as usize, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Sum of |amplitude|² over basis states with `mask` bits equal to `value`.
    pub fn probability(&self, mask: usize, value: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b & mask == value & mask)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn check_qubits(&self, g: &Gate) -> Result<()> {
        match g.qubits.iter().find(|&&q| q >= self.n_qubits) {
            Some(&q) => Err(Error::IndexOutOfRange { index: q, limit: self.n_qubits }),
            None => Ok(()),
        }
    }

    pub fn apply_gate(&mut self, g: &Gate, params: &[f64]) -> Result<()> {
        self.check_qubits(g)?;
        let theta = match g.angle {
            Some(a) => {
                if let Some(i) = a.param_index() {
                    if i >= params.len() {
                        return Err(Error::IndexOutOfRange { index: i, limit: params.len() });
                    }
                }
                a.value(params)
            }
            None => 0.0,
        };
        match &g.kind {
            GateKind::X => self.apply_x(g.qubits[0]),
            GateKind::H => self.apply_h(g.qubits[0]),
            GateKind::Ry => self.apply_ry(g.qubits[0], theta, None),
            GateKind::Rz => self.apply_rz(g.qubits[0], theta),
            GateKind::Cnot => self.apply_cnot(g.qubits[0], g.qubits[1]),
            GateKind::Cry => self.apply_ry(g.qubits[1], theta, Some(g.qubits[0])),
            GateKind::PauliRotation(p) => self.apply_pauli_rotation(p, theta),
            GateKind::Excitation(e) => self.apply_excitation(e, theta),
        }
        Ok(())
    }

    /// Applies every gate of `c`; `params` follow `c.parameters`.
    pub fn apply_circuit(&mut self, c: &Circuit, params: &[f64]) -> Result<()> {
        check_params(c, params)?;
        if c.n_qubits > self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: c.n_qubits });
        }
        for g in &c.gates {
            self.apply_gate(g, params)?;
        }
        Ok(())
    }

    pub fn apply_x(&mut self, q: usize) {
        let m = 1usize << q;
        for b in 0..self.amps.len() {
            if b & m == 0 {
                self.amps.swap(b, b | m);
            }
        }
    }

    pub fn apply_h(&mut self, q: usize) {
        let m = 1usize << q;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for b in 0..self.amps.len() {
            if b & m == 0 {
                let (a0, a1) = (self.amps[b], self.amps[b | m]);
                self.amps[b] = (a0 + a1) * s;
                self.amps[b | m] = (a0 - a1) * s;
            }
        }
    }

    /// Ry(θ) = exp(−iθ/2·Y) on `q`, only where `control` (if any) is set.
    pub fn apply_ry(&mut self, q: usize, theta: f64, control: Option<usize>) {
        let m = 1usize << q;
        let cm = control.map_or(0, |c| 1usize << c);
        let (s, c) = (0.5 * theta).sin_cos();
        for b in 0..self.amps.len() {
            if b & m == 0 && b & cm == cm {
                let (a0, a1) = (self.amps[b], self.amps[b | m]);
                self.amps[b] = a0 * c - a1 * s;
                self.amps[b | m] = a0 * s + a1 * c;
            }
        }
    }

    /// Rz(θ) = exp(−iθ/2·Z).
    pub fn apply_rz(&mut self, q: usize, theta: f64) {
        let m = 1usize << q;
        let p0 = Complex64::from_polar(1.0, -0.5 * theta);
        let p1 = p0.conj();
        for (b, a) in self.amps.iter_mut().enumerate() {
            *a *= if b & m == 0 { p0 } else { p1 };
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let cm = 1usize << control;
        let tm = 1usize << target;
        for b in 0..self.amps.len() {
            if b & cm != 0 && b & tm == 0 {
                self.amps.swap(b, b | tm);
            }
        }
    }

    /// exp(−iθ/2·P) for the Pauli string P including its (real) coefficient.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, theta: f64) {
        let phi = theta * p.coeff.re;
        let (s, c) = (0.5 * phi).sin_cos();
        let unit = p.with_coeff(ONE);
        let x = unit.x_mask() as usize;
        let old = self.amps.clone();
        for (b, a) in old.iter().enumerate() {
            let ph = unit.basis_phase(b as u128);
            self.amps[b] += a * (c - 1.0);
            self.amps[b ^ x] += a * ph * Complex64::new(0.0, -s);
        }
    }

    /// exp(−iθ/2·G) for a generator with G³ = G.
    pub fn apply_excitation(&mut self, e: &Excitation, theta: f64) {
        let groups = e.generator.group_by_x();
        if let [(x, terms)] = groups.as_slice() {
            if *x != 0 {
                self.apply_single_flip(*x as usize, terms, theta);
                return;
            }
        }
        let g1 = self.apply_pauli_sum(&e.generator);
        let g2 = g1.apply_pauli_sum(&e.generator);
        let (s, c) = (0.5 * theta).sin_cos();
        let mis = Complex64::new(0.0, -s);
        for ((a, b1), b2) in self.amps.iter_mut().zip(&g1.amps).zip(&g2.amps) {
            *a += mis * b1 + (c - 1.0) * b2;
        }
    }

    /// Every string flips the same bits x, so G couples b with b ^ x only and each
    /// 2×2 block is exponentiated exactly.
    fn apply_single_flip(&mut self, x: usize, terms: &[(u128, Complex64)], theta: f64) {
        let low = x & x.wrapping_neg();
        let value = |b: usize| -> Complex64 {
            terms
                .iter()
                .map(|&(z, c)| if (b as u128 & z).count_ones() % 2 == 0 { c } else { -c })
                .sum()
        };
        for b in 0..self.amps.len() {
            if b & low != 0 {
                continue;
            }
            let b2 = b ^ x;
            let g_fwd = value(b); // ⟨b2|G|b⟩
            let r = g_fwd.norm();
            if r < 1e-14 {
                continue;
            }
            let g_back = value(b2); // ⟨b|G|b2⟩
            let (s, c) = (0.5 * theta * r).sin_cos();
            let k = Complex64::new(0.0, -s / r);
            let (a, a2) = (self.amps[b], self.amps[b2]);
            self.amps[b] = a * c + k * g_back * a2;
            self.amps[b2] = a2 * c + k * g_fwd * a;
        }
    }

    /// op|ψ⟩ without normalization.
    pub fn apply_pauli_sum(&self, op: &PauliSum) -> Statevector {
        let mut out = vec![ZERO; self.amps.len()];
        for (x, terms) in op.group_by_x() {
            let x = x as usize;
            for (b, a) in self.amps.iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                let f: Complex64 = terms
                    .iter()
                    .map(|&(z, c)| if (b as u128 & z).count_ones() % 2 == 0 { c } else { -c })
                    .sum();
                out[b ^ x] += f * a;
            }
        }
        Statevector { n_qubits: self.n_qubits, amps: out }
    }

    /// Raw dump: 2^n records of (re, im) as little-endian f64.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = Vec::with_capacity(16 * self.amps.len());
        for a in &self.amps {
            buf.extend_from_slice(&a.re.to_le_bytes());
            buf.extend_from_slice(&a.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() % 16 != 0 {
            return Err(Error::Simulation("dump length is not a multiple of 16 bytes".into()));
        }
        let amps = buf
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        Self::from_amplitudes(amps)
    }
}

pub(crate) fn check_params(c: &Circuit, params: &[f64]) -> Result<()> {
    if params.len() < c.parameters.len() {
        return Err(Error::UnassignedParameter(c.parameters[params.len()].clone()));
    }
    if params.len() > c.parameters.len() {
        return Err(Error::DimensionMismatch { expected: c.parameters.len(), got: params.len() });
    }
    if let Some(i) = params.iter().position(|p| !p.is_finite()) {
        return Err(Error::Simulation(format!("parameter `{}` is not finite", c.parameters[i])));
    }
    Ok(())
}

/// Runs `c` on |0…0⟩.
pub fn simulate(c: &Circuit, params: &[f64]) -> Result<Statevector> {
    simulate_with_cap(c, params, DEFAULT_MAX_QUBITS)
}

pub fn simulate_with_cap(c: &Circuit, params: &[f64], max_qubits: usize) -> Result<Statevector> {
    check_cap(c.n_qubits, max_qubits)?;
    check_params(c, params)?;
    let mut psi = Statevector::zero(c.n_qubits)?;
    psi.apply_circuit(c, params)?;
    Ok(psi)
}

/// |⟨a|b⟩|².
pub fn fidelity(a: &Statevector, b: &Statevector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}
