#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64;
use pairvqe::circuit::{Circuit, Gate, GateKind};
use pairvqe::dense::{self, CMatrix};
use pairvqe::molecule::{load_fixture, MolecularSystem};
use pairvqe::pauli::{Pauli, PauliString};
use pairvqe::sim::Statevector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

pub fn fixture(rel: &str) -> MolecularSystem {
    load_fixture(fixture_path(rel)).unwrap().0
}

pub fn all_fixtures() -> Vec<PathBuf> {
    let root = fixture_path("");
    let mut out = Vec::new();
    for dir in std::fs::read_dir(&root).unwrap() {
        let dir = dir.unwrap().path();
        if !dir.is_dir() {
            continue;
        }
        for f in std::fs::read_dir(&dir).unwrap() {
            let f = f.unwrap().path();
            if f.extension().is_some_and(|e| e == "fcidump") {
                out.push(f);
            }
        }
    }
    out.sort();
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_params(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense matrix of one gate built from its textbook definition.
pub fn dense_gate(g: &Gate, params: &[f64], n: usize) -> CMatrix {
    let theta = g.angle.map(|a| a.value(params)).unwrap_or(0.0);
    let (s, co) = (0.5 * theta).sin_cos();
    let ry = CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]);
    match &g.kind {
        GateKind::X => dense::embed(&dense::single_qubit(Some(Pauli::X)), &g.qubits, n),
        GateKind::H => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let m = CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]);
            dense::embed(&m, &g.qubits, n)
        }
        GateKind::Ry => dense::embed(&ry, &g.qubits, n),
        GateKind::Rz => {
            let m = CMatrix::from_row_slice(
                2,
                2,
                &[Complex64::from_polar(1.0, -0.5 * theta), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, 0.5 * theta)],
            );
            dense::embed(&m, &g.qubits, n)
        }
        GateKind::Cnot | GateKind::Cry => {
            // local basis index = bit0 control + 2·bit1 target
            let mut m = CMatrix::identity(4, 4);
            let u = if matches!(g.kind, GateKind::Cnot) { dense::single_qubit(Some(Pauli::X)) } else { ry };
            for (i, oi) in [1usize, 3].iter().enumerate() {
                for (j, oj) in [1usize, 3].iter().enumerate() {
                    m[(*oi, *oj)] = u[(i, j)];
                }
            }
            dense::embed(&m, &g.qubits, n)
        }
        GateKind::PauliRotation(p) => {
            let gm = dense::pauli_string(p, n);
            dense::expm_hermitian(&gm, theta)
        }
        GateKind::Excitation(e) => dense::expm_hermitian(&dense::pauli_sum(&e.generator, n), theta),
    }
}

/// Product of dense gates in circuit order.
pub fn dense_unitary(circuit: &Circuit, params: &[f64]) -> CMatrix {
    let n = circuit.n_qubits;
    let mut u = dense::identity(n);
    for g in &circuit.gates {
        u = dense_gate(g, params, n) * u;
    }
    u
}

/// Unitary realised by the statevector simulator, column by column.
pub fn simulated_unitary(circuit: &Circuit, params: &[f64]) -> CMatrix {
    let n = circuit.n_qubits;
    let dim = 1 << n;
    let mut u = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        let mut psi = Statevector::basis(n, b).unwrap();
        psi.apply_circuit(circuit, params).unwrap();
        for (i, a) in psi.amplitudes().iter().enumerate() {
            u[(i, b)] = *a;
        }
    }
    u
}

/// 1 − |⟨a|b⟩| for normalized states.
pub fn state_distance(a: &Statevector, b: &Statevector) -> f64 {
    1.0 - a.inner(b).unwrap().norm()
}

pub fn max_abs_diff_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 1e-300 { overlap / overlap.norm() } else { c(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}

pub fn ps(s: &str) -> PauliString {
    s.parse().unwrap()
}
