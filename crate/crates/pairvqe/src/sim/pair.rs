use num_complex::Complex64;

use super::statevector::{check_params, DEFAULT_MAX_QUBITS};
use super::Statevector;
use crate::circuit::{Circuit, Encoding, ExcitationKind, GateKind};
use crate::error::{Error, Result};
use crate::fermion::SpinLayout;
use crate::molecule::PairSets;
use crate::pauli::{PauliString, PauliSum};

/// Which register a pair state is read on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRegister {
    /// One qubit per orbital, set when the orbital holds the pair.
    Hcb,
    /// Both spin qubits of the orbital set.
    Jw(SpinLayout),
}

/// Product of one-pair states: pair k has amplitude `amplitudes[k][l]` on orbital `pairs.sets[k][l]`.
/// Orbitals outside every set are empty.
#[derive(Clone, Debug, PartialEq)]
pub struct PairWavefunction {
    pub pairs: PairSets,
    pub amplitudes: Vec<Vec<Complex64>>,
    pub register: PairRegister,
}

impl PairWavefunction {
    pub fn n_qubits(&self) -> usize {
        match self.register {
            PairRegister::Hcb => self.pairs.n_orbitals,
            PairRegister::Jw(_) => 2 * self.pairs.n_orbitals,
        }
    }

    pub fn n_amplitudes(&self) -> usize {
        self.amplitudes.iter().map(Vec::len).sum()
    }

    /// Qubit mask of orbital p doubly occupied.
    fn occupation(&self, p: usize) -> u128 {
        let n = self.pairs.n_orbitals;
        match self.register {
            PairRegister::Hcb => 1u128 << p,
            PairRegister::Jw(l) => (1u128 << l.up(p, n)) | (1u128 << l.down(p, n)),
        }
    }

    fn pair_mask(&self, k: usize) -> u128 {
        self.pairs.sets[k].iter().fold(0, |m, &p| m | self.occupation(p))
    }

    /// ⟨ψ_k|P|ψ_k⟩ for P restricted to pair k.
    fn pair_value(&self, k: usize, p: &PauliString) -> Complex64 {
        let configs: Vec<u128> = self.pairs.sets[k].iter().map(|&o| self.occupation(o)).collect();
        let amps = &self.amplitudes[k];
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, &b) in configs.iter().enumerate() {
            let (b2, ph) = p.apply_to_basis(b);
            if let Some(m) = configs.iter().position(|&c| c == b2) {
                acc += amps[m].conj() * ph * amps[l];
            }
        }
        acc
    }

    /// ⟨Ψ|H|Ψ⟩ evaluated string by string from per-pair factors.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        if h.n_qubits() > self.n_qubits() {
            return Err(Error::DimensionMismatch { expected: self.n_qubits(), got: h.n_qubits() });
        }
        let masks: Vec<u128> = (0..self.amplitudes.len()).map(|k| self.pair_mask(k)).collect();
        let covered = masks.iter().fold(0u128, |a, m| a | m);
        let mut total = Complex64::new(0.0, 0.0);
        for t in h.terms() {
            // empty qubits: X or Y gives zero, Z gives one
            if t.x_mask() & !covered != 0 {
                continue;
            }
            let mut v = t.coeff;
            for (k, &m) in masks.iter().enumerate() {
                if t.support() & m == 0 {
                    continue;
                }
                let part = PauliString::from_masks(t.x_mask() & m, t.z_mask() & m, Complex64::new(1.0, 0.0));
                v *= self.pair_value(k, &part);
                if v == Complex64::new(0.0, 0.0) {
                    break;
                }
            }
            total += v;
        }
        Ok(total.re)
    }

    /// Expands to a dense state (capped at the simulator's qubit limit).
    pub fn embed(&self) -> Result<Statevector> {
        let n = self.n_qubits();
        if n > DEFAULT_MAX_QUBITS {
            return Err(Error::SizeCap(format!("{n} qubits exceeds the limit of {DEFAULT_MAX_QUBITS}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        let mut entries: Vec<(u128, Complex64)> = vec![(0, Complex64::new(1.0, 0.0))];
        for (k, set) in self.pairs.sets.iter().enumerate() {
            let mut next = Vec::with_capacity(entries.len() * set.len());
            for &(b, a) in &entries {
                for (l, &o) in set.iter().enumerate() {
                    next.push((b | self.occupation(o), a * self.amplitudes[k][l]));
                }
            }
            entries = next;
        }
        for (b, a) in entries {
            amps[b as usize] += a;
        }
        Statevector::from_amplitudes(amps)
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Runs a pair circuit (X and pair excitations only, nothing after the bridge) pair by pair.
/// Memory is linear in the number of orbitals.
pub fn simulate_separable(c: &Circuit, params: &[f64]) -> Result<PairWavefunction> {
    check_params(c, params)?;
    let register = match c.encoding {
        Encoding::Hcb { .. } => PairRegister::Hcb,
        Encoding::Jw { layout, prefix: Some(_), .. } if c.is_pure_pair_circuit() => PairRegister::Jw(layout),
        _ => return Err(Error::NonSeparable("gates act outside the pair register".into())),
    };
    let hcb = c.hcb_circuit()?;
    let n = hcb.n_qubits;
    let mut parent: Vec<usize> = (0..n).collect();
    for g in &hcb.gates {
        match &g.kind {
            GateKind::X => {}
            GateKind::Excitation(e) if e.kind == ExcitationKind::HcbPair => {
                let (a, b) = (find(&mut parent, e.to[0]), find(&mut parent, e.from[0]));
                parent[a] = b;
            }
            other => return Err(Error::NonSeparable(format!("{} gate in the pair register", other.name()))),
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();

    // one particle per component, placed before anything moves it
    let mut reference: Vec<Option<usize>> = vec![None; n];
    let mut touched = vec![false; n];
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); n];
    for g in &hcb.gates {
        match &g.kind {
            GateKind::X => {
                let q = g.qubits[0];
                let r = roots[q];
                if reference[r].is_some() {
                    return Err(Error::NonSeparable(format!("more than one pair placed in the set of orbital {q}")));
                }
                if touched[r] {
                    return Err(Error::NonSeparable(format!("X on orbital {q} after excitations on its set")));
                }
                reference[r] = Some(q);
            }
            GateKind::Excitation(e) => touched[roots[e.to[0]]] = true,
            _ => unreachable!(),
        }
    }
    for (q, &r) in roots.iter().enumerate() {
        if reference[r].is_some() {
            order[r].push(q);
        }
    }
    let mut sets = Vec::new();
    let mut root_of_pair = Vec::new();
    for r in 0..n {
        if let Some(refq) = reference[r] {
            let mut s = vec![refq];
            s.extend(order[r].iter().copied().filter(|&q| q != refq));
            sets.push(s);
            root_of_pair.push(r);
        }
    }
    let mut amplitudes: Vec<Vec<Complex64>> = sets
        .iter()
        .map(|s| {
            let mut v = vec![Complex64::new(0.0, 0.0); s.len()];
            v[0] = Complex64::new(1.0, 0.0);
            v
        })
        .collect();
    for g in &hcb.gates {
        let GateKind::Excitation(e) = &g.kind else { continue };
        let r = roots[e.to[0]];
        let Some(k) = root_of_pair.iter().position(|&x| x == r) else { continue };
        let (t, f) = (e.to[0], e.from[0]);
        let it = sets[k].iter().position(|&q| q == t).unwrap();
        let jf = sets[k].iter().position(|&q| q == f).unwrap();
        let sign = transfer_sign(&e.generator, 1u128 << f, 1u128 << t);
        let theta = g.angle.unwrap().value(params);
        let (s, co) = (0.5 * theta).sin_cos();
        let v = &mut amplitudes[k];
        let (af, at) = (v[jf], v[it]);
        v[jf] = af * co - at * (sign * s);
        v[it] = at * co + af * (sign * s);
    }
    Ok(PairWavefunction { pairs: PairSets { n_orbitals: n, sets }, amplitudes, register })
}

fn transfer_sign(g: &PauliSum, from: u128, to: u128) -> f64 {
    g.terms()
        .iter()
        .map(|t| t.apply_to_basis(from))
        .filter(|(b, _)| *b == to)
        .map(|(_, ph)| ph.im)
        .sum()
}
