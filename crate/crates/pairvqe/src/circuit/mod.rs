//! Circuits: gate lists with named parameters, ansatz builders, compiler passes and resource counts.

mod ansatz;
mod compile;
mod resources;
mod text;

pub use ansatz::{build_ansatz, build_ansatz_for_pairs, build_spa, build_spa_for_pairs, hcb_to_jw_bridge, AnsatzSpec, Arrangement};
pub use compile::{compile, OptLevel};
pub use resources::{resources, ResourceReport};
pub use text::{parse_circuit_text, write_circuit_text};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fermion::{self, SpinLayout};
use crate::pauli::{PauliString, PauliSum};

/// A gate angle: either fixed, or affine in one named parameter (`scale·θ + offset`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Param { index: usize, scale: f64, offset: f64 },
}

impl Angle {
    pub fn param(index: usize) -> Self {
        Angle::Param { index, scale: 1.0, offset: 0.0 }
    }

    pub fn value(&self, params: &[f64]) -> f64 {
        match *self {
            Angle::Fixed(v) => v,
            Angle::Param { index, scale, offset } => scale * params[index] + offset,
        }
    }

    /// The angle multiplied by `s`.
    pub fn scaled(self, s: f64) -> Self {
        match self {
            Angle::Fixed(v) => Angle::Fixed(v * s),
            Angle::Param { index, scale, offset } => Angle::Param { index, scale: scale * s, offset: offset * s },
        }
    }

    pub fn shifted(self, d: f64) -> Self {
        match self {
            Angle::Fixed(v) => Angle::Fixed(v + d),
            Angle::Param { index, scale, offset } => Angle::Param { index, scale, offset: offset + d },
        }
    }

    pub fn param_index(&self) -> Option<usize> {
        match *self {
            Angle::Fixed(_) => None,
            Angle::Param { index, .. } => Some(index),
        }
    }

    /// d(angle)/dθ for the parameter it depends on.
    pub fn slope(&self) -> f64 {
        match *self {
            Angle::Fixed(_) => 0.0,
            Angle::Param { scale, .. } => scale,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExcitationKind {
    /// Pair hop between two hard-core-boson qubits.
    HcbPair,
    /// Paired double on four JW qubits.
    JwPair,
    /// JW single with its Z string.
    Single,
    /// Single with the Z string dropped.
    ApproxSingle,
}

/// exp(−iθ/2·G) for an excitation generator G with spectrum in {−1, 0, 1}.
#[derive(Clone, Debug, PartialEq)]
pub struct Excitation {
    pub kind: ExcitationKind,
    /// Qubits that gain occupation.
    pub to: Vec<usize>,
    /// Qubits that lose occupation.
    pub from: Vec<usize>,
    pub generator: PauliSum,
}

impl Excitation {
    fn checked(kind: ExcitationKind, to: Vec<usize>, from: Vec<usize>, generator: PauliSum) -> Result<Self> {
        if !generator.is_hermitian(1e-12) {
            return Err(Error::InvalidExcitation("generator is not Hermitian".into()));
        }
        let cube = generator.multiply(&generator).multiply(&generator);
        if !cube.approx_eq(&generator, 1e-12) {
            return Err(Error::InvalidExcitation("generator does not satisfy G³ = G".into()));
        }
        Ok(Self { kind, to, from, generator })
    }

    /// Moves a hard-core boson from qubit `from` to qubit `to`.
    pub fn hcb_pair(to: usize, from: usize) -> Result<Self> {
        Self::checked(ExcitationKind::HcbPair, vec![to], vec![from], fermion::paired_generator_hcb(to, from)?)
    }

    /// Paired double moving both electrons of spatial orbital `from` into `to`.
    pub fn jw_pair(to: usize, from: usize, n_orbitals: usize, layout: SpinLayout) -> Result<Self> {
        let g = fermion::paired_generator_jw(to, from, n_orbitals, layout)?;
        Self::checked(
            ExcitationKind::JwPair,
            vec![layout.up(to, n_orbitals), layout.down(to, n_orbitals)],
            vec![layout.up(from, n_orbitals), layout.down(from, n_orbitals)],
            g,
        )
    }

    /// Single excitation between spin-orbital qubits.
    pub fn single(to: usize, from: usize, n_qubits: usize) -> Result<Self> {
        Self::checked(ExcitationKind::Single, vec![to], vec![from], fermion::single_generator_jw(to, from, n_qubits)?)
    }

    pub fn approx_single(to: usize, from: usize) -> Result<Self> {
        Self::checked(
            ExcitationKind::ApproxSingle,
            vec![to],
            vec![from],
            fermion::approximate_single_generator(to, from)?,
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    X,
    H,
    Ry,
    Rz,
    Cnot,
    Cry,
    /// exp(−iθ/2·P) for a single Pauli string P with a real coefficient.
    PauliRotation(PauliString),
    Excitation(Excitation),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Cnot => "CNOT",
            GateKind::Cry => "CRY",
            GateKind::PauliRotation(_) => "PAULI",
            GateKind::Excitation(_) => "EXC",
        }
    }

    pub fn is_primitive(&self) -> bool {
        !matches!(self, GateKind::PauliRotation(_) | GateKind::Excitation(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    /// Control before target for CNOT and CRY.
    pub qubits: Vec<usize>,
    pub angle: Option<Angle>,
}

impl Gate {
    pub fn x(q: usize) -> Self {
        Self { kind: GateKind::X, qubits: vec![q], angle: None }
    }

    pub fn h(q: usize) -> Self {
        Self { kind: GateKind::H, qubits: vec![q], angle: None }
    }

    pub fn ry(q: usize, angle: Angle) -> Self {
        Self { kind: GateKind::Ry, qubits: vec![q], angle: Some(angle) }
    }

    pub fn rz(q: usize, angle: Angle) -> Self {
        Self { kind: GateKind::Rz, qubits: vec![q], angle: Some(angle) }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cnot, qubits: vec![control, target], angle: None }
    }

    pub fn cry(control: usize, target: usize, angle: Angle) -> Self {
        Self { kind: GateKind::Cry, qubits: vec![control, target], angle: Some(angle) }
    }

    pub fn pauli_rotation(p: PauliString, angle: Angle) -> Self {
        let qubits = p.factors().iter().map(|f| f.0).collect();
        Self { kind: GateKind::PauliRotation(p), qubits, angle: Some(angle) }
    }

    pub fn excitation(e: Excitation, angle: Angle) -> Self {
        let mut s = e.generator.support();
        let mut qubits = Vec::new();
        while s != 0 {
            qubits.push(s.trailing_zeros() as usize);
            s &= s - 1;
        }
        Self { kind: GateKind::Excitation(e), qubits, angle: Some(angle) }
    }

    pub fn arity_ok(&self) -> bool {
        let n = self.qubits.len();
        let distinct = {
            let mut q = self.qubits.clone();
            q.sort_unstable();
            q.dedup();
            q.len() == n
        };
        distinct
            && match &self.kind {
                GateKind::X | GateKind::H => n == 1 && self.angle.is_none(),
                GateKind::Ry | GateKind::Rz => n == 1 && self.angle.is_some(),
                GateKind::Cnot => n == 2 && self.angle.is_none(),
                GateKind::Cry => n == 2 && self.angle.is_some(),
                GateKind::PauliRotation(_) | GateKind::Excitation(_) => self.angle.is_some(),
            }
    }
}

/// Where the hard-core-boson part of a JW circuit ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HcbPrefix {
    /// Gates before this index act on the spin-up register only.
    pub bridge_start: usize,
    /// Gates in `bridge_start..bridge_end` form the bridge CNOT layer.
    pub bridge_end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Encoding {
    /// One qubit per spatial orbital.
    Hcb { n_orbitals: usize },
    /// One qubit per spin orbital.
    Jw { n_orbitals: usize, layout: SpinLayout, prefix: Option<HcbPrefix> },
    /// No orbital interpretation.
    Plain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    pub parameters: Vec<String>,
    pub encoding: Encoding,
}

impl Circuit {
    pub fn new(n_qubits: usize, encoding: Encoding) -> Self {
        Self { n_qubits, gates: Vec::new(), parameters: Vec::new(), encoding }
    }

    /// Index of `name`, registering it if new.
    pub fn parameter(&mut self, name: &str) -> usize {
        match self.parameters.iter().position(|p| p == name) {
            Some(i) => i,
            None => {
                self.parameters.push(name.to_string());
                self.parameters.len() - 1
            }
        }
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.parameters.iter().position(|p| p == name)
    }

    pub fn n_parameters(&self) -> usize {
        self.parameters.len()
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            if !g.arity_ok() {
                return Err(Error::Compile(format!("gate {i} ({}) has malformed operands", g.kind.name())));
            }
            if let Some(&q) = g.qubits.iter().find(|&&q| q >= self.n_qubits) {
                return Err(Error::IndexOutOfRange { index: q, limit: self.n_qubits });
            }
            if let Some(k) = g.angle.and_then(|a| a.param_index()) {
                if k >= self.parameters.len() {
                    return Err(Error::Compile(format!("gate {i} refers to unknown parameter #{k}")));
                }
            }
        }
        Ok(())
    }

    /// Orders named values by the circuit's parameter list.
    pub fn bind(&self, values: &HashMap<String, f64>) -> Result<Vec<f64>> {
        self.parameters
            .iter()
            .map(|p| values.get(p).copied().ok_or_else(|| Error::UnassignedParameter(p.clone())))
            .collect()
    }

    /// Named values for a parameter vector.
    pub fn named(&self, params: &[f64]) -> Vec<(String, f64)> {
        self.parameters.iter().cloned().zip(params.iter().copied()).collect()
    }

    pub fn hcb_prefix(&self) -> Option<HcbPrefix> {
        match self.encoding {
            Encoding::Jw { prefix, .. } => prefix,
            _ => None,
        }
    }

    pub fn n_orbitals(&self) -> Option<usize> {
        match self.encoding {
            Encoding::Hcb { n_orbitals } | Encoding::Jw { n_orbitals, .. } => Some(n_orbitals),
            Encoding::Plain => None,
        }
    }

    /// The hard-core-boson part as a circuit on one qubit per orbital.
    /// For HCB circuits this is the circuit itself; gates after the bridge are not included.
    pub fn hcb_circuit(&self) -> Result<Circuit> {
        match self.encoding {
            Encoding::Hcb { .. } => Ok(self.clone()),
            Encoding::Jw { n_orbitals, layout, prefix: Some(pre) } => {
                let mut out = Circuit::new(n_orbitals, Encoding::Hcb { n_orbitals });
                out.parameters = self.parameters.clone();
                let orb = |q: usize| up_orbital(q, n_orbitals, layout);
                for g in &self.gates[..pre.bridge_start] {
                    let qubits = g.qubits.iter().map(|&q| orb(q)).collect::<Result<Vec<_>>>()?;
                    let gate = match &g.kind {
                        GateKind::Excitation(e) if e.kind == ExcitationKind::HcbPair => {
                            let exc = Excitation::hcb_pair(orb(e.to[0])?, orb(e.from[0])?)?;
                            Gate::excitation(exc, g.angle.unwrap())
                        }
                        k if k.is_primitive() => Gate { kind: k.clone(), qubits, angle: g.angle },
                        other => {
                            return Err(Error::Compile(format!("unexpected {} gate before the bridge", other.name())))
                        }
                    };
                    out.gates.push(gate);
                }
                Ok(out)
            }
            _ => Err(Error::Compile("circuit has no hard-core-boson part".into())),
        }
    }

    /// True if no gate follows the bridge.
    pub fn is_pure_pair_circuit(&self) -> bool {
        match self.encoding {
            Encoding::Hcb { .. } => true,
            Encoding::Jw { prefix: Some(p), .. } => p.bridge_end == self.gates.len(),
            _ => false,
        }
    }

    /// Same circuit with parameters renamed by `f`.
    pub fn rename_parameters(&self, f: impl Fn(&str) -> String) -> Circuit {
        Circuit { parameters: self.parameters.iter().map(|p| f(p)).collect(), ..self.clone() }
    }
}

/// Spatial orbital whose spin-up qubit is `q`.
pub(crate) fn up_orbital(q: usize, n_orbitals: usize, layout: SpinLayout) -> Result<usize> {
    match layout {
        SpinLayout::Interleaved if q % 2 == 0 && q / 2 < n_orbitals => Ok(q / 2),
        SpinLayout::Blocked if q < n_orbitals => Ok(q),
        _ => Err(Error::Compile(format!("qubit {q} is not a spin-up qubit"))),
    }
}

/// A real-coefficient Pauli string used for rotations.
pub(crate) fn real_coeff(p: &PauliString) -> f64 {
    debug_assert!(p.coeff.im.abs() < 1e-12);
    p.coeff.re
}
