//! Lowering to {X, H, Ry, Rz, CNOT, CRy}.
//!
//! Level 0 rotates every generator string separately with a CNOT staircase.
//! Level 1 uses fixed blocks: 13 CNOTs for a paired double, a 2-CNOT Givens rotation
//! for a single (plus a parity ladder when it carries a Z string).
//! Level 2 tracks which hard-core-boson qubits are known to be empty or filled before
//! the bridge and emits the cheapest exact gates for each pair excitation.
//!
//! Levels 0 and 1 move the pair part of a bridged circuit onto the JW register
//! (X on both spins, pair hops as paired doubles) and drop the bridge.
//! The result prepares the same state from |0…0⟩.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::{up_orbital, Angle, Circuit, Encoding, Excitation, ExcitationKind, Gate, GateKind, HcbPrefix};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Optimization level accepted by [`compile`].
pub type OptLevel = u8;

pub fn compile(circuit: &Circuit, level: OptLevel) -> Result<Circuit> {
    circuit.validate()?;
    match level {
        0 | 1 => lower(circuit, level),
        2 => compile_pairs(circuit),
        _ => Err(Error::Compile(format!("unknown optimization level {level}"))),
    }
}

fn lower(c: &Circuit, level: OptLevel) -> Result<Circuit> {
    let mut out = Circuit { gates: Vec::new(), ..c.clone() };
    match c.encoding {
        Encoding::Jw { n_orbitals, layout, prefix: Some(pre) } => {
            for g in &c.gates[..pre.bridge_start] {
                match &g.kind {
                    GateKind::X => {
                        let p = up_orbital(g.qubits[0], n_orbitals, layout)?;
                        out.push(Gate::x(layout.up(p, n_orbitals)));
                        out.push(Gate::x(layout.down(p, n_orbitals)));
                    }
                    GateKind::Excitation(e) if e.kind == ExcitationKind::HcbPair => {
                        let t = up_orbital(e.to[0], n_orbitals, layout)?;
                        let f = up_orbital(e.from[0], n_orbitals, layout)?;
                        let jw = Excitation::jw_pair(t, f, n_orbitals, layout)?;
                        emit_excitation(&mut out.gates, &jw, g.angle.unwrap(), level)?;
                    }
                    other => {
                        return Err(Error::Compile(format!("{} gate before the bridge", other.name())));
                    }
                }
            }
            for g in &c.gates[pre.bridge_end..] {
                emit(&mut out.gates, g, level)?;
            }
            out.encoding = Encoding::Jw { n_orbitals, layout, prefix: None };
        }
        _ => {
            for g in &c.gates {
                emit(&mut out.gates, g, level)?;
            }
        }
    }
    Ok(out)
}

fn emit(out: &mut Vec<Gate>, g: &Gate, level: OptLevel) -> Result<()> {
    match &g.kind {
        GateKind::PauliRotation(p) => {
            let c = super::real_coeff(p);
            pauli_ladder(out, p, g.angle.unwrap().scaled(c));
            Ok(())
        }
        GateKind::Excitation(e) => emit_excitation(out, e, g.angle.unwrap(), level),
        _ => {
            out.push(g.clone());
            Ok(())
        }
    }
}

fn emit_excitation(out: &mut Vec<Gate>, e: &Excitation, angle: Angle, level: OptLevel) -> Result<()> {
    if level >= 1 {
        if let Some((t, f, s, scale)) = givens_form(e) {
            parity_givens(out, t, f, &s, angle.scaled(scale));
            return Ok(());
        }
        if let Some(sign) = double_form(e) {
            double_block(out, e.to[0], e.to[1], e.from[0], e.from[1], angle.scaled(sign));
            return Ok(());
        }
    }
    if !e.generator.terms_commute() {
        return Err(Error::Compile("generator strings do not commute".into()));
    }
    for t in e.generator.terms() {
        pauli_ladder(out, t, angle.scaled(super::real_coeff(t)));
    }
    Ok(())
}

/// exp(−iφ/2·P) for the string P (its coefficient is ignored).
fn pauli_ladder(out: &mut Vec<Gate>, p: &PauliString, angle: Angle) {
    let factors = p.factors();
    if factors.is_empty() {
        return;
    }
    for &(q, a) in &factors {
        match a {
            Pauli::X => out.push(Gate::h(q)),
            Pauli::Y => {
                out.push(Gate::rz(q, Angle::Fixed(-FRAC_PI_2)));
                out.push(Gate::h(q));
            }
            Pauli::Z => {}
        }
    }
    let qs: Vec<usize> = factors.iter().map(|f| f.0).collect();
    for w in qs.windows(2) {
        out.push(Gate::cnot(w[0], w[1]));
    }
    out.push(Gate::rz(*qs.last().unwrap(), angle));
    for w in qs.windows(2).rev() {
        out.push(Gate::cnot(w[0], w[1]));
    }
    for &(q, a) in factors.iter().rev() {
        match a {
            Pauli::X => out.push(Gate::h(q)),
            Pauli::Y => {
                out.push(Gate::h(q));
                out.push(Gate::rz(q, Angle::Fixed(FRAC_PI_2)));
            }
            Pauli::Z => {}
        }
    }
}

/// Im of the ⟨to|G|from⟩ amplitude, ±1 for a well-formed excitation.
fn transfer_sign(g: &PauliSum, from: u128, to: u128) -> f64 {
    let mut amp = Complex64::new(0.0, 0.0);
    for t in g.terms() {
        let (b, ph) = t.apply_to_basis(from);
        if b == to {
            amp += ph;
        }
    }
    amp.im
}

/// Matches G = c·Z_S·(Y_t X_f − X_t Y_f); returns (t, f, S, 2c).
fn givens_form(e: &Excitation) -> Option<(usize, usize, Vec<usize>, f64)> {
    if e.to.len() != 1 || e.generator.len() != 2 {
        return None;
    }
    let (t, f) = (e.to[0], e.from[0]);
    let tf = (1u128 << t) | (1u128 << f);
    let mut s_mask = None;
    let mut c_yx = None;
    let mut c_xy = None;
    for term in e.generator.terms() {
        if term.x_mask() != tf || term.coeff.im.abs() > 1e-12 {
            return None;
        }
        let rest = term.z_mask() & !tf;
        if *s_mask.get_or_insert(rest) != rest {
            return None;
        }
        match (term.get(t), term.get(f)) {
            (Some(Pauli::Y), Some(Pauli::X)) => c_yx = Some(term.coeff.re),
            (Some(Pauli::X), Some(Pauli::Y)) => c_xy = Some(term.coeff.re),
            _ => return None,
        }
    }
    let (a, b) = (c_yx?, c_xy?);
    if (a + b).abs() > 1e-12 {
        return None;
    }
    let mut s = Vec::new();
    let mut m = s_mask?;
    while m != 0 {
        s.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    Some((t, f, s, 2.0 * a))
}

/// A Z-free paired double on four qubits; returns the transfer sign.
fn double_form(e: &Excitation) -> Option<f64> {
    if e.to.len() != 2 || e.generator.len() != 8 {
        return None;
    }
    let (a, b, c, d) = (e.to[0], e.to[1], e.from[0], e.from[1]);
    let all = (1u128 << a) | (1u128 << b) | (1u128 << c) | (1u128 << d);
    if e.generator.terms().iter().any(|t| t.support() != all || t.weight() != 4 || (t.z_mask() & !t.x_mask()) != 0) {
        return None;
    }
    let from = (1u128 << c) | (1u128 << d);
    let to = (1u128 << a) | (1u128 << b);
    let s = transfer_sign(&e.generator, from, to);
    ((s.abs() - 1.0).abs() < 1e-9).then_some(s.signum())
}

/// exp(−iφ/4·(Y_t X_f − X_t Y_f)·Z_S) with 2|S|+2 CNOTs.
fn parity_givens(out: &mut Vec<Gate>, t: usize, f: usize, s: &[usize], angle: Angle) {
    for w in s.windows(2) {
        out.push(Gate::cnot(w[0], w[1]));
    }
    if let Some(&last) = s.last() {
        cz(out, last, t);
    }
    out.push(Gate::ry(t, Angle::Fixed(FRAC_PI_2)));
    out.push(Gate::cnot(t, f));
    out.push(Gate::ry(t, angle.scaled(0.5)));
    out.push(Gate::ry(f, angle.scaled(0.5)));
    out.push(Gate::cnot(t, f));
    out.push(Gate::ry(t, Angle::Fixed(-FRAC_PI_2)));
    if let Some(&last) = s.last() {
        cz(out, last, t);
    }
    for w in s.windows(2).rev() {
        out.push(Gate::cnot(w[0], w[1]));
    }
}

fn cz(out: &mut Vec<Gate>, control: usize, target: usize) {
    out.push(Gate::h(target));
    out.push(Gate::cnot(control, target));
    out.push(Gate::h(target));
}

/// Paired double (c, d) → (a, b) with 13 CNOTs.
///
/// After CNOT(a→b), CNOT(c→d), CNOT(a→c) the two coupled configurations differ only
/// on qubit a while (b, c, d) = (0, 1, 0); a Ry on a multiplexed over (b, c, d) with
/// Walsh-pattern angles rotates exactly that subspace. The last multiplexer CZ is
/// merged with the first decoding CNOT.
fn double_block(out: &mut Vec<Gate>, a: usize, b: usize, c: usize, d: usize, angle: Angle) {
    out.push(Gate::cnot(a, b));
    out.push(Gate::cnot(c, d));
    out.push(Gate::cnot(a, c));
    let controls = [b, d, b, c, b, d, b];
    let signs = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
    for (j, sign) in signs.iter().enumerate() {
        out.push(Gate::ry(a, angle.scaled(sign / 8.0)));
        if j < controls.len() {
            cz(out, controls[j], a);
        }
    }
    // CZ(c, a) followed by CNOT(a → c), up to global phase.
    out.push(Gate::rz(c, Angle::Fixed(-FRAC_PI_2)));
    out.push(Gate::cnot(a, c));
    out.push(Gate::rz(c, Angle::Fixed(FRAC_PI_2)));
    out.push(Gate::rz(a, Angle::Fixed(-FRAC_PI_2)));
    out.push(Gate::cnot(c, d));
    out.push(Gate::cnot(a, b));
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Occupation {
    Zero,
    One,
    Mixed,
}

fn compile_pairs(c: &Circuit) -> Result<Circuit> {
    let (end, prefix) = match c.encoding {
        Encoding::Hcb { .. } => (c.gates.len(), None),
        Encoding::Jw { prefix: Some(p), .. } => (p.bridge_start, Some(p)),
        _ => return Err(Error::Compile("level 2 needs a circuit built from pair excitations".into())),
    };
    let mut out = Circuit { gates: Vec::new(), ..c.clone() };
    let mut occ = vec![Occupation::Zero; c.n_qubits];
    for g in &c.gates[..end] {
        match &g.kind {
            GateKind::X => {
                let q = g.qubits[0];
                occ[q] = match occ[q] {
                    Occupation::Zero => Occupation::One,
                    Occupation::One => Occupation::Zero,
                    Occupation::Mixed => Occupation::Mixed,
                };
                out.push(g.clone());
            }
            GateKind::Excitation(e) if e.kind == ExcitationKind::HcbPair => {
                let (t, f) = (e.to[0], e.from[0]);
                let s = transfer_sign(&e.generator, 1u128 << f, 1u128 << t);
                let angle = g.angle.unwrap().scaled(s);
                use Occupation::*;
                match (occ[t], occ[f]) {
                    (Zero, Zero) | (One, One) => continue,
                    (Zero, One) => {
                        out.push(Gate::ry(t, angle));
                        out.push(Gate::cnot(t, f));
                    }
                    (One, Zero) => {
                        out.push(Gate::ry(f, angle.scaled(-1.0)));
                        out.push(Gate::cnot(f, t));
                    }
                    (Zero, Mixed) => {
                        out.push(Gate::cry(f, t, angle));
                        out.push(Gate::cnot(t, f));
                    }
                    (Mixed, Zero) => {
                        out.push(Gate::cry(t, f, angle.scaled(-1.0)));
                        out.push(Gate::cnot(f, t));
                    }
                    _ => emit_excitation(&mut out.gates, e, g.angle.unwrap(), 1)?,
                }
                occ[t] = Mixed;
                occ[f] = Mixed;
            }
            other => {
                return Err(Error::Compile(format!("level 2 cannot place a {} gate before the bridge", other.name())));
            }
        }
    }
    if let Some(p) = prefix {
        let start = out.gates.len();
        out.gates.extend_from_slice(&c.gates[p.bridge_start..p.bridge_end]);
        let bridge_end = out.gates.len();
        for g in &c.gates[p.bridge_end..] {
            emit(&mut out.gates, g, 1)?;
        }
        if let Encoding::Jw { n_orbitals, layout, .. } = c.encoding {
            out.encoding = Encoding::Jw { n_orbitals, layout, prefix: Some(HcbPrefix { bridge_start: start, bridge_end }) };
        }
    }
    Ok(out)
}
