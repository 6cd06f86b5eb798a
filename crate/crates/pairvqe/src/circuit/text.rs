//! Line-oriented circuit text.
//!
//! ```text
//! # comment
//! QUBITS 4
//! PARAMS spa_0_0
//! X 0
//! RY 2 spa_0_0
//! CRY 0 2 spa_0_0*-0.5+0.25
//! CNOT 2 0
//! RZ 1 1.5707963267948966
//! ```
//! Angles are literals or `name[*scale][±offset]`; qubit 0 is the least significant bit.

use std::fmt::Write as _;

use super::{Angle, Circuit, Encoding, Gate, GateKind};
use crate::error::{Error, Result};

fn format_angle(c: &Circuit, a: &Angle) -> String {
    match *a {
        Angle::Fixed(v) => format!("{v}"),
        Angle::Param { index, scale, offset } => {
            let mut s = c.parameters[index].clone();
            if scale != 1.0 {
                let _ = write!(s, "*{scale}");
            }
            if offset != 0.0 {
                let _ = write!(s, "{offset:+}");
            }
            s
        }
    }
}

/// Writes a compiled circuit; excitation and Pauli-rotation gates are rejected.
pub fn write_circuit_text(c: &Circuit) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "QUBITS {}", c.n_qubits);
    if !c.parameters.is_empty() {
        let _ = writeln!(out, "PARAMS {}", c.parameters.join(" "));
    }
    for g in &c.gates {
        if !g.kind.is_primitive() {
            return Err(Error::Compile(format!("cannot write uncompiled {} gate", g.kind.name())));
        }
        let mut line = g.kind.name().to_string();
        for q in &g.qubits {
            let _ = write!(line, " {q}");
        }
        if let Some(a) = &g.angle {
            let _ = write!(line, " {}", format_angle(c, a));
        }
        let _ = writeln!(out, "{line}");
    }
    Ok(out)
}

/// Splits `tok` at the first `+`/`-` that is not a leading sign or part of an exponent.
fn split_number(tok: &str) -> (&str, &str) {
    let b = tok.as_bytes();
    for i in 1..b.len() {
        if (b[i] == b'+' || b[i] == b'-') && !matches!(b[i - 1], b'e' | b'E') {
            return (&tok[..i], &tok[i..]);
        }
    }
    (tok, "")
}

fn parse_angle(tok: &str, params: &[String], line: usize) -> Result<Angle> {
    let bad = |msg: String| Error::CircuitText { line, msg };
    if let Ok(v) = tok.parse::<f64>() {
        return Ok(Angle::Fixed(v));
    }
    let cut = tok.find(['*', '+', '-']).unwrap_or(tok.len());
    let (name, mut rest) = tok.split_at(cut);
    let index = params
        .iter()
        .position(|p| p == name)
        .ok_or_else(|| bad(format!("unknown parameter `{name}`")))?;
    let mut scale = 1.0;
    if let Some(r) = rest.strip_prefix('*') {
        let (num, tail) = split_number(r);
        scale = num.parse().map_err(|_| bad(format!("bad scale `{num}`")))?;
        rest = tail;
    }
    let offset = if rest.is_empty() {
        0.0
    } else {
        rest.parse().map_err(|_| bad(format!("bad offset `{rest}`")))?
    };
    Ok(Angle::Param { index, scale, offset })
}

pub fn parse_circuit_text(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let bad = |msg: String| Error::CircuitText { line, msg };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let kind = toks[0].to_ascii_uppercase();
        if kind == "QUBITS" {
            if circuit.is_some() || toks.len() != 2 {
                return Err(bad("QUBITS must appear once with one value".into()));
            }
            let n = toks[1].parse().map_err(|_| bad(format!("bad qubit count `{}`", toks[1])))?;
            circuit = Some(Circuit::new(n, Encoding::Plain));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| bad("QUBITS line missing".into()))?;
        if kind == "PARAMS" {
            if !c.parameters.is_empty() || !c.gates.is_empty() {
                return Err(bad("PARAMS must precede all gates and appear once".into()));
            }
            c.parameters = toks[1..].iter().map(|s| s.to_string()).collect();
            continue;
        }
        let (gk, nq, has_angle) = match kind.as_str() {
            "X" => (GateKind::X, 1, false),
            "H" => (GateKind::H, 1, false),
            "RY" => (GateKind::Ry, 1, true),
            "RZ" => (GateKind::Rz, 1, true),
            "CNOT" => (GateKind::Cnot, 2, false),
            "CRY" => (GateKind::Cry, 2, true),
            _ => return Err(bad(format!("unknown gate `{}`", toks[0]))),
        };
        let expected = 1 + nq + usize::from(has_angle);
        if toks.len() != expected {
            return Err(bad(format!("{kind} takes {expected} fields, got {}", toks.len())));
        }
        let qubits = toks[1..=nq]
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| bad(format!("bad qubit `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        let angle = if has_angle { Some(parse_angle(toks[nq + 1], &c.parameters, line)?) } else { None };
        let g = Gate { kind: gk, qubits, angle };
        if !g.arity_ok() {
            return Err(bad("repeated qubit".into()));
        }
        if let Some(&q) = g.qubits.iter().find(|&&q| q >= c.n_qubits) {
            return Err(bad(format!("qubit {q} outside register of {}", c.n_qubits)));
        }
        c.push(g);
    }
    circuit.ok_or(Error::CircuitText { line: 0, msg: "empty circuit text".into() })
}
