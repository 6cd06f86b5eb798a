use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Circuit, GateKind};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub n_params: usize,
    pub n_cnot: usize,
    pub depth: usize,
    pub n_qubits: usize,
}

/// Counts for a compiled circuit. A CRY costs two CNOTs and four layers.
/// Depth is greedy: each gate starts right after the latest gate on any of its qubits.
pub fn resources(c: &Circuit) -> Result<ResourceReport> {
    let mut n_cnot = 0;
    let mut params = BTreeSet::new();
    let mut front = vec![0usize; c.n_qubits];
    for g in &c.gates {
        let cost = match g.kind {
            GateKind::Cnot => {
                n_cnot += 1;
                1
            }
            GateKind::Cry => {
                n_cnot += 2;
                4
            }
            GateKind::X | GateKind::H | GateKind::Ry | GateKind::Rz => 1,
            _ => return Err(Error::Compile(format!("{} gate must be compiled before counting", g.kind.name()))),
        };
        if let Some(i) = g.angle.and_then(|a| a.param_index()) {
            params.insert(i);
        }
        let start = g.qubits.iter().map(|&q| front[q]).max().unwrap_or(0);
        for &q in &g.qubits {
            front[q] = start + cost;
        }
    }
    Ok(ResourceReport {
        n_params: params.len(),
        n_cnot,
        depth: front.into_iter().max().unwrap_or(0),
        n_qubits: c.n_qubits,
    })
}
