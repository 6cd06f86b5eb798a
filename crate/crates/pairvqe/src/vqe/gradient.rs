use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Angle, Circuit, Gate, GateKind};
use crate::error::Result;
use crate::sim::{Observable, Statevector};

const FD_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMode {
    /// Shift rules: two terms for rotations, four terms for gates whose generator has spectrum {−1, 0, 1}.
    #[default]
    Analytic,
    /// Central differences with step 1e-4.
    FiniteDifference,
}

/// ⟨H⟩ as a function of the circuit parameters, with evaluation counters.
pub struct EnergyFunction<'a> {
    circuit: &'a Circuit,
    obs: &'a Observable,
    energy_evals: AtomicUsize,
    gradient_evals: AtomicUsize,
}

/// Angle shifts and weights with ∂E/∂φ = Σ w·E(φ + s).
fn shift_rule(kind: &GateKind) -> Vec<(f64, f64)> {
    match kind {
        GateKind::Ry | GateKind::Rz => vec![(FRAC_PI_2, 0.5), (-FRAC_PI_2, -0.5)],
        GateKind::PauliRotation(p) => {
            let c = p.coeff.re;
            let s = FRAC_PI_2 / c;
            vec![(s, 0.5 * c), (-s, -0.5 * c)]
        }
        GateKind::Cry | GateKind::Excitation(_) => {
            let dp = (SQRT_2 + 1.0) / (4.0 * SQRT_2);
            let dm = (SQRT_2 - 1.0) / (4.0 * SQRT_2);
            vec![(FRAC_PI_2, dp), (-FRAC_PI_2, -dp), (3.0 * FRAC_PI_2, -dm), (-3.0 * FRAC_PI_2, dm)]
        }
        _ => Vec::new(),
    }
}

impl<'a> EnergyFunction<'a> {
    pub fn new(circuit: &'a Circuit, obs: &'a Observable) -> Self {
        Self { circuit, obs, energy_evals: AtomicUsize::new(0), gradient_evals: AtomicUsize::new(0) }
    }

    pub fn circuit(&self) -> &Circuit {
        self.circuit
    }

    pub fn energy_evals(&self) -> usize {
        self.energy_evals.load(Ordering::Relaxed)
    }

    pub fn gradient_evals(&self) -> usize {
        self.gradient_evals.load(Ordering::Relaxed)
    }

    pub fn energy(&self, params: &[f64]) -> Result<f64> {
        self.energy_evals.fetch_add(1, Ordering::Relaxed);
        let psi = crate::sim::simulate(self.circuit, params)?;
        self.obs.expectation(&psi)
    }

    pub fn gradient(&self, params: &[f64], mode: GradientMode) -> Result<Vec<f64>> {
        self.gradient_evals.fetch_add(1, Ordering::Relaxed);
        match mode {
            GradientMode::Analytic => self.shift_gradient(params),
            GradientMode::FiniteDifference => self.fd_gradient(params),
        }
    }

    /// Energy and gradient together, as the optimizer consumes them.
    pub fn value_and_gradient(&self, params: &[f64], mode: GradientMode) -> Result<(f64, Vec<f64>)> {
        let e = self.energy(params)?;
        Ok((e, self.gradient(params, mode)?))
    }

    fn fd_gradient(&self, params: &[f64]) -> Result<Vec<f64>> {
        (0..params.len())
            .into_par_iter()
            .map(|i| {
                let mut p = params.to_vec();
                p[i] = params[i] + FD_STEP;
                let up = self.energy(&p)?;
                p[i] = params[i] - FD_STEP;
                let down = self.energy(&p)?;
                Ok((up - down) / (2.0 * FD_STEP))
            })
            .collect()
    }

    fn shift_gradient(&self, params: &[f64]) -> Result<Vec<f64>> {
        crate::sim::check_params(self.circuit, params)?;
        let gates = &self.circuit.gates;
        // states before each parametrized gate
        let mut psi = Statevector::zero(self.circuit.n_qubits)?;
        let mut prefixes = Vec::new();
        for (j, g) in gates.iter().enumerate() {
            if g.angle.is_some_and(|a| a.param_index().is_some()) {
                prefixes.push((j, psi.clone()));
            }
            psi.apply_gate(g, params)?;
        }
        let parts: Vec<(usize, f64)> = prefixes
            .into_par_iter()
            .map(|(j, start)| -> Result<(usize, f64)> {
                let g = &gates[j];
                let a = g.angle.unwrap();
                let mut d = 0.0;
                for (shift, w) in shift_rule(&g.kind) {
                    let shifted = Gate { angle: Some(Angle::Fixed(a.value(params) + shift)), ..g.clone() };
                    let mut s = start.clone();
                    s.apply_gate(&shifted, params)?;
                    for later in &gates[j + 1..] {
                        s.apply_gate(later, params)?;
                    }
                    d += w * self.obs.expectation(&s)?;
                }
                Ok((a.param_index().unwrap(), a.slope() * d))
            })
            .collect::<Result<_>>()?;
        let mut grad = vec![0.0; params.len()];
        for (i, v) in parts {
            grad[i] += v;
        }
        Ok(grad)
    }
}

