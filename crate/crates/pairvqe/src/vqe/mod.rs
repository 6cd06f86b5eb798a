//! Energy minimization over circuit parameters and orbital rotations.

mod bfgs;
mod gradient;
mod orbitals;

pub use bfgs::{bfgs, BfgsOptions, BfgsOutcome};
pub use gradient::{EnergyFunction, GradientMode};
pub use orbitals::{one_and_two_rdm, optimize_orbitals, rdm_energy, OrbitalOptions, OrbitalResult};

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::sim::Observable;

/// Starting point of the first run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialGuess {
    #[default]
    Zero,
    /// Every angle set to the same value.
    Constant(f64),
    /// Uniform in [−scale, scale].
    Random { scale: f64 },
    /// Named values; parameters not listed start at zero.
    Values(BTreeMap<String, f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub initial: InitialGuess,
    pub grad_mode: GradientMode,
    pub tol_grad: f64,
    pub max_iter: usize,
    /// The first run uses `initial`; the others start uniformly in [−π/2, π/2].
    pub n_starts: usize,
    pub seed: u64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            initial: InitialGuess::Zero,
            grad_mode: GradientMode::Analytic,
            tol_grad: 1e-5,
            max_iter: 200,
            n_starts: 1,
            seed: 0,
        }
    }
}

impl OptimizeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_grad > 0.0) || self.n_starts == 0 {
            return Err(Error::Optimizer {
                msg: "tol_grad must be positive and n_starts at least 1".into(),
                params: Vec::new(),
            });
        }
        if let InitialGuess::Random { scale } = self.initial {
            if !(scale > 0.0) {
                return Err(Error::Optimizer { msg: "random start scale must be positive".into(), params: Vec::new() });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    pub energy: f64,
    pub params: BTreeMap<String, f64>,
    pub iterations: usize,
    pub n_energy_evals: usize,
    pub n_gradient_evals: usize,
    pub grad_norm_final: f64,
    pub history: Vec<f64>,
    pub converged: bool,
    /// Which start produced this result (0 is the configured initial guess).
    pub start_index: usize,
}

impl VqeResult {
    /// Parameter values in circuit order.
    pub fn values_for(&self, c: &Circuit) -> Vec<f64> {
        c.parameters.iter().map(|p| self.params.get(p).copied().unwrap_or(0.0)).collect()
    }
}

fn rng_for(seed: u64, start: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(start as u64))
}

fn start_point(c: &Circuit, config: &OptimizeConfig, start: usize) -> Result<Vec<f64>> {
    let n = c.n_parameters();
    if start > 0 {
        let mut rng = rng_for(config.seed, start);
        return Ok((0..n).map(|_| rng.random_range(-FRAC_PI_2..=FRAC_PI_2)).collect());
    }
    Ok(match &config.initial {
        InitialGuess::Zero => vec![0.0; n],
        InitialGuess::Constant(v) => vec![*v; n],
        InitialGuess::Random { scale } => {
            let mut rng = rng_for(config.seed, 0);
            (0..n).map(|_| rng.random_range(-*scale..=*scale)).collect()
        }
        InitialGuess::Values(map) => {
            if let Some(unknown) = map.keys().find(|k| c.param_index(k).is_none()) {
                return Err(Error::UnknownParameter(unknown.clone()));
            }
            c.parameters.iter().map(|p| map.get(p).copied().unwrap_or(0.0)).collect()
        }
    })
}

/// BFGS from every start; returns the lowest energy (ties go to the earlier start).
pub fn minimize(c: &Circuit, h: &PauliSum, config: &OptimizeConfig) -> Result<VqeResult> {
    minimize_observable(c, &Observable::new(h.clone()), config)
}

pub fn minimize_observable(c: &Circuit, obs: &Observable, config: &OptimizeConfig) -> Result<VqeResult> {
    config.validate()?;
    c.validate()?;
    let opts = BfgsOptions { tol_grad: config.tol_grad, max_iter: config.max_iter, ..Default::default() };
    let runs: Vec<Result<VqeResult>> = (0..config.n_starts)
        .into_par_iter()
        .map(|start| {
            let x0 = start_point(c, config, start)?;
            if x0.iter().any(|v| !v.is_finite()) {
                return Err(Error::Optimizer { msg: format!("start {start} is not finite"), params: x0 });
            }
            let f = EnergyFunction::new(c, obs);
            let out = bfgs(|x| f.value_and_gradient(x, config.grad_mode), &x0, &opts)?;
            Ok(VqeResult {
                energy: out.f,
                params: c.parameters.iter().cloned().zip(out.x.iter().copied()).collect(),
                iterations: out.iterations,
                n_energy_evals: f.energy_evals(),
                n_gradient_evals: f.gradient_evals(),
                grad_norm_final: out.grad.iter().fold(0.0, |m, g| m.max(g.abs())),
                history: out.history,
                converged: out.converged,
                start_index: start,
            })
        })
        .collect();
    let mut best: Option<VqeResult> = None;
    for r in runs {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.energy < b.energy) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one start"))
}
