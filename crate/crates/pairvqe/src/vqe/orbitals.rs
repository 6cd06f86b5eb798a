//! Alternating optimization of circuit angles and orbital rotations.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{bfgs, minimize, BfgsOptions, InitialGuess, OptimizeConfig, VqeResult};
use crate::circuit::{build_ansatz, AnsatzSpec};
use crate::error::{Error, Result};
use crate::fermion::SpinLayout;
use crate::molecule::{build_qubit_hamiltonian, MolecularSystem, OrbitalRotation};
use crate::sim::{simulate, Statevector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitalOptions {
    pub max_macro_iterations: usize,
    /// Converged when consecutive macro-iteration energies differ by less than this.
    pub tol_energy: f64,
    /// Central-difference step for the rotation gradient.
    pub fd_step: f64,
    /// With `false` only the angles are optimized, once.
    pub rotate: bool,
}

impl Default for OrbitalOptions {
    fn default() -> Self {
        Self { max_macro_iterations: 50, tol_energy: 1e-7, fd_step: 1e-5, rotate: true }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitalResult {
    /// Integrals in the final orbitals.
    pub system: MolecularSystem,
    pub result: VqeResult,
    /// Energy after each angle optimization.
    pub macro_energies: Vec<f64>,
    /// Columns are the final orbitals in the input basis.
    pub orbitals: DMatrix<f64>,
}

fn annihilate(amps: &[Complex64], j: usize) -> Vec<Complex64> {
    let m = 1usize << j;
    let below = m - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (b, a) in amps.iter().enumerate() {
        if b & m != 0 {
            let sign = if (b & below).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            out[b ^ m] = a * sign;
        }
    }
    out
}

fn dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Spin-summed γ_pq = Σ_σ ⟨a†_pσ a_qσ⟩ and Γ_pqrs = Σ_στ ⟨a†_pσ a†_rτ a_sτ a_qσ⟩ (index p·n³ + q·n² + r·n + s).
pub fn one_and_two_rdm(psi: &Statevector, n_orbitals: usize, layout: SpinLayout) -> (DMatrix<f64>, Vec<f64>) {
    let n = n_orbitals;
    let so = |p: usize, s: usize| layout.spin_orbital(p, s == 1, n);
    let amps = psi.amplitudes();
    let single: Vec<Vec<Vec<Complex64>>> = (0..n).map(|p| (0..2).map(|s| annihilate(amps, so(p, s))).collect()).collect();
    let mut g1 = DMatrix::zeros(n, n);
    for p in 0..n {
        for q in 0..n {
            g1[(p, q)] = (0..2).map(|s| dot(&single[p][s], &single[q][s])).sum();
        }
    }
    // double[r][τ][p][σ] = a_rτ a_pσ ψ
    let double: Vec<Vec<Vec<Vec<Vec<Complex64>>>>> = (0..n)
        .map(|r| {
            (0..2)
                .map(|t| (0..n).map(|p| (0..2).map(|s| annihilate(&single[p][s], so(r, t))).collect()).collect())
                .collect()
        })
        .collect();
    let mut g2 = vec![0.0; n * n * n * n];
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let mut v = 0.0;
                    for sig in 0..2 {
                        for tau in 0..2 {
                            v += dot(&double[r][tau][p][sig], &double[s][tau][q][sig]);
                        }
                    }
                    g2[((p * n + q) * n + r) * n + s] = v;
                }
            }
        }
    }
    (g1, g2)
}

/// E_nuc + Σ h_pq γ_pq + ½ Σ (pq|rs) Γ_pqrs.
pub fn rdm_energy(sys: &MolecularSystem, g1: &DMatrix<f64>, g2: &[f64]) -> f64 {
    let one: f64 = sys.h.iter().zip(g1.iter()).map(|(a, b)| a * b).sum();
    let two: f64 = sys.g.as_slice().iter().zip(g2).map(|(a, b)| a * b).sum();
    sys.e_nuclear + one + 0.5 * two
}

/// Alternates angle optimization at fixed orbitals with a rotation step at fixed
/// reduced density matrices until the energy settles.
pub fn optimize_orbitals(
    sys: &MolecularSystem,
    spec: &AnsatzSpec,
    config: &OptimizeConfig,
    opts: &OrbitalOptions,
) -> Result<OrbitalResult> {
    if spec.hcb {
        return Err(Error::InvalidAnsatz("orbital optimization needs a JW circuit".into()));
    }
    let circuit = build_ansatz(sys, spec)?;
    let n = sys.n_orbitals;
    let n_kappa = n * (n - 1) / 2;
    let mut current = sys.clone();
    let mut orbitals = DMatrix::<f64>::identity(n, n);
    let mut cfg = config.clone();
    let mut energies: Vec<f64> = Vec::new();
    for _ in 0..opts.max_macro_iterations {
        let h = build_qubit_hamiltonian(&current, spec.layout);
        let res = minimize(&circuit, &h, &cfg)?;
        let settled = energies.last().is_some_and(|&e| (e - res.energy).abs() < opts.tol_energy);
        energies.push(res.energy);
        if settled || !opts.rotate || n_kappa == 0 {
            return Ok(OrbitalResult { system: current, result: res, macro_energies: energies, orbitals });
        }
        cfg.initial = InitialGuess::Values(res.params.clone());
        cfg.n_starts = 1;

        let psi = simulate(&circuit, &res.values_for(&circuit))?;
        let (g1, g2) = one_and_two_rdm(&psi, n, spec.layout);
        let energy_at = |v: &[f64]| -> Result<f64> {
            let rotated = current.rotate_orbitals(&OrbitalRotation::from_lower_triangle(n, v))?;
            Ok(rdm_energy(&rotated, &g1, &g2))
        };
        let step = opts.fd_step;
        let fg = |v: &[f64]| -> Result<(f64, Vec<f64>)> {
            let f = energy_at(v)?;
            let mut g = Vec::with_capacity(v.len());
            let mut w = v.to_vec();
            for i in 0..v.len() {
                w[i] = v[i] + step;
                let up = energy_at(&w)?;
                w[i] = v[i] - step;
                let down = energy_at(&w)?;
                w[i] = v[i];
                g.push((up - down) / (2.0 * step));
            }
            Ok((f, g))
        };
        let out = bfgs(fg, &vec![0.0; n_kappa], &BfgsOptions { tol_grad: 1e-7, max_iter: 100, ..Default::default() })?;
        let rot = OrbitalRotation::from_lower_triangle(n, &out.x);
        current = current.rotate_orbitals(&rot)?;
        orbitals = &orbitals * rot.matrix();
    }
    Err(Error::Optimizer {
        msg: format!("orbital optimization did not settle in {} macro-iterations", opts.max_macro_iterations),
        params: energies,
    })
}
