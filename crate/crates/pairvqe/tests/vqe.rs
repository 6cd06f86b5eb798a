mod common;

use std::collections::BTreeMap;

use common::*;
use pairvqe::circuit::*;
use pairvqe::fermion::SpinLayout;
use pairvqe::molecule::*;
use pairvqe::pauli::PauliSum;
use pairvqe::sim::{exact_spectrum, simulate, Observable};
use pairvqe::vqe::*;

fn fci(sys: &MolecularSystem) -> f64 {
    let h = build_qubit_hamiltonian(sys, SpinLayout::default());
    exact_spectrum(&h, sys.n_qubits(), Some(sys.n_electrons), false).unwrap().ground_energy()
}

fn central_difference(f: &EnergyFunction, x: &[f64], h: f64) -> Vec<f64> {
    let mut w = x.to_vec();
    (0..x.len())
        .map(|i| {
            w[i] = x[i] + h;
            let up = f.energy(&w).unwrap();
            w[i] = x[i] - h;
            let down = f.energy(&w).unwrap();
            w[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

#[test]
fn analytic_gradients_match_finite_differences() {
    let sys = fixture("beh2/1.33.fcidump");
    let obs = Observable::new(build_qubit_hamiltonian(&sys, SpinLayout::default()));
    let mut r = rng(31);
    for name in ["SPA", "UpCCD", "UpCCSD", "UpCCGSD", "SPA+GS", "SPA-UpCCGASD", "2-UpCCGD"] {
        let c = build_ansatz(&sys, &AnsatzSpec::parse(name).unwrap()).unwrap();
        let x = random_params(&mut r, c.n_parameters());
        let f = EnergyFunction::new(&c, &obs);
        let analytic = f.gradient(&x, GradientMode::Analytic).unwrap();
        let reference = central_difference(&f, &x, 1e-5);
        let fd = f.gradient(&x, GradientMode::FiniteDifference).unwrap();
        for i in 0..x.len() {
            assert!((analytic[i] - reference[i]).abs() < 1e-7, "{name} {}: {} vs {}", c.parameters[i], analytic[i], reference[i]);
            assert!((fd[i] - analytic[i]).abs() < 1e-6);
        }
    }
}

#[test]
fn shift_rules_hold_for_every_compiled_gate_kind() {
    let sys = fixture("h2/631g_1.50.fcidump");
    let obs = Observable::new(build_qubit_hamiltonian(&sys, SpinLayout::default()));
    let c = build_ansatz(&sys, &AnsatzSpec::parse("SPA+GS").unwrap()).unwrap();
    let mut r = rng(9);
    for level in [0, 1, 2] {
        let k = compile(&c, level).unwrap();
        let x = random_params(&mut r, k.n_parameters());
        let f = EnergyFunction::new(&k, &obs);
        let analytic = f.gradient(&x, GradientMode::Analytic).unwrap();
        let reference = central_difference(&f, &x, 1e-5);
        for (a, b) in analytic.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-7, "level {level}: {a} vs {b}");
        }
    }
}

#[test]
fn gradient_vanishes_for_constant_hamiltonian() {
    let sys = fixture("beh2/1.33.fcidump");
    let obs = Observable::new(PauliSum::identity(-3.0));
    let c = build_ansatz(&sys, &AnsatzSpec::parse("UpCCGSD").unwrap()).unwrap();
    let x = random_params(&mut rng(1), c.n_parameters());
    let f = EnergyFunction::new(&c, &obs);
    assert!((f.energy(&x).unwrap() + 3.0).abs() < 1e-12);
    assert!(f.gradient(&x, GradientMode::Analytic).unwrap().iter().all(|g| g.abs() < 1e-12));
}

#[test]
fn doubles_between_virtuals_have_zero_gradient_at_the_reference() {
    let sys = fixture("lih/1.60.fcidump");
    let obs = Observable::new(build_qubit_hamiltonian(&sys, SpinLayout::default()));
    let c = build_ansatz(&sys, &AnsatzSpec::parse("UpCCGD").unwrap()).unwrap();
    let f = EnergyFunction::new(&c, &obs);
    let g = f.gradient(&vec![0.0; c.n_parameters()], GradientMode::Analytic).unwrap();
    let refs = sys.pair_sets.references();
    for (name, gi) in c.parameters.iter().zip(&g) {
        let parts: Vec<usize> = name.split('_').skip(1).map(|s| s.parse().unwrap()).collect();
        if !refs.contains(&parts[0]) && !refs.contains(&parts[1]) {
            assert!(gi.abs() < 1e-12, "{name}");
        }
    }
}

#[test]
fn h2_reaches_fci_quickly() {
    for rel in ["h2/sto3g_0.74.fcidump", "h2/sto3g_2.50.fcidump"] {
        let sys = fixture(rel);
        let c = build_spa(&sys, Arrangement::Ladder).unwrap();
        let h = build_qubit_hamiltonian(&sys, SpinLayout::default());
        let res = minimize(&c, &h, &OptimizeConfig::default()).unwrap();
        assert!(res.converged);
        assert!(res.iterations <= 15, "{rel}: {}", res.iterations);
        assert!((res.energy - fci(&sys)).abs() < 1e-8, "{rel}");
        assert!(res.grad_norm_final < 1e-5);
        assert!(res.history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}

#[test]
fn beh2_spa_converges_and_both_gradient_modes_agree() {
    let sys = fixture("beh2/1.33.fcidump");
    let c = build_spa(&sys, Arrangement::Ladder).unwrap();
    let h = build_qubit_hamiltonian(&sys, SpinLayout::default());
    let a = minimize(&c, &h, &OptimizeConfig::default()).unwrap();
    assert!(a.converged && a.iterations <= 15);
    let cfg = OptimizeConfig { grad_mode: GradientMode::FiniteDifference, ..Default::default() };
    let b = minimize(&c, &h, &cfg).unwrap();
    assert!((a.energy - b.energy).abs() < 1e-8);
    assert!(a.energy < sys.reference_energy());
    assert!(a.energy >= fci(&sys) - 1e-10);

    let start = minimize(&c, &h, &OptimizeConfig { initial: InitialGuess::Values(a.params.clone()), ..Default::default() }).unwrap();
    assert!(start.iterations <= 1);
    assert!((start.energy - a.energy).abs() < 1e-10);
}

#[test]
fn richer_circuits_do_not_raise_the_energy() {
    let sys = fixture("beh2/2.50.fcidump");
    let h = build_qubit_hamiltonian(&sys, SpinLayout::default());
    let run = |name: &str, init: InitialGuess| {
        let c = build_ansatz(&sys, &AnsatzSpec::parse(name).unwrap()).unwrap();
        minimize(&c, &h, &OptimizeConfig { initial: init, ..Default::default() }).unwrap()
    };
    let spa = run("SPA", InitialGuess::Zero);
    let gs = run("SPA+GS", InitialGuess::Values(spa.params.clone()));
    assert!(gs.energy <= spa.energy + 1e-10);
    let k1 = run("UpCCGD", InitialGuess::Zero);
    let k2 = run("2-UpCCGD", InitialGuess::Values(k1.params.clone()));
    assert!(k2.energy <= k1.energy + 1e-10);
    assert!(k2.energy >= fci(&sys) - 1e-10);
}

#[test]
fn multi_start_is_deterministic() {
    let sys = fixture("lih/2.40.fcidump");
    let c = build_ansatz(&sys, &AnsatzSpec::parse("UpCCD").unwrap()).unwrap();
    let h = build_qubit_hamiltonian(&sys, SpinLayout::default());
    let cfg = OptimizeConfig { n_starts: 4, seed: 11, ..Default::default() };
    let a = minimize(&c, &h, &cfg).unwrap();
    let b = minimize(&c, &h, &cfg).unwrap();
    assert_eq!(a, b);
    let single = minimize(&c, &h, &OptimizeConfig::default()).unwrap();
    assert!(a.energy <= single.energy + 1e-12);
    assert!(a.start_index < 4);
}

#[test]
fn bad_configs_are_rejected() {
    let sys = fixture("h2/sto3g_0.74.fcidump");
    let c = build_spa(&sys, Arrangement::Ladder).unwrap();
    let h = build_qubit_hamiltonian(&sys, SpinLayout::default());
    let mut unknown = BTreeMap::new();
    unknown.insert("nope".to_string(), 0.1);
    assert!(minimize(&c, &h, &OptimizeConfig { initial: InitialGuess::Values(unknown), ..Default::default() }).is_err());
    assert!(minimize(&c, &h, &OptimizeConfig { n_starts: 0, ..Default::default() }).is_err());
    assert!(minimize(&c, &h, &OptimizeConfig { tol_grad: 0.0, ..Default::default() }).is_err());
}

#[test]
fn rdm_energy_matches_expectation() {
    let sys = fixture("beh2/1.33.fcidump");
    for layout in [SpinLayout::Interleaved, SpinLayout::Blocked] {
        let spec = AnsatzSpec::parse("UpCCGSD").unwrap().with_layout(layout);
        let c = build_ansatz(&sys, &spec).unwrap();
        let psi = simulate(&c, &random_params(&mut rng(4), c.n_parameters())).unwrap();
        let (g1, g2) = one_and_two_rdm(&psi, sys.n_orbitals, layout);
        let e = Observable::new(build_qubit_hamiltonian(&sys, layout)).expectation(&psi).unwrap();
        assert!((rdm_energy(&sys, &g1, &g2) - e).abs() < 1e-10);
        assert!((g1.trace() - sys.n_electrons as f64).abs() < 1e-10);
    }
}

#[test]
fn orbital_optimized_spa_is_exact_for_two_electrons() {
    let sys = fixture("h2/631g_1.50.fcidump");
    let out = optimize_orbitals(&sys, &AnsatzSpec::spa(), &OptimizeConfig::default(), &OrbitalOptions::default()).unwrap();
    let exact = fci(&sys);
    assert!((out.result.energy - exact).abs() < 1e-6, "{} vs {exact}", out.result.energy);
    let plain = minimize(&build_spa(&sys, Arrangement::Ladder).unwrap(), &build_qubit_hamiltonian(&sys, SpinLayout::default()), &OptimizeConfig::default()).unwrap();
    assert!(out.result.energy <= plain.energy + 1e-10);
    let c = &out.orbitals;
    assert!((c.transpose() * c - nalgebra::DMatrix::identity(4, 4)).amax() < 1e-10);
}

#[test]
fn macro_energies_decrease() {
    let sys = fixture("beh2/2.50.fcidump");
    let out = optimize_orbitals(&sys, &AnsatzSpec::spa(), &OptimizeConfig::default(), &OrbitalOptions::default()).unwrap();
    assert!(out.macro_energies.windows(2).all(|w| w[1] <= w[0] + 1e-8), "{:?}", out.macro_energies);
    assert!(out.result.energy >= fci(&sys) - 1e-8);
}

#[test]
fn disabled_rotation_is_plain_minimization() {
    let sys = fixture("beh2/1.33.fcidump");
    let opts = OrbitalOptions { rotate: false, ..Default::default() };
    let out = optimize_orbitals(&sys, &AnsatzSpec::spa(), &OptimizeConfig::default(), &opts).unwrap();
    let plain = minimize(&build_spa(&sys, Arrangement::Ladder).unwrap(), &build_qubit_hamiltonian(&sys, SpinLayout::default()), &OptimizeConfig::default()).unwrap();
    assert_eq!(out.macro_energies.len(), 1);
    assert_eq!(out.result, plain);
    assert!(optimize_orbitals(&sys, &AnsatzSpec::parse("HCB-SPA").unwrap(), &OptimizeConfig::default(), &opts).is_err());
}
