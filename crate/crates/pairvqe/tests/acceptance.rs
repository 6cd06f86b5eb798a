//! One PASS/FAIL line per acceptance criterion. Run with `cargo test --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use common::*;
use pairvqe::circuit::*;
use pairvqe::dense;
use pairvqe::fermion::SpinLayout;
use pairvqe::molecule::*;
use pairvqe::sim::*;
use pairvqe::vqe::*;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fci(sys: &MolecularSystem) -> f64 {
    let h = build_qubit_hamiltonian(sys, SpinLayout::default());
    exact_spectrum(&h, sys.n_qubits(), Some(sys.n_electrons), false).unwrap().ground_energy()
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, format!("took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64()))
}

fn spa_resources() -> Check {
    let t = Instant::now();
    let rows: &[(&str, Vec<usize>, (usize, usize, usize))] = &[
        ("H2(2,4)", vec![2], (1, 3, 3)),
        ("LiH(2,10)", vec![5], (4, 15, 18)),
        ("BeH2(4,8)", vec![2, 2], (2, 6, 3)),
        ("BH3(6,12)", vec![2, 2, 2], (3, 9, 3)),
        ("N2(6,12)", vec![2, 2, 2], (3, 9, 3)),
        ("C2H4(12,24)", vec![2; 6], (6, 18, 3)),
        ("H2O2(14,28)", vec![2; 7], (7, 21, 3)),
        ("C2H6(14,28)", vec![2; 7], (7, 21, 3)),
        ("C2H6(2,12)", vec![6], (5, 19, 23)),
        ("C2H6(14,84)", vec![6; 7], (35, 133, 23)),
    ];
    let report = |sizes: &[usize]| {
        let c = build_spa_for_pairs(&PairSets::consecutive(sizes), Arrangement::Ladder, SpinLayout::default()).unwrap();
        resources(&compile(&c, 2).unwrap()).unwrap()
    };
    for (name, sizes, want) in rows {
        let r = report(sizes);
        ensure((r.n_params, r.n_cnot, r.depth) == *want, format!("{name}: got {}/{}/{}", r.n_params, r.n_cnot, r.depth))?;
    }
    let r = report(&[3, 3, 1]);
    ensure((r.n_params, r.n_cnot) == (4, 15) && r.depth.abs_diff(7) <= 1, format!("BeH2(6,14): {}/{}/{}", r.n_params, r.n_cnot, r.depth))?;
    within(t.elapsed(), 1.0)?;
    Ok(format!("11 rows, BeH2(6,14) depth {}, {:.3} s", r.depth, t.elapsed().as_secs_f64()))
}

fn level_structure() -> Check {
    let p = PairSets::consecutive(&[2, 2, 2]);
    let spa = build_spa_for_pairs(&p, Arrangement::Ladder, SpinLayout::default()).unwrap();
    let l2 = resources(&compile(&spa, 2).unwrap()).unwrap();
    ensure((l2.n_params, l2.n_cnot, l2.depth) == (3, 9, 3), format!("level 2: {}/{}/{}", l2.n_params, l2.n_cnot, l2.depth))?;
    let l0 = resources(&compile(&spa, 0).unwrap()).unwrap();
    ensure(l0.n_cnot == 144, format!("level 0 CNOT {}", l0.n_cnot))?;
    let mut one = Circuit::new(12, Encoding::Plain);
    let i = one.parameter("t");
    one.push(Gate::excitation(Excitation::jw_pair(3, 0, 6, SpinLayout::Interleaved).unwrap(), Angle::param(i)));
    let l1 = resources(&compile(&one, 1).unwrap()).unwrap();
    ensure(l1.n_cnot == 13, format!("level 1 per double {}", l1.n_cnot))?;
    let counts: Vec<usize> = ["UpCCD", "UpCCSD", "UpCCGSD", "2-UpCCGSD"]
        .iter()
        .map(|n| build_ansatz_for_pairs(&p, &AnsatzSpec::parse(n).unwrap()).unwrap().n_parameters())
        .collect();
    ensure(counts == [9, 27, 45, 90], format!("parameter counts {counts:?}"))?;
    Ok(format!("SPA 3/9/3, level 0 {} CNOT, level 1 13 per double, counts {counts:?}", l0.n_cnot))
}

fn representations() -> Check {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for rel in ["beh2/1.33.fcidump", "n2/1.10.fcidump"] {
        let sys = fixture(rel);
        let h_jw = build_qubit_hamiltonian(&sys, SpinLayout::default());
        let h_hcb = build_hcb_hamiltonian(&sys);
        let jw = build_spa(&sys, Arrangement::Ladder).unwrap();
        let hcb = build_ansatz(&sys, &AnsatzSpec::parse("HCB-SPA").unwrap()).unwrap();
        let obs_jw = Observable::new(h_jw.clone());
        let obs_hcb = Observable::new(h_hcb);
        let mut r = rng(2024);
        for _ in 0..20 {
            let x = random_params(&mut r, jw.n_parameters());
            let e_jw = obs_jw.expectation(&simulate(&jw, &x).unwrap()).unwrap();
            let e_hcb = obs_hcb.expectation(&simulate(&hcb, &x).unwrap()).unwrap();
            let e_sep = simulate_separable(&jw, &x).unwrap().expectation(&h_jw).unwrap();
            worst = worst.max((e_jw - e_hcb).abs()).max((e_jw - e_sep).abs());
        }
    }
    ensure(worst < 1e-10, format!("max deviation {worst:e}"))?;
    within(t.elapsed(), 10.0)?;
    Ok(format!("max deviation {worst:.1e}, {:.2} s", t.elapsed().as_secs_f64()))
}

fn oracle_exactness() -> Check {
    let sys = fixture("h2/sto3g_0.74.fcidump");
    let c = build_spa(&sys, Arrangement::Ladder).unwrap();
    let res = minimize(&c, &build_qubit_hamiltonian(&sys, SpinLayout::default()), &OptimizeConfig::default()).unwrap();
    let d1 = (res.energy - fci(&sys)).abs();
    ensure(d1 < 1e-8 && res.iterations <= 15, format!("H2(2,4): |ΔE| {d1:e} after {} iterations", res.iterations))?;
    let sys = fixture("h2/631g_0.74.fcidump");
    let oo = optimize_orbitals(&sys, &AnsatzSpec::spa(), &OptimizeConfig::default(), &OrbitalOptions::default())
        .map_err(|e| e.to_string())?;
    let d2 = (oo.result.energy - fci(&sys)).abs();
    ensure(d2 < 1e-6, format!("orbital-optimized H2(2,8): |ΔE| {d2:e}"))?;
    Ok(format!(
        "H2(2,4) |ΔE| {d1:.1e} in {} iterations; orbital-optimized H2(2,8) |ΔE| {d2:.1e} in {} macro-iterations",
        res.iterations,
        oo.macro_energies.len()
    ))
}

fn ordering() -> Check {
    let mut n = 0;
    let mut worst_gap = f64::INFINITY;
    for path in all_fixtures() {
        let sys = load_fixture(&path).unwrap().0;
        let h = build_qubit_hamiltonian(&sys, SpinLayout::default());
        let exact = exact_spectrum(&h, sys.n_qubits(), Some(sys.n_electrons), false).unwrap().ground_energy();
        let run = |name: &str, init: InitialGuess| {
            let c = build_ansatz(&sys, &AnsatzSpec::parse(name).unwrap()).unwrap();
            minimize(&c, &h, &OptimizeConfig { initial: init, ..Default::default() }).unwrap()
        };
        let spa = run("SPA", InitialGuess::Zero);
        let gs = run("SPA+GS", InitialGuess::Values(spa.params.clone()));
        let k2 = run("2-SPA", InitialGuess::Values(spa.params.clone()));
        let name = path.strip_prefix(fixture_path("")).unwrap_or(&path).display().to_string();
        ensure(spa.energy >= exact - 1e-10, format!("{name}: E(SPA) {} < FCI {exact}", spa.energy))?;
        ensure(gs.energy <= spa.energy + 1e-9, format!("{name}: E(SPA+GS) {} > E(SPA) {}", gs.energy, spa.energy))?;
        ensure(k2.energy <= spa.energy + 1e-9, format!("{name}: E(2-SPA) {} > E(SPA) {}", k2.energy, spa.energy))?;
        worst_gap = worst_gap.min(spa.energy - exact);
        n += 1;
    }
    Ok(format!("{n} fixtures, min E(SPA) − E(FCI) {worst_gap:.2e}"))
}

fn gradients() -> Check {
    let t = Instant::now();
    let mut worst = 0.0f64;
    let h = 1e-4;
    for rel in ["beh2/1.33.fcidump", "beh2/5.00.fcidump"] {
        let sys = fixture(rel);
        let obs = Observable::new(build_qubit_hamiltonian(&sys, SpinLayout::default()));
        let mut r = rng(77);
        for name in ["SPA", "UpCCD", "UpCCSD", "UpCCGSD"] {
            let c = build_ansatz(&sys, &AnsatzSpec::parse(name).unwrap()).unwrap();
            let f = EnergyFunction::new(&c, &obs);
            for _ in 0..10 {
                let x = random_params(&mut r, c.n_parameters());
                let g = f.gradient(&x, GradientMode::Analytic).unwrap();
                let mut w = x.clone();
                for i in 0..x.len() {
                    w[i] = x[i] + h;
                    let up = f.energy(&w).unwrap();
                    w[i] = x[i] - h;
                    let down = f.energy(&w).unwrap();
                    w[i] = x[i];
                    worst = worst.max((g[i] - (up - down) / (2.0 * h)).abs());
                }
            }
        }
    }
    ensure(worst < 1e-6, format!("max deviation {worst:e}"))?;
    within(t.elapsed(), 60.0)?;
    Ok(format!("max deviation {worst:.1e}, {:.2} s", t.elapsed().as_secs_f64()))
}

fn variance_diagnostic() -> Check {
    let sys = fixture("beh2/1.33.fcidump");
    let h = build_qubit_hamiltonian(&sys, SpinLayout::default());
    let obs = Observable::new(h.clone());
    let c = build_spa(&sys, Arrangement::Ladder).unwrap();
    let res = minimize(&c, &h, &OptimizeConfig::default()).unwrap();
    let opt = simulate(&c, &res.values_for(&c)).unwrap();
    let hf = simulate(&c, &vec![0.0; c.n_parameters()]).unwrap();
    let (v_opt, v_hf) = (obs.variance(&opt).unwrap(), obs.variance(&hf).unwrap());
    ensure(v_opt < v_hf, format!("Var(SPA) {v_opt:e} ≥ Var(HF) {v_hf:e}"))?;
    let s = exact_spectrum(&h, sys.n_qubits(), Some(sys.n_electrons), true).unwrap();
    let mut worst = 0.0f64;
    let mut total = 0.0;
    for k in 0..s.dimension() {
        let v = s.eigenvector(k).unwrap();
        worst = worst.max(obs.variance(&v).unwrap().abs());
        total += fidelity(&v, &opt).unwrap();
    }
    ensure(worst < 1e-8, format!("eigenstate variance {worst:e}"))?;
    ensure((total - 1.0).abs() < 1e-8, format!("fidelity sum {total}"))?;
    Ok(format!(
        "Var(HF) {v_hf:.3e} > Var(SPA) {v_opt:.3e}; {} eigenstates, max variance {worst:.1e}; fidelity sum − 1 = {:.1e}",
        s.dimension(),
        total - 1.0
    ))
}

/// Every excitation of 2-UpCCGSD on four orbitals, as one flat product.
fn excitation_product(layout: SpinLayout) -> Circuit {
    let n = 4;
    let mut c = Circuit::new(2 * n, Encoding::Plain);
    for layer in 0..2 {
        for p in 0..n {
            for q in p + 1..n {
                let i = c.parameter(&format!("d{layer}_{q}_{p}"));
                c.push(Gate::excitation(Excitation::jw_pair(q, p, n, layout).unwrap(), Angle::param(i)));
                for down in [false, true] {
                    let (t, f) = (layout.spin_orbital(q, down, n), layout.spin_orbital(p, down, n));
                    let i = c.parameter(&format!("s{layer}_{q}_{p}_{down}"));
                    c.push(Gate::excitation(Excitation::single(t, f, 2 * n).unwrap(), Angle::param(i)));
                    let i = c.parameter(&format!("a{layer}_{q}_{p}_{down}"));
                    c.push(Gate::excitation(Excitation::approx_single(t, f).unwrap(), Angle::param(i)));
                }
            }
        }
    }
    c
}

fn compile_equivalence() -> Check {
    let mut worst = 0.0f64;
    let mut r = rng(8);
    for layout in [SpinLayout::Interleaved, SpinLayout::Blocked] {
        let c = excitation_product(layout);
        for _ in 0..2 {
            let x = random_params(&mut r, c.n_parameters());
            let reference = dense_unitary(&c, &x);
            for level in [0, 1] {
                let compiled = compile(&c, level).unwrap();
                worst = worst.max(dense::distance_up_to_phase(&reference, &simulated_unitary(&compiled, &x)));
            }
        }
    }
    // pair circuits at level 2 are exact on the state they prepare
    let mut worst_state = 0.0f64;
    let sys = fixture("beh2/1.33.fcidump");
    for name in ["SPA", "HCB-SPA", "UpCCGD", "SPA+GS"] {
        let c = build_ansatz(&sys, &AnsatzSpec::parse(name).unwrap()).unwrap();
        for _ in 0..5 {
            let x = random_params(&mut r, c.n_parameters());
            let want = simulate(&c, &x).unwrap();
            for level in [0u8, 1, 2] {
                let Ok(k) = compile(&c, level) else { continue };
                let got = simulate(&k, &x).unwrap();
                worst_state = worst_state.max(max_abs_diff_up_to_phase(want.amplitudes(), got.amplitudes()));
            }
        }
    }
    ensure(worst < 1e-10, format!("unitary deviation {worst:e}"))?;
    ensure(worst_state < 1e-10, format!("state deviation {worst_state:e}"))?;
    Ok(format!("8-qubit unitaries (levels 0, 1) {worst:.1e}; prepared states (levels 0-2) {worst_state:.1e}"))
}

fn fixture_references() -> Check {
    let mut worst = 0.0f64;
    let paths = all_fixtures();
    for path in &paths {
        let (sys, r) = load_fixture(path).map_err(|e| e.to_string())?;
        let r = r.ok_or_else(|| format!("{} has no reference file", path.display()))?;
        worst = worst.max((fci(&sys) - r.energies.fci).abs());
    }
    ensure(worst < 1e-7, format!("max FCI deviation {worst:e}"))?;
    Ok(format!("{} fixtures, max FCI deviation {worst:.1e}", paths.len()))
}

fn main() {
    let checks: &[(&str, fn() -> Check)] = &[
        ("SPA resource counts", spa_resources),
        ("Compile-level structure (6,12)", level_structure),
        ("HCB / JW / separable equivalence", representations),
        ("Oracle exactness (H2 SPA, orbital-optimized SPA)", oracle_exactness),
        ("Variational and ordering properties", ordering),
        ("Analytic vs finite-difference gradients", gradients),
        ("Variance diagnostic", variance_diagnostic),
        ("Dense-unitary compile equivalence", compile_equivalence),
        ("Fixture reference energies", fixture_references),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
