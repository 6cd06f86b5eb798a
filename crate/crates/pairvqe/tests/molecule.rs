mod common;

use common::*;
use nalgebra::DMatrix;
use pairvqe::fermion::{jordan_wigner, FermionOperator, SpinLayout};
use pairvqe::molecule::*;
use pairvqe::pauli::PauliSum;
use pairvqe::sim::{exact_spectrum, Observable, Statevector};
use rand::Rng;

fn number_operator(n_qubits: usize) -> PauliSum {
    let op = (0..n_qubits).fold(FermionOperator::zero(), |acc, p| acc.add(&FermionOperator::number(p)));
    jordan_wigner(&op, n_qubits).unwrap()
}

fn fci(sys: &MolecularSystem, layout: SpinLayout) -> f64 {
    let h = build_qubit_hamiltonian(sys, layout);
    exact_spectrum(&h, sys.n_qubits(), Some(sys.n_electrons), false).unwrap().ground_energy()
}

fn hf_state(sys: &MolecularSystem, layout: SpinLayout) -> Statevector {
    let n = sys.n_orbitals;
    let b = sys
        .pair_sets
        .references()
        .iter()
        .fold(0usize, |b, &r| b | 1 << layout.up(r, n) | 1 << layout.down(r, n));
    Statevector::basis(sys.n_qubits(), b).unwrap()
}

#[test]
fn h2_minimal_basis_has_fifteen_terms() {
    let sys = fixture("h2/sto3g_0.74.fcidump");
    for layout in [SpinLayout::Interleaved, SpinLayout::Blocked] {
        let h = build_qubit_hamiltonian(&sys, layout);
        assert_eq!(h.len(), 15);
        assert!(h.is_hermitian(1e-12));
        assert!(h.terms().iter().all(|t| t.coeff.im.abs() < 1e-14));
    }
}

#[test]
fn every_fixture_reproduces_its_reference_energies() {
    let paths = all_fixtures();
    assert_eq!(paths.len(), 18);
    for path in paths {
        let (sys, r) = load_fixture(&path).unwrap();
        let r = r.expect("reference file");
        assert_eq!(sys.n_orbitals, r.active.len());
        let e = fci(&sys, SpinLayout::default());
        assert!((e - r.energies.fci).abs() < 1e-7, "{}: {e} vs {}", path.display(), r.energies.fci);
        let hf = sys.reference_energy();
        assert!((hf - r.energies.scf).abs() < 1e-7, "{}: {hf} vs {}", path.display(), r.energies.scf);
        let h = build_qubit_hamiltonian(&sys, SpinLayout::default());
        let expect = Observable::new(h).expectation(&hf_state(&sys, SpinLayout::default())).unwrap();
        assert!((expect - hf).abs() < 1e-9);
    }
}

#[test]
fn full_space_energies_match_where_tractable() {
    for rel in ["lih/2.40.fcidump", "lih/3.20.fcidump", "h2/631g_1.50.fcidump"] {
        let path = fixture_path(rel);
        let full = read_fcidump(&path).unwrap();
        let r: FixtureRef = serde_json::from_str(&std::fs::read_to_string(ref_path(&path)).unwrap()).unwrap();
        let want = r.energies.fci_full.unwrap();
        assert!((fci(&full, SpinLayout::Interleaved) - want).abs() < 1e-7, "{rel}");
    }
}

#[test]
fn layouts_share_a_spectrum() {
    let sys = fixture("lih/1.60.fcidump");
    let a = exact_spectrum(&build_qubit_hamiltonian(&sys, SpinLayout::Interleaved), 10, Some(2), false).unwrap();
    let b = exact_spectrum(&build_qubit_hamiltonian(&sys, SpinLayout::Blocked), 10, Some(2), false).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((x - y).abs() < 1e-9);
    }
}

#[test]
fn active_space_reductions() {
    let n2 = fixture("n2/1.10.fcidump");
    assert_eq!((n2.n_orbitals, n2.n_electrons, n2.n_qubits()), (6, 6, 12));
    assert_eq!(n2.frozen, vec![0, 1, 2, 3]);
    assert_eq!(n2.pair_sets.sets, vec![vec![0, 4], vec![1, 3], vec![2, 5]]);
    let c2h6 = fixture("c2h6/1.54.fcidump");
    assert_eq!((c2h6.n_orbitals, c2h6.n_electrons), (6, 2));
    assert_eq!(c2h6.orbital_labels, vec![6, 9, 10, 11, 12, 13]);
    let beh2 = fixture("beh2/2.50.fcidump");
    assert_eq!((beh2.n_orbitals, beh2.n_electrons), (4, 4));
    assert!(!beh2.has_default_pair_sets());
}

#[test]
fn frozen_core_folding_preserves_determinant_energies() {
    let path = fixture_path("n2/1.60.fcidump");
    let full = read_fcidump(&path).unwrap();
    let r: FixtureRef = serde_json::from_str(&std::fs::read_to_string(ref_path(&path)).unwrap()).unwrap();
    let reduced = full.apply_active_space(&r.active, &r.frozen).unwrap();
    // any doubly occupied active choice plus the frozen core
    for occ in [vec![0, 1, 2], vec![0, 3, 5], vec![3, 4, 5]] {
        let mut all: Vec<usize> = r.frozen.clone();
        all.extend(occ.iter().map(|&i| r.active[i]));
        let e_full = full.determinant_energy(&all);
        let e_red = reduced.determinant_energy(&occ);
        assert!((e_full - e_red).abs() < 1e-9);
    }
}

#[test]
fn hamiltonian_conserves_particle_number() {
    for rel in ["h2/631g_0.74.fcidump", "beh2/1.33.fcidump"] {
        let sys = fixture(rel);
        for layout in [SpinLayout::Interleaved, SpinLayout::Blocked] {
            let h = build_qubit_hamiltonian(&sys, layout);
            let comm = h.commutator(&number_operator(sys.n_qubits())).simplify(1e-12);
            assert!(comm.is_empty(), "{rel}: {comm}");
        }
    }
}

/// ⟨b'|H_hcb|b⟩ equals the JW matrix element between the doubly-occupied images of b and b'.
#[test]
fn hcb_hamiltonian_is_the_seniority_zero_block() {
    for rel in ["h2/631g_2.50.fcidump", "beh2/5.00.fcidump", "lih/3.20.fcidump"] {
        let sys = fixture(rel);
        let n = sys.n_orbitals;
        assert!(n <= 5);
        let hcb = Observable::new(build_hcb_hamiltonian(&sys));
        for layout in [SpinLayout::Interleaved, SpinLayout::Blocked] {
            let jw = Observable::new(build_qubit_hamiltonian(&sys, layout));
            let image = |b: usize| (0..n).filter(|p| b >> p & 1 == 1).fold(0usize, |a, p| a | 1 << layout.up(p, n) | 1 << layout.down(p, n));
            for b in 0..1usize << n {
                let hb = hcb.apply(&Statevector::basis(n, b).unwrap()).unwrap();
                let jb = jw.apply(&Statevector::basis(2 * n, image(b)).unwrap()).unwrap();
                for b2 in 0..1usize << n {
                    let x = hb.amplitudes()[b2];
                    let y = jb.amplitudes()[image(b2)];
                    assert!((x - y).norm() < 1e-10, "{rel} {b}->{b2}: {x} vs {y}");
                }
            }
        }
    }
}

#[test]
fn orbital_rotation_leaves_spectrum_unchanged() {
    let sys = fixture("h2/631g_0.74.fcidump");
    let n = sys.n_orbitals;
    let mut r = rng(7);
    let vals: Vec<f64> = (0..n * (n - 1) / 2).map(|_| r.random_range(-0.7..0.7)).collect();
    let rot = OrbitalRotation::from_lower_triangle(n, &vals);
    let c = rot.matrix();
    assert!((c.transpose() * &c - DMatrix::identity(n, n)).amax() < 1e-12);
    let rotated = sys.rotate_orbitals(&rot).unwrap();
    let spec = |s: &MolecularSystem| {
        exact_spectrum(&build_qubit_hamiltonian(s, SpinLayout::default()), 2 * n, Some(2), false).unwrap().eigenvalues
    };
    let (a, b) = (spec(&sys), spec(&rotated));
    assert_eq!(a.len(), 28);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-9);
    }
    let back = rotated.rotate_orbitals(&rot.inverse()).unwrap();
    assert!((back.h - sys.h).amax() < 1e-12);
}

#[test]
fn empty_integrals_give_a_constant() {
    let sys = MolecularSystem::new(2, 0.75, DMatrix::zeros(3, 3), TwoElectron::zeros(3)).unwrap();
    let h = build_qubit_hamiltonian(&sys, SpinLayout::Interleaved);
    assert_eq!(h.len(), 1);
    assert!((h.constant().re - 0.75).abs() < 1e-15);
    assert!((sys.reference_energy() - 0.75).abs() < 1e-15);
}

#[test]
fn fcidump_round_trip_on_a_fixture() {
    let sys = read_fcidump(fixture_path("lih/1.60.fcidump")).unwrap();
    let back = parse_fcidump(&write_fcidump(&sys)).unwrap();
    assert_eq!(back.n_orbitals, sys.n_orbitals);
    assert_eq!(back.n_electrons, sys.n_electrons);
    assert!((back.e_nuclear - sys.e_nuclear).abs() < 1e-14);
    assert!((back.h - &sys.h).amax() < 1e-14);
    let diff = back.g.as_slice().iter().zip(sys.g.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-14);
}

#[test]
fn pair_set_validation() {
    assert!(PairSets::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
    assert!(PairSets::new(3, vec![vec![0, 3]]).is_err());
    assert!(PairSets::new(3, vec![vec![]]).is_err());
    let sys = fixture("h2/631g_0.74.fcidump");
    assert!(sys.clone().with_pair_sets(vec![vec![0], vec![1]]).is_err());
    let ok = sys.with_pair_sets(vec![vec![0, 2]]).unwrap();
    assert_eq!(ok.pair_sets.references(), vec![0]);
}
