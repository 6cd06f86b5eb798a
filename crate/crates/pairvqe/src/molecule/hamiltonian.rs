use std::collections::HashMap;

use num_complex::Complex64;

use super::MolecularSystem;
use crate::fermion::{jw_ladder, Ladder, SpinLayout};
use crate::pauli::{PauliString, PauliSum};

const INTEGRAL_CUTOFF: f64 = 1e-14;

fn accumulate(acc: &mut HashMap<(u128, u128), Complex64>, coeff: f64, ops: &[(usize, Ladder)], images: &[[PauliSum; 2]]) {
    let mut prod = vec![PauliString::identity(Complex64::new(coeff, 0.0))];
    for &(p, l) in ops {
        let img = &images[p][l as usize];
        let mut next = Vec::with_capacity(prod.len() * img.len());
        for a in &prod {
            for b in img.terms() {
                next.push(a.multiply(b));
            }
        }
        prod = next;
    }
    for t in prod {
        *acc.entry(t.key()).or_default() += t.coeff;
    }
}

/// JW image of E_nuc + Σ h_pq a†_pσ a_qσ + ½ Σ (pq|rs) a†_pσ a†_rτ a_sτ a_qσ.
pub fn build_qubit_hamiltonian(sys: &MolecularSystem, layout: SpinLayout) -> PauliSum {
    let n = sys.n_orbitals;
    let images: Vec<[PauliSum; 2]> = (0..2 * n)
        .map(|i| [jw_ladder(i, Ladder::Create), jw_ladder(i, Ladder::Annihilate)])
        .collect();
    let so = |p: usize, spin: usize| layout.spin_orbital(p, spin == 1, n);
    let mut acc: HashMap<(u128, u128), Complex64> = HashMap::new();
    acc.insert((0, 0), Complex64::new(sys.e_nuclear, 0.0));
    for p in 0..n {
        for q in 0..n {
            let v = sys.h[(p, q)];
            if v.abs() < INTEGRAL_CUTOFF {
                continue;
            }
            for s in 0..2 {
                accumulate(&mut acc, v, &[(so(p, s), Ladder::Create), (so(q, s), Ladder::Annihilate)], &images);
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = sys.g.get(p, q, r, s);
                    if v.abs() < INTEGRAL_CUTOFF {
                        continue;
                    }
                    for sig in 0..2 {
                        for tau in 0..2 {
                            if so(p, sig) == so(r, tau) || so(q, sig) == so(s, tau) {
                                continue;
                            }
                            accumulate(
                                &mut acc,
                                0.5 * v,
                                &[
                                    (so(p, sig), Ladder::Create),
                                    (so(r, tau), Ladder::Create),
                                    (so(s, tau), Ladder::Annihilate),
                                    (so(q, sig), Ladder::Annihilate),
                                ],
                                &images,
                            );
                        }
                    }
                }
            }
        }
    }
    PauliSum::from_terms(acc.into_iter().map(|((x, z), c)| PauliString::from_masks(x, z, c)))
}

/// Seniority-zero Hamiltonian on one qubit per spatial orbital (qubit set = orbital doubly occupied):
/// E_nuc + Σ_p (2h_pp + (pp|pp)) n_p + Σ_{p<q} (4(pp|qq) − 2(pq|qp)) n_p n_q
///       + Σ_{p<q} (pq|pq) (σ⁺_p σ⁻_q + σ⁻_p σ⁺_q).
pub fn build_hcb_hamiltonian(sys: &MolecularSystem) -> PauliSum {
    let n = sys.n_orbitals;
    let c = |v: f64| Complex64::new(v, 0.0);
    let z = |p: usize| 1u128 << p;
    let mut terms = vec![PauliString::identity(c(sys.e_nuclear))];
    for p in 0..n {
        let e = 2.0 * sys.h[(p, p)] + sys.g.get(p, p, p, p);
        // n_p = (1 − Z_p)/2
        terms.push(PauliString::identity(c(0.5 * e)));
        terms.push(PauliString::from_masks(0, z(p), c(-0.5 * e)));
    }
    for p in 0..n {
        for q in p + 1..n {
            let w = 4.0 * sys.g.get(p, p, q, q) - 2.0 * sys.g.get(p, q, q, p);
            // n_p n_q = (1 − Z_p − Z_q + Z_p Z_q)/4
            terms.push(PauliString::identity(c(0.25 * w)));
            terms.push(PauliString::from_masks(0, z(p), c(-0.25 * w)));
            terms.push(PauliString::from_masks(0, z(q), c(-0.25 * w)));
            terms.push(PauliString::from_masks(0, z(p) | z(q), c(0.25 * w)));
            let k = sys.g.get(p, q, p, q);
            let xx = z(p) | z(q);
            terms.push(PauliString::from_masks(xx, 0, c(0.5 * k)));
            terms.push(PauliString::from_masks(xx, xx, c(0.5 * k)));
        }
    }
    PauliSum::from_terms(terms)
}
