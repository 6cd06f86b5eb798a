//! Molecular integrals, active spaces, pair-orbital sets and orbital rotations.

mod fcidump;
mod fixture;
mod hamiltonian;

pub use fcidump::{parse_fcidump, read_fcidump, write_fcidump};
pub use fixture::{load_fixture, ref_path, FixtureRef, ReferenceEnergies};
pub use hamiltonian::{build_hcb_hamiltonian, build_qubit_hamiltonian};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYM_TOL: f64 = 1e-10;

/// Two-electron integrals (pq|rs) in chemist notation, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoElectron {
    n: usize,
    data: Vec<f64>,
}

impl TwoElectron {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n * n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.n + q) * self.n + r) * self.n + s
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.data[self.idx(p, q, r, s)]
    }

    pub fn set(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        let i = self.idx(p, q, r, s);
        self.data[i] = v;
    }

    /// Sets all eight permutations of (pq|rs).
    pub fn set_symmetric(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            self.set(a, b, c, d, v);
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.get(p, q, r, s);
                        worst = worst
                            .max((v - self.get(q, p, r, s)).abs())
                            .max((v - self.get(p, q, s, r)).abs())
                            .max((v - self.get(r, s, p, q)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Restriction to the listed orbitals, in the listed order.
    pub fn restrict(&self, orbitals: &[usize]) -> Self {
        let m = orbitals.len();
        let mut out = Self::zeros(m);
        for (a, &p) in orbitals.iter().enumerate() {
            for (b, &q) in orbitals.iter().enumerate() {
                for (c, &r) in orbitals.iter().enumerate() {
                    for (d, &s) in orbitals.iter().enumerate() {
                        out.set(a, b, c, d, self.get(p, q, r, s));
                    }
                }
            }
        }
        out
    }

    /// (pq|rs) ← Σ C_ap C_bq C_cr C_ds (ab|cd), one index at a time.
    pub fn transform(&self, c: &DMatrix<f64>) -> Self {
        let n = self.n;
        let mut cur = self.data.clone();
        let mut next = vec![0.0; cur.len()];
        // Each pass contracts the leading index and rotates it to the back,
        // so after four passes the original index order is restored.
        for _ in 0..4 {
            for p in 0..n {
                for rest in 0..n * n * n {
                    let mut acc = 0.0;
                    for a in 0..n {
                        acc += c[(a, p)] * cur[a * n * n * n + rest];
                    }
                    next[rest * n + p] = acc;
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Self { n, data: cur }
    }
}

/// Ordered orbital sets S_k, one per electron pair; S_k[0] is the reference orbital.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSets {
    pub n_orbitals: usize,
    pub sets: Vec<Vec<usize>>,
}

impl PairSets {
    pub fn new(n_orbitals: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let ps = Self { n_orbitals, sets };
        ps.validate()?;
        Ok(ps)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.n_orbitals];
        for (k, s) in self.sets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidSystem(format!("pair set {k} is empty")));
            }
            for &p in s {
                if p >= self.n_orbitals {
                    return Err(Error::IndexOutOfRange { index: p, limit: self.n_orbitals });
                }
                if seen[p] {
                    return Err(Error::InvalidSystem(format!("orbital {p} appears in two pair sets")));
                }
                seen[p] = true;
            }
        }
        Ok(())
    }

    pub fn n_pairs(&self) -> usize {
        self.sets.len()
    }

    pub fn references(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s[0]).collect()
    }

    /// Σ_k (|S_k| − 1).
    pub fn n_spa_parameters(&self) -> usize {
        self.sets.iter().map(|s| s.len() - 1).sum()
    }

    /// Index of the set containing orbital p.
    pub fn owner(&self, p: usize) -> Option<usize> {
        self.sets.iter().position(|s| s.contains(&p))
    }

    /// Pair sets built from a list of set sizes, numbering orbitals consecutively.
    pub fn consecutive(sizes: &[usize]) -> Self {
        let mut next = 0;
        let sets = sizes
            .iter()
            .map(|&m| {
                let s: Vec<usize> = (next..next + m).collect();
                next += m;
                s
            })
            .collect();
        Self { n_orbitals: next, sets }
    }
}

#[derive(Clone, Debug)]
pub struct MolecularSystem {
    pub n_electrons: usize,
    pub n_orbitals: usize,
    /// Nuclear repulsion plus, after folding, the frozen-core energy.
    pub e_nuclear: f64,
    pub h: DMatrix<f64>,
    pub g: TwoElectron,
    pub pair_sets: PairSets,
    /// Frozen orbitals, as indices of the originating integral file.
    pub frozen: Vec<usize>,
    /// For each current orbital, its index in the originating integral file.
    pub orbital_labels: Vec<usize>,
    pub orbsym: Vec<u32>,
    pub isym: u32,
    default_pairs: bool,
}

impl MolecularSystem {
    pub fn new(n_electrons: usize, e_nuclear: f64, h: DMatrix<f64>, g: TwoElectron) -> Result<Self> {
        let n = h.nrows();
        if h.ncols() != n || g.n() != n {
            return Err(Error::InvalidSystem("integral dimensions disagree".into()));
        }
        if n_electrons % 2 != 0 {
            return Err(Error::InvalidSystem(format!("odd electron count {n_electrons}")));
        }
        if n_electrons / 2 > n {
            return Err(Error::InvalidSystem(format!(
                "{n_electrons} electrons do not fit in {n} spatial orbitals"
            )));
        }
        let asym = (&h - h.transpose()).amax();
        if asym > SYM_TOL {
            return Err(Error::InvalidSystem(format!("h is not symmetric (deviation {asym:e})")));
        }
        let gasym = g.max_asymmetry();
        if gasym > SYM_TOL {
            return Err(Error::InvalidSystem(format!(
                "two-electron integrals lack 8-fold symmetry (deviation {gasym:e})"
            )));
        }
        let mut sys = Self {
            n_electrons,
            n_orbitals: n,
            e_nuclear,
            h,
            g,
            pair_sets: PairSets { n_orbitals: n, sets: Vec::new() },
            frozen: Vec::new(),
            orbital_labels: (0..n).collect(),
            orbsym: vec![1; n],
            isym: 1,
            default_pairs: true,
        };
        sys.pair_sets = sys.default_pair_sets();
        Ok(sys)
    }

    pub fn n_pairs(&self) -> usize {
        self.n_electrons / 2
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_orbitals
    }

    pub fn has_default_pair_sets(&self) -> bool {
        self.default_pairs
    }

    /// Orbitals sorted by h_pp (ties by index): the lowest N_e/2 become references,
    /// the rest are dealt round-robin to the pairs in that order.
    pub fn default_pair_sets(&self) -> PairSets {
        let n_pairs = self.n_pairs();
        let mut order: Vec<usize> = (0..self.n_orbitals).collect();
        order.sort_by(|&a, &b| self.h[(a, a)].total_cmp(&self.h[(b, b)]).then(a.cmp(&b)));
        let mut sets: Vec<Vec<usize>> = order[..n_pairs].iter().map(|&p| vec![p]).collect();
        if n_pairs > 0 {
            for (j, &p) in order[n_pairs..].iter().enumerate() {
                sets[j % n_pairs].push(p);
            }
        }
        PairSets { n_orbitals: self.n_orbitals, sets }
    }

    /// Replaces the pair sets; one set per electron pair is required.
    pub fn with_pair_sets(mut self, sets: Vec<Vec<usize>>) -> Result<Self> {
        let ps = PairSets::new(self.n_orbitals, sets)?;
        if ps.n_pairs() != self.n_pairs() {
            return Err(Error::InvalidSystem(format!(
                "{} pair sets given for {} electron pairs",
                ps.n_pairs(),
                self.n_pairs()
            )));
        }
        self.pair_sets = ps;
        self.default_pairs = false;
        Ok(self)
    }

    /// Hartree-Fock energy of the determinant occupying `occupied` spatial orbitals twice.
    pub fn determinant_energy(&self, occupied: &[usize]) -> f64 {
        let mut e = self.e_nuclear;
        for &i in occupied {
            e += 2.0 * self.h[(i, i)];
            for &j in occupied {
                e += 2.0 * self.g.get(i, i, j, j) - self.g.get(i, j, j, i);
            }
        }
        e
    }

    /// Energy of the determinant built from the pair reference orbitals.
    pub fn reference_energy(&self) -> f64 {
        self.determinant_energy(&self.pair_sets.references())
    }

    /// Folds `frozen` into a constant and an effective one-body term and keeps `active`.
    pub fn apply_active_space(&self, active: &[usize], frozen: &[usize]) -> Result<Self> {
        let n = self.n_orbitals;
        for &p in active.iter().chain(frozen) {
            if p >= n {
                return Err(Error::IndexOutOfRange { index: p, limit: n });
            }
        }
        let mut all: Vec<usize> = active.iter().chain(frozen).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSystem("active and frozen lists overlap or repeat".into()));
        }
        if let Some(&f) = frozen.iter().find(|&&f| f >= self.n_pairs()) {
            return Err(Error::InvalidSystem(format!("frozen orbital {f} is not occupied")));
        }
        let n_electrons = self.n_electrons - 2 * frozen.len();
        if n_electrons / 2 > active.len() {
            return Err(Error::InvalidSystem(format!(
                "{n_electrons} active electrons do not fit in {} active orbitals",
                active.len()
            )));
        }

        let mut e_core = self.e_nuclear;
        let mut h_eff = self.h.clone();
        for &i in frozen {
            e_core += 2.0 * self.h[(i, i)];
            for &j in frozen {
                e_core += 2.0 * self.g.get(i, i, j, j) - self.g.get(i, j, j, i);
            }
            for p in 0..n {
                for q in 0..n {
                    h_eff[(p, q)] += 2.0 * self.g.get(p, q, i, i) - self.g.get(p, i, i, q);
                }
            }
        }
        let m = active.len();
        let h = DMatrix::from_fn(m, m, |a, b| h_eff[(active[a], active[b])]);
        let g = self.g.restrict(active);

        let mut frozen_labels = self.frozen.clone();
        frozen_labels.extend(frozen.iter().map(|&f| self.orbital_labels[f]));
        frozen_labels.sort_unstable();

        let mut out = Self {
            n_electrons,
            n_orbitals: m,
            e_nuclear: e_core,
            h,
            g,
            pair_sets: PairSets { n_orbitals: m, sets: Vec::new() },
            frozen: frozen_labels,
            orbital_labels: active.iter().map(|&p| self.orbital_labels[p]).collect(),
            orbsym: active.iter().map(|&p| self.orbsym[p]).collect(),
            isym: self.isym,
            default_pairs: self.default_pairs,
        };
        out.pair_sets = if self.default_pairs {
            out.default_pair_sets()
        } else {
            self.restrict_pair_sets(active, frozen)?
        };
        Ok(out)
    }

    fn restrict_pair_sets(&self, active: &[usize], frozen: &[usize]) -> Result<PairSets> {
        let mut sets = Vec::new();
        for s in &self.pair_sets.sets {
            if frozen.contains(&s[0]) {
                if let Some(p) = s[1..].iter().find(|p| !frozen.contains(p) && active.contains(p)) {
                    return Err(Error::InvalidSystem(format!(
                        "pair with frozen reference {} still owns active orbital {p}",
                        s[0]
                    )));
                }
                continue;
            }
            let Some(r) = active.iter().position(|&a| a == s[0]) else {
                return Err(Error::InvalidSystem(format!(
                    "reference orbital {} is neither active nor frozen",
                    s[0]
                )));
            };
            let mut mapped = vec![r];
            for &p in &s[1..] {
                if frozen.contains(&p) {
                    return Err(Error::InvalidSystem(format!(
                        "frozen orbital {p} sits in a non-reference slot of a pair set"
                    )));
                }
                if let Some(a) = active.iter().position(|&x| x == p) {
                    mapped.push(a);
                }
            }
            sets.push(mapped);
        }
        PairSets::new(active.len(), sets)
    }

    /// Integrals in the rotated basis C = exp(κ): h ← CᵀhC and the matching 4-index transform.
    pub fn rotate_orbitals(&self, rot: &OrbitalRotation) -> Result<Self> {
        if rot.kappa.nrows() != self.n_orbitals || rot.kappa.ncols() != self.n_orbitals {
            return Err(Error::DimensionMismatch { expected: self.n_orbitals, got: rot.kappa.nrows() });
        }
        let c = rot.matrix();
        let h = c.transpose() * &self.h * &c;
        let h = (&h + h.transpose()) * 0.5;
        let g = self.g.transform(&c);
        Ok(Self { h, g, ..self.clone() })
    }
}

/// Real antisymmetric generator κ of the orbital rotation exp(κ).
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitalRotation {
    pub kappa: DMatrix<f64>,
}

impl OrbitalRotation {
    pub fn new(kappa: DMatrix<f64>) -> Result<Self> {
        if kappa.nrows() != kappa.ncols() {
            return Err(Error::InvalidSystem("κ must be square".into()));
        }
        let dev = (&kappa + kappa.transpose()).amax();
        if dev > 1e-12 {
            return Err(Error::InvalidSystem(format!("κ is not antisymmetric (deviation {dev:e})")));
        }
        Ok(Self { kappa })
    }

    pub fn zero(n: usize) -> Self {
        Self { kappa: DMatrix::zeros(n, n) }
    }

    /// κ from its strictly lower triangle, row by row: κ_pq = v, κ_qp = −v for p > q.
    pub fn from_lower_triangle(n: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), n * (n - 1) / 2);
        let mut kappa = DMatrix::zeros(n, n);
        let mut it = values.iter();
        for p in 1..n {
            for q in 0..p {
                let v = *it.next().unwrap();
                kappa[(p, q)] = v;
                kappa[(q, p)] = -v;
            }
        }
        Self { kappa }
    }

    pub fn inverse(&self) -> Self {
        Self { kappa: -&self.kappa }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        self.kappa.clone().exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn toy(n: usize, n_electrons: usize, seed: u64) -> MolecularSystem {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut h = DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.3..0.3));
        h = (&h + h.transpose()) * 0.5;
        for p in 0..n {
            h[(p, p)] = -2.0 + 0.7 * p as f64;
        }
        let mut g = TwoElectron::zeros(n);
        for p in 0..n {
            for q in 0..=p {
                for r in 0..n {
                    for s in 0..=r {
                        if p * (p + 1) / 2 + q >= r * (r + 1) / 2 + s {
                            let mut v = rng.random_range(-0.05..0.05);
                            if p == q && r == s {
                                v += 0.5;
                            }
                            g.set_symmetric(p, q, r, s, v);
                        }
                    }
                }
            }
        }
        MolecularSystem::new(n_electrons, 0.7, h, g).unwrap()
    }

    #[test]
    fn default_pairs_round_robin() {
        let sys = toy(6, 4, 1);
        assert_eq!(sys.pair_sets.sets, vec![vec![0, 2, 4], vec![1, 3, 5]]);
    }

    #[test]
    fn rejects_odd_electrons() {
        let sys = toy(2, 2, 1);
        assert!(MolecularSystem::new(3, 0.0, sys.h.clone(), sys.g.clone()).is_err());
    }

    #[test]
    fn rotation_round_trip() {
        let sys = toy(4, 2, 3);
        let rot = OrbitalRotation::from_lower_triangle(4, &[0.1, -0.2, 0.3, 0.05, 0.4, -0.1]);
        let back = sys.rotate_orbitals(&rot).unwrap().rotate_orbitals(&rot.inverse()).unwrap();
        assert!((&back.h - &sys.h).amax() < 1e-10);
        let dg = back
            .g
            .as_slice()
            .iter()
            .zip(sys.g.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dg < 1e-10);
        let zero = sys.rotate_orbitals(&OrbitalRotation::zero(4)).unwrap();
        assert!((&zero.h - &sys.h).amax() < 1e-14);
    }

    #[test]
    fn kappa_must_be_antisymmetric() {
        let mut k = DMatrix::zeros(2, 2);
        k[(0, 1)] = 0.3;
        assert!(OrbitalRotation::new(k).is_err());
    }

    #[test]
    fn freezing_nothing_is_identity() {
        let sys = toy(4, 2, 5);
        let same = sys.apply_active_space(&[0, 1, 2, 3], &[]).unwrap();
        assert_eq!(same.h, sys.h);
        assert_eq!(same.g, sys.g);
        assert_eq!(same.e_nuclear, sys.e_nuclear);
        assert_eq!(same.pair_sets, sys.pair_sets);
    }

    #[test]
    fn frozen_orbital_in_non_reference_slot_is_rejected() {
        let sys = toy(4, 4, 5).with_pair_sets(vec![vec![1, 0], vec![2, 3]]).unwrap();
        assert!(sys.apply_active_space(&[1, 2, 3], &[0]).is_err());
        let ok = toy(4, 4, 5).with_pair_sets(vec![vec![0], vec![1, 2, 3]]).unwrap();
        let red = ok.apply_active_space(&[1, 2, 3], &[0]).unwrap();
        assert_eq!(red.pair_sets.sets, vec![vec![0, 1, 2]]);
        assert_eq!(red.frozen, vec![0]);
        assert_eq!(red.orbital_labels, vec![1, 2, 3]);
    }

    #[test]
    fn folded_reference_energy_matches_full() {
        let sys = toy(5, 4, 9);
        let red = sys.apply_active_space(&[1, 2, 3, 4], &[0]).unwrap();
        // Reference of the reduced system is orbital 1 of the original.
        let full = sys.determinant_energy(&[0, 1]);
        let folded = red.determinant_energy(&[0]);
        assert!((full - folded).abs() < 1e-12);
    }
}
