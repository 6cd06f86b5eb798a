use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Angle, Circuit, Encoding, Excitation, Gate, HcbPrefix};
use crate::error::{Error, Result};
use crate::fermion::SpinLayout;
use crate::molecule::{MolecularSystem, PairSets};

/// Order of the pair excitations inside one orbital set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arrangement {
    /// S[l] → S[l+1], a nearest-neighbour chain.
    #[default]
    Ladder,
    /// S[0] → S[l] for every l.
    Canonical,
}

impl FromStr for Arrangement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ladder" => Ok(Arrangement::Ladder),
            "canonical" => Ok(Arrangement::Canonical),
            _ => Err(Error::InvalidAnsatz(format!("unknown arrangement `{s}`"))),
        }
    }
}

/// Excitation flags of one block: generalized, approximate singles, singles, doubles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Excitations {
    pub generalized: bool,
    pub approximate: bool,
    pub singles: bool,
    pub doubles: bool,
}

impl Excitations {
    fn parse(tok: &str) -> Result<Self> {
        let upper = tok.to_ascii_uppercase();
        let body = upper.strip_prefix("UPCC").unwrap_or(&upper);
        if body.is_empty() {
            return Err(Error::InvalidAnsatz(format!("`{tok}` names no excitations")));
        }
        let mut e = Excitations::default();
        for c in body.chars() {
            let slot = match c {
                'G' => &mut e.generalized,
                'A' => &mut e.approximate,
                'S' => &mut e.singles,
                'D' => &mut e.doubles,
                _ => return Err(Error::InvalidAnsatz(format!("unknown flag `{c}` in `{tok}`"))),
            };
            if *slot {
                return Err(Error::InvalidAnsatz(format!("flag `{c}` repeated in `{tok}`")));
            }
            *slot = true;
        }
        Ok(e)
    }

    fn check(&self) -> Result<()> {
        if !self.singles && !self.doubles {
            return Err(Error::InvalidAnsatz("no singles or doubles requested".into()));
        }
        if self.approximate && !self.singles {
            return Err(Error::InvalidAnsatz("A modifies singles and needs S".into()));
        }
        Ok(())
    }

    fn letters(&self) -> String {
        let mut s = String::new();
        for (on, c) in [(self.generalized, 'G'), (self.approximate, 'A'), (self.singles, 'S'), (self.doubles, 'D')] {
            if on {
                s.push(c);
            }
        }
        s
    }
}

/// A parsed ansatz name: `[k-][HCB-][SPA][-][UpCC]{G}{A}{S}{D}[+{G}{A}{S}{D}]`.
///
/// A `+` suffix appends one extra block of JW excitations after everything else,
/// e.g. `SPA+GS` adds generalized singles to SPA.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSpec {
    pub hcb: bool,
    pub spa: bool,
    pub generalized: bool,
    pub approximate: bool,
    pub singles: bool,
    pub doubles: bool,
    pub k: usize,
    pub arrangement: Arrangement,
    pub layout: SpinLayout,
    /// One parameter per spatial single instead of one per spin channel.
    pub shared_spin: bool,
    pub extension: Option<Excitations>,
}

impl AnsatzSpec {
    pub fn spa() -> Self {
        Self {
            hcb: false,
            spa: true,
            generalized: false,
            approximate: false,
            singles: false,
            doubles: true,
            k: 1,
            arrangement: Arrangement::Ladder,
            layout: SpinLayout::default(),
            shared_spin: false,
            extension: None,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        let (base, ext) = match name.split_once('+') {
            Some((b, e)) => (b, Some(e)),
            None => (name, None),
        };
        let mut spec = AnsatzSpec { spa: false, doubles: false, ..AnsatzSpec::spa() };
        let tokens: Vec<&str> = base.split('-').collect();
        if tokens.iter().any(|t| t.is_empty()) {
            return Err(Error::InvalidAnsatz(format!("malformed name `{name}`")));
        }
        let mut rest = &tokens[..];
        if let Some(first) = rest.first() {
            if first.chars().all(|c| c.is_ascii_digit()) {
                spec.k = first.parse().map_err(|_| Error::InvalidAnsatz(format!("bad layer count `{first}`")))?;
                rest = &rest[1..];
            }
        }
        let mut flags = None;
        for (i, tok) in rest.iter().enumerate() {
            match tok.to_ascii_uppercase().as_str() {
                "HCB" if !spec.hcb && !spec.spa && flags.is_none() => spec.hcb = true,
                "SPA" if !spec.spa && flags.is_none() => spec.spa = true,
                _ if i + 1 == rest.len() && flags.is_none() => flags = Some(Excitations::parse(tok)?),
                _ => return Err(Error::InvalidAnsatz(format!("unexpected `{tok}` in `{name}`"))),
            }
        }
        let e = flags.unwrap_or_default();
        spec.generalized = e.generalized;
        spec.approximate = e.approximate;
        spec.singles = e.singles;
        spec.doubles = e.doubles || spec.spa;
        if flags.is_none() && !spec.spa {
            return Err(Error::InvalidAnsatz(format!("`{name}` names no excitations")));
        }
        spec.extension = ext.map(Excitations::parse).transpose()?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidAnsatz("layer count must be at least 1".into()));
        }
        self.block().check()?;
        if self.hcb && self.singles {
            return Err(Error::InvalidAnsatz("HCB cannot be combined with singles".into()));
        }
        if let Some(ext) = &self.extension {
            ext.check()?;
            if self.hcb {
                return Err(Error::InvalidAnsatz("HCB circuits cannot take a JW extension".into()));
            }
        }
        Ok(())
    }

    fn block(&self) -> Excitations {
        Excitations {
            generalized: self.generalized,
            approximate: self.approximate,
            singles: self.singles,
            doubles: self.doubles,
        }
    }

    pub fn with_arrangement(mut self, a: Arrangement) -> Self {
        self.arrangement = a;
        self
    }

    pub fn with_layout(mut self, l: SpinLayout) -> Self {
        self.layout = l;
        self
    }

    /// True if all gates act inside single pair sets and no singles are present.
    pub fn is_separable(&self) -> bool {
        self.spa && !self.singles && self.k == 1 && self.extension.is_none()
    }
}

impl FromStr for AnsatzSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AnsatzSpec::parse(s)
    }
}

impl fmt::Display for AnsatzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.k > 1 {
            parts.push(self.k.to_string());
        }
        if self.hcb {
            parts.push("HCB".to_string());
        }
        if self.spa {
            parts.push("SPA".to_string());
        }
        let block = self.block();
        if !self.spa || block != (Excitations { doubles: true, ..Default::default() }) {
            parts.push(format!("UpCC{}", block.letters()));
        }
        write!(f, "{}", parts.join("-"))?;
        if let Some(e) = &self.extension {
            write!(f, "+{}", e.letters())?;
        }
        Ok(())
    }
}

/// One CNOT(p↑, p↓) per orbital: maps a hard-core-boson state onto the JW register.
pub fn hcb_to_jw_bridge(n_orbitals: usize, layout: SpinLayout) -> Circuit {
    let mut c = Circuit::new(
        2 * n_orbitals,
        Encoding::Jw {
            n_orbitals,
            layout,
            prefix: Some(HcbPrefix { bridge_start: 0, bridge_end: n_orbitals }),
        },
    );
    for p in 0..n_orbitals {
        c.push(Gate::cnot(layout.up(p, n_orbitals), layout.down(p, n_orbitals)));
    }
    c
}

pub fn build_spa(sys: &MolecularSystem, arrangement: Arrangement) -> Result<Circuit> {
    build_spa_for_pairs(&sys.pair_sets, arrangement, SpinLayout::default())
}

pub fn build_spa_for_pairs(pairs: &PairSets, arrangement: Arrangement, layout: SpinLayout) -> Result<Circuit> {
    build_ansatz_for_pairs(pairs, &AnsatzSpec::spa().with_arrangement(arrangement).with_layout(layout))
}

pub fn build_ansatz(sys: &MolecularSystem, spec: &AnsatzSpec) -> Result<Circuit> {
    build_ansatz_for_pairs(&sys.pair_sets, spec)
}

/// Pair excitations (to, from) prescribed by the arrangement, tagged with (pair, position).
fn spa_doubles(pairs: &PairSets, arrangement: Arrangement) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for (k, s) in pairs.sets.iter().enumerate() {
        for l in 0..s.len().saturating_sub(1) {
            let from = match arrangement {
                Arrangement::Ladder => s[l],
                Arrangement::Canonical => s[0],
            };
            out.push((s[l + 1], from, k, l));
        }
    }
    out
}

/// Orbital pairs (to, from) for one block, without repeats.
fn orbital_pairs(pairs: &PairSets, spa: bool, generalized: bool, n: usize) -> Vec<(usize, usize)> {
    let refs = pairs.references();
    let mut out = Vec::new();
    if spa {
        for s in &pairs.sets {
            if generalized {
                let mut sorted = s.clone();
                sorted.sort_unstable();
                for (i, &a) in sorted.iter().enumerate() {
                    for &b in &sorted[i + 1..] {
                        out.push((b, a));
                    }
                }
            } else {
                for &t in &s[1..] {
                    out.push((t, s[0]));
                }
            }
        }
    } else if generalized {
        for p in 0..n {
            for q in p + 1..n {
                out.push((q, p));
            }
        }
    } else {
        for &i in &refs {
            for a in (0..n).filter(|a| !refs.contains(a)) {
                out.push((a, i));
            }
        }
    }
    out
}

fn same_pair(a: (usize, usize), b: (usize, usize)) -> bool {
    a == b || (a.0 == b.1 && a.1 == b.0)
}

struct Builder<'a> {
    c: Circuit,
    pairs: &'a PairSets,
    spec: &'a AnsatzSpec,
    n: usize,
}

impl Builder<'_> {
    fn up(&self, p: usize) -> usize {
        if self.spec.hcb {
            p
        } else {
            self.spec.layout.up(p, self.n)
        }
    }

    fn push_double(&mut self, to: usize, from: usize, name: &str, in_hcb: bool) -> Result<()> {
        let idx = self.c.parameter(name);
        let exc = if in_hcb {
            Excitation::hcb_pair(self.up(to), self.up(from))?
        } else {
            Excitation::jw_pair(to, from, self.n, self.spec.layout)?
        };
        self.c.push(Gate::excitation(exc, Angle::param(idx)));
        Ok(())
    }

    /// Doubles of one layer. The first layer lists the arrangement's pair excitations first.
    fn doubles(&mut self, generalized: bool, tag: &str, in_hcb: bool, first_layer: bool) -> Result<()> {
        let spa = self.spec.spa;
        let arrangement = if spa || generalized { self.spec.arrangement } else { Arrangement::Canonical };
        let leading = spa_doubles(self.pairs, arrangement);
        let mut done: Vec<(usize, usize)> = Vec::new();
        for &(to, from, k, l) in &leading {
            let name = if spa && first_layer { format!("spa_{k}_{l}") } else { format!("d{tag}_{to}_{from}") };
            self.push_double(to, from, &name, in_hcb)?;
            done.push((to, from));
        }
        if spa && !generalized {
            return Ok(());
        }
        for (to, from) in orbital_pairs(self.pairs, spa, generalized, self.n) {
            if done.iter().any(|&d| same_pair(d, (to, from))) {
                continue;
            }
            self.push_double(to, from, &format!("d{tag}_{to}_{from}"), in_hcb)?;
            done.push((to, from));
        }
        Ok(())
    }

    fn singles(&mut self, e: Excitations, tag: &str) -> Result<()> {
        let n = self.n;
        let nq = 2 * n;
        let layout = self.spec.layout;
        for (to, from) in orbital_pairs(self.pairs, self.spec.spa, e.generalized, n) {
            for (down, suffix) in [(false, "a"), (true, "b")] {
                let name = if self.spec.shared_spin {
                    format!("s{tag}_{to}_{from}")
                } else {
                    format!("s{tag}_{to}_{from}_{suffix}")
                };
                let idx = self.c.parameter(&name);
                let (t, f) = (layout.spin_orbital(to, down, n), layout.spin_orbital(from, down, n));
                let exc = if e.approximate { Excitation::approx_single(t, f)? } else { Excitation::single(t, f, nq)? };
                self.c.push(Gate::excitation(exc, Angle::param(idx)));
            }
        }
        Ok(())
    }
}

/// Builds the circuit for `spec` over the given pair sets.
///
/// Layer one prepares the reference and applies its doubles on the spin-up register,
/// then the bridge copies pair occupations to spin-down and singles follow.
/// Later layers and the `+` extension act directly on the JW register.
pub fn build_ansatz_for_pairs(pairs: &PairSets, spec: &AnsatzSpec) -> Result<Circuit> {
    spec.validate()?;
    pairs.validate()?;
    if pairs.sets.is_empty() {
        return Err(Error::InvalidAnsatz("no pair sets to build from".into()));
    }
    let n = pairs.n_orbitals;
    let c = if spec.hcb {
        Circuit::new(n, Encoding::Hcb { n_orbitals: n })
    } else {
        Circuit::new(2 * n, Encoding::Jw { n_orbitals: n, layout: spec.layout, prefix: None })
    };
    let mut b = Builder { c, pairs, spec, n };
    for r in pairs.references() {
        let q = b.up(r);
        b.c.push(Gate::x(q));
    }
    let block = spec.block();
    for layer in 1..=spec.k {
        let tag = layer.to_string();
        if block.doubles {
            b.doubles(block.generalized, &tag, spec.hcb || layer == 1, layer == 1)?;
        }
        if layer == 1 && !spec.hcb {
            let start = b.c.gates.len();
            for p in 0..n {
                b.c.push(Gate::cnot(spec.layout.up(p, n), spec.layout.down(p, n)));
            }
            b.c.encoding = Encoding::Jw {
                n_orbitals: n,
                layout: spec.layout,
                prefix: Some(HcbPrefix { bridge_start: start, bridge_end: start + n }),
            };
        }
        if block.singles {
            b.singles(block, &tag)?;
        }
    }
    if let Some(ext) = spec.extension {
        if ext.doubles {
            let spa_spec = AnsatzSpec { spa: false, ..spec.clone() };
            let mut eb = Builder { c: b.c, pairs, spec: &spa_spec, n };
            eb.doubles(ext.generalized, "x", false, false)?;
            b = Builder { c: eb.c, pairs, spec, n };
        }
        if ext.singles {
            let s = AnsatzSpec { spa: false, ..spec.clone() };
            let mut eb = Builder { c: b.c, pairs, spec: &s, n };
            eb.singles(ext, "x")?;
            b = Builder { c: eb.c, pairs, spec, n };
        }
    }
    b.c.validate()?;
    Ok(b.c)
}
