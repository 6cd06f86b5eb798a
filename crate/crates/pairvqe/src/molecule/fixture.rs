//! Fixture layout: `fixtures/<molecule>/<tag>.fcidump` next to `<tag>.ref.json`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{read_fcidump, MolecularSystem};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEnergies {
    pub scf: f64,
    /// Exact energy within the stated active space.
    pub fci: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fci_full: Option<f64>,
}

/// Contents of a `.ref.json` file. Orbital indices refer to the FCIDUMP numbering (0-based).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureRef {
    pub molecule: String,
    pub geometry: String,
    pub basis: String,
    pub n_electrons: usize,
    pub n_orbitals: usize,
    pub frozen: Vec<usize>,
    pub active: Vec<usize>,
    pub pair_sets: Vec<Vec<usize>>,
    pub energies: ReferenceEnergies,
}

/// `foo/1.50.fcidump` → `foo/1.50.ref.json`.
pub fn ref_path(fcidump: &Path) -> PathBuf {
    let name = fcidump.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = name.strip_suffix(".fcidump").unwrap_or(&name);
    fcidump.with_file_name(format!("{stem}.ref.json"))
}

/// Reads an FCIDUMP and, when a sibling `.ref.json` exists, applies its active space and pair sets.
pub fn load_fixture(path: impl AsRef<Path>) -> Result<(MolecularSystem, Option<FixtureRef>)> {
    let path = path.as_ref();
    let full = read_fcidump(path)?;
    let rp = ref_path(path);
    if !rp.exists() {
        return Ok((full, None));
    }
    let r: FixtureRef = serde_json::from_str(&std::fs::read_to_string(&rp)?)?;
    let reduced = full.apply_active_space(&r.active, &r.frozen)?;
    let sets = r
        .pair_sets
        .iter()
        .map(|s| {
            s.iter()
                .map(|p| {
                    r.active.iter().position(|a| a == p).ok_or_else(|| {
                        crate::Error::InvalidSystem(format!("pair-set orbital {p} is not active"))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((reduced.with_pair_sets(sets)?, Some(r)))
}
