use chrono::{DateTime, Utc};
use pairvqe::circuit::ResourceReport;
use pairvqe::vqe::{GradientMode, VqeResult};
use serde::{Deserialize, Serialize};

/// Energy variance ⟨H²⟩ − ⟨H⟩² of the reference state and of the optimized state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VariancePair {
    pub hf: f64,
    pub optimized: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitalReport {
    pub macro_energies: Vec<f64>,
    /// Rows are the original orbitals, columns the optimized ones.
    pub coefficients: Vec<Vec<f64>>,
}

/// Everything `optimize` produces. Energies are in hartree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub input: String,
    pub ansatz: String,
    /// `jw` or `hcb`.
    pub encoding: String,
    pub layout: String,
    pub arrangement: String,
    pub n_orbitals: usize,
    pub n_electrons: usize,
    pub n_qubits: usize,
    pub seed: u64,
    pub n_starts: usize,
    pub gradient: GradientMode,
    /// Level the resource counts refer to.
    pub resource_level: u8,
    pub resources: ResourceReport,
    /// Level of the circuit that was optimized; absent for the excitation circuit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimized_level: Option<u8>,
    pub reference_energy: f64,
    pub result: VqeResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fci_energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance: Option<VariancePair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbital_optimization: Option<OrbitalReport>,
    pub started_at: DateTime<Utc>,
    pub finished_at: DateTime<Utc>,
}
