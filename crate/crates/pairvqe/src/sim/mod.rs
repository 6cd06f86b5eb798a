//! Dense statevector, pair-product and exact-diagonalization back ends.

mod observable;
mod pair;
mod spectrum;
mod statevector;

pub use observable::{expectation, variance, Observable};
pub use pair::{simulate_separable, PairRegister, PairWavefunction};
pub use spectrum::{exact_spectrum, SpectrumResult, MAX_SECTOR_DIMENSION, MAX_SPECTRUM_QUBITS};
pub use statevector::{fidelity, simulate, simulate_with_cap, Statevector, DEFAULT_MAX_QUBITS};

pub(crate) use statevector::check_params;
