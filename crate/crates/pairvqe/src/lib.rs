//! Pair-restricted variational circuits for molecular Hamiltonians.
//!
//! The crate covers Pauli and fermionic operator algebra with the Jordan-Wigner map,
//! FCIDUMP ingestion and qubit Hamiltonians, separable-pair and pair-UCC circuit
//! construction with a three-level compiler, statevector and pair-product simulators,
//! and BFGS-based energy minimization with optional orbital optimization.

pub mod circuit;
pub mod dense;
pub mod error;
pub mod fermion;
pub mod molecule;
pub mod pauli;
pub mod sim;
pub mod vqe;

pub use error::{Error, Result};
