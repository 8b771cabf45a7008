//! Combinadic compact encoding of fermionic Hamiltonians.
//!
//! Fermionic basis states of a fixed `(N_↑, N_↓)` sector are numbered by
//! their combinadic rank and stored on `⌈log₂ dim⌉` qubits. The crate builds
//! the Hamiltonian in that basis, decomposes it into Pauli strings, prepares
//! a rank-2 UCCSD-style ansatz and runs a statevector VQE. A Jordan–Wigner
//! encoding on `2M` qubits is included as a reference.

pub mod ansatz;
pub mod circuit;
pub mod combinadics;
pub mod compact_ham;
pub mod error;
pub mod fockops;
pub mod integrals;
pub mod jw;
pub mod pauli;
pub mod vqe;

pub use error::{Error, Result};
