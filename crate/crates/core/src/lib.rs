//! Eta-pairing states, their off-diagonal long-range order, and the
//! entanglement and gauge-phase consequences that follow from it.
//!
//! * [`fock`]: fermionic occupation-number engine.
//! * [`eta`]: eta-pairing states and the pair-hopping correlator.
//! * [`dicke`]: qubit picture, two-site reduced state, block entropies.
//! * [`witness`]: partial transpose, negativity, von Neumann entropy.
//! * [`gauge`]: pair-exchange phase, Meissner and flux-quantization constraints.
//! * [`field`]: Gaussian entanglement entropy of a massive scalar chain.
//! * [`spin`]: spin correlators and small Hubbard exact diagonalization.
//! * [`report`] and [`cli`]: deterministic CSV/JSON experiment output.

pub mod cli;
pub mod dicke;
pub mod error;
pub mod eta;
pub mod field;
pub mod fock;
pub mod gauge;
pub mod report;
pub mod spin;
pub mod witness;

pub use error::{Error, Result};
