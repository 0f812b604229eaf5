//! Maximal sets of mutually unbiased bases (MUBs), maximal commuting
//! operator classes (MCCs), the maps between them, and the finite groups
//! generated by MCC operators.
//!
//! Pipeline at a glance:
//!
//! * [`symplectic::desarguesian_spread`] builds a spread of `W(2N-1, d)`;
//! * [`pauli::gamma_inverse`] turns it into a symbolic Pauli MCC;
//! * [`mub::beta`] takes common eigenbases, giving a maximal MUB;
//! * [`mub::alpha`] rebuilds an MCC from a maximal MUB;
//! * [`grouplab`] closes MCC operators into groups and computes heights,
//!   nilpotence classes and scaling-invariant fingerprints.

pub mod cli;
pub mod error;
pub mod ff;
pub mod grouplab;
pub mod io;
pub mod matcore;
pub mod mcc;
pub mod mub;
pub mod pauli;
pub mod report;
pub mod symplectic;

pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, ComplexVector, ToleranceConfig};


pub use pauli::{PauliElement, SymbolicMcc};
pub use report::ValidationReport;
pub use symplectic::{Spread, Subspace, SymplecticForm};
pub use mcc::{MccValue, NumericMcc};
pub use mub::{Basis, MubSet};
