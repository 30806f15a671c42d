//! Spectral toolkit for the averaging operator T = (L + R)/2 of SL(2,Z)
//! acting on finite congruence modules.
//!
//! The crate builds the exact rational matrices of the generators and of
//! the derived operators (T, Y±, A, B) on `(Z/nZ)^2` and on the coprime
//! set `Λ(n)`, verifies their algebraic identities in integer arithmetic,
//! and computes and classifies spectra against the expected geography:
//! a circle of radius `1/√2` for the nonreal part, a real gap interval,
//! and the special points `0, ±1/2, ±1/√2, 1`.
//!
//! Side computations cover the congruence expander graphs of SL(2,Z/nZ),
//! truncated 3-regular trees (distance operators, resolvent series,
//! harmonic edge functions), the Stern spin chain with its partition
//! functions and twisted Dirichlet approximants, and the exact integer
//! divisibility Markov chain.

pub mod chain;
pub mod charpoly;
pub mod dense;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod oldnew;
pub mod operators;
pub mod rational;
pub mod residues;
pub mod spectrum;
pub mod spin;
pub mod subspaces;
pub mod tree;
pub mod verify;

pub use dense::{CMat, DMat};
pub use error::{Error, Result};
pub use operators::ScaledIntegerOperator;
pub use residues::{GroupElement, LatticePoint, SieveTables};
pub use spectrum::{Spectrum, Tag};

/// Modulus cap for SL(2,Z/nZ) enumeration and graph construction.
pub const SL2_CAP: u32 = 60;
/// Dimension cap for the dense eigensolver.
pub const EIGEN_DIM_CAP: usize = 4000;
/// Default clustering / classification tolerance.
pub const DEFAULT_TOL: f64 = 1e-6;
