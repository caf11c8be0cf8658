//! Untwisted Dijkgraaf-Witten invariants of links computed through Reshetikhin-Turaev
//! evaluation in the module category of the quantum double `D(G)` of a finite group.

pub mod error;
pub mod dihedral;
pub mod espace;
pub mod group;
pub mod irrep;
pub mod linalg;
pub mod montesinos;
pub mod oracle;
pub mod qdouble;
pub mod selftest;
pub mod tangle;

pub use error::{Error, Result};
