//! Parabolic Hecke algebras of Coxeter groups and the commutativity
//! classification of their maximal parabolic subalgebras.

pub mod cyclofield;
pub mod diagram;
pub mod error;
pub mod group;
pub mod heaps;
pub mod hecke;
pub mod commute;

pub use diagram::{Bond, CoxeterDiagram, Node};
pub use error::{Error, Result};
