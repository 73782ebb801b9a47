//! Simplicial complexes over small vertex sets, elementary collapses, homology
//! over prime fields, finite group actions, and the decision-tree complexity of
//! graph properties together with the topological obstructions to
//! non-evasiveness.

pub mod action;
pub mod affine;
pub mod chain;
pub mod collapse;
pub mod complex;
pub mod dtree;
pub mod error;
pub mod exact;
pub mod field;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod perm;
pub mod simplex;
pub mod theorems;

pub use complex::{
    barycentric_subdivision, cone, euler_characteristic, standard_complex, BarDictionary, Complex, StandardKind,
};
pub use error::{Error, Result};
pub use field::{Fp, FpMatrix, Prime};
pub use simplex::{Simplex, VertexId};
