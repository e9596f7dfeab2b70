//! Intermediate subfactor lattices and 2-box algebras of group-subgroup
//! subfactors `(R^G ⊆ R^H)` for finite permutation groups.

pub mod bitset;
pub mod boxalgebra;
pub mod catalog;
pub mod error;
pub mod fusionring;
pub mod interval;
pub mod lattice;
pub mod linalg;
pub mod permgroup;
pub mod properties;
pub mod reference;
pub mod survey;

pub use error::{Error, Result};
