//! Finite abelian groups, their subgroups, complements and common transversals.
//!
//! Groups are products of cyclic groups `C_{n_1} × … × C_{n_k}` with elements
//! written as residue vectors. Subgroups are integer lattices in Hermite
//! normal form, so all subgroup arithmetic is exact linear algebra.

pub mod arith;
pub mod complements;
pub mod error;
pub mod group;
mod lattice;
pub mod oracle;
pub mod primary;
pub mod subgroup;
pub mod transversals;

pub use error::{Error, Result, TransversalDefect};
pub use group::{AbelianGroup, GroupElement, Homomorphism};
pub use primary::{PrimaryDecomposition, PrimaryFactor};

pub use subgroup::{gamma_subgroup, Chart, Quotient, Subgroup, DEFAULT_ENUM_CAP};
