//! Normal-ordered stress-energy expectations, central moments, and the
//! Kuo-Ford semiclassical-validity estimator for coherent and cat states of a
//! real scalar field on a flat periodic box, plus a truncated-Fock oracle
//! that verifies every closed form by brute force.
//!
//! The closed-form path never touches ladder operators: matrix elements of
//! normal-ordered polynomials reduce to a c-number substitution of classical
//! profiles into the polynomial. The oracle builds explicit matrices on a
//! truncated Fock space and recomputes the same quantities independently.

pub mod error;
pub mod geometry;
pub mod modes;
pub mod states;

pub use error::{CoreError, Result};
pub use geometry::{BoxGeometry, Derivative, SpacetimePoint};
pub use modes::{kg_inner_product, ModeBasis, ModeBranch, SliceSolution};
