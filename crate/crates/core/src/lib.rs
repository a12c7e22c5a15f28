//! Exact-arithmetic models of the boundary (parabolic) and interior (Cartan)
//! de Rham complexes attached to the rank-one orthogonal group of a Lorentzian
//! form, together with the family of intertwining kernels that connects them.
//!
//! Everything is computed over arbitrary-precision rationals; every identity
//! exposed by [`verify`] is checked as an exact equality of matrices, never
//! numerically.
//!
//! Layering (each module only depends on the ones above it):
//!
//! * [`rat`], [`mat`] — scalars and small dense matrices.
//! * [`algebra`] — the matrix Lie algebra, its bracket table, Killing form.
//! * [`model`] — the quotient module `g/m`, metric data, representative maps.
//! * [`forms`] — multivectors with matrix values ("kernels") and wedge calculus.
//! * [`linalg`] — exact sparse elimination: rank, nullspace, solving, export.
//! * [`ops`] — the differential operators: ∂ (boundary leg), d (interior leg),
//!   Hodge star, codifferentials, Laplacians, weighted variants.
//! * [`spaces`] — coordinatization of bidegree components and invariants.
//! * [`chains`] — Lie-algebra chain complex, its boundary, homology.
//! * [`kernels`] — the explicit kernel family `phi_k` and its building blocks.
//! * [`verify`] — the check registry and JSON report runner.

pub mod algebra;
pub mod chains;
pub mod forms;
pub mod kernels;
pub mod linalg;
pub mod mat;
pub mod model;
pub mod ops;
pub mod rat;
pub mod spaces;
pub mod verify;
