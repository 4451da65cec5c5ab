//! Discrete differential geometry of U(1) bundles and gerbes on simplicial
//! complexes.
//!
//! The crate computes exactly quantized holonomy invariants from purely
//! combinatorial phase data:
//!
//! - [`complex`] — oriented simplicial complexes, real/phase cochains, the
//!   coboundary operator δ and its multiplicative solver, mesh generators,
//!   simplicial maps and pullback;
//! - [`bundle`] — Hermitian line bundles as unit phases on edges: loop
//!   holonomy, plaquette curvature, Chern numbers, gauge actions;
//! - [`berry`] — parametrized Hamiltonian families, spectral-gap-checked
//!   eigenbundles, Berry phases, and a norm-preserving Schrödinger
//!   integrator for the adiabatic limit;
//! - [`gerbe`] — gerbes as unit phases on triangles: classifying cocycles
//!   from projective unitary lifts, curvature over tetrahedra,
//!   Dixmier–Douady numbers, surface holonomy, trivializations, and the
//!   cylinder identity relating surface holonomy to boundary holonomies;
//! - [`scenario`] — named end-to-end experiments with machine-readable
//!   reports, used by the `holonomy` CLI.

pub mod complex;
pub mod error;

pub mod bundle;
pub mod berry;
pub mod gerbe;
pub mod scenario;

pub use error::{HoloError, Result};
