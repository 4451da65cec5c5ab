//! Error types shared across the crate.

use crate::complex::Cochain;
use thiserror::Error;

/// Crate-wide error type.
///
/// Numerical failures carry the offending simplex or residual so callers can
/// act on them (refine the mesh, reject the input) instead of seeing a NaN.
#[derive(Debug, Error)]
pub enum HoloError {
    /// A mesh generator was asked for something it cannot build.
    #[error("invalid mesh spec: {0}")]
    InvalidSpec(String),

    /// An edge path that was supposed to be a closed loop is not.
    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    /// A vertex assignment that does not define a simplicial map.
    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),

    /// A subcomplex that was supposed to be a closed oriented surface is not.
    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    /// Generic precondition violation on operation inputs.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two objects that must live over the same base complex do not.
    #[error("base complex mismatch")]
    BaseMismatch,

    /// The selected band touches the rest of the spectrum at a vertex.
    #[error("spectral gap {gap:.3e} at vertex {vertex} is below tolerance {tol:.3e}")]
    GapClosure { vertex: usize, gap: f64, tol: f64 },

    /// The selected eigenvalue is degenerate at a vertex.
    #[error("degenerate selected band at vertex {vertex}")]
    DegenerateBand { vertex: usize },

    /// Neighbouring eigenvectors are nearly orthogonal; the mesh cannot
    /// resolve the bundle.
    #[error("mesh too coarse: overlap {overlap:.3e} on edge ({v},{w})", v = edge[0], w = edge[1])]
    MeshTooCoarse { edge: [usize; 2], overlap: f64 },

    /// A curvature sum failed to land on 2πZ; a plaquette product sits on
    /// the branch cut and the mesh should be refined.
    #[error("quantization failure: residual {residual:.3e} off the nearest integer")]
    QuantizationFailure { residual: f64 },

    /// Edge lifts whose triangle products are not scalar matrices.
    #[error("lifts are not a projective cocycle on triangle ({},{},{}): deviation {deviation:.3e}", triangle[0], triangle[1], triangle[2])]
    NotProjectiveCocycle { triangle: [usize; 3], deviation: f64 },

    /// Trivialization was requested on a subcomplex where the class does not
    /// vanish. Carries the residual cocycle as the nontriviality witness.
    #[error("gerbe is nontrivial on the subcomplex: residual angle sum {angle_sum:.6}")]
    NontrivialOnSubcomplex { angle_sum: f64, residual: Cochain },

    /// The time integrator lost unitarity.
    #[error("integrator failure: norm drift {drift:.3e}")]
    IntegratorFailure { drift: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HoloError>;
