//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix rank of the two operands differs.
    #[error("matrix rank mismatch: {0}×{0} vs {1}×{1}")]
    RankMismatch(usize, usize),

    /// Operands live on different meshes (shape, extents or topology differ).
    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    /// Form degree incompatible with the operation or the mesh dimension.
    #[error("degree {degree} out of range for dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },

    /// Binary operation on forms of different degree.
    #[error("form degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    /// Mesh construction rejected (dimension, counts, topology constraints).
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    /// Value fails the anti-Hermitian/traceless validation.
    #[error("not in su(n): defect {defect:.3e} exceeds {tol:.3e}")]
    NotInAlgebra { defect: f64, tol: f64 },

    /// Value fails the unitary/determinant-one validation.
    #[error("not in SU(n): defect {defect:.3e} exceeds {tol:.3e}")]
    NotInGroup { defect: f64, tol: f64 },

    /// A connection (or direction) required to be flat is not.
    #[error("flatness residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    NotFlat { residual: f64, threshold: f64 },

    /// Data required to vanish on the boundary does not.
    #[error("boundary value {max:.3e} exceeds {tol:.3e}")]
    BoundaryNotZero { max: f64, tol: f64 },

    /// Operation needs an interval axis and the mesh has none.
    #[error("mesh has no interval axis")]
    NoIntervalAxis,

    /// Operation defined only on meshes of a specific dimension.
    #[error("needs a {expected}-dimensional mesh, got {got}")]
    WrongDimension { expected: usize, got: usize },

    /// Iterative solver exhausted its iteration budget.
    #[error("solver stalled after {iterations} iterations, residual {residual:.3e}")]
    SolverDiverged { iterations: usize, residual: f64 },

    /// Neumann data whose total flux does not balance the source.
    #[error("incompatible flux data: imbalance {imbalance:.3e}")]
    IncompatibleFlux { imbalance: f64 },

    /// Check name not present in the registry.
    #[error("unknown check {0:?}")]
    UnknownCheck(String),

    /// Malformed serialized field container.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
