use alloc::string::String;

/// Errors produced by the geometry kernel and the solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A ring or region has too few vertices, zero area, or non-finite coordinates.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    /// Geometry that is well-formed numerically but breaks a structural rule
    /// (self-intersection, hole outside the outer ring, overlapping holes).
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    /// Solver or model parameters out of range.
    #[error("configuration error: {0}")]
    Configuration(String),
    /// A piece that cannot be placed into an empty stock panel in any allowed orientation.
    #[error("piece {id} does not fit an empty stock panel in any allowed orientation")]
    InfeasiblePiece { id: usize },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
