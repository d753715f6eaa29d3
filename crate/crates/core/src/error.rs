use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("tensor is not positive definite (Mandel eigenvalues in [{min_eigenvalue:e}, {max_eigenvalue:e}])")]
    NotPositiveDefinite {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("invalid rotation matrix: {0}")]
    InvalidRotation(String),

    #[error("invalid fiber section: {0}")]
    InvalidSection(String),

    #[error("material outside analytical STP validity: {reason} (value {value:e})")]
    StpValidity { reason: String, value: f64 },

    #[error("singular {what} in strain transfer assembly (pivot ratio {pivot_ratio:e})")]
    SingularSystem { what: &'static str, pivot_ratio: f64 },

    #[error("mesh format error at line {line}: {message}")]
    MeshFormat { line: usize, message: String },

    #[error("unsupported element type {0}")]
    UnsupportedElement(u32),

    #[error("cannot stitch fiber chain {group:?}: {reason}")]
    ChainStitching { group: String, reason: String },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate tetrahedron {tet} (6*volume = {six_volume:e})")]
    DegenerateTet { tet: usize, six_volume: f64 },

    #[error("invalid fiber path: {0}")]
    InvalidFiberPath(String),

    #[error("vertices {0} and {1} do not form a mesh edge")]
    NotAnEdge(usize, usize),

    #[error("unknown vertex set {0:?}")]
    UnknownVertexSet(String),

    #[error("invalid boundary condition: {0}")]
    InvalidBoundaryCondition(String),

    #[error("conflicting Dirichlet values on dof {dof}: {first} vs {second}")]
    DirichletConflict { dof: usize, first: f64, second: f64 },

    #[error("no material for region {0}")]
    MissingMaterial(i32),

    #[error("conjugate gradient did not converge in {iterations} iterations (relative residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable category, printed by the CLI on failure.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidMaterial(_) | Error::NotPositiveDefinite { .. } => "material",
            Error::InvalidRotation(_) => "rotation",
            Error::InvalidSection(_) | Error::StpValidity { .. } => "stp-validity",
            Error::SingularSystem { .. } => "stp-singular",
            Error::MeshFormat { .. } | Error::UnsupportedElement(_) => "mesh-format",
            Error::ChainStitching { .. } | Error::InvalidFiberPath(_) | Error::NotAnEdge(..) => {
                "fiber-path"
            }
            Error::InvalidMesh(_) | Error::DegenerateTet { .. } => "mesh",
            Error::UnknownVertexSet(_)
            | Error::InvalidBoundaryCondition(_)
            | Error::DirichletConflict { .. } => "boundary-condition",
            Error::MissingMaterial(_) | Error::Config(_) => "config",
            Error::NonConvergence { .. } => "non-convergence",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
