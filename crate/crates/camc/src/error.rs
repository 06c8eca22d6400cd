use thiserror::Error;

/// Crate-wide error type. Every fallible operation reports one of these
/// variants; the CLI serializes them into machine-readable records.
#[derive(Debug, Error)]
pub enum CamcError {
    /// A direction that must lie on the unit sphere is too far from it to
    /// renormalize safely (|norm - 1| > 1e-12).
    #[error("direction is not a unit vector: |n| = {norm}")]
    NotUnit { norm: f64 },

    /// A vector that must be nonzero (axis, plane normal, ...) is zero.
    #[error("{what} must be nonzero")]
    ZeroVector { what: &'static str },

    /// The quadratic form of an ellipsoid anisotropy is not symmetric
    /// positive definite.
    #[error("ellipsoid matrix is not positive definite: min eigenvalue {min_eig}")]
    NotPositiveDefinite { min_eig: f64 },

    /// A perturbed-sphere amplitude that makes F vanish somewhere.
    #[error("perturbation amplitude {epsilon} makes the anisotropy non-positive")]
    NonPositive { epsilon: f64 },

    /// Convexity certification failed; the operation needs an elliptic
    /// anisotropy.
    #[error("anisotropy is not elliptic: min tangential Hessian eigenvalue {min_eig}")]
    NotElliptic { min_eig: f64 },

    /// A chart point where the parametrization is not an immersion.
    #[error("chart is degenerate at (u, v) = ({u}, {v}): |X_u x X_v| = {cross_norm}")]
    DegenerateChart { u: f64, v: f64, cross_norm: f64 },

    /// A mesh operation that requires a closed surface found boundary edges.
    #[error("mesh is not closed: {boundary_edges} boundary edge(s)")]
    OpenMesh { boundary_edges: usize },

    /// Scaling by zero is not a homothety.
    #[error("homothety ratio must be nonzero")]
    ZeroScale,

    /// An operation that divides by H0 received zero.
    #[error("H0 must be nonzero")]
    ZeroH0,

    /// The grid geometry is inconsistent (non-square spacing, too few nodes,
    /// no interior nodes, disconnected interior).
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    /// Quasilinear ellipticity (4ac - b^2 > 0) failed at a grid node during
    /// a solve.
    #[error("ellipticity lost at node ({i}, {j}): 4ac - b^2 = {value}")]
    EllipticityLoss { i: usize, j: usize, value: f64 },

    /// Newton iteration did not reach the residual target.
    #[error("solver did not converge: residual {residual} after {iterations} iteration(s)")]
    NonConvergence { iterations: usize, residual: f64 },

    /// Banded LU hit an exactly zero pivot column.
    #[error("linear system is singular at column {column}")]
    SingularSystem { column: usize },

    /// The input collection is empty.
    #[error("{what} must be nonempty")]
    EmptyInput { what: &'static str },

    /// A configuration file could not be parsed.
    #[error("config error at line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CamcError {
    /// Stable machine-readable tag, used by the CLI's error records.
    pub fn kind(&self) -> &'static str {
        match self {
            CamcError::NotUnit { .. } => "not_unit",
            CamcError::ZeroVector { .. } => "zero_vector",
            CamcError::NotPositiveDefinite { .. } => "not_positive_definite",
            CamcError::NonPositive { .. } => "non_positive",
            CamcError::NotElliptic { .. } => "not_elliptic",
            CamcError::DegenerateChart { .. } => "degenerate_chart",
            CamcError::OpenMesh { .. } => "open_mesh",
            CamcError::ZeroScale => "zero_scale",
            CamcError::ZeroH0 => "zero_h0",
            CamcError::InvalidGrid { .. } => "invalid_grid",
            CamcError::EllipticityLoss { .. } => "ellipticity_loss",
            CamcError::NonConvergence { .. } => "non_convergence",
            CamcError::SingularSystem { .. } => "singular_system",
            CamcError::EmptyInput { .. } => "empty_input",
            CamcError::Config { .. } => "config",
            CamcError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, CamcError>;
