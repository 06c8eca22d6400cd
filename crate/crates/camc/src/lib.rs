//! Numerical toolkit for surfaces of constant anisotropic mean curvature.
//!
//! An anisotropy is a smooth positive function F on the unit sphere. Its
//! one-homogeneous extension Phi(x) = |x| F(x/|x|) carries all the geometry:
//! the Cahn-Hoffman field eta = grad Phi maps the sphere onto the Wulff shape,
//! and the tangential Hessian of Phi twists the Euclidean shape operator of a
//! surface into its anisotropic counterpart A. The toolkit builds Wulff shapes
//! and CAMC cylinders, evaluates anisotropic curvature on exact charts and on
//! triangle meshes, solves the quasilinear graph equation with Dirichlet data,
//! and runs the geometric bounds (widths, slice diameters, hemisphere tests)
//! that control compactness arguments for CAMC surfaces.

pub mod analysis;
pub mod anisotropy;
pub mod checks;
pub mod config;
pub mod curvature;
pub mod error;
pub mod graphpde;
pub mod icosphere;
pub mod mesh;
pub mod wulff;

pub use anisotropy::Anisotropy;
pub use error::{CamcError, Result};
