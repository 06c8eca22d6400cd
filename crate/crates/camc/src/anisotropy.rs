//! Anisotropy functions on the sphere and their one-homogeneous extensions.
//!
//! Everything downstream reads the geometry off the extension
//! Phi(x) = |x| F(x/|x|), evaluated at unit vectors:
//!
//! * `eta(n) = grad Phi(n)` is the Cahn-Hoffman field; it parametrizes the
//!   Wulff shape and satisfies `<eta(n), n> = F(n)` (Euler's relation).
//! * `tangential_hessian(n) = D^2 Phi(n)` annihilates `n` and, restricted to
//!   the tangent plane, is positive definite exactly when F is elliptic.
//!
//! The catalog is closed: a constant function, ellipsoidal norms
//! `F(n) = sqrt(n^T Q n)`, and a zonal sphere perturbation
//! `F(n) = 1 + epsilon <n, axis>^2`. Each carries hand-written first, second
//! and third derivatives of Phi; `verify_derivatives` cross-checks them
//! against finite differences.

use nalgebra::{Matrix3, Vector2, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CamcError, Result};
use crate::icosphere::icosphere;

/// Unit-sphere inputs are accepted when their norm is within this distance of
/// one, and renormalized before use; anything farther is rejected.
pub const UNIT_TOL: f64 = 1e-12;

/// Minimum tangential Hessian eigenvalue for a convexity certificate.
pub const ELLIPTICITY_THRESHOLD: f64 = 1e-9;

/// Step used by the finite-difference derivative cross-check.
pub const FD_STEP: f64 = 1e-5;

/// Validate a putative unit vector, renormalizing when it is within
/// [`UNIT_TOL`] of the sphere.
pub fn unit_checked(n: &Vector3<f64>) -> Result<Vector3<f64>> {
    let norm = n.norm();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(CamcError::NotUnit { norm });
    }
    Ok(n / norm)
}

/// A smooth positive anisotropy function on the unit sphere.
#[derive(Clone, Debug)]
pub enum Anisotropy {
    /// F = 1; the Wulff shape is the round unit sphere.
    Constant,
    /// F(n) = sqrt(n^T Q n) for symmetric positive definite Q; the Wulff
    /// shape is the ellipsoid x^T Q^{-1} x = 1.
    Ellipsoid { q: Matrix3<f64> },
    /// F(n) = 1 + epsilon <n, axis>^2 with a unit axis. Elliptic for
    /// |epsilon| below 1/2 (negative side) and 1 (positive side).
    Perturbed { epsilon: f64, axis: Vector3<f64> },
}

impl Anisotropy {
    pub fn constant() -> Self {
        Anisotropy::Constant
    }

    /// Build an ellipsoidal anisotropy from a symmetric positive definite
    /// matrix. Symmetry is enforced by averaging with the transpose;
    /// positivity is checked and rejected otherwise.
    pub fn ellipsoid(q: Matrix3<f64>) -> Result<Self> {
        let q = (q + q.transpose()) * 0.5;
        let min_eig = q
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig <= 1e-12 {
            return Err(CamcError::NotPositiveDefinite { min_eig });
        }
        Ok(Anisotropy::Ellipsoid { q })
    }

    /// Ellipsoid from packed coefficients [q11, q22, q33, q12, q13, q23].
    pub fn ellipsoid_from_coeffs(c: [f64; 6]) -> Result<Self> {
        let q = Matrix3::new(c[0], c[3], c[4], c[3], c[1], c[5], c[4], c[5], c[2]);
        Self::ellipsoid(q)
    }

    /// Zonal perturbation of the round anisotropy. The axis may be any
    /// nonzero vector; it is normalized here. Amplitudes with
    /// 1 + epsilon <= 0 make F vanish and are rejected; ellipticity is a
    /// separate, deliberate check (`check_ellipticity`), so super-critical
    /// amplitudes are representable.
    pub fn perturbed(epsilon: f64, axis: Vector3<f64>) -> Result<Self> {
        let norm = axis.norm();
        if norm < 1e-12 {
            return Err(CamcError::ZeroVector { what: "axis" });
        }
        if 1.0 + epsilon.min(0.0) <= 0.0 {
            return Err(CamcError::NonPositive { epsilon });
        }
        Ok(Anisotropy::Perturbed {
            epsilon,
            axis: axis / norm,
        })
    }

    /// One-homogeneous extension Phi(x) = |x| F(x/|x|), for any x != 0.
    pub fn phi(&self, x: &Vector3<f64>) -> f64 {
        match self {
            Anisotropy::Constant => x.norm(),
            Anisotropy::Ellipsoid { q } => (q * x).dot(x).sqrt(),
            Anisotropy::Perturbed { epsilon, axis } => {
                let r = x.norm();
                let s = x.dot(axis);
                r + epsilon * s * s / r
            }
        }
    }

    /// Gradient of the extension; 0-homogeneous.
    pub fn grad_phi(&self, x: &Vector3<f64>) -> Vector3<f64> {
        match self {
            Anisotropy::Constant => x / x.norm(),
            Anisotropy::Ellipsoid { q } => q * x / self.phi(x),
            Anisotropy::Perturbed { epsilon, axis } => {
                let r = x.norm();
                let u = x / r;
                let s = x.dot(axis);
                u + *epsilon * (2.0 * s / r * axis - (s * s) / (r * r) * u)
            }
        }
    }

    /// Hessian of the extension; (-1)-homogeneous, annihilates x.
    pub fn hess_phi(&self, x: &Vector3<f64>) -> Matrix3<f64> {
        match self {
            Anisotropy::Constant => {
                let r = x.norm();
                let u = x / r;
                (Matrix3::identity() - u * u.transpose()) / r
            }
            Anisotropy::Ellipsoid { q } => {
                let phi = self.phi(x);
                let g = q * x;
                q / phi - g * g.transpose() / phi.powi(3)
            }
            Anisotropy::Perturbed { epsilon, axis } => {
                let r = x.norm();
                let u = x / r;
                let t = u.dot(axis);
                let id = Matrix3::identity();
                let uu = u * u.transpose();
                let aa = axis * axis.transpose();
                let au = axis * u.transpose() + u * axis.transpose();
                (id - uu + *epsilon * (2.0 * aa - 2.0 * t * au + t * t * (3.0 * uu - id))) / r
            }
        }
    }

    /// Directional derivative of the Hessian: d/de D^2 Phi(x + e h) at e = 0.
    /// Needed for exact second derivatives of charts built from eta.
    pub fn third_phi(&self, x: &Vector3<f64>, h: &Vector3<f64>) -> Matrix3<f64> {
        match self {
            Anisotropy::Constant => {
                let r = x.norm();
                let u = x / r;
                let uh = u.dot(h);
                let w = h - uh * u;
                let id = Matrix3::identity();
                let uu = u * u.transpose();
                (-uh * (id - uu) - w * u.transpose() - u * w.transpose()) / (r * r)
            }
            Anisotropy::Ellipsoid { q } => {
                let phi = self.phi(x);
                let g = q * x;
                let qh = q * h;
                let gh = g.dot(h);
                -gh / phi.powi(3) * q - (qh * g.transpose() + g * qh.transpose()) / phi.powi(3)
                    + 3.0 * gh / phi.powi(5) * g * g.transpose()
            }
            Anisotropy::Perturbed { epsilon, axis } => {
                let r = x.norm();
                let u = x / r;
                let t = u.dot(axis);
                let uh = u.dot(h);
                let w = h - uh * u;
                let tau = axis.dot(h) - t * uh;
                let id = Matrix3::identity();
                let uu = u * u.transpose();
                let wu = w * u.transpose() + u * w.transpose();
                let au = axis * u.transpose() + u * axis.transpose();
                let aw = axis * w.transpose() + w * axis.transpose();
                let aa = axis * axis.transpose();
                let h0 = id - uu + *epsilon * (2.0 * aa - 2.0 * t * au + t * t * (3.0 * uu - id));
                let dh0 = -wu
                    + *epsilon
                        * (-2.0 * tau * au - 2.0 * t * aw
                            + 2.0 * t * tau * (3.0 * uu - id)
                            + 3.0 * t * t * wu);
                (dh0 - uh * h0) / (r * r)
            }
        }
    }

    /// F at a unit direction.
    pub fn f(&self, n: &Vector3<f64>) -> Result<f64> {
        let n = unit_checked(n)?;
        Ok(self.phi(&n))
    }

    /// Cahn-Hoffman field eta(n) = grad F(n) + F(n) n = grad Phi(n).
    pub fn eta(&self, n: &Vector3<f64>) -> Result<Vector3<f64>> {
        let n = unit_checked(n)?;
        Ok(self.grad_phi(&n))
    }

    /// Full ambient Hessian of Phi at a unit direction. Its restriction to
    /// the tangent plane n-perp is the quadratic form whose positivity is
    /// the ellipticity condition; n spans its kernel.
    pub fn tangential_hessian(&self, n: &Vector3<f64>) -> Result<Matrix3<f64>> {
        let n = unit_checked(n)?;
        Ok(self.hess_phi(&n))
    }

    /// Eigenvalues of the Hessian restricted to the tangent plane at n,
    /// as (min, max).
    pub fn tangential_eigenvalues(&self, n: &Vector3<f64>) -> Result<(f64, f64)> {
        let n = unit_checked(n)?;
        let h = self.hess_phi(&n);
        let (t1, t2) = tangent_basis(&n);
        let b11 = (h * t1).dot(&t1);
        let b12 = (h * t1).dot(&t2);
        let b22 = (h * t2).dot(&t2);
        let mean = 0.5 * (b11 + b22);
        let disc = (0.5 * (b11 - b22)).hypot(b12);
        Ok((mean - disc, mean + disc))
    }
}

/// Deterministic orthonormal basis of the plane orthogonal to a unit vector.
pub fn tangent_basis(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let pick = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vector3::x()
    } else if n.y.abs() <= n.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let t1 = n.cross(&pick).normalize();
    let t2 = n.cross(&t1);
    (t1, t2)
}

/// Convexity certificate over a vertex sample of the sphere.
#[derive(Clone, Debug)]
pub struct EllipticityReport {
    /// Smallest tangential Hessian eigenvalue found.
    pub min_eigenvalue: f64,
    /// Direction where the minimum was attained.
    pub worst_direction: Vector3<f64>,
    /// Number of directions sampled.
    pub samples: usize,
    /// min_eigenvalue > [`ELLIPTICITY_THRESHOLD`].
    pub elliptic: bool,
}

/// Sample the tangential Hessian over an icosphere of the given subdivision
/// level and report the worst eigenvalue. This is a certificate, not a proof:
/// it samples, it does not bound.
pub fn check_ellipticity(f: &Anisotropy, level: u32) -> EllipticityReport {
    let sphere = icosphere(level);
    let mut min_eigenvalue = f64::INFINITY;
    let mut worst_direction = Vector3::z();
    for n in &sphere.vertices {
        let (lo, _) = f
            .tangential_eigenvalues(n)
            .expect("icosphere vertices are unit");
        if lo < min_eigenvalue {
            min_eigenvalue = lo;
            worst_direction = *n;
        }
    }
    EllipticityReport {
        min_eigenvalue,
        worst_direction,
        samples: sphere.vertices.len(),
        elliptic: min_eigenvalue > ELLIPTICITY_THRESHOLD,
    }
}

/// Worst relative discrepancies between analytic and finite-difference
/// derivatives of Phi over random off-sphere points.
#[derive(Clone, Debug)]
pub struct DerivativeReport {
    pub max_grad_err: f64,
    pub max_hess_err: f64,
    pub max_third_err: f64,
    pub trials: usize,
}

/// Cross-check the hand-written derivatives against central differences:
/// grad Phi against differences of Phi values, the Hessian against
/// differences of the gradient, and the third derivative against differences
/// of the Hessian. Points are sampled at radii in [0.5, 2] so homogeneity
/// errors would surface too.
pub fn verify_derivatives(f: &Anisotropy, trials: usize, seed: u64) -> DerivativeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_grad_err: f64 = 0.0;
    let mut max_hess_err: f64 = 0.0;
    let mut max_third_err: f64 = 0.0;
    let h = FD_STEP;
    for _ in 0..trials {
        let x = random_direction(&mut rng) * rng.gen_range(0.5..2.0);
        let dir = random_direction(&mut rng);

        let fd_grad = (f.phi(&(x + h * dir)) - f.phi(&(x - h * dir))) / (2.0 * h);
        let an_grad = f.grad_phi(&x).dot(&dir);
        max_grad_err = max_grad_err.max((fd_grad - an_grad).abs() / an_grad.abs().max(1.0));

        let fd_hess = (f.grad_phi(&(x + h * dir)) - f.grad_phi(&(x - h * dir))) / (2.0 * h);
        let an_hess = f.hess_phi(&x) * dir;
        max_hess_err =
            max_hess_err.max((fd_hess - an_hess).norm() / an_hess.norm().max(1.0));

        let fd_third = (f.hess_phi(&(x + h * dir)) - f.hess_phi(&(x - h * dir))) / (2.0 * h);
        let an_third = f.third_phi(&x, &dir);
        max_third_err =
            max_third_err.max((fd_third - an_third).norm() / an_third.norm().max(1.0));
    }
    DerivativeReport {
        max_grad_err,
        max_hess_err,
        max_third_err,
        trials,
    }
}

/// Uniform random unit vector.
pub fn random_direction<R: Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Uniform random point of the plane orthogonal to `n`, on the unit circle.
pub fn random_tangent<R: Rng>(rng: &mut R, n: &Vector3<f64>) -> Vector3<f64> {
    let (t1, t2) = tangent_basis(n);
    let ang = rng.gen_range(0.0..std::f64::consts::TAU);
    let v = Vector2::new(ang.cos(), ang.sin());
    t1 * v.x + t2 * v.y
}
