//! The Wulff shape of an anisotropy and the model CAMC surfaces built on it.
//!
//! `eta` maps the unit sphere diffeomorphically onto the boundary of the
//! Wulff shape, with `eta(n)` the unique boundary point whose exterior normal
//! is `n`; F is the support function. With exterior orientation the Wulff
//! shape has anisotropic shape operator -Id, hence H = -2, and the cylinders
//! over its equatorial profiles have H = -1.

use nalgebra::Vector3;

use crate::anisotropy::{tangent_basis, Anisotropy, ELLIPTICITY_THRESHOLD};
use crate::curvature::{Chart, ChartJet, SphereChart};
use crate::error::{CamcError, Result};
use crate::icosphere::icosphere;
use crate::mesh::TriMesh;

/// Image of an icosphere sampling under eta. The mesh normal at each vertex
/// is the exact source direction, so vertex i satisfies the support identity
/// <vertex_i, normal_j> <= F(normal_j), with equality at i = j.
pub fn build_wulff_mesh(f: &Anisotropy, level: u32) -> TriMesh {
    let s = icosphere(level);
    let vertices = s.vertices.iter().map(|n| f.grad_phi(n)).collect();
    TriMesh::new(vertices, s.vertices, s.faces)
}

/// Diameter of the Wulff shape by the support-width formula:
/// max over directions of F(u) + F(-u). Exact up to the direction sampling.
pub fn wulff_diameter(f: &Anisotropy, level: u32) -> f64 {
    icosphere(level)
        .vertices
        .iter()
        .map(|u| f.phi(u) + f.phi(&-u))
        .fold(0.0, f64::max)
}

/// Brute-force diameter of a point cloud; the independent cross-check for
/// the width formula.
pub fn brute_force_diameter(points: &[Vector3<f64>]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            best = best.max((points[i] - points[j]).norm_squared());
        }
    }
    best.sqrt()
}

/// Extremes (m, M) of the principal curvatures of the Wulff shape over a
/// direction sample. At eta(n) the principal curvatures are the reciprocals
/// of the two tangential Hessian eigenvalues at n, so the range comes from
/// the global eigenvalue extremes. Requires ellipticity.
pub fn wulff_curvature_range(f: &Anisotropy, level: u32) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for n in &icosphere(level).vertices {
        let (a, b) = f.tangential_eigenvalues(n)?;
        lo = lo.min(a);
        hi = hi.max(b);
    }
    if lo <= ELLIPTICITY_THRESHOLD {
        return Err(CamcError::NotElliptic { min_eig: lo });
    }
    Ok((1.0 / hi, 1.0 / lo))
}

/// Closed curve of Wulff points whose normals lie in the great circle
/// orthogonal to `v0`: the profile swept by the CAMC cylinder with that
/// axis. Sampled counterclockwise about v0 by the right-hand rule.
#[derive(Clone, Debug)]
pub struct ProfileCurve {
    pub v0: Vector3<f64>,
    /// Right-handed frame (e1, e2, v0).
    pub e1: Vector3<f64>,
    pub e2: Vector3<f64>,
    pub thetas: Vec<f64>,
    pub points: Vec<Vector3<f64>>,
    /// Source normals p(theta) = cos e1 + sin e2; exactly orthogonal to v0.
    pub normals: Vec<Vector3<f64>>,
}

pub fn profile_curve(f: &Anisotropy, v0: &Vector3<f64>, n_samples: usize) -> Result<ProfileCurve> {
    if n_samples < 3 {
        return Err(CamcError::InvalidGrid {
            reason: format!("profile needs at least 3 samples, got {n_samples}"),
        });
    }
    let norm = v0.norm();
    if norm < 1e-12 {
        return Err(CamcError::ZeroVector { what: "axis" });
    }
    let v0 = v0 / norm;
    let (e1, e2) = tangent_basis(&v0);
    let mut thetas = Vec::with_capacity(n_samples);
    let mut points = Vec::with_capacity(n_samples);
    let mut normals = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let theta = i as f64 / n_samples as f64 * std::f64::consts::TAU;
        let p = theta.cos() * e1 + theta.sin() * e2;
        thetas.push(theta);
        points.push(f.grad_phi(&p));
        normals.push(p);
    }
    Ok(ProfileCurve {
        v0,
        e1,
        e2,
        thetas,
        points,
        normals,
    })
}

/// Exact chart of the boundary of the Wulff shape: the eta-image of the
/// polar sphere chart. Orientation +1 carries the exterior normal p(u, v).
pub struct WulffChart {
    pub f: Anisotropy,
    pub exterior: bool,
}

impl Chart for WulffChart {
    fn jet(&self, u: f64, v: f64) -> ChartJet {
        let p = SphereChart.jet(u, v);
        let hess = self.f.hess_phi(&p.x);
        ChartJet {
            x: self.f.grad_phi(&p.x),
            xu: hess * p.xu,
            xv: hess * p.xv,
            xuu: self.f.third_phi(&p.x, &p.xu) * p.xu + hess * p.xuu,
            xuv: self.f.third_phi(&p.x, &p.xu) * p.xv + hess * p.xuv,
            xvv: self.f.third_phi(&p.x, &p.xv) * p.xv + hess * p.xvv,
        }
    }

    fn orientation(&self) -> f64 {
        if self.exterior {
            1.0
        } else {
            -1.0
        }
    }
}

/// Exact chart of the CAMC cylinder over a Wulff profile:
/// (theta, lambda) -> eta(p(theta)) + lambda v0. Orientation +1 carries the
/// normal p(theta), which never sees the axis direction.
pub struct CylinderChart {
    pub f: Anisotropy,
    pub v0: Vector3<f64>,
    pub e1: Vector3<f64>,
    pub e2: Vector3<f64>,
}

impl CylinderChart {
    pub fn new(f: Anisotropy, v0: &Vector3<f64>) -> Result<Self> {
        let norm = v0.norm();
        if norm < 1e-12 {
            return Err(CamcError::ZeroVector { what: "axis" });
        }
        let v0 = v0 / norm;
        let (e1, e2) = tangent_basis(&v0);
        Ok(CylinderChart { f, v0, e1, e2 })
    }
}

impl Chart for CylinderChart {
    fn jet(&self, theta: f64, lambda: f64) -> ChartJet {
        let (s, c) = theta.sin_cos();
        let p = c * self.e1 + s * self.e2;
        let pd = -s * self.e1 + c * self.e2;
        let hess = self.f.hess_phi(&p);
        ChartJet {
            x: self.f.grad_phi(&p) + lambda * self.v0,
            xu: hess * pd,
            xv: self.v0,
            xuu: self.f.third_phi(&p, &pd) * pd - hess * p,
            xuv: Vector3::zeros(),
            xvv: Vector3::zeros(),
        }
    }
}

/// A CAMC cylinder patch: exact chart plus a quad-split sample mesh whose
/// vertex normals are the exact profile normals.
pub struct CylinderPatch {
    pub chart: CylinderChart,
    pub mesh: TriMesh,
    pub profile: ProfileCurve,
    pub height: f64,
}

pub fn build_cylinder(
    f: &Anisotropy,
    v0: &Vector3<f64>,
    n_theta: usize,
    n_lambda: usize,
    height: f64,
) -> Result<CylinderPatch> {
    if n_theta < 3 || n_lambda < 2 || height <= 0.0 {
        return Err(CamcError::InvalidGrid {
            reason: format!(
                "cylinder needs n_theta >= 3, n_lambda >= 2, height > 0; got ({n_theta}, {n_lambda}, {height})"
            ),
        });
    }
    let profile = profile_curve(f, v0, n_theta)?;
    let chart = CylinderChart::new(f.clone(), v0)?;
    let mut vertices = Vec::with_capacity(n_theta * n_lambda);
    let mut normals = Vec::with_capacity(n_theta * n_lambda);
    for j in 0..n_lambda {
        let lambda = -height / 2.0 + height * j as f64 / (n_lambda - 1) as f64;
        for i in 0..n_theta {
            vertices.push(profile.points[i] + lambda * profile.v0);
            normals.push(profile.normals[i]);
        }
    }
    let mut faces = Vec::with_capacity(2 * n_theta * (n_lambda - 1));
    let idx = |i: usize, j: usize| (j * n_theta + i % n_theta) as u32;
    for j in 0..n_lambda - 1 {
        for i in 0..n_theta {
            // Quad split oriented so face normals point along the profile
            // normal (outward).
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    Ok(CylinderPatch {
        chart,
        mesh: TriMesh::new(vertices, normals, faces),
        profile,
        height,
    })
}
