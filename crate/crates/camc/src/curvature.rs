//! Euclidean and anisotropic curvature of oriented surfaces.
//!
//! Two computation paths are kept deliberately separate:
//!
//! * exact charts (`Chart`) carry first and second derivatives, so shape
//!   operators come out at rounding accuracy and serve as the reference;
//! * triangle meshes get per-vertex estimates from quadratic fits over the
//!   2-ring in the vertex tangent frame, which is what the variational
//!   checks run on.
//!
//! Conventions: S = -dN in the chart basis, so the unit sphere with exterior
//! normal has S = -Id and trace -2. The anisotropic operator is
//! A = D^2 Phi(N) o S; its trace H is the anisotropic mean curvature, and the
//! Wulff shape with exterior normal has A = -Id, H = -2.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Vector3};

use crate::anisotropy::{tangent_basis, Anisotropy};
use crate::error::{CamcError, Result};
use crate::icosphere::icosphere;
use crate::mesh::TriMesh;

/// Central-difference step for the first-variation check.
pub const VARIATION_STEP: f64 = 1e-5;

/// Position and derivatives of a chart at one parameter point.
#[derive(Clone, Debug)]
pub struct ChartJet {
    pub x: Vector3<f64>,
    pub xu: Vector3<f64>,
    pub xv: Vector3<f64>,
    pub xuu: Vector3<f64>,
    pub xuv: Vector3<f64>,
    pub xvv: Vector3<f64>,
}

/// An analytic immersion (u, v) -> R^3 with exact derivatives.
pub trait Chart {
    fn jet(&self, u: f64, v: f64) -> ChartJet;

    /// +1 chooses N along X_u x X_v, -1 the opposite.
    fn orientation(&self) -> f64 {
        1.0
    }
}

/// Polar chart of the unit sphere, u in (0, pi), v azimuth; orientation +1
/// is the exterior normal.
pub struct SphereChart;

impl Chart for SphereChart {
    fn jet(&self, u: f64, v: f64) -> ChartJet {
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        ChartJet {
            x: Vector3::new(su * cv, su * sv, cu),
            xu: Vector3::new(cu * cv, cu * sv, -su),
            xv: Vector3::new(-su * sv, su * cv, 0.0),
            xuu: Vector3::new(-su * cv, -su * sv, -cu),
            xuv: Vector3::new(-cu * sv, cu * cv, 0.0),
            xvv: Vector3::new(-su * cv, -su * sv, 0.0),
        }
    }
}

/// Axis-aligned ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 in polar
/// parameters; orientation +1 is the exterior normal.
pub struct EllipsoidChart {
    pub semi_axes: Vector3<f64>,
}

impl Chart for EllipsoidChart {
    fn jet(&self, u: f64, v: f64) -> ChartJet {
        let s = SphereChart.jet(u, v);
        let d = self.semi_axes;
        let scale = |p: &Vector3<f64>| Vector3::new(d.x * p.x, d.y * p.y, d.z * p.z);
        ChartJet {
            x: scale(&s.x),
            xu: scale(&s.xu),
            xv: scale(&s.xv),
            xuu: scale(&s.xuu),
            xuv: scale(&s.xuv),
            xvv: scale(&s.xvv),
        }
    }
}

/// Affine plane through `origin` spanned by two directions.
pub struct PlaneChart {
    pub origin: Vector3<f64>,
    pub e1: Vector3<f64>,
    pub e2: Vector3<f64>,
}

impl Chart for PlaneChart {
    fn jet(&self, u: f64, v: f64) -> ChartJet {
        ChartJet {
            x: self.origin + u * self.e1 + v * self.e2,
            xu: self.e1,
            xv: self.e2,
            xuu: Vector3::zeros(),
            xuv: Vector3::zeros(),
            xvv: Vector3::zeros(),
        }
    }
}

/// Graph z = g(x, y) given by a closure returning
/// (g, g_x, g_y, g_xx, g_xy, g_yy); orientation +1 is the upward normal.
pub struct GraphChart<G: Fn(f64, f64) -> [f64; 6]> {
    pub g: G,
}

impl<G: Fn(f64, f64) -> [f64; 6]> Chart for GraphChart<G> {
    fn jet(&self, u: f64, v: f64) -> ChartJet {
        let [z, zx, zy, zxx, zxy, zyy] = (self.g)(u, v);
        ChartJet {
            x: Vector3::new(u, v, z),
            xu: Vector3::new(1.0, 0.0, zx),
            xv: Vector3::new(0.0, 1.0, zy),
            xuu: Vector3::new(0.0, 0.0, zxx),
            xuv: Vector3::new(0.0, 0.0, zxy),
            xvv: Vector3::new(0.0, 0.0, zyy),
        }
    }
}

/// Homothety of another chart. The cross product X_u x X_v scales by c^2,
/// so the oriented normal is the same for every nonzero ratio, matching the
/// convention that homotheties keep the normal field.
pub struct ScaledChart<'a> {
    pub inner: &'a dyn Chart,
    pub c: f64,
}

impl<'a> ScaledChart<'a> {
    pub fn new(inner: &'a dyn Chart, c: f64) -> Result<Self> {
        if c == 0.0 {
            return Err(CamcError::ZeroScale);
        }
        Ok(ScaledChart { inner, c })
    }
}

impl Chart for ScaledChart<'_> {
    fn jet(&self, u: f64, v: f64) -> ChartJet {
        let j = self.inner.jet(u, v);
        ChartJet {
            x: self.c * j.x,
            xu: self.c * j.xu,
            xv: self.c * j.xv,
            xuu: self.c * j.xuu,
            xuv: self.c * j.xuv,
            xvv: self.c * j.xvv,
        }
    }

    fn orientation(&self) -> f64 {
        self.inner.orientation()
    }
}

/// Chart frame at a point: jet, unit normal, first fundamental form.
#[derive(Clone, Debug)]
pub struct ChartFrame {
    pub jet: ChartJet,
    pub normal: Vector3<f64>,
    pub metric: Matrix2<f64>,
}

pub fn chart_frame(chart: &dyn Chart, u: f64, v: f64) -> Result<ChartFrame> {
    let jet = chart.jet(u, v);
    let cross = jet.xu.cross(&jet.xv);
    let cross_norm = cross.norm();
    if cross_norm <= 1e-10 {
        return Err(CamcError::DegenerateChart { u, v, cross_norm });
    }
    let normal = chart.orientation() * cross / cross_norm;
    let metric = Matrix2::new(
        jet.xu.dot(&jet.xu),
        jet.xu.dot(&jet.xv),
        jet.xu.dot(&jet.xv),
        jet.xv.dot(&jet.xv),
    );
    Ok(ChartFrame {
        jet,
        normal,
        metric,
    })
}

/// Euclidean shape operator S = -dN in the basis (X_u, X_v), computed as
/// (first fundamental form)^{-1} (second fundamental form).
pub fn euclid_shape_operator(chart: &dyn Chart, u: f64, v: f64) -> Result<(Matrix2<f64>, ChartFrame)> {
    let frame = chart_frame(chart, u, v)?;
    let n = frame.normal;
    let ii = Matrix2::new(
        frame.jet.xuu.dot(&n),
        frame.jet.xuv.dot(&n),
        frame.jet.xuv.dot(&n),
        frame.jet.xvv.dot(&n),
    );
    let inv = frame
        .metric
        .try_inverse()
        .ok_or(CamcError::DegenerateChart {
            u,
            v,
            cross_norm: 0.0,
        })?;
    Ok((inv * ii, frame))
}

/// Eigenvalues of a real 2x2 matrix, returned sorted together with the
/// imaginary part of the pair (zero when the spectrum is real). The
/// operators here are similar to symmetric matrices, so any imaginary part
/// is rounding noise; callers assert it is negligible and use the real parts.
pub fn eigenvalues_2x2(m: &Matrix2<f64>) -> (f64, f64, f64) {
    let tr = m.trace();
    let det = m.determinant();
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        ((tr - s) / 2.0, (tr + s) / 2.0, 0.0)
    } else {
        (tr / 2.0, tr / 2.0, (-disc).sqrt() / 2.0)
    }
}

/// Curvature data of an oriented surface at one point.
#[derive(Clone, Debug)]
pub struct CurvatureSample {
    pub u: f64,
    pub v: f64,
    pub point: Vector3<f64>,
    pub normal: Vector3<f64>,
    /// Euclidean shape operator in the chart basis.
    pub s: Matrix2<f64>,
    /// Anisotropic shape operator A = D^2 Phi(N) o S in the chart basis.
    pub a: Matrix2<f64>,
    /// Anisotropic mean curvature, trace of A.
    pub h: f64,
    /// Gauss curvature, det of S.
    pub k: f64,
    /// Anisotropic principal curvatures, sorted.
    pub lambda1: f64,
    pub lambda2: f64,
    /// sqrt(kappa1^2 + kappa2^2) for the Euclidean principal curvatures.
    pub sigma_norm: f64,
    /// sqrt(lambda1^2 + lambda2^2).
    pub aniso_norm: f64,
}

/// Anisotropic shape operator and derived scalars at a chart point.
///
/// The 3x3 Hessian D^2 Phi(N) maps the tangent plane to itself; composing it
/// with S and re-expanding in (X_u, X_v) through the metric gives the 2x2
/// matrix of A in the chart basis.
pub fn aniso_shape_operator(
    f: &Anisotropy,
    chart: &dyn Chart,
    u: f64,
    v: f64,
) -> Result<CurvatureSample> {
    let (s, frame) = euclid_shape_operator(chart, u, v)?;
    let p = f.hess_phi(&frame.normal);
    let y1 = p * (s[(0, 0)] * frame.jet.xu + s[(1, 0)] * frame.jet.xv);
    let y2 = p * (s[(0, 1)] * frame.jet.xu + s[(1, 1)] * frame.jet.xv);
    let rhs = Matrix2::new(
        frame.jet.xu.dot(&y1),
        frame.jet.xu.dot(&y2),
        frame.jet.xv.dot(&y1),
        frame.jet.xv.dot(&y2),
    );
    let inv = frame
        .metric
        .try_inverse()
        .ok_or(CamcError::DegenerateChart {
            u,
            v,
            cross_norm: 0.0,
        })?;
    let a = inv * rhs;
    let (k1, k2, _) = eigenvalues_2x2(&s);
    let (l1, l2, _) = eigenvalues_2x2(&a);
    Ok(CurvatureSample {
        u,
        v,
        point: frame.jet.x,
        normal: frame.normal,
        s,
        a,
        h: a.trace(),
        k: s.determinant(),
        lambda1: l1,
        lambda2: l2,
        sigma_norm: k1.hypot(k2),
        aniso_norm: l1.hypot(l2),
    })
}

/// Reference route for H: extend S by zero on the normal, then take the
/// ambient trace of D^2 Phi(N) composed with that extension. Must agree with
/// the trace of the 2x2 operator to rounding.
pub fn ambient_trace_h(f: &Anisotropy, chart: &dyn Chart, u: f64, v: f64) -> Result<f64> {
    let (s, frame) = euclid_shape_operator(chart, u, v)?;
    let b = Matrix3::from_columns(&[frame.jet.xu, frame.jet.xv, frame.normal]);
    let mut s_ext = Matrix3::zeros();
    s_ext[(0, 0)] = s[(0, 0)];
    s_ext[(0, 1)] = s[(0, 1)];
    s_ext[(1, 0)] = s[(1, 0)];
    s_ext[(1, 1)] = s[(1, 1)];
    let b_inv = b.try_inverse().ok_or(CamcError::DegenerateChart {
        u,
        v,
        cross_norm: 0.0,
    })?;
    let s_amb = b * s_ext * b_inv;
    Ok((f.hess_phi(&frame.normal) * s_amb).trace())
}

/// Per-vertex anisotropic mean curvature on a mesh.
#[derive(Clone, Debug)]
pub struct MeshCurvature {
    pub h: Vec<f64>,
    /// A vertex is flagged invalid when its 2-ring has fewer than 5 usable
    /// neighbors or the fit is rank deficient; flagged values are excluded
    /// from statistics and pairings.
    pub valid: Vec<bool>,
}

impl MeshCurvature {
    pub fn valid_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.h
            .iter()
            .zip(&self.valid)
            .filter(|(_, &ok)| ok)
            .map(|(&h, _)| h)
    }

    pub fn mean(&self) -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for h in self.valid_values() {
            sum += h;
            count += 1;
        }
        sum / count.max(1) as f64
    }
}

/// Estimate the anisotropic mean curvature at every vertex: fit a quadratic
/// height field over the 2-ring in the vertex tangent frame (linear terms
/// included for robustness), read S from the quadratic part, and compose
/// with the tangential Hessian of Phi.
///
/// The fit is distance-weighted (Gaussian, bandwidth set by the 1-ring):
/// without weights the outer ring dominates the normal equations and the
/// quartic tail of the surface biases the quadratic coefficients by ~2h^2;
/// weighting pushes that bias down to ~h^2/2 while the 2-ring still keeps
/// the system overdetermined at valence-5 vertices.
pub fn aniso_h_mesh(f: &Anisotropy, mesh: &TriMesh) -> Result<MeshCurvature> {
    if mesh.vertices.is_empty() {
        return Err(CamcError::EmptyInput { what: "mesh" });
    }
    let adj = mesh.vertex_adjacency();
    let nv = mesh.vertices.len();
    let mut h = vec![0.0; nv];
    let mut valid = vec![false; nv];
    for v in 0..nv {
        let ring = mesh.two_ring(&adj, v);
        if ring.len() < 5 || adj[v].is_empty() {
            continue;
        }
        let n = mesh.normals[v];
        let (t1, t2) = tangent_basis(&n);
        let origin = mesh.vertices[v];
        // Scale local coordinates by the mean 1-ring offset so the
        // normal-equation columns are comparably sized; the same length sets
        // the weight bandwidth.
        let mut rho = 0.0;
        for &q in &adj[v] {
            rho += (mesh.vertices[q as usize] - origin).norm();
        }
        rho /= adj[v].len() as f64;
        if rho <= 0.0 {
            continue;
        }
        let mut rows = DMatrix::zeros(ring.len(), 5);
        let mut rhs = DVector::zeros(ring.len());
        for (r, &q) in ring.iter().enumerate() {
            let d = (mesh.vertices[q as usize] - origin) / rho;
            let (x, y, z) = (d.dot(&t1), d.dot(&t2), d.dot(&n));
            // exp(-rho_i^2 / sigma^2) with sigma^2 = rho^2 / 2, as a
            // square-root factor on the least-squares rows.
            let w = (-(x * x + y * y)).exp();
            rows[(r, 0)] = w * 0.5 * x * x;
            rows[(r, 1)] = w * x * y;
            rows[(r, 2)] = w * 0.5 * y * y;
            rows[(r, 3)] = w * x;
            rows[(r, 4)] = w * y;
            rhs[r] = w * z;
        }
        let svd = rows.svd(true, true);
        let rank = svd.rank(1e-9);
        if rank < 5 {
            continue;
        }
        let coeffs = match svd.solve(&rhs, 1e-12) {
            Ok(c) => c,
            Err(_) => continue,
        };
        // Undo the coordinate scaling: quadratic coefficients divide by rho.
        let s_frame = Matrix2::new(coeffs[0], coeffs[1], coeffs[1], coeffs[2]) / rho;
        let p = f.hess_phi(&n);
        let p_frame = Matrix2::new(
            (p * t1).dot(&t1),
            (p * t2).dot(&t1),
            (p * t1).dot(&t2),
            (p * t2).dot(&t2),
        );
        h[v] = (p_frame * s_frame).trace();
        valid[v] = true;
    }
    Ok(MeshCurvature { h, valid })
}

/// Value of the anisotropic functional with volume coupling.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FunctionalValue {
    pub area_term: f64,
    pub volume_term: f64,
    pub h0: f64,
    pub total: f64,
}

/// Anisotropic area integral F(N) dA by flat-triangle midpoint quadrature.
pub fn functional_f(f: &Anisotropy, mesh: &TriMesh) -> f64 {
    let mut total = 0.0;
    for face in &mesh.faces {
        let av = mesh.face_area_vector(face);
        let area = av.norm();
        if area == 0.0 {
            continue;
        }
        total += area * f.phi(&(av / area));
    }
    total
}

/// F0 = integral of F(N) + (H0/3) <x, N>; the volume term is the enclosed
/// volume, so the mesh must be closed whenever H0 != 0.
pub fn functional_f0(f: &Anisotropy, mesh: &TriMesh, h0: f64) -> Result<FunctionalValue> {
    if h0 != 0.0 {
        mesh.require_closed()?;
    }
    let area_term = functional_f(f, mesh);
    let volume_term = mesh.volume();
    Ok(FunctionalValue {
        area_term,
        volume_term,
        h0,
        total: area_term + h0 * volume_term,
    })
}

/// First-variation comparison at a closed mesh.
#[derive(Clone, Debug)]
pub struct VariationCheck {
    /// Central difference of F0 under x -> x + t phi N.
    pub numeric: f64,
    /// Discrete curvature pairing: sum of (H - H0) phi over vertex area lumps.
    pub pairing: f64,
    /// Calibrated sign relating the two: numeric ~ sign * pairing.
    pub sign: f64,
}

/// Sign of the first variation relative to the curvature pairing, calibrated
/// once on the round case (unit sphere, F = 1, phi = 1, H0 = 0) and then
/// treated as immutable configuration.
pub fn variation_sign() -> f64 {
    static SIGN: OnceLock<f64> = OnceLock::new();
    *SIGN.get_or_init(|| {
        let f = Anisotropy::constant();
        let s = icosphere(3);
        let mesh = TriMesh::new(s.vertices.clone(), s.vertices, s.faces);
        let phi = vec![1.0; mesh.vertices.len()];
        let numeric = variation_numeric(&f, &mesh, &phi, 0.0).expect("round case is closed");
        let pairing = variation_pairing(&f, &mesh, &phi, 0.0).expect("round case fits");
        (numeric / pairing).signum()
    })
}

fn displaced(mesh: &TriMesh, phi: &[f64], t: f64) -> TriMesh {
    let vertices = mesh
        .vertices
        .iter()
        .zip(phi)
        .zip(&mesh.normals)
        .map(|((x, &p), n)| x + t * p * n)
        .collect();
    TriMesh::new(vertices, mesh.normals.clone(), mesh.faces.clone())
}

fn variation_numeric(f: &Anisotropy, mesh: &TriMesh, phi: &[f64], h0: f64) -> Result<f64> {
    let t = VARIATION_STEP;
    let plus = functional_f0(f, &displaced(mesh, phi, t), h0)?.total;
    let minus = functional_f0(f, &displaced(mesh, phi, -t), h0)?.total;
    Ok((plus - minus) / (2.0 * t))
}

fn variation_pairing(f: &Anisotropy, mesh: &TriMesh, phi: &[f64], h0: f64) -> Result<f64> {
    let curv = aniso_h_mesh(f, mesh)?;
    let areas = mesh.vertex_areas();
    let mut pairing = 0.0;
    for v in 0..mesh.vertices.len() {
        if curv.valid[v] {
            pairing += (curv.h[v] - h0) * phi[v] * areas[v];
        }
    }
    Ok(pairing)
}

/// Compare the numeric derivative of F0 under a normal perturbation with the
/// discrete curvature pairing. `phi` is one scalar per vertex.
pub fn first_variation_check(
    f: &Anisotropy,
    mesh: &TriMesh,
    phi: &[f64],
    h0: f64,
) -> Result<VariationCheck> {
    if phi.len() != mesh.vertices.len() {
        return Err(CamcError::EmptyInput {
            what: "variation field",
        });
    }
    mesh.require_closed()?;
    Ok(VariationCheck {
        numeric: variation_numeric(f, mesh, phi, h0)?,
        pairing: variation_pairing(f, mesh, phi, h0)?,
        sign: variation_sign(),
    })
}
