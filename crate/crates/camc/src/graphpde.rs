//! The anisotropic mean curvature of a graph z = u(x, y) with upward normal
//! is a quasilinear expression a(p,q)·u_xx + b(p,q)·u_xy + c(p,q)·u_yy in the
//! gradient p = u_x, q = u_y. This module assembles (a, b, c) for any builtin
//! anisotropy, evaluates the discrete residual on masked rectangular grids,
//! and solves the Dirichlet problem H = H0 by damped Newton iteration with a
//! banded direct solver.

use nalgebra::{Matrix2, Vector3};

use crate::anisotropy::Anisotropy;
use crate::error::{CamcError, Result};
use crate::mesh::TriMesh;

/// Max-norm residual target for the Newton solver.
pub const NEWTON_TOL: f64 = 1e-10;
/// Iteration cap; hitting it is reported as non-convergence.
pub const NEWTON_MAX_ITERS: usize = 50;

/// Upward unit normal of the graph at gradient (p, q).
pub fn graph_normal(p: f64, q: f64) -> Vector3<f64> {
    Vector3::new(-p, -q, 1.0) / (1.0 + p * p + q * q).sqrt()
}

/// Matrix of the Euclidean shape operator of the graph in the basis
/// (d/dx, d/dy): W^-3 · [[1+q^2, -pq], [-pq, 1+p^2]] · Hess(u), oriented by
/// the upward normal. Its trace on the upper unit hemisphere is -2.
pub fn graph_euclid_weingarten(p: f64, q: f64, uxx: f64, uxy: f64, uyy: f64) -> Matrix2<f64> {
    let w = (1.0 + p * p + q * q).sqrt();
    let c = Matrix2::new(1.0 + q * q, -p * q, -p * q, 1.0 + p * p);
    let hess = Matrix2::new(uxx, uxy, uxy, uyy);
    c * hess / (w * w * w)
}

/// Coefficient matrix K(p, q) with H = trace(K · Hess u) = a·u_xx +
/// b·u_xy + c·u_yy: K = G^-1 · B · G^-1 where G is the graph metric and
/// B_ij = t_i^T D^2Phi(n~) t_j at the unnormalized normal n~ = (-p, -q, 1)
/// (the (-1)-homogeneity of D^2Phi absorbs every W factor exactly).
fn coefficient_matrix(f: &Anisotropy, p: f64, q: f64) -> Matrix2<f64> {
    let t1 = Vector3::new(1.0, 0.0, p);
    let t2 = Vector3::new(0.0, 1.0, q);
    let hp = f.hess_phi(&Vector3::new(-p, -q, 1.0));
    let b = Matrix2::new(
        (hp * t1).dot(&t1),
        (hp * t2).dot(&t1),
        (hp * t1).dot(&t2),
        (hp * t2).dot(&t2),
    );
    let g = Matrix2::new(1.0 + p * p, p * q, p * q, 1.0 + q * q);
    let ginv = g.try_inverse().expect("graph metric is positive definite");
    ginv * b * ginv
}

/// Quasilinear coefficients (a, b, c) of the anisotropic mean curvature of a
/// graph at gradient (p, q). Requires an elliptic anisotropy (checked at the
/// graph normal); then 4ac - b^2 > 0.
pub fn assemble_coefficients(f: &Anisotropy, p: f64, q: f64) -> Result<(f64, f64, f64)> {
    let n = graph_normal(p, q);
    let (mu_min, _) = f.tangential_eigenvalues(&n)?;
    if mu_min <= 0.0 {
        return Err(CamcError::NotElliptic { min_eig: mu_min });
    }
    let k = coefficient_matrix(f, p, q);
    Ok((k[(0, 0)], 2.0 * k[(0, 1)], k[(1, 1)]))
}

/// Coefficients together with their exact partial derivatives in p and q,
/// for the Newton linearization of the discrete residual.
#[derive(Clone, Copy, Debug)]
pub struct CoefficientJet {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a_p: f64,
    pub b_p: f64,
    pub c_p: f64,
    pub a_q: f64,
    pub b_q: f64,
    pub c_q: f64,
}

impl CoefficientJet {
    pub fn discriminant(&self) -> f64 {
        4.0 * self.a * self.c - self.b * self.b
    }
}

/// Analytic jet of (a, b, c): differentiates K = G^-1 B G^-1 through the
/// third derivative of Phi. No finite differences anywhere.
pub fn coefficient_jet(f: &Anisotropy, p: f64, q: f64) -> CoefficientJet {
    let t1 = Vector3::new(1.0, 0.0, p);
    let t2 = Vector3::new(0.0, 1.0, q);
    let e3 = Vector3::new(0.0, 0.0, 1.0);
    let nt = Vector3::new(-p, -q, 1.0);
    let hp = f.hess_phi(&nt);
    let bmat = Matrix2::new(
        (hp * t1).dot(&t1),
        (hp * t2).dot(&t1),
        (hp * t1).dot(&t2),
        (hp * t2).dot(&t2),
    );
    let g = Matrix2::new(1.0 + p * p, p * q, p * q, 1.0 + q * q);
    let ginv = g.try_inverse().expect("graph metric is positive definite");
    let k = ginv * bmat * ginv;

    // d/dp: dn~ = (-1,0,0), dt1 = e3, dt2 = 0, dG = [[2p, q], [q, 0]].
    let dh_p = f.third_phi(&nt, &Vector3::new(-1.0, 0.0, 0.0));
    let db_p = Matrix2::new(
        2.0 * (hp * t1).dot(&e3) + (dh_p * t1).dot(&t1),
        (hp * t2).dot(&e3) + (dh_p * t2).dot(&t1),
        (hp * t2).dot(&e3) + (dh_p * t1).dot(&t2),
        (dh_p * t2).dot(&t2),
    );
    let dg_p = Matrix2::new(2.0 * p, q, q, 0.0);
    let dginv_p = -ginv * dg_p * ginv;
    let dk_p = dginv_p * bmat * ginv + ginv * db_p * ginv + ginv * bmat * dginv_p;

    // d/dq: dn~ = (0,-1,0), dt1 = 0, dt2 = e3, dG = [[0, p], [p, 2q]].
    let dh_q = f.third_phi(&nt, &Vector3::new(0.0, -1.0, 0.0));
    let db_q = Matrix2::new(
        (dh_q * t1).dot(&t1),
        (hp * t1).dot(&e3) + (dh_q * t2).dot(&t1),
        (hp * t1).dot(&e3) + (dh_q * t1).dot(&t2),
        2.0 * (hp * t2).dot(&e3) + (dh_q * t2).dot(&t2),
    );
    let dg_q = Matrix2::new(0.0, p, p, 2.0 * q);
    let dginv_q = -ginv * dg_q * ginv;
    let dk_q = dginv_q * bmat * ginv + ginv * db_q * ginv + ginv * bmat * dginv_q;

    CoefficientJet {
        a: k[(0, 0)],
        b: 2.0 * k[(0, 1)],
        c: k[(1, 1)],
        a_p: dk_p[(0, 0)],
        b_p: 2.0 * dk_p[(0, 1)],
        c_p: dk_p[(1, 1)],
        a_q: dk_q[(0, 0)],
        b_q: 2.0 * dk_q[(0, 1)],
        c_q: dk_q[(1, 1)],
    }
}

/// General band matrix in LAPACK-style storage with partial-pivoting LU.
/// Entry (i, j) is admissible for -ku <= i - j <= kl; the extra kl
/// diagonals above hold pivoting fill-in.
pub struct BandedSystem {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<f64>,
}

impl BandedSystem {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        BandedSystem {
            n,
            kl,
            ku,
            ab: vec![0.0; n * (2 * kl + ku + 1)],
        }
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        // Row offset kl + ku + i - j is in [0, 2kl+ku] for the padded band.
        j * (2 * self.kl + self.ku + 1) + self.kl + self.ku + i - j
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            i < self.n && j < self.n && j + self.kl >= i && i + self.ku >= j,
            "entry ({i}, {j}) outside band kl={}, ku={}",
            self.kl,
            self.ku
        );
        let s = self.slot(i, j);
        self.ab[s] += v;
    }

    /// In-place LU with partial pivoting; returns the pivot row per column.
    #[allow(clippy::needless_range_loop)] // band offsets via slot(i, j) read better indexed
    fn factor(&mut self) -> Result<Vec<usize>> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut piv = vec![0usize; n];
        for j in 0..n {
            let row_end = (j + kl).min(n - 1);
            let mut best_i = j;
            let mut best = self.ab[self.slot(j, j)].abs();
            for i in (j + 1)..=row_end {
                let v = self.ab[self.slot(i, j)].abs();
                if v > best {
                    best = v;
                    best_i = i;
                }
            }
            if best == 0.0 {
                return Err(CamcError::SingularSystem { column: j });
            }
            piv[j] = best_i;
            let col_end = (j + kl + ku).min(n - 1);
            if best_i != j {
                for c in j..=col_end {
                    let (s1, s2) = (self.slot(j, c), self.slot(best_i, c));
                    self.ab.swap(s1, s2);
                }
            }
            let pivot = self.ab[self.slot(j, j)];
            for i in (j + 1)..=row_end {
                let s_ij = self.slot(i, j);
                let l = self.ab[s_ij] / pivot;
                self.ab[s_ij] = l;
                if l != 0.0 {
                    for c in (j + 1)..=col_end {
                        let s_jc = self.slot(j, c);
                        let s_ic = self.slot(i, c);
                        self.ab[s_ic] -= l * self.ab[s_jc];
                    }
                }
            }
        }
        Ok(piv)
    }

    /// Solve A x = rhs, consuming the matrix.
    #[allow(clippy::needless_range_loop)] // band offsets via slot(i, j) read better indexed
    pub fn solve(mut self, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
        assert_eq!(rhs.len(), self.n, "rhs length mismatch");
        let piv = self.factor()?;
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        for j in 0..n {
            if piv[j] != j {
                rhs.swap(j, piv[j]);
            }
            let bj = rhs[j];
            if bj != 0.0 {
                for i in (j + 1)..=(j + kl).min(n - 1) {
                    rhs[i] -= self.ab[self.slot(i, j)] * bj;
                }
            }
        }
        for j in (0..n).rev() {
            let mut s = rhs[j];
            for c in (j + 1)..=(j + kl + ku).min(n - 1) {
                s -= self.ab[self.slot(j, c)] * rhs[c];
            }
            rhs[j] = s / self.ab[self.slot(j, j)];
        }
        Ok(rhs)
    }
}

/// Node inclusion rule for the grid: the whole rectangle, or a disk.
#[derive(Clone, Copy, Debug)]
pub enum Mask {
    Rectangle,
    Disk { center: (f64, f64), radius: f64 },
}

impl Mask {
    fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Mask::Rectangle => true,
            Mask::Disk {
                center: (cx, cy),
                radius,
            } => (x - cx).powi(2) + (y - cy).powi(2) < radius * radius,
        }
    }
}

/// Per-node classification: interior nodes carry unknowns, boundary nodes
/// carry Dirichlet data, outside nodes are dead.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeLabel {
    Outside,
    Interior,
    Boundary,
}

/// Dirichlet problem for the CAMC graph equation on a masked square-spacing
/// grid. Interior nodes have all 8 neighbors inside, so every finite
/// difference stencil (including the 4-point cross derivative) is complete.
pub struct GraphProblem {
    pub f: Anisotropy,
    pub h0: f64,
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub labels: Vec<NodeLabel>,
    pub boundary_values: Vec<f64>,
}

impl GraphProblem {
    /// Build and validate a problem: equal spacing in both axes, at least
    /// one interior node, 4-connected interior.
    pub fn new(
        f: Anisotropy,
        h0: f64,
        domain: [f64; 4],
        nx: usize,
        ny: usize,
        mask: Mask,
        boundary: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let [x0, x1, y0, y1] = domain;
        if nx < 3 || ny < 3 {
            return Err(CamcError::InvalidGrid {
                reason: format!("need at least 3 nodes per axis, got {nx} x {ny}"),
            });
        }
        if !(x1 > x0 && y1 > y0) {
            return Err(CamcError::InvalidGrid {
                reason: "domain rectangle is empty".into(),
            });
        }
        let hx = (x1 - x0) / (nx - 1) as f64;
        let hy = (y1 - y0) / (ny - 1) as f64;
        if (hx - hy).abs() > 1e-12 * hx.max(hy) {
            return Err(CamcError::InvalidGrid {
                reason: format!("spacing must match in both axes: hx = {hx}, hy = {hy}"),
            });
        }
        let h = hx;
        let idx = |ix: usize, iy: usize| iy * nx + ix;
        let mut inside = vec![false; nx * ny];
        for iy in 0..ny {
            for ix in 0..nx {
                inside[idx(ix, iy)] =
                    mask.contains(x0 + ix as f64 * h, y0 + iy as f64 * h);
            }
        }
        let mut labels = vec![NodeLabel::Outside; nx * ny];
        for iy in 0..ny {
            for ix in 0..nx {
                if !inside[idx(ix, iy)] {
                    continue;
                }
                let edge = ix == 0 || iy == 0 || ix == nx - 1 || iy == ny - 1;
                let surrounded = !edge
                    && (-1i64..=1)
                        .flat_map(|dy| (-1i64..=1).map(move |dx| (dx, dy)))
                        .all(|(dx, dy)| {
                            inside[idx(
                                (ix as i64 + dx) as usize,
                                (iy as i64 + dy) as usize,
                            )]
                        });
                labels[idx(ix, iy)] = if surrounded {
                    NodeLabel::Interior
                } else {
                    NodeLabel::Boundary
                };
            }
        }
        let interior: Vec<usize> = (0..nx * ny)
            .filter(|&k| labels[k] == NodeLabel::Interior)
            .collect();
        if interior.is_empty() {
            return Err(CamcError::InvalidGrid {
                reason: "no interior nodes".into(),
            });
        }
        // 4-connectivity of the interior by flood fill.
        let mut seen = vec![false; nx * ny];
        let mut stack = vec![interior[0]];
        seen[interior[0]] = true;
        let mut count = 1usize;
        while let Some(k) = stack.pop() {
            let (ix, iy) = (k % nx, k / nx);
            let mut push = |k2: usize| {
                if labels[k2] == NodeLabel::Interior && !seen[k2] {
                    seen[k2] = true;
                    count += 1;
                    stack.push(k2);
                }
            };
            if ix > 0 {
                push(k - 1);
            }
            if ix + 1 < nx {
                push(k + 1);
            }
            if iy > 0 {
                push(k - nx);
            }
            if iy + 1 < ny {
                push(k + nx);
            }
        }
        if count != interior.len() {
            return Err(CamcError::InvalidGrid {
                reason: format!(
                    "interior is not 4-connected: {count} of {} reachable",
                    interior.len()
                ),
            });
        }
        let mut boundary_values = vec![0.0; nx * ny];
        for iy in 0..ny {
            for ix in 0..nx {
                if labels[idx(ix, iy)] == NodeLabel::Boundary {
                    boundary_values[idx(ix, iy)] =
                        boundary(x0 + ix as f64 * h, y0 + iy as f64 * h);
                }
            }
        }
        Ok(GraphProblem {
            f,
            h0,
            x0,
            y0,
            h,
            nx,
            ny,
            labels,
            boundary_values,
        })
    }

    #[inline]
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn node_xy(&self, ix: usize, iy: usize) -> (f64, f64) {
        (self.x0 + ix as f64 * self.h, self.y0 + iy as f64 * self.h)
    }

    /// Interior node coordinates in row-major enumeration order.
    pub fn interior_nodes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                if self.labels[self.idx(ix, iy)] == NodeLabel::Interior {
                    out.push((ix, iy));
                }
            }
        }
        out
    }

    /// Field initialized with boundary data, zero at interior, NaN outside.
    pub fn boundary_field(&self) -> Vec<f64> {
        self.labels
            .iter()
            .zip(&self.boundary_values)
            .map(|(&l, &g)| match l {
                NodeLabel::Outside => f64::NAN,
                NodeLabel::Interior => 0.0,
                NodeLabel::Boundary => g,
            })
            .collect()
    }

    /// Central differences of u at an interior node: (p, q, uxx, uxy, uyy).
    fn stencil(&self, u: &[f64], ix: usize, iy: usize) -> (f64, f64, f64, f64, f64) {
        let h = self.h;
        let c = u[self.idx(ix, iy)];
        let e = u[self.idx(ix + 1, iy)];
        let w = u[self.idx(ix - 1, iy)];
        let n = u[self.idx(ix, iy + 1)];
        let s = u[self.idx(ix, iy - 1)];
        let ne = u[self.idx(ix + 1, iy + 1)];
        let nw = u[self.idx(ix - 1, iy + 1)];
        let se = u[self.idx(ix + 1, iy - 1)];
        let sw = u[self.idx(ix - 1, iy - 1)];
        let p = (e - w) / (2.0 * h);
        let q = (n - s) / (2.0 * h);
        let uxx = (e - 2.0 * c + w) / (h * h);
        let uyy = (n - 2.0 * c + s) / (h * h);
        let uxy = (ne - nw - se + sw) / (4.0 * h * h);
        (p, q, uxx, uxy, uyy)
    }
}

/// Discrete residual a·u_xx + b·u_xy + c·u_yy - H0 per interior node;
/// NaN at boundary and outside nodes.
pub fn camc_residual(problem: &GraphProblem, u: &[f64]) -> Vec<f64> {
    assert_eq!(u.len(), problem.nx * problem.ny, "field size mismatch");
    let mut res = vec![f64::NAN; u.len()];
    for (ix, iy) in problem.interior_nodes() {
        let (p, q, uxx, uxy, uyy) = problem.stencil(u, ix, iy);
        let k = coefficient_matrix(&problem.f, p, q);
        let (a, b, c) = (k[(0, 0)], 2.0 * k[(0, 1)], k[(1, 1)]);
        res[problem.idx(ix, iy)] = a * uxx + b * uxy + c * uyy - problem.h0;
    }
    res
}

/// Max-norm over the interior entries of a residual field.
pub fn residual_norm(res: &[f64]) -> f64 {
    res.iter()
        .filter(|v| !v.is_nan())
        .fold(0.0f64, |m, &v| m.max(v.abs()))
}

/// Solution of the Dirichlet problem with convergence diagnostics.
#[derive(Clone, Debug)]
pub struct GraphSolution {
    /// Full-grid field: solved values inside, NaN outside.
    pub u: Vec<f64>,
    /// Full-grid residual: defined at interior nodes, NaN elsewhere.
    pub residual: Vec<f64>,
    pub residual_norm: f64,
    pub newton_iterations: usize,
    /// min over accepted iterates and nodes of 4ac - b^2.
    pub min_discriminant: f64,
}

/// Solve the linear problem a0·uxx + b0·uxy + c0·uyy = rhs with coefficients
/// frozen per node, imposing the problem's boundary values. Shared by the
/// harmonic initial guess and the Picard fallback.
fn linear_solve(
    problem: &GraphProblem,
    coeff: impl Fn(usize, usize) -> (f64, f64, f64),
    rhs_value: f64,
) -> Result<Vec<f64>> {
    let interior = problem.interior_nodes();
    let m = interior.len();
    let mut rank = vec![usize::MAX; problem.nx * problem.ny];
    for (r, &(ix, iy)) in interior.iter().enumerate() {
        rank[problem.idx(ix, iy)] = r;
    }
    let h2 = problem.h * problem.h;
    // Nine-point stencil offsets and their coefficient builders.
    let weights = |a: f64, b: f64, c: f64| {
        [
            (1i64, 0i64, a / h2),
            (-1, 0, a / h2),
            (0, 1, c / h2),
            (0, -1, c / h2),
            (1, 1, b / (4.0 * h2)),
            (-1, -1, b / (4.0 * h2)),
            (1, -1, -b / (4.0 * h2)),
            (-1, 1, -b / (4.0 * h2)),
        ]
    };
    let mut bandwidth = 0usize;
    for (r, &(ix, iy)) in interior.iter().enumerate() {
        let (a, b, c) = coeff(ix, iy);
        for (dx, dy, _) in weights(a, b, c) {
            let k2 = problem.idx((ix as i64 + dx) as usize, (iy as i64 + dy) as usize);
            if rank[k2] != usize::MAX {
                bandwidth = bandwidth.max(r.abs_diff(rank[k2]));
            }
        }
    }
    let mut sys = BandedSystem::new(m, bandwidth, bandwidth);
    let mut rhs = vec![0.0; m];
    for (r, &(ix, iy)) in interior.iter().enumerate() {
        let (a, b, c) = coeff(ix, iy);
        sys.add(r, r, -2.0 * (a + c) / h2);
        rhs[r] = rhs_value;
        for (dx, dy, w) in weights(a, b, c) {
            let k2 = problem.idx((ix as i64 + dx) as usize, (iy as i64 + dy) as usize);
            if rank[k2] != usize::MAX {
                sys.add(r, rank[k2], w);
            } else {
                rhs[r] -= w * problem.boundary_values[k2];
            }
        }
    }
    let x = sys.solve(rhs)?;
    let mut u = problem.boundary_field();
    for (r, &(ix, iy)) in interior.iter().enumerate() {
        u[problem.idx(ix, iy)] = x[r];
    }
    Ok(u)
}

/// Discrete-harmonic extension of the boundary data: the default Newton
/// initial guess.
pub fn harmonic_extension(problem: &GraphProblem) -> Result<Vec<f64>> {
    linear_solve(problem, |_, _| (1.0, 0.0, 1.0), 0.0)
}

struct NewtonSystem {
    jacobian: BandedSystem,
    residual: Vec<f64>,
    norm: f64,
    min_discriminant: f64,
}

/// Residual, exact Jacobian, and per-node ellipticity check at an iterate.
fn newton_system(
    problem: &GraphProblem,
    interior: &[(usize, usize)],
    rank: &[usize],
    bandwidth: usize,
    u: &[f64],
) -> Result<NewtonSystem> {
    let m = interior.len();
    let h = problem.h;
    let h2 = h * h;
    let mut jac = BandedSystem::new(m, bandwidth, bandwidth);
    let mut res = vec![0.0; m];
    let mut norm = 0.0f64;
    let mut min_disc = f64::INFINITY;
    for (r, &(ix, iy)) in interior.iter().enumerate() {
        let (p, q, uxx, uxy, uyy) = problem.stencil(u, ix, iy);
        let jet = coefficient_jet(&problem.f, p, q);
        let disc = jet.discriminant();
        if disc <= 0.0 {
            return Err(CamcError::EllipticityLoss {
                i: ix,
                j: iy,
                value: disc,
            });
        }
        min_disc = min_disc.min(disc);
        let value = jet.a * uxx + jet.b * uxy + jet.c * uyy - problem.h0;
        res[r] = value;
        norm = norm.max(value.abs());
        let dres_dp = jet.a_p * uxx + jet.b_p * uxy + jet.c_p * uyy;
        let dres_dq = jet.a_q * uxx + jet.b_q * uxy + jet.c_q * uyy;
        let entries = [
            (0i64, 0i64, -2.0 * (jet.a + jet.c) / h2),
            (1, 0, jet.a / h2 + dres_dp / (2.0 * h)),
            (-1, 0, jet.a / h2 - dres_dp / (2.0 * h)),
            (0, 1, jet.c / h2 + dres_dq / (2.0 * h)),
            (0, -1, jet.c / h2 - dres_dq / (2.0 * h)),
            (1, 1, jet.b / (4.0 * h2)),
            (-1, -1, jet.b / (4.0 * h2)),
            (1, -1, -jet.b / (4.0 * h2)),
            (-1, 1, -jet.b / (4.0 * h2)),
        ];
        for (dx, dy, w) in entries {
            let k2 = problem.idx((ix as i64 + dx) as usize, (iy as i64 + dy) as usize);
            if rank[k2] != usize::MAX {
                jac.add(r, rank[k2], w);
            }
        }
    }
    Ok(NewtonSystem {
        jacobian: jac,
        residual: res,
        norm,
        min_discriminant: min_disc,
    })
}

/// Damped Newton for the Dirichlet problem. Starts from the supplied field
/// or the harmonic extension, halves the step until the max-norm residual
/// decreases, falls back to one frozen-coefficient Picard sweep when even
/// the shortest step fails, and stops at residual <= 1e-10 or 50 iterations.
pub fn solve_dirichlet(
    problem: &GraphProblem,
    initial_guess: Option<&[f64]>,
) -> Result<GraphSolution> {
    let interior = problem.interior_nodes();
    let mut rank = vec![usize::MAX; problem.nx * problem.ny];
    for (r, &(ix, iy)) in interior.iter().enumerate() {
        rank[problem.idx(ix, iy)] = r;
    }
    let mut bandwidth = 0usize;
    for (r, &(ix, iy)) in interior.iter().enumerate() {
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let k2 =
                    problem.idx((ix as i64 + dx) as usize, (iy as i64 + dy) as usize);
                if rank[k2] != usize::MAX {
                    bandwidth = bandwidth.max(r.abs_diff(rank[k2]));
                }
            }
        }
    }
    let mut u = match initial_guess {
        Some(g) => {
            assert_eq!(g.len(), problem.nx * problem.ny, "initial guess size");
            g.to_vec()
        }
        None => harmonic_extension(problem)?,
    };
    let mut min_disc_run = f64::INFINITY;
    let mut iterations = 0usize;
    loop {
        let sys = newton_system(problem, &interior, &rank, bandwidth, &u)?;
        min_disc_run = min_disc_run.min(sys.min_discriminant);
        if sys.norm <= NEWTON_TOL {
            let residual = camc_residual(problem, &u);
            return Ok(GraphSolution {
                residual_norm: residual_norm(&residual),
                residual,
                u,
                newton_iterations: iterations,
                min_discriminant: min_disc_run,
            });
        }
        if iterations >= NEWTON_MAX_ITERS {
            return Err(CamcError::NonConvergence {
                iterations,
                residual: sys.norm,
            });
        }
        let neg_res: Vec<f64> = sys.residual.iter().map(|v| -v).collect();
        let delta = sys.jacobian.solve(neg_res)?;
        let try_step = |alpha: f64| -> (Vec<f64>, f64) {
            let mut trial = u.clone();
            for (r, &(ix, iy)) in interior.iter().enumerate() {
                trial[problem.idx(ix, iy)] += alpha * delta[r];
            }
            let norm = residual_norm(&camc_residual(problem, &trial));
            (trial, norm)
        };
        let mut accepted = None;
        let mut alpha = 1.0;
        while alpha >= 1e-8 {
            let (trial, norm) = try_step(alpha);
            if norm < sys.norm {
                accepted = Some(trial);
                break;
            }
            alpha *= 0.5;
        }
        u = match accepted {
            Some(trial) => trial,
            None => {
                // Frozen-coefficient Picard sweep.
                let picard = linear_solve(
                    problem,
                    |ix, iy| {
                        let (p, q, _, _, _) = problem.stencil(&u, ix, iy);
                        let k = coefficient_matrix(&problem.f, p, q);
                        (k[(0, 0)], 2.0 * k[(0, 1)], k[(1, 1)])
                    },
                    problem.h0,
                )?;
                let norm = residual_norm(&camc_residual(problem, &picard));
                if norm >= sys.norm {
                    return Err(CamcError::NonConvergence {
                        iterations,
                        residual: sys.norm,
                    });
                }
                picard
            }
        };
        iterations += 1;
    }
}

/// Height-field mesh of a solution for OBJ export: one vertex per inside
/// node, two upward triangles per fully-inside cell, area-averaged vertex
/// normals.
pub fn height_field_mesh(problem: &GraphProblem, u: &[f64]) -> Result<TriMesh> {
    assert_eq!(u.len(), problem.nx * problem.ny, "field size mismatch");
    let mut vid = vec![u32::MAX; u.len()];
    let mut vertices = Vec::new();
    for iy in 0..problem.ny {
        for ix in 0..problem.nx {
            let k = problem.idx(ix, iy);
            if problem.labels[k] != NodeLabel::Outside {
                vid[k] = vertices.len() as u32;
                let (x, y) = problem.node_xy(ix, iy);
                vertices.push(Vector3::new(x, y, u[k]));
            }
        }
    }
    if vertices.is_empty() {
        return Err(CamcError::EmptyInput { what: "height field" });
    }
    let mut faces = Vec::new();
    for iy in 0..problem.ny - 1 {
        for ix in 0..problem.nx - 1 {
            let corners = [
                vid[problem.idx(ix, iy)],
                vid[problem.idx(ix + 1, iy)],
                vid[problem.idx(ix + 1, iy + 1)],
                vid[problem.idx(ix, iy + 1)],
            ];
            if corners.iter().all(|&v| v != u32::MAX) {
                faces.push([corners[0], corners[1], corners[2]]);
                faces.push([corners[0], corners[2], corners[3]]);
            }
        }
    }
    let mut normals = vec![Vector3::zeros(); vertices.len()];
    for face in &faces {
        let [a, b, c] = face.map(|v| vertices[v as usize]);
        let av = (b - a).cross(&(c - a));
        for &v in face {
            normals[v as usize] += av;
        }
    }
    for n in &mut normals {
        let len = n.norm();
        *n = if len > 0.0 {
            *n / len
        } else {
            Vector3::new(0.0, 0.0, 1.0)
        };
    }
    Ok(TriMesh::new(vertices, normals, faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{aniso_shape_operator, GraphChart};
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ellipsoid411() -> Anisotropy {
        Anisotropy::ellipsoid(nalgebra::Matrix3::from_diagonal(&Vector3::new(
            4.0, 1.0, 1.0,
        )))
        .unwrap()
    }

    fn perturbed(eps: f64) -> Anisotropy {
        Anisotropy::perturbed(eps, Vector3::new(0.0, 0.0, 1.0)).unwrap()
    }

    #[test]
    fn graph_normal_basics() {
        assert_relative_eq!(
            graph_normal(0.0, 0.0),
            Vector3::new(0.0, 0.0, 1.0),
            max_relative = 1e-15
        );
        let r = 1.0 / 2.0f64.sqrt();
        assert_relative_eq!(
            graph_normal(1.0, 0.0),
            Vector3::new(-r, 0.0, r),
            epsilon = 1e-15
        );
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let p = rng.gen_range(-3.0..3.0);
            let q = rng.gen_range(-3.0..3.0);
            assert!((graph_normal(p, q).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn euclid_weingarten_fixtures() {
        let id = graph_euclid_weingarten(0.0, 0.0, 1.0, 0.0, 1.0);
        assert_relative_eq!(id, Matrix2::identity(), epsilon = 1e-15);
        let d = graph_euclid_weingarten(0.0, 0.0, 2.0, 0.0, 0.0);
        assert_relative_eq!(d, Matrix2::new(2.0, 0.0, 0.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn euclid_weingarten_trace_on_upper_hemisphere() {
        // u = +sqrt(1 - x^2 - y^2): upward normal is exterior, trace = -2.
        let (x, y): (f64, f64) = (0.3, 0.1);
        let u = (1.0 - x * x - y * y).sqrt();
        let p = -x / u;
        let q = -y / u;
        let uxx = -(1.0 - y * y) / u.powi(3);
        let uyy = -(1.0 - x * x) / u.powi(3);
        let uxy = -x * y / u.powi(3);
        let w = graph_euclid_weingarten(p, q, uxx, uxy, uyy);
        assert_relative_eq!(w.trace(), -2.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_coefficients_reduce_exactly() {
        let f = Anisotropy::constant();
        let (a, b, c) = assemble_coefficients(&f, 0.0, 0.0).unwrap();
        assert_relative_eq!(a, 1.0, epsilon = 1e-15);
        assert_relative_eq!(b, 0.0, epsilon = 1e-15);
        assert_relative_eq!(c, 1.0, epsilon = 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p: f64 = rng.gen_range(-2.0..2.0);
            let q: f64 = rng.gen_range(-2.0..2.0);
            let w = (1.0 + p * p + q * q).sqrt();
            let (a, b, c) = assemble_coefficients(&f, p, q).unwrap();
            assert_relative_eq!(a, (1.0 + q * q) / w.powi(3), max_relative = 1e-14);
            assert_relative_eq!(b, -2.0 * p * q / w.powi(3), epsilon = 1e-14);
            assert_relative_eq!(c, (1.0 + p * p) / w.powi(3), max_relative = 1e-14);
        }
    }

    /// H as evaluated through the chart machinery for the quadratic graph
    /// u = p x + q y + (uxx x^2 + 2 uxy xy + uyy y^2)/2 at the origin.
    fn chart_route_h(f: &Anisotropy, p: f64, q: f64, uxx: f64, uxy: f64, uyy: f64) -> f64 {
        let chart = GraphChart {
            g: move |x: f64, y: f64| {
                [
                    p * x + q * y + 0.5 * (uxx * x * x + 2.0 * uxy * x * y + uyy * y * y),
                    p + uxx * x + uxy * y,
                    q + uxy * x + uyy * y,
                    uxx,
                    uxy,
                    uyy,
                ]
            },
        };
        aniso_shape_operator(f, &chart, 0.0, 0.0).unwrap().h
    }

    #[test]
    fn coefficients_match_chart_route_at_100_states() {
        let fs = [Anisotropy::constant(), ellipsoid411(), perturbed(0.3)];
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let f = &fs[rng.gen_range(0..fs.len())];
            let p = rng.gen_range(-1.5..1.5);
            let q = rng.gen_range(-1.5..1.5);
            let uxx = rng.gen_range(-2.0..2.0);
            let uxy = rng.gen_range(-2.0..2.0);
            let uyy = rng.gen_range(-2.0..2.0);
            let (a, b, c) = assemble_coefficients(f, p, q).unwrap();
            let direct = a * uxx + b * uxy + c * uyy;
            let via_chart = chart_route_h(f, p, q, uxx, uxy, uyy);
            assert!(
                (direct - via_chart).abs() <= 1e-10 * (1.0 + via_chart.abs()),
                "coefficient route {direct} vs chart route {via_chart}"
            );
        }
    }

    #[test]
    fn ellipsoid_coefficients_match_fd_linearization() {
        let f = ellipsoid411();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let p = rng.gen_range(-1.0..1.0);
            let q = rng.gen_range(-1.0..1.0);
            let (a, b, c) = assemble_coefficients(&f, p, q).unwrap();
            assert!(4.0 * a * c - b * b > 0.0, "discriminant must be positive");
            let d = 1e-5;
            let fd_a = (chart_route_h(&f, p, q, d, 0.0, 0.0)
                - chart_route_h(&f, p, q, -d, 0.0, 0.0))
                / (2.0 * d);
            let fd_b = (chart_route_h(&f, p, q, 0.0, d, 0.0)
                - chart_route_h(&f, p, q, 0.0, -d, 0.0))
                / (2.0 * d);
            let fd_c = (chart_route_h(&f, p, q, 0.0, 0.0, d)
                - chart_route_h(&f, p, q, 0.0, 0.0, -d))
                / (2.0 * d);
            assert!((a - fd_a).abs() < 1e-8, "a = {a} vs fd {fd_a}");
            assert!((b - fd_b).abs() < 1e-8, "b = {b} vs fd {fd_b}");
            assert!((c - fd_c).abs() < 1e-8, "c = {c} vs fd {fd_c}");
        }
    }

    #[test]
    fn coefficient_jet_matches_finite_differences() {
        let fs = [Anisotropy::constant(), ellipsoid411(), perturbed(0.4)];
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let d = 1e-6;
        for f in &fs {
            for _ in 0..25 {
                let p = rng.gen_range(-1.5..1.5);
                let q = rng.gen_range(-1.5..1.5);
                let jet = coefficient_jet(f, p, q);
                let at = |p: f64, q: f64| {
                    let k = coefficient_matrix(f, p, q);
                    (k[(0, 0)], 2.0 * k[(0, 1)], k[(1, 1)])
                };
                let (ap, bp, cp) = at(p + d, q);
                let (am, bm, cm) = at(p - d, q);
                assert!((jet.a_p - (ap - am) / (2.0 * d)).abs() < 1e-7);
                assert!((jet.b_p - (bp - bm) / (2.0 * d)).abs() < 1e-7);
                assert!((jet.c_p - (cp - cm) / (2.0 * d)).abs() < 1e-7);
                let (aq, bq, cq) = at(p, q + d);
                let (am, bm, cm) = at(p, q - d);
                assert!((jet.a_q - (aq - am) / (2.0 * d)).abs() < 1e-7);
                assert!((jet.b_q - (bq - bm) / (2.0 * d)).abs() < 1e-7);
                assert!((jet.c_q - (cq - cm) / (2.0 * d)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn nonelliptic_anisotropy_is_rejected() {
        // epsilon = 1.5 turns the tangential form indefinite at the pole,
        // which is the graph normal at (p, q) = (0, 0).
        let f = perturbed(1.5);
        assert!(matches!(
            assemble_coefficients(&f, 0.0, 0.0),
            Err(CamcError::NotElliptic { .. })
        ));
    }

    #[test]
    fn banded_lu_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for &(n, band) in &[(12usize, 1usize), (60, 3), (90, 9), (200, 17)] {
            let mut sys = BandedSystem::new(n, band, band);
            let mut dense = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in i.saturating_sub(band)..(i + band + 1).min(n) {
                    let v = rng.gen_range(-1.0..1.0)
                        + if i == j { 4.0 } else { 0.0 };
                    sys.add(i, j, v);
                    dense[(i, j)] = v;
                }
            }
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = sys.solve(b.clone()).unwrap();
            let xd = dense
                .lu()
                .solve(&DVector::from_column_slice(&b))
                .unwrap();
            for i in 0..n {
                assert!(
                    (x[i] - xd[i]).abs() < 1e-10,
                    "n={n} band={band}: x[{i}] = {} vs dense {}",
                    x[i],
                    xd[i]
                );
            }
        }
    }

    #[test]
    fn banded_lu_pivots_and_detects_singularity() {
        // Zero diagonal forces pivoting.
        let mut sys = BandedSystem::new(2, 1, 1);
        sys.add(0, 1, 1.0);
        sys.add(1, 0, 1.0);
        let x = sys.solve(vec![2.0, 3.0]).unwrap();
        assert_relative_eq!(x[0], 3.0, epsilon = 1e-15);
        assert_relative_eq!(x[1], 2.0, epsilon = 1e-15);
        let mut sing = BandedSystem::new(3, 1, 1);
        sing.add(0, 0, 1.0);
        sing.add(2, 2, 1.0);
        assert!(matches!(
            sing.solve(vec![1.0, 1.0, 1.0]),
            Err(CamcError::SingularSystem { column: 1 })
        ));
    }

    fn disk_problem(
        f: Anisotropy,
        h0: f64,
        n: usize,
        boundary: impl Fn(f64, f64) -> f64,
    ) -> GraphProblem {
        GraphProblem::new(
            f,
            h0,
            [-0.5, 0.5, -0.5, 0.5],
            n,
            n,
            Mask::Disk {
                center: (0.0, 0.0),
                radius: 0.5,
            },
            boundary,
        )
        .unwrap()
    }

    #[test]
    fn grid_classification_invariants() {
        let p = disk_problem(Anisotropy::constant(), -2.0, 33, |_, _| 0.0);
        // Every interior node's 4-neighbors are interior or boundary.
        for (ix, iy) in p.interior_nodes() {
            for (dx, dy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                let k = p.idx((ix as i64 + dx) as usize, (iy as i64 + dy) as usize);
                assert_ne!(p.labels[k], NodeLabel::Outside);
            }
        }
        // Degenerate grids are rejected.
        assert!(matches!(
            GraphProblem::new(
                Anisotropy::constant(),
                0.0,
                [0.0, 1.0, 0.0, 2.0],
                11,
                11,
                Mask::Rectangle,
                |_, _| 0.0
            ),
            Err(CamcError::InvalidGrid { .. })
        ));
        assert!(matches!(
            GraphProblem::new(
                Anisotropy::constant(),
                0.0,
                [0.0, 1.0, 0.0, 1.0],
                9,
                9,
                Mask::Disk {
                    center: (0.0, 0.0),
                    radius: 1e-3
                },
                |_, _| 0.0
            ),
            Err(CamcError::InvalidGrid { .. })
        ));
    }

    #[test]
    fn residual_vanishes_on_planes() {
        let plane = |x: f64, y: f64| 3.0 * x - 2.0 * y + 7.0;
        let p = GraphProblem::new(
            Anisotropy::constant(),
            0.0,
            [-1.0, 1.0, -1.0, 1.0],
            21,
            21,
            Mask::Rectangle,
            plane,
        )
        .unwrap();
        let mut u = p.boundary_field();
        for (ix, iy) in p.interior_nodes() {
            let (x, y) = p.node_xy(ix, iy);
            u[p.idx(ix, iy)] = plane(x, y);
        }
        assert!(residual_norm(&camc_residual(&p, &u)) < 1e-12);
    }

    fn upper_sphere_cap(x: f64, y: f64) -> f64 {
        (1.0 - x * x - y * y).sqrt()
    }

    fn upper_wulff_cap(x: f64, y: f64) -> f64 {
        (1.0 - x * x / 4.0 - y * y).sqrt()
    }

    fn exact_field(p: &GraphProblem, exact: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let mut u = p.boundary_field();
        for (ix, iy) in p.interior_nodes() {
            let (x, y) = p.node_xy(ix, iy);
            u[p.idx(ix, iy)] = exact(x, y);
        }
        u
    }

    #[test]
    fn residual_on_exact_caps_is_second_order() {
        for (f, exact) in [
            (
                Anisotropy::constant(),
                upper_sphere_cap as fn(f64, f64) -> f64,
            ),
            (ellipsoid411(), upper_wulff_cap as fn(f64, f64) -> f64),
        ] {
            let norm_at = |n: usize| {
                let p = disk_problem(f.clone(), -2.0, n, exact);
                residual_norm(&camc_residual(&p, &exact_field(&p, exact)))
            };
            let r33 = norm_at(33);
            let r65 = norm_at(65);
            let order = (r33 / r65).log2();
            assert!(
                order >= 1.8,
                "residual order {order} (r33 = {r33:.3e}, r65 = {r65:.3e})"
            );
        }
    }

    #[test]
    fn newton_jacobian_matches_residual_differences() {
        let p = disk_problem(ellipsoid411(), -2.0, 17, upper_wulff_cap);
        let interior = p.interior_nodes();
        let mut rank = vec![usize::MAX; p.nx * p.ny];
        for (r, &(ix, iy)) in interior.iter().enumerate() {
            rank[p.idx(ix, iy)] = r;
        }
        // A smooth non-solution iterate.
        let mut u = p.boundary_field();
        for (ix, iy) in p.interior_nodes() {
            let (x, y) = p.node_xy(ix, iy);
            u[p.idx(ix, iy)] = upper_wulff_cap(x, y) + 0.05 * (3.0 * x).sin() * y;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = 1e-6;
        for _ in 0..12 {
            let col = rng.gen_range(0..interior.len());
            let k = {
                let (ix, iy) = interior[col];
                p.idx(ix, iy)
            };
            let mut up = u.clone();
            up[k] += d;
            let mut um = u.clone();
            um[k] -= d;
            let rp = camc_residual(&p, &up);
            let rm = camc_residual(&p, &um);
            let jcol = jacobian_column(&p, &interior, &u, col);
            for (r, &(jx, jy)) in interior.iter().enumerate() {
                let fd = (rp[p.idx(jx, jy)] - rm[p.idx(jx, jy)]) / (2.0 * d);
                assert!(
                    (jcol[r] - fd).abs() <= 1e-5 * (1.0 + fd.abs()),
                    "J[{r}][{col}] = {} vs fd {fd}",
                    jcol[r]
                );
            }
        }
    }

    /// Column of the exact Jacobian from the same jet formulas the banded
    /// assembly uses, written independently for the finite-difference check.
    fn jacobian_column(
        p: &GraphProblem,
        interior: &[(usize, usize)],
        u: &[f64],
        col: usize,
    ) -> Vec<f64> {
        let (cx, cy) = interior[col];
        let h = p.h;
        let h2 = h * h;
        let mut out = vec![0.0; interior.len()];
        for (r, &(ix, iy)) in interior.iter().enumerate() {
            let dx = cx as i64 - ix as i64;
            let dy = cy as i64 - iy as i64;
            if dx.abs() > 1 || dy.abs() > 1 {
                continue;
            }
            let (pp, qq, uxx, uxy, uyy) = p.stencil(u, ix, iy);
            let jet = coefficient_jet(&p.f, pp, qq);
            let dres_dp = jet.a_p * uxx + jet.b_p * uxy + jet.c_p * uyy;
            let dres_dq = jet.a_q * uxx + jet.b_q * uxy + jet.c_q * uyy;
            out[r] = match (dx, dy) {
                (0, 0) => -2.0 * (jet.a + jet.c) / h2,
                (1, 0) => jet.a / h2 + dres_dp / (2.0 * h),
                (-1, 0) => jet.a / h2 - dres_dp / (2.0 * h),
                (0, 1) => jet.c / h2 + dres_dq / (2.0 * h),
                (0, -1) => jet.c / h2 - dres_dq / (2.0 * h),
                (1, 1) | (-1, -1) => jet.b / (4.0 * h2),
                _ => -jet.b / (4.0 * h2),
            };
        }
        out
    }

    #[test]
    fn affine_boundary_data_solves_immediately() {
        let plane = |x: f64, y: f64| 0.5 * x - 1.5 * y + 2.0;
        let p = GraphProblem::new(
            Anisotropy::constant(),
            0.0,
            [-1.0, 1.0, -1.0, 1.0],
            17,
            17,
            Mask::Rectangle,
            plane,
        )
        .unwrap();
        let sol = solve_dirichlet(&p, None).unwrap();
        assert!(sol.newton_iterations <= 2);
        for (ix, iy) in p.interior_nodes() {
            let (x, y) = p.node_xy(ix, iy);
            assert!((sol.u[p.idx(ix, iy)] - plane(x, y)).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_boundary_data_gives_constant_solution() {
        for f in [Anisotropy::constant(), ellipsoid411(), perturbed(0.3)] {
            let p = disk_problem(f, 0.0, 21, |_, _| 4.5);
            let sol = solve_dirichlet(&p, None).unwrap();
            for (ix, iy) in p.interior_nodes() {
                assert!(
                    (sol.u[p.idx(ix, iy)] - 4.5).abs() < 1e-10,
                    "maximum principle violated"
                );
            }
        }
    }

    #[test]
    fn sphere_cap_is_recovered_at_65() {
        let p = disk_problem(Anisotropy::constant(), -2.0, 65, upper_sphere_cap);
        let sol = solve_dirichlet(&p, None).unwrap();
        assert!(sol.residual_norm <= NEWTON_TOL);
        assert!(sol.newton_iterations <= 20);
        assert!(sol.min_discriminant > 0.0);
        let mut max_err = 0.0f64;
        for (ix, iy) in p.interior_nodes() {
            let (x, y) = p.node_xy(ix, iy);
            max_err = max_err.max((sol.u[p.idx(ix, iy)] - upper_sphere_cap(x, y)).abs());
        }
        assert!(max_err < 5e-3, "max error {max_err:.3e}");
    }

    #[test]
    fn solution_error_is_second_order_for_both_caps() {
        for (f, exact) in [
            (
                Anisotropy::constant(),
                upper_sphere_cap as fn(f64, f64) -> f64,
            ),
            (ellipsoid411(), upper_wulff_cap as fn(f64, f64) -> f64),
        ] {
            let err_at = |n: usize| {
                let p = disk_problem(f.clone(), -2.0, n, exact);
                let sol = solve_dirichlet(&p, None).unwrap();
                let mut max_err = 0.0f64;
                for (ix, iy) in p.interior_nodes() {
                    let (x, y) = p.node_xy(ix, iy);
                    max_err = max_err.max((sol.u[p.idx(ix, iy)] - exact(x, y)).abs());
                }
                max_err
            };
            let e33 = err_at(33);
            let e65 = err_at(65);
            let order = (e33 / e65).log2();
            assert!(
                order >= 1.8,
                "solution order {order} (e33 = {e33:.3e}, e65 = {e65:.3e})"
            );
        }
    }

    #[test]
    fn height_field_mesh_is_exported_upward() {
        let p = disk_problem(Anisotropy::constant(), -2.0, 17, upper_sphere_cap);
        let sol = solve_dirichlet(&p, None).unwrap();
        let mesh = height_field_mesh(&p, &sol.u).unwrap();
        assert!(!mesh.faces.is_empty());
        for face in &mesh.faces {
            assert!(mesh.face_area_vector(face).z > 0.0, "faces must face up");
        }
        for n in &mesh.normals {
            assert!(n.z > 0.0);
        }
    }
}
