//! Acceptance suite: eleven end-to-end checks, each measuring one headline
//! property of the toolkit against a pinned tolerance. The CLI `check`
//! subcommand and the acceptance integration test both call [`run_all`] and
//! render the same [`CheckResult`] records, so tolerances live here and
//! nowhere else.

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    brute_force_margin, hemisphere_classifier, meeks_constant, slice_components_diameter,
};
use crate::anisotropy::{tangent_basis, Anisotropy};
use crate::curvature::{
    aniso_shape_operator, first_variation_check, functional_f0, Chart, EllipsoidChart,
    GraphChart, ScaledChart, SphereChart,
};
use crate::error::Result;
use crate::graphpde::{assemble_coefficients, solve_dirichlet, GraphProblem, Mask};
use crate::icosphere::icosphere;
use crate::wulff::{
    brute_force_diameter, build_cylinder, build_wulff_mesh, profile_curve, wulff_curvature_range,
    wulff_diameter, CylinderChart, WulffChart,
};

/// Max |A + Id| entry and |H + 2| on exact charts (checks 1, 3, 4).
pub const TOL_CHART: f64 = 1e-8;
/// Wulff vertex norm deviation for F = 1 (check 1).
pub const TOL_VERTEX_NORM: f64 = 1e-12;
/// Relative tolerance on Wulff diameters (check 2).
pub const TOL_DIAMETER_REL: f64 = 1e-3;
/// Gauss-image alignment |<N, v0>| on cylinders (check 3).
pub const TOL_GAUSS_IMAGE: f64 = 1e-10;
/// Homothety law |c H(c Sigma) - H(Sigma)| (check 4).
pub const TOL_HOMOTHETY: f64 = 1e-10;
/// Max solution error of the 129^2 sphere-cap solve (check 5).
pub const TOL_PDE_MAX_ERR: f64 = 1e-3;
/// Observed convergence order across grid doublings (check 5).
pub const MIN_ORDER: f64 = 1.8;
/// Newton iteration budget from the default guess (check 5).
pub const MAX_NEWTON_ITERS: usize = 20;
/// Coefficient equivalence between assembly routes (check 6).
pub const TOL_COEFF: f64 = 1e-10;
/// Exact F = 1 coefficient reduction, round-off only (check 6).
pub const TOL_COEFF_EXACT: f64 = 1e-14;
/// First variation of F0 at the Wulff mesh, relative to the area term
/// (check 7).
pub const TOL_CRITICALITY_REL: f64 = 1e-3;
/// Slack on the pointwise norm-equivalence inequalities (check 8).
pub const SLACK_NORM_EQUIV: f64 = 1e-9;
/// Margin size for the hemisphere boundary case (check 9).
pub const TOL_CYLINDER_MARGIN: f64 = 1e-9;
/// Classifier vs brute-force margin agreement (check 9).
pub const TOL_BRUTE_AGREE: f64 = 1e-6;
/// Slab-constant identity d0 = 2 sqrt(3) d_W / |H0| (check 10).
pub const TOL_D0: f64 = 1e-12;
/// Allowed excess of slice diameters over d_W (check 10).
pub const SLICE_SLACK: f64 = 2e-2;
/// Required spread of the interior-normal H on the ellipsoid Wulff shape
/// (check 11).
pub const MIN_H_SPREAD: f64 = 0.1;

/// One acceptance check: pass/fail plus the binding measurement. `measured`
/// compares against `threshold` in the direction stated by `detail`;
/// `passed` is authoritative and folds in every subcheck.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

/// The three builtin anisotropies exercised by every multi-F check.
pub fn builtin_catalog() -> Vec<(&'static str, Anisotropy)> {
    vec![
        ("constant", Anisotropy::constant()),
        (
            "ellipsoid",
            Anisotropy::ellipsoid_from_coeffs([4.0, 1.0, 1.0, 0.0, 0.0, 0.0])
                .expect("diag(4,1,1) is positive definite"),
        ),
        (
            "perturbed",
            Anisotropy::perturbed(0.3, Vector3::new(1.0, 0.5, 0.3))
                .expect("amplitude 0.3 is admissible"),
        ),
    ]
}

/// Seeded interior chart points for polar-type charts: u away from the
/// poles, v a full turn.
fn polar_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            (
                rng.gen_range(0.1..std::f64::consts::PI - 0.1),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect()
}

/// 1. Round reduction: the F = 1 Wulff mesh is the unit sphere to 1e-12 and
///    the exact chart carries A = -Id, H = -2 to 1e-8 at 500 points.
pub fn check_round_reduction() -> CheckResult {
    let f = Anisotropy::constant();
    let mesh = build_wulff_mesh(&f, 4);
    let norm_dev = mesh
        .vertices
        .iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let chart = WulffChart {
        f,
        exterior: true,
    };
    let mut chart_dev = 0.0f64;
    for (u, v) in polar_points(500, 11) {
        let s = aniso_shape_operator(&chart.f, &chart, u, v).expect("sphere chart is immersed");
        let a_plus_id = s.a + nalgebra::Matrix2::identity();
        chart_dev = chart_dev.max(a_plus_id.abs().max()).max((s.h + 2.0).abs());
    }
    CheckResult {
        id: 1,
        name: "round-reduction",
        passed: norm_dev <= TOL_VERTEX_NORM && chart_dev <= TOL_CHART,
        measured: chart_dev,
        threshold: TOL_CHART,
        detail: format!(
            "max |A + Id|, |H + 2| = {chart_dev:.2e} (<= {TOL_CHART:.0e}); \
             vertex norm deviation {norm_dev:.2e} (<= {TOL_VERTEX_NORM:.0e})"
        ),
    }
}

/// 2. Ellipsoid Wulff shape: vertices satisfy the surface equation to 1e-8;
///    support-width diameter hits 4 and agrees with brute-force pairwise
///    distances, both within 1e-3 relative.
pub fn check_ellipsoid_wulff() -> CheckResult {
    let f = Anisotropy::ellipsoid_from_coeffs([4.0, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
    let mesh = build_wulff_mesh(&f, 5);
    let surface_dev = mesh
        .vertices
        .iter()
        .map(|p| (p.x * p.x / 4.0 + p.y * p.y + p.z * p.z - 1.0).abs())
        .fold(0.0, f64::max);
    let width = wulff_diameter(&f, 5);
    let brute = brute_force_diameter(&mesh.vertices);
    let exact_rel = (width - 4.0).abs() / 4.0;
    let agree_rel = (width - brute).abs() / width;
    let measured = exact_rel.max(agree_rel);
    CheckResult {
        id: 2,
        name: "ellipsoid-wulff",
        passed: surface_dev <= 1e-8 && measured <= TOL_DIAMETER_REL,
        measured,
        threshold: TOL_DIAMETER_REL,
        detail: format!(
            "|d_w - 4|/4 = {exact_rel:.2e}, width-vs-brute rel = {agree_rel:.2e} \
             (<= {TOL_DIAMETER_REL:.0e}); surface equation dev {surface_dev:.2e} (<= 1e-8)"
        ),
    }
}

/// 3. CAMC cylinders: chart H = -1 to 1e-8 at 200 points for every builtin
///    anisotropy, and the Gauss image stays in the great circle v0-perp to
///    1e-10.
pub fn check_cylinder_camc() -> CheckResult {
    let v0 = Vector3::new(0.0, 0.0, 1.0);
    let mut h_dev = 0.0f64;
    let mut gauss_dev = 0.0f64;
    for (_, f) in builtin_catalog() {
        let patch = build_cylinder(&f, &v0, 64, 4, 2.0).expect("cylinder fixture builds");
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let lambda = rng.gen_range(-1.0..1.0);
            let s = aniso_shape_operator(&f, &patch.chart, theta, lambda)
                .expect("cylinder chart is immersed");
            h_dev = h_dev.max((s.h + 1.0).abs());
            gauss_dev = gauss_dev.max(s.normal.dot(&v0).abs());
        }
    }
    CheckResult {
        id: 3,
        name: "cylinder-camc",
        passed: h_dev <= TOL_CHART && gauss_dev <= TOL_GAUSS_IMAGE,
        measured: h_dev,
        threshold: TOL_CHART,
        detail: format!(
            "max |H + 1| = {h_dev:.2e} (<= {TOL_CHART:.0e}); \
             max |<N, v0>| = {gauss_dev:.2e} (<= {TOL_GAUSS_IMAGE:.0e})"
        ),
    }
}

/// 4. Homothety law c H(c Sigma) = H(Sigma) to 1e-10 on Wulff and cylinder
///    charts for c in {1/2, 2, 5}; the antipodal Wulff shape with interior
///    normal carries H = +2 to 1e-8.
pub fn check_homothety() -> CheckResult {
    let mut law_dev = 0.0f64;
    let mut antipodal_dev = 0.0f64;
    for (_, f) in builtin_catalog() {
        let wulff = WulffChart {
            f: f.clone(),
            exterior: true,
        };
        let cyl = CylinderChart::new(f.clone(), &Vector3::new(0.0, 0.0, 1.0))
            .expect("axis is nonzero");
        let charts: [&dyn Chart; 2] = [&wulff, &cyl];
        for chart in charts {
            for (u, v) in polar_points(50, 31) {
                let base = aniso_shape_operator(&f, chart, u, v).expect("chart is immersed");
                for c in [0.5, 2.0, 5.0] {
                    let scaled = ScaledChart::new(chart, c).expect("nonzero ratio");
                    let s = aniso_shape_operator(&f, &scaled, u, v).expect("scaled chart");
                    law_dev = law_dev.max((c * s.h - base.h).abs());
                }
            }
        }
        let antipodal = ScaledChart::new(&wulff, -1.0).expect("nonzero ratio");
        for (u, v) in polar_points(200, 37) {
            let s = aniso_shape_operator(&f, &antipodal, u, v).expect("antipodal chart");
            antipodal_dev = antipodal_dev.max((s.h - 2.0).abs());
        }
    }
    CheckResult {
        id: 4,
        name: "homothety-law",
        passed: law_dev <= TOL_HOMOTHETY && antipodal_dev <= TOL_CHART,
        measured: law_dev,
        threshold: TOL_HOMOTHETY,
        detail: format!(
            "max |c H(c S) - H(S)| = {law_dev:.2e} (<= {TOL_HOMOTHETY:.0e}); \
             antipodal |H - 2| = {antipodal_dev:.2e} (<= {TOL_CHART:.0e})"
        ),
    }
}

struct PdeRun {
    grid: usize,
    error: f64,
    iterations: usize,
}

fn cap_runs(
    f: &Anisotropy,
    exact: impl Fn(f64, f64) -> f64 + Copy,
    grids: &[usize],
) -> Result<Vec<PdeRun>> {
    let mut runs = Vec::new();
    for &n in grids {
        let problem = GraphProblem::new(
            f.clone(),
            -2.0,
            [-0.5, 0.5, -0.5, 0.5],
            n,
            n,
            Mask::Disk {
                center: (0.0, 0.0),
                radius: 0.5,
            },
            exact,
        )?;
        let sol = solve_dirichlet(&problem, None)?;
        let mut error = 0.0f64;
        for (ix, iy) in problem.interior_nodes() {
            let (x, y) = problem.node_xy(ix, iy);
            error = error.max((sol.u[problem.idx(ix, iy)] - exact(x, y)).abs());
        }
        runs.push(PdeRun {
            grid: n,
            error,
            iterations: sol.newton_iterations,
        });
    }
    Ok(runs)
}

fn orders(runs: &[PdeRun]) -> Vec<f64> {
    runs.windows(2)
        .map(|w| (w[0].error / w[1].error).log2())
        .collect()
}

/// 5. PDE recovery: the solver reproduces the exact sphere cap to 1e-3 at
///    129^2 with observed order >= 1.8 across 33/65/129, the same orders for
///    the ellipsoid Wulff cap, and Newton needs at most 20 iterations from the
///    default guess.
pub fn check_pde_recovery() -> CheckResult {
    let grids = [33usize, 65, 129];
    let sphere = cap_runs(
        &Anisotropy::constant(),
        |x, y| (1.0 - x * x - y * y).max(0.0).sqrt(),
        &grids,
    );
    let ellip = cap_runs(
        &Anisotropy::ellipsoid_from_coeffs([4.0, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap(),
        |x, y| (1.0 - x * x / 4.0 - y * y).max(0.0).sqrt(),
        &grids,
    );
    let (sphere, ellip) = match (sphere, ellip) {
        (Ok(s), Ok(e)) => (s, e),
        (s, e) => {
            let reason = s.err().or(e.err()).expect("one side failed");
            return CheckResult {
                id: 5,
                name: "pde-recovery",
                passed: false,
                measured: f64::INFINITY,
                threshold: TOL_PDE_MAX_ERR,
                detail: format!("solver failed: {reason}"),
            };
        }
    };
    let fine_err = sphere.last().expect("three grids").error;
    let max_iters = sphere
        .iter()
        .chain(&ellip)
        .map(|r| r.iterations)
        .max()
        .expect("runs are nonempty");
    let min_order = orders(&sphere)
        .into_iter()
        .chain(orders(&ellip))
        .fold(f64::INFINITY, f64::min);
    let fmt = |runs: &[PdeRun]| {
        runs.iter()
            .map(|r| format!("{}:{:.2e}", r.grid, r.error))
            .collect::<Vec<_>>()
            .join(" ")
    };
    CheckResult {
        id: 5,
        name: "pde-recovery",
        passed: fine_err <= TOL_PDE_MAX_ERR
            && min_order >= MIN_ORDER
            && max_iters <= MAX_NEWTON_ITERS,
        measured: fine_err,
        threshold: TOL_PDE_MAX_ERR,
        detail: format!(
            "sphere cap errors [{}], wulff cap errors [{}]; min order {min_order:.2} \
             (>= {MIN_ORDER}); max Newton iterations {max_iters} (<= {MAX_NEWTON_ITERS})",
            fmt(&sphere),
            fmt(&ellip)
        ),
    }
}

/// H through the chart machinery for the quadratic graph with gradient
/// (p, q) and Hessian (uxx, uxy, uyy) at the origin: the independent route
/// the coefficient assembly must match.
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
    aniso_shape_operator(f, &chart, 0.0, 0.0)
        .expect("quadratic graph is immersed")
        .h
}

/// 6. Coefficient equivalence: a uxx + b uxy + c uyy matches the chart-route
///    H at 100 random states to 1e-10, and the F = 1 coefficients reduce to
///    ((1+q^2), -2pq, (1+p^2))/W^3 to round-off.
pub fn check_coefficient_equivalence() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let catalog = builtin_catalog();
    let mut route_dev = 0.0f64;
    for i in 0..100 {
        let (_, f) = &catalog[i % catalog.len()];
        let p = rng.gen_range(-1.5..1.5);
        let q = rng.gen_range(-1.5..1.5);
        let uxx = rng.gen_range(-2.0..2.0);
        let uxy = rng.gen_range(-2.0..2.0);
        let uyy = rng.gen_range(-2.0..2.0);
        let (a, b, c) = assemble_coefficients(f, p, q).expect("builtins are elliptic");
        let h_coeff = a * uxx + b * uxy + c * uyy;
        let h_chart = chart_route_h(f, p, q, uxx, uxy, uyy);
        route_dev = route_dev.max((h_coeff - h_chart).abs() / (1.0 + h_chart.abs()));
    }
    let mut exact_dev = 0.0f64;
    let constant = Anisotropy::constant();
    for _ in 0..100 {
        let p: f64 = rng.gen_range(-2.0..2.0);
        let q: f64 = rng.gen_range(-2.0..2.0);
        let w3 = (1.0 + p * p + q * q).powf(1.5);
        let (a, b, c) = assemble_coefficients(&constant, p, q).unwrap();
        exact_dev = exact_dev
            .max((a - (1.0 + q * q) / w3).abs())
            .max((b + 2.0 * p * q / w3).abs())
            .max((c - (1.0 + p * p) / w3).abs());
    }
    CheckResult {
        id: 6,
        name: "coefficient-equivalence",
        passed: route_dev <= TOL_COEFF && exact_dev <= TOL_COEFF_EXACT,
        measured: route_dev,
        threshold: TOL_COEFF,
        detail: format!(
            "max route deviation {route_dev:.2e} (<= {TOL_COEFF:.0e}); \
             F = 1 reduction deviation {exact_dev:.2e} (<= {TOL_COEFF_EXACT:.0e})"
        ),
    }
}

/// 7. Criticality of the Wulff shape: the numeric first variation of F0
///    (H0 = -2) at the level-5 Wulff mesh under 5 random smooth normal
///    perturbations stays below 1e-3 of the area term, for every builtin
///    anisotropy.
pub fn check_wulff_criticality() -> CheckResult {
    let mut rel = 0.0f64;
    let mut detail_parts = Vec::new();
    for (name, f) in builtin_catalog() {
        let mesh = build_wulff_mesh(&f, 5);
        let area_term = functional_f0(&f, &mesh, -2.0)
            .expect("wulff mesh is closed")
            .area_term;
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let mut f_rel = 0.0f64;
        for _ in 0..5 {
            // Smooth random field: a linear plus quadratic form in the
            // source normal, so the perturbation resolves on the mesh.
            let a = Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let b = Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
            let phi: Vec<f64> = mesh
                .normals
                .iter()
                .map(|n| a.dot(n) + (b * n).dot(n))
                .collect();
            let check = first_variation_check(&f, &mesh, &phi, -2.0)
                .expect("wulff mesh is closed");
            f_rel = f_rel.max(check.numeric.abs() / area_term.abs());
        }
        detail_parts.push(format!("{name} {f_rel:.2e}"));
        rel = rel.max(f_rel);
    }
    CheckResult {
        id: 7,
        name: "wulff-criticality",
        passed: rel <= TOL_CRITICALITY_REL,
        measured: rel,
        threshold: TOL_CRITICALITY_REL,
        detail: format!(
            "max |dF0/dt| / |area term| per anisotropy: {} (<= {TOL_CRITICALITY_REL:.0e})",
            detail_parts.join(", ")
        ),
    }
}

/// Frobenius norms of S and A in an orthonormal tangent frame. Eigenvalue
/// extraction from the nonsymmetric chart-basis matrices loses sqrt(eps)
/// accuracy at umbilic points, so the comparison uses entrywise-stable
/// norms instead: the chart-basis matrices are conjugated by the Cholesky
/// transpose of the metric, which is the change to orthonormal coordinates.
fn ortho_frobenius(
    f: &Anisotropy,
    chart: &dyn Chart,
    u: f64,
    v: f64,
) -> (f64, f64) {
    let sample = aniso_shape_operator(f, chart, u, v).expect("catalog charts are immersed");
    let jet = chart.jet(u, v);
    let g11 = jet.xu.dot(&jet.xu);
    let g12 = jet.xu.dot(&jet.xv);
    let g22 = jet.xv.dot(&jet.xv);
    let l11 = g11.sqrt();
    let l21 = g12 / l11;
    let l22 = (g22 - l21 * l21).sqrt();
    let c = nalgebra::Matrix2::new(l11, l21, 0.0, l22);
    let cinv = nalgebra::Matrix2::new(1.0 / l11, -l21 / (l11 * l22), 0.0, 1.0 / l22);
    ((c * sample.s * cinv).norm(), (c * sample.a * cinv).norm())
}

/// 8. Norm equivalence: with (m, M) the Wulff principal-curvature range,
///    the orthonormal-frame Frobenius norms obey |A| <= |S|/m and
///    |S| <= M |A| at 10^4 random chart samples, with at most 1e-9 slack.
///    In that frame A = P S with P symmetric and the eigenvalues of P
///    inside [1/M, 1/m], so both inequalities are exact statements.
pub fn check_norm_equivalence() -> CheckResult {
    let catalog = builtin_catalog();
    // Level 6: the sampled eigenvalue extremes converge as h^2 and must pin
    // the global range more tightly than the 1e-9 slack.
    let ranges: Vec<(f64, f64)> = catalog
        .iter()
        .map(|(_, f)| wulff_curvature_range(f, 6).expect("builtins are elliptic"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut worst_excess = f64::NEG_INFINITY;
    for i in 0..10_000 {
        let which = i % catalog.len();
        let (_, f) = &catalog[which];
        let (m, big_m) = ranges[which];
        let ellipsoid = EllipsoidChart {
            semi_axes: Vector3::new(1.5, 1.0, 0.75),
        };
        let wulff = WulffChart {
            f: f.clone(),
            exterior: true,
        };
        let cyl = CylinderChart::new(f.clone(), &Vector3::new(0.0, 0.0, 1.0)).unwrap();
        let (c3, c4, c5) = (
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let graph = GraphChart {
            g: move |x: f64, y: f64| {
                [
                    0.5 * (c3 * x * x + 2.0 * c4 * x * y + c5 * y * y),
                    c3 * x + c4 * y,
                    c4 * x + c5 * y,
                    c3,
                    c4,
                    c5,
                ]
            },
        };
        let charts: [&dyn Chart; 5] = [&SphereChart, &ellipsoid, &wulff, &cyl, &graph];
        let chart = charts[(i / catalog.len()) % charts.len()];
        let (u, v) = (
            rng.gen_range(0.15..std::f64::consts::PI - 0.15),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let (ns, na) = ortho_frobenius(f, chart, u, v);
        worst_excess = worst_excess.max(na - ns / m).max(ns - big_m * na);
    }
    CheckResult {
        id: 8,
        name: "norm-equivalence",
        passed: worst_excess <= SLACK_NORM_EQUIV,
        measured: worst_excess,
        threshold: SLACK_NORM_EQUIV,
        detail: format!(
            "worst excess over |A| <= |S|/m, |S| <= M |A| at 10^4 samples: \
             {worst_excess:.2e} (<= {SLACK_NORM_EQUIV:.0e})"
        ),
    }
}

/// Seeded unit normals inside the spherical cap of angular radius `cap`
/// around `center`.
fn cap_sample(
    rng: &mut ChaCha8Rng,
    center: &Vector3<f64>,
    cap: f64,
    count: usize,
) -> Vec<Vector3<f64>> {
    let (e1, e2) = tangent_basis(center);
    (0..count)
        .map(|_| {
            let z = rng.gen_range(cap.cos()..1.0);
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (1.0 - z * z).sqrt();
            z * center + r * (phi.cos() * e1 + phi.sin() * e2)
        })
        .collect()
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
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

/// 9. Hemisphere classifier: margin 1 for a plane, |margin| <= 1e-9 for a
///    cylinder's Gauss circle, infeasible for the sphere, feasible with
///    positive margin on 1000 random open-hemisphere instances, and within
///    1e-6 of the brute-force maximin.
pub fn check_hemisphere_classifier() -> CheckResult {
    let e3 = Vector3::new(0.0, 0.0, 1.0);
    let plane = hemisphere_classifier(&[e3, e3, e3]).expect("nonempty");
    let plane_ok = plane.feasible && (plane.margin - 1.0).abs() <= 1e-12;

    let f = Anisotropy::ellipsoid_from_coeffs([4.0, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
    let profile = profile_curve(&f, &e3, 64).expect("profile builds");
    let cyl = hemisphere_classifier(&profile.normals).expect("nonempty");
    let cyl_ok = cyl.feasible && cyl.margin.abs() <= TOL_CYLINDER_MARGIN;

    let sphere = hemisphere_classifier(&icosphere(3).vertices).expect("nonempty");
    let sphere_ok = !sphere.feasible && sphere.margin < 0.0;

    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut open_ok = true;
    for _ in 0..1000 {
        let center = random_unit(&mut rng);
        let cap = rng.gen_range(0.1..1.4);
        let count = rng.gen_range(1..=40);
        let normals = cap_sample(&mut rng, &center, cap, count);
        let verdict = hemisphere_classifier(&normals).expect("nonempty");
        if !(verdict.feasible && verdict.margin > 0.0) {
            open_ok = false;
            break;
        }
    }

    let mut brute_dev = 0.0f64;
    let mut brute_ok = true;
    let mut instances: Vec<Vec<Vector3<f64>>> = vec![
        profile.normals.clone(),
        icosphere(2).vertices.clone(),
    ];
    for (cap, count) in [(1.2, 200), (0.4, 50), (1.4, 30)] {
        let center = random_unit(&mut rng);
        instances.push(cap_sample(&mut rng, &center, cap, count));
    }
    // Two antipodal clusters: infeasible, with a kinked maximin.
    let center = random_unit(&mut rng);
    let mut both = cap_sample(&mut rng, &center, 0.3, 25);
    both.extend(cap_sample(&mut rng, &(-center), 0.3, 25));
    instances.push(both);
    for (k, normals) in instances.iter().enumerate() {
        let verdict = hemisphere_classifier(normals).expect("nonempty");
        let (_, brute) = brute_force_margin(normals, 1000 + k as u64);
        brute_dev = brute_dev.max((verdict.margin - brute).abs());
        // The enumeration is exact, so the sampled search can never beat it
        // beyond round-off.
        brute_ok &= verdict.margin >= brute - 1e-12;
    }

    CheckResult {
        id: 9,
        name: "hemisphere-classifier",
        passed: plane_ok && cyl_ok && sphere_ok && open_ok && brute_ok
            && brute_dev <= TOL_BRUTE_AGREE,
        measured: brute_dev,
        threshold: TOL_BRUTE_AGREE,
        detail: format!(
            "brute-force agreement {brute_dev:.2e} (<= {TOL_BRUTE_AGREE:.0e}); plane margin \
             {:.3}, cylinder margin {:.1e}, sphere margin {:.3}, 1000 open instances {}",
            plane.margin,
            cyl.margin,
            sphere.margin,
            if open_ok { "all feasible" } else { "FAILED" }
        ),
    }
}

/// 10. Slab constants: d0 = 2 sqrt(3) d_W / |H0| to 1e-12 across 10
///     (F, H0) combinations, and Wulff slice diameters never exceed d_W + 2e-2.
pub fn check_constants() -> CheckResult {
    let catalog = builtin_catalog();
    let combos: Vec<(usize, f64)> = vec![
        (0, -2.0),
        (0, -1.0),
        (0, 0.5),
        (0, -3.0),
        (1, -2.0),
        (1, 3.0),
        (1, -0.5),
        (2, -2.0),
        (2, -0.7),
        (2, 2.5),
    ];
    let mut d0_dev = 0.0f64;
    for (which, h0) in combos {
        let (_, f) = &catalog[which];
        let report = meeks_constant(f, h0, 4).expect("H0 is nonzero");
        let expected = 2.0 * 3.0f64.sqrt() * wulff_diameter(f, 4) / h0.abs();
        d0_dev = d0_dev.max((report.d0 - expected).abs() / expected.max(1.0));
    }

    let mut slice_excess = f64::NEG_INFINITY;
    for (_, f) in &catalog {
        let mesh = build_wulff_mesh(f, 4);
        let d_w = wulff_diameter(f, 5);
        for axis in [Vector3::x(), Vector3::y(), Vector3::z()] {
            let extent: Vec<f64> = mesh.vertices.iter().map(|p| p.dot(&axis)).collect();
            let (lo, hi) = extent
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| {
                    (a.min(t), b.max(t))
                });
            let offsets: Vec<f64> = (0..5)
                .map(|k| lo + (hi - lo) * (0.1 + 0.2 * k as f64))
                .collect();
            let reports =
                slice_components_diameter(&mesh, &axis, &offsets).expect("axis is nonzero");
            for report in reports {
                for diam in report.components {
                    slice_excess = slice_excess.max(diam - d_w);
                }
            }
        }
    }

    CheckResult {
        id: 10,
        name: "slab-constants",
        passed: d0_dev <= TOL_D0 && slice_excess <= SLICE_SLACK,
        measured: slice_excess,
        threshold: SLICE_SLACK,
        detail: format!(
            "max slice diameter excess over d_w: {slice_excess:.2e} (<= {SLICE_SLACK:.0e}); \
             d0 identity deviation {d0_dev:.2e} (<= {TOL_D0:.0e}) over 10 combinations"
        ),
    }
}

/// 11. Spread of the interior-normal H on the ellipsoid Wulff shape. Every
///     builtin anisotropy is even (F(-n) = F(n)), which forces the
///     interior-normal anisotropic mean curvature to equal +2 identically on
///     its Wulff shape, so the sampled spread is round-off and this check
///     records the measured near-zero value; a spread above 0.1 needs an
///     anisotropy without antipodal symmetry, which the closed builtin catalog
///     does not contain.
pub fn check_interior_h_spread() -> CheckResult {
    let f = Anisotropy::ellipsoid_from_coeffs([4.0, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
    let chart = WulffChart { f, exterior: false };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (u, v) in polar_points(500, 83) {
        let s = aniso_shape_operator(&chart.f, &chart, u, v).expect("wulff chart is immersed");
        lo = lo.min(s.h);
        hi = hi.max(s.h);
    }
    let spread = hi - lo;
    CheckResult {
        id: 11,
        name: "interior-h-spread",
        passed: spread > MIN_H_SPREAD,
        measured: spread,
        threshold: MIN_H_SPREAD,
        detail: format!(
            "sampled max - min of interior-normal H = {spread:.2e} (required > {MIN_H_SPREAD}); \
             H is identically +2 for even anisotropies, and all builtins are even"
        ),
    }
}

/// Run the whole acceptance suite in order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check_round_reduction(),
        check_ellipsoid_wulff(),
        check_cylinder_camc(),
        check_homothety(),
        check_pde_recovery(),
        check_coefficient_equivalence(),
        check_wulff_criticality(),
        check_norm_equivalence(),
        check_hemisphere_classifier(),
        check_constants(),
        check_interior_h_spread(),
    ]
}
