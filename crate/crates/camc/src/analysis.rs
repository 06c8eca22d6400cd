//! Diagnostics on computed surfaces: classification of Gauss images by the
//! smallest-margin hemisphere, the slab-width constant d0 built from the
//! Wulff diameter, plane-slice component diameters, and height reports.

use std::collections::HashMap;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anisotropy::{unit_checked, Anisotropy};
use crate::error::{CamcError, Result};
use crate::mesh::TriMesh;
use crate::wulff::wulff_diameter;

/// Outcome of the hemisphere feasibility problem for a set of unit normals:
/// margin = max over unit v of min_i <n_i, v>; the set fits in a closed
/// hemisphere exactly when the margin is nonnegative.
#[derive(Clone, Debug, serde::Serialize)]
pub struct HemisphereVerdict {
    pub feasible: bool,
    pub witness: Option<[f64; 3]>,
    pub margin: f64,
}

/// Direction set bucketed by latitude band and azimuth so a minimum-dot
/// scan can probe the query's antipodal neighborhood first: the most
/// negative dot always comes from there, which lets the floor-based early
/// exit fire after a handful of products instead of a full pass.
struct DirectionScanner<'a> {
    normals: &'a [Vector3<f64>],
    buckets: Vec<Vec<u32>>,
}

const SCAN_ZBANDS: usize = 16;
const SCAN_AZIMUTHS: usize = 32;

impl<'a> DirectionScanner<'a> {
    fn bucket_of(v: &Vector3<f64>) -> usize {
        let iz = (((v.z + 1.0) / 2.0 * SCAN_ZBANDS as f64) as usize).min(SCAN_ZBANDS - 1);
        let angle = v.y.atan2(v.x) + std::f64::consts::PI;
        let ia = ((angle / std::f64::consts::TAU * SCAN_AZIMUTHS as f64) as usize)
            .min(SCAN_AZIMUTHS - 1);
        iz * SCAN_AZIMUTHS + ia
    }

    fn new(normals: &'a [Vector3<f64>]) -> Self {
        let mut buckets = vec![Vec::new(); SCAN_ZBANDS * SCAN_AZIMUTHS];
        for (i, n) in normals.iter().enumerate() {
            buckets[Self::bucket_of(n)].push(i as u32);
        }
        DirectionScanner { normals, buckets }
    }

    /// min_i <n_i, v>, or any value < floor as an early verdict that the
    /// candidate cannot beat the floor. The probe order is a heuristic
    /// only; the trailing full pass keeps the result exact.
    fn floored_min(&self, v: &Vector3<f64>, floor: f64) -> f64 {
        let mut low = f64::INFINITY;
        let anti = -v;
        let iz = (((anti.z + 1.0) / 2.0 * SCAN_ZBANDS as f64) as isize)
            .clamp(0, SCAN_ZBANDS as isize - 1);
        let angle = anti.y.atan2(anti.x) + std::f64::consts::PI;
        let ia = ((angle / std::f64::consts::TAU * SCAN_AZIMUTHS as f64) as isize)
            .min(SCAN_AZIMUTHS as isize - 1);
        for dz in -1..=1isize {
            let z = iz + dz;
            if !(0..SCAN_ZBANDS as isize).contains(&z) {
                continue;
            }
            for da in -1..=1isize {
                let a = (ia + da).rem_euclid(SCAN_AZIMUTHS as isize);
                for &i in &self.buckets[z as usize * SCAN_AZIMUTHS + a as usize] {
                    let d = self.normals[i as usize].dot(v);
                    if d < floor {
                        return d;
                    }
                    low = low.min(d);
                }
            }
        }
        for n in self.normals {
            let d = n.dot(v);
            if d < floor {
                return d;
            }
            low = low.min(d);
        }
        low
    }
}

/// Exact maximin by candidate enumeration. The optimum is attained where
/// one, two, or three constraints are active: at +/- a normal, a normalized
/// pair sum, or a normalized pair-difference cross product; every candidate
/// is scanned with a floor-based early exit, and triples are pre-pruned by
/// their own active value.
pub fn hemisphere_classifier(normals: &[Vector3<f64>]) -> Result<HemisphereVerdict> {
    if normals.is_empty() {
        return Err(CamcError::EmptyInput { what: "normal set" });
    }
    let ns: Vec<Vector3<f64>> = normals
        .iter()
        .map(unit_checked)
        .collect::<Result<Vec<_>>>()?;
    let scanner = DirectionScanner::new(&ns);
    let mut best_margin = f64::NEG_INFINITY;
    let mut best_v = ns[0];
    let consider = |v: &Vector3<f64>, best_margin: &mut f64, best_v: &mut Vector3<f64>| {
        let low = scanner.floored_min(v, *best_margin);
        if low > *best_margin {
            *best_margin = low;
            *best_v = *v;
        }
    };
    for n in &ns {
        consider(n, &mut best_margin, &mut best_v);
        consider(&-n, &mut best_margin, &mut best_v);
    }
    for i in 0..ns.len() {
        for j in (i + 1)..ns.len() {
            let sum = ns[i] + ns[j];
            let len = sum.norm();
            if len <= 1e-12 {
                continue;
            }
            let v = sum / len;
            consider(&v, &mut best_margin, &mut best_v);
            consider(&-v, &mut best_margin, &mut best_v);
        }
    }
    for i in 0..ns.len() {
        for j in (i + 1)..ns.len() {
            let dij = ns[i] - ns[j];
            for k in (j + 1)..ns.len() {
                let cross = dij.cross(&(ns[i] - ns[k]));
                let len = cross.norm();
                if len <= 1e-12 {
                    continue;
                }
                let v = cross / len;
                // The candidate's value on its own active triple; a full
                // scan can only lower it.
                let t = ns[i].dot(&v);
                if t > best_margin {
                    consider(&v, &mut best_margin, &mut best_v);
                }
                if -t > best_margin {
                    consider(&-v, &mut best_margin, &mut best_v);
                }
            }
        }
    }
    Ok(HemisphereVerdict {
        feasible: best_margin >= 0.0,
        witness: if best_margin >= 0.0 {
            Some([best_v.x, best_v.y, best_v.z])
        } else {
            None
        },
        margin: best_margin,
    })
}

/// Witness direction of a verdict as a vector, when present.
pub fn verdict_witness(v: &HemisphereVerdict) -> Option<Vector3<f64>> {
    v.witness.map(|w| Vector3::new(w[0], w[1], w[2]))
}

/// Brute-force maximin oracle: seeded uniform sampling followed by zoomed
/// Gaussian refinement around the incumbent. Resolves the margin to well
/// below 1e-6 even at non-smooth maxima.
pub fn brute_force_margin(normals: &[Vector3<f64>], seed: u64) -> (Vector3<f64>, f64) {
    assert!(!normals.is_empty(), "normal set must be nonempty");
    let scanner = DirectionScanner::new(normals);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss3 = |rng: &mut ChaCha8Rng| {
        // Box-Muller pairs; the third deviate reuses a fresh pair.
        let pair = |rng: &mut ChaCha8Rng| {
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            ((-2.0 * u1.ln()).sqrt() * u2.cos(), (-2.0 * u1.ln()).sqrt() * u2.sin())
        };
        let (a, b) = pair(rng);
        let (c, _) = pair(rng);
        Vector3::new(a, b, c)
    };
    let mut best_v = Vector3::new(0.0, 0.0, 1.0);
    let mut best = scanner.floored_min(&best_v, f64::NEG_INFINITY);
    for _ in 0..200_000 {
        let v = gauss3(&mut rng).normalize();
        let m = scanner.floored_min(&v, best);
        if m > best {
            best = m;
            best_v = v;
        }
    }
    for sigma in [0.3, 0.03, 3e-3, 3e-4, 3e-5, 3e-6] {
        for _ in 0..40_000 {
            let v = (best_v + sigma * gauss3(&mut rng)).normalize();
            let m = scanner.floored_min(&v, best);
            if m > best {
                best = m;
                best_v = v;
            }
        }
    }
    (best_v, best)
}

/// Per-offset slice summary: component diameters in descending order. The
/// used offset differs from the requested one when a vertex sat on the
/// plane and the slice had to be nudged.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SliceReport {
    pub offset_requested: f64,
    pub offset_used: f64,
    pub components: Vec<f64>,
}

/// Slab-width constants of an anisotropy at a target curvature, plus
/// optional height/slice context filled by the reporting pipeline.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BoundsReport {
    pub d_w: f64,
    pub h0: f64,
    /// 2 sqrt(3) d_W / |H0|.
    pub d0: f64,
    /// The same constant without the curvature normalization.
    pub d0_lemma: f64,
    pub max_height: Option<f64>,
    pub slice_diameters: Vec<SliceReport>,
}

/// d0 = 2 sqrt(3) d_W / |H0| with d_W measured at the given subdivision
/// level.
pub fn meeks_constant(f: &Anisotropy, h0: f64, level: u32) -> Result<BoundsReport> {
    if h0 == 0.0 {
        return Err(CamcError::ZeroH0);
    }
    let d_w = wulff_diameter(f, level);
    let scale = 2.0 * 3.0f64.sqrt() * d_w;
    Ok(BoundsReport {
        d_w,
        h0,
        d0: scale / h0.abs(),
        d0_lemma: scale,
        max_height: None,
        slice_diameters: Vec::new(),
    })
}

/// Cut a mesh by planes <x, normal> = offset and report the extrinsic
/// diameter of every connected intersection component. Non-transverse
/// offsets (a vertex within 1e-12 of the plane) are nudged by 1e-9.
pub fn slice_components_diameter(
    mesh: &TriMesh,
    normal: &Vector3<f64>,
    offsets: &[f64],
) -> Result<Vec<SliceReport>> {
    let len = normal.norm();
    if len == 0.0 {
        return Err(CamcError::ZeroVector {
            what: "slice plane normal",
        });
    }
    if mesh.vertices.is_empty() {
        return Err(CamcError::EmptyInput { what: "mesh" });
    }
    let n = normal / len;
    let heights: Vec<f64> = mesh.vertices.iter().map(|v| v.dot(&n)).collect();
    let mut out = Vec::with_capacity(offsets.len());
    for &requested in offsets {
        let mut d = requested;
        while heights.iter().any(|&z| (z - d).abs() < 1e-12) {
            d += 1e-9;
        }
        // Edge key -> (slot index, point); segments connect two keys.
        let mut slots: HashMap<(u32, u32), usize> = HashMap::new();
        let mut points: Vec<Vector3<f64>> = Vec::new();
        let mut segments: Vec<(usize, usize)> = Vec::new();
        for face in &mesh.faces {
            let mut cut = [0usize; 2];
            let mut found = 0;
            for e in 0..3 {
                let (i, j) = (face[e], face[(e + 1) % 3]);
                let (si, sj) = (heights[i as usize] - d, heights[j as usize] - d);
                if si.signum() == sj.signum() {
                    continue;
                }
                let key = (i.min(j), i.max(j));
                let slot = *slots.entry(key).or_insert_with(|| {
                    let t = si / (si - sj);
                    points.push(
                        mesh.vertices[i as usize]
                            + t * (mesh.vertices[j as usize] - mesh.vertices[i as usize]),
                    );
                    points.len() - 1
                });
                if found < 2 {
                    cut[found] = slot;
                }
                found += 1;
            }
            debug_assert!(found == 0 || found == 2, "transverse plane cuts 0 or 2 edges");
            if found == 2 {
                segments.push((cut[0], cut[1]));
            }
        }
        // Union-find over cut points.
        let mut parent: Vec<usize> = (0..points.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &segments {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for idx in 0..points.len() {
            let root = find(&mut parent, idx);
            groups.entry(root).or_default().push(idx);
        }
        let mut components: Vec<f64> = groups
            .values()
            .map(|members| {
                let mut diam = 0.0f64;
                for (a, &ia) in members.iter().enumerate() {
                    for &ib in &members[a + 1..] {
                        diam = diam.max((points[ia] - points[ib]).norm());
                    }
                }
                diam
            })
            .collect();
        components.sort_by(|a, b| b.partial_cmp(a).expect("diameters are finite"));
        out.push(SliceReport {
            offset_requested: requested,
            offset_used: d,
            components,
        });
    }
    Ok(out)
}

/// Max unsigned distance of a point cloud to the plane <x, normal> = offset.
pub fn graph_height_report(
    points: &[Vector3<f64>],
    normal: &Vector3<f64>,
    offset: f64,
) -> Result<f64> {
    let len = normal.norm();
    if len == 0.0 {
        return Err(CamcError::ZeroVector {
            what: "reference plane normal",
        });
    }
    if points.is_empty() {
        return Err(CamcError::EmptyInput { what: "point set" });
    }
    let n = normal / len;
    Ok(points
        .iter()
        .fold(0.0f64, |m, p| m.max((p.dot(&n) - offset).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anisotropy::tangent_basis;
    use crate::graphpde::{solve_dirichlet, GraphProblem, Mask, NodeLabel};
    use crate::icosphere::icosphere;
    use crate::wulff::{build_cylinder, build_wulff_mesh};
    use approx::assert_relative_eq;
    use nalgebra::Matrix3;

    fn ellipsoid411() -> Anisotropy {
        Anisotropy::ellipsoid(Matrix3::from_diagonal(&Vector3::new(4.0, 1.0, 1.0))).unwrap()
    }

    #[test]
    fn single_normal_has_margin_one() {
        let v = hemisphere_classifier(&[Vector3::new(0.0, 0.0, 1.0)]).unwrap();
        assert!(v.feasible);
        assert_relative_eq!(v.margin, 1.0, epsilon = 1e-15);
        assert_relative_eq!(
            verdict_witness(&v).unwrap(),
            Vector3::new(0.0, 0.0, 1.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn cylinder_normals_sit_on_a_hemisphere_boundary() {
        let normals: Vec<_> = (0..360)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 360.0;
                Vector3::new(t.cos(), t.sin(), 0.0)
            })
            .collect();
        let v = hemisphere_classifier(&normals).unwrap();
        assert!(v.feasible);
        assert!(v.margin.abs() <= 1e-9, "margin = {}", v.margin);
        let w = verdict_witness(&v).unwrap();
        assert!(w.z.abs() > 1.0 - 1e-9, "witness should be the axis: {w}");
    }

    #[test]
    fn full_sphere_is_infeasible() {
        let sphere = icosphere(3);
        assert_eq!(sphere.vertices.len(), 642);
        let v = hemisphere_classifier(&sphere.vertices).unwrap();
        assert!(!v.feasible);
        assert!(v.margin < 0.0);
        assert!(v.witness.is_none());
    }

    /// Deterministic normals inside the open cap of angular radius
    /// `cap` around `center`.
    fn cap_sample(
        rng: &mut ChaCha8Rng,
        center: &Vector3<f64>,
        cap: f64,
        count: usize,
    ) -> Vec<Vector3<f64>> {
        let (t1, t2) = tangent_basis(center);
        (0..count)
            .map(|_| {
                let z = rng.gen_range(cap.cos()..1.0);
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = (1.0 - z * z).sqrt();
                (center * z + t1 * (r * phi.cos()) + t2 * (r * phi.sin())).normalize()
            })
            .collect()
    }

    #[test]
    fn open_hemisphere_instances_are_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let vstar = crate::anisotropy::random_direction(&mut rng);
            let count = rng.gen_range(1..=40);
            let cap = rng.gen_range(0.2..1.4); // always < pi/2
            let normals = cap_sample(&mut rng, &vstar, cap, count);
            let verdict = hemisphere_classifier(&normals).unwrap();
            assert!(verdict.feasible);
            assert!(verdict.margin > 0.0, "margin = {}", verdict.margin);
            let w = verdict_witness(&verdict).unwrap();
            assert!(w.dot(&vstar) > 0.0, "witness strayed from the cap center");
        }
    }

    #[test]
    fn classifier_agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let center = Vector3::new(0.3, -0.5, 0.8).normalize();
        let cases = [
            cap_sample(&mut rng, &center, 1.2, 500),
            cap_sample(&mut rng, &center, 0.4, 50),
            {
                // Two antipodal-ish clusters: infeasible, kinked optimum.
                let mut ns = cap_sample(&mut rng, &center, 0.3, 25);
                ns.extend(cap_sample(&mut rng, &(-center), 0.3, 25));
                ns
            },
        ];
        for (case, normals) in cases.iter().enumerate() {
            let exact = hemisphere_classifier(normals).unwrap();
            let (_, brute) = brute_force_margin(normals, 7 + case as u64);
            assert!(
                (exact.margin - brute).abs() <= 1e-6,
                "case {case}: exact {} vs brute {}",
                exact.margin,
                brute
            );
            assert!(
                exact.margin >= brute - 1e-12,
                "exact enumeration can never lose to sampling"
            );
        }
    }

    #[test]
    fn meeks_constant_fixtures() {
        let round = meeks_constant(&Anisotropy::constant(), -2.0, 4).unwrap();
        assert_relative_eq!(round.d_w, 2.0, epsilon = 1e-12);
        assert_relative_eq!(round.d0, 2.0 * 3.0f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(round.d0_lemma, 4.0 * 3.0f64.sqrt(), epsilon = 1e-12);

        let steep = meeks_constant(&Anisotropy::constant(), -4.0, 4).unwrap();
        assert_relative_eq!(steep.d0, 3.0f64.sqrt(), epsilon = 1e-12);

        let ell = meeks_constant(&ellipsoid411(), -2.0, 5).unwrap();
        assert_relative_eq!(ell.d_w, 4.0, max_relative = 1e-3);
        assert_relative_eq!(
            ell.d0,
            2.0 * 3.0f64.sqrt() * ell.d_w / 2.0,
            epsilon = 1e-12
        );

        assert!(matches!(
            meeks_constant(&Anisotropy::constant(), 0.0, 4),
            Err(CamcError::ZeroH0)
        ));
    }

    #[test]
    fn d0_scales_with_inverse_curvature() {
        let f = ellipsoid411();
        let base = meeks_constant(&f, -2.0, 4).unwrap();
        for c in [2.0, -3.0, 0.5] {
            let scaled = meeks_constant(&f, -2.0 / c, 4).unwrap();
            assert_relative_eq!(scaled.d0, c.abs() * base.d0, max_relative = 1e-12);
        }
    }

    fn unit_sphere_mesh(level: u32) -> TriMesh {
        let s = icosphere(level);
        TriMesh::new(s.vertices.clone(), s.vertices, s.faces)
    }

    #[test]
    fn sphere_slices_have_latitude_diameters() {
        let mesh = unit_sphere_mesh(4);
        let e3 = Vector3::new(0.0, 0.0, 1.0);
        let reports = slice_components_diameter(&mesh, &e3, &[0.0, 0.5, -0.5]).unwrap();
        // The equator passes through icosahedron vertices, so the offset
        // must have been nudged.
        assert!(reports[0].offset_used != 0.0);
        assert_eq!(reports[0].components.len(), 1);
        assert_relative_eq!(reports[0].components[0], 2.0, max_relative = 2e-2);
        for r in &reports[1..] {
            assert_eq!(r.components.len(), 1);
            assert_relative_eq!(r.components[0], 3.0f64.sqrt(), max_relative = 2e-2);
        }
    }

    #[test]
    fn two_component_slice_is_detected() {
        // Two disjoint unit spheres shifted along x, cut by the plane z = 0.3.
        let one = unit_sphere_mesh(2);
        let mut vertices = one.vertices.clone();
        let mut normals = one.normals.clone();
        let mut faces = one.faces.clone();
        let offset = Vector3::new(5.0, 0.0, 0.0);
        let base = vertices.len() as u32;
        vertices.extend(one.vertices.iter().map(|v| v + offset));
        normals.extend(one.normals.iter().cloned());
        faces.extend(one.faces.iter().map(|f| f.map(|i| i + base)));
        let mesh = TriMesh::new(vertices, normals, faces);
        let reports =
            slice_components_diameter(&mesh, &Vector3::new(0.0, 0.0, 1.0), &[0.3]).unwrap();
        assert_eq!(reports[0].components.len(), 2);
        let expect = 2.0 * (1.0f64 - 0.09).sqrt();
        for d in &reports[0].components {
            assert_relative_eq!(*d, expect, max_relative = 3e-2);
        }
    }

    #[test]
    fn wulff_slices_respect_the_diameter_bound() {
        for f in [
            Anisotropy::constant(),
            ellipsoid411(),
            Anisotropy::perturbed(0.3, Vector3::new(0.0, 0.0, 1.0)).unwrap(),
        ] {
            let mesh = build_wulff_mesh(&f, 3);
            let d_w = wulff_diameter(&f, 4);
            let zmax = mesh.vertices.iter().map(|v| v.z.abs()).fold(0.0, f64::max);
            let offsets: Vec<f64> = (-4..=4).map(|k| 0.9 * zmax * k as f64 / 4.0).collect();
            let reports =
                slice_components_diameter(&mesh, &Vector3::new(0.0, 0.0, 1.0), &offsets)
                    .unwrap();
            for r in &reports {
                for d in &r.components {
                    assert!(
                        *d <= d_w + 2e-2,
                        "slice diameter {d} exceeds d_W = {d_w} + 2e-2"
                    );
                }
            }
        }
    }

    #[test]
    fn cylinder_slice_matches_profile_diameter() {
        let f = ellipsoid411();
        let patch = build_cylinder(&f, &Vector3::new(0.0, 0.0, 1.0), 180, 4, 2.0).unwrap();
        let profile_diam = {
            let pts = &patch.profile.points;
            let mut d = 0.0f64;
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    d = d.max((pts[i] - pts[j]).norm());
                }
            }
            d
        };
        let reports =
            slice_components_diameter(&patch.mesh, &Vector3::new(0.0, 0.0, 1.0), &[0.0])
                .unwrap();
        assert_eq!(reports[0].components.len(), 1);
        assert_relative_eq!(reports[0].components[0], profile_diam, epsilon = 1e-9);
    }

    #[test]
    fn cap_solution_height_matches_exact_value() {
        let exact = |x: f64, y: f64| (1.0 - x * x - y * y).sqrt();
        let p = GraphProblem::new(
            Anisotropy::constant(),
            -2.0,
            [-0.5, 0.5, -0.5, 0.5],
            33,
            33,
            Mask::Disk {
                center: (0.0, 0.0),
                radius: 0.5,
            },
            exact,
        )
        .unwrap();
        let sol = solve_dirichlet(&p, None).unwrap();
        let mut pts = Vec::new();
        for iy in 0..p.ny {
            for ix in 0..p.nx {
                let k = p.idx(ix, iy);
                if p.labels[k] != NodeLabel::Outside {
                    let (x, y) = p.node_xy(ix, iy);
                    pts.push(Vector3::new(x, y, sol.u[k]));
                }
            }
        }
        let rim = 0.75f64.sqrt();
        let height =
            graph_height_report(&pts, &Vector3::new(0.0, 0.0, 1.0), rim).unwrap();
        assert_relative_eq!(height, 1.0 - rim, max_relative = 2e-2);
    }

    #[test]
    fn doubled_wulff_lower_half_has_height_two() {
        let mesh = build_wulff_mesh(&Anisotropy::constant(), 4)
            .scaled(2.0)
            .unwrap();
        let lower: Vec<_> = mesh
            .vertices
            .iter()
            .filter(|v| v.z <= 0.0)
            .cloned()
            .collect();
        let h = graph_height_report(&lower, &Vector3::new(0.0, 0.0, 1.0), 0.0).unwrap();
        assert_relative_eq!(h, 2.0, max_relative = 2e-2);
    }

    #[test]
    fn flat_field_height_is_exact() {
        let pts = vec![
            Vector3::new(0.0, 0.0, 4.5),
            Vector3::new(1.0, 2.0, 4.5),
            Vector3::new(-3.0, 0.5, 4.5),
        ];
        let h = graph_height_report(&pts, &Vector3::new(0.0, 0.0, 2.0), 1.0).unwrap();
        assert_relative_eq!(h, 3.5, epsilon = 1e-15);
        assert!(matches!(
            graph_height_report(&[], &Vector3::new(0.0, 0.0, 1.0), 0.0),
            Err(CamcError::EmptyInput { .. })
        ));
    }
}
