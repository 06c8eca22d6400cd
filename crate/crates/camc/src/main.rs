//! Command-line front end: reproducible pipelines from a plain-text config
//! file to OBJ meshes, CSV tables, and JSON reports. Outputs are
//! deterministic for a fixed config and seed, so runs can be diffed byte
//! for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nalgebra::Vector3;

use camc::analysis::{
    graph_height_report, hemisphere_classifier, meeks_constant, slice_components_diameter,
    HemisphereVerdict, SliceReport,
};
use camc::anisotropy::check_ellipticity;
use camc::checks::{run_all, CheckResult};
use camc::config::{
    anisotropy_from_config, graph_settings_from_config, run_settings_from_config, Config,
    GraphSettings, RunSettings,
};
use camc::curvature::{aniso_shape_operator, CurvatureSample};
use camc::graphpde::{graph_normal, solve_dirichlet, GraphProblem, GraphSolution, NodeLabel};
use camc::wulff::{
    build_cylinder, build_wulff_mesh, wulff_curvature_range, wulff_diameter, CylinderChart,
    WulffChart,
};
use camc::{Anisotropy, CamcError, Result};

#[derive(Parser)]
#[command(
    name = "camc",
    about = "Constant anisotropic mean curvature toolkit",
    version
)]
struct Cli {
    /// Plain-text configuration file (key = value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifact files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Random seed recorded in reports (default 2024, printed on every run).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Icosphere subdivision level for Wulff meshes; overrides the config.
    #[arg(long, global = true)]
    level: Option<u32>,
    /// Grid nodes per axis for solve-graph; overrides the config.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Target curvature for solve-graph; overrides the config.
    #[arg(long, global = true, allow_negative_numbers = true)]
    h0: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy, PartialEq)]
enum Command {
    /// Build the Wulff shape: wulff.obj plus diameter/curvature-range JSON.
    Wulff,
    /// Build a CAMC cylinder: cylinder.obj, profile.csv, cylinder_h.csv.
    Cylinder,
    /// Tabulate curvature samples on a named chart: curvature.csv.
    Curvature,
    /// Solve the Dirichlet graph problem: solution.csv/.obj, report.json.
    SolveGraph,
    /// Run the acceptance suite: check.json; exit 0 iff every check passes.
    Check,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let record = serde_json::json!({
                "error": { "kind": e.kind(), "message": e.to_string() }
            });
            eprintln!("{record}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    fs::create_dir_all(&cli.out)?;
    if cli.command == Command::Check {
        return cmd_check(&cli);
    }
    let path = cli.config.as_ref().ok_or_else(|| CamcError::Config {
        line: 0,
        reason: "--config is required for this command".into(),
    })?;
    let cfg = Config::from_file(path)?;
    let f = anisotropy_from_config(&cfg)?;
    let settings = run_settings_from_config(&cfg)?;
    let graph = graph_settings_from_config(&cfg, &f)?;
    cfg.finish()?;
    let seed = cli.seed.or(settings.seed).unwrap_or(2024);
    println!("seed = {seed}");

    // Every geometry command requires a certified elliptic anisotropy.
    let ellipticity = check_ellipticity(&f, 4);
    if !ellipticity.elliptic {
        return Err(CamcError::NotElliptic {
            min_eig: ellipticity.min_eigenvalue,
        });
    }

    match cli.command {
        Command::Wulff => cmd_wulff(&cli, &f, &settings, seed)?,
        Command::Cylinder => cmd_cylinder(&cli, &f, &settings, seed)?,
        Command::Curvature => cmd_curvature(&cli, &f, &settings, seed)?,
        Command::SolveGraph => cmd_solve_graph(&cli, &f, &settings, graph.as_ref(), seed)?,
        Command::Check => unreachable!("handled above"),
    }
    Ok(ExitCode::SUCCESS)
}

fn write_text(cli: &Cli, name: &str, text: &str) -> Result<()> {
    let path = cli.out.join(name);
    fs::write(&path, text)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_json(cli: &Cli, name: &str, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    write_text(cli, name, &format!("{text}\n"))
}

fn write_obj(cli: &Cli, name: &str, mesh: &camc::mesh::TriMesh) -> Result<()> {
    let mut out = Vec::new();
    mesh.write_obj(&mut out)?;
    write_text(cli, name, std::str::from_utf8(&out).expect("obj is ascii"))
}

const CURVATURE_HEADER: &str = "u,v,x,y,z,H,K,lambda1,lambda2,sigma_norm\n";

fn curvature_row(s: &CurvatureSample) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}\n",
        s.u, s.v, s.point.x, s.point.y, s.point.z, s.h, s.k, s.lambda1, s.lambda2, s.sigma_norm
    )
}

#[derive(serde::Serialize)]
struct WulffReport {
    seed: u64,
    level: u32,
    d_w: f64,
    curvature_min: f64,
    curvature_max: f64,
    vertices: usize,
    faces: usize,
    area: f64,
    volume: f64,
}

fn cmd_wulff(cli: &Cli, f: &Anisotropy, settings: &RunSettings, seed: u64) -> Result<()> {
    let level = cli.level.or(settings.level).unwrap_or(4);
    let mesh = build_wulff_mesh(f, level);
    let (m, big_m) = wulff_curvature_range(f, level)?;
    write_obj(cli, "wulff.obj", &mesh)?;
    write_json(
        cli,
        "wulff.json",
        &WulffReport {
            seed,
            level,
            d_w: wulff_diameter(f, level),
            curvature_min: m,
            curvature_max: big_m,
            vertices: mesh.vertices.len(),
            faces: mesh.faces.len(),
            area: mesh.area(),
            volume: mesh.volume(),
        },
    )
}

fn cmd_cylinder(cli: &Cli, f: &Anisotropy, settings: &RunSettings, seed: u64) -> Result<()> {
    let v0 = settings.v0.unwrap_or_else(Vector3::z);
    let sides = settings.sides.unwrap_or(64);
    let rings = settings.rings.unwrap_or(4);
    let height = settings.height.unwrap_or(2.0);
    let patch = build_cylinder(f, &v0, sides, rings, height)?;
    write_obj(cli, "cylinder.obj", &patch.mesh)?;

    let mut profile = String::from("theta,x,y,z,px,py,pz\n");
    for i in 0..patch.profile.thetas.len() {
        let p = patch.profile.points[i];
        let n = patch.profile.normals[i];
        let _ = writeln!(
            profile,
            "{},{},{},{},{},{},{}",
            patch.profile.thetas[i], p.x, p.y, p.z, n.x, n.y, n.z
        );
    }
    write_text(cli, "profile.csv", &profile)?;

    let mut table = String::from(CURVATURE_HEADER);
    for j in 0..rings {
        let lambda = -height / 2.0 + height * j as f64 / (rings - 1) as f64;
        for i in 0..sides {
            let theta = i as f64 / sides as f64 * std::f64::consts::TAU;
            let s = aniso_shape_operator(f, &patch.chart, theta, lambda)?;
            table.push_str(&curvature_row(&s));
        }
    }
    write_text(cli, "cylinder_h.csv", &table)?;
    println!("seed = {seed} recorded in outputs; cylinder H table has {sides}x{rings} samples");
    Ok(())
}

fn cmd_curvature(cli: &Cli, f: &Anisotropy, settings: &RunSettings, _seed: u64) -> Result<()> {
    let n = settings.samples.unwrap_or(20);
    let chart_name = settings.chart.as_deref().unwrap_or("wulff");
    let mut table = String::from(CURVATURE_HEADER);
    match chart_name {
        "wulff" => {
            let chart = WulffChart {
                f: f.clone(),
                exterior: true,
            };
            for i in 0..n {
                let u = std::f64::consts::PI * (i + 1) as f64 / (n + 1) as f64;
                for j in 0..n {
                    let v = std::f64::consts::TAU * j as f64 / n as f64;
                    table.push_str(&curvature_row(&aniso_shape_operator(f, &chart, u, v)?));
                }
            }
        }
        "cylinder" => {
            let v0 = settings.v0.unwrap_or_else(Vector3::z);
            let height = settings.height.unwrap_or(2.0);
            let chart = CylinderChart::new(f.clone(), &v0)?;
            for i in 0..n {
                let theta = std::f64::consts::TAU * i as f64 / n as f64;
                for j in 0..n {
                    let lambda = -height / 2.0 + height * j as f64 / (n - 1).max(1) as f64;
                    table.push_str(&curvature_row(&aniso_shape_operator(
                        f, &chart, theta, lambda,
                    )?));
                }
            }
        }
        other => {
            return Err(CamcError::Config {
                line: 0,
                reason: format!("unknown chart `{other}` (expected wulff or cylinder)"),
            })
        }
    }
    write_text(cli, "curvature.csv", &table)
}

#[derive(serde::Serialize)]
struct SolverReport {
    residual_norm: f64,
    newton_iterations: usize,
    min_discriminant: f64,
    interior_nodes: usize,
}

#[derive(serde::Serialize)]
struct GraphReport {
    seed: u64,
    d_w: f64,
    h0: f64,
    d0: f64,
    d0_lemma: f64,
    heights: Vec<f64>,
    slices: Vec<SliceReport>,
    hemisphere: HemisphereVerdict,
    solver: SolverReport,
}

/// Gauss image of the solved graph: upward unit normals from central
/// differences at interior nodes (every neighbor of an interior node
/// carries a solved value).
fn solution_normals(problem: &GraphProblem, u: &[f64]) -> Vec<Vector3<f64>> {
    let h = problem.h;
    problem
        .interior_nodes()
        .into_iter()
        .map(|(ix, iy)| {
            let p = (u[problem.idx(ix + 1, iy)] - u[problem.idx(ix - 1, iy)]) / (2.0 * h);
            let q = (u[problem.idx(ix, iy + 1)] - u[problem.idx(ix, iy - 1)]) / (2.0 * h);
            graph_normal(p, q)
        })
        .collect()
}

fn cmd_solve_graph(
    cli: &Cli,
    f: &Anisotropy,
    settings: &RunSettings,
    graph: Option<&GraphSettings>,
    seed: u64,
) -> Result<()> {
    let graph = graph.ok_or_else(|| CamcError::Config {
        line: 0,
        reason: "missing required key `domain` (solve-graph needs a graph problem section)".into(),
    })?;
    let problem = graph.to_problem(f, cli.grid, cli.h0)?;
    let solution = solve_dirichlet(&problem, None)?;

    let mut csv = String::from("x,y,u,residual\n");
    for iy in 0..problem.ny {
        for ix in 0..problem.nx {
            let k = problem.idx(ix, iy);
            if problem.labels[k] != NodeLabel::Outside {
                let (x, y) = problem.node_xy(ix, iy);
                let _ = writeln!(csv, "{},{},{},{}", x, y, solution.u[k], solution.residual[k]);
            }
        }
    }
    write_text(cli, "solution.csv", &csv)?;

    let mesh = camc::graphpde::height_field_mesh(&problem, &solution.u)?;
    write_obj(cli, "solution.obj", &mesh)?;

    let report = graph_report(cli, f, settings, &problem, &solution, &mesh, seed)?;
    write_json(cli, "report.json", &report)?;
    println!(
        "solved: {} Newton iterations, residual {:.3e}",
        solution.newton_iterations, solution.residual_norm
    );
    Ok(())
}

fn graph_report(
    cli: &Cli,
    f: &Anisotropy,
    settings: &RunSettings,
    problem: &GraphProblem,
    solution: &GraphSolution,
    mesh: &camc::mesh::TriMesh,
    seed: u64,
) -> Result<GraphReport> {
    let level = cli.level.or(settings.level).unwrap_or(4);
    let bounds = meeks_constant(f, problem.h0, level)?;
    let axis = Vector3::z();
    let heights = vec![graph_height_report(&mesh.vertices, &axis, 0.0)?];
    let slices = match &settings.offsets {
        Some(offsets) if !offsets.is_empty() => slice_components_diameter(mesh, &axis, offsets)?,
        _ => Vec::new(),
    };
    let hemisphere = hemisphere_classifier(&solution_normals(problem, &solution.u))?;
    Ok(GraphReport {
        seed,
        d_w: bounds.d_w,
        h0: problem.h0,
        d0: bounds.d0,
        d0_lemma: bounds.d0_lemma,
        heights,
        slices,
        hemisphere,
        solver: SolverReport {
            residual_norm: solution.residual_norm,
            newton_iterations: solution.newton_iterations,
            min_discriminant: solution.min_discriminant,
            interior_nodes: problem.interior_nodes().len(),
        },
    })
}

fn cmd_check(cli: &Cli) -> Result<ExitCode> {
    let results = run_all();
    for r in &results {
        print_check_line(r);
    }
    write_json(cli, "check.json", &results)?;
    let all_passed = results.iter().all(|r| r.passed);
    println!(
        "{}: {} of {} checks passed",
        if all_passed { "ok" } else { "FAILED" },
        results.iter().filter(|r| r.passed).count(),
        results.len()
    );
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn print_check_line(r: &CheckResult) {
    println!(
        "{} {:2} {:<24} measured {:>10.3e} vs {:>8.1e} | {}",
        if r.passed { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.measured,
        r.threshold,
        r.detail
    );
}
