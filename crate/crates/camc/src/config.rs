//! Plain-text `key = value` configuration files for the CLI: anisotropy
//! selection, graph-problem setup, and per-command parameters.
//!
//! One entry per line, `key = value`, where a value is a bare word
//! (`ellipsoid`), a number (`-2.0`), or a bracketed number list
//! (`[4, 1, 1, 0, 0, 0]`). `#` starts a comment; blank lines are skipped.
//! Loaders mark the keys they read; after loading, [`Config::finish`]
//! rejects anything left over as an unknown key, with its line number.

use std::cell::Cell;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};

use crate::anisotropy::Anisotropy;
use crate::error::{CamcError, Result};
use crate::graphpde::{GraphProblem, Mask};

/// A parsed right-hand side: word, number, or list of numbers.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Word(String),
    Number(f64),
    List(Vec<f64>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Word(_) => "word",
            Value::Number(_) => "number",
            Value::List(_) => "list",
        }
    }
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: Value,
    line: usize,
    used: Cell<bool>,
}

/// A parsed configuration file. Typed getters consume keys; keys never
/// consumed are unknown and fail [`Config::finish`].
#[derive(Debug)]
pub struct Config {
    entries: Vec<Entry>,
}

fn config_err(line: usize, reason: impl Into<String>) -> CamcError {
    CamcError::Config {
        line,
        reason: reason.into(),
    }
}

fn parse_value(text: &str, line: usize) -> Result<Value> {
    let text = text.trim();
    if text.is_empty() {
        return Err(config_err(line, "missing value after `=`"));
    }
    if let Some(inner) = text.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| config_err(line, "unclosed `[` in list value"))?;
        let mut items = Vec::new();
        if !inner.trim().is_empty() {
            for part in inner.split(',') {
                let part = part.trim();
                let x: f64 = part
                    .parse()
                    .map_err(|_| config_err(line, format!("`{part}` is not a number")))?;
                items.push(x);
            }
        }
        return Ok(Value::List(items));
    }
    if let Ok(x) = text.parse::<f64>() {
        return Ok(Value::Number(x));
    }
    if text
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        return Ok(Value::Word(text.to_string()));
    }
    Err(config_err(
        line,
        format!("cannot parse value `{text}` (expected a word, number, or [list])"),
    ))
}

impl Config {
    /// Parse configuration text. Duplicate keys are rejected at the second
    /// occurrence; malformed lines are rejected with their line number.
    pub fn parse(text: &str) -> Result<Config> {
        let mut entries: Vec<Entry> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, "expected `key = value`"))?;
            let key = key.trim();
            if key.is_empty()
                || !key
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(config_err(line, format!("invalid key `{key}`")));
            }
            if let Some(prev) = entries.iter().find(|e| e.key == key) {
                return Err(config_err(
                    line,
                    format!("duplicate key `{key}` (first set at line {})", prev.line),
                ));
            }
            entries.push(Entry {
                key: key.to_string(),
                value: parse_value(value, line)?,
                line,
                used: Cell::new(false),
            });
        }
        Ok(Config { entries })
    }

    /// Parse a configuration file from disk.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Config> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    fn entry(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key).inspect(|e| {
            e.used.set(true);
        })
    }

    fn wrong_type(e: &Entry, expected: &str) -> CamcError {
        config_err(
            e.line,
            format!(
                "`{}` must be a {expected}, got a {}",
                e.key,
                e.value.kind()
            ),
        )
    }

    /// Bare-word value of `key`, if present.
    pub fn word(&self, key: &str) -> Result<Option<&str>> {
        match self.entry(key) {
            None => Ok(None),
            Some(e) => match &e.value {
                Value::Word(w) => Ok(Some(w)),
                _ => Err(Self::wrong_type(e, "word")),
            },
        }
    }

    /// Numeric value of `key`, if present.
    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.entry(key) {
            None => Ok(None),
            Some(e) => match &e.value {
                Value::Number(x) => Ok(Some(*x)),
                _ => Err(Self::wrong_type(e, "number")),
            },
        }
    }

    /// Nonnegative integer value of `key`, if present.
    pub fn integer(&self, key: &str) -> Result<Option<usize>> {
        match self.number(key)? {
            None => Ok(None),
            Some(x) => {
                if x < 0.0 || x.fract() != 0.0 || x > u32::MAX as f64 {
                    Err(config_err(
                        self.line_of(key),
                        format!("`{key}` must be a nonnegative integer, got {x}"),
                    ))
                } else {
                    Ok(Some(x as usize))
                }
            }
        }
    }

    /// List value of `key` with exactly `len` entries, if present.
    pub fn list(&self, key: &str, len: usize) -> Result<Option<Vec<f64>>> {
        match self.entry(key) {
            None => Ok(None),
            Some(e) => match &e.value {
                Value::List(items) if items.len() == len => Ok(Some(items.clone())),
                Value::List(items) => Err(config_err(
                    e.line,
                    format!("`{key}` must have {len} entries, got {}", items.len()),
                )),
                _ => Err(Self::wrong_type(e, "list")),
            },
        }
    }

    /// Line of `key`, or 0 when absent (file-level error position).
    pub fn line_of(&self, key: &str) -> usize {
        self.entries
            .iter()
            .find(|e| e.key == key)
            .map_or(0, |e| e.line)
    }

    fn missing(key: &str) -> CamcError {
        config_err(0, format!("missing required key `{key}`"))
    }

    /// Bare-word value of `key`; errors when absent.
    pub fn require_word(&self, key: &str) -> Result<&str> {
        self.word(key)?.ok_or_else(|| Self::missing(key))
    }

    /// Numeric value of `key`; errors when absent.
    pub fn require_number(&self, key: &str) -> Result<f64> {
        self.number(key)?.ok_or_else(|| Self::missing(key))
    }

    /// List value of `key`; errors when absent.
    pub fn require_list(&self, key: &str, len: usize) -> Result<Vec<f64>> {
        self.list(key, len)?.ok_or_else(|| Self::missing(key))
    }

    /// Reject keys no loader consumed. Call after all loaders have run.
    pub fn finish(&self) -> Result<()> {
        match self.entries.iter().find(|e| !e.used.get()) {
            None => Ok(()),
            Some(e) => Err(config_err(e.line, format!("unknown key `{}`", e.key))),
        }
    }
}

/// Build the configured anisotropy: `kind = constant | ellipsoid |
/// perturbed`, with `q = [q11,q22,q33,q12,q13,q23]` for ellipsoids and
/// `epsilon`, `axis = [x,y,z]` for perturbations.
pub fn anisotropy_from_config(cfg: &Config) -> Result<Anisotropy> {
    let kind = cfg.require_word("kind")?;
    match kind {
        "constant" => Ok(Anisotropy::constant()),
        "ellipsoid" => {
            let q = cfg.require_list("q", 6)?;
            Anisotropy::ellipsoid_from_coeffs([q[0], q[1], q[2], q[3], q[4], q[5]])
        }
        "perturbed" => {
            let epsilon = cfg.require_number("epsilon")?;
            let a = cfg.require_list("axis", 3)?;
            Anisotropy::perturbed(epsilon, Vector3::new(a[0], a[1], a[2]))
        }
        other => Err(config_err(
            cfg.line_of("kind"),
            format!("unknown kind `{other}` (expected constant, ellipsoid, or perturbed)"),
        )),
    }
}

/// Dirichlet data selected by the `boundary` key.
#[derive(Clone, Debug)]
pub enum BoundaryTrace {
    /// Upper cap of the round unit sphere: u = sqrt(1 - x^2 - y^2).
    SphereCap,
    /// Upper cap of the Wulff ellipsoid x^T M x = 1 with M = Q^{-1}: the
    /// positive root of the vertical quadratic through (x, y).
    WulffCap { m: Matrix3<f64> },
    /// u = value on the whole boundary.
    Constant { value: f64 },
    /// u = a + b x + c y.
    Affine { a: f64, b: f64, c: f64 },
}

impl BoundaryTrace {
    /// Trace value at a boundary node. Heights are clamped at 0 where the
    /// cap formulas leave the cap's shadow (the mask should prevent that).
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            BoundaryTrace::SphereCap => (1.0 - x * x - y * y).max(0.0).sqrt(),
            BoundaryTrace::WulffCap { m } => {
                // m22 z^2 + 2 beta z + gamma = 0 with the + root.
                let beta = m[(0, 2)] * x + m[(1, 2)] * y;
                let gamma = m[(0, 0)] * x * x + 2.0 * m[(0, 1)] * x * y + m[(1, 1)] * y * y - 1.0;
                let disc = (beta * beta - m[(2, 2)] * gamma).max(0.0);
                (-beta + disc.sqrt()) / m[(2, 2)]
            }
            BoundaryTrace::Constant { value } => *value,
            BoundaryTrace::Affine { a, b, c } => a + b * x + c * y,
        }
    }
}

/// Graph-problem section of a config file. Optional as a group: absent when
/// the file has no `domain` key.
#[derive(Clone, Debug)]
pub struct GraphSettings {
    pub domain: [f64; 4],
    /// Nodes per axis, from `grid` or derived from a spacing `h`.
    pub grid: Option<usize>,
    pub mask: Mask,
    pub boundary: BoundaryTrace,
    pub h0: Option<f64>,
}

fn boundary_from_config(cfg: &Config, f: &Anisotropy) -> Result<BoundaryTrace> {
    let name = cfg.require_word("boundary")?;
    match name {
        "sphere_cap" => Ok(BoundaryTrace::SphereCap),
        "wulff_cap" => {
            let q = match f {
                Anisotropy::Constant => Matrix3::identity(),
                Anisotropy::Ellipsoid { q } => *q,
                Anisotropy::Perturbed { .. } => {
                    return Err(config_err(
                        cfg.line_of("boundary"),
                        "wulff_cap needs kind = constant or ellipsoid (no closed-form \
                         cap for perturbed anisotropies)",
                    ))
                }
            };
            let m = q.try_inverse().expect("positive definite Q is invertible");
            Ok(BoundaryTrace::WulffCap { m })
        }
        "constant" => Ok(BoundaryTrace::Constant {
            value: cfg.require_number("boundary_value")?,
        }),
        "affine" => {
            let a = cfg.require_list("affine", 3)?;
            Ok(BoundaryTrace::Affine {
                a: a[0],
                b: a[1],
                c: a[2],
            })
        }
        other => Err(config_err(
            cfg.line_of("boundary"),
            format!(
                "unknown boundary `{other}` (expected sphere_cap, wulff_cap, constant, or affine)"
            ),
        )),
    }
}

/// Read the graph-problem keys: `domain = [x0,x1,y0,y1]`, `grid = n` or
/// `h = spacing`, `mask = rectangle | disk` (+ `radius`, `center`),
/// `boundary = sphere_cap | wulff_cap | constant | affine`
/// (+ `boundary_value` or `affine = [a,b,c]`), `h0`. Returns `None` when no
/// `domain` key is present.
pub fn graph_settings_from_config(cfg: &Config, f: &Anisotropy) -> Result<Option<GraphSettings>> {
    let Some(domain) = cfg.list("domain", 4)? else {
        return Ok(None);
    };
    let domain = [domain[0], domain[1], domain[2], domain[3]];
    let grid = match (cfg.integer("grid")?, cfg.number("h")?) {
        (Some(_), Some(_)) => {
            return Err(config_err(
                cfg.line_of("h"),
                "give either `grid` or `h`, not both",
            ))
        }
        (Some(n), None) => Some(n),
        (None, Some(h)) => {
            if h <= 0.0 {
                return Err(config_err(cfg.line_of("h"), "`h` must be positive"));
            }
            let n = ((domain[1] - domain[0]) / h).round() as usize + 1;
            Some(n)
        }
        (None, None) => None,
    };
    let mask = match cfg.word("mask")?.unwrap_or("rectangle") {
        "rectangle" => Mask::Rectangle,
        "disk" => {
            let radius = cfg.require_number("radius")?;
            let center = match cfg.list("center", 2)? {
                Some(c) => (c[0], c[1]),
                None => ((domain[0] + domain[1]) / 2.0, (domain[2] + domain[3]) / 2.0),
            };
            Mask::Disk { center, radius }
        }
        other => {
            return Err(config_err(
                cfg.line_of("mask"),
                format!("unknown mask `{other}` (expected rectangle or disk)"),
            ))
        }
    };
    let boundary = boundary_from_config(cfg, f)?;
    let h0 = cfg.number("h0")?;
    Ok(Some(GraphSettings {
        domain,
        grid,
        mask,
        boundary,
        h0,
    }))
}

impl GraphSettings {
    /// Assemble the Dirichlet problem, with CLI flags overriding the file's
    /// `grid` and `h0`. Either source must supply both.
    pub fn to_problem(
        &self,
        f: &Anisotropy,
        grid_override: Option<usize>,
        h0_override: Option<f64>,
    ) -> Result<GraphProblem> {
        let n = grid_override
            .or(self.grid)
            .ok_or_else(|| config_err(0, "missing required key `grid` (or pass --grid)"))?;
        let h0 = h0_override
            .or(self.h0)
            .ok_or_else(|| config_err(0, "missing required key `h0` (or pass --h0)"))?;
        let boundary = self.boundary.clone();
        GraphProblem::new(f.clone(), h0, self.domain, n, n, self.mask, move |x, y| {
            boundary.eval(x, y)
        })
    }
}

/// Per-command parameters every command may read: all optional here,
/// defaulted by the CLI.
#[derive(Clone, Debug, Default)]
pub struct RunSettings {
    /// Icosphere subdivision level for Wulff meshes.
    pub level: Option<u32>,
    /// Cylinder axis.
    pub v0: Option<Vector3<f64>>,
    /// Cylinder height.
    pub height: Option<f64>,
    /// Cylinder profile samples per ring.
    pub sides: Option<usize>,
    /// Cylinder rings along the axis.
    pub rings: Option<usize>,
    /// Chart name for the curvature table: wulff | cylinder.
    pub chart: Option<String>,
    /// Samples per chart parameter for the curvature table.
    pub samples: Option<usize>,
    /// Random seed recorded in outputs.
    pub seed: Option<u64>,
    /// Slice offsets along v0 for analysis reports.
    pub offsets: Option<Vec<f64>>,
}

/// Read the optional per-command keys: `level`, `v0 = [x,y,z]`, `height`,
/// `sides`, `rings`, `chart = wulff | cylinder`, `samples`, `seed`,
/// `offsets = [...]`.
pub fn run_settings_from_config(cfg: &Config) -> Result<RunSettings> {
    let offsets = match cfg.entry("offsets") {
        None => None,
        Some(e) => match &e.value {
            Value::List(items) => Some(items.clone()),
            _ => return Err(Config::wrong_type(e, "list")),
        },
    };
    Ok(RunSettings {
        level: cfg.integer("level")?.map(|n| n as u32),
        v0: cfg
            .list("v0", 3)?
            .map(|v| Vector3::new(v[0], v[1], v[2])),
        height: cfg.number("height")?,
        sides: cfg.integer("sides")?,
        rings: cfg.integer("rings")?,
        chart: cfg.word("chart")?.map(str::to_string),
        samples: cfg.integer("samples")?,
        seed: cfg.number("seed")?.map(|s| s as u64),
        offsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphpde::{camc_residual, residual_norm, NodeLabel};

    fn parse(text: &str) -> Config {
        Config::parse(text).expect("config parses")
    }

    #[test]
    fn parses_words_numbers_lists_and_comments() {
        let cfg = parse(
            "# anisotropy\nkind = ellipsoid # diag\nq = [4, 1, 1, 0, 0, 0]\n\nh0 = -2.0\n",
        );
        assert_eq!(cfg.require_word("kind").unwrap(), "ellipsoid");
        assert_eq!(
            cfg.require_list("q", 6).unwrap(),
            vec![4.0, 1.0, 1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(cfg.require_number("h0").unwrap(), -2.0);
        assert!(cfg.finish().is_ok());
    }

    #[test]
    fn rejects_malformed_lines_with_line_numbers() {
        let line = |text: &str| match Config::parse(text).unwrap_err() {
            CamcError::Config { line, .. } => line,
            other => panic!("expected config error, got {other}"),
        };
        assert_eq!(line("kind = constant\nnonsense\n"), 2);
        assert_eq!(line("q = [1, 2\n"), 1);
        assert_eq!(line("q = [1, two]\n"), 1);
        assert_eq!(line("kind = constant\nkind = ellipsoid\n"), 2);
        assert_eq!(line("bad key = 1\n"), 1);
        assert_eq!(line("kind =\n"), 1);
    }

    #[test]
    fn type_mismatches_and_unknown_keys_are_reported() {
        let cfg = parse("kind = [1]\n");
        assert!(matches!(
            cfg.word("kind"),
            Err(CamcError::Config { line: 1, .. })
        ));

        let cfg = parse("grid = 64.5\n");
        assert!(cfg.integer("grid").is_err());

        let cfg = parse("kind = constant\nextra = 3\n");
        let _ = cfg.word("kind").unwrap();
        match cfg.finish().unwrap_err() {
            CamcError::Config { line, reason } => {
                assert_eq!(line, 2);
                assert!(reason.contains("extra"), "reason: {reason}");
            }
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn builds_each_anisotropy_kind() {
        let f = anisotropy_from_config(&parse("kind = constant\n")).unwrap();
        assert!(matches!(f, Anisotropy::Constant));

        let cfg = parse("kind = ellipsoid\nq = [4, 1, 1, 0, 0, 0]\n");
        let f = anisotropy_from_config(&cfg).unwrap();
        let n = Vector3::new(1.0, 0.0, 0.0);
        assert!((f.f(&n).unwrap() - 2.0).abs() < 1e-15, "F(e1) = sqrt(q11)");
        assert!(cfg.finish().is_ok());

        let cfg = parse("kind = perturbed\nepsilon = 0.3\naxis = [0, 0, 2]\n");
        let f = anisotropy_from_config(&cfg).unwrap();
        let e3 = Vector3::new(0.0, 0.0, 1.0);
        assert!((f.f(&e3).unwrap() - 1.3).abs() < 1e-15, "axis renormalized");

        assert!(anisotropy_from_config(&parse("kind = fancy\n")).is_err());
        assert!(anisotropy_from_config(&parse("kind = ellipsoid\n")).is_err());
    }

    #[test]
    fn graph_section_is_optional_and_validates() {
        let cfg = parse("kind = constant\n");
        let f = anisotropy_from_config(&cfg).unwrap();
        assert!(graph_settings_from_config(&cfg, &f).unwrap().is_none());

        let cfg = parse(
            "kind = constant\ndomain = [-0.5, 0.5, -0.5, 0.5]\ngrid = 17\n\
             mask = disk\nradius = 0.5\nboundary = sphere_cap\nh0 = -2\n",
        );
        let f = anisotropy_from_config(&cfg).unwrap();
        let gs = graph_settings_from_config(&cfg, &f).unwrap().unwrap();
        assert!(cfg.finish().is_ok());
        let problem = gs.to_problem(&f, None, None).unwrap();
        assert_eq!((problem.nx, problem.ny), (17, 17));
        let interior = problem
            .labels
            .iter()
            .filter(|&&l| l == NodeLabel::Interior)
            .count();
        assert!(interior > 0, "disk mask leaves interior nodes");

        // The exact hemisphere trace solves the equation: residual is O(h^2).
        let u: Vec<f64> = (0..problem.nx * problem.ny)
            .map(|k| {
                let (ix, iy) = (k % problem.nx, k / problem.nx);
                let (x, y) = problem.node_xy(ix, iy);
                BoundaryTrace::SphereCap.eval(x, y)
            })
            .collect();
        let res = residual_norm(&camc_residual(&problem, &u));
        assert!(res < 0.05, "hemisphere trace near-solves at 17^2: {res}");
    }

    #[test]
    fn spacing_key_matches_explicit_grid() {
        let base = "kind = constant\ndomain = [0, 1, 0, 1]\nboundary = constant\n\
                    boundary_value = 0\nh0 = 0\n";
        let f = Anisotropy::constant();
        let with_grid = parse(&format!("{base}grid = 33\n"));
        let with_h = parse(&format!("{base}h = 0.03125\n"));
        let a = graph_settings_from_config(&with_grid, &f).unwrap().unwrap();
        let b = graph_settings_from_config(&with_h, &f).unwrap().unwrap();
        assert_eq!(a.grid, b.grid);

        let both = parse(&format!("{base}grid = 33\nh = 0.03125\n"));
        assert!(graph_settings_from_config(&both, &f).is_err());
    }

    #[test]
    fn boundary_traces_evaluate_correctly() {
        assert!((BoundaryTrace::SphereCap.eval(0.3, 0.4) - (1.0f64 - 0.25).sqrt()).abs() < 1e-15);

        let f = anisotropy_from_config(&parse("kind = ellipsoid\nq = [4, 1, 1, 0, 0, 0]\n"))
            .unwrap();
        let cfg = parse("boundary = wulff_cap\n");
        let trace = boundary_from_config(&cfg, &f).unwrap();
        let (x, y): (f64, f64) = (0.6, 0.2);
        let exact = (1.0 - x * x / 4.0 - y * y).sqrt();
        assert!((trace.eval(x, y) - exact).abs() < 1e-14, "diag(4,1,1) cap");

        let constant = boundary_from_config(
            &parse("boundary = constant\nboundary_value = 0.25\n"),
            &Anisotropy::constant(),
        )
        .unwrap();
        assert_eq!(constant.eval(9.0, -3.0), 0.25);

        let affine = boundary_from_config(
            &parse("boundary = affine\naffine = [1, 2, 3]\n"),
            &Anisotropy::constant(),
        )
        .unwrap();
        assert_eq!(affine.eval(0.5, 0.5), 1.0 + 1.0 + 1.5);

        let perturbed =
            anisotropy_from_config(&parse("kind = perturbed\nepsilon = 0.2\naxis = [0, 0, 1]\n"))
                .unwrap();
        assert!(boundary_from_config(&parse("boundary = wulff_cap\n"), &perturbed).is_err());
        assert!(
            boundary_from_config(&parse("boundary = pinned\n"), &Anisotropy::constant()).is_err()
        );
    }

    #[test]
    fn flag_overrides_take_precedence() {
        let cfg = parse(
            "kind = constant\ndomain = [-0.5, 0.5, -0.5, 0.5]\ngrid = 17\n\
             boundary = sphere_cap\nh0 = -2\n",
        );
        let f = anisotropy_from_config(&cfg).unwrap();
        let gs = graph_settings_from_config(&cfg, &f).unwrap().unwrap();
        let problem = gs.to_problem(&f, Some(33), Some(-1.0)).unwrap();
        assert_eq!(problem.nx, 33);
        assert_eq!(problem.h0, -1.0);

        let bare = parse(
            "kind = constant\ndomain = [-0.5, 0.5, -0.5, 0.5]\nboundary = sphere_cap\n",
        );
        let gs = graph_settings_from_config(&bare, &f).unwrap().unwrap();
        assert!(gs.to_problem(&f, None, Some(-2.0)).is_err(), "grid missing");
        assert!(gs.to_problem(&f, Some(17), None).is_err(), "h0 missing");
    }

    #[test]
    fn run_settings_read_all_optional_keys() {
        let cfg = parse(
            "level = 3\nv0 = [0, 0, 1]\nheight = 2\nsides = 64\nrings = 4\n\
             chart = cylinder\nsamples = 20\nseed = 7\noffsets = [-0.5, 0, 0.5]\n",
        );
        let rs = run_settings_from_config(&cfg).unwrap();
        assert!(cfg.finish().is_ok());
        assert_eq!(rs.level, Some(3));
        assert_eq!(rs.v0, Some(Vector3::new(0.0, 0.0, 1.0)));
        assert_eq!(rs.height, Some(2.0));
        assert_eq!(rs.sides, Some(64));
        assert_eq!(rs.rings, Some(4));
        assert_eq!(rs.chart.as_deref(), Some("cylinder"));
        assert_eq!(rs.samples, Some(20));
        assert_eq!(rs.seed, Some(7));
        assert_eq!(rs.offsets, Some(vec![-0.5, 0.0, 0.5]));

        let empty = parse("kind = constant\n");
        let rs = run_settings_from_config(&empty).unwrap();
        assert_eq!(rs.level, None);
        assert_eq!(rs.seed, None);
    }
}
