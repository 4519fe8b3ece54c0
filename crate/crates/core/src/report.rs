//! Run configuration, the full verification suite and its JSON report.

use std::f64::consts::PI;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::integrator::{patch_radius, ApexConfig, Approach, End, QuadratureConfig, Surface};
use crate::mesh::{
    build_mesh, graph_check, FundamentalSamples, GraphCheckReport, GraphMesh, GridSpec,
};
use crate::minimal::{b2n_normalize, measure_lattice, MinimalData, Orientation, PeriodLattice};
use crate::singular::{classify_all, singular_set, verify_singular_set, ConeReport};
use crate::weierstrass::{
    EndBehaviour, EndTilt, Extended, FreeCoordinate, RawParams, SurfaceParams,
};

/// Named tolerance ladders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TolLevel {
    Strict,
    Default,
    Loose,
}

impl FromStr for TolLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Self::Strict),
            "default" => Ok(Self::Default),
            "loose" => Ok(Self::Loose),
            other => Err(Error::InvalidInput(format!(
                "unknown tolerance level {other:?} (expected strict, default or loose)"
            ))),
        }
    }
}

/// Thresholds for the three kinds of check: algebraic identities
/// (relative), integrated quantities and mesh-level geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub level: TolLevel,
    pub algebraic: f64,
    pub integrated: f64,
    pub mesh: f64,
    /// `|f_2 + Arg z|` on mesh samples.
    pub second_coordinate: f64,
}

impl Tolerances {
    pub fn for_level(level: TolLevel) -> Self {
        let (algebraic, integrated, mesh) = match level {
            TolLevel::Strict => (1e-13, 1e-9, 1e-7),
            TolLevel::Default => (1e-12, 1e-8, 1e-6),
            TolLevel::Loose => (1e-10, 1e-6, 1e-4),
        };
        Self {
            level,
            algebraic,
            integrated,
            mesh,
            second_coordinate: 1e-10,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::for_level(TolLevel::Default)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub radial_samples: Option<usize>,
    pub angular_samples: Option<usize>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub seam_refinement: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    pub level: Option<TolLevel>,
    pub algebraic: Option<f64>,
    pub integrated: Option<f64>,
    pub mesh: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasepointSection {
    /// Real basepoint beyond `a_{2m}`.
    pub x0: f64,
}

/// A config file: the parameter document plus optional `grid`,
/// `tolerances` and `basepoint` sections.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SurfaceParams,
    pub grid: GridSection,
    pub tolerances: ToleranceSection,
    pub basepoint: Option<BasepointSection>,
    /// Seed of the random sample points.
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 20_241_016;

impl RunConfig {
    pub fn new(params: SurfaceParams) -> Self {
        Self {
            params,
            grid: GridSection::default(),
            tolerances: ToleranceSection::default(),
            basepoint: None,
            seed: DEFAULT_SEED,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut doc: Value = serde_json::from_str(text)?;
        let obj = doc
            .as_object_mut()
            .ok_or_else(|| Error::InvalidInput("config must be a JSON object".into()))?;
        let grid = match obj.remove("grid") {
            Some(v) => serde_json::from_value(v)?,
            None => GridSection::default(),
        };
        let tolerances = match obj.remove("tolerances") {
            Some(v) => serde_json::from_value(v)?,
            None => ToleranceSection::default(),
        };
        let basepoint = match obj.remove("basepoint") {
            Some(v) => Some(serde_json::from_value(v)?),
            None => None,
        };
        let seed = match obj.remove("seed") {
            Some(v) => serde_json::from_value(v)?,
            None => DEFAULT_SEED,
        };
        let raw: RawParams = serde_json::from_value(doc)?;
        Ok(Self {
            params: SurfaceParams::validate(raw)?,
            grid,
            tolerances,
            basepoint,
            seed,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Tolerances from the config, with `level` (e.g. from the command line)
    /// taking precedence over the file's level.
    pub fn resolved_tolerances(&self, level: Option<TolLevel>) -> Tolerances {
        let level = level.or(self.tolerances.level).unwrap_or(TolLevel::Default);
        let mut t = Tolerances::for_level(level);
        if let Some(v) = self.tolerances.algebraic {
            t.algebraic = v;
        }
        if let Some(v) = self.tolerances.integrated {
            t.integrated = v;
        }
        if let Some(v) = self.tolerances.mesh {
            t.mesh = v;
        }
        t
    }

    /// Grid for `params`, with `counts = (radial, angular)` overriding.
    pub fn resolved_grid(
        &self,
        params: &SurfaceParams,
        counts: Option<(usize, usize)>,
    ) -> GridSpec {
        let mut g = GridSpec::default_for(params);
        let s = &self.grid;
        g.radial_samples = s.radial_samples.unwrap_or(g.radial_samples);
        g.angular_samples = s.angular_samples.unwrap_or(g.angular_samples);
        g.r_min = s.r_min.unwrap_or(g.r_min);
        g.r_max = s.r_max.unwrap_or(g.r_max);
        g.seam_refinement = s.seam_refinement.unwrap_or(g.seam_refinement);
        if let Some((r, a)) = counts {
            g.radial_samples = r;
            g.angular_samples = a;
        }
        g
    }

    pub fn surface(&self, params: SurfaceParams) -> Result<Surface> {
        let s = Surface::new(params);
        match self.basepoint {
            Some(b) => s.with_basepoint(b.x0),
            None => Ok(s),
        }
    }
}

/// Parses `RxA`, e.g. `200x100`.
pub fn parse_grid_counts(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidGrid(format!("expected RxA with positive integers, got {text:?}"));
    let (r, a) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    if r == 0 || a == 0 {
        return Err(bad());
    }
    Ok((r, a))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub tol_level: Option<TolLevel>,
    pub grid_counts: Option<(usize, usize)>,
    pub require_horizontal_ends: bool,
    pub copies: usize,
}

/// What was done about the end at `z = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizontalEndOutcome {
    pub required: bool,
    pub input: EndBehaviour,
    /// Coordinate re-solved to make the end horizontal, if one was needed.
    pub solved_coordinate: Option<FreeCoordinate>,
    pub result: EndBehaviour,
    pub failure: Option<String>,
}

/// Applies the horizontal-end requirement: params already horizontal are
/// kept; otherwise the default free coordinates are tried in order.
pub fn prepare_params(
    params: &SurfaceParams,
    require_horizontal: bool,
) -> (SurfaceParams, HorizontalEndOutcome) {
    let input = params.end_behaviour();
    let mut outcome = HorizontalEndOutcome {
        required: require_horizontal,
        input,
        solved_coordinate: None,
        result: input,
        failure: None,
    };
    if !require_horizontal || input.tilt == EndTilt::Horizontal {
        return (params.clone(), outcome);
    }
    let mut last_error = None;
    for free in params.default_free_coordinates() {
        match params.normalize_horizontal_end(free) {
            Ok(p) => {
                outcome.solved_coordinate = Some(free);
                outcome.result = p.end_behaviour();
                return (p, outcome);
            }
            Err(e @ Error::Infeasible(_)) if params.all_same_direction() => {
                last_error = Some(e.to_string());
                break;
            }
            Err(e) => last_error = Some(e.to_string()),
        }
    }
    outcome.failure = Some(last_error.unwrap_or_else(|| "no free coordinate available".into()));
    (params.clone(), outcome)
}

/// One entry of the report's check list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst residual found (or the measured quantity).
    pub value: f64,
    pub tolerance: f64,
    pub details: Value,
}

impl CheckResult {
    fn new(name: &str, value: f64, tolerance: f64, passed: bool, details: Value) -> Self {
        Self {
            name: name.to_string(),
            passed: passed && !value.is_nan(),
            value,
            tolerance,
            details,
        }
    }

    fn failed(name: &str, tolerance: f64, err: &Error) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            value: f64::NAN,
            tolerance,
            details: json!({ "error": err.to_string() }),
        }
    }
}

/// Names of every check, in report order.
pub const CHECK_NAMES: [&str; 14] = [
    "conformality",
    "branch_coherence",
    "gauss_modulus",
    "conjugation_symmetry",
    "singular_set",
    "endpoint_gauss",
    "apex_coincidence",
    "cone_directions",
    "nondegeneracy",
    "embedded_neighborhood",
    "periods",
    "mirror_symmetry",
    "graph",
    "horizontal_end",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub basepoint: f64,
    pub gauge: String,
    pub mirror_constant: f64,
    pub branch: String,
    pub direction_convention: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodSummary {
    pub around_zero: [f64; 3],
    pub around_infinity: [f64; 3],
    pub expected_zero: [f64; 3],
    pub expected_infinity: [f64; 3],
    pub quadrature_error_zero: f64,
    pub quadrature_error_infinity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshSummary {
    pub vertices: usize,
    pub triangles: usize,
    pub cone_vertices: usize,
    pub copies: usize,
    pub x2_extent: [f64; 2],
    pub weld_residual: f64,
    pub samples: usize,
    pub quadrature_error: f64,
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub params: SurfaceParams,
    /// The parameters as given, when the horizontal-end requirement changed them.
    pub input_params: Option<SurfaceParams>,
    pub tolerances: Tolerances,
    pub quadrature: QuadratureConfig,
    pub grid: GridSpec,
    pub seed: u64,
    pub conventions: Conventions,
    pub checks: Vec<CheckResult>,
    pub cones: Vec<ConeReport>,
    pub periods: Option<PeriodSummary>,
    pub graph: Option<GraphCheckReport>,
    pub mesh: Option<MeshSummary>,
    pub end: HorizontalEndOutcome,
    pub passed: bool,
    /// The only field that varies between identical runs.
    pub generated_at_unix: u64,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Quasi-random regular points in both half-planes, away from the branch
/// points and the origin.
fn random_regular_points(params: &SurfaceParams, count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (
        (0.2 * params.inner_radius()).ln(),
        (5.0 * params.outer_radius()).ln(),
    );
    let keep_out = patch_radius(params);
    let branch: Vec<f64> = params.branch_points().collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = Complex64::from_polar(rng.gen_range(lo..hi).exp(), rng.gen_range(-PI..PI));
        if z.im.abs() < 1e-9 || branch.iter().any(|&b| (z - b).norm() < keep_out) {
            continue;
        }
        out.push(z);
    }
    out
}

fn max_abs_diff(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
}

fn algebraic_checks(params: &SurfaceParams, tol: &Tolerances, seed: u64) -> Vec<CheckResult> {
    let pts = random_regular_points(params, 1000, seed);
    let mut conf: f64 = 0.0;
    let mut coh: f64 = 0.0;
    let mut min_re = f64::INFINITY;
    let mut min_g = f64::INFINITY;
    let mut conj: f64 = 0.0;
    let mut err = None;
    for &z in &pts {
        match params.phi(z) {
            Ok(phi) => conf = conf.max(phi.conformality_residual().norm() / phi.norm_sqr()),
            Err(e) => err = Some(e),
        }
        if let (Extended::Finite(w), Extended::Finite(w2)) =
            (params.branch_w(z).w, params.w_squared(z))
        {
            coh = coh.max((w * w - w2).norm() / w2.norm().max(f64::MIN_POSITIVE));
            min_re = min_re.min(w.re);
            if let Extended::Finite(wc) = params.branch_w(z.conj()).w {
                conj = conj.max((wc - w.conj()).norm() / w.norm());
            }
        }
        if z.im > 0.0 {
            min_g = min_g.min(params.gauss(z).g.norm());
        }
    }
    let conformality = match err {
        Some(e) => CheckResult::failed("conformality", tol.algebraic, &e),
        None => CheckResult::new(
            "conformality",
            conf,
            tol.algebraic,
            conf <= tol.algebraic,
            json!({ "points": pts.len(), "measure": "|phi1^2 + phi2^2 - phi3^2| / sum |phi_k|^2" }),
        ),
    };
    vec![
        conformality,
        CheckResult::new(
            "branch_coherence",
            coh,
            tol.algebraic,
            coh <= tol.algebraic && min_re >= 0.0,
            json!({ "points": pts.len(), "min_re_w": min_re }),
        ),
        CheckResult::new(
            "gauss_modulus",
            1.0 - min_g,
            tol.algebraic,
            min_g >= 1.0 - tol.algebraic,
            json!({ "min_abs_g_upper_half_plane": min_g }),
        ),
        CheckResult::new(
            "conjugation_symmetry",
            conj,
            tol.algebraic,
            conj <= tol.algebraic,
            json!({ "identity": "w(conj z) = conj w(z)" }),
        ),
    ]
}

fn apex_check(surface: &Surface, tol: &Tolerances) -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut per = Vec::new();
    for c in singular_set(surface.params()) {
        let res: Result<(f64, f64)> = (|| {
            let cfg = ApexConfig::default();
            let above = surface.apex(c.ordinal, Approach::Above, &cfg)?.position;
            let mut sides: f64 = 0.0;
            for a in Approach::ALL {
                let p = surface.apex(c.ordinal, a, &cfg)?.position;
                sides = sides.max(max_abs_diff(&p, &above));
            }
            let mut along: f64 = 0.0;
            for k in 1..=5 {
                let x = c.lo + c.length() * k as f64 / 6.0;
                let p = surface.immersion(Complex64::new(x, 0.0))?;
                along = along.max(max_abs_diff(&p, &above));
            }
            Ok((sides, along))
        })();
        match res {
            Ok((sides, along)) => {
                worst = worst.max(sides).max(along);
                per.push(
                    json!({ "interval": c.label(), "four_sides": sides, "along_interval": along }),
                );
            }
            Err(e) => return CheckResult::failed("apex_coincidence", tol.mesh, &e),
        }
    }
    CheckResult::new(
        "apex_coincidence",
        worst,
        tol.mesh,
        worst <= tol.mesh,
        Value::Array(per),
    )
}

fn cone_checks(cones: &[ConeReport]) -> Vec<CheckResult> {
    let directions: Vec<Value> = cones
        .iter()
        .map(|c| {
            json!({
                "interval": c.component.label(),
                "numeric": c.direction,
                "predicted": c.predicted,
                "alternate": c.alternate,
                "matches_predicted": c.matches_predicted,
                "matches_alternate": c.matches_alternate,
            })
        })
        .collect();
    let mismatches = cones.iter().filter(|c| !c.matches_predicted).count();
    let min_dg = cones
        .iter()
        .flat_map(|c| c.dg_over_gdh_samples.iter().map(|v| v.abs()))
        .fold(f64::INFINITY, f64::min);
    vec![
        CheckResult::new(
            "endpoint_gauss",
            cones.iter().filter(|c| !c.endpoint_gauss_ok).count() as f64,
            1e-8,
            cones.iter().all(|c| c.endpoint_gauss_ok),
            Value::Array(
                cones
                    .iter()
                    .map(|c| json!({ "interval": c.component.label(), "g": c.endpoint_gauss }))
                    .collect(),
            ),
        ),
        CheckResult::new(
            "cone_directions",
            mismatches as f64,
            0.0,
            mismatches == 0,
            Value::Array(directions),
        ),
        CheckResult::new(
            "nondegeneracy",
            min_dg,
            crate::singular::NONDEGENERACY_THRESHOLD,
            cones.iter().all(|c| c.nondegenerate),
            json!({ "min_abs_dg_over_g_dh": min_dg }),
        ),
        CheckResult::new(
            "embedded_neighborhood",
            cones
                .iter()
                .filter(|c| !c.embedded_neighborhood_check)
                .count() as f64,
            0.0,
            cones.iter().all(|c| c.embedded_neighborhood_check),
            json!({ "kind": "finite proxy: projected loop images are simple and wind once around the apex" }),
        ),
    ]
}

fn period_check(surface: &Surface, tol: &Tolerances) -> (CheckResult, Option<PeriodSummary>) {
    let res: Result<PeriodSummary> = (|| {
        let z = surface.loop_period(End::Zero)?;
        let inf = surface.loop_period(End::Infinity)?;
        Ok(PeriodSummary {
            around_zero: z.real(),
            around_infinity: inf.real(),
            expected_zero: [0.0, -2.0 * PI, 0.0],
            expected_infinity: [0.0, 2.0 * PI, 0.0],
            quadrature_error_zero: z.error,
            quadrature_error_infinity: inf.error,
        })
    })();
    match res {
        Ok(p) => {
            let dev = max_abs_diff(&p.around_zero, &p.expected_zero)
                .max(max_abs_diff(&p.around_infinity, &p.expected_infinity));
            let check = CheckResult::new(
                "periods",
                dev,
                tol.integrated,
                dev <= tol.integrated,
                json!({}),
            );
            (check, Some(p))
        }
        Err(e) => (CheckResult::failed("periods", tol.integrated, &e), None),
    }
}

fn mirror_check(surface: &Surface, tol: &Tolerances, seed: u64) -> CheckResult {
    let pts = random_regular_points(surface.params(), 20, seed ^ 0x6d69_7272);
    let mut worst: f64 = 0.0;
    for z in pts.into_iter().filter(|z| z.im > 0.0).take(8) {
        let r = (|| -> Result<f64> {
            let up = surface.immersion(z)?;
            let down = surface.immersion(z.conj())?;
            Ok(max_abs_diff(&[up[0], -up[1], up[2]], &down))
        })();
        match r {
            Ok(d) => worst = worst.max(d),
            Err(e) => return CheckResult::failed("mirror_symmetry", tol.integrated, &e),
        }
    }
    CheckResult::new(
        "mirror_symmetry",
        worst,
        tol.integrated,
        worst <= tol.integrated,
        json!({ "identity": "f(conj z) = (f1, -f2, f3)(z)" }),
    )
}

/// Largest `|f_2 + theta|` over the samples (`theta` the sample angle).
pub fn second_coordinate_residual(samples: &FundamentalSamples) -> f64 {
    samples
        .grid
        .iter()
        .map(|s| (s.position[1] + s.theta).abs())
        .fold(0.0, f64::max)
}

fn graph_checks(
    surface: &Surface,
    grid: &GridSpec,
    copies: usize,
    tol: &Tolerances,
) -> (
    CheckResult,
    Option<GraphCheckReport>,
    Option<(GraphMesh, MeshSummary)>,
) {
    match build_mesh(surface, grid, copies) {
        Ok((samples, mesh)) => {
            // The graph test runs on one fundamental copy.
            let single = if copies == 0 {
                None
            } else {
                Some(crate::mesh::assemble(&samples, 0))
            };
            let report = match &single {
                Some(Ok(m)) => graph_check(m),
                Some(Err(e)) => return (CheckResult::failed("graph", tol.mesh, e), None, None),
                None => graph_check(&mesh),
            };
            let f2 = second_coordinate_residual(&samples);
            let (lo, hi) = mesh.x2_extent();
            let summary = MeshSummary {
                vertices: mesh.vertices.len(),
                triangles: mesh.triangles.len(),
                cone_vertices: mesh.cone_vertices.len(),
                copies,
                x2_extent: [lo, hi],
                weld_residual: mesh.weld_residual,
                samples: samples.len(),
                quadrature_error: samples.error_estimate,
                output: None,
            };
            let passed =
                report.passed && f2 <= tol.second_coordinate && mesh.weld_residual <= tol.mesh;
            let check = CheckResult::new(
                "graph",
                report.min_normal_z,
                0.0,
                passed,
                json!({
                    "second_coordinate_residual": f2,
                    "second_coordinate_tolerance": tol.second_coordinate,
                    "weld_residual": mesh.weld_residual,
                    "overlapping_pairs": report.overlapping_pairs,
                    "nonpositive_area_triangles": report.nonpositive_area_triangles,
                    "positive_row_monotone": report.positive_row_monotone,
                    "negative_row_monotone": report.negative_row_monotone,
                }),
            );
            (check, Some(report), Some((mesh, summary)))
        }
        Err(e) => (CheckResult::failed("graph", tol.mesh, &e), None, None),
    }
}

/// Runs every check on the configured surface. Configuration problems are
/// returned as errors; failing checks are recorded in the report.
pub fn run_verification(
    config: &RunConfig,
    options: &RunOptions,
    command: &str,
) -> Result<(VerificationReport, Option<GraphMesh>)> {
    let tol = config.resolved_tolerances(options.tol_level);
    let (params, end) = prepare_params(&config.params, options.require_horizontal_ends);
    let grid = config.resolved_grid(&params, options.grid_counts);
    grid.validate(&params)?;
    let surface = config.surface(params.clone())?;

    let mut checks = algebraic_checks(&params, &tol, config.seed);
    checks.push(match verify_singular_set(&params, 1000, config.seed) {
        Ok(s) => CheckResult::new(
            "singular_set",
            s.max_on_set_deviation,
            1e-10,
            true,
            serde_json::to_value(s)?,
        ),
        Err(e) => CheckResult::failed("singular_set", 1e-10, &e),
    });

    let cones = match classify_all(&surface) {
        Ok(c) => c,
        Err(e) => {
            for name in [
                "endpoint_gauss",
                "cone_directions",
                "nondegeneracy",
                "embedded_neighborhood",
            ] {
                checks.push(CheckResult::failed(name, 0.0, &e));
            }
            Vec::new()
        }
    };
    let cones_ok = !cones.is_empty();
    checks.push(apex_check(&surface, &tol));
    if cones_ok {
        checks.extend(cone_checks(&cones));
    }
    let (periods_check, periods) = period_check(&surface, &tol);
    checks.push(periods_check);
    checks.push(mirror_check(&surface, &tol, config.seed));
    let (graph_result, graph, mesh) = graph_checks(&surface, &grid, options.copies, &tol);
    checks.push(graph_result);
    checks.push(CheckResult::new(
        "horizontal_end",
        (end.result.w0 - 1.0).abs(),
        tol.algebraic,
        !end.required || (end.failure.is_none() && (end.result.w0 - 1.0).abs() <= tol.algebraic),
        serde_json::to_value(&end)?,
    ));
    checks.sort_by_key(|c| CHECK_NAMES.iter().position(|n| *n == c.name));

    let passed = checks.iter().all(|c| c.passed);
    let (mesh, mesh_summary) = match mesh {
        Some((m, s)) => (Some(m), Some(s)),
        None => (None, None),
    };
    let report = VerificationReport {
        tool: "maxgraph".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        input_params: (params != config.params).then(|| config.params.clone()),
        params,
        tolerances: tol,
        quadrature: *surface.quadrature(),
        grid,
        seed: config.seed,
        conventions: Conventions {
            basepoint: surface.basepoint(),
            gauge: "f(x0) = 0 at the basepoint x0".into(),
            mirror_constant: 0.0,
            branch: "Re w >= 0, ties broken by Im w >= 0; real-axis values are limits from above"
                .into(),
            direction_convention: "alpha_j = -1 => up, beta_k = +1 => up".into(),
        },
        checks,
        cones,
        periods,
        graph,
        mesh: mesh_summary,
        end,
        passed,
        generated_at_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
    };
    Ok((report, mesh))
}

/// Measured period data of the minimal counterparts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalReport {
    pub tool: String,
    pub version: String,
    pub params: SurfaceParams,
    /// Parameters after `b_{2n}` normalization, when it applies.
    pub normalized_params: Option<SurfaceParams>,
    pub normalization_note: Option<String>,
    pub genus: usize,
    pub quotient_ends: usize,
    pub gauss_at_zero: [f64; 2],
    pub lattices: Vec<PeriodLattice>,
    pub contractible_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub generated_at_unix: u64,
}

pub fn run_minimal(config: &RunConfig, level: Option<TolLevel>) -> Result<MinimalReport> {
    let tol = config.resolved_tolerances(level);
    let (params, normalized_params, normalization_note) = if config.params.n() == 0 {
        (
            config.params.clone(),
            None,
            Some("n = 0: no b_{2n} to normalize".to_string()),
        )
    } else {
        match b2n_normalize(&config.params) {
            Ok(p) => (p.clone(), Some(p), None),
            Err(e) => (config.params.clone(), None, Some(e.to_string())),
        }
    };
    let mut lattices = Vec::new();
    let mut contractible: f64 = 0.0;
    for orientation in [Orientation::VerticalEnds, Orientation::HorizontalEnds] {
        let lattice = measure_lattice(&MinimalData::new(params.clone(), orientation))?;
        for l in lattice
            .measured_loops
            .iter()
            .filter(|l| l.description.starts_with("contractible"))
        {
            contractible = contractible.max(l.vector.iter().fold(0.0, |m, v| m.max(v.abs())));
        }
        lattices.push(lattice);
    }
    let g0 = match MinimalData::new(params.clone(), Orientation::VerticalEnds)
        .gauss(Complex64::new(0.0, 0.0))
    {
        Extended::Finite(g) => [g.re, g.im],
        Extended::Infinite => [f64::INFINITY, 0.0],
    };
    let data = MinimalData::new(params.clone(), Orientation::VerticalEnds);
    Ok(MinimalReport {
        tool: "maxgraph".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        genus: data.genus(),
        quotient_ends: data.quotient_ends(),
        params: config.params.clone(),
        normalized_params,
        normalization_note,
        gauss_at_zero: g0,
        lattices,
        contractible_residual: contractible,
        tolerance: tol.integrated,
        passed: contractible <= tol.integrated,
        generated_at_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
    })
}
