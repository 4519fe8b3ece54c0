//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use maxgraph::catalog::{catalog, raw_configs, ConeConfig};
use maxgraph::integrator::{ApexConfig, Approach, End, Surface};
use maxgraph::mesh::{build_mesh, export_obj, graph_check, GridSpec};
use maxgraph::minimal::{b2n_normalize, default_loops, measure_period, MinimalData, Orientation};
use maxgraph::report::{run_verification, second_coordinate_residual, RunConfig, RunOptions};
use maxgraph::singular::{classify_all, nondegeneracy, singular_set, verify_singular_set};
use maxgraph::weierstrass::{Extended, FreeCoordinate};
use maxgraph::{Error, SurfaceParams};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn max3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
}

fn random_params(rng: &mut ChaCha8Rng, m: usize, n: usize) -> SurfaceParams {
    let mut x = rng.gen_range(0.3..2.0);
    let mut a = Vec::new();
    for _ in 0..2 * m {
        a.push(x);
        x += rng.gen_range(0.2..1.5);
    }
    let mut y = -rng.gen_range(0.3..2.0);
    let mut b = Vec::new();
    for _ in 0..2 * n {
        b.push(y);
        y -= rng.gen_range(0.2..1.5);
    }
    let sign = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1 } else { -1 };
    let alpha = (0..m).map(|_| sign(rng)).collect();
    let beta = (0..n).map(|_| sign(rng)).collect();
    SurfaceParams::new(a, b, alpha, beta).unwrap()
}

/// Ten random configurations covering the types (1,0) through (3,2).
fn tested_configs() -> Vec<SurfaceParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let types = [
        (1, 0),
        (1, 1),
        (2, 0),
        (2, 1),
        (2, 2),
        (3, 0),
        (3, 1),
        (3, 2),
        (2, 1),
        (3, 2),
    ];
    types
        .iter()
        .map(|&(m, n)| random_params(&mut rng, m, n))
        .collect()
}

/// Canonical classes with at most four cones, instantiated at unit spacing.
fn class_configs() -> Vec<(ConeConfig, SurfaceParams)> {
    (1..=4)
        .flat_map(|k| catalog(k).types)
        .flat_map(|t| t.classes)
        .map(|c| {
            let p = c.config.instantiate(1.0).unwrap();
            (c.config, p)
        })
        .collect()
}

fn criterion_1(configs: &[SurfaceParams]) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for p in configs {
        let s = Surface::new(p.clone());
        let (Ok(z), Ok(inf)) = (s.loop_period(End::Zero), s.loop_period(End::Infinity)) else {
            return outcome(false, "loop integration failed");
        };
        worst = worst
            .max(max3(&z.real(), &[0.0, -2.0 * PI, 0.0]))
            .max(max3(&inf.real(), &[0.0, 2.0 * PI, 0.0]));
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-8 && t < Duration::from_secs(5),
        format!(
            "max deviation {worst:.2e} (tol 1e-8), {} configs in {t:.2?} (limit 5 s)",
            configs.len()
        ),
    )
}

fn criterion_2(configs: &[SurfaceParams]) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for p in configs {
        let branch: Vec<f64> = p.branch_points().collect();
        let (lo, hi) = ((0.2 * p.inner_radius()).ln(), (5.0 * p.outer_radius()).ln());
        let mut k = 0;
        while k < 1000 {
            let z = C::from_polar(rng.gen_range(lo..hi).exp(), rng.gen_range(-PI..PI));
            if z.im.abs() < 1e-9 || branch.iter().any(|&b| (z - b).norm() < 1e-6) {
                continue;
            }
            let phi = p.phi(z).unwrap();
            worst = worst.max(phi.conformality_residual().norm() / phi.norm_sqr());
            k += 1;
            count += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-12 && t < Duration::from_secs(1),
        format!("max relative residual {worst:.2e} (tol 1e-12) at {count} points in {t:.2?} (limit 1 s)"),
    )
}

fn criterion_3(configs: &[SurfaceParams]) -> Outcome {
    let mut mismatches = 0;
    let mut off_hits = 0;
    for (k, p) in configs.iter().enumerate() {
        let comps = singular_set(p);
        let inside = |x: f64| comps.iter().any(|c| c.lo <= x && x <= c.hi);
        let r = 2.0 * p.outer_radius();
        let n = 20_000;
        let mut xs: Vec<f64> = (0..=n)
            .map(|i| -r + 2.0 * r * i as f64 / n as f64)
            .collect();
        xs.extend(p.branch_points());
        for x in xs {
            if x == 0.0 {
                continue;
            }
            let on = (p.gauss(C::new(x, 0.0)).g.norm() - 1.0).abs() <= 1e-10;
            if on != inside(x) {
                mismatches += 1;
            }
        }
        if verify_singular_set(p, 1000, 100 + k as u64).is_err() {
            off_hits += 1;
        }
    }
    outcome(
        mismatches == 0 && off_hits == 0,
        format!("{mismatches} real-axis locus mismatches, {off_hits} configs with off-set hits (1000 samples each)"),
    )
}

fn criterion_4(configs: &[SurfaceParams]) -> Outcome {
    let mut sides: f64 = 0.0;
    let mut along: f64 = 0.0;
    let mut intervals = 0;
    for p in configs {
        let s = Surface::new(p.clone());
        for c in singular_set(p) {
            let cfg = ApexConfig::default();
            let Ok(above) = s.apex(c.ordinal, Approach::Above, &cfg) else {
                return outcome(false, format!("apex extrapolation failed on {}", c.label()));
            };
            for a in Approach::ALL {
                match s.apex(c.ordinal, a, &cfg) {
                    Ok(e) => sides = sides.max(max3(&e.position, &above.position)),
                    Err(e) => return outcome(false, format!("{a:?} approach failed: {e}")),
                }
            }
            for k in 1..=9 {
                let x = c.lo + c.length() * k as f64 / 10.0;
                let f = s.immersion(C::new(x, 0.0)).unwrap();
                along = along.max(max3(&f, &above.position));
            }
            intervals += 1;
        }
    }
    outcome(
        sides <= 1e-6 && along <= 1e-6,
        format!("{intervals} intervals: four-side spread {sides:.2e}, variation along interval {along:.2e} (tol 1e-6)"),
    )
}

fn criterion_5() -> Outcome {
    let mut cones = 0;
    let mut mismatch_predicted = 0;
    let mut match_alternate = 0;
    let mut configs = 0;
    for total in 1..=4 {
        for (m, n) in maxgraph::catalog::enumerate_types(total) {
            for c in raw_configs(m, n) {
                let p = c.instantiate(1.0).unwrap();
                let reports = match classify_all(&Surface::new(p)) {
                    Ok(r) => r,
                    Err(e) => return outcome(false, format!("classification failed: {e}")),
                };
                for r in reports {
                    cones += 1;
                    mismatch_predicted += usize::from(!r.matches_predicted);
                    match_alternate += usize::from(r.matches_alternate);
                }
                configs += 1;
            }
        }
    }
    outcome(
        mismatch_predicted == 0,
        format!(
            "{configs} direction configurations, {cones} cones: {mismatch_predicted} disagree with alpha=-1/beta=+1 => up, {match_alternate} agree with the opposite convention"
        ),
    )
}

fn criterion_6() -> Outcome {
    let c4 = catalog(4);
    let c9 = catalog(9);
    let ok = c4.counts["4,0"] == 6
        && c4.counts["3,1"] == 6
        && c4.counts["2,2"] == 5
        && c4.total == 17
        && c9.types.len() == 5;
    outcome(
        ok,
        format!(
            "four cones: (4,0)={} (3,1)={} (2,2)={} total={}; nine cones: {} types",
            c4.counts["4,0"],
            c4.counts["3,1"],
            c4.counts["2,2"],
            c4.total,
            c9.types.len()
        ),
    )
}

fn criteria_7_8(classes: &[(ConeConfig, SurfaceParams)]) -> (Outcome, Outcome) {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut f2: f64 = 0.0;
    let mut samples = 0;
    for (config, p) in classes {
        let start = Instant::now();
        let s = Surface::new(p.clone());
        match build_mesh(&s, &GridSpec::default_for(p), 0) {
            Ok((smp, mesh)) => {
                let report = graph_check(&mesh);
                let t = start.elapsed();
                slowest = slowest.max(t);
                if !report.passed || t >= Duration::from_secs(30) {
                    failures.push(format!("{config:?}"));
                }
                f2 = f2.max(second_coordinate_residual(&smp));
                samples += smp.grid.len();
            }
            Err(e) => failures.push(format!("{config:?}: {e}")),
        }
    }
    (
        outcome(
            failures.is_empty(),
            format!(
                "{} classes on the default grid, slowest {slowest:.2?} (limit 30 s){}",
                classes.len(),
                if failures.is_empty() {
                    String::new()
                } else {
                    format!(", failing: {failures:?}")
                }
            ),
        ),
        outcome(
            f2 <= 1e-10,
            format!("max |f2 + Arg z| = {f2:.2e} over {samples} samples (tol 1e-10, c = 0)"),
        ),
    )
}

fn criterion_9() -> Outcome {
    let mixed = SurfaceParams::new(
        vec![1.0, 2.0, 3.0, 4.0],
        vec![-1.0, -2.5],
        vec![1, -1],
        vec![1],
    )
    .unwrap();
    let normalized = mixed
        .default_free_coordinates()
        .into_iter()
        .find_map(|f| mixed.normalize_horizontal_end(f).ok());
    let w0_dev = match &normalized {
        Some(p) => match p.w_squared(C::new(0.0, 0.0)) {
            Extended::Finite(w2) => (w2.sqrt() - 1.0).norm(),
            Extended::Infinite => f64::INFINITY,
        },
        None => f64::INFINITY,
    };
    let mut same = 0;
    let mut infeasible = 0;
    for total in 1..=4 {
        for (m, n) in maxgraph::catalog::enumerate_types(total) {
            for c in raw_configs(m, n) {
                let p = c.instantiate(0.75).unwrap();
                if !p.all_same_direction() {
                    continue;
                }
                same += 1;
                let frees = [FreeCoordinate::A(2 * m)]
                    .into_iter()
                    .chain(p.default_free_coordinates());
                if frees
                    .into_iter()
                    .all(|f| matches!(p.normalize_horizontal_end(f), Err(Error::Infeasible(_))))
                {
                    infeasible += 1;
                }
            }
        }
    }
    outcome(
        w0_dev <= 1e-12 && same > 0 && infeasible == same,
        format!("mixed (2,1): |w(0) - 1| = {w0_dev:.2e} (tol 1e-12); Infeasible on {infeasible}/{same} all-same-direction instances"),
    )
}

fn criterion_10(configs: &[SurfaceParams]) -> Outcome {
    let mut g0: f64 = 0.0;
    let mut normalized = 0;
    for p in configs.iter().filter(|p| p.n() > 0) {
        if let Ok(q) = b2n_normalize(p) {
            let d = MinimalData::new(q, Orientation::VerticalEnds);
            if let Extended::Finite(g) = d.gauss(C::new(0.0, 0.0)) {
                g0 = g0.max((g - 1.0).norm());
            } else {
                g0 = f64::INFINITY;
            }
            normalized += 1;
        }
    }
    let mut ident: f64 = 0.0;
    let i = C::new(0.0, 1.0);
    for p in configs {
        let d = MinimalData::new(p.clone(), Orientation::HorizontalEnds);
        for k in 0..100 {
            let z = C::new(
                -3.0 + 0.061 * k as f64 + 0.0137,
                2.0 - 0.043 * k as f64 + 0.001,
            );
            let (Ok(om), Ok(phi)) = (d.omega(z), p.phi(z)) else {
                continue;
            };
            let scale = om.iter().map(|c| c.norm()).fold(1.0, f64::max);
            let r = (phi.phi1 - i * om[0])
                .norm()
                .max((phi.phi2 - i * om[1]).norm())
                .max((phi.phi3 - om[2]).norm());
            ident = ident.max(r / scale);
        }
    }
    let mut contractible: f64 = 0.0;
    for p in configs {
        for orientation in [Orientation::VerticalEnds, Orientation::HorizontalEnds] {
            let d = MinimalData::new(p.clone(), orientation);
            for (desc, path) in default_loops(p) {
                if desc.starts_with("contractible") {
                    match measure_period(&path, &d) {
                        Ok((v, _, _)) => {
                            contractible =
                                contractible.max(v.iter().fold(0.0, |m, x| m.max(x.abs())))
                        }
                        Err(_) => contractible = f64::INFINITY,
                    }
                }
            }
        }
    }
    outcome(
        normalized > 0 && g0 <= 1e-12 && ident <= 1e-14 && contractible <= 1e-8,
        format!(
            "|G(0) - 1| = {g0:.2e} on {normalized} normalized configs (tol 1e-12); rotated-triple identity {ident:.2e} (tol 1e-14); contractible loops {contractible:.2e} (tol 1e-8)"
        ),
    )
}

fn criterion_11(configs: &[SurfaceParams], classes: &[(ConeConfig, SurfaceParams)]) -> Outcome {
    let mut min_abs = f64::INFINITY;
    let mut failures = 0;
    let mut intervals = 0;
    for p in configs.iter().chain(classes.iter().map(|(_, p)| p)) {
        for c in singular_set(p) {
            intervals += 1;
            match nondegeneracy(&c, p) {
                Ok(v) => min_abs = v.iter().fold(min_abs, |m, x| m.min(x.abs())),
                Err(_) => failures += 1,
            }
        }
    }
    outcome(
        failures == 0,
        format!("{intervals} intervals, {failures} degenerate; min |dG/(G dh)| = {min_abs:.3e}"),
    )
}

fn nine_cone(dir: &std::path::Path) -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (m, n) in [(8, 1), (7, 2)] {
        let classes = maxgraph::catalog::classes(m, n);
        for pick in [0, classes.len() - 1] {
            let config = &classes[pick].config;
            let p = config.instantiate(1.0).unwrap();
            let start = Instant::now();
            let result = run_verification(&RunConfig::new(p), &RunOptions::default(), "acceptance");
            match result {
                Ok((report, Some(mesh))) => {
                    let path = dir.join(format!("nine_{m}_{n}_{pick}.obj"));
                    let tags = export_obj(&mesh, &path)
                        .ok()
                        .and_then(|_| std::fs::read_to_string(&path).ok())
                        .map_or(0, |t| {
                            t.lines().filter(|l| l.starts_with("# cone ")).count()
                        });
                    let failed: Vec<&str> = report
                        .checks
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| c.name.as_str())
                        .collect();
                    ok &= report.passed && tags == 9;
                    lines.push(format!(
                        "({m},{n}) class {}: {} cone tags, {} in {:.2?}{}",
                        pick + 1,
                        tags,
                        if report.passed { "verified" } else { "FAILED" },
                        start.elapsed(),
                        if failed.is_empty() {
                            String::new()
                        } else {
                            format!(" {failed:?}")
                        }
                    ));
                }
                Ok((_, None)) => {
                    ok = false;
                    lines.push(format!("({m},{n}) class {}: mesh not built", pick + 1));
                }
                Err(e) => {
                    ok = false;
                    lines.push(format!("({m},{n}) class {}: {e}", pick + 1));
                }
            }
        }
    }
    outcome(ok, lines.join("; "))
}

fn main() {
    let configs = tested_configs();
    let classes = class_configs();
    let dir = tempfile::tempdir().expect("temporary directory");

    let (c7, c8) = criteria_7_8(&classes);
    let results: Vec<(&str, &str, Outcome)> = vec![
        ("1", "period reproduction", criterion_1(&configs)),
        ("2", "conformality", criterion_2(&configs)),
        ("3", "singular-set identity", criterion_3(&configs)),
        ("4", "cone-point property", criterion_4(&configs)),
        ("5", "direction table", criterion_5()),
        ("6", "enumeration counts", criterion_6()),
        ("7", "graph property", c7),
        ("8", "f2 identity", c8),
        ("9", "horizontal-end normalization", criterion_9()),
        ("10", "minimal counterpart", criterion_10(&configs)),
        ("11", "nondegeneracy", criterion_11(&configs, &classes)),
        (
            "9-cone",
            "(8,1) and (7,2) build, verify, export",
            nine_cone(dir.path()),
        ),
    ];

    let mut all = true;
    for (id, name, o) in &results {
        all &= o.passed;
        println!(
            "criterion {id:<6} {:<4} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {}", if all { "PASS" } else { "FAIL" });
    if !all {
        std::process::exit(1);
    }
}
