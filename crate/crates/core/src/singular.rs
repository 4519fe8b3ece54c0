//! The singular set `{|G| = 1}`, the cone vertices it collapses to, and the
//! checks that make each component a non-degenerate cone-like point.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{ApexConfig, Approach, PathSpec, Surface};
use crate::weierstrass::{Axis, Direction, Extended, SurfaceParams};

/// One interval of the singular set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularComponent {
    pub lo: f64,
    pub hi: f64,
    pub axis: Axis,
    /// 1-based `j` (positive axis) or `k` (negative axis).
    pub index: usize,
    /// Position in the combined list, positive intervals first.
    pub ordinal: usize,
    /// Exponent `alpha_j` or `beta_k` of the factor owning the interval.
    pub sign: i8,
}

impl SingularComponent {
    pub fn label(&self) -> String {
        match self.axis {
            Axis::Positive => format!("[a_{}, a_{}]", 2 * self.index - 1, 2 * self.index),
            Axis::Negative => format!("[b_{}, b_{}]", 2 * self.index, 2 * self.index - 1),
        }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Expected `G` at `(lo, hi)`: `(-alpha, alpha)` on the positive axis and
    /// `(-beta, beta)` on the negative axis, where `lo = b_{2k}`.
    pub fn expected_endpoint_gauss(&self) -> (f64, f64) {
        let s = self.sign as f64;
        (-s, s)
    }
}

/// The `m + n` closed singular intervals, positive axis first.
pub fn singular_set(params: &SurfaceParams) -> Vec<SingularComponent> {
    let a = params.a();
    let b = params.b();
    let mut out = Vec::with_capacity(params.m() + params.n());
    for j in 0..params.m() {
        out.push(SingularComponent {
            lo: a[2 * j],
            hi: a[2 * j + 1],
            axis: Axis::Positive,
            index: j + 1,
            ordinal: j,
            sign: params.alpha()[j],
        });
    }
    for k in 0..params.n() {
        out.push(SingularComponent {
            lo: b[2 * k + 1],
            hi: b[2 * k],
            axis: Axis::Negative,
            index: k + 1,
            ordinal: params.m() + k,
            sign: params.beta()[k],
        });
    }
    out
}

/// Outcome of comparing the closed-form singular set with `|G|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularSetCheck {
    pub on_set_samples: usize,
    pub off_set_samples: usize,
    /// Largest `||G| - 1|` over interval samples.
    pub max_on_set_deviation: f64,
    /// Smallest `|G| - 1` over the off-set samples.
    pub min_off_set_margin: f64,
}

/// Samples `|G|` on every interval and at `off_samples` seeded random points
/// away from it; any disagreement with the closed form is an error.
pub fn verify_singular_set(
    params: &SurfaceParams,
    off_samples: usize,
    seed: u64,
) -> Result<SingularSetCheck> {
    const ON_TOL: f64 = 1e-10;
    let comps = singular_set(params);
    let mut max_dev: f64 = 0.0;
    let mut on = 0;
    for c in &comps {
        for k in 1..=32 {
            let x = c.lo + c.length() * k as f64 / 33.0;
            let g = params.gauss(Complex64::new(x, 0.0)).g;
            let dev = (g.norm() - 1.0).abs();
            max_dev = max_dev.max(dev);
            on += 1;
            if dev > ON_TOL {
                return Err(Error::VerificationFailure(format!(
                    "||G| - 1| = {dev:e} at x = {x} inside {}",
                    c.label()
                )));
            }
        }
    }

    let outer = 2.0 * params.outer_radius();
    let keep_out = 1e-3 * params.min_gap();
    let dist_to_set = |z: Complex64| {
        comps
            .iter()
            .map(|c| {
                let x = z.re.clamp(c.lo, c.hi);
                (z - Complex64::new(x, 0.0)).norm()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_margin = f64::INFINITY;
    let mut off = 0;
    while off < off_samples {
        // Half of the samples on the real axis, where the set lives.
        let z = if off % 2 == 0 {
            Complex64::new(rng.gen_range(-outer..outer), 0.0)
        } else {
            Complex64::new(rng.gen_range(-outer..outer), rng.gen_range(-outer..outer))
        };
        if z.norm() < keep_out || dist_to_set(z) < keep_out {
            continue;
        }
        let margin = params.gauss(z).g.norm() - 1.0;
        min_margin = min_margin.min(margin);
        if margin.is_nan() || margin <= 0.0 {
            return Err(Error::VerificationFailure(format!(
                "|G| - 1 = {margin:e} at z = {z} off the singular set"
            )));
        }
        off += 1;
    }
    Ok(SingularSetCheck {
        on_set_samples: on,
        off_set_samples: off,
        max_on_set_deviation: max_dev,
        min_off_set_margin: min_margin,
    })
}

/// Magnitude below which `dG/(G dh)` counts as vanishing.
pub const NONDEGENERACY_THRESHOLD: f64 = 1e-6;

/// Interior samples of `dG/(G dh)` on the component, as limits from the upper
/// half-plane (real up to rounding; the imaginary part is checked).
pub fn nondegeneracy(component: &SingularComponent, params: &SurfaceParams) -> Result<Vec<f64>> {
    nondegeneracy_at(component, params, &interior_samples(component, 15))
}

pub fn nondegeneracy_at(
    component: &SingularComponent,
    params: &SurfaceParams,
    xs: &[f64],
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        let v = params.dg_over_g_dh(Complex64::new(x, 0.0))?;
        if v.im.abs() > 1e-8 * v.norm() {
            return Err(Error::DegenerateSingularity(format!(
                "dG/(G dh) = {v} is not real at x = {x} on {}",
                component.label()
            )));
        }
        if v.re.abs() < NONDEGENERACY_THRESHOLD {
            return Err(Error::DegenerateSingularity(format!(
                "|dG/(G dh)| = {:e} at x = {x} on {}",
                v.re.abs(),
                component.label()
            )));
        }
        out.push(v.re);
    }
    Ok(out)
}

fn interior_samples(c: &SingularComponent, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| c.lo + c.length() * k as f64 / (n + 1) as f64)
        .collect()
}

/// `G` restricted to the component is injective (sampled arguments strictly
/// monotone) and `dh / G` does not vanish there.
pub fn gauss_injective_and_dh_nonvanishing(
    component: &SingularComponent,
    params: &SurfaceParams,
) -> Result<()> {
    let xs = interior_samples(component, 64);
    let mut args = Vec::with_capacity(xs.len());
    for &x in &xs {
        let z = Complex64::new(x, 0.0);
        let g = match params.gauss(z).g {
            Extended::Finite(g) => g,
            Extended::Infinite => {
                return Err(Error::DegenerateSingularity(format!("G = inf at {x}")))
            }
        };
        let dh = params.dh(z)?;
        if (dh / g).norm() < 1e-12 {
            return Err(Error::DegenerateSingularity(format!(
                "dh/G vanishes at x = {x} on {}",
                component.label()
            )));
        }
        args.push(g.arg());
    }
    let increasing = args.windows(2).all(|w| w[1] > w[0]);
    let decreasing = args.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::DegenerateSingularity(format!(
            "G is not injective on {}",
            component.label()
        )));
    }
    Ok(())
}

/// `G` at the two endpoints (`w = 0` gives `1`, `w = inf` gives `-1`).
pub fn endpoint_gauss(
    component: &SingularComponent,
    params: &SurfaceParams,
) -> (Complex64, Complex64) {
    let g = |x: f64| match params.gauss(Complex64::new(x, 0.0)).g {
        Extended::Finite(g) => g,
        Extended::Infinite => Complex64::new(f64::INFINITY, 0.0),
    };
    (g(component.lo), g(component.hi))
}

/// Everything known about one cone-like singular point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub component: SingularComponent,
    pub apex: [f64; 3],
    /// Direction found numerically from the heights around the apex.
    pub direction: Direction,
    /// Direction under `alpha_j = -1 => up`, `beta_k = +1 => up`.
    pub predicted: Direction,
    /// Direction under the opposite convention.
    pub alternate: Direction,
    pub matches_predicted: bool,
    pub matches_alternate: bool,
    /// `apex_3 - f_3` at the probe points, `[lo - eps, hi + eps]` for each eps.
    pub height_gaps: Vec<[f64; 2]>,
    pub endpoint_gauss: [[f64; 2]; 2],
    pub endpoint_gauss_ok: bool,
    pub dg_over_gdh_samples: Vec<f64>,
    pub nondegenerate: bool,
    /// Finite proxy: the projected images of two loops around the component
    /// are simple and wind once around the projected apex.
    pub embedded_neighborhood_check: bool,
}

/// Offsets used to probe the heights next to a component.
pub fn probe_offsets(params: &SurfaceParams) -> [f64; 2] {
    let e = 1e-2f64.min(0.1 * params.min_gap());
    [e, 0.1 * e]
}

/// Up/down by comparing `apex_3` with `f_3` just outside both endpoints.
pub fn classify_direction(
    surface: &Surface,
    component: &SingularComponent,
    apex: &[f64; 3],
) -> Result<(Direction, Vec<[f64; 2]>)> {
    const TOL: f64 = 1e-9;
    let mut gaps = Vec::new();
    for eps in probe_offsets(surface.params()) {
        let left = surface.immersion(Complex64::new(component.lo - eps, 0.0))?;
        let right = surface.immersion(Complex64::new(component.hi + eps, 0.0))?;
        gaps.push([apex[2] - left[2], apex[2] - right[2]]);
    }
    let all = gaps.iter().flatten();
    if all.clone().all(|&d| d > TOL) {
        Ok((Direction::Up, gaps))
    } else if all.clone().all(|&d| d < -TOL) {
        Ok((Direction::Down, gaps))
    } else {
        Err(Error::AmbiguousDirection(format!(
            "height differences {gaps:?} around {}",
            component.label()
        )))
    }
}

pub fn classify_cone(surface: &Surface, component: &SingularComponent) -> Result<ConeReport> {
    let params = surface.params();
    let apex = surface
        .apex(component.ordinal, Approach::Above, &ApexConfig::default())?
        .position;
    let (direction, height_gaps) = classify_direction(surface, component, &apex)?;
    let predicted = params.predicted_direction(component.ordinal);
    let alternate = params.alternate_direction(component.ordinal);

    let (g_lo, g_hi) = endpoint_gauss(component, params);
    let (e_lo, e_hi) = component.expected_endpoint_gauss();
    let endpoint_gauss_ok = (g_lo - e_lo).norm() <= 1e-8 && (g_hi - e_hi).norm() <= 1e-8;

    let (dg_over_gdh_samples, nondegenerate) = match nondegeneracy(component, params) {
        Ok(v) => (
            v,
            gauss_injective_and_dh_nonvanishing(component, params).is_ok(),
        ),
        Err(Error::DegenerateSingularity(_)) => {
            let xs = interior_samples(component, 15);
            let v = xs
                .iter()
                .filter_map(|&x| params.dg_over_g_dh(Complex64::new(x, 0.0)).ok())
                .map(|v| v.re)
                .collect();
            (v, false)
        }
        Err(e) => return Err(e),
    };
    let embedded_neighborhood_check = embedded_neighborhood(surface, component, &apex)?;

    Ok(ConeReport {
        component: *component,
        apex,
        direction,
        predicted,
        alternate,
        matches_predicted: direction == predicted,
        matches_alternate: direction == alternate,
        height_gaps,
        endpoint_gauss: [[g_lo.re, g_lo.im], [g_hi.re, g_hi.im]],
        endpoint_gauss_ok,
        dg_over_gdh_samples,
        nondegenerate,
        embedded_neighborhood_check,
    })
}

/// Reports for every component, computed in parallel.
pub fn classify_all(surface: &Surface) -> Result<Vec<ConeReport>> {
    singular_set(surface.params())
        .par_iter()
        .map(|c| classify_cone(surface, c))
        .collect()
}

/// Images of two ellipses around the component, projected to the
/// `x1 x2`-plane, must be simple closed polygons winding once around the
/// projected apex.
pub fn embedded_neighborhood(
    surface: &Surface,
    component: &SingularComponent,
    apex: &[f64; 3],
) -> Result<bool> {
    let params = surface.params();
    let delta = 0.25 * component.length().min(params.min_gap());
    for scale in [1.0, 0.25] {
        let d = delta * scale;
        let a = 0.5 * component.length() + d;
        let b = 0.5 * a;
        let mid = component.midpoint();
        const N: usize = 64;
        let pts: Vec<Complex64> = (0..=N)
            .map(|k| {
                let t = std::f64::consts::PI * 2.0 * k as f64 / N as f64;
                if k == 0 || k == N {
                    Complex64::new(mid + a, 0.0)
                } else if 2 * k == N {
                    Complex64::new(mid - a, 0.0)
                } else {
                    Complex64::new(mid + a * t.cos(), b * t.sin())
                }
            })
            .collect();
        let mut image = Vec::with_capacity(N + 1);
        let mut f = surface.immersion(pts[0])?;
        image.push([f[0], f[1]]);
        for w in pts.windows(2) {
            let step = surface.integrate_path(&PathSpec::polyline(w))?.real();
            for c in 0..3 {
                f[c] += step[c];
            }
            image.push([f[0], f[1]]);
        }
        let closure =
            ((image[N][0] - image[0][0]).powi(2) + (image[N][1] - image[0][1]).powi(2)).sqrt();
        if closure > 1e-8 {
            return Ok(false);
        }
        image.pop();
        if !polygon_is_simple(&image) || winding_number(&image, [apex[0], apex[1]]).abs() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// No two non-adjacent edges of the closed polygon intersect.
pub fn polygon_is_simple(poly: &[[f64; 2]]) -> bool {
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(a, b, poly[j], poly[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

pub fn winding_number(poly: &[[f64; 2]], p: [f64; 2]) -> i32 {
    let n = poly.len();
    let mut wn = 0;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if a[1] <= p[1] {
            if b[1] > p[1] && cross(a, b, p) > 0.0 {
                wn += 1;
            }
        } else if b[1] <= p[1] && cross(a, b, p) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Stereographic projection `(x1 + i x2) / (1 - x3)` of the upper sheet of
/// the hyperboloid `x1^2 + x2^2 - x3^2 = -1`.
pub fn stereographic(x: [f64; 3]) -> Result<Extended> {
    let q = x[0] * x[0] + x[1] * x[1] - x[2] * x[2];
    let scale = x.iter().fold(1.0f64, |m, v| m.max(v * v));
    if (q + 1.0).abs() > 1e-9 * scale || x[2] <= 0.0 {
        return Err(Error::NotOnHyperboloid(q));
    }
    let den = 1.0 - x[2];
    if den == 0.0 {
        return Ok(Extended::Infinite);
    }
    Ok(Extended::Finite(Complex64::new(x[0], x[1]) / den))
}

/// Unit normal on the hyperboloid, `(-2 Re G, -2 Im G, |G|^2 + 1) / (|G|^2 - 1)`;
/// on the upper sheet exactly when `|G| > 1`, `None` on the singular set.
pub fn hyperboloid_normal(g: Extended) -> Option<[f64; 3]> {
    match g {
        Extended::Infinite => Some([0.0, 0.0, 1.0]),
        Extended::Finite(g) => {
            let m2 = g.norm_sqr();
            let den = m2 - 1.0;
            if den == 0.0 {
                return None;
            }
            Some([-2.0 * g.re / den, -2.0 * g.im / den, (m2 + 1.0) / den])
        }
    }
}
