//! Integration paths, their admissibility checks, and the canonical routes
//! used to reach a target point from the basepoint.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weierstrass::SurfaceParams;

/// One piece of a path. `Line` is straight in `z`; `LogLine` is straight in
/// `zeta = log z` (so radial rays and circular arcs are both `LogLine`s) and
/// its endpoints are given in `zeta` coordinates `(ln r, theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    Line { start: Complex64, end: Complex64 },
    LogLine { start: Complex64, end: Complex64 },
}

impl Segment {
    pub fn radial(log_r0: f64, log_r1: f64, theta: f64) -> Self {
        Segment::LogLine {
            start: Complex64::new(log_r0, theta),
            end: Complex64::new(log_r1, theta),
        }
    }

    pub fn arc(log_r: f64, theta0: f64, theta1: f64) -> Self {
        Segment::LogLine {
            start: Complex64::new(log_r, theta0),
            end: Complex64::new(log_r, theta1),
        }
    }

    /// Point on the segment at parameter `t` in `[0, 1]`.
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { start, end } => start + (end - start) * t,
            Segment::LogLine { start, end } => (start + (end - start) * t).exp(),
        }
    }

    pub fn start_point(&self) -> Complex64 {
        match *self {
            Segment::Line { start, .. } => start,
            Segment::LogLine { start, .. } => start.exp(),
        }
    }

    pub fn end_point(&self) -> Complex64 {
        match *self {
            Segment::Line { end, .. } => end,
            Segment::LogLine { end, .. } => end.exp(),
        }
    }

    /// Returns `z(t)` and `d zeta / dt`, so that `int phi dz = int psi(z) (d zeta/dt) dt`
    /// with `psi = z phi`.
    pub fn eval(&self, t: f64) -> (Complex64, Complex64) {
        match *self {
            Segment::Line { start, end } => {
                let z = start + (end - start) * t;
                (z, (end - start) / z)
            }
            Segment::LogLine { start, end } => {
                let d = end - start;
                ((start + d * t).exp(), d)
            }
        }
    }

    /// The piece between parameters `t0` and `t1`.
    pub fn sub(&self, t0: f64, t1: f64) -> Self {
        match *self {
            Segment::Line { start, end } => Segment::Line {
                start: start + (end - start) * t0,
                end: start + (end - start) * t1,
            },
            Segment::LogLine { start, end } => Segment::LogLine {
                start: start + (end - start) * t0,
                end: start + (end - start) * t1,
            },
        }
    }

    /// Net change of `arg z` along the segment.
    pub fn winding(&self) -> f64 {
        match *self {
            Segment::Line { start, end } => (end / start).arg(),
            Segment::LogLine { start, end } => end.im - start.im,
        }
    }

    fn is_degenerate(&self) -> bool {
        match *self {
            Segment::Line { start, end } | Segment::LogLine { start, end } => start == end,
        }
    }

    fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Line { start, end } => {
                let d = end - start;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (p - start).norm();
                }
                let t = (((p - start) * d.conj()).re / len2).clamp(0.0, 1.0);
                (p - (start + d * t)).norm()
            }
            Segment::LogLine { start, end } => {
                let d = end - start;
                if d.re == 0.0 {
                    // Circular arc.
                    let r = start.re.exp();
                    let phi = p.arg();
                    let (lo, hi) = if d.im >= 0.0 {
                        (start.im, end.im)
                    } else {
                        (end.im, start.im)
                    };
                    let k = ((lo - phi) / (2.0 * PI)).ceil();
                    let candidate = phi + 2.0 * PI * k;
                    if candidate <= hi {
                        return (p.norm() - r).abs();
                    }
                    return (p - self.start_point())
                        .norm()
                        .min((p - self.end_point()).norm());
                }
                if d.im == 0.0 {
                    let chord = Segment::Line {
                        start: self.start_point(),
                        end: self.end_point(),
                    };
                    return chord.distance_to(p);
                }
                let mut best = f64::INFINITY;
                const N: usize = 256;
                for j in 0..=N {
                    best = best.min((p - self.point(j as f64 / N as f64)).norm());
                }
                best
            }
        }
    }
}

/// A concatenation of segments with the radius inside which interior points
/// may not approach the branch points or the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub segments: Vec<Segment>,
    #[serde(default)]
    pub avoidance_radius: Option<f64>,
}

impl PathSpec {
    pub fn new(segments: Vec<Segment>) -> Self {
        Self {
            segments,
            avoidance_radius: None,
        }
    }

    /// Straight pieces through the given points.
    pub fn polyline(points: &[Complex64]) -> Self {
        Self::new(
            points
                .windows(2)
                .map(|w| Segment::Line {
                    start: w[0],
                    end: w[1],
                })
                .collect(),
        )
    }

    pub fn start_point(&self) -> Option<Complex64> {
        self.segments.first().map(Segment::start_point)
    }

    pub fn end_point(&self) -> Option<Complex64> {
        self.segments.last().map(Segment::end_point)
    }

    /// Total change of `arg z`.
    pub fn winding(&self) -> f64 {
        self.segments.iter().map(Segment::winding).sum()
    }

    /// Rejects paths that pass through or along a singular interval, touch
    /// the origin, or pass too close to a branch point away from the two
    /// path endpoints.
    pub fn validate(&self, params: &SurfaceParams) -> Result<()> {
        self.validate_with(params, false)
    }

    /// As [`PathSpec::validate`], optionally letting the path cross the
    /// singular intervals transversally (used when changing sheets).
    pub fn validate_with(&self, params: &SurfaceParams, allow_crossings: bool) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::InvalidInput("empty path".into()));
        }
        let avoid = self
            .avoidance_radius
            .unwrap_or_else(|| default_avoidance_radius(params));
        let patch = patch_radius(params);
        let last = self.segments.len() - 1;
        let start = self.segments[0].start_point();
        let end = self.segments[last].end_point();

        for (idx, seg) in self.segments.iter().enumerate() {
            if seg.is_degenerate() {
                continue;
            }
            if seg.distance_to(Complex64::new(0.0, 0.0)) < avoid {
                return Err(Error::PathThroughSingularity(format!(
                    "segment {idx} comes within {avoid:e} of z = 0"
                )));
            }
            for c in params.branch_points() {
                let c = Complex64::new(c, 0.0);
                let terminal = (idx == 0 && (start - c).norm() < patch)
                    || (idx == last && (end - c).norm() < patch);
                if terminal {
                    continue;
                }
                if seg.distance_to(c) < avoid {
                    return Err(Error::PathThroughSingularity(format!(
                        "segment {idx} comes within {avoid:e} of branch point {}",
                        c.re
                    )));
                }
            }
            if allow_crossings {
                interval_crossings(params, seg)?;
            } else {
                check_interval_crossings(params, seg, idx)?;
            }
            if idx > 0 {
                let joint = seg.start_point();
                if joint.im == 0.0 && on_interval(params, joint.re) {
                    return Err(Error::PathThroughSingularity(format!(
                        "waypoint {} lies on a singular interval",
                        joint.re
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Default distance kept between interior path points and the branch
/// points: `1e-3` times the smallest gap.
pub fn default_avoidance_radius(params: &SurfaceParams) -> f64 {
    1e-3 * params.min_gap()
}

/// Endpoints closer than this to a branch point get the square-root
/// substitution: `1e-2` times the smallest gap.
pub fn patch_radius(params: &SurfaceParams) -> f64 {
    1e-2 * params.min_gap()
}

/// Closed real intervals `[lo, hi]` on which `w^2 <= 0`, positive axis first.
pub fn singular_intervals(params: &SurfaceParams) -> Vec<(f64, f64)> {
    let a = params.a();
    let b = params.b();
    (0..params.m())
        .map(|k| (a[2 * k], a[2 * k + 1]))
        .chain((0..params.n()).map(|k| (b[2 * k + 1], b[2 * k])))
        .collect()
}

fn on_interval(params: &SurfaceParams, x: f64) -> bool {
    singular_intervals(params)
        .iter()
        .any(|&(lo, hi)| lo <= x && x <= hi)
}

/// Parameters `t` in `(0, 1)` at which the segment crosses a singular
/// interval, in increasing order. Running along an interval is an error.
pub fn interval_crossings(params: &SurfaceParams, seg: &Segment) -> Result<Vec<f64>> {
    let intervals = singular_intervals(params);
    let hit = |x: f64| intervals.iter().any(|&(lo, hi)| lo <= x && x <= hi);
    let along = |x0: f64, x1: f64| {
        let (lo, hi) = if x0 <= x1 { (x0, x1) } else { (x1, x0) };
        intervals
            .iter()
            .find(|&&(a, b)| lo.max(a) < hi.min(b))
            .copied()
    };
    let runs_along = |(lo, hi): (f64, f64)| {
        Err(Error::PathThroughSingularity(format!(
            "path runs along singular interval [{lo}, {hi}]"
        )))
    };
    let mut out = Vec::new();
    match *seg {
        Segment::Line { start, end } => {
            let (y0, y1) = (start.im, end.im);
            if y0 == 0.0 && y1 == 0.0 {
                if let Some(iv) = along(start.re, end.re) {
                    return runs_along(iv);
                }
            } else if y0 * y1 < 0.0 {
                let t = y0 / (y0 - y1);
                if hit(start.re + (end.re - start.re) * t) {
                    out.push(t);
                }
            }
        }
        Segment::LogLine { start, end } => {
            let (y0, y1) = (start.im, end.im);
            if y0 == y1 {
                let k = (y0 / PI).round();
                if (y0 - k * PI).abs() <= 1e-12 {
                    let sign = if (k as i64).rem_euclid(2) == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    if let Some(iv) = along(sign * start.re.exp(), sign * end.re.exp()) {
                        return runs_along(iv);
                    }
                }
            } else {
                let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
                let mut k = (lo / PI).floor() + 1.0;
                while k * PI < hi {
                    let t = (k * PI - y0) / (y1 - y0);
                    let r = (start.re + (end.re - start.re) * t).exp();
                    let sign = if (k as i64).rem_euclid(2) == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    if hit(sign * r) {
                        out.push(t);
                    }
                    k += 1.0;
                }
                out.sort_by(f64::total_cmp);
            }
        }
    }
    Ok(out)
}

fn check_interval_crossings(params: &SurfaceParams, seg: &Segment, idx: usize) -> Result<()> {
    let crossings = interval_crossings(params, seg)
        .map_err(|e| Error::PathThroughSingularity(format!("segment {idx}: {e}")))?;
    if let Some(t) = crossings.first() {
        let x = seg.point(*t).re;
        return Err(Error::PathThroughSingularity(format!(
            "segment {idx} crosses a singular interval at x = {x}"
        )));
    }
    Ok(())
}

/// Canonical routes in log coordinates. Starting from the basepoint on the
/// positive axis beyond every `a_j`, a route moves radially out (only when it
/// must pass the negative axis), turns along an arc to the highway angle
/// `n pi + pi/2` of its sector, runs radially to the target modulus, and
/// finishes with an arc to the target angle. None of these pieces meets a
/// singular interval except possibly at the final point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Router {
    pub log_base: f64,
    pub log_cross: f64,
}

impl Router {
    pub fn new(params: &SurfaceParams) -> Self {
        Self::with_base(params, basepoint(params))
    }

    /// Router starting from the real point `base > a_{2m}`.
    pub fn with_base(params: &SurfaceParams, base: f64) -> Self {
        let outer_b = params.b().last().map_or(0.0, |b| -b);
        Self {
            log_base: base.ln(),
            log_cross: base.max(outer_b + 1.0).ln(),
        }
    }

    /// Sector containing `theta`, where sector `n` is `[n pi, (n + 1) pi]`.
    pub fn sector_of(theta: f64) -> i64 {
        let s = (theta / PI).floor() as i64;
        if s > 0 && theta == s as f64 * PI {
            s - 1
        } else {
            s
        }
    }

    /// Route to `(ln r, theta)` through sector `sector`.
    pub fn route(&self, log_r: f64, theta: f64, sector: i64) -> Vec<Segment> {
        let highway = sector as f64 * PI + 0.5 * PI;
        let mut out = Vec::with_capacity(4);
        let crosses_negative_axis = !(sector == 0 || sector == -1);
        let arc_radius = if crosses_negative_axis {
            if self.log_cross > self.log_base {
                out.push(Segment::radial(self.log_base, self.log_cross, 0.0));
            }
            self.log_cross
        } else {
            self.log_base
        };
        out.push(Segment::arc(arc_radius, 0.0, highway));
        if log_r != arc_radius {
            out.push(Segment::radial(arc_radius, log_r, highway));
        }
        if theta != highway {
            out.push(Segment::arc(log_r, highway, theta));
        }
        out
    }

    /// Route to a point of the plane, approaching the real axis from above
    /// (`Im z >= 0`) or from below.
    pub fn route_to(&self, z: Complex64) -> Vec<Segment> {
        let theta = if z.im == 0.0 {
            if z.re < 0.0 {
                PI
            } else {
                0.0
            }
        } else {
            z.arg()
        };
        let sector = if theta >= 0.0 { 0 } else { -1 };
        self.route(z.norm().ln(), theta, sector)
    }
}

/// Basepoint `a_{2m} + 1` of the immersion.
pub fn basepoint(params: &SurfaceParams) -> f64 {
    params.a()[2 * params.m() - 1] + 1.0
}
