//! Weierstrass data of the doubly periodic minimal surfaces built on the
//! same curve, and measurement (not solution) of their period problem.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{
    integrate_segment, interval_crossings, patch_radius, singular_intervals, FormField, PathSpec,
    QuadratureConfig, Segment, Vec3C,
};
use crate::weierstrass::{Extended, FreeCoordinate, SurfaceParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// How the minimal surface sits in space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Vertical Scherk ends: `G = w`, `dh = dz / z`.
    VerticalEnds,
    /// Rotated so the ends are horizontal: `G = i(w + 1)/(w - 1)`,
    /// `dh = (1/w - w) dz / (2z)`.
    HorizontalEnds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalData {
    pub params: SurfaceParams,
    pub orientation: Orientation,
}

/// Re-solves `b_{2n}` so that `w(0) = 1`, i.e. `G(0) = 1` for the vertical
/// data. For the all-`+1` signs this is
/// `b_{2n} = prod a_{2k}/a_{2k-1} * prod_{k<n} b_{2k-1}/b_{2k} * b_{2n-1}`.
pub fn b2n_normalize(params: &SurfaceParams) -> Result<SurfaceParams> {
    if params.n() == 0 {
        return Err(Error::InvalidInput(
            "b_{2n} normalization needs at least one negative interval".into(),
        ));
    }
    params
        .solve_unit_end(FreeCoordinate::B(2 * params.n()))
        .map_err(|e| match e {
            Error::OrderingViolation(msg) => Error::OrderingInfeasible(msg),
            other => other,
        })
}

impl MinimalData {
    pub fn new(params: SurfaceParams, orientation: Orientation) -> Self {
        Self {
            params,
            orientation,
        }
    }

    fn w(&self, z: Complex64) -> Result<Complex64> {
        match self.params.branch_w(z).w {
            Extended::Finite(w) if w.norm_sqr() > 0.0 && z.norm_sqr() > 0.0 => Ok(w),
            _ => Err(Error::BranchPointEvaluation(z)),
        }
    }

    /// `z * (omega_1, omega_2, omega_3)` on the sheet `sheet * w`.
    pub fn z_omega(&self, z: Complex64, sheet: f64) -> Result<Vec3C> {
        let w = self.w(z)? * sheet;
        let wi = w.inv();
        let one = Complex64::new(1.0, 0.0);
        Ok(match self.orientation {
            Orientation::VerticalEnds => [0.5 * (wi - w), 0.5 * I * (wi + w), one],
            Orientation::HorizontalEnds => [0.5 * I * (wi + w), one, 0.5 * (wi - w)],
        })
    }

    /// Coefficients of `dz` in `(omega_1, omega_2, omega_3)`.
    pub fn omega(&self, z: Complex64) -> Result<Vec3C> {
        let zo = self.z_omega(z, 1.0)?;
        let zi = z.inv();
        Ok([zo[0] * zi, zo[1] * zi, zo[2] * zi])
    }

    pub fn gauss(&self, z: Complex64) -> Extended {
        match self.params.branch_w(z).w {
            Extended::Infinite => match self.orientation {
                Orientation::VerticalEnds => Extended::Infinite,
                Orientation::HorizontalEnds => Extended::Finite(I),
            },
            Extended::Finite(w) => match self.orientation {
                Orientation::VerticalEnds => Extended::Finite(w),
                Orientation::HorizontalEnds => {
                    let den = w - 1.0;
                    if den.norm_sqr() == 0.0 {
                        Extended::Infinite
                    } else {
                        Extended::Finite(I * (w + 1.0) / den)
                    }
                }
            },
        }
    }

    /// Coefficient of `dz` in `dh`.
    pub fn dh(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.omega(z)?[2])
    }

    /// Genus of the quotient surface.
    pub fn genus(&self) -> usize {
        self.params.m() + self.params.n() - 1
    }

    /// Number of Scherk ends in the quotient.
    pub fn quotient_ends(&self) -> usize {
        4
    }
}

struct Sheet<'a> {
    data: &'a MinimalData,
    sign: f64,
}

impl FormField for Sheet<'_> {
    fn psi(&self, z: Complex64) -> Result<Vec3C> {
        self.data.z_omega(z, self.sign)
    }
}

/// One measured loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopPeriod {
    pub description: String,
    pub vector: [f64; 3],
    /// `|third component| <= 1e-8`.
    pub horizontal: bool,
    pub crossings: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodLattice {
    pub orientation: Orientation,
    pub measured_loops: Vec<LoopPeriod>,
}

/// `Re` of the loop integral of the omega-triple. The sheet of `w` flips each
/// time the loop crosses a singular interval (the branch cuts); a loop with
/// an odd number of crossings does not close on the curve.
pub fn measure_period(path: &PathSpec, data: &MinimalData) -> Result<([f64; 3], usize, f64)> {
    let params = &data.params;
    path.validate_with(params, true)?;
    let (start, end) = (path.start_point().unwrap(), path.end_point().unwrap());
    if (start - end).norm() > 1e-12 * start.norm().max(1.0) {
        return Err(Error::NotClosedOnCurve(format!(
            "path starts at {start} but ends at {end}"
        )));
    }
    if start.im == 0.0
        && singular_intervals(params)
            .iter()
            .any(|&(lo, hi)| lo <= start.re && start.re <= hi)
    {
        return Err(Error::NotClosedOnCurve(format!(
            "loop starts on a branch cut at {start}"
        )));
    }
    let branch: Vec<f64> = params.branch_points().collect();
    let patch = patch_radius(params);
    let cfg = QuadratureConfig::default();
    let mut sign = 1.0;
    let mut crossings = 0;
    let mut total = [Complex64::new(0.0, 0.0); 3];
    let mut error = 0.0;
    for seg in &path.segments {
        let ts = interval_crossings(params, seg)?;
        let mut cuts = vec![0.0];
        cuts.extend(ts.iter().copied());
        cuts.push(1.0);
        for (k, w) in cuts.windows(2).enumerate() {
            if k > 0 {
                sign = -sign;
                crossings += 1;
            }
            let piece: Segment = seg.sub(w[0], w[1]);
            let field = Sheet { data, sign };
            let r = integrate_segment(&field, &piece, &branch, patch, &cfg)?;
            for (t, x) in total.iter_mut().zip(r.value) {
                *t += x;
            }
            error += r.error;
        }
    }
    if crossings % 2 == 1 {
        return Err(Error::NotClosedOnCurve(format!(
            "loop crosses the branch cuts {crossings} times and ends on the other sheet"
        )));
    }
    Ok(([total[0].re, total[1].re, total[2].re], crossings, error))
}

/// Closed polyline approximating an ellipse around `[x0, x1]` (semi-axes
/// `a = (x1 - x0)/2 + margin` and `a/2`). Vertices sit at half-step angles,
/// so the polygon crosses the real axis transversally inside chords, within
/// `margin` of the ellipse tips; `points` is raised until that holds.
pub fn ellipse_loop(x0: f64, x1: f64, margin: f64, points: usize) -> PathSpec {
    let (mid, a) = (0.5 * (x0 + x1), 0.5 * (x1 - x0) + margin);
    let b = 0.5 * a;
    let mut n = points.max(8);
    if margin > 0.0 {
        while a * (1.0 - (PI / n as f64).cos()) >= 0.5 * margin {
            n *= 2;
        }
    }
    let pts: Vec<Complex64> = (0..=n)
        .map(|k| {
            let t = 2.0 * PI * ((k % n) as f64 + 0.5) / n as f64;
            Complex64::new(mid + a * t.cos(), b * t.sin())
        })
        .collect();
    PathSpec::polyline(&pts)
}

/// The default set of loops: both ends, each handle, each pair of
/// neighbouring handles on one axis, and a contractible loop.
pub fn default_loops(params: &SurfaceParams) -> Vec<(String, PathSpec)> {
    let gap = params.min_gap();
    let margin = 0.25 * gap;
    let mut out = vec![
        (
            "around z = 0 (counterclockwise)".to_string(),
            PathSpec::new(vec![Segment::arc(
                (0.5 * params.inner_radius()).ln(),
                0.0,
                2.0 * PI,
            )]),
        ),
        (
            "around z = infinity (clockwise)".to_string(),
            PathSpec::new(vec![Segment::arc(
                (2.0 * params.outer_radius()).ln(),
                0.0,
                -2.0 * PI,
            )]),
        ),
    ];
    let intervals = singular_intervals(params);
    for (k, &(lo, hi)) in intervals.iter().enumerate() {
        out.push((
            format!("around singular interval {} [{lo}, {hi}]", k + 1),
            ellipse_loop(lo, hi, margin, 96),
        ));
    }
    let mut sorted = intervals.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        let (left, right) = (w[0], w[1]);
        if left.1 < 0.0 && right.0 > 0.0 {
            continue;
        }
        // From the middle of one interval to the middle of the next: crosses
        // each once, so the loop closes on the curve.
        let x0 = 0.5 * (left.0 + left.1);
        let x1 = 0.5 * (right.0 + right.1);
        out.push((
            format!(
                "through intervals [{}, {}] and [{}, {}]",
                left.0, left.1, right.0, right.1
            ),
            ellipse_loop(x0, x1, 0.0, 96),
        ));
    }
    let c = params.a()[0] * 0.5;
    out.push((
        "contractible loop".to_string(),
        ellipse_loop(c - 0.2 * c, c + 0.2 * c, 0.0, 32),
    ));
    out
}

/// Measures every loop of [`default_loops`].
pub fn measure_lattice(data: &MinimalData) -> Result<PeriodLattice> {
    let mut measured_loops = Vec::new();
    for (description, path) in default_loops(&data.params) {
        let (vector, crossings, error) = measure_period(&path, data)?;
        measured_loops.push(LoopPeriod {
            description,
            vector,
            horizontal: vector[2].abs() <= 1e-8,
            crossings,
            error,
        });
    }
    Ok(PeriodLattice {
        orientation: data.orientation,
        measured_loops,
    })
}
