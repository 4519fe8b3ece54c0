//! Path integration of the Weierstrass forms: the immersion, its periods
//! around the two ends, and the limiting positions of the cone vertices.

mod path;
mod quadrature;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use path::{
    basepoint, default_avoidance_radius, interval_crossings, patch_radius, singular_intervals,
    PathSpec, Router, Segment,
};
pub use quadrature::{integrate_unit, QuadratureConfig, QuadratureResult, Vec3C};

use crate::error::{Error, Result};
use crate::weierstrass::{Extended, SurfaceParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A holomorphic `C^3`-valued form, given through `psi = z * phi` so that
/// `phi dz = psi d(log z)`.
pub trait FormField: Sync {
    fn psi(&self, z: Complex64) -> Result<Vec3C>;
}

impl FormField for SurfaceParams {
    fn psi(&self, z: Complex64) -> Result<Vec3C> {
        maximal_psi(self, z, 1.0)
    }
}

/// `psi` of the maximal surface on the sheet `sheet * w`.
pub(crate) fn maximal_psi(params: &SurfaceParams, z: Complex64, sheet: f64) -> Result<Vec3C> {
    let w = match params.branch_w(z).w {
        Extended::Finite(w) if w.norm_sqr() > 0.0 && z.norm_sqr() > 0.0 => w * sheet,
        _ => return Err(Error::BranchPointEvaluation(z)),
    };
    let wi = w.inv();
    Ok([-0.5 * (wi + w), I, 0.5 * (wi - w)])
}

/// Integrates `field` along one segment. Endpoints within `patch` of a point
/// of `singular_points` are treated with `t = u^2` (or its mirror) so the
/// inverse square-root growth there becomes smooth.
pub fn integrate_segment<F: FormField + ?Sized>(
    field: &F,
    seg: &Segment,
    singular_points: &[f64],
    patch: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let near = |z: Complex64| {
        singular_points
            .iter()
            .any(|&c| (z - Complex64::new(c, 0.0)).norm() < patch)
    };
    let s0 = near(seg.start_point());
    let s1 = near(seg.end_point());
    let integrand = |u: f64| -> Result<Vec3C> {
        let (t, dt) = match (s0, s1) {
            (false, false) => (u, 1.0),
            (true, false) => (u * u, 2.0 * u),
            (false, true) => (1.0 - (1.0 - u) * (1.0 - u), 2.0 * (1.0 - u)),
            (true, true) => (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u)),
        };
        let (z, dzeta) = seg.eval(t);
        let psi = field.psi(z).map_err(|e| match e {
            Error::BranchPointEvaluation(z) => {
                Error::PathThroughSingularity(format!("quadrature node hit z = {z}"))
            }
            other => other,
        })?;
        let k = dzeta * dt;
        Ok([psi[0] * k, psi[1] * k, psi[2] * k])
    };
    integrate_unit(integrand, cfg)
}

/// Complex value of a path integral with its accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathIntegral {
    pub value: Vec3C,
    pub error: f64,
}

impl PathIntegral {
    pub fn real(&self) -> [f64; 3] {
        [self.value[0].re, self.value[1].re, self.value[2].re]
    }

    pub fn imag(&self) -> [f64; 3] {
        [self.value[0].im, self.value[1].im, self.value[2].im]
    }
}

/// Which end a period loop encircles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Zero,
    Infinity,
}

/// Direction from which a cone vertex is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    Above,
    Below,
    Left,
    Right,
}

impl Approach {
    pub const ALL: [Approach; 4] = [
        Approach::Above,
        Approach::Below,
        Approach::Left,
        Approach::Right,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApexEstimate {
    pub position: [f64; 3],
    /// Change between the last two extrapolated estimates (max norm).
    pub residual: f64,
    pub levels: usize,
    pub approach: Approach,
}

/// Settings for the cone-vertex extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApexConfig {
    /// Initial offset as a fraction of `min(interval length, min gap)`.
    pub initial_fraction: f64,
    pub max_levels: usize,
    pub tolerance: f64,
}

impl Default for ApexConfig {
    fn default() -> Self {
        Self {
            initial_fraction: 1e-3,
            max_levels: 14,
            tolerance: 1e-8,
        }
    }
}

/// A parameter set together with everything needed to integrate on it.
#[derive(Debug, Clone)]
pub struct Surface {
    params: SurfaceParams,
    router: Router,
    quad: QuadratureConfig,
    patch: f64,
    branch: Vec<f64>,
    base: f64,
}

impl Surface {
    pub fn new(params: SurfaceParams) -> Self {
        let router = Router::new(&params);
        let patch = patch_radius(&params);
        let branch = params.branch_points().collect();
        let base = basepoint(&params);
        Self {
            params,
            router,
            quad: QuadratureConfig::default(),
            patch,
            branch,
            base,
        }
    }

    pub fn with_quadrature(mut self, quad: QuadratureConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn params(&self) -> &SurfaceParams {
        &self.params
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    pub fn router(&self) -> &Router {
        &self.router
    }

    /// Moves the basepoint to the real point `x0`, which must lie beyond
    /// every branch point on the positive axis; `f(x0) = 0` afterwards.
    pub fn with_basepoint(mut self, x0: f64) -> Result<Self> {
        let last = self.params.a()[2 * self.params.m() - 1];
        if !(x0 > last && x0.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "basepoint {x0} must be a real number greater than a_{} = {last}",
                2 * self.params.m()
            )));
        }
        self.router = Router::with_base(&self.params, x0);
        self.base = x0;
        Ok(self)
    }

    pub fn basepoint(&self) -> f64 {
        self.base
    }

    /// Checks `path` and integrates `phi dz` along it.
    pub fn integrate_path(&self, path: &PathSpec) -> Result<PathIntegral> {
        path.validate(&self.params)?;
        self.integrate_segments(&path.segments)
    }

    /// Integrates without admissibility checks; callers guarantee the
    /// segments avoid the singular set.
    pub fn integrate_segments(&self, segments: &[Segment]) -> Result<PathIntegral> {
        integrate_segments_of(&self.params, segments, &self.branch, self.patch, &self.quad)
    }

    /// `f(z) = Re int_{z0}^{z} phi dz` along the canonical route. Points on
    /// the real axis are reached from above.
    pub fn immersion(&self, z: Complex64) -> Result<[f64; 3]> {
        if z.norm_sqr() == 0.0 {
            return Err(Error::BranchPointEvaluation(z));
        }
        Ok(self.integrate_segments(&self.router.route_to(z))?.real())
    }

    /// `f` at `(ln r, theta)` on the universal cover of the punctured plane.
    pub fn immersion_log(&self, log_r: f64, theta: f64) -> Result<[f64; 3]> {
        let sector = Router::sector_of(theta);
        Ok(self
            .integrate_segments(&self.router.route(log_r, theta, sector))?
            .real())
    }

    /// Real period of a loop around `end`: counterclockwise around `0` on a
    /// circle of half the inner radius, clockwise around infinity on a circle
    /// of twice the outer radius.
    pub fn loop_period(&self, end: End) -> Result<PathIntegral> {
        let seg = match end {
            End::Zero => Segment::arc(
                (0.5 * self.params.inner_radius()).ln(),
                0.0,
                2.0 * std::f64::consts::PI,
            ),
            End::Infinity => Segment::arc(
                (2.0 * self.params.outer_radius()).ln(),
                0.0,
                -2.0 * std::f64::consts::PI,
            ),
        };
        self.integrate_path(&PathSpec::new(vec![seg]))
    }

    /// Point used to approach interval `index` at offset `eps`.
    pub fn approach_point(&self, index: usize, approach: Approach, eps: f64) -> Complex64 {
        let (lo, hi) = singular_intervals(&self.params)[index];
        let mid = 0.5 * (lo + hi);
        match approach {
            Approach::Above => Complex64::new(mid, eps),
            Approach::Below => Complex64::new(mid, -eps),
            Approach::Left => Complex64::new(lo - eps, 0.0),
            Approach::Right => Complex64::new(hi + eps, 0.0),
        }
    }

    /// `f` at the approach point, continued across the negative axis when a
    /// negative interval is approached from below so that all four
    /// approaches live on the same sheet of `f_2`.
    fn approach_value(&self, index: usize, approach: Approach, eps: f64) -> Result<[f64; 3]> {
        let z = self.approach_point(index, approach, eps);
        if approach == Approach::Below && z.re < 0.0 {
            return self.immersion_log(z.norm().ln(), z.arg() + 2.0 * std::f64::consts::PI);
        }
        self.immersion(z)
    }

    /// Limit of `f` at the cone vertex over interval `index` (positive
    /// intervals first), extrapolated in `h = sqrt(eps)` from a geometric
    /// sequence of offsets.
    pub fn apex(&self, index: usize, approach: Approach, cfg: &ApexConfig) -> Result<ApexEstimate> {
        let intervals = singular_intervals(&self.params);
        let &(lo, hi) = intervals
            .get(index)
            .ok_or_else(|| Error::InvalidInput(format!("no singular interval {index}")))?;
        let scale = (hi - lo).min(self.params.min_gap());
        let eps0 = cfg.initial_fraction * scale;

        let mut hs: Vec<f64> = Vec::new();
        let mut values: Vec<[f64; 3]> = Vec::new();
        let mut estimates: Vec<[f64; 3]> = Vec::new();
        let mut best_residual = f64::INFINITY;
        for level in 0..cfg.max_levels {
            let eps = eps0 * 0.5f64.powi(level as i32);
            hs.push(eps.sqrt());
            values.push(self.approach_value(index, approach, eps)?);
            if values.len() < 3 {
                continue;
            }
            let k = values.len();
            estimates.push(neville_at_zero(&hs[k - 3..], &values[k - 3..]));
            if estimates.len() < 2 {
                continue;
            }
            let e = estimates.len();
            let residual = max_diff(&estimates[e - 1], &estimates[e - 2]);
            best_residual = best_residual.min(residual);
            if residual <= cfg.tolerance {
                return Ok(ApexEstimate {
                    position: estimates[e - 1],
                    residual,
                    levels: level + 1,
                    approach,
                });
            }
        }
        Err(Error::NonConvergent {
            residual: best_residual,
            tolerance: cfg.tolerance,
        })
    }

    /// The cone vertex obtained by integrating straight to the left end of
    /// the interval; the limit exists because `phi` only blows up like an
    /// inverse square root there.
    pub fn apex_direct(&self, index: usize) -> Result<[f64; 3]> {
        let (lo, _) = singular_intervals(&self.params)[index];
        self.immersion(Complex64::new(lo, 0.0))
    }
}

pub(crate) fn integrate_segments_of<F: FormField + ?Sized>(
    field: &F,
    segments: &[Segment],
    singular_points: &[f64],
    patch: f64,
    cfg: &QuadratureConfig,
) -> Result<PathIntegral> {
    let mut value = [Complex64::new(0.0, 0.0); 3];
    let mut error = 0.0;
    for seg in segments {
        let r = integrate_segment(field, seg, singular_points, patch, cfg)?;
        for (v, x) in value.iter_mut().zip(r.value) {
            *v += x;
        }
        error += r.error;
    }
    Ok(PathIntegral { value, error })
}

/// Value at `h = 0` of the quadratic through three points, per component.
fn neville_at_zero(h: &[f64], v: &[[f64; 3]]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        let mut weight = 1.0;
        for j in 0..3 {
            if j != i {
                weight *= -h[j] / (h[i] - h[j]);
            }
        }
        for c in 0..3 {
            out[c] += weight * v[i][c];
        }
    }
    out
}

fn max_diff(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|c| (a[c] - b[c]).abs()).fold(0.0, f64::max)
}
