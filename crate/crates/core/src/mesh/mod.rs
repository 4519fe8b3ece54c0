//! Triangulated meshes of the maximal graph: log-polar sampling of the upper
//! half-plane, cone fans at the singular intervals, the mirror half, period
//! translates, a graph-property check and file export.

mod check;
mod export;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use check::{graph_check, GraphCheckReport};
pub use export::{export_obj, export_ply, obj_string, ply_bytes, write_atomic};

use crate::error::{Error, Result};
use crate::integrator::{ApexConfig, Approach, Segment, Surface};
use crate::singular::{classify_direction, singular_set};
use crate::weierstrass::{Axis, Direction, SurfaceParams};

/// Sampling grid, uniform in `(ln r, theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radial_samples: usize,
    pub angular_samples: usize,
    pub r_min: f64,
    pub r_max: f64,
    /// Extra angle rows `theta_1 / 2^t`, `t = 1..=s`, next to both axes.
    pub seam_refinement: usize,
}

impl GridSpec {
    /// 200 x 100 samples, 3 seam rows per side, radii from
    /// `0.05 * min(a_1, |b_1|)` to `20 * max(a_{2m}, |b_{2n}|)`.
    pub fn default_for(params: &SurfaceParams) -> Self {
        Self::with_counts(params, 200, 100)
    }

    pub fn with_counts(params: &SurfaceParams, radial: usize, angular: usize) -> Self {
        Self {
            radial_samples: radial,
            angular_samples: angular,
            r_min: 0.05 * params.inner_radius(),
            r_max: 20.0 * params.outer_radius(),
            seam_refinement: 3,
        }
    }

    pub fn validate(&self, params: &SurfaceParams) -> Result<()> {
        if self.radial_samples < 2 {
            return Err(Error::InvalidGrid("need at least 2 radial samples".into()));
        }
        if self.angular_samples < 8 {
            return Err(Error::InvalidGrid("need at least 8 angular samples".into()));
        }
        if !(self.r_min > 0.0 && self.r_min < params.inner_radius()) {
            return Err(Error::InvalidGrid(format!(
                "r_min = {} must lie in (0, {})",
                self.r_min,
                params.inner_radius()
            )));
        }
        if !(self.r_max > params.outer_radius() && self.r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "r_max = {} must exceed {}",
                self.r_max,
                params.outer_radius()
            )));
        }
        Ok(())
    }

    /// Log-spaced radii with the moduli of all branch points inserted, so
    /// that every singular interval begins and ends on a grid radius.
    pub fn radii(&self, params: &SurfaceParams) -> Vec<f64> {
        let (l0, l1) = (self.r_min.ln(), self.r_max.ln());
        let n = self.radial_samples;
        let mut r: Vec<f64> = (0..n)
            .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
            .collect();
        r.extend(params.branch_points().map(f64::abs));
        r.sort_by(f64::total_cmp);
        r.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        r
    }

    /// Angles in `[0, pi]`, ascending, including the seam rows.
    pub fn angles(&self) -> Vec<f64> {
        let a = self.angular_samples;
        let step = PI / (a - 1) as f64;
        let mut t: Vec<f64> = (0..a).map(|j| step * j as f64).collect();
        t[a - 1] = PI;
        for k in 1..=self.seam_refinement {
            let d = step * 0.5f64.powi(k as i32);
            t.push(d);
            t.push(PI - d);
        }
        t.sort_by(f64::total_cmp);
        t
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImmersionSample {
    pub r: f64,
    pub theta: f64,
    pub position: [f64; 3],
    /// Third component of the unit normal; `None` on the singular set.
    pub normal_z: Option<f64>,
    /// Ordinal of the singular interval the point lies on, if any.
    pub singular: Option<usize>,
}

impl ImmersionSample {
    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApexSample {
    pub ordinal: usize,
    pub axis: Axis,
    pub position: [f64; 3],
    pub direction: Direction,
    pub residual: f64,
}

/// Samples of the closed upper half-plane annulus `r_min <= |z| <= r_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalSamples {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
    /// Row-major: index `i * angles.len() + j` for radius `i`, angle `j`.
    pub grid: Vec<ImmersionSample>,
    pub apexes: Vec<ApexSample>,
    /// Sum of quadrature error estimates along the longest accumulation chain.
    pub error_estimate: f64,
}

impl FundamentalSamples {
    pub fn sample(&self, i: usize, j: usize) -> &ImmersionSample {
        &self.grid[i * self.angles.len() + j]
    }

    pub fn len(&self) -> usize {
        self.grid.len() + self.apexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn singular_ordinal(params: &SurfaceParams, x: f64) -> Option<usize> {
    singular_set(params)
        .iter()
        .find(|c| c.lo <= x && x <= c.hi)
        .map(|c| c.ordinal)
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// On the real axis `f_2` is exactly `0` or `-pi`; the integrated value is
/// replaced by it once it agrees, so that mirrored and translated seams
/// coincide bit for bit.
fn snap_axis_height(value: f64, exact: f64) -> Result<f64> {
    if (value - exact).abs() <= 1e-9 {
        Ok(exact)
    } else {
        Err(Error::VerificationFailure(format!(
            "second coordinate {value} on the real axis, expected {exact}"
        )))
    }
}

/// Evaluates `f` on the grid by accumulating along the ray `theta = pi/2`
/// and then along each circle `|z| = r`; circles run in parallel.
pub fn sample_fundamental(surface: &Surface, grid: &GridSpec) -> Result<FundamentalSamples> {
    let params = surface.params();
    grid.validate(params)?;
    let radii = grid.radii(params);
    let angles = grid.angles();
    let half = 0.5 * PI;

    let mut column = Vec::with_capacity(radii.len());
    let mut column_err = 0.0;
    let mut f = surface.immersion_log(radii[0].ln(), half)?;
    column.push(f);
    for w in radii.windows(2) {
        let step = surface.integrate_segments(&[Segment::radial(w[0].ln(), w[1].ln(), half)])?;
        column_err += step.error;
        f = add(f, step.real());
        column.push(f);
    }

    let split = angles.partition_point(|&t| t < half);
    let rows: Vec<(Vec<ImmersionSample>, f64)> = radii
        .par_iter()
        .zip(column.par_iter())
        .map(|(&r, &f_mid)| -> Result<(Vec<ImmersionSample>, f64)> {
            let lr = r.ln();
            let mut out = vec![None; angles.len()];
            let mut err: f64 = 0.0;
            let below: Vec<usize> = (0..split).rev().collect();
            for range in [below, (split..angles.len()).collect()] {
                let mut prev = half;
                let mut f = f_mid;
                let mut e = 0.0;
                for j in range {
                    let th = angles[j];
                    if th != prev {
                        let step = surface.integrate_segments(&[Segment::arc(lr, prev, th)])?;
                        e += step.error;
                        f = add(f, step.real());
                    }
                    prev = th;
                    let z = Complex64::from_polar(r, th);
                    let on_axis = j == 0 || j == angles.len() - 1;
                    let x = if j == 0 { r } else { -r };
                    let singular = if on_axis {
                        singular_ordinal(params, x)
                    } else {
                        None
                    };
                    let normal_z = if singular.is_some() {
                        None
                    } else {
                        let zz = if on_axis { Complex64::new(x, 0.0) } else { z };
                        Some(params.gauss(zz).nu[2])
                    };
                    let mut position = f;
                    if on_axis {
                        position[1] = snap_axis_height(f[1], -th)?;
                    }
                    out[j] = Some(ImmersionSample {
                        r,
                        theta: th,
                        position,
                        normal_z,
                        singular,
                    });
                }
                err = err.max(e);
            }
            Ok((
                out.into_iter()
                    .map(|s| s.expect("every angle visited"))
                    .collect(),
                err,
            ))
        })
        .collect::<Result<_>>()?;

    let mut samples = Vec::with_capacity(radii.len() * angles.len());
    let mut row_err: f64 = 0.0;
    for (row, e) in rows {
        samples.extend(row);
        row_err = row_err.max(e);
    }

    let apexes = singular_set(params)
        .par_iter()
        .map(|c| -> Result<ApexSample> {
            let est = surface.apex(c.ordinal, Approach::Above, &ApexConfig::default())?;
            let (direction, _) = classify_direction(surface, c, &est.position)?;
            let mut position = est.position;
            let height = if c.axis == Axis::Positive { 0.0 } else { -PI };
            position[1] = snap_axis_height(position[1], height)?;
            Ok(ApexSample {
                ordinal: c.ordinal,
                axis: c.axis,
                position,
                direction,
                residual: est.residual,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FundamentalSamples {
        radii,
        angles,
        grid: samples,
        apexes,
        error_estimate: column_err + row_err,
    })
}

/// A cone vertex of the assembled mesh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeTag {
    pub vertex: usize,
    pub ordinal: usize,
    pub direction: Direction,
    pub copy: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    /// Normal third component per vertex, `None` at cone vertices.
    pub normal_z: Vec<Option<f64>>,
    pub cone_vertices: Vec<ConeTag>,
    pub copies: usize,
    /// Vertices and triangles of the first fundamental copy (both halves).
    pub fundamental_vertices: usize,
    pub fundamental_triangles: usize,
    /// Vertex indices along the images of the positive and negative real
    /// axes (upper half), ordered by increasing `|z|`, apexes repeated.
    pub positive_row: Vec<usize>,
    pub negative_row: Vec<usize>,
    /// Largest distance between a collapsed seam sample and its apex.
    pub weld_residual: f64,
}

impl GraphMesh {
    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
            triangles: Vec::new(),
            normal_z: Vec::new(),
            cone_vertices: Vec::new(),
            copies: 0,
            fundamental_vertices: 0,
            fundamental_triangles: 0,
            positive_row: Vec::new(),
            negative_row: Vec::new(),
            weld_residual: 0.0,
        }
    }

    /// `(min, max)` of the second coordinate.
    pub fn x2_extent(&self) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v[1]), hi.max(v[1]))
            })
    }
}

/// Largest allowed distance between a seam sample and its apex.
pub const WELD_TOLERANCE: f64 = 1e-6;

/// Triangulates the samples, collapses each singular interval to its apex,
/// adds the mirror image `(x1, -x2, x3)` of the upper half (sharing the
/// positive-axis row) and `copies` translates by `(0, 2 pi t, 0)`, each
/// welded to the previous one along the negative-axis row.
pub fn assemble(samples: &FundamentalSamples, copies: usize) -> Result<GraphMesh> {
    let nr = samples.radii.len();
    let na = samples.angles.len();
    let mut vertices: Vec<[f64; 3]> = Vec::new();
    let mut normal_z: Vec<Option<f64>> = Vec::new();
    let mut cone_vertices = Vec::new();

    let mut apex_vertex = vec![usize::MAX; samples.apexes.len()];
    for a in &samples.apexes {
        apex_vertex[a.ordinal] = vertices.len();
        vertices.push(a.position);
        normal_z.push(None);
        cone_vertices.push(ConeTag {
            vertex: apex_vertex[a.ordinal],
            ordinal: a.ordinal,
            direction: a.direction,
            copy: 0,
        });
    }

    let mut weld_residual: f64 = 0.0;
    let mut index = vec![0usize; nr * na];
    for i in 0..nr {
        for j in 0..na {
            let s = samples.sample(i, j);
            index[i * na + j] = match s.singular {
                Some(ord) => {
                    let apex = samples.apexes[ord].position;
                    let d = (0..3)
                        .map(|c| (apex[c] - s.position[c]).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    weld_residual = weld_residual.max(d);
                    if d > WELD_TOLERANCE {
                        return Err(Error::WeldFailure(format!(
                            "sample at z = {} is {d:e} away from apex {}",
                            s.z(),
                            ord + 1
                        )));
                    }
                    apex_vertex[ord]
                }
                None => {
                    vertices.push(s.position);
                    normal_z.push(s.normal_z);
                    vertices.len() - 1
                }
            };
        }
    }

    let mut triangles = Vec::with_capacity(2 * (nr - 1) * (na - 1));
    let at = |i: usize, j: usize| index[i * na + j];
    for i in 0..nr - 1 {
        for j in 0..na - 1 {
            let (a, b, c, d) = (at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
            for t in [[a, b, c], [a, c, d]] {
                if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
                    triangles.push(t);
                }
            }
        }
    }

    let positive_row: Vec<usize> = (0..nr).map(|i| at(i, 0)).collect();
    let negative_row: Vec<usize> = (0..nr).map(|i| at(i, na - 1)).collect();

    // Mirror half: every vertex off the positive axis is reflected; the
    // positive-axis row (fixed by the reflection) is shared.
    let upper_count = vertices.len();
    let mut mirror = vec![usize::MAX; upper_count];
    let shared: std::collections::HashSet<usize> = positive_row.iter().copied().collect();
    for v in 0..upper_count {
        if shared.contains(&v) {
            mirror[v] = v;
        } else {
            let p = vertices[v];
            mirror[v] = vertices.len();
            vertices.push([p[0], -p[1], p[2]]);
            normal_z.push(normal_z[v]);
        }
    }
    let upper_triangles = triangles.len();
    for t in 0..upper_triangles {
        let [a, b, c] = triangles[t];
        triangles.push([mirror[a], mirror[c], mirror[b]]);
    }

    let fundamental_vertices = vertices.len();
    let fundamental_triangles = triangles.len();
    let base_tags = cone_vertices.clone();
    // Copy `t` reuses the mirror's negative-axis row of copy `t - 1` as its
    // own upper negative-axis row, closing the fans of the negative cones.
    let negative_set: std::collections::HashSet<usize> = negative_row.iter().copied().collect();
    let mut previous: Vec<usize> = (0..fundamental_vertices).collect();
    for copy in 1..=copies {
        let shift = 2.0 * PI * copy as f64;
        let mut map = vec![usize::MAX; fundamental_vertices];
        for v in 0..fundamental_vertices {
            map[v] = if negative_set.contains(&v) {
                previous[mirror[v]]
            } else {
                let p = vertices[v];
                vertices.push([p[0], p[1] + shift, p[2]]);
                normal_z.push(normal_z[v]);
                vertices.len() - 1
            };
        }
        for t in 0..fundamental_triangles {
            let tri = triangles[t];
            triangles.push(tri.map(|v| map[v]));
        }
        for tag in &base_tags {
            cone_vertices.push(ConeTag {
                vertex: map[tag.vertex],
                copy,
                ..*tag
            });
        }
        previous = map;
    }

    Ok(GraphMesh {
        vertices,
        triangles,
        normal_z,
        cone_vertices,
        copies,
        fundamental_vertices,
        fundamental_triangles,
        positive_row,
        negative_row,
        weld_residual,
    })
}

/// Samples, assembles and returns the mesh of `surface`.
pub fn build_mesh(
    surface: &Surface,
    grid: &GridSpec,
    copies: usize,
) -> Result<(FundamentalSamples, GraphMesh)> {
    let samples = sample_fundamental(surface, grid)?;
    let mesh = assemble(&samples, copies)?;
    Ok((samples, mesh))
}
