use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GraphMesh;

/// Discrete graph test: upward normals, monotone boundary rows, positively
/// oriented projected triangles and no two projected triangles overlapping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphCheckReport {
    pub vertices: usize,
    pub triangles: usize,
    pub min_normal_z: f64,
    pub nonpositive_normals: usize,
    pub positive_row_monotone: bool,
    pub negative_row_monotone: bool,
    pub min_signed_area: f64,
    pub nonpositive_area_triangles: usize,
    pub overlapping_pairs: usize,
    /// A few offending triangle pairs, for diagnostics.
    pub overlap_examples: Vec<[usize; 2]>,
    pub passed: bool,
}

type P2 = [f64; 2];

fn project(mesh: &GraphMesh, t: &[usize; 3]) -> [P2; 3] {
    t.map(|v| [mesh.vertices[v][0], mesh.vertices[v][1]])
}

fn signed_area(p: &[P2; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

fn strictly_decreasing_x1(mesh: &GraphMesh, row: &[usize]) -> bool {
    let mut row = row.to_vec();
    row.dedup();
    row.windows(2)
        .all(|w| mesh.vertices[w[1]][0] < mesh.vertices[w[0]][0])
}

/// Separating-axis test for triangles with disjoint interiors; touching
/// along an edge or at a vertex counts as disjoint within `tol`.
pub(crate) fn interiors_overlap(a: &[P2; 3], b: &[P2; 3], tol: f64) -> bool {
    for tri in [a, b] {
        for k in 0..3 {
            let p = tri[k];
            let q = tri[(k + 1) % 3];
            let (nx, ny) = (q[1] - p[1], p[0] - q[0]);
            let len = nx.hypot(ny);
            if len == 0.0 {
                continue;
            }
            let proj = |pts: &[P2; 3]| {
                pts.iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                        let d = (v[0] * nx + v[1] * ny) / len;
                        (lo.min(d), hi.max(d))
                    })
            };
            let (alo, ahi) = proj(a);
            let (blo, bhi) = proj(b);
            if ahi.min(bhi) - alo.max(blo) <= tol {
                return false;
            }
        }
    }
    true
}

pub fn graph_check(mesh: &GraphMesh) -> GraphCheckReport {
    let normals: Vec<f64> = mesh.normal_z.iter().flatten().copied().collect();
    let min_normal_z = normals.iter().copied().fold(f64::INFINITY, f64::min);
    let nonpositive_normals = normals.iter().filter(|&&n| n.is_nan() || n <= 0.0).count();

    let projected: Vec<[P2; 3]> = mesh.triangles.iter().map(|t| project(mesh, t)).collect();
    let areas: Vec<f64> = projected.iter().map(signed_area).collect();
    let min_signed_area = areas.iter().copied().fold(f64::INFINITY, f64::min);
    let nonpositive_area_triangles = areas.iter().filter(|&&a| a.is_nan() || a <= 0.0).count();

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in &mesh.vertices {
        for c in 0..2 {
            lo[c] = lo[c].min(v[c]);
            hi[c] = hi[c].max(v[c]);
        }
    }
    let diameter = (hi[0] - lo[0]).hypot(hi[1] - lo[1]).max(1.0);
    let tol = 1e-10 * diameter;

    let boxes: Vec<[f64; 4]> = projected
        .iter()
        .map(|p| {
            let xs = p.map(|v| v[0]);
            let ys = p.map(|v| v[1]);
            [
                xs.iter().copied().fold(f64::INFINITY, f64::min),
                ys.iter().copied().fold(f64::INFINITY, f64::min),
                xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ]
        })
        .collect();
    let mean_size = if boxes.is_empty() {
        1.0
    } else {
        boxes
            .iter()
            .map(|b| (b[2] - b[0]).max(b[3] - b[1]))
            .sum::<f64>()
            / boxes.len() as f64
    };
    let cell = (2.0 * mean_size).max(1e-9 * diameter);
    let key = |x: f64, y: f64| (((x - lo[0]) / cell) as i64, ((y - lo[1]) / cell) as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (t, b) in boxes.iter().enumerate() {
        let (x0, y0) = key(b[0], b[1]);
        let (x1, y1) = key(b[2], b[3]);
        for x in x0..=x1 {
            for y in y0..=y1 {
                buckets.entry((x, y)).or_default().push(t);
            }
        }
    }

    let pairs: Vec<[usize; 2]> = (0..projected.len())
        .into_par_iter()
        .flat_map_iter(|t| {
            let b = boxes[t];
            let (x0, y0) = key(b[0], b[1]);
            let (x1, y1) = key(b[2], b[3]);
            let mut cand: Vec<usize> = Vec::new();
            for x in x0..=x1 {
                for y in y0..=y1 {
                    if let Some(list) = buckets.get(&(x, y)) {
                        cand.extend(list.iter().copied().filter(|&u| u > t));
                    }
                }
            }
            cand.sort_unstable();
            cand.dedup();
            let projected = &projected;
            let boxes = &boxes;
            cand.into_iter().filter_map(move |u| {
                let c = boxes[u];
                let disjoint_boxes = c[0] > b[2] - tol
                    || b[0] > c[2] - tol
                    || c[1] > b[3] - tol
                    || b[1] > c[3] - tol;
                (!disjoint_boxes && interiors_overlap(&projected[t], &projected[u], tol))
                    .then_some([t, u])
            })
        })
        .collect();

    let positive_row_monotone = strictly_decreasing_x1(mesh, &mesh.positive_row);
    let negative_row_monotone = strictly_decreasing_x1(mesh, &mesh.negative_row);
    let passed = nonpositive_normals == 0
        && positive_row_monotone
        && negative_row_monotone
        && nonpositive_area_triangles == 0
        && pairs.is_empty();
    GraphCheckReport {
        vertices: mesh.vertices.len(),
        triangles: mesh.triangles.len(),
        min_normal_z,
        nonpositive_normals,
        positive_row_monotone,
        negative_row_monotone,
        min_signed_area,
        nonpositive_area_triangles,
        overlapping_pairs: pairs.len(),
        overlap_examples: pairs.iter().take(5).copied().collect(),
        passed,
    }
}
