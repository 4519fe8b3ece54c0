//! Independent reference computations shared by the integration tests. Nothing
//! here calls into the library's evaluation code: the rational product, its
//! branch and the forms are rebuilt from the raw lists, and integrals use
//! composite Gauss–Legendre rules from `gauss-quad`.
#![allow(dead_code)]

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

pub type C = Complex64;

#[derive(Clone, Debug)]
pub struct Raw {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub alpha: Vec<i32>,
    pub beta: Vec<i32>,
}

impl Raw {
    pub fn new(a: &[f64], b: &[f64], alpha: &[i32], beta: &[i32]) -> Self {
        Self {
            a: a.to_vec(),
            b: b.to_vec(),
            alpha: alpha.to_vec(),
            beta: beta.to_vec(),
        }
    }

    pub fn params(&self) -> maxgraph::SurfaceParams {
        maxgraph::SurfaceParams::new(
            self.a.clone(),
            self.b.clone(),
            self.alpha.clone(),
            self.beta.clone(),
        )
        .unwrap()
    }

    /// `w^2` written literally as the product of powers.
    pub fn w2(&self, z: C) -> C {
        let mut p = C::new(1.0, 0.0);
        for (k, &al) in self.alpha.iter().enumerate() {
            let q = (z - self.a[2 * k + 1]) / (z - self.a[2 * k]);
            p *= q.powi(al);
        }
        for (k, &be) in self.beta.iter().enumerate() {
            let q = (z - self.b[2 * k]) / (z - self.b[2 * k + 1]);
            p *= q.powi(be);
        }
        p
    }

    /// Root with non-negative real part, computed through the polar form.
    pub fn w(&self, z: C) -> C {
        let (r, t) = self.w2(z).to_polar();
        let mut w = C::from_polar(r.sqrt(), 0.5 * t);
        if w.re < 0.0 || (w.re == 0.0 && w.im < 0.0) {
            w = -w;
        }
        w
    }

    pub fn phi(&self, z: C) -> [C; 3] {
        let w = self.w(z);
        [
            -(1.0 / w + w) / (2.0 * z),
            C::new(0.0, 1.0) / z,
            (1.0 / w - w) / (2.0 * z),
        ]
    }

    pub fn base(&self) -> f64 {
        self.a.last().unwrap() + 1.0
    }
}

/// `Re int phi dz` along the polyline, each edge split into `panels` pieces
/// with a `deg`-point Gauss–Legendre rule. When `graded_end` is set the last
/// edge uses `z = end - (end - start) u^2`, which absorbs an inverse square
/// root at the final point.
pub fn integrate_polyline(
    raw: &Raw,
    points: &[C],
    panels: usize,
    deg: usize,
    graded_end: bool,
) -> [f64; 3] {
    let rule = GaussLegendre::new(deg).unwrap();
    let nodes = rule.as_node_weight_pairs();
    let mut acc = [0.0; 3];
    let last = points.len() - 2;
    for (e, w) in points.windows(2).enumerate() {
        let (p0, p1) = (w[0], w[1]);
        let graded = graded_end && e == last;
        for k in 0..panels {
            let lo = k as f64 / panels as f64;
            let hi = (k + 1) as f64 / panels as f64;
            for &(x, wt) in nodes {
                let u = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
                let du = 0.5 * (hi - lo) * wt;
                let (z, dz) = if graded {
                    // z = p1 + (p0 - p1) s^2 with s = 1 - u.
                    let s = 1.0 - u;
                    (p1 + (p0 - p1) * s * s, -(p0 - p1) * 2.0 * s)
                } else {
                    (p0 + (p1 - p0) * u, p1 - p0)
                };
                let phi = raw.phi(z);
                for c in 0..3 {
                    acc[c] += (phi[c] * dz).re * du;
                }
            }
        }
    }
    acc
}

pub fn max_diff(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|c| (a[c] - b[c]).abs()).fold(0.0, f64::max)
}

/// Random valid configurations with `1 <= m <= max_m`, `0 <= n <= max_n`
/// and gaps between neighbouring branch points of at least `0.2`.
pub fn arb_raw(max_m: usize, max_n: usize) -> impl proptest::strategy::Strategy<Value = Raw> {
    use proptest::prelude::*;
    (1..=max_m, 0..=max_n).prop_flat_map(|(m, n)| {
        (
            proptest::collection::vec(0.2f64..1.5, 2 * m),
            proptest::collection::vec(0.2f64..1.5, 2 * n),
            proptest::collection::vec(prop_oneof![Just(1i32), Just(-1i32)], m),
            proptest::collection::vec(prop_oneof![Just(1i32), Just(-1i32)], n),
        )
            .prop_map(|(ga, gb, alpha, beta)| {
                let a = ga
                    .iter()
                    .scan(0.0, |s, g| {
                        *s += g;
                        Some(*s)
                    })
                    .collect::<Vec<_>>();
                let b = gb
                    .iter()
                    .scan(0.0, |s, g| {
                        *s -= g;
                        Some(*s)
                    })
                    .collect::<Vec<_>>();
                Raw { a, b, alpha, beta }
            })
    })
}

/// Gauss map from the reference `w`.
pub fn gauss(raw: &Raw, z: C) -> C {
    let w = raw.w(z);
    (1.0 + w) / (1.0 - w)
}
