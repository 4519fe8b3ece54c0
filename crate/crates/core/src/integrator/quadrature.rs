//! Globally adaptive 7/15-point Gauss–Kronrod quadrature for integrands with
//! values in `C^3`, on the unit interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Vec3C = [Complex64; 3];

const ZERO3: Vec3C = [Complex64::new(0.0, 0.0); 3];

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rule for [`integrate_unit`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_depth: u32,
    pub max_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_depth: 40,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Vec3C,
    /// Sum of the per-interval `|K15 - G7|` estimates (max over components).
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    depth: u32,
    value: Vec3C,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn add3(a: Vec3C, b: Vec3C) -> Vec3C {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale3(a: Vec3C, s: f64) -> Vec3C {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn gk15<F>(f: &mut F, lo: f64, hi: f64) -> Result<(Vec3C, f64)>
where
    F: FnMut(f64) -> Result<Vec3C>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kronrod = scale3(fc, WGK[7]);
    let mut gauss = scale3(fc, WG[3]);
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = add3(f(center - dx)?, f(center + dx)?);
        kronrod = add3(kronrod, scale3(pair, wk));
        if j % 2 == 1 {
            gauss = add3(gauss, scale3(pair, WG[j / 2]));
        }
    }
    let kronrod = scale3(kronrod, half);
    let gauss = scale3(gauss, half);
    let error = (0..3)
        .map(|c| (kronrod[c] - gauss[c]).norm())
        .fold(0.0, f64::max);
    Ok((kronrod, error))
}

/// Integrates `f` over `[0, 1]`, bisecting the interval with the largest
/// error estimate until the summed estimate drops below `abs_tol`.
pub fn integrate_unit<F>(mut f: F, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<Vec3C>,
{
    let (value, error) = gk15(&mut f, 0.0, 1.0)?;
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        lo: 0.0,
        hi: 1.0,
        depth: 0,
        value,
        error,
    });
    let mut frozen_value = ZERO3;
    let mut frozen_error = 0.0;
    let mut total_error = error;
    let mut count = 1usize;

    while total_error > cfg.abs_tol {
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= cfg.max_depth || count >= cfg.max_intervals {
            frozen_value = add3(frozen_value, worst.value);
            frozen_error += worst.error;
            if worst.error > cfg.abs_tol || count >= cfg.max_intervals {
                let estimate = frozen_error + heap.iter().map(|p| p.error).sum::<f64>();
                return Err(Error::QuadratureFailure {
                    tolerance: cfg.abs_tol,
                    estimate,
                    intervals: count,
                });
            }
            continue;
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        let (lv, le) = gk15(&mut f, worst.lo, mid)?;
        let (rv, re) = gk15(&mut f, mid, worst.hi)?;
        total_error += le + re - worst.error;
        for (lo, hi, value, error) in [(worst.lo, mid, lv, le), (mid, worst.hi, rv, re)] {
            heap.push(Piece {
                lo,
                hi,
                depth: worst.depth + 1,
                value,
                error,
            });
        }
        count += 1;
    }

    // Re-sum from scratch so the reported estimate is not affected by
    // cancellation in the running total.
    let mut value = frozen_value;
    let mut error = frozen_error;
    for p in heap.iter() {
        value = add3(value, p.value);
        error += p.error;
    }
    Ok(QuadratureResult {
        value,
        error,
        intervals: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn polynomials_are_exact() {
        let r = integrate_unit(
            |t| Ok([c(1.0), c(t * t), c(t.powi(7))]),
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!((r.value[0].re - 1.0).abs() < 1e-15);
        assert!((r.value[1].re - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.value[2].re - 0.125).abs() < 1e-15);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn sqrt_endpoint_singularity_converges_with_deep_bisection() {
        let cfg = QuadratureConfig {
            max_depth: 90,
            ..Default::default()
        };
        let r = integrate_unit(|t| Ok([c(1.0 / t.sqrt()), c(0.0), c(0.0)]), &cfg).unwrap();
        assert!((r.value[0].re - 2.0).abs() < 1e-9, "{:?}", r);
        assert!(r.error <= 1e-10);
    }

    #[test]
    fn error_estimate_bounds_true_error() {
        let r = integrate_unit(
            |t| {
                Ok([
                    Complex64::new((10.0 * t).sin(), (3.0 * t).exp()),
                    c(0.0),
                    c(0.0),
                ])
            },
            &QuadratureConfig::default(),
        )
        .unwrap();
        let exact = Complex64::new((1.0 - 10f64.cos()) / 10.0, (3f64.exp() - 1.0) / 3.0);
        assert!((r.value[0] - exact).norm() <= r.error.max(1e-15));
    }

    #[test]
    fn non_integrable_fails() {
        let cfg = QuadratureConfig {
            max_depth: 20,
            ..Default::default()
        };
        let r = integrate_unit(|t| Ok([c(1.0 / t), c(0.0), c(0.0)]), &cfg);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
