//! Pointwise evaluation of `w^2`, the branch `w`, the Gauss map and the
//! form triple.
//!
//! With `psi = z * phi` the forms are
//! `psi = (-(1/w + w)/2, i, (1/w - w)/2)` and `G = (1 + w)/(1 - w)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::SurfaceParams;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A complex value on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extended {
    Finite(Complex64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinite)
    }

    /// Modulus, `+inf` at infinity.
    pub fn norm(self) -> f64 {
        match self {
            Extended::Finite(v) => v.norm(),
            Extended::Infinite => f64::INFINITY,
        }
    }
}

/// A domain point with its branch-resolved `w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchedValue {
    pub z: Complex64,
    pub w: Extended,
}

/// Coefficients of `dz` for `(phi_1, phi_2, phi_3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormTriple {
    pub phi1: Complex64,
    pub phi2: Complex64,
    pub phi3: Complex64,
}

impl FormTriple {
    /// `phi1^2 + phi2^2 - phi3^2`.
    pub fn conformality_residual(&self) -> Complex64 {
        self.phi1 * self.phi1 + self.phi2 * self.phi2 - self.phi3 * self.phi3
    }

    pub fn norm_sqr(&self) -> f64 {
        self.phi1.norm_sqr() + self.phi2.norm_sqr() + self.phi3.norm_sqr()
    }
}

/// Gauss map value and the Euclidean-normalized normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussValue {
    pub g: Extended,
    pub nu: [f64; 3],
}

/// Square root with `Re >= 0`, and `Im >= 0` when `Re = 0`.
pub fn branch_sqrt(w2: Complex64) -> Complex64 {
    let mut s = w2.sqrt();
    if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
        s = -s;
    }
    s
}

/// Gauss map as a function of `w`; `w = inf` maps to `-1`.
pub fn gauss_of_w(w: Extended) -> Extended {
    match w {
        Extended::Infinite => Extended::Finite(-ONE),
        Extended::Finite(w) if w == ONE => Extended::Infinite,
        Extended::Finite(w) => Extended::Finite((ONE + w) / (ONE - w)),
    }
}

/// Unit (Euclidean) normal direction for a Gauss value. The sign is that of
/// the hyperboloid normal, so the third component is positive iff `|G| >= 1`;
/// on `|G| = 1` the limit from `|G| > 1` is returned.
pub fn normal_of_gauss(g: Extended) -> [f64; 3] {
    match g {
        Extended::Infinite => [0.0, 0.0, 1.0],
        Extended::Finite(g) => {
            let m2 = g.norm_sqr();
            let v = [-2.0 * g.re, -2.0 * g.im, m2 + 1.0];
            let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let s = if m2 < 1.0 { -1.0 } else { 1.0 } / len;
            [v[0] * s, v[1] * s, v[2] * s]
        }
    }
}

impl SurfaceParams {
    /// The defining rational product; `Infinite` exactly at the poles.
    pub fn w_squared(&self, z: Complex64) -> Extended {
        let mut prod = ONE;
        for f in self.factors() {
            let den = z - f.pole;
            if den.re == 0.0 && den.im == 0.0 {
                return Extended::Infinite;
            }
            prod *= (z - f.zero) / den;
        }
        Extended::Finite(prod)
    }

    /// `d log(w^2) / dz`.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        self.factors()
            .iter()
            .map(|f| (z - f.zero).inv() - (z - f.pole).inv())
            .sum()
    }

    pub fn branch_w(&self, z: Complex64) -> BranchedValue {
        let w = match self.w_squared(z) {
            Extended::Finite(w2) => Extended::Finite(branch_sqrt(w2)),
            Extended::Infinite => Extended::Infinite,
        };
        BranchedValue { z, w }
    }

    pub fn gauss(&self, z: Complex64) -> GaussValue {
        let g = gauss_of_w(self.branch_w(z).w);
        GaussValue {
            g,
            nu: normal_of_gauss(g),
        }
    }

    /// Regular `w` at `z`, refusing branch points and the origin.
    fn regular_w(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::BranchPointEvaluation(z));
        }
        match self.branch_w(z).w {
            Extended::Finite(w) if w.norm_sqr() > 0.0 => Ok(w),
            _ => Err(Error::BranchPointEvaluation(z)),
        }
    }

    pub fn phi(&self, z: Complex64) -> Result<FormTriple> {
        let w = self.regular_w(z)?;
        let zi = z.inv();
        let wi = w.inv();
        Ok(FormTriple {
            phi1: -0.5 * (wi + w) * zi,
            phi2: I * zi,
            phi3: 0.5 * (wi - w) * zi,
        })
    }

    /// Coefficient of `dz` in `dh = -phi_3`.
    pub fn dh(&self, z: Complex64) -> Result<Complex64> {
        Ok(-self.phi(z)?.phi3)
    }

    /// Conformal factor of `ds^2` with respect to `|dz|^2`.
    pub fn metric_factor(&self, z: Complex64) -> Result<f64> {
        let forms = self.phi(z)?;
        match self.gauss(z).g {
            Extended::Finite(g) if g.norm_sqr() > 0.0 => {
                let m = g.norm();
                let k = 1.0 / m - m;
                Ok(k * k * forms.phi3.norm_sqr() / 4.0)
            }
            _ => Ok(0.5 * (forms.phi1.norm_sqr() + forms.phi2.norm_sqr() - forms.phi3.norm_sqr())),
        }
    }

    /// Analytic `dG/dz` along the chosen branch.
    pub fn gauss_derivative(&self, z: Complex64) -> Result<Complex64> {
        let w = self.regular_w(z)?;
        if w == ONE {
            return Err(Error::DegenerateGauss(z));
        }
        let dw = 0.5 * w * self.log_derivative(z);
        let d = ONE - w;
        Ok(2.0 * dw / (d * d))
    }

    /// Coefficient of `dz^2` in the Hopf differential `Q = dG dh / G`.
    pub fn hopf(&self, z: Complex64) -> Result<Complex64> {
        let w = self.regular_w(z)?;
        if w == ONE || w == -ONE {
            return Err(Error::DegenerateGauss(z));
        }
        let g = (ONE + w) / (ONE - w);
        Ok(self.gauss_derivative(z)? * self.dh(z)? / g)
    }

    /// `dG / (G dh)`, which only depends on `w^2`:
    /// `-2 w^2 z (log w^2)' / (1 - w^2)^2`.
    pub fn dg_over_g_dh(&self, z: Complex64) -> Result<Complex64> {
        match self.w_squared(z) {
            Extended::Finite(w2) if w2 != ONE => {
                let d = ONE - w2;
                Ok(-2.0 * w2 * z * self.log_derivative(z) / (d * d))
            }
            _ => Err(Error::DegenerateGauss(z)),
        }
    }
}
