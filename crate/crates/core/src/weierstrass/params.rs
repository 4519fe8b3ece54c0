use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unvalidated parameter vector, as read from a JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>,
    #[serde(default)]
    pub b: Vec<f64>,
    pub alpha: Vec<i32>,
    #[serde(default)]
    pub beta: Vec<i32>,
}

/// One factor of `w^2` with its exponent absorbed: `(z - zero) / (z - pole)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Factor {
    pub zero: f64,
    pub pole: f64,
}

/// Which real axis a singular interval (and its cone) lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Positive,
    Negative,
}

/// Validated parameters `(m, n, a, b, alpha, beta)` of one surface.
///
/// `a` is stored ascending (`a_1 < ... < a_{2m}`), `b` in index order
/// `b_1 > b_2 > ... > b_{2n}`, all of `b` negative and all of `a` positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SurfaceParams {
    m: usize,
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    alpha: Vec<i8>,
    beta: Vec<i8>,
    factors: Vec<Factor>,
}

fn check_signs(name: &str, signs: &[i32]) -> Result<Vec<i8>> {
    signs
        .iter()
        .enumerate()
        .map(|(k, &s)| match s {
            1 => Ok(1),
            -1 => Ok(-1),
            other => Err(Error::SignDomain(format!("{name}_{} = {other}", k + 1))),
        })
        .collect()
}

impl SurfaceParams {
    /// Checks the ordering `b_{2n} < ... < b_1 < 0 < a_1 < ... < a_{2m}`,
    /// the list lengths and the sign domain.
    pub fn validate(raw: RawParams) -> Result<Self> {
        let RawParams {
            m,
            n,
            a,
            b,
            alpha,
            beta,
        } = raw;
        if m == 0 {
            return Err(Error::LengthMismatch("m must be at least 1".into()));
        }
        if a.len() != 2 * m {
            return Err(Error::LengthMismatch(format!(
                "|a| = {} but 2m = {}",
                a.len(),
                2 * m
            )));
        }
        if b.len() != 2 * n {
            return Err(Error::LengthMismatch(format!(
                "|b| = {} but 2n = {}",
                b.len(),
                2 * n
            )));
        }
        if alpha.len() != m {
            return Err(Error::LengthMismatch(format!(
                "|alpha| = {} but m = {m}",
                alpha.len()
            )));
        }
        if beta.len() != n {
            return Err(Error::LengthMismatch(format!(
                "|beta| = {} but n = {n}",
                beta.len()
            )));
        }
        if let Some(x) = a.iter().chain(b.iter()).find(|x| !x.is_finite()) {
            return Err(Error::OrderingViolation(format!("non-finite point {x}")));
        }
        if a[0] <= 0.0 {
            return Err(Error::OrderingViolation(format!(
                "a_1 = {} must be positive",
                a[0]
            )));
        }
        for j in 1..a.len() {
            if a[j] <= a[j - 1] {
                return Err(Error::OrderingViolation(format!(
                    "need a_{} < a_{}, got {} >= {}",
                    j,
                    j + 1,
                    a[j - 1],
                    a[j]
                )));
            }
        }
        if let Some(&b1) = b.first() {
            if b1 >= 0.0 {
                return Err(Error::OrderingViolation(format!(
                    "b_1 = {b1} must be negative"
                )));
            }
        }
        for k in 1..b.len() {
            if b[k] >= b[k - 1] {
                return Err(Error::OrderingViolation(format!(
                    "need b_{} < b_{}, got {} >= {}",
                    k + 1,
                    k,
                    b[k],
                    b[k - 1]
                )));
            }
        }
        let alpha = check_signs("alpha", &alpha)?;
        let beta = check_signs("beta", &beta)?;

        let mut factors = Vec::with_capacity(m + n);
        for k in 0..m {
            let (num, den) = (a[2 * k + 1], a[2 * k]);
            factors.push(if alpha[k] > 0 {
                Factor {
                    zero: num,
                    pole: den,
                }
            } else {
                Factor {
                    zero: den,
                    pole: num,
                }
            });
        }
        for k in 0..n {
            let (num, den) = (b[2 * k], b[2 * k + 1]);
            factors.push(if beta[k] > 0 {
                Factor {
                    zero: num,
                    pole: den,
                }
            } else {
                Factor {
                    zero: den,
                    pole: num,
                }
            });
        }

        Ok(Self {
            m,
            n,
            a,
            b,
            alpha,
            beta,
            factors,
        })
    }

    /// Convenience constructor from already typed lists.
    pub fn new(a: Vec<f64>, b: Vec<f64>, alpha: Vec<i32>, beta: Vec<i32>) -> Result<Self> {
        Self::validate(RawParams {
            m: alpha.len(),
            n: beta.len(),
            a,
            b,
            alpha,
            beta,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawParams = serde_json::from_str(text)?;
        Self::validate(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("params serialize")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn alpha(&self) -> &[i8] {
        &self.alpha
    }

    pub fn beta(&self) -> &[i8] {
        &self.beta
    }

    pub(crate) fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// All `2(m + n)` branch points, i.e. the zeros and poles of `w^2`.
    pub fn branch_points(&self) -> impl Iterator<Item = f64> + '_ {
        self.a.iter().chain(self.b.iter()).copied()
    }

    /// Largest modulus among the branch points.
    pub fn outer_radius(&self) -> f64 {
        let a_max = self.a[2 * self.m - 1];
        let b_max = self.b.last().map_or(0.0, |b| -b);
        a_max.max(b_max)
    }

    /// Smallest modulus among the branch points.
    pub fn inner_radius(&self) -> f64 {
        let b_min = self.b.first().map_or(f64::INFINITY, |b| -b);
        self.a[0].min(b_min)
    }

    /// Smallest distance between two consecutive points of `{0} ∪ {a_j} ∪ {b_k}`.
    pub fn min_gap(&self) -> f64 {
        let mut pts: Vec<f64> = self.branch_points().chain(std::iter::once(0.0)).collect();
        pts.sort_by(f64::total_cmp);
        pts.windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Sign of the exponent that multiplies the factor in which the given
    /// interval appears, along with the axis. `index` is zero based and runs
    /// over the `m` positive intervals followed by the `n` negative ones.
    pub fn interval_sign(&self, index: usize) -> (Axis, i8) {
        if index < self.m {
            (Axis::Positive, self.alpha[index])
        } else {
            (Axis::Negative, self.beta[index - self.m])
        }
    }

    /// Dimension of the moduli space after fixing `a_1 = 1`.
    pub fn moduli_dimension(&self) -> usize {
        2 * (self.m + self.n) - 1
    }

    pub(crate) fn to_raw(&self) -> RawParams {
        RawParams {
            m: self.m,
            n: self.n,
            a: self.a.clone(),
            b: self.b.clone(),
            alpha: self.alpha.iter().map(|&s| s as i32).collect(),
            beta: self.beta.iter().map(|&s| s as i32).collect(),
        }
    }
}

impl TryFrom<RawParams> for SurfaceParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Self::validate(raw)
    }
}

impl From<SurfaceParams> for RawParams {
    fn from(p: SurfaceParams) -> Self {
        p.to_raw()
    }
}
