//! Behaviour of the end at `z = 0`, cone-direction sign conventions, and
//! re-solving one coordinate so that both ends are horizontal.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::forms::Extended;
use super::params::{Axis, RawParams, SurfaceParams};
use crate::error::{Error, Result};

/// Direction a cone-like singularity points in (timelike axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

/// Coordinate re-solved by [`SurfaceParams::normalize_horizontal_end`],
/// using the 1-based indices `a_j` / `b_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeCoordinate {
    A(usize),
    B(usize),
}

/// Asymptotic direction of the end at `z = 0`, followed towards `z -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndTilt {
    Horizontal,
    Upward,
    Downward,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndBehaviour {
    pub w0: f64,
    /// `dx3/dx1` along the end, `(w0^2 - 1) / (w0^2 + 1)`.
    pub slope: f64,
    pub tilt: EndTilt,
}

impl SurfaceParams {
    /// Direction predicted by the sign convention `alpha_j = -1 => up` on the
    /// positive axis and `beta_k = +1 => up` on the negative axis.
    pub fn predicted_direction(&self, index: usize) -> Direction {
        match self.interval_sign(index) {
            (Axis::Positive, -1) | (Axis::Negative, 1) => Direction::Up,
            _ => Direction::Down,
        }
    }

    /// The opposite convention (`alpha_j = 1 => up`, `beta_k = 1 => down`).
    pub fn alternate_direction(&self, index: usize) -> Direction {
        self.predicted_direction(index).flip()
    }

    pub fn all_same_direction(&self) -> bool {
        let first = self.predicted_direction(0);
        (1..self.m() + self.n()).all(|k| self.predicted_direction(k) == first)
    }

    /// `w(0)`, the positive root of `prod (a_{2k}/a_{2k-1})^alpha_k prod (b_{2k-1}/b_{2k})^beta_k`.
    pub fn end_value_w0(&self) -> f64 {
        match self.w_squared(Complex64::new(0.0, 0.0)) {
            Extended::Finite(v) => v.re.sqrt(),
            Extended::Infinite => unreachable!("0 is never a branch point"),
        }
    }

    pub fn end_behaviour(&self) -> EndBehaviour {
        let w0 = self.end_value_w0();
        let w2 = w0 * w0;
        let slope = (w2 - 1.0) / (w2 + 1.0);
        let tilt = if (w0 - 1.0).abs() <= 1e-12 {
            EndTilt::Horizontal
        } else if w0 > 1.0 {
            EndTilt::Upward
        } else {
            EndTilt::Downward
        };
        EndBehaviour { w0, slope, tilt }
    }

    /// Re-solves one coordinate in closed form so that `w(0) = 1`.
    pub fn normalize_horizontal_end(&self, free: FreeCoordinate) -> Result<Self> {
        if self.all_same_direction() {
            return Err(Error::Infeasible(format!(
                "all {} cones point {}; the end at z = 0 cannot be horizontal",
                self.m() + self.n(),
                self.predicted_direction(0).as_str()
            )));
        }
        self.solve_unit_end(free).map_err(|e| match e {
            Error::OrderingViolation(msg) => Error::Infeasible(msg),
            other => other,
        })
    }

    /// Solves `w^2(0) = 1` for the chosen coordinate without any direction
    /// precondition; ordering failures are reported as `OrderingViolation`.
    pub(crate) fn solve_unit_end(&self, free: FreeCoordinate) -> Result<Self> {
        let mut raw: RawParams = self.to_raw();
        let (factor, exponent, is_numerator) = match free {
            FreeCoordinate::A(j) if (1..=2 * self.m()).contains(&j) => {
                let k = (j - 1) / 2;
                (k, self.alpha()[k], j % 2 == 0)
            }
            FreeCoordinate::B(j) if (1..=2 * self.n()).contains(&j) => {
                let k = (j - 1) / 2;
                (self.m() + k, self.beta()[k], j % 2 == 1)
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "free coordinate {other:?} out of range"
                )))
            }
        };
        // w^2(0) = factor(0) * rest, factor(0) = (num / den)^exponent.
        let (num, den) = if factor < self.m() {
            (self.a()[2 * factor + 1], self.a()[2 * factor])
        } else {
            let k = factor - self.m();
            (self.b()[2 * k], self.b()[2 * k + 1])
        };
        let own = (num / den).powi(exponent as i32);
        let rest = self.end_value_w0().powi(2) / own;
        let e = exponent as i32;
        let solved = if is_numerator {
            den * rest.powi(-e)
        } else {
            num * rest.powi(e)
        };
        match free {
            FreeCoordinate::A(j) => raw.a[j - 1] = solved,
            FreeCoordinate::B(j) => raw.b[j - 1] = solved,
        }
        SurfaceParams::validate(raw).map_err(|e| match e {
            Error::OrderingViolation(msg) => Error::OrderingViolation(format!(
                "solved {free:?} = {solved} breaks the ordering ({msg})"
            )),
            other => other,
        })
    }

    /// Coordinates tried by default when both ends must be horizontal,
    /// outermost first.
    pub fn default_free_coordinates(&self) -> Vec<FreeCoordinate> {
        let mut out = Vec::new();
        for k in (1..=2 * self.n()).rev() {
            out.push(FreeCoordinate::B(k));
        }
        for j in (2..=2 * self.m()).rev() {
            out.push(FreeCoordinate::A(j));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn end_value_examples() {
        let p = SurfaceParams::new(vec![1.0, 2.0], vec![], vec![1], vec![]).unwrap();
        assert!((p.end_value_w0() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.end_behaviour().tilt, EndTilt::Upward);

        let p = SurfaceParams::new(vec![1.0, 2.0], vec![-1.0, -2.0], vec![1], vec![1]).unwrap();
        assert!((p.end_value_w0() - 1.0).abs() < 1e-15);
        assert_eq!(p.end_behaviour().tilt, EndTilt::Horizontal);
    }

    #[test]
    fn all_down_positive_axis_has_w0_above_one() {
        let p = SurfaceParams::new(
            vec![1.0, 1.5, 2.0, 4.0, 4.5, 7.0],
            vec![],
            vec![1, 1, 1],
            vec![],
        )
        .unwrap();
        assert!(p.end_value_w0() > 1.0);
    }

    #[test]
    fn conventions() {
        let p = SurfaceParams::new(
            vec![1.0, 2.0, 3.0, 4.0],
            vec![-1.0, -2.0],
            vec![1, -1],
            vec![1],
        )
        .unwrap();
        assert_eq!(p.predicted_direction(0), Direction::Down);
        assert_eq!(p.predicted_direction(1), Direction::Up);
        assert_eq!(p.predicted_direction(2), Direction::Up);
        assert_eq!(p.alternate_direction(2), Direction::Down);
        assert!(!p.all_same_direction());
    }

    #[test]
    fn normalize_solves_b2() {
        // alpha = +1 (down), beta = +1 (up): mixed directions.
        let p = SurfaceParams::new(vec![1.0, 2.0], vec![-1.0, -5.0], vec![1], vec![1]).unwrap();
        let q = p.normalize_horizontal_end(FreeCoordinate::B(2)).unwrap();
        assert!((q.b()[1] + 2.0).abs() < 1e-15);
        assert!((q.end_value_w0() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_cone_is_infeasible() {
        let p = SurfaceParams::new(vec![1.0, 2.0], vec![], vec![1], vec![]).unwrap();
        assert!(matches!(
            p.normalize_horizontal_end(FreeCoordinate::A(2)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn ordering_failure_is_infeasible() {
        // Solving a_2 here would need a_2 < a_1.
        let p = SurfaceParams::new(vec![1.0, 2.0, 3.0, 30.0], vec![], vec![1, -1], vec![]).unwrap();
        // w^2(0) = 2 * (1/10) = 0.2; solve a_2: a_2 = a_1 / rest = 1 / 0.1 = 10 > a_3.
        let err = p
            .normalize_horizontal_end(FreeCoordinate::A(2))
            .unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)), "{err}");
    }

    #[test]
    fn normalize_every_coordinate_of_mixed_2_1() {
        let p = SurfaceParams::new(
            vec![1.0, 1.7, 3.2, 4.1],
            vec![-0.8, -2.3],
            vec![1, -1],
            vec![-1],
        )
        .unwrap();
        let mut solved = 0;
        for free in p.default_free_coordinates() {
            if let Ok(q) = p.normalize_horizontal_end(free) {
                assert!((q.end_value_w0() - 1.0).abs() < 1e-12);
                solved += 1;
            }
        }
        assert!(solved > 0);
    }
}
