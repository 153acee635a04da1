//! Initial data on the delay interval `[-1, 0]`.
//!
//! Forward construction of solutions through the sign-type feedback needs
//! the initial function to cross zero transversally, so the piecewise
//! linear variant rejects tangential zeros and identically-zero stretches
//! (the all-zero function is the one exception: it generates the zero
//! solution).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum HistoryFunction {
    /// Constant value on `[-1, 0]`.
    Constant(f64),
    /// Piecewise-linear interpolant through `(s, x)` knots with
    /// `s` strictly increasing from -1 to 0.
    PiecewiseLinear(Vec<(f64, f64)>),
}

/// Sign structure of the history: the sign right after `s = -1` and the
/// ordered transversal zeros in `(-1, 0)` where it flips.
#[derive(Debug, Clone)]
pub struct SignProfile {
    pub initial: i8,
    pub flips: Vec<f64>,
}

fn sgn(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

impl HistoryFunction {
    pub fn constant(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidHistory(format!(
                "constant history must be finite, got {value}"
            )));
        }
        Ok(Self::Constant(value))
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidHistory(
                "need at least the two endpoint knots".into(),
            ));
        }
        if knots[0].0 != -1.0 || knots[knots.len() - 1].0 != 0.0 {
            return Err(Error::InvalidHistory(
                "knot abscissae must start at -1 and end at 0".into(),
            ));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidHistory(format!(
                    "knot abscissae must be strictly increasing: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        for &(s, x) in &knots {
            if !s.is_finite() || !x.is_finite() {
                return Err(Error::InvalidHistory(format!(
                    "non-finite knot ({s}, {x})"
                )));
            }
        }
        let all_zero = knots.iter().all(|&(_, x)| x == 0.0);
        if !all_zero {
            // reject identically-zero stretches
            for w in knots.windows(2) {
                if w[0].1 == 0.0 && w[1].1 == 0.0 {
                    return Err(Error::InvalidHistory(format!(
                        "history vanishes identically on [{}, {}]",
                        w[0].0, w[1].0
                    )));
                }
            }
            // interior knot zeros must be sign changes
            for i in 1..knots.len() - 1 {
                if knots[i].1 == 0.0 {
                    let before = sgn(knots[i - 1].1);
                    let after = sgn(knots[i + 1].1);
                    if before * after != -1 {
                        return Err(Error::InvalidHistory(format!(
                            "tangential zero at s = {}: the history must cross zero",
                            knots[i].0
                        )));
                    }
                }
            }
        }
        Ok(Self::PiecewiseLinear(knots))
    }

    /// True for the identically-zero initial function.
    pub fn is_zero(&self) -> bool {
        match self {
            Self::Constant(v) => *v == 0.0,
            Self::PiecewiseLinear(knots) => knots.iter().all(|&(_, x)| x == 0.0),
        }
    }

    /// Evaluate at `s` in `[-1, 0]` (clamped against rounding dust).
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::PiecewiseLinear(knots) => {
                let s = s.clamp(-1.0, 0.0);
                // index of the piece containing s
                let mut i = knots.partition_point(|&(sk, _)| sk <= s);
                i = i.clamp(1, knots.len() - 1);
                let (s0, x0) = knots[i - 1];
                let (s1, x1) = knots[i];
                x0 + (x1 - x0) * (s - s0) / (s1 - s0)
            }
        }
    }

    /// Value at the right endpoint, the trajectory's starting state.
    pub fn value_at_end(&self) -> f64 {
        self.eval(0.0)
    }

    /// Sign as `s -> 0` from the left (0 only for the zero function).
    pub fn sign_before_end(&self) -> i8 {
        let profile = self.sign_profile();
        if profile.flips.len() % 2 == 0 {
            profile.initial
        } else {
            -profile.initial
        }
    }

    /// Sign right after `s = -1` plus the interior sign-change instants.
    ///
    /// A zero exactly at `s = 0` is not listed: it belongs to the
    /// trajectory, which starts there.
    pub fn sign_profile(&self) -> SignProfile {
        match self {
            Self::Constant(v) => SignProfile {
                initial: sgn(*v),
                flips: Vec::new(),
            },
            Self::PiecewiseLinear(knots) => {
                let initial = knots
                    .iter()
                    .map(|&(_, x)| sgn(x))
                    .find(|&s| s != 0)
                    .unwrap_or(0);
                let mut flips = Vec::new();
                for i in 0..knots.len() - 1 {
                    let (s0, x0) = knots[i];
                    let (s1, x1) = knots[i + 1];
                    if x0 == 0.0 && i > 0 && s0 > -1.0 {
                        flips.push(s0);
                    } else if x0 != 0.0 && x1 != 0.0 && sgn(x0) != sgn(x1) {
                        flips.push(s0 - x0 * (s1 - s0) / (x1 - x0));
                    }
                }
                SignProfile { initial, flips }
            }
        }
    }
}
