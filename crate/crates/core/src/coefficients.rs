//! The periodic multiplicative coefficient and the relay nonlinearity.
//!
//! The forcing coefficient takes the plateau values `a1`, `a2`, `-a3` on
//! consecutive sub-intervals of length `p1`, `p2`, `p3` and repeats with
//! period `T = p1 + p2 + p3`. The feedback is the negative relay
//! `-sign(x)`, optionally replaced by a continuous ramp of half-width
//! `delta` around the jump. The coefficient gets matching linear ramps of
//! half-width `delta` around its switch instants.

use crate::error::{Error, Result};

/// The six positive constants defining the periodic coefficient.
///
/// `a3` is stored as a positive magnitude; the third plateau value is
/// `-a3`. Use [`ingest_params`] to build from table-style input where the
/// third column carries the sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientParams {
    a1: f64,
    a2: f64,
    a3: f64,
    p1: f64,
    p2: f64,
    p3: f64,
}

impl CoefficientParams {
    /// All six constants must be strictly positive and finite.
    pub fn new(a1: f64, a2: f64, a3: f64, p1: f64, p2: f64, p3: f64) -> Result<Self> {
        for (name, v) in [
            ("a1", a1),
            ("a2", a2),
            ("a3", a3),
            ("p1", p1),
            ("p2", p2),
            ("p3", p3),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(Self {
            a1,
            a2,
            a3,
            p1,
            p2,
            p3,
        })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }
    pub fn a2(&self) -> f64 {
        self.a2
    }
    /// Magnitude of the negative third plateau.
    pub fn a3(&self) -> f64 {
        self.a3
    }
    pub fn p1(&self) -> f64 {
        self.p1
    }
    pub fn p2(&self) -> f64 {
        self.p2
    }
    pub fn p3(&self) -> f64 {
        self.p3
    }

    /// Forcing period `T = p1 + p2 + p3`.
    pub fn period(&self) -> f64 {
        self.p1 + self.p2 + self.p3
    }

    /// Shortest plateau duration.
    pub fn min_plateau(&self) -> f64 {
        self.p1.min(self.p2).min(self.p3)
    }

    /// Plateau value by segment index: 0 -> a1, 1 -> a2, 2 -> -a3.
    pub(crate) fn plateau_value(&self, segment: usize) -> f64 {
        match segment {
            0 => self.a1,
            1 => self.a2,
            _ => -self.a3,
        }
    }
}

/// Result of ingesting table-style signed input.
#[derive(Debug, Clone, Copy)]
pub struct IngestedParams {
    pub params: CoefficientParams,
    /// Set when the third value was given positive: the mixed-feedback
    /// regime expects it negative. Params are still constructed.
    pub sign_warning: bool,
}

/// Build params from the table column order `(a1, a2, a3_signed, p1, p2, p3)`.
///
/// The third column is written signed (normally negative); its magnitude
/// becomes `a3`.
pub fn ingest_params(
    a1: f64,
    a2: f64,
    a3_signed: f64,
    p1: f64,
    p2: f64,
    p3: f64,
) -> Result<IngestedParams> {
    if a3_signed == 0.0 || !a3_signed.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "a3_signed must be finite and nonzero, got {a3_signed}"
        )));
    }
    let params = CoefficientParams::new(a1, a2, a3_signed.abs(), p1, p2, p3)?;
    Ok(IngestedParams {
        params,
        sign_warning: a3_signed > 0.0,
    })
}

/// Half-width of the linear smoothing ramps. Zero selects the sharp
/// (discontinuous) coefficient and relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingDelta(f64);

impl SmoothingDelta {
    pub const SHARP: SmoothingDelta = SmoothingDelta(0.0);

    pub fn new(delta: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "delta must be finite and >= 0, got {delta}"
            )));
        }
        Ok(Self(delta))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn is_sharp(&self) -> bool {
        self.0 == 0.0
    }

    /// Ramp windows must not overlap: `delta` below half the shortest
    /// plateau duration.
    pub fn check_ramp_windows(&self, params: &CoefficientParams) -> Result<()> {
        let min_plateau = params.min_plateau();
        if self.0 >= 0.5 * min_plateau {
            return Err(Error::DeltaTooLarge {
                delta: self.0,
                min_plateau,
            });
        }
        Ok(())
    }
}

/// Floored modulo into `[0, period)`; valid for negative `t`.
fn wrap(t: f64, period: f64) -> f64 {
    let r = t.rem_euclid(period);
    // rem_euclid may round up to `period` for tiny negative inputs
    if r >= period {
        0.0
    } else {
        r
    }
}

/// The sharp T-periodic coefficient: `a1` on `[0, p1)`, `a2` on
/// `[p1, p1+p2)`, `-a3` on `[p1+p2, T)`, extended periodically.
pub fn coefficient(params: &CoefficientParams, t: f64) -> f64 {
    let r = wrap(t, params.period());
    if r < params.p1 {
        params.a1
    } else if r < params.p1 + params.p2 {
        params.a2
    } else {
        -params.a3
    }
}

/// The negative relay feedback `-sign(x)`.
pub fn relay_feedback(x: f64) -> f64 {
    if x < 0.0 {
        1.0
    } else if x > 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Continuous odd relay: equal to `relay_feedback` for `|x| >= delta`,
/// linear with slope `-1/delta` on `(-delta, delta)`.
///
/// A sharp `delta` is rejected: call [`relay_feedback`] instead.
pub fn relay_feedback_smoothed(x: f64, delta: SmoothingDelta) -> Result<f64> {
    if delta.is_sharp() {
        return Err(Error::SharpDeltaNotSmoothable);
    }
    let d = delta.value();
    if x <= -d {
        Ok(1.0)
    } else if x >= d {
        Ok(-1.0)
    } else {
        Ok(-x / d)
    }
}

/// Continuous T-periodic coefficient: plateau values joined by linear
/// ramps of half-width `delta` centered at the switch instants
/// `{0, p1, p1+p2}` (mod T). `delta = 0` reproduces [`coefficient`]
/// exactly.
pub fn coefficient_smoothed(params: &CoefficientParams, delta: SmoothingDelta, t: f64) -> f64 {
    let d = delta.value();
    let period = params.period();
    let r = wrap(t, period);
    let s1 = params.p1;
    let s2 = params.p1 + params.p2;
    let (a1, a2, a3) = (params.a1, params.a2, -params.a3);
    if r < d {
        // ramp a3 -> a1 across the period boundary, entering side
        a3 + (a1 - a3) / (2.0 * d) * (r + d)
    } else if r > period - d {
        // same ramp, leaving side
        a3 + (a1 - a3) / (2.0 * d) * (r - (period - d))
    } else if (r - s1).abs() < d {
        a1 + (a2 - a1) / (2.0 * d) * (r - (s1 - d))
    } else if (r - s2).abs() < d {
        a2 + (a3 - a2) / (2.0 * d) * (r - (s2 - d))
    } else if r < s1 {
        a1
    } else if r < s2 {
        a2
    } else {
        a3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1_row1() -> CoefficientParams {
        CoefficientParams::new(0.5, 0.1, 0.1, 3.0, 1.0, 0.5).unwrap()
    }

    #[test]
    fn sharp_coefficient_plateaus() {
        let p = table1_row1();
        assert_eq!(coefficient(&p, 0.0), 0.5);
        assert_eq!(coefficient(&p, 3.5), 0.1);
        assert_eq!(coefficient(&p, 4.25), -0.1);
        // periodicity: 4.75 mod 4.5 = 0.25
        assert_eq!(coefficient(&p, 4.75), 0.5);
    }

    #[test]
    fn sharp_coefficient_periodic_for_negative_t() {
        let p = table1_row1();
        let period = p.period();
        for &t in &[-13.2, -4.5, -0.25, 0.0, 0.1, 2.999, 3.0, 4.4999, 17.3] {
            assert_eq!(coefficient(&p, t), coefficient(&p, t + period), "t={t}");
            assert_eq!(
                coefficient(&p, t),
                coefficient(&p, t + 3.0 * period),
                "t={t}"
            );
        }
    }

    #[test]
    fn relay_values() {
        assert_eq!(relay_feedback(-2.0), 1.0);
        assert_eq!(relay_feedback(0.0), 0.0);
        assert_eq!(relay_feedback(3.0), -1.0);
    }

    #[test]
    fn smoothed_relay_matches_ramp_and_plateaus() {
        let d = SmoothingDelta::new(0.1).unwrap();
        assert_eq!(relay_feedback_smoothed(0.05, d).unwrap(), -0.5);
        assert_eq!(relay_feedback_smoothed(0.1, d).unwrap(), -1.0);
        assert_eq!(relay_feedback_smoothed(-0.2, d).unwrap(), 1.0);
    }

    #[test]
    fn smoothed_relay_rejects_sharp_delta() {
        assert!(matches!(
            relay_feedback_smoothed(0.3, SmoothingDelta::SHARP),
            Err(Error::SharpDeltaNotSmoothable)
        ));
    }

    #[test]
    fn smoothed_relay_is_odd() {
        let d = SmoothingDelta::new(0.25).unwrap();
        let mut x = -1.0;
        while x <= 1.0 {
            let f = relay_feedback_smoothed(x, d).unwrap();
            let g = relay_feedback_smoothed(-x, d).unwrap();
            assert_eq!(f, -g, "x={x}");
            assert_eq!(relay_feedback(x), -relay_feedback(-x), "x={x}");
            x += 0.01;
        }
    }

    #[test]
    fn smoothed_coefficient_examples() {
        let p = table1_row1();
        let d = SmoothingDelta::new(0.1).unwrap();
        // ramp midpoint at the a1 -> a2 switch
        assert!((coefficient_smoothed(&p, d, 3.0) - 0.3).abs() < 1e-15);
        // ramp boundary equals the plateau
        assert_eq!(coefficient_smoothed(&p, d, 2.9), 0.5);
        // far from every switch
        assert_eq!(coefficient_smoothed(&p, d, 1.0), 0.5);
        // midpoint of the a2 -> -a3 ramp: (a2 - a3) / 2 = 0
        assert!(coefficient_smoothed(&p, d, 4.0).abs() < 1e-15);
    }

    #[test]
    fn smoothed_coefficient_periodic_and_continuous() {
        let p = table1_row1();
        let d = SmoothingDelta::new(0.1).unwrap();
        let period = p.period();
        // periodicity
        let mut t = -2.0 * period;
        while t < 2.0 * period {
            let a = coefficient_smoothed(&p, d, t);
            let b = coefficient_smoothed(&p, d, t + period);
            assert!((a - b).abs() < 1e-12, "t={t}: {a} vs {b}");
            t += 0.0173;
        }
        // branch agreement at every ramp boundary
        let dv = d.value();
        for s in [0.0, p.p1(), p.p1() + p.p2(), period] {
            for edge in [s - dv, s + dv] {
                let left = coefficient_smoothed(&p, d, edge - 1e-12);
                let right = coefficient_smoothed(&p, d, edge + 1e-12);
                assert!((left - right).abs() < 1e-9, "edge at {edge}");
            }
        }
    }

    #[test]
    fn smoothed_equals_sharp_outside_windows() {
        let p = table1_row1();
        let d = SmoothingDelta::new(0.1).unwrap();
        let period = p.period();
        let dv = d.value();
        let switches = [0.0, p.p1(), p.p1() + p.p2(), period];
        let mut t = 0.0;
        while t < period {
            let in_window = switches.iter().any(|s| (t - s).abs() < dv);
            if !in_window {
                assert_eq!(
                    coefficient_smoothed(&p, d, t),
                    coefficient(&p, t),
                    "t={t}"
                );
            }
            t += 0.003;
        }
    }

    #[test]
    fn smoothed_deviation_bounded_by_plateau_gap() {
        let p = table1_row1();
        let d = SmoothingDelta::new(0.2).unwrap();
        let max_gap = (p.a1() - p.a2())
            .abs()
            .max((p.a2() + p.a3()).abs())
            .max((p.a1() + p.a3()).abs());
        let mut t: f64 = -1.0;
        let mut worst: f64 = 0.0;
        while t < 2.0 * p.period() {
            let dev = (coefficient_smoothed(&p, d, t) - coefficient(&p, t)).abs();
            worst = worst.max(dev);
            t += 0.0007;
        }
        assert!(worst <= max_gap + 1e-12, "worst {worst} gap {max_gap}");
        assert!(worst > 0.0);
    }

    #[test]
    fn sharp_delta_reproduces_sharp_coefficient() {
        let p = table1_row1();
        let mut t = -5.0;
        while t < 10.0 {
            assert_eq!(
                coefficient_smoothed(&p, SmoothingDelta::SHARP, t),
                coefficient(&p, t)
            );
            t += 0.011;
        }
    }

    #[test]
    fn ingest_table_rows() {
        let r = ingest_params(0.5, 0.1, -0.1, 3.0, 1.0, 0.5).unwrap();
        assert!(!r.sign_warning);
        assert_eq!(r.params.a3(), 0.1);
        assert_eq!(r.params.period(), 4.5);

        let r = ingest_params(5.0, 3.0, -1.0, 3.0, 1.0, 1.0).unwrap();
        assert_eq!(r.params.a3(), 1.0);
        assert_eq!(r.params.period(), 5.0);

        // accepted with a warning: positive third value
        let r = ingest_params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(r.sign_warning);
        assert_eq!(r.params.a3(), 1.0);
    }

    #[test]
    fn ingest_rejects_nonpositive_inputs() {
        assert!(ingest_params(0.0, 0.1, -0.1, 3.0, 1.0, 0.5).is_err());
        assert!(ingest_params(0.5, -0.1, -0.1, 3.0, 1.0, 0.5).is_err());
        assert!(ingest_params(0.5, 0.1, 0.0, 3.0, 1.0, 0.5).is_err());
        assert!(ingest_params(0.5, 0.1, -0.1, 0.0, 1.0, 0.5).is_err());
        assert!(ingest_params(0.5, 0.1, -0.1, 3.0, 1.0, -0.5).is_err());
        assert!(ingest_params(f64::NAN, 0.1, -0.1, 3.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn ramp_window_check() {
        let p = table1_row1(); // min plateau 0.5
        assert!(SmoothingDelta::new(0.1).unwrap().check_ramp_windows(&p).is_ok());
        assert!(matches!(
            SmoothingDelta::new(0.4).unwrap().check_ramp_windows(&p),
            Err(Error::DeltaTooLarge { .. })
        ));
    }
}
