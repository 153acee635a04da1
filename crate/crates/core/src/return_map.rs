//! Analytic one-dimensional return maps over one forcing period.
//!
//! For a positive constant initial value `h` the state after one period
//! is an affine function of `h` as long as the solution keeps the
//! prescribed shape. Two shapes occur: the period-T solution with two
//! zeros per period (Type I, `x(T) = m h + b`) and the half-turn of the
//! period-2T solution with a single zero per period (Type II,
//! `x(T) = F1(h) = m h - b`, mirrored by `F2(h) = m h + b` for `h < 0`).
//! Every inequality behind those shapes is recorded in per-value
//! validity reports.

use crate::coefficients::CoefficientParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapVariant {
    TypeI,
    TypeIIHalf,
}

impl MapVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            MapVariant::TypeI => "I",
            MapVariant::TypeIIHalf => "II",
        }
    }
}

/// Return-map coefficients. Type I applies `h -> m h + b`; the Type II
/// half-map applies `h -> m h - b` for positive `h` and `h -> m h + b`
/// for negative `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub m: f64,
    pub b: f64,
    pub variant: MapVariant,
}

impl AffineMap {
    /// One application of the map; for the Type II half-map the branch
    /// follows the sign of `h`.
    pub fn apply(&self, h: f64) -> Result<f64> {
        match self.variant {
            MapVariant::TypeI => Ok(self.m * h + self.b),
            MapVariant::TypeIIHalf => {
                if h > 0.0 {
                    Ok(self.m * h - self.b)
                } else if h < 0.0 {
                    Ok(self.m * h + self.b)
                } else {
                    Err(Error::DegenerateOrbit)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    AsymptoticallyStable,
    Neutral,
    Unstable,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::AsymptoticallyStable => "asymptotically-stable",
            Stability::Neutral => "neutral",
            Stability::Unstable => "unstable",
        }
    }

    fn from_slope(m: f64) -> Self {
        let mag = m.abs();
        if mag < 1.0 {
            Stability::AsymptoticallyStable
        } else if mag == 1.0 {
            Stability::Neutral
        } else {
            Stability::Unstable
        }
    }
}

/// One shape hypothesis, normalized so `pass == (value > 0)`.
#[derive(Debug, Clone)]
pub struct ValidityCheck {
    pub name: &'static str,
    pub required: &'static str,
    pub value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ValidityReport {
    pub checks: Vec<ValidityCheck>,
}

impl ValidityReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failing(&self) -> Vec<&ValidityCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    fn push(&mut self, name: &'static str, required: &'static str, value: f64) {
        self.checks.push(ValidityCheck {
            name,
            required,
            value,
            pass: value > 0.0,
        });
    }
}

/// Fixed point (Type I) or two-cycle value (Type II) of the return map.
#[derive(Debug, Clone)]
pub struct FixedPointResult {
    pub h_star: f64,
    pub stability: Stability,
    /// T for Type I, 2T for Type II.
    pub period: f64,
    pub validity: ValidityReport,
    pub map: AffineMap,
}

/// Type I map: `m = 2 a2/a1 - 1`, `b = a1 (p1-2) + a2 (6 - 2 p1 - p2) + a3 p3`.
pub fn type1_map(params: &CoefficientParams) -> AffineMap {
    let (a1, a2, a3) = (params.a1(), params.a2(), params.a3());
    let (p1, p2, p3) = (params.p1(), params.p2(), params.p3());
    AffineMap {
        m: 2.0 * a2 / a1 - 1.0,
        b: a1 * (p1 - 2.0) + a2 * (6.0 - (2.0 * p1 + p2)) + a3 * p3,
        variant: MapVariant::TypeI,
    }
}

/// Type II half-map: `m = 1 - 2 a2/a1`, `b = a1 p1 + a2 (2 - 2 p1 - p2) + a3 p3`.
pub fn type2_map(params: &CoefficientParams) -> AffineMap {
    let (a1, a2, a3) = (params.a1(), params.a2(), params.a3());
    let (p1, p2, p3) = (params.p1(), params.p2(), params.p3());
    AffineMap {
        m: 1.0 - 2.0 * a2 / a1,
        b: a1 * p1 + a2 * (2.0 - 2.0 * p1 - p2) + a3 * p3,
        variant: MapVariant::TypeIIHalf,
    }
}

/// Relative agreement demanded between the two algebraic routes to the
/// fixed point.
const ROUTE_AGREEMENT: f64 = 1e-12;

fn fixed_point_value(params: &CoefficientParams, map: &AffineMap) -> Result<f64> {
    let (a1, a2) = (params.a1(), params.a2());
    if a1 == a2 {
        return Err(Error::DegenerateMap);
    }
    // route 1 through the map slope, route 2 through the parameters;
    // both must agree to near machine precision
    let denominator = match map.variant {
        MapVariant::TypeI => 1.0 - map.m,
        MapVariant::TypeIIHalf => map.m + 1.0,
    };
    let route1 = map.b / denominator;
    let route2 = a1 * map.b / (2.0 * (a1 - a2));
    let scale = route1.abs().max(route2.abs()).max(f64::MIN_POSITIVE);
    assert!(
        (route1 - route2).abs() <= ROUTE_AGREEMENT * scale,
        "fixed-point routes disagree: {route1} vs {route2}"
    );
    Ok(route2)
}

/// Fixed point of the Type I map with stability and shape validation.
pub fn type1_fixed_point(params: &CoefficientParams) -> Result<FixedPointResult> {
    let map = type1_map(params);
    let h_star = fixed_point_value(params, &map)?;
    Ok(FixedPointResult {
        h_star,
        stability: Stability::from_slope(map.m),
        period: params.period(),
        validity: validate_type1(params, h_star),
        map,
    })
}

/// Two-cycle `{h*, -h*}` of the composite Type II map.
pub fn type2_cycle(params: &CoefficientParams) -> Result<FixedPointResult> {
    let map = type2_map(params);
    let h_star = fixed_point_value(params, &map)?;
    Ok(FixedPointResult {
        h_star,
        stability: Stability::from_slope(map.m),
        period: 2.0 * params.period(),
        validity: validate_type2(params, h_star),
        map,
    })
}

/// Shape hypotheses for the Type I construction at initial value `h`.
pub fn validate_type1(params: &CoefficientParams, h: f64) -> ValidityReport {
    let (a1, a2, a3) = (params.a1(), params.a2(), params.a3());
    let (p1, p2, p3) = (params.p1(), params.p2(), params.p3());
    let map = type1_map(params);
    let t1 = h / a1;
    let x3 = map.m * h + a1 * (p1 - 2.0) + a2 * (6.0 - (2.0 * p1 + p2));
    let x4 = x3 + a3 * p3;
    let mut report = ValidityReport { checks: Vec::new() };
    report.push("initial_value_positive", "h > 0", h);
    report.push("first_plateau_long_enough", "p1 - 2 > 0", p1 - 2.0);
    report.push(
        "second_zero_before_first_switch",
        "p1 - (t1 + 2) > 0",
        p1 - (t1 + 2.0),
    );
    report.push(
        "delayed_flip_after_first_switch",
        "(t1 + 3) - p1 > 0",
        t1 + 3.0 - p1,
    );
    report.push(
        "delayed_flip_before_second_switch",
        "(p1 + p2) - (t1 + 3) > 0",
        p1 + p2 - (t1 + 3.0),
    );
    report.push("offset_positive", "b > 0", map.b);
    report.push("state_positive_at_second_switch", "x3 > 0", x3);
    report.push("state_positive_at_period_end", "x4 > 0", x4);
    report
}

/// Shape hypotheses for the Type II construction at initial value `h`.
pub fn validate_type2(params: &CoefficientParams, h: f64) -> ValidityReport {
    let (a1, a2, a3) = (params.a1(), params.a2(), params.a3());
    let (p1, p2, p3) = (params.p1(), params.p2(), params.p3());
    let map = type2_map(params);
    let t1 = h / a1;
    let half_turn = a1 * p1 + a2 * (2.0 - 2.0 * p1 - p2);
    let x3 = map.m * h - half_turn;
    let _x4 = x3 - a3 * p3; // below x3, negative whenever x3 is
    let mut report = ValidityReport { checks: Vec::new() };
    report.push("initial_value_positive", "h > 0", h);
    report.push("first_zero_before_first_switch", "p1 - t1 > 0", p1 - t1);
    report.push(
        "delayed_flip_after_first_switch",
        "(t1 + 1) - p1 > 0",
        t1 + 1.0 - p1,
    );
    report.push(
        "delayed_flip_before_second_switch",
        "(p1 + p2) - (t1 + 1) > 0",
        p1 + p2 - (t1 + 1.0),
    );
    report.push("state_negative_at_second_switch", "-x3 > 0", -x3);
    report.push("offset_positive", "b > 0", map.b);
    report.push(
        "half_turn_inequality",
        "a1 p1 + a2 (2 - 2 p1 - p2) > 0",
        half_turn,
    );
    report
}

/// Orbit `[h0, F(h0), ...]` with `n` applications. The Type II half-map
/// alternates branches by sign and rejects an iterate landing on 0.
pub fn iterate_map(map: &AffineMap, h0: f64, n: usize) -> Result<Vec<f64>> {
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(h0);
    let mut h = h0;
    for _ in 0..n {
        h = map.apply(h)?;
        orbit.push(h);
    }
    Ok(orbit)
}

/// Intersect `m h + c > 0` into `(lo, hi)`; false when infeasible for
/// every `h`.
fn apply_linear_bound(lo: &mut f64, hi: &mut f64, m: f64, c: f64) -> bool {
    if m > 0.0 {
        *lo = lo.max(-c / m);
    } else if m < 0.0 {
        *hi = hi.min(-c / m);
    } else if c <= 0.0 {
        return false;
    }
    true
}

/// Open interval of initial values `h` passing every Type I shape check,
/// or None when the checks cannot all hold.
pub fn type1_validity_window(params: &CoefficientParams) -> Option<(f64, f64)> {
    let (a1, a2) = (params.a1(), params.a2());
    let (p1, p2) = (params.p1(), params.p2());
    let map = type1_map(params);
    if p1 <= 2.0 || map.b <= 0.0 {
        return None;
    }
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;
    hi = hi.min(a1 * (p1 - 2.0)); // t1 + 2 < p1
    lo = lo.max(a1 * (p1 - 3.0)); // t1 + 3 > p1
    hi = hi.min(a1 * (p1 + p2 - 3.0)); // t1 + 3 < p1 + p2
    let c3 = a1 * (p1 - 2.0) + a2 * (6.0 - (2.0 * p1 + p2));
    if !apply_linear_bound(&mut lo, &mut hi, map.m, c3) {
        return None; // x3 > 0
    }
    if !apply_linear_bound(&mut lo, &mut hi, map.m, map.b) {
        return None; // x4 > 0
    }
    (lo < hi).then_some((lo, hi))
}

/// Open interval of initial values `h` passing every Type II shape check.
pub fn type2_validity_window(params: &CoefficientParams) -> Option<(f64, f64)> {
    let (a1, a2) = (params.a1(), params.a2());
    let (p1, p2) = (params.p1(), params.p2());
    let map = type2_map(params);
    let half_turn = a1 * p1 + a2 * (2.0 - 2.0 * p1 - p2);
    if map.b <= 0.0 || half_turn <= 0.0 {
        return None;
    }
    let mut lo = 0.0_f64;
    let mut hi = a1 * p1; // t1 < p1
    lo = lo.max(a1 * (p1 - 1.0)); // t1 + 1 > p1
    hi = hi.min(a1 * (p1 + p2 - 1.0)); // t1 + 1 < p1 + p2
    if !apply_linear_bound(&mut lo, &mut hi, -map.m, half_turn) {
        return None; // x3 < 0
    }
    (lo < hi).then_some((lo, hi))
}
