//! Event-driven exact integration of `x'(t) = a(t) * f(x(t-1))` with the
//! sharp coefficient and relay feedback.
//!
//! Between events the right-hand side is a constant (one plateau value
//! times the sign of the delayed state), so the solution is affine and
//! every quantity has a closed form. Events are the coefficient switches
//! `{kT, kT+p1, kT+p1+p2}` and the delayed sign flips at `z + 1` for each
//! transversal zero `z` of the state (or of the history). Zeros inside a
//! segment are located by the closed-form formula `z = t_i - x_i/slope`.

use std::collections::VecDeque;
use std::fmt;

use crate::coefficients::CoefficientParams;
use crate::error::{Error, Result};
use crate::history::HistoryFunction;

/// Absolute time tolerance for treating two events as simultaneous.
/// Coincident events merge into one breakpoint, coefficient switch first.
pub const TIME_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    CoefficientSwitch,
    DelayedZeroCrossing,
    HistoryZero,
    TangentialTouch,
}

impl EventKind {
    fn as_str(&self) -> &'static str {
        match self {
            EventKind::CoefficientSwitch => "coefficient-switch",
            EventKind::DelayedZeroCrossing => "delayed-zero-crossing",
            EventKind::HistoryZero => "history-zero",
            EventKind::TangentialTouch => "tangential-touch",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EventRecord {
    pub t: f64,
    pub kind: EventKind,
    pub detail: String,
}

impl fmt::Display for EventRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t={} kind={} {}",
            crate::fmt17(self.t),
            self.kind.as_str(),
            self.detail
        )
    }
}

/// Continuous piecewise-affine solution: breakpoints `(t_i, x_i)` with
/// `slopes[i]` valid on `[t_i, t_{i+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    breakpoints: Vec<(f64, f64)>,
    slopes: Vec<f64>,
}

impl Trajectory {
    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn t_start(&self) -> f64 {
        self.breakpoints[0].0
    }

    pub fn t_end(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1].0
    }

    /// Index of the affine segment containing `t`.
    pub fn segment_index(&self, t: f64) -> usize {
        let i = self.breakpoints.partition_point(|&(bt, _)| bt <= t);
        i.saturating_sub(1).min(self.slopes.len().saturating_sub(1))
    }

    /// Evaluate the solution; exact at breakpoints, affine in between.
    /// `t` is clamped to the covered window.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(self.t_start(), self.t_end());
        let i = self.breakpoints.partition_point(|&(bt, _)| bt <= t);
        if i == 0 {
            return self.breakpoints[0].1;
        }
        if i >= self.breakpoints.len() {
            return self.breakpoints[self.breakpoints.len() - 1].1;
        }
        let (t0, x0) = self.breakpoints[i - 1];
        x0 + self.slopes[i - 1] * (t - t0)
    }

    /// True when the solution is the zero equilibrium everywhere.
    pub fn is_identically_zero(&self) -> bool {
        self.breakpoints.iter().all(|&(_, x)| x == 0.0) && self.slopes.iter().all(|&s| s == 0.0)
    }

    /// Rows `t,x,slope,segment_index` with 17-significant-digit numbers.
    /// The final breakpoint repeats the last segment's slope.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "t,x,slope,segment_index")?;
        for (i, &(t, x)) in self.breakpoints.iter().enumerate() {
            let seg = i.min(self.slopes.len().saturating_sub(1));
            writeln!(
                w,
                "{},{},{},{}",
                crate::fmt17(t),
                crate::fmt17(x),
                crate::fmt17(self.slopes[seg]),
                seg
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    /// Abort when one forcing period produces more events than this;
    /// a degenerate parameter set is the only way to get there.
    pub event_cap_per_period: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            event_cap_per_period: 10_000,
        }
    }
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

/// A scheduled flip of the delayed sign at `t = zero_at + 1`.
#[derive(Debug, Clone, Copy)]
struct Flip {
    t: f64,
    sign_after: i8,
    from_history: bool,
    zero_at: f64,
}

/// Coefficient switch schedule: switch `j` (0-based) ends plateau `j % 3`
/// of period `j / 3`. Evaluated from one formula so ties are reproducible.
fn switch_time(params: &CoefficientParams, j: u64) -> f64 {
    let period_index = (j / 3) as f64;
    let offset = match j % 3 {
        0 => params.p1(),
        1 => params.p1() + params.p2(),
        _ => params.period(),
    };
    period_index * params.period() + offset
}

pub fn integrate_exact(
    history: &HistoryFunction,
    params: &CoefficientParams,
    t_end: f64,
) -> Result<(Trajectory, Vec<EventRecord>)> {
    integrate_exact_with(history, params, t_end, &ExactOptions::default())
}

pub fn integrate_exact_with(
    history: &HistoryFunction,
    params: &CoefficientParams,
    t_end: f64,
    options: &ExactOptions,
) -> Result<(Trajectory, Vec<EventRecord>)> {
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "t_end must be finite and > 0, got {t_end}"
        )));
    }

    let profile = history.sign_profile();
    let mut flips: VecDeque<Flip> = VecDeque::new();
    {
        let mut sign = profile.initial;
        for &z in &profile.flips {
            sign = -sign;
            flips.push_back(Flip {
                t: z + 1.0,
                sign_after: sign,
                from_history: true,
                zero_at: z,
            });
        }
    }

    let mut delayed_sign = profile.initial;
    let mut t_cur = 0.0_f64;
    let mut x_cur = history.value_at_end();
    let mut prev_sign = history.sign_before_end();
    let mut switch_idx: u64 = 0;

    let mut breakpoints = vec![(t_cur, x_cur)];
    let mut slopes: Vec<f64> = Vec::new();
    let mut events: Vec<EventRecord> = Vec::new();

    let periods = (t_end / params.period()).ceil().max(1.0) as usize;
    let cap_total = options.event_cap_per_period.saturating_mul(periods + 1);

    loop {
        if breakpoints.len() > cap_total {
            return Err(Error::EventCascadeOverflow {
                cap: options.event_cap_per_period,
            });
        }

        let a_now = params.plateau_value((switch_idx % 3) as usize);

        // x sitting exactly on zero at the segment start: classify as a
        // crossing (schedule the delayed flip) or a tangential touch.
        if x_cur == 0.0 && delayed_sign != 0 {
            let dir = sgn(a_now * -(delayed_sign as f64));
            if prev_sign != 0 && dir == -prev_sign {
                flips.push_back(Flip {
                    t: t_cur + 1.0,
                    sign_after: dir,
                    from_history: false,
                    zero_at: t_cur,
                });
            } else if prev_sign != 0 && dir == prev_sign {
                events.push(EventRecord {
                    t: t_cur,
                    kind: EventKind::TangentialTouch,
                    detail: "state grazes zero without crossing".into(),
                });
            }
            prev_sign = dir;
        }

        if delayed_sign == 0 && x_cur != 0.0 {
            return Err(Error::NonTransversalZero(format!(
                "delayed signal vanishes on an interval at t = {t_cur} while x = {x_cur}"
            )));
        }

        // f(x(t-1)) = -sign of the delayed state, constant on the segment
        let slope = a_now * -(delayed_sign as f64);

        let t_switch = switch_time(params, switch_idx);
        let mut t_stop = t_end.min(t_switch);
        if let Some(f) = flips.front() {
            t_stop = t_stop.min(f.t);
        }

        // interior zero: the state heads toward 0 and reaches it before
        // the segment ends
        if slope != 0.0 && x_cur != 0.0 && (x_cur > 0.0) != (slope > 0.0) {
            let z = t_cur - x_cur / slope;
            if z < t_stop - TIME_TIE_TOL {
                debug_assert!((x_cur + slope * (z - t_cur)).abs() <= 1e-12 * x_cur.abs().max(1.0));
                flips.push_back(Flip {
                    t: z + 1.0,
                    sign_after: sgn(slope),
                    from_history: false,
                    zero_at: z,
                });
                if z + 1.0 < t_stop {
                    t_stop = z + 1.0;
                }
            }
        }

        let mut x_next = x_cur + slope * (t_stop - t_cur);
        // a zero landing within the tie tolerance of the segment end is
        // snapped onto it and classified at the next iteration
        if x_cur != 0.0 && slope != 0.0 && x_next.abs() <= slope.abs() * TIME_TIE_TOL {
            x_next = 0.0;
        }

        breakpoints.push((t_stop, x_next));
        slopes.push(slope);
        if x_next != 0.0 {
            prev_sign = sgn(x_next);
        }

        // merge every cause within the tie tolerance of this breakpoint;
        // switches take effect before sign flips
        while switch_time(params, switch_idx) <= t_stop + TIME_TIE_TOL {
            let st = switch_time(params, switch_idx);
            let old = params.plateau_value((switch_idx % 3) as usize);
            let new = params.plateau_value(((switch_idx + 1) % 3) as usize);
            events.push(EventRecord {
                t: st,
                kind: EventKind::CoefficientSwitch,
                detail: format!("plateau {} -> {}", old, new),
            });
            switch_idx += 1;
        }
        while flips.front().map_or(false, |f| f.t <= t_stop + TIME_TIE_TOL) {
            let f = flips.pop_front().expect("front checked");
            let kind = if f.from_history {
                EventKind::HistoryZero
            } else {
                EventKind::DelayedZeroCrossing
            };
            events.push(EventRecord {
                t: f.t,
                kind,
                detail: format!(
                    "delayed sign {} -> {} (zero at t = {})",
                    delayed_sign, f.sign_after, f.zero_at
                ),
            });
            delayed_sign = f.sign_after;
        }

        t_cur = t_stop;
        x_cur = x_next;
        if t_stop >= t_end {
            break;
        }
    }

    Ok((Trajectory { breakpoints, slopes }, events))
}

/// Transversal zeros of a trajectory, in increasing order.
#[derive(Debug, Clone)]
pub struct ZeroScan {
    pub zeros: Vec<f64>,
    /// Set for the identically-zero solution, which has no isolated zeros.
    pub degenerate: bool,
}

pub fn zeros_of(traj: &Trajectory) -> ZeroScan {
    if traj.is_identically_zero() {
        return ZeroScan {
            zeros: Vec::new(),
            degenerate: true,
        };
    }
    let bps = traj.breakpoints();
    let slopes = traj.slopes();
    let mut zeros = Vec::new();
    let mut prev_sign = 0i8;
    for i in 0..slopes.len() {
        let (t0, x0) = bps[i];
        let x1 = bps[i + 1].1;
        if x0 == 0.0 {
            // zero at the breakpoint itself: transversal when the state
            // moves off against the approach sign (a graze keeps the sign
            // and is reported as an event during integration, not here)
            let after = sgn(slopes[i]);
            let crossing = after != 0 && (i == 0 || (prev_sign != 0 && after == -prev_sign));
            if crossing {
                zeros.push(t0);
            }
        } else if x1 != 0.0 && sgn(x0) != sgn(x1) {
            zeros.push(t0 - x0 / slopes[i]);
        }
        if x1 != 0.0 {
            prev_sign = sgn(x1);
        } else if x0 != 0.0 {
            prev_sign = sgn(x0);
        }
    }
    ZeroScan {
        zeros,
        degenerate: false,
    }
}

/// `x(kT)` for `k = 0..=n`, read exactly off the containing segments.
pub fn stroboscopic_samples(
    traj: &Trajectory,
    params: &CoefficientParams,
    n: usize,
) -> Result<Vec<f64>> {
    let period = params.period();
    let needed = n as f64 * period;
    let available = traj.t_end();
    if needed > available + 1e-9 * needed.max(1.0) {
        return Err(Error::TrajectoryTooShort { needed, available });
    }
    Ok((0..=n).map(|k| traj.eval(k as f64 * period)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{coefficient, relay_feedback};

    fn table1_row1() -> CoefficientParams {
        CoefficientParams::new(0.5, 0.1, 0.1, 3.0, 1.0, 0.5).unwrap()
    }

    fn table2_row1() -> CoefficientParams {
        CoefficientParams::new(0.5, 0.1, 0.1, 0.5, 1.0, 0.5).unwrap()
    }

    fn constant(h: f64) -> HistoryFunction {
        HistoryFunction::constant(h).unwrap()
    }

    #[test]
    fn type1_fixed_point_trajectory() {
        // from the constant history at the period-T fixed point the
        // solution closes up after one period
        let params = table1_row1();
        let h = 0.28125;
        let (traj, _) = integrate_exact(&constant(h), &params, 4.5).unwrap();
        let scan = zeros_of(&traj);
        assert_eq!(scan.zeros.len(), 2);
        assert!((scan.zeros[0] - 0.5625).abs() < 1e-14);
        assert!((scan.zeros[1] - 2.5625).abs() < 1e-14);
        assert!((traj.eval(3.0) - 0.21875).abs() < 1e-14);
        assert!((traj.eval(4.0) - 0.23125).abs() < 1e-14);
        assert!((traj.eval(4.5) - 0.28125).abs() < 1e-14);
    }

    #[test]
    fn zero_history_gives_zero_solution() {
        let params = table1_row1();
        let (traj, events) = integrate_exact(&constant(0.0), &params, 10.0).unwrap();
        assert!(traj.is_identically_zero());
        assert!(events
            .iter()
            .all(|e| e.kind == EventKind::CoefficientSwitch));
        let scan = zeros_of(&traj);
        assert!(scan.zeros.is_empty());
        assert!(scan.degenerate);
    }

    #[test]
    fn negation_symmetry_breakpoint_for_breakpoint() {
        let params = table1_row1();
        let h = 0.28125;
        let (plus, _) = integrate_exact(&constant(h), &params, 9.0).unwrap();
        let (minus, _) = integrate_exact(&constant(-h), &params, 9.0).unwrap();
        assert_eq!(plus.breakpoints().len(), minus.breakpoints().len());
        for (a, b) in plus.breakpoints().iter().zip(minus.breakpoints()) {
            assert_eq!(a.0, b.0);
            assert_eq!(a.1, -b.1);
        }
        for (s, t) in plus.slopes().iter().zip(minus.slopes()) {
            assert_eq!(*s, -*t);
        }
    }

    #[test]
    fn stroboscopic_type1_is_constant() {
        let params = table1_row1();
        let (traj, _) = integrate_exact(&constant(0.28125), &params, 3.0 * 4.5).unwrap();
        let samples = stroboscopic_samples(&traj, &params, 3).unwrap();
        assert_eq!(samples.len(), 4);
        for s in samples {
            assert!((s - 0.28125).abs() < 1e-12);
        }
    }

    #[test]
    fn stroboscopic_type2_alternates() {
        let params = table2_row1();
        let (traj, _) = integrate_exact(&constant(0.1875), &params, 4.0).unwrap();
        let samples = stroboscopic_samples(&traj, &params, 2).unwrap();
        assert!((samples[0] - 0.1875).abs() < 1e-12);
        assert!((samples[1] + 0.1875).abs() < 1e-12);
        assert!((samples[2] - 0.1875).abs() < 1e-12);
    }

    #[test]
    fn stroboscopic_zero_trajectory() {
        let params = table1_row1();
        let (traj, _) = integrate_exact(&constant(0.0), &params, 6.0 * 4.5).unwrap();
        let samples = stroboscopic_samples(&traj, &params, 5).unwrap();
        assert_eq!(samples, vec![0.0; 6]);
    }

    #[test]
    fn stroboscopic_rejects_short_trajectory() {
        let params = table1_row1();
        let (traj, _) = integrate_exact(&constant(0.28125), &params, 4.5).unwrap();
        assert!(matches!(
            stroboscopic_samples(&traj, &params, 3),
            Err(Error::TrajectoryTooShort { .. })
        ));
    }

    #[test]
    fn type2_zeros_on_first_period() {
        let params = table2_row1();
        let (traj, _) = integrate_exact(&constant(0.1875), &params, 2.0).unwrap();
        let scan = zeros_of(&traj);
        assert_eq!(scan.zeros.len(), 1);
        assert!((scan.zeros[0] - 0.375).abs() < 1e-14);
    }

    #[test]
    fn slope_matches_rhs_on_every_segment() {
        let params = table1_row1();
        let h = 0.28125;
        let hist = constant(h);
        let (traj, _) = integrate_exact(&hist, &params, 13.5).unwrap();
        let bps = traj.breakpoints();
        for i in 0..traj.slopes().len() {
            let mid = 0.5 * (bps[i].0 + bps[i + 1].0);
            let delayed = if mid - 1.0 < 0.0 {
                hist.eval(mid - 1.0)
            } else {
                traj.eval(mid - 1.0)
            };
            let expect = coefficient(&params, mid) * relay_feedback(delayed);
            assert!(
                (traj.slopes()[i] - expect).abs() < 1e-12,
                "segment {i}: {} vs {}",
                traj.slopes()[i],
                expect
            );
        }
    }

    #[test]
    fn breakpoint_continuity_and_ordering() {
        let params = table2_row1();
        let (traj, _) = integrate_exact(&constant(0.15), &params, 20.0).unwrap();
        let bps = traj.breakpoints();
        for i in 0..traj.slopes().len() {
            assert!(bps[i + 1].0 > bps[i].0);
            let hop = bps[i].1 + traj.slopes()[i] * (bps[i + 1].0 - bps[i].0);
            assert!((hop - bps[i + 1].1).abs() <= 1e-13 * bps[i].1.abs().max(1.0));
        }
    }

    #[test]
    fn slowly_oscillating_zero_gaps() {
        // gap between consecutive zeros beats the delay 1 in the regime
        // covered by the period-T construction
        let params = table1_row1();
        let (traj, _) = integrate_exact(&constant(0.28125), &params, 8.0 * 4.5).unwrap();
        let zeros = zeros_of(&traj).zeros;
        assert!(zeros.len() >= 8);
        for w in zeros.windows(2) {
            assert!(w[1] - w[0] > 1.0, "gap {} too small", w[1] - w[0]);
        }
    }

    #[test]
    fn event_set_matches_switch_and_flip_schedule() {
        let params = table1_row1();
        let (traj, events) = integrate_exact(&constant(0.28125), &params, 9.0).unwrap();
        let mut expected: Vec<f64> = vec![3.0, 4.0, 4.5, 7.5, 8.5, 9.0]; // switches
        expected.extend_from_slice(&[1.5625, 3.5625, 6.0625, 8.0625]); // zeros + 1
        expected.sort_by(f64::total_cmp);
        let got: Vec<f64> = traj.breakpoints()[1..].iter().map(|&(t, _)| t).collect();
        assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-12, "{g} vs {e}");
        }
        assert_eq!(
            events
                .iter()
                .filter(|e| e.kind == EventKind::DelayedZeroCrossing)
                .count(),
            4
        );
        assert_eq!(
            events
                .iter()
                .filter(|e| e.kind == EventKind::CoefficientSwitch)
                .count(),
            6
        );
        // events are time-sorted
        for w in events.windows(2) {
            assert!(w[0].t <= w[1].t + TIME_TIE_TOL);
        }
    }

    #[test]
    fn history_zero_flip_is_recorded() {
        let params = table1_row1();
        let hist = HistoryFunction::piecewise_linear(vec![(-1.0, -0.2), (-0.5, 0.3), (0.0, 0.3)])
            .unwrap();
        let (_, events) = integrate_exact(&hist, &params, 2.0).unwrap();
        // history crosses zero at s = -0.8, so the delayed flip fires at 0.2
        let hz: Vec<_> = events
            .iter()
            .filter(|e| e.kind == EventKind::HistoryZero)
            .collect();
        assert_eq!(hz.len(), 1);
        assert!((hz[0].t - 0.2).abs() < 1e-12, "flip at {}", hz[0].t);
    }

    #[test]
    fn tangential_touch_is_an_event_not_a_zero() {
        // engineered so the state descends to exactly 0 at t = 1 and the
        // plateau flips to -a3 there, sending it back up
        let params = CoefficientParams::new(1.0, 1.0, 1.0, 0.6, 0.4, 1.0).unwrap();
        let (traj, events) = integrate_exact(&constant(1.0), &params, 1.8).unwrap();
        let touches: Vec<_> = events
            .iter()
            .filter(|e| e.kind == EventKind::TangentialTouch)
            .collect();
        assert_eq!(touches.len(), 1);
        assert!((touches[0].t - 1.0).abs() < 1e-12);
        assert!(traj.eval(1.0).abs() < 1e-15);
        assert!(traj.eval(1.5) > 0.0);
        assert!(zeros_of(&traj).zeros.is_empty());
        assert!(!events
            .iter()
            .any(|e| e.kind == EventKind::DelayedZeroCrossing));
    }

    #[test]
    fn determinism_bitwise() {
        let params = table2_row1();
        let (a, _) = integrate_exact(&constant(0.17), &params, 30.0).unwrap();
        let (b, _) = integrate_exact(&constant(0.17), &params, 30.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_nonpositive_t_end() {
        let params = table1_row1();
        assert!(integrate_exact(&constant(0.1), &params, 0.0).is_err());
        assert!(integrate_exact(&constant(0.1), &params, -1.0).is_err());
    }

    #[test]
    fn eval_between_breakpoints() {
        let params = table1_row1();
        let (traj, _) = integrate_exact(&constant(0.28125), &params, 4.5).unwrap();
        // x(t) = h - a1 t on [0, t1+1)
        assert!((traj.eval(0.25) - (0.28125 - 0.5 * 0.25)).abs() < 1e-15);
        assert_eq!(traj.eval(0.0), 0.28125);
    }
}
