//! Fixed-step method-of-steps integrator for
//! `x'(t) = -mu x(t) + a(t) f(x(t-1))` with the smoothed (or sharp)
//! coefficient and feedback.
//!
//! The grid step is `1/N`, so the delayed argument sits exactly `N` nodes
//! back; stage values halfway between nodes are linearly interpolated.
//! The scheme is the classical 4-stage one-step method. It serves as the
//! independent cross-check for the event-driven exact solver, which never
//! sees this code path.

use crate::coefficients::{
    coefficient_smoothed, relay_feedback, relay_feedback_smoothed, CoefficientParams,
    SmoothingDelta,
};
use crate::error::{Error, Result};
use crate::history::HistoryFunction;

/// Right-hand side: decay rate, coefficient parameters and smoothing
/// width shared by the coefficient and the feedback.
#[derive(Debug, Clone, Copy)]
pub struct RhsSpec {
    pub mu: f64,
    pub params: CoefficientParams,
    pub delta: SmoothingDelta,
}

impl RhsSpec {
    pub fn new(mu: f64, params: CoefficientParams, delta: SmoothingDelta) -> Result<Self> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mu must be finite and >= 0, got {mu}"
            )));
        }
        delta.check_ramp_windows(&params)?;
        Ok(Self { mu, params, delta })
    }

    fn feedback(&self, x: f64) -> f64 {
        if self.delta.is_sharp() {
            relay_feedback(x)
        } else {
            relay_feedback_smoothed(x, self.delta).expect("delta checked nonzero")
        }
    }
}

/// Equidistant samples `values[k] = x(t0 + k step)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTrajectory {
    t0: f64,
    step: f64,
    values: Vec<f64>,
}

impl DenseTrajectory {
    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + (self.values.len() - 1) as f64 * self.step
    }

    pub fn node_time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.step
    }

    /// Zero crossings located by linear interpolation between grid nodes.
    pub fn grid_zero_crossings(&self) -> Vec<f64> {
        let mut zeros = Vec::new();
        for k in 0..self.values.len() - 1 {
            let (x0, x1) = (self.values[k], self.values[k + 1]);
            if x0 == 0.0 && x1 != 0.0 && k > 0 && self.values[k - 1] * x1 < 0.0 {
                zeros.push(self.node_time(k));
            } else if x0 != 0.0 && x1 != 0.0 && (x0 > 0.0) != (x1 > 0.0) {
                zeros.push(self.node_time(k) + self.step * x0 / (x0 - x1));
            }
        }
        zeros
    }

    /// Rows `t,x`, down-sampled by `stride`; the final node is always
    /// written.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W, stride: usize) -> std::io::Result<()> {
        let stride = stride.max(1);
        writeln!(w, "t,x")?;
        let last = self.values.len() - 1;
        for k in (0..=last).step_by(stride) {
            writeln!(
                w,
                "{},{}",
                crate::fmt17(self.node_time(k)),
                crate::fmt17(self.values[k])
            )?;
        }
        if last % stride != 0 {
            writeln!(
                w,
                "{},{}",
                crate::fmt17(self.node_time(last)),
                crate::fmt17(self.values[last])
            )?;
        }
        Ok(())
    }
}

/// Integrate on `[0, t_end]` with grid step `step = 1/N`, `N >= 10`;
/// `t_end` must be a grid multiple. History supplies `[-1, 0]`.
pub fn integrate_numeric(
    history: &HistoryFunction,
    rhs: &RhsSpec,
    step: f64,
    t_end: f64,
) -> Result<DenseTrajectory> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidStep(step));
    }
    let nodes_per_unit = (1.0 / step).round();
    if nodes_per_unit < 10.0 || (step * nodes_per_unit - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidStep(step));
    }
    let n = nodes_per_unit as usize;
    let h = 1.0 / nodes_per_unit;
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "t_end must be finite and > 0, got {t_end}"
        )));
    }
    let steps_total = (t_end / h).round();
    if (steps_total * h - t_end).abs() > 1e-9 * t_end.max(1.0) {
        return Err(Error::MisalignedEndpoint { t_end, step });
    }
    let m = steps_total as usize;

    let mut values = Vec::with_capacity(m + 1);
    values.push(history.value_at_end());

    // delayed state at the three stage offsets of step k: exactly N nodes
    // back, N - 1/2 nodes back (midpoint of two nodes), N - 1 nodes back
    let delayed = |values: &[f64], k: usize, stage: usize| -> f64 {
        let j = k as i64 - n as i64;
        match stage {
            0 => {
                if j < 0 {
                    history.eval(k as f64 * h - 1.0)
                } else {
                    values[j as usize]
                }
            }
            1 => {
                if j + 1 <= 0 {
                    history.eval(k as f64 * h - 1.0 + 0.5 * h)
                } else {
                    0.5 * (values[j as usize] + values[j as usize + 1])
                }
            }
            _ => {
                if j + 1 < 0 {
                    history.eval(k as f64 * h - 1.0 + h)
                } else {
                    values[(j + 1) as usize]
                }
            }
        }
    };

    let mu = rhs.mu;
    for k in 0..m {
        let t = k as f64 * h;
        let x = values[k];
        let force0 = coefficient_smoothed(&rhs.params, rhs.delta, t) * rhs.feedback(delayed(&values, k, 0));
        let force_half =
            coefficient_smoothed(&rhs.params, rhs.delta, t + 0.5 * h) * rhs.feedback(delayed(&values, k, 1));
        let force1 =
            coefficient_smoothed(&rhs.params, rhs.delta, t + h) * rhs.feedback(delayed(&values, k, 2));
        let k1 = -mu * x + force0;
        let k2 = -mu * (x + 0.5 * h * k1) + force_half;
        let k3 = -mu * (x + 0.5 * h * k2) + force_half;
        let k4 = -mu * (x + h * k3) + force1;
        let x_next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !x_next.is_finite() {
            return Err(Error::BlowUp { t: t + h });
        }
        values.push(x_next);
    }

    Ok(DenseTrajectory {
        t0: 0.0,
        step: h,
        values,
    })
}

/// Grid reads at `t = k period`, `k = 0..=n`; the period must land on
/// grid nodes.
pub fn stroboscopic_numeric(traj: &DenseTrajectory, period: f64, n: usize) -> Result<Vec<f64>> {
    let ratio = period / traj.step;
    let per = ratio.round();
    if (ratio - per).abs() > 1e-9 {
        return Err(Error::GridMisaligned(format!(
            "period {period} is not a multiple of step {}",
            traj.step
        )));
    }
    let per = per as usize;
    if per == 0 || n * per > traj.values.len() - 1 {
        return Err(Error::TrajectoryTooShort {
            needed: n as f64 * period,
            available: traj.t_end(),
        });
    }
    Ok((0..=n).map(|k| traj.values[k * per]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{integrate_exact, stroboscopic_samples};

    fn table1_row1() -> CoefficientParams {
        CoefficientParams::new(0.5, 0.1, 0.1, 3.0, 1.0, 0.5).unwrap()
    }

    fn table2_row1() -> CoefficientParams {
        CoefficientParams::new(0.5, 0.1, 0.1, 0.5, 1.0, 0.5).unwrap()
    }

    fn rhs(params: CoefficientParams, delta: f64) -> RhsSpec {
        RhsSpec::new(0.0, params, SmoothingDelta::new(delta).unwrap()).unwrap()
    }

    #[test]
    fn zero_history_stays_at_equilibrium() {
        let spec = rhs(table1_row1(), 0.01);
        let h = HistoryFunction::constant(0.0).unwrap();
        let traj = integrate_numeric(&h, &spec, 0.01, 10.0).unwrap();
        for &x in traj.values() {
            assert!(x.abs() <= 1e-14);
        }
    }

    #[test]
    fn smoothed_type1_run_returns_to_fixed_point() {
        let spec = rhs(table1_row1(), 1e-3);
        let h = HistoryFunction::constant(0.28125).unwrap();
        let traj = integrate_numeric(&h, &spec, 1e-3, 9.0).unwrap();
        let x_t = traj.values()[4500];
        let x_2t = traj.values()[9000];
        assert!((x_t - 0.28125).abs() <= 1e-3, "x(T) = {x_t}");
        assert!((x_2t - 0.28125).abs() <= 1e-3, "x(2T) = {x_2t}");
    }

    #[test]
    fn smoothed_type2_run_reaches_mirror_value() {
        let spec = rhs(table2_row1(), 1e-3);
        let h = HistoryFunction::constant(0.1875).unwrap();
        let traj = integrate_numeric(&h, &spec, 1e-3, 4.0).unwrap();
        let x_t = traj.values()[2000];
        assert!((x_t + 0.1875).abs() <= 1e-3, "x(T) = {x_t}");
    }

    #[test]
    fn stroboscopic_reads() {
        let spec = rhs(table1_row1(), 1e-2);
        let h = HistoryFunction::constant(0.28125).unwrap();
        let traj = integrate_numeric(&h, &spec, 1e-2, 13.5).unwrap();
        let samples = stroboscopic_numeric(&traj, 4.5, 2).unwrap();
        assert_eq!(samples.len(), 3);
        for s in &samples[1..] {
            assert!((s - 0.28125).abs() < 1e-2);
        }
        // misaligned period
        assert!(matches!(
            stroboscopic_numeric(&traj, 4.503, 2),
            Err(Error::GridMisaligned(_))
        ));
        // too few periods stored
        assert!(matches!(
            stroboscopic_numeric(&traj, 4.5, 4),
            Err(Error::TrajectoryTooShort { .. })
        ));
    }

    #[test]
    fn negating_history_negates_trajectory_exactly() {
        let spec = rhs(table2_row1(), 1e-2);
        let plus = integrate_numeric(
            &HistoryFunction::constant(0.1875).unwrap(),
            &spec,
            1e-2,
            6.0,
        )
        .unwrap();
        let minus = integrate_numeric(
            &HistoryFunction::constant(-0.1875).unwrap(),
            &spec,
            1e-2,
            6.0,
        )
        .unwrap();
        for (a, b) in plus.values().iter().zip(minus.values()) {
            assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn halving_the_step_halves_the_error() {
        // smoothing wide enough that both steps resolve the ramps
        let params = table1_row1();
        let h_star = 0.28125;
        let hist = HistoryFunction::constant(h_star).unwrap();
        let spec = rhs(params, 0.1);
        let t_end = 2.0 * 4.5;
        let coarse = integrate_numeric(&hist, &spec, 1.0 / 100.0, t_end).unwrap();
        let fine = integrate_numeric(&hist, &spec, 1.0 / 200.0, t_end).unwrap();
        let e_coarse = (stroboscopic_numeric(&coarse, 4.5, 2).unwrap()[2] - h_star).abs();
        let e_fine = (stroboscopic_numeric(&fine, 4.5, 2).unwrap()[2] - h_star).abs();
        assert!(
            e_coarse > 1e-13,
            "coarse error {e_coarse} too small to compare"
        );
        assert!(
            e_fine <= 0.5 * e_coarse,
            "coarse {e_coarse}, fine {e_fine}"
        );
    }

    #[test]
    fn positive_decay_keeps_the_state_inside_the_absorbing_bound() {
        let params = table1_row1();
        let delta = SmoothingDelta::new(0.05).unwrap();
        let mu = 2.0;
        let spec = RhsSpec::new(mu, params, delta).unwrap();
        let h0 = 3.0;
        let hist = HistoryFunction::constant(h0).unwrap();
        let traj = integrate_numeric(&hist, &spec, 1e-2, 40.0).unwrap();
        let a_max = params.a1().max(params.a2()).max(params.a3());
        let bound = h0.max(a_max / mu) + delta.value();
        for &x in traj.values() {
            assert!(x.abs() <= bound + 1e-9, "|x| = {} exceeds {bound}", x.abs());
        }
        // decay pulls the tail well below the initial level
        let tail = traj.values()[traj.values().len() - 1].abs();
        assert!(tail <= a_max / mu + delta.value() + 1e-6, "tail {tail}");
    }

    #[test]
    fn rejects_bad_steps_and_misaligned_endpoints() {
        let spec = rhs(table1_row1(), 0.0);
        let h = HistoryFunction::constant(0.1).unwrap();
        assert!(matches!(
            integrate_numeric(&h, &spec, 0.3, 3.0),
            Err(Error::InvalidStep(_))
        ));
        assert!(matches!(
            integrate_numeric(&h, &spec, 0.2, 3.0),
            Err(Error::InvalidStep(_))
        ));
        assert!(matches!(
            integrate_numeric(&h, &spec, 0.01, 3.0051),
            Err(Error::MisalignedEndpoint { .. })
        ));
        assert!(matches!(
            integrate_numeric(&h, &spec, 0.01, -1.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn mu_must_be_nonnegative_and_delta_must_fit() {
        let params = table1_row1();
        assert!(RhsSpec::new(-0.5, params, SmoothingDelta::SHARP).is_err());
        assert!(matches!(
            RhsSpec::new(0.0, params, SmoothingDelta::new(0.3).unwrap()),
            Err(Error::DeltaTooLarge { .. })
        ));
    }

    #[test]
    fn sharp_mode_tracks_the_exact_solver_loosely() {
        // delta = 0 is the documented low-accuracy mode; it should still
        // stay near the exact trajectory over a few periods
        let params = table1_row1();
        let hist = HistoryFunction::constant(0.28125).unwrap();
        let spec = rhs(params, 0.0);
        let dense = integrate_numeric(&hist, &spec, 1e-3, 9.0).unwrap();
        let (exact, _) = integrate_exact(&hist, &params, 9.0).unwrap();
        let exact_samples = stroboscopic_samples(&exact, &params, 2).unwrap();
        let numeric_samples = stroboscopic_numeric(&dense, 4.5, 2).unwrap();
        for (e, n) in exact_samples.iter().zip(&numeric_samples) {
            assert!((e - n).abs() < 5e-3, "{e} vs {n}");
        }
    }

    #[test]
    fn grid_zero_crossings_match_exact_zeros() {
        let params = table1_row1();
        let hist = HistoryFunction::constant(0.28125).unwrap();
        let spec = rhs(params, 1e-3);
        let dense = integrate_numeric(&hist, &spec, 1e-3, 4.5).unwrap();
        let zeros = dense.grid_zero_crossings();
        assert_eq!(zeros.len(), 2);
        assert!((zeros[0] - 0.5625).abs() < 5e-3);
        assert!((zeros[1] - 2.5625).abs() < 5e-3);
    }
}
