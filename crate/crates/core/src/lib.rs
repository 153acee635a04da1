//! Solvers and analysis for the scalar delay differential equation
//! `x'(t) = -mu x(t) + a(t) f(x(t-1))` where `a(t)` is a T-periodic
//! piecewise-constant coefficient taking two positive values and one
//! negative value per period, and `f` is the negative relay `-sign(x)`
//! (optionally smoothed by linear ramps).
//!
//! The crate provides:
//!
//! * an event-driven exact integrator producing piecewise-affine
//!   trajectories ([`exact`]),
//! * the analytic one-period return maps, their fixed points / 2-cycles
//!   and the shape checks behind them ([`return_map`]),
//! * a fixed-step method-of-steps integrator for the smoothed equation,
//!   used as an independent cross-check ([`numeric`]),
//! * period detection, empirical map fitting, convergence-rate
//!   measurement, table reproduction and smoothing sweeps ([`analysis`]),
//! * built-in reference tables ([`tables`]), scenario files
//!   ([`scenario`]) and the command-line front end ([`cli`]).

pub mod analysis;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod exact;
pub mod history;
pub mod numeric;
pub mod return_map;
pub mod scenario;
pub mod tables;

pub use error::{Error, Result};

/// 17-significant-digit rendering for machine outputs; round-trips f64.
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// 6-significant-digit rendering for human summaries.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 {
        return "0.000000".into();
    }
    let a = x.abs();
    if (1e-4..1e7).contains(&a) {
        let digits = (5 - a.log10().floor() as i32).clamp(0, 12) as usize;
        format!("{:.*}", digits, x)
    } else {
        format!("{:.5e}", x)
    }
}
