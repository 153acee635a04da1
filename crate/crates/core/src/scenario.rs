//! Flat `key = value` scenario files with `#` comments.
//!
//! Keys: `a1 a2 a3_signed p1 p2 p3 delta mu step t_end history`.
//! `delta` and `mu` default to 0, everything else is required; unknown
//! or duplicate keys are rejected. The `history` value is either
//! `constant <x>` or `knots s:x,s:x,...` with abscissae from -1 to 0.

use std::collections::BTreeMap;

use crate::coefficients::{ingest_params, CoefficientParams, SmoothingDelta};
use crate::error::{Error, Result};
use crate::history::HistoryFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: CoefficientParams,
    pub history: HistoryFunction,
    pub delta: SmoothingDelta,
    pub mu: f64,
    pub step: f64,
    pub t_end: f64,
}

const KNOWN_KEYS: [&str; 11] = [
    "a1", "a2", "a3_signed", "p1", "p2", "p3", "delta", "mu", "step", "t_end", "history",
];

fn parse_number(key: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| Error::ScenarioParse(format!("key '{key}': cannot parse number '{raw}'")))
}

fn parse_history(raw: &str) -> Result<HistoryFunction> {
    let raw = raw.trim();
    if let Some(value) = raw.strip_prefix("constant") {
        let v = parse_number("history", value)?;
        return HistoryFunction::constant(v);
    }
    if let Some(list) = raw.strip_prefix("knots") {
        let mut knots = Vec::new();
        for piece in list.trim().split(',') {
            let (s, x) = piece.split_once(':').ok_or_else(|| {
                Error::ScenarioParse(format!("history knot '{piece}' must look like s:x"))
            })?;
            knots.push((parse_number("history", s)?, parse_number("history", x)?));
        }
        return HistoryFunction::piecewise_linear(knots);
    }
    Err(Error::ScenarioParse(format!(
        "history must start with 'constant' or 'knots', got '{raw}'"
    )))
}

impl Scenario {
    /// Parse scenario text. Returns the scenario plus non-fatal warnings
    /// (currently only the positive-a3 sign warning).
    pub fn parse(text: &str) -> Result<(Self, Vec<String>)> {
        let mut kv: BTreeMap<&str, String> = BTreeMap::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::ScenarioParse(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::ScenarioParse(format!(
                    "line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            if kv.insert(key, value.to_string()).is_some() {
                return Err(Error::ScenarioParse(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }

        let require = |key: &str| -> Result<String> {
            kv.get(key)
                .cloned()
                .ok_or_else(|| Error::ScenarioParse(format!("missing required key '{key}'")))
        };

        let ingested = ingest_params(
            parse_number("a1", &require("a1")?)?,
            parse_number("a2", &require("a2")?)?,
            parse_number("a3_signed", &require("a3_signed")?)?,
            parse_number("p1", &require("p1")?)?,
            parse_number("p2", &require("p2")?)?,
            parse_number("p3", &require("p3")?)?,
        )?;
        let mut warnings = Vec::new();
        if ingested.sign_warning {
            warnings.push(
                "a3_signed is positive; the mixed-feedback regime expects a negative third plateau"
                    .to_string(),
            );
        }
        let params = ingested.params;

        let delta = match kv.get("delta") {
            Some(raw) => SmoothingDelta::new(parse_number("delta", raw)?)?,
            None => SmoothingDelta::SHARP,
        };
        delta.check_ramp_windows(&params)?;

        let mu = match kv.get("mu") {
            Some(raw) => parse_number("mu", raw)?,
            None => 0.0,
        };
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::ScenarioParse(format!("mu must be >= 0, got {mu}")));
        }

        let step = parse_number("step", &require("step")?)?;
        let t_end = parse_number("t_end", &require("t_end")?)?;
        for (name, v) in [("step", step), ("t_end", t_end)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::ScenarioParse(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }

        let history = parse_history(&require("history")?)?;

        Ok((
            Scenario {
                params,
                history,
                delta,
                mu,
                step,
                t_end,
            },
            warnings,
        ))
    }

    /// Canonical dump; re-parsing it reproduces the scenario exactly.
    pub fn to_file_string(&self) -> String {
        let mut out = String::from("# relay-dde scenario\n");
        let p = &self.params;
        let f = crate::fmt17;
        out.push_str(&format!("a1 = {}\n", f(p.a1())));
        out.push_str(&format!("a2 = {}\n", f(p.a2())));
        out.push_str(&format!("a3_signed = {}\n", f(-p.a3())));
        out.push_str(&format!("p1 = {}\n", f(p.p1())));
        out.push_str(&format!("p2 = {}\n", f(p.p2())));
        out.push_str(&format!("p3 = {}\n", f(p.p3())));
        out.push_str(&format!("delta = {}\n", f(self.delta.value())));
        out.push_str(&format!("mu = {}\n", f(self.mu)));
        out.push_str(&format!("step = {}\n", f(self.step)));
        out.push_str(&format!("t_end = {}\n", f(self.t_end)));
        match &self.history {
            HistoryFunction::Constant(v) => {
                out.push_str(&format!("history = constant {}\n", f(*v)));
            }
            HistoryFunction::PiecewiseLinear(knots) => {
                let items: Vec<String> = knots
                    .iter()
                    .map(|&(s, x)| format!("{}:{}", f(s), f(x)))
                    .collect();
                out.push_str(&format!("history = knots {}\n", items.join(",")));
            }
        }
        out
    }
}
