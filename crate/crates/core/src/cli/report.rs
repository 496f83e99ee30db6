//! The JSON report written by every command.
//!
//! Floats are written with 17 significant digits so a report reproduces the
//! exact binary values; non-finite values become `null`. The run timestamp is
//! the only field that varies between identical runs.

use std::collections::HashMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::config::RunConfig;
use crate::clifford::{basis, calibrate_projectors};
use crate::error::Result;

/// A float serialized as `d.dddddddddddddddde±x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// How a measured value is compared with its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// An error that must stay at or below the threshold.
    AtMost,
    /// A quantity that must exceed the threshold.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub value: Num,
    pub tolerance: Num,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name.into(), value, tolerance, Comparison::AtMost)
    }

    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name.into(), value, tolerance, Comparison::AtLeast)
    }

    /// A boolean outcome, recorded as value 0 (holds) or 1 (fails).
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::at_most(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    fn new(name: String, value: f64, tolerance: f64, comparison: Comparison) -> Self {
        let pass = passes(value, tolerance, comparison);
        Self { name, chart: None, seed: None, value: Num(value), tolerance: Num(tolerance), comparison, pass }
    }

    pub fn on(mut self, chart: &str, seed: Option<u64>) -> Self {
        self.chart = Some(chart.to_string());
        self.seed = seed;
        self
    }

    /// Keeps the worse of two measurements of the same check.
    pub fn merge(&mut self, other: &Check) {
        let v = match self.comparison {
            Comparison::AtMost => worst_max(self.value.0, other.value.0),
            Comparison::AtLeast => worst_min(self.value.0, other.value.0),
        };
        self.value = Num(v);
        self.pass = passes(v, self.tolerance.0, self.comparison);
    }
}

// NaN compares false either way, so it always fails
fn passes(value: f64, tolerance: f64, comparison: Comparison) -> bool {
    match comparison {
        Comparison::AtMost => value <= tolerance,
        Comparison::AtLeast => value > tolerance,
    }
}

fn worst_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn worst_min(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.min(b)
    }
}

/// Collects checks, merging repeated measurements of the same named check at
/// the same location while keeping first-seen order.
#[derive(Clone, Debug, Default)]
pub struct CheckList {
    pub checks: Vec<Check>,
    index: HashMap<(String, Option<String>, Option<u64>), usize>,
}

impl CheckList {
    pub fn push(&mut self, c: Check) {
        let key = (c.name.clone(), c.chart.clone(), c.seed);
        match self.index.get(&key) {
            Some(&i) => self.checks[i].merge(&c),
            None => {
                self.index.insert(key, self.checks.len());
                self.checks.push(c);
            }
        }
    }

    pub fn extend(&mut self, other: CheckList) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn prefixed(self, prefix: &str) -> Self {
        let mut out = CheckList::default();
        for mut c in self.checks {
            c.name = format!("{prefix}/{}", c.name);
            out.push(c);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub charts: Vec<String>,
    pub seeds: Vec<u64>,
    pub points: usize,
    pub degree: u32,
    pub bound: Num,
    pub mass: Num,
    pub tolerances: Vec<(String, Num)>,
}

impl From<&RunConfig> for ConfigEcho {
    fn from(c: &RunConfig) -> Self {
        Self {
            charts: c.charts.iter().map(|s| s.to_string()).collect(),
            seeds: c.seeds.clone(),
            points: c.points,
            degree: c.degree,
            bound: Num(c.bound),
            mass: Num(c.mass),
            tolerances: c.tolerances.iter().map(|(t, v)| (t.name().to_string(), Num(v))).collect(),
        }
    }
}

/// The sign and normalisation choices every number in the report depends on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conventions {
    pub gamma_basis: &'static str,
    pub gamma_fingerprint: String,
    pub metric_signature: &'static str,
    pub epsilon_orientation: &'static str,
    pub gamma5: &'static str,
    pub sigma: &'static str,
    pub spin_connection: &'static str,
    pub riemann_sign: &'static str,
    pub ricci: &'static str,
    pub j_factor: &'static str,
    /// Closed-form trace projector over exact projector, per component class, as `[re, im]`.
    pub calibration: Vec<(String, [Num; 2])>,
    /// `k` in `tr(gamma^c sigma^{ab} gamma^l gamma^5) = k i eps^{abcl}`, as `[re, im]`.
    pub epsilon_trace_constant: [Num; 2],
}

impl Conventions {
    pub fn current() -> Self {
        let cal = calibrate_projectors();
        let pair = |z: crate::clifford::C64| [Num(z.re), Num(z.im)];
        Self {
            gamma_basis: "Weyl: gamma^a = [[0, sigmabar^a], [sigma^a, 0]], sigma^a = (1, sigma^k), sigmabar^a = (1, -sigma^k)",
            gamma_fingerprint: basis().fingerprint(),
            metric_signature: "(+,-,-,-)",
            epsilon_orientation: "eps^{0123} = +1, eps_{0123} = -1",
            gamma5: "gamma^5 = i gamma^0 gamma^1 gamma^2 gamma^3",
            sigma: "sigma^{ab} = [gamma^a, gamma^b]/4",
            spin_connection: "Gamma_alpha = (1/2) sigma^{ab} e^beta_(a) nabla_alpha e_(b)beta",
            riemann_sign: "[nabla_alpha, nabla_beta] W_sigma = W_nu R^nu_{sigma beta alpha}",
            ricci: "R_{sigma nu} = R^rho_{sigma rho nu}",
            j_factor: "J(e) = -e/|e|, E_{alpha beta rho sigma} = J(e) eps_{alpha beta rho sigma}(x)",
            calibration: vec![
                ("scalar".into(), pair(cal.scalar)),
                ("vector".into(), pair(cal.vector)),
                ("tensor".into(), pair(cal.tensor)),
                ("pseudoscalar".into(), pair(cal.pseudoscalar)),
                ("pseudovector".into(), pair(cal.pseudovector)),
            ],
            epsilon_trace_constant: pair(basis().epsilon_trace_constant()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub timestamp: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigEcho>,
    pub conventions: Conventions,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, config: Option<&RunConfig>, checks: CheckList) -> Self {
        let checks = checks.checks;
        let passed = checks.iter().filter(|c| c.pass).count();
        let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed, pass: passed == checks.len() };
        Self {
            tool: "dkl",
            version: env!("CARGO_PKG_VERSION"),
            timestamp: now(),
            command: command.to_string(),
            config: config.map(ConfigEcho::from),
            conventions: Conventions::current(),
            checks,
            summary,
        }
    }

    pub fn pass(&self) -> bool {
        self.summary.pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// The JSON text with the timestamp blanked, for comparing runs.
    pub fn body(&self) -> Result<String> {
        Report { timestamp: String::new(), ..self.clone() }.to_json()
    }
}

fn now() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let vals = [0.1, -2.5e-13, f64::NAN, f64::INFINITY];
        let s = serde_json::to_string(&vals.map(Num)).unwrap();
        assert_eq!(s, "[1.0000000000000001e-1,-2.4999999999999999e-13,null,null]");
        let back: Vec<Option<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![Some(0.1), Some(-2.5e-13), None, None]);
    }

    #[test]
    fn comparisons() {
        assert!(Check::at_most("a", 1e-13, 1e-12).pass);
        assert!(!Check::at_most("a", f64::NAN, 1e-12).pass);
        assert!(Check::at_least("b", 1e-3, 1e-4).pass);
        assert!(!Check::at_least("b", 1e-4, 1e-4).pass);
        assert!(!Check::holds("c", false).pass);
    }

    #[test]
    fn merging_keeps_the_worst_value() {
        let mut l = CheckList::default();
        l.push(Check::at_most("x", 1e-13, 1e-12).on("c", Some(1)));
        l.push(Check::at_most("x", 1e-11, 1e-12).on("c", Some(1)));
        l.push(Check::at_most("x", 1e-14, 1e-12).on("c", Some(2)));
        l.push(Check::at_least("y", 1.0, 0.5));
        l.push(Check::at_least("y", 0.1, 0.5));
        assert_eq!(l.checks.len(), 3);
        assert!(!l.checks[0].pass && l.checks[0].value.0 == 1e-11);
        assert!(l.checks[1].pass);
        assert!(!l.checks[2].pass && l.checks[2].value.0 == 0.1);
    }

    #[test]
    fn summary_and_body() {
        let mut l = CheckList::default();
        l.push(Check::at_most("ok", 0.0, 1.0));
        l.push(Check::at_most("bad", 2.0, 1.0));
        let r = Report::new("test", Some(&RunConfig::default()), l);
        assert_eq!((r.summary.total, r.summary.passed, r.summary.failed, r.pass()), (2, 1, 1, false));
        let body = r.body().unwrap();
        assert!(body.contains("\"timestamp\": \"\""));
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["checks"][1]["comparison"], "at_most");
        assert_eq!(v["config"]["points"], 32);
    }
}
