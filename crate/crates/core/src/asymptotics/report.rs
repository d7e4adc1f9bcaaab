//! Scenario reports and summary rows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::extrapolate::{extrapolate, LimitEstimate};
use crate::error::Result;

type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// Within tolerance, but the evaluator's own uncertainty is large.
    Loose,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self != Verdict::Fail
    }

    pub fn within(deviation: f64, tolerance: f64) -> Verdict {
        if deviation <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Loose => "loose",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub t: f64,
    pub z: C64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<C64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub inputs: serde_json::Value,
    pub raw_trace: Vec<TracePoint>,
    pub estimate: f64,
    pub error_indicator: f64,
    pub target: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ScenarioReport>,
}

impl ScenarioReport {
    /// Report for a limit: extrapolates the trace values and compares with
    /// `target` at `tolerance`.
    pub fn limit(
        scenario: &str,
        inputs: serde_json::Value,
        raw_trace: Vec<TracePoint>,
        target: f64,
        tolerance: f64,
    ) -> Result<ScenarioReport> {
        let seq: Vec<f64> = raw_trace.iter().map(|p| p.value).collect();
        let est = extrapolate(&seq)?;
        Ok(Self::from_estimate(
            scenario, inputs, raw_trace, &est, target, tolerance,
        ))
    }

    pub fn from_estimate(
        scenario: &str,
        inputs: serde_json::Value,
        raw_trace: Vec<TracePoint>,
        est: &LimitEstimate,
        target: f64,
        tolerance: f64,
    ) -> ScenarioReport {
        let mut notes = Vec::new();
        if est.used < est.raw.len() {
            notes.push(format!(
                "extrapolated from the first {} of {} terms, where successive estimates agree best",
                est.used,
                est.raw.len()
            ));
        }
        ScenarioReport {
            scenario: scenario.to_string(),
            inputs,
            raw_trace,
            estimate: est.value,
            error_indicator: est.error_indicator,
            target,
            tolerance,
            verdict: Verdict::within((est.value - target).abs(), tolerance),
            notes,
            components: Vec::new(),
        }
    }

    /// A single checked number without a trace.
    pub fn check(
        scenario: &str,
        inputs: serde_json::Value,
        estimate: f64,
        target: f64,
        tolerance: f64,
    ) -> Self {
        ScenarioReport {
            scenario: scenario.to_string(),
            inputs,
            raw_trace: Vec::new(),
            estimate,
            error_indicator: 0.0,
            target,
            tolerance,
            verdict: Verdict::within((estimate - target).abs(), tolerance),
            notes: Vec::new(),
            components: Vec::new(),
        }
    }

    /// Parent report headed by the first component; its verdict is the worst
    /// of the components.
    pub fn composite(
        scenario: &str,
        inputs: serde_json::Value,
        components: Vec<ScenarioReport>,
    ) -> Self {
        let head = &components[0];
        let verdict = components
            .iter()
            .map(|c| c.verdict)
            .max()
            .unwrap_or(Verdict::Pass);
        ScenarioReport {
            scenario: scenario.to_string(),
            inputs,
            raw_trace: Vec::new(),
            estimate: head.estimate,
            error_indicator: head.error_indicator,
            target: head.target,
            tolerance: head.tolerance,
            verdict,
            notes: Vec::new(),
            components,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Every leaf check with a dotted label path.
    pub fn leaves(&self) -> Vec<(String, &ScenarioReport)> {
        if self.components.is_empty() {
            return vec![(self.label(), self)];
        }
        self.components
            .iter()
            .flat_map(|c| c.leaves())
            .map(|(l, r)| (format!("{}/{}", self.scenario, l), r))
            .collect()
    }

    fn label(&self) -> String {
        self.scenario.clone()
    }
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_c64(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", fmt_f64(z.re), sign, fmt_f64(z.im.abs()))
}

pub const SUMMARY_HEADER: &str = "case,check,estimate,target,tolerance,error_indicator,verdict";

/// Summary rows, one per leaf check.
pub fn summary_rows(case: &str, report: &ScenarioReport) -> Vec<String> {
    report
        .leaves()
        .into_iter()
        .map(|(label, r)| {
            format!(
                "{case},{label},{},{},{},{},{}",
                fmt_f64(r.estimate),
                fmt_f64(r.target),
                fmt_f64(r.tolerance),
                fmt_f64(r.error_indicator),
                r.verdict.as_str()
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_takes_worst_verdict() {
        let a = ScenarioReport::check("a", serde_json::Value::Null, 1.0, 1.0, 0.1);
        let mut b = ScenarioReport::check("b", serde_json::Value::Null, 0.0, 0.0, 0.1);
        b.verdict = Verdict::Loose;
        let c = ScenarioReport::composite("c", serde_json::Value::Null, vec![a.clone(), b]);
        assert_eq!(c.verdict, Verdict::Loose);
        let f = ScenarioReport::check("f", serde_json::Value::Null, 2.0, 0.0, 0.1);
        let c = ScenarioReport::composite("c", serde_json::Value::Null, vec![a, f]);
        assert_eq!(c.verdict, Verdict::Fail);
        assert_eq!(c.leaves().len(), 2);
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 5.263157894736842, -1e-300] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(
            fmt_c64(C64::new(1.0, -2.0)),
            "1.0000000000000000e0-2.0000000000000000e0i"
        );
    }

    #[test]
    fn report_json_has_schema_fields() {
        let r = ScenarioReport::check("x", serde_json::json!({"eps": 0.5}), 0.1, 0.1, 1e-3);
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        for k in [
            "scenario",
            "inputs",
            "raw_trace",
            "estimate",
            "error_indicator",
            "target",
            "tolerance",
            "verdict",
        ] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert_eq!(v["verdict"], "pass");
    }
}
