//! Boundary-approach experiments: schedules, limit extrapolation and one
//! scenario runner per boundary-behaviour claim.

mod checks;
mod extrapolate;
mod limits;
mod pairs;
mod report;
mod schedule;
mod suite;
mod tolerances;

use serde::Serialize;

use crate::domain::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::metrics::QuantityId;

pub use extrapolate::{extrapolate, LimitEstimate};
pub use report::{
    fmt_c64, fmt_f64, summary_rows, ScenarioReport, TracePoint, Verdict, SUMMARY_HEADER,
};
pub use schedule::{
    Anchor, ApproachSchedule, PairDirection, PairSample, RaySample, SeparationLaw, DEPTH_RATIO_TOL,
};
pub use suite::{run_suite, suite_cases, SuiteCase, SuiteOutcome};
pub use tolerances::{Properties, Tolerances};

/// Optional inputs shared by all scenarios; each scenario picks its own
/// defaults for what is left out.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ScenarioInput {
    pub domain: Option<DomainSpec>,
    pub anchor: Option<Anchor>,
    pub eps: Option<f64>,
    pub quantity: Option<QuantityId>,
    pub law: Option<SeparationLaw>,
    /// Replaces the last schedule index, keeping the starting depth.
    pub k_max: Option<usize>,
    /// Replaces the starting depth, rounded to a whole number of halvings
    /// above the last depth, which is kept.
    pub t0: Option<f64>,
    /// Multiplies every schedule depth, so a domain scaled by `lambda` can
    /// be sampled at the scaled points.
    pub depth_scale: Option<f64>,
    pub seed: u64,
}

type Runner = fn(&ScenarioInput, &Tolerances) -> Result<ScenarioReport>;

/// Registered scenario ids with their runners.
pub const SCENARIOS: &[(&str, Runner)] = &[
    ("prop1", limits::prop1),
    ("prop2", limits::prop2),
    ("prop3", limits::prop3),
    ("prop4", limits::prop4),
    ("example-a", limits::example_a),
    ("example-b", limits::example_b),
    ("lemma-l", checks::lemma_l),
    ("bergman", checks::bergman),
    ("prop5", pairs::prop5),
    ("prop5-bergman", pairs::prop5_bergman),
    ("prop7", pairs::prop7),
    ("prop7b", pairs::prop7b),
    ("oracles", checks::oracles),
];

pub fn scenario_ids() -> Vec<&'static str> {
    SCENARIOS.iter().map(|(id, _)| *id).collect()
}

pub fn run_scenario(id: &str, input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    let (_, run) = SCENARIOS
        .iter()
        .find(|(name, _)| *name == id)
        .ok_or_else(|| {
            Error::Precondition(format!(
                "unknown scenario `{id}`; known: {}",
                scenario_ids().join(", ")
            ))
        })?;
    run(input, tol)
}

/// How densities on a domain are evaluated, which sets both the schedule
/// floor and the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Route {
    ClosedForm,
    Pullback,
    Numerical,
}

impl Route {
    pub(crate) fn of(domain: &DomainSpec) -> Route {
        match domain.kind {
            DomainKind::ConformalImage { .. } => Route::Pullback,
            DomainKind::JordanDomain { .. } => Route::Numerical,
            _ => Route::ClosedForm,
        }
    }

    pub(crate) fn pick(self, t: &tolerances::ByMethod) -> f64 {
        match self {
            Route::ClosedForm => t.closed_form,
            Route::Pullback => t.pullback,
            Route::Numerical => t.numerical,
        }
    }

    /// Normal-ray schedule: the full halving sequence for closed forms,
    /// otherwise halvings ending exactly at the route's floor.
    pub(crate) fn schedule(self, anchor: Anchor, tol: &Tolerances) -> ApproachSchedule {
        let s = &tol.schedule;
        let floor = match self {
            Route::ClosedForm => {
                return ApproachSchedule {
                    anchor,
                    t0: s.t0,
                    rho: s.rho,
                    k_max: s.k_closed_form,
                }
            }
            Route::Pullback => s.t_floor_pullback,
            Route::Numerical => s.t_floor_numerical,
        };
        let k = ((s.t0 / floor).ln() / (1.0 / s.rho).ln()).round().max(4.0) as usize;
        ApproachSchedule {
            anchor,
            t0: floor / s.rho.powi(k as i32),
            rho: s.rho,
            k_max: k,
        }
    }

    pub(crate) fn as_str(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed_form",
            Route::Pullback => "pullback",
            Route::Numerical => "numerical",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_scenario_is_registered() {
        let ids = scenario_ids();
        for case in suite_cases() {
            assert!(
                ids.contains(&case.scenario),
                "{} is not registered",
                case.scenario
            );
        }
        for id in &ids {
            assert!(
                suite_cases().iter().any(|c| c.scenario == *id),
                "registered scenario {id} is not part of the suite"
            );
        }
    }

    #[test]
    fn route_schedules_end_at_floor() {
        let tol = Tolerances::default();
        let a = Anchor::new(0, 0.0);
        let n = Route::Numerical.schedule(a, &tol);
        assert!((n.depths()[n.k_max] - 1e-4).abs() < 1e-18);
        assert_eq!(n.k_max, 10);
        let p = Route::Pullback.schedule(a, &tol);
        assert!((p.depths()[p.k_max] - 1e-5).abs() < 1e-19);
        assert_eq!(Route::ClosedForm.schedule(a, &tol).k_max, 24);
    }

    #[test]
    fn unknown_scenario_rejected() {
        assert!(run_scenario("prop9", &ScenarioInput::default(), &Tolerances::default()).is_err());
    }
}
