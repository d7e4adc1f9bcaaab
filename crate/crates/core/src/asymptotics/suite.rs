//! The fixed set of cases behind the acceptance run.

use num_complex::Complex64;
use rayon::prelude::*;

use super::report::ScenarioReport;
use super::schedule::Anchor;
use super::{run_scenario, ScenarioInput, Tolerances};
use crate::domain::catalog::{blob, blob_jordan, example_4a};
use crate::domain::{DomainKind, DomainSpec};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct SuiteCase {
    /// Unique case label.
    pub id: &'static str,
    pub scenario: &'static str,
    /// Acceptance criterion the case belongs to.
    pub criterion: u32,
    pub input: ScenarioInput,
}

pub struct SuiteOutcome {
    pub case: SuiteCase,
    pub report: Result<ScenarioReport>,
    pub seconds: f64,
}

fn case(
    id: &'static str,
    scenario: &'static str,
    criterion: u32,
    input: ScenarioInput,
) -> SuiteCase {
    SuiteCase {
        id,
        scenario,
        criterion,
        input,
    }
}

fn on(domain: DomainSpec) -> ScenarioInput {
    ScenarioInput {
        domain: Some(domain),
        ..Default::default()
    }
}

fn with_eps(mut i: ScenarioInput, eps: f64) -> ScenarioInput {
    i.eps = Some(eps);
    i
}

fn at(mut i: ScenarioInput, anchor: Anchor) -> ScenarioInput {
    i.anchor = Some(anchor);
    i
}

pub fn suite_cases() -> Vec<SuiteCase> {
    let c0 = Complex64::new(0.0, 0.0);
    let disc_complement = DomainSpec::new(
        "disc-complement",
        DomainKind::DiscComplement {
            center: c0,
            radius: 1.0,
        },
    );
    // the origin is the image of the base point at parameter 1/2
    let origin = Anchor::new(0, 0.5);
    let at_origin = |eps: f64| at(with_eps(on(example_4a(eps)), eps), origin);
    vec![
        case(
            "prop1-disc-2/3",
            "prop1",
            1,
            on(DomainSpec::disc(c0, 2.0 / 3.0)),
        ),
        case("prop1-disc-complement", "prop1", 1, on(disc_complement)),
        case(
            "prop1-half-plane",
            "prop1",
            1,
            on(DomainSpec::upper_half_plane()),
        ),
        case("prop1-blob", "prop1", 1, on(blob())),
        case("prop2-unit-disc", "prop2", 2, on(DomainSpec::unit_disc())),
        case("prop2-half-disc", "prop2", 2, on(DomainSpec::half_disc())),
        case("prop2-blob-jordan", "prop2", 2, on(blob_jordan())),
        case("prop3-example-4a-0.25", "prop3", 3, at_origin(0.25)),
        case("prop3-example-4a-0.5", "prop3", 3, at_origin(0.5)),
        case(
            "prop3-disc",
            "prop3",
            3,
            with_eps(on(DomainSpec::unit_disc()), 0.5),
        ),
        case(
            "prop4-disc",
            "prop4",
            3,
            with_eps(on(DomainSpec::unit_disc()), 0.5),
        ),
        case(
            "example-a-0.25",
            "example-a",
            4,
            with_eps(ScenarioInput::default(), 0.25),
        ),
        case(
            "example-a-0.5",
            "example-a",
            4,
            with_eps(ScenarioInput::default(), 0.5),
        ),
        case("example-b", "example-b", 5, ScenarioInput::default()),
        case("lemma-l", "lemma-l", 6, ScenarioInput::default()),
        case("bergman", "bergman", 7, ScenarioInput::default()),
        case("prop5-disc", "prop5", 8, on(DomainSpec::unit_disc())),
        case(
            "prop5-half-plane",
            "prop5",
            8,
            on(DomainSpec::upper_half_plane()),
        ),
        case(
            "prop5-bergman-disc",
            "prop5-bergman",
            8,
            on(DomainSpec::unit_disc()),
        ),
        case("prop7-disc", "prop7", 9, on(DomainSpec::unit_disc())),
        case("prop7-blob", "prop7", 9, on(blob())),
        case("prop7b-disc", "prop7b", 9, on(DomainSpec::unit_disc())),
        case("oracles", "oracles", 10, ScenarioInput::default()),
    ]
}

/// Runs every case in parallel; the result order is the case order.
pub fn run_suite(cases: &[SuiteCase], tol: &Tolerances, seed: u64) -> Vec<SuiteOutcome> {
    cases
        .par_iter()
        .map(|c| {
            let mut input = c.input.clone();
            input.seed = seed;
            let start = std::time::Instant::now();
            let report = run_scenario(c.scenario, &input, tol);
            SuiteOutcome {
                case: c.clone(),
                report,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::scenario_ids;

    #[test]
    fn every_scenario_is_registered_in_the_suite() {
        let cases = suite_cases();
        for id in scenario_ids() {
            assert!(cases.iter().any(|c| c.scenario == id), "{id} missing");
        }
        for c in &cases {
            assert!(scenario_ids().contains(&c.scenario), "{} unknown", c.id);
        }
        let mut ids: Vec<_> = cases.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), cases.len(), "case ids must be unique");
        for k in 1..=10 {
            assert!(cases.iter().any(|c| c.criterion == k), "criterion {k}");
        }
    }
}
