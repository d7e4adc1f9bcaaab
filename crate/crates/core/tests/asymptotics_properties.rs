use iml_core::asymptotics::{run_scenario, ScenarioInput, ScenarioReport, Tolerances};
use iml_core::domain::catalog::blob;
use iml_core::domain::DomainSpec;
use iml_core::Complex64 as C64;
use proptest::prelude::*;

fn run(id: &str, input: &ScenarioInput) -> ScenarioReport {
    run_scenario(id, input, &Tolerances::default()).unwrap()
}

fn on(domain: DomainSpec) -> ScenarioInput {
    ScenarioInput {
        domain: Some(domain),
        ..Default::default()
    }
}

/// Four more schedule steps move the estimate by no more than its own
/// error indicator.
fn self_consistent(id: &str, input: ScenarioInput) {
    let base = run(id, &input);
    let k = base.inputs["k_max"].as_u64().expect("k_max recorded") as usize;
    let longer = run(
        id,
        &ScenarioInput {
            k_max: Some(k + 4),
            ..input
        },
    );
    let shift = (longer.estimate - base.estimate).abs();
    assert!(
        shift <= base.error_indicator,
        "{id}: shift {shift:e} above indicator {:e}",
        base.error_indicator
    );
}

#[test]
fn closed_form_limit_is_self_consistent() {
    self_consistent("prop1", on(DomainSpec::disc(C64::new(0.0, 0.0), 2.0 / 3.0)));
}

#[test]
fn pullback_limit_is_self_consistent() {
    self_consistent("prop1", on(blob()));
}

#[test]
fn product_limit_is_self_consistent() {
    self_consistent("prop2", on(DomainSpec::unit_disc()));
}

#[test]
fn sharp_constant_is_self_consistent() {
    self_consistent(
        "example-a",
        ScenarioInput {
            eps: Some(0.5),
            k_max: Some(16),
            ..Default::default()
        },
    );
}

#[test]
fn reports_are_deterministic() {
    for (id, input) in [
        ("prop1", on(blob())),
        ("bergman", ScenarioInput::default()),
        ("oracles", ScenarioInput::default()),
    ] {
        let a = run(id, &input).to_json().unwrap();
        let b = run(id, &input).to_json().unwrap();
        assert_eq!(a, b, "{id}");
    }
}

#[test]
fn seed_changes_sampled_points_only() {
    let a = run("bergman", &ScenarioInput::default());
    let b = run(
        "bergman",
        &ScenarioInput {
            seed: 5,
            ..Default::default()
        },
    );
    assert_ne!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.verdict, b.verdict);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scaled_domain_keeps_limits(anchor in 0.0f64..1.0) {
        let tol = Tolerances::default().properties.scaling;
        let anchor = iml_core::asymptotics::Anchor::new(0, anchor);
        for id in ["prop2", "prop5", "prop7"] {
            let at = |lam: f64| ScenarioInput {
                anchor: Some(anchor),
                depth_scale: Some(lam),
                ..on(blob().scaled(lam))
            };
            let plain = run(id, &at(1.0)).estimate;
            let scaled = run(id, &at(3.0)).estimate;
            prop_assert!((plain - scaled).abs() <= tol, "{id}: {plain} vs {scaled}");
        }
    }
}
