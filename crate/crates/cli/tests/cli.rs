use std::path::Path;
use std::process::{Command, Output};

use iml_core::asymptotics::Tolerances;
use iml_core::domain::catalog::blob;
use iml_core::metrics::{density, QuantityId};
use iml_core::Complex64 as C64;
use serde_json::Value;

fn iml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iml"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Column `name` of the first data row.
fn field(csv: &str, name: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    row[k].to_string()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_kobayashi_on_the_disc() {
    let o = iml(&[
        "eval",
        "--domain",
        "unit-disc",
        "--quantity",
        "kobayashi_kappa",
        "--at",
        "0.9+0i",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    assert_eq!(
        csv.lines().next().unwrap(),
        "domain,z,quantity,value,uncertainty,method"
    );
    let v: f64 = field(&csv, "value").parse().unwrap();
    assert!(v.to_string().starts_with("5.263157894736"), "{v}");
    assert_eq!(field(&csv, "method"), "closed_form");
}

#[test]
fn eval_matches_the_library_bit_for_bit() {
    let z = C64::new(0.31, -0.42);
    let o = iml(&[
        "eval",
        "--domain",
        "blob",
        "--quantity",
        "kernel_sqrt_scaled",
        "--at",
        "0.31-0.42i",
    ]);
    let v: f64 = field(&stdout(&o), "value").parse().unwrap();
    assert_eq!(
        v,
        density(&blob(), z, QuantityId::KernelSqrtScaled).unwrap()
    );
}

#[test]
fn domain_file_and_catalog_name_agree() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("blob.json");
    std::fs::write(&file, blob().to_json().unwrap()).unwrap();
    let args = |d: &str| {
        iml(&[
            "eval",
            "--domain",
            d,
            "--quantity",
            "kobayashi_kappa",
            "--at",
            "0.2+0.1i",
        ])
    };
    assert_eq!(stdout(&args("blob")), stdout(&args(path_str(&file))));
}

#[test]
fn dist_rows_follow_the_schema() {
    let o = iml(&[
        "dist",
        "--domain",
        "unit-disc",
        "--kind",
        "kobayashi",
        "--kind",
        "s",
        "--from",
        "0+0i",
        "--to",
        "-0.5+0i",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "domain,z,w,kind,value,method,upper_bound,tolerance"
    );
    assert_eq!(lines.len(), 3);
    // atanh(1/2) = ln(3) / 2
    let v: f64 = field(&csv, "value").parse().unwrap();
    let exact = 0.5 * 3f64.ln();
    assert!((v - exact).abs() <= Tolerances::default().properties.mobius);
    assert_eq!(field(&csv, "upper_bound"), "false");
}

#[test]
fn verify_prop1_on_the_disc() {
    let o = iml(&["verify", "prop1", "--domain", "unit-disc", "--anchor", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    let est: f64 = field(&csv, "estimate").parse().unwrap();
    assert!((est - 0.25).abs() <= Tolerances::default().prop1.closed_form);
    assert_eq!(field(&csv, "verdict"), "pass");
}

#[test]
fn verify_writes_the_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = iml(&[
        "verify",
        "example-a",
        "--eps",
        "0.5",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for key in [
        "scenario",
        "inputs",
        "raw_trace",
        "estimate",
        "error_indicator",
        "target",
        "tolerance",
        "verdict",
    ] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    let est = r["components"][0]["estimate"].as_f64().unwrap();
    assert!((est - 0.125).abs() <= Tolerances::default().example_a.tolerance);
    assert_eq!(r["verdict"], "pass");
    // nothing but the report is left in the directory
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn failing_scenario_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut profile: Value =
        serde_json::from_str(include_str!("../../core/tolerances/default.json")).unwrap();
    profile["example_a"]["tolerance"] = Value::from(1e-300);
    let file = dir.path().join("strict.json");
    std::fs::write(&file, profile.to_string()).unwrap();
    let o = iml(&[
        "verify",
        "example-a",
        "--eps",
        "0.5",
        "--k-max",
        "12",
        "--tolerances",
        path_str(&file),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains(",fail"));
}

#[test]
fn outputs_are_bitwise_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = iml(&[
            "verify",
            "prop1",
            "--domain",
            "blob",
            "--out",
            path_str(&out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
    let dist = |name: &str| {
        let out = dir.path().join(name);
        iml(&[
            "dist",
            "--domain",
            "unit-disc",
            "--kind",
            "quasi-hyperbolic",
            "--grid",
            "64",
            "--from",
            "0.1+0.2i",
            "--to",
            "-0.3+0.4i",
            "--out",
            path_str(&out),
        ]);
        std::fs::read(out).unwrap()
    };
    assert_eq!(dist("a.csv"), dist("b.csv"));
}

#[test]
fn input_errors_exit_with_two_and_distinct_messages() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"name\": ").unwrap();
    let missing_dir = dir.path().join("nope").join("r.json");
    let eval = |domain: &str, at: &str| {
        iml(&[
            "eval",
            "--domain",
            domain,
            "--quantity",
            "kobayashi_kappa",
            "--at",
            at,
        ])
    };
    let cases = [
        (iml(&["verify", "prop9"]), "unknown scenario"),
        (eval(path_str(&bad), "0+0i"), "malformed domain JSON"),
        (eval("no-such-domain", "0+0i"), "unknown domain"),
        (eval("missing.json", "0+0i"), "does not exist"),
        (eval("unit-disc", "1.5+0i"), "not an interior point"),
        (eval("unit-disc", "0.5 + 0i"), "malformed complex literal"),
        (
            iml(&["verify", "prop1", "--out", path_str(&missing_dir)]),
            "output directory",
        ),
        (
            iml(&["verify", "prop1", "--anchor", "1.5"]),
            "outside [0, 1]",
        ),
        (
            iml(&["verify", "prop1", "--tolerances", path_str(&bad)]),
            "malformed tolerance profile",
        ),
        (iml(&["frobnicate"]), "unrecognized subcommand"),
    ];
    for (o, msg) in cases {
        assert_eq!(o.status.code(), Some(2), "{msg}: {}", stderr(&o));
        assert!(stderr(&o).contains(msg), "{msg}: {}", stderr(&o));
    }
}

#[test]
fn unknown_scenario_is_rejected_before_computation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = iml(&["verify", "prop9", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn catalog_lists_the_builtin_domains() {
    let o = iml(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let names = stdout(&o);
    for n in ["unit-disc", "half-plane", "half-disc", "disc-1", "blob"] {
        assert!(names.lines().any(|l| l == n), "{n}");
    }
    let o = iml(&["catalog", "--json"]);
    let docs: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(docs.len(), iml_core::domain::catalog().len());
}

#[test]
fn help_documents_the_point_grammar() {
    let o = iml(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("<float>[+|-]<float>i"));
}
