//! `iml`: evaluate invariant metrics and distances on planar domains and run
//! the boundary-behaviour scenarios.

mod literal;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use iml_core::asymptotics::{
    fmt_c64, fmt_f64, run_scenario, run_suite, scenario_ids, suite_cases, summary_rows, Anchor,
    ScenarioInput, SeparationLaw, Tolerances, Verdict, SUMMARY_HEADER,
};
use iml_core::distance::{
    bergman_dist, poincare_dist, quasi_hyperbolic_dist, s_dist, DistanceResult, PathConfig,
    PoincareKind,
};
use iml_core::domain::{lookup, DomainSpec};
use iml_core::metrics::{density_with, DensityConfig, QuantityId};
use iml_core::{Complex64, Error};

use literal::parse_complex;

const AFTER_HELP: &str = "\
Points are complex literals <float>[+|-]<float>i with no spaces, for
example 0.9+0i, -0.25-1e-3i. Negative literals may follow the flag directly.

Domains are catalog names (see `iml catalog`) or paths to a domain JSON file.

Exit status: 0 on success or a passing scenario, 1 when a scenario fails or
an evaluation breaks down numerically, 2 on usage errors, malformed JSON,
unknown scenarios and violated preconditions.

Set IML_CACHE_DIR to keep numerical Riemann map solves between runs.";

#[derive(Parser)]
#[command(name = "iml", version, about, after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate metric densities; one CSV row per point and quantity.
    Eval {
        #[arg(long)]
        domain: String,
        /// caratheodory_gamma, kobayashi_kappa, bergman_beta_scaled or
        /// kernel_sqrt_scaled. Repeatable.
        #[arg(long, required = true, value_parser = parse_quantity)]
        quantity: Vec<QuantityId>,
        /// Repeatable.
        #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_complex)]
        at: Vec<Complex64>,
        /// Riemann map nodes for Jordan domains.
        #[arg(long, default_value_t = iml_core::metrics::DEFAULT_RIEMANN_NODES)]
        nodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate distances between two points; one CSV row per kind.
    Dist {
        #[arg(long)]
        domain: String,
        /// Repeatable.
        #[arg(long, required = true, value_enum)]
        kind: Vec<DistKind>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        from: Complex64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        to: Complex64,
        /// Grid points per side for the path optimizer.
        #[arg(long, default_value_t = PathConfig::default().grid)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one scenario; prints summary rows and writes the full report.
    Verify {
        /// Scenario id, see `iml verify --help`.
        scenario: String,
        #[arg(long)]
        domain: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
        /// Boundary point as <t> or <piece>:<t>, t in [0, 1].
        #[arg(long, value_parser = parse_anchor)]
        anchor: Option<Anchor>,
        #[arg(long, value_parser = parse_quantity)]
        quantity: Option<QuantityId>,
        /// Separation law for pair scenarios.
        #[arg(long, value_parser = parse_law)]
        law: Option<SeparationLaw>,
        /// Last schedule index.
        #[arg(long)]
        k_max: Option<usize>,
        /// First schedule depth.
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tolerances: Option<PathBuf>,
        /// Report JSON path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every registered acceptance case; prints a summary CSV.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tolerances: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in domains.
    Catalog {
        /// Print the full domain JSON instead of one line per domain.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistKind {
    Caratheodory,
    Kobayashi,
    Bergman,
    QuasiHyperbolic,
    S,
}

impl DistKind {
    fn as_str(self) -> &'static str {
        match self {
            DistKind::Caratheodory => "caratheodory",
            DistKind::Kobayashi => "kobayashi",
            DistKind::Bergman => "bergman",
            DistKind::QuasiHyperbolic => "quasi_hyperbolic",
            DistKind::S => "s",
        }
    }
}

fn parse_quantity(s: &str) -> Result<QuantityId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_anchor(s: &str) -> Result<Anchor, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_law(s: &str) -> Result<SeparationLaw, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

/// Input problems exit with 2, numerical breakdowns with 1.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutsideDomain { .. }
            | Error::Indeterminate { .. }
            | Error::InvalidDomain(_)
            | Error::InvalidMap(_)
            | Error::UnsupportedQuantity { .. }
            | Error::Precondition(_)
            | Error::Schedule(_)
            | Error::Json(_)
            | Error::Io(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Eval {
            domain,
            quantity,
            at,
            nodes,
            out,
        } => {
            check_out(out.as_deref())?;
            let d = load_domain(&domain)?;
            let cfg = DensityConfig {
                riemann_nodes: nodes,
            };
            let mut csv = String::from("domain,z,quantity,value,uncertainty,method\n");
            for z in &at {
                for &q in &quantity {
                    let s = density_with(&d, *z, q, &cfg)?;
                    csv += &format!(
                        "{},{},{},{},{},{}\n",
                        d.name,
                        fmt_c64(*z),
                        q,
                        fmt_f64(s.value),
                        fmt_f64(s.uncertainty),
                        s.method.as_str()
                    );
                }
            }
            emit(out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Dist {
            domain,
            kind,
            from,
            to,
            grid,
            out,
        } => {
            check_out(out.as_deref())?;
            let d = load_domain(&domain)?;
            let path = PathConfig {
                grid,
                ..PathConfig::default()
            };
            let mut csv = String::from("domain,z,w,kind,value,method,upper_bound,tolerance\n");
            for &k in &kind {
                let r = distance(&d, from, to, k, &path)?;
                csv += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    d.name,
                    fmt_c64(from),
                    fmt_c64(to),
                    k.as_str(),
                    fmt_f64(r.value),
                    r.method,
                    r.upper_bound,
                    fmt_f64(r.tolerance)
                );
            }
            emit(out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Verify {
            scenario,
            domain,
            eps,
            anchor,
            quantity,
            law,
            k_max,
            t0,
            seed,
            tolerances,
            out,
        } => {
            if !scenario_ids().contains(&scenario.as_str()) {
                return Err(Failure::usage(format!(
                    "unknown scenario `{scenario}`; known: {}",
                    scenario_ids().join(", ")
                )));
            }
            check_out(out.as_deref())?;
            let tol = load_tolerances(tolerances.as_deref())?;
            let input = ScenarioInput {
                domain: domain.as_deref().map(load_domain).transpose()?,
                anchor,
                eps,
                quantity,
                law,
                k_max,
                t0,
                depth_scale: None,
                seed,
            };
            let report = run_scenario(&scenario, &input, &tol)?;
            if let Some(path) = &out {
                write_atomic(path, &(report.to_json()? + "\n"))?;
            }
            let mut csv = format!("{SUMMARY_HEADER}\n");
            for row in summary_rows(&scenario, &report) {
                csv += &row;
                csv.push('\n');
            }
            emit(None, &csv)?;
            Ok(verdict_code(report.verdict))
        }
        Command::Suite {
            seed,
            tolerances,
            out,
        } => {
            check_out(out.as_deref())?;
            let tol = load_tolerances(tolerances.as_deref())?;
            let outcomes = run_suite(&suite_cases(), &tol, seed);
            let mut csv = format!("{SUMMARY_HEADER}\n");
            let mut code = 0;
            for o in &outcomes {
                match &o.report {
                    Ok(r) => {
                        for row in summary_rows(o.case.id, r) {
                            csv += &row;
                            csv.push('\n');
                        }
                        code = code.max(verdict_code(r.verdict));
                    }
                    Err(e) => {
                        eprintln!("error: case {}: {e}", o.case.id);
                        csv += &format!("{},{},,,,,error\n", o.case.id, o.case.scenario);
                        code = 1;
                    }
                }
            }
            emit(out.as_deref(), &csv)?;
            Ok(code)
        }
        Command::Catalog { json } => {
            let mut text = String::new();
            if json {
                let docs = iml_core::domain::catalog()
                    .iter()
                    .map(|d| d.to_json())
                    .collect::<Result<Vec<_>, _>>()?;
                text = format!("[\n{}\n]\n", docs.join(",\n"));
            } else {
                text += "# names accepted by --domain\n";
                for n in iml_core::domain::catalog_names() {
                    text += n;
                    text.push('\n');
                }
            }
            emit(None, &text)?;
            Ok(0)
        }
    }
}

fn verdict_code(v: Verdict) -> u8 {
    if v.passed() {
        0
    } else {
        1
    }
}

fn distance(
    d: &DomainSpec,
    z: Complex64,
    w: Complex64,
    kind: DistKind,
    path: &PathConfig,
) -> Result<DistanceResult, Error> {
    match kind {
        DistKind::Caratheodory => poincare_dist(d, z, w, PoincareKind::Caratheodory),
        DistKind::Kobayashi => poincare_dist(d, z, w, PoincareKind::Kobayashi),
        DistKind::Bergman => bergman_dist(d, z, w, path),
        DistKind::QuasiHyperbolic => quasi_hyperbolic_dist(d, z, w, path),
        DistKind::S => Ok(DistanceResult {
            value: s_dist(d, z, w)?,
            method: iml_core::distance::DistanceMethod::ClosedForm,
            upper_bound: false,
            iterations: 0,
            tolerance: 0.0,
        }),
    }
}

/// A catalog name, or a path to a domain JSON file.
fn load_domain(arg: &str) -> Result<DomainSpec, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read domain file `{arg}`: {e}")))?;
        return DomainSpec::from_json(&text).map_err(|e| match e {
            Error::Json(e) => Failure::usage(format!("malformed domain JSON in `{arg}`: {e}")),
            e => e.into(),
        });
    }
    if arg.ends_with(".json") || arg.contains(std::path::MAIN_SEPARATOR) {
        return Err(Failure::usage(format!(
            "domain file `{arg}` does not exist"
        )));
    }
    lookup(arg).map_err(|e| {
        Failure::usage(format!(
            "unknown domain `{arg}` ({e}); run `iml catalog` for the names"
        ))
    })
}

fn load_tolerances(path: Option<&Path>) -> Result<Tolerances, Failure> {
    let Some(path) = path else {
        return Ok(Tolerances::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::usage(format!(
            "cannot read tolerance profile `{}`: {e}",
            path.display()
        ))
    })?;
    Tolerances::from_json(&text).map_err(|e| {
        Failure::usage(format!(
            "malformed tolerance profile `{}`: {e}",
            path.display()
        ))
    })
}

/// The directory an output file goes into must already exist.
fn check_out(out: Option<&Path>) -> Result<(), Failure> {
    let Some(out) = out else { return Ok(()) };
    let dir = out_dir(out);
    if !dir.is_dir() {
        return Err(Failure::usage(format!(
            "output directory `{}` does not exist",
            dir.display()
        )));
    }
    Ok(())
}

fn out_dir(out: &Path) -> &Path {
    match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_atomic(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::from(Error::Io(e))),
    }
}

/// Writes into a temporary file next to `path` and renames it into place.
fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::usage(format!("cannot write `{}`: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(out_dir(path)).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
