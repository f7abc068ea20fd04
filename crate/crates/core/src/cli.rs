//! The `symdom` command-line tool.
//!
//! Exit codes: 0 success, 1 failing verification, 2 malformed input or
//! configuration, 3 element outside the unit ball, 4 numeric non-convergence.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::boundary::{
    detour_cost, detour_cost_numeric, detour_metric, gromov_numeric, gromov_singletons,
    horofunction_eval, singleton_eval, LimitReport, DEFAULT_DETOUR_SCHEDULE,
    DEFAULT_GROMOV_EXPONENTS, DEFAULT_HORO_SCHEDULE,
};
use crate::error::Error;
use crate::geometry::{bergman_distance, caratheodory_distance};
use crate::json::{self, number};
use crate::maps::{self, BallMap, Metric};
use crate::verify::{self, Fault, Suite};
use crate::{DEFAULT_TOL, TOL_ENV_VAR};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_OUTSIDE: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "symdom", version, about = "Bounded symmetric domain toolkit")]
pub struct Cli {
    /// Tolerance for tripotent and orthogonality predicates.
    #[arg(long, global = true, env = TOL_ENV_VAR)]
    pub tol: Option<f64>,

    /// Write the JSON output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Caratheodory,
    Bergman,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Caratheodory => Metric::Caratheodory,
            MetricArg::Bergman => Metric::Bergman,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Core,
    Boundary,
    Maps,
}

impl SuiteArg {
    fn suite(self) -> Option<Suite> {
        match self {
            SuiteArg::All => None,
            SuiteArg::Core => Some(Suite::Core),
            SuiteArg::Boundary => Some(Suite::Boundary),
            SuiteArg::Maps => Some(Suite::Maps),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Carathéodory and Bergman distance between two elements.
    Dist {
        x: PathBuf,
        y: PathBuf,
        /// Report only this metric.
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
    },
    /// Horofunction of a spec evaluated at a point.
    Horo {
        spec: PathBuf,
        point: PathBuf,
        /// Geodesic times, e.g. `10,15,20`.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<f64>>,
    },
    /// Gromov product of the singleton horofunctions of two minimal tripotents.
    Gromov {
        u: PathBuf,
        v: PathBuf,
        /// Exponents k of the numeric schedule t = 1 - 10^-k, e.g. `3,4,5,6,7,8`.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<f64>>,
    },
    /// Detour cost between two horofunction specs, both ways.
    Detour {
        xi: PathBuf,
        eta: PathBuf,
        /// Outer geodesic times, e.g. `6,8,10`.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<f64>>,
    },
    /// Sampled homomorphism, isometry and holomorphy checks for a map.
    MapCheck {
        map: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = maps::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Runs the registered identity checks.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

/// Outcome of a command: the document to emit and the exit code.
struct Output {
    doc: Value,
    code: i32,
}

impl Output {
    fn ok(doc: Value) -> Self {
        Self { doc, code: EXIT_OK }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::OutsideDomain { .. } => EXIT_OUTSIDE,
        Error::LinearSolve { .. } | Error::Clamp { .. } | Error::Inconsistent(_) => {
            EXIT_NOT_CONVERGED
        }
        _ => EXIT_MALFORMED,
    }
}

fn read(path: &Path) -> crate::Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn limit_doc(report: &LimitReport, value: f64, converged: bool) -> Value {
    let mut doc = json::limit_report_to_value(report);
    doc["value"] = number(value);
    doc["converged"] = Value::Bool(converged);
    doc
}

fn with_convergence(doc: Value, converged: bool) -> Output {
    Output {
        doc,
        code: if converged { EXIT_OK } else { EXIT_NOT_CONVERGED },
    }
}

fn dist(x: &Path, y: &Path, metric: Option<MetricArg>) -> crate::Result<Output> {
    let x = json::parse_element(&read(x)?)?;
    let y = json::parse_element(&read(y)?)?;
    x.space().ensure_same(y.space())?;
    let mut doc = serde_json::Map::new();
    if metric != Some(MetricArg::Bergman) {
        doc.insert("caratheodory".into(), number(caratheodory_distance(&x, &y)?));
    }
    if metric != Some(MetricArg::Caratheodory) {
        doc.insert("bergman".into(), number(bergman_distance(&x, &y)?));
    }
    Ok(Output::ok(Value::Object(doc)))
}

fn horo(spec: &Path, point: &Path, schedule: Option<Vec<f64>>, tol: f64) -> crate::Result<Output> {
    let spec = json::parse_spec(&read(spec)?, tol)?;
    let z = json::parse_element(&read(point)?)?;
    let schedule = schedule.unwrap_or(DEFAULT_HORO_SCHEDULE.to_vec());
    let report = horofunction_eval(&spec, &z, &schedule)?;
    let mut doc = limit_doc(&report, report.value, report.converged);
    if spec.len() == 1 {
        doc["closed_form"] = number(singleton_eval(&spec.tripotents()[0], &z)?);
    }
    Ok(with_convergence(doc, report.converged))
}

fn exponents(schedule: Option<Vec<f64>>) -> crate::Result<Vec<u32>> {
    match schedule {
        None => Ok(DEFAULT_GROMOV_EXPONENTS.to_vec()),
        Some(ks) => ks
            .into_iter()
            .map(|k| {
                if k.fract() == 0.0 && (1.0..=15.0).contains(&k) {
                    Ok(k as u32)
                } else {
                    Err(Error::Invalid(format!("schedule exponent {k} is not an integer in 1..=15")))
                }
            })
            .collect(),
    }
}

fn gromov(u: &Path, v: &Path, schedule: Option<Vec<f64>>, tol: f64) -> crate::Result<Output> {
    let u = json::parse_tripotent(&read(u)?, tol)?;
    let v = json::parse_tripotent(&read(v)?, tol)?;
    let closed = gromov_singletons(&u, &v)?;
    let numeric = gromov_numeric(&u, &v, &exponents(schedule)?)?;
    let converged = if closed.is_finite() {
        numeric.converged
    } else {
        numeric.divergent
    };
    let mut doc = limit_doc(&numeric, closed, converged);
    doc["numeric"] = number(numeric.value);
    doc["divergent"] = Value::Bool(numeric.divergent);
    Ok(with_convergence(doc, converged))
}

fn detour(xi: &Path, eta: &Path, schedule: Option<Vec<f64>>, tol: f64) -> crate::Result<Output> {
    let xi = json::parse_spec(&read(xi)?, tol)?;
    let eta = json::parse_spec(&read(eta)?, tol)?;
    let schedule = schedule.unwrap_or(DEFAULT_DETOUR_SCHEDULE.to_vec());
    let h_xy = detour_cost(&xi, &eta, tol)?;
    let h_yx = detour_cost(&eta, &xi, tol)?;
    let numeric = detour_cost_numeric(&xi, &eta, &schedule)?;
    let converged = if h_xy.is_finite() {
        numeric.converged
    } else {
        numeric.divergent
    };
    let mut doc = limit_doc(&numeric, h_xy, converged);
    doc["numeric"] = number(numeric.value);
    doc["H_xy"] = number(h_xy);
    doc["H_yx"] = number(h_yx);
    doc["delta"] = number(detour_metric(&xi, &eta, tol)?);
    Ok(with_convergence(doc, converged))
}

fn map_check(path: &Path, seed: u64, samples: usize, tol: f64) -> crate::Result<Output> {
    let map = json::parse_map(&read(path)?)?;
    let mut reports = Vec::new();
    let plain = map.pre.is_empty() && map.post.is_empty();
    if plain && !map.linear.is_conjugate_linear() {
        reports.push(json::map_report_to_value(&maps::is_triple_homomorphism(
            &map.linear,
            samples.min(50),
            seed,
        )?));
    }
    let mut isometric = true;
    for metric in [Metric::Caratheodory, Metric::Bergman] {
        let r = maps::is_isometry_sampled(&map, metric, samples, seed)?;
        isometric &= r.passed();
        reports.push(json::map_report_to_value(&r));
    }
    reports.push(json::map_report_to_value(&maps::rank_genus_report(
        map.domain(),
        map.codomain(),
    )));
    let normalized = maps::normalize_origin(&map)?;
    let mut rng = crate::random::rng(seed);
    let minimal = maps::sample_minimal(map.domain(), 8, &mut rng);
    let holomorphy = match maps::holomorphy_classifier(&normalized, &minimal, tol) {
        Ok((_, r)) => json::map_report_to_value(&r),
        Err(e) => json!({"subject": "holomorphy", "verdict": "undetermined", "error": e.to_string()}),
    };
    reports.push(holomorphy);
    Ok(Output::ok(json!({
        "map": json::map_to_value(&map),
        "seed": seed,
        "samples": samples,
        "isometric": isometric,
        "reports": reports,
    })))
}

fn verify_cmd(suite: SuiteArg, seed: u64, fault: Option<String>) -> crate::Result<Output> {
    let fault = fault.map(|f| f.parse::<Fault>()).transpose()?;
    let report = verify::run(seed, suite.suite(), fault);
    for e in &report.entries {
        eprintln!(
            "{:<4} {:<36} residual {:.3e} (tol {:.0e})",
            e.verdict(),
            e.lemma_id,
            e.max_residual,
            e.tolerance
        );
    }
    Ok(Output {
        doc: report.to_value(),
        code: if report.passed() {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        },
    })
}

fn tolerance(cli: &Cli) -> crate::Result<f64> {
    match cli.tol {
        None => Ok(DEFAULT_TOL),
        Some(t) if t.is_finite() && t > 0.0 => Ok(t),
        Some(t) => Err(Error::Invalid(format!("tolerance {t} must be positive"))),
    }
}

fn execute(cli: Cli) -> crate::Result<Output> {
    let tol = tolerance(&cli)?;
    match cli.command {
        Command::Dist { x, y, metric } => dist(&x, &y, metric),
        Command::Horo {
            spec,
            point,
            schedule,
        } => horo(&spec, &point, schedule, tol),
        Command::Gromov { u, v, schedule } => gromov(&u, &v, schedule, tol),
        Command::Detour { xi, eta, schedule } => detour(&xi, &eta, schedule, tol),
        Command::MapCheck { map, seed, samples } => map_check(&map, seed, samples, tol),
        Command::Verify {
            suite,
            seed,
            inject_fault,
        } => verify_cmd(suite, seed, inject_fault),
    }
}

fn emit(doc: &Value, out: Option<&Path>) -> std::io::Result<()> {
    let text = json::to_document(doc);
    match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let out = cli.out.clone();
    match execute(cli) {
        Ok(output) => match emit(&output.doc, out.as_deref()) {
            Ok(()) => output.code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_MALFORMED
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            let _ = emit(&json!({"error": e.to_string()}), out.as_deref());
            exit_code(&e)
        }
    }
}

/// Parses arguments, mapping usage errors to exit code 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
