//! Command-line front end.
//!
//! Thin dispatch from subcommands to library operations: inputs are JSON
//! [`Document`] files (plus inline `re,im` scalars), outputs go to
//! standard output at 15 significant digits, either as labeled text or as
//! one JSON object per run (`--json`). Exit codes: `0` success, `1`
//! computation error (orthogonal selections, failed checks, ...), `2`
//! input or parse error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::decompose::{
    decompose_processes, spin1_example, svd_decompose, svd_reconstruct, ProcessMixture, SvdTerm,
    EXPANSION_CONVENTION,
};
use crate::document::Document;
use crate::ensemble::{convergence_study, log_log_slope, sample_ensemble, MonteCarloEstimate};
use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector};
use crate::measure::{verify_consistency, weak_value, DoubleState, MeasureReport};
use crate::process::{dual_process, evolve_double_state, ProcessWindow};
use crate::tolerance;

/// Residual ceiling for `decompose --check`.
const CHECK_RESIDUAL: f64 = 1e-9;
/// Residual above which decomposition reports carry a caveat.
const CAVEAT_RESIDUAL: f64 = 1e-8;

/// Runs the command line given full argv (program name first) and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.name());
            exit_code(&e)
        }
    }
}

/// Input and parse problems exit with 2, computation problems with 1.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidDocument { .. }
        | Error::NonFinite { .. }
        | Error::DimensionOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::ZeroVector { .. }
        | Error::InvalidWindow { .. }
        | Error::InvalidSchedule
        | Error::InvalidSampleCount
        | Error::PlanInvalid { .. }
        | Error::InvalidMixture { .. }
        | Error::IncompleteBasis { .. }
        | Error::EmptyMixture => 2,
        _ => 1,
    }
}

#[derive(Parser)]
#[command(
    name = "doublestate",
    version,
    about = "Complex probability measures, weak values, and process mixtures \
             for pre/post-selected quantum systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complex measure mu(P) = tr(W P) of a projector.
    Measure(MeasureArgs),
    /// Expectation lambda(A) = sum_k a_k mu(P_k) of a Hermitian observable.
    Expectation(ExpectationArgs),
    /// Weak value <phi|A|psi> / <phi|psi>.
    WeakValue(WeakValueArgs),
    /// Double state W(t) inside a time window.
    Evolve(EvolveArgs),
    /// Dual pre/post-selected description of a windowed process.
    Dual(DualArgs),
    /// Expand a trace-one operator into a classical mixture of processes.
    Decompose(DecomposeArgs),
    /// Singular-value expansion with physicality flags.
    Svd(SvdArgs),
    /// Monte Carlo estimate of a mixture expectation.
    Simulate(SimulateArgs),
    /// Built-in three-level worked example, exact for every complex alpha.
    #[command(name = "spin1-example")]
    Spin1Example(Spin1Args),
    /// Check the defining consistency conditions of the complex measure.
    Verify(VerifyArgs),
}

/// Inline complex scalar: `re` or `re,im`.
fn parse_complex_arg(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = match s.split_once(',') {
        Some((re, im)) => (re.trim(), im.trim()),
        None => (s.trim(), "0"),
    };
    let re: f64 = re
        .parse()
        .map_err(|_| format!("invalid real part {re:?} (expected `re` or `re,im`)"))?;
    let im: f64 = im
        .parse()
        .map_err(|_| format!("invalid imaginary part {im:?} (expected `re` or `re,im`)"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err("components must be finite".to_string());
    }
    Ok(Complex64::new(re, im))
}

/// Where a double state (or its pre/post-selected pair) comes from:
/// either a `double_state` document or a `state`-document pair with an
/// inline weight.
#[derive(Args)]
struct SourceArgs {
    /// Double-state document (kind "double_state").
    #[arg(long, value_name = "FILE")]
    w: Option<PathBuf>,
    /// Prepared-state document (kind "state").
    #[arg(long, value_name = "FILE", requires = "phi", conflicts_with = "w")]
    psi: Option<PathBuf>,
    /// Post-selected-state document (kind "state").
    #[arg(long, value_name = "FILE", requires = "psi", conflicts_with = "w")]
    phi: Option<PathBuf>,
    /// Forward-process weight as `re[,im]` (defaults to 0.5, the
    /// self-adjoint symmetric choice).
    #[arg(
        long,
        value_name = "RE[,IM]",
        value_parser = parse_complex_arg,
        allow_hyphen_values = true,
        conflicts_with = "w"
    )]
    alpha: Option<Complex64>,
}

impl SourceArgs {
    fn alpha(&self) -> Complex64 {
        self.alpha.unwrap_or(Complex64::new(0.5, 0.0))
    }

    fn load_double_state(&self) -> Result<DoubleState> {
        if let Some(path) = &self.w {
            return Document::read_file(path)?.into_double_state();
        }
        let (psi, phi, alpha) = self.load_pair()?;
        DoubleState::from_states(&psi, &phi, alpha)
    }

    fn load_pair(&self) -> Result<(StateVector, StateVector, Complex64)> {
        if let Some(path) = &self.w {
            let w = Document::read_file(path)?.into_double_state()?;
            let Some(p) = w.provenance() else {
                return Err(Error::InvalidDocument {
                    path: path.display().to_string(),
                    reason: "double_state document lacks the provenance block \
                             (psi/phi/alpha) this command needs"
                        .to_string(),
                });
            };
            return Ok((p.psi.clone(), p.phi.clone(), p.alpha));
        }
        let (Some(psi), Some(phi)) = (&self.psi, &self.phi) else {
            return Err(Error::InvalidDocument {
                path: "--w/--psi/--phi".to_string(),
                reason: "provide either --w FILE or --psi FILE with --phi FILE".to_string(),
            });
        };
        let psi = Document::read_file(psi)?.into_state()?;
        let phi = Document::read_file(phi)?.into_state()?;
        Ok((psi, phi, self.alpha()))
    }
}

/// Where a time window comes from: a `window` document or inline
/// `--ti/--tf` plus exactly one generator file.
#[derive(Args)]
struct WindowArgs {
    /// Window document (kind "window").
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with_all = ["ti", "tf", "hamiltonian", "unitary"]
    )]
    window: Option<PathBuf>,
    /// Preparation time.
    #[arg(long, value_name = "T", allow_hyphen_values = true)]
    ti: Option<f64>,
    /// Post-selection time.
    #[arg(long, value_name = "T", allow_hyphen_values = true)]
    tf: Option<f64>,
    /// Hermitian generator document; the step is exp(-i H t).
    #[arg(long, value_name = "FILE", conflicts_with = "unitary")]
    hamiltonian: Option<PathBuf>,
    /// Unit-time step document; the step at time t is U^t.
    #[arg(long, value_name = "FILE")]
    unitary: Option<PathBuf>,
}

impl WindowArgs {
    fn load(&self) -> Result<ProcessWindow> {
        if let Some(path) = &self.window {
            return Document::read_file(path)?.into_window();
        }
        let (Some(ti), Some(tf)) = (self.ti, self.tf) else {
            return Err(Error::InvalidDocument {
                path: "--ti/--tf".to_string(),
                reason: "required unless --window FILE is given".to_string(),
            });
        };
        match (&self.hamiltonian, &self.unitary) {
            (Some(h), None) => {
                let h = Document::read_file(h)?.into_operator()?;
                ProcessWindow::with_hamiltonian(ti, tf, &h)
            }
            (None, Some(u)) => {
                let u = Document::read_file(u)?.into_operator()?;
                ProcessWindow::with_unit_step(ti, tf, &u)
            }
            _ => Err(Error::InvalidDocument {
                path: "--hamiltonian/--unitary".to_string(),
                reason: "provide exactly one generator".to_string(),
            }),
        }
    }
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Projector document (kind "operator").
    #[arg(long, value_name = "FILE")]
    projector: PathBuf,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExpectationArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Hermitian observable document (kind "operator").
    #[arg(long, value_name = "FILE")]
    obs: PathBuf,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WeakValueArgs {
    /// Prepared-state document (kind "state").
    #[arg(long, value_name = "FILE")]
    psi: PathBuf,
    /// Post-selected-state document (kind "state").
    #[arg(long, value_name = "FILE")]
    phi: PathBuf,
    /// Hermitian observable document (kind "operator").
    #[arg(long, value_name = "FILE")]
    obs: PathBuf,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Evaluation time (must lie inside the window).
    #[arg(long, value_name = "T", allow_hyphen_values = true)]
    t: f64,
    /// Write the evolved double state as a document to this file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DualArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Probe time for the equivalence residual (defaults to the window
    /// start).
    #[arg(long, value_name = "T", allow_hyphen_values = true)]
    t: Option<f64>,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Decomposition plan document (kind "plan"); defaults to a
    /// synthesized computational-basis plan.
    #[arg(long, value_name = "FILE")]
    plan: Option<PathBuf>,
    /// Fail (exit 1) unless the mixture reconstructs the input within
    /// 1e-9.
    #[arg(long)]
    check: bool,
    /// Write the mixture as a document to this file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SvdArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Mixture document (kind "mixture").
    #[arg(long, value_name = "FILE", conflicts_with_all = ["w", "psi", "phi", "alpha", "plan"])]
    mixture: Option<PathBuf>,
    #[command(flatten)]
    source: SourceArgs,
    /// Decomposition plan used when the mixture is derived from --w or
    /// --psi/--phi.
    #[arg(long, value_name = "FILE")]
    plan: Option<PathBuf>,
    /// Hermitian observable document (kind "operator").
    #[arg(long, value_name = "FILE")]
    obs: PathBuf,
    /// Number of samples.
    #[arg(long, value_name = "N", conflicts_with = "schedule")]
    samples: Option<u64>,
    /// Deterministic seed.
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    seed: u64,
    /// Strictly increasing sample counts for a convergence study, e.g.
    /// `100,1000,10000`.
    #[arg(long, value_name = "N1,N2,...", value_delimiter = ',')]
    schedule: Option<Vec<u64>>,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Spin1Args {
    /// Forward-process weight as `re[,im]` (any complex value).
    #[arg(
        long,
        value_name = "RE[,IM]",
        value_parser = parse_complex_arg,
        allow_hyphen_values = true,
        default_value = "0.5"
    )]
    alpha: Complex64,
    /// Write the four-term mixture as a document to this file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Prepared-state document (kind "state").
    #[arg(long, value_name = "FILE")]
    psi: PathBuf,
    /// Post-selected-state document (kind "state").
    #[arg(long, value_name = "FILE")]
    phi: PathBuf,
    /// Forward-process weight as `re[,im]`.
    #[arg(
        long,
        value_name = "RE[,IM]",
        value_parser = parse_complex_arg,
        allow_hyphen_values = true,
        default_value = "0.5"
    )]
    alpha: Complex64,
    /// Per-check tolerance.
    #[arg(long, value_name = "TOL", default_value_t = tolerance::REPORT_TOL)]
    tol: f64,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

// ---------------------------------------------------------------------
// Output helpers: every number printed anywhere is first rounded to 15
// significant digits.
// ---------------------------------------------------------------------

fn sig15(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.14e}").parse().expect("rounded float reparses")
}

fn fmt_real(x: f64) -> String {
    let r = sig15(x);
    if r == 0.0 || (r.abs() >= 1e-4 && r.abs() < 1e15) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("[{}, {}]", fmt_real(z.re), fmt_real(z.im))
}

fn fmt_state(state: &StateVector) -> String {
    let cells: Vec<String> = state.amplitudes().iter().map(|&z| fmt_complex(z)).collect();
    format!("[{}]", cells.join(", "))
}

fn print_matrix(op: &Operator) {
    for row in op.to_rows() {
        let cells: Vec<String> = row.into_iter().map(fmt_complex).collect();
        println!("  {}", cells.join("  "));
    }
}

fn json_complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn json_state(state: &StateVector) -> Value {
    Value::Array(
        state
            .amplitudes()
            .iter()
            .map(|&z| json_complex(z))
            .collect(),
    )
}

/// Rounds every float in a JSON tree to 15 significant digits.
fn round_json(value: Value) -> Value {
    match value {
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                Value::Number(n)
            } else {
                json!(sig15(n.as_f64().expect("finite float")))
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect())
        }
        other => other,
    }
}

fn emit_json(value: Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&round_json(value)).expect("reports always serialize")
    );
}

fn mixture_terms_json(mixture: &ProcessMixture) -> Value {
    Value::Array(
        mixture
            .terms()
            .iter()
            .map(|t| {
                json!({
                    "probability": t.probability(),
                    "psi": json_state(t.psi()),
                    "phi": json_state(t.phi()),
                    "overlap": json_complex(t.overlap()),
                })
            })
            .collect(),
    )
}

fn print_mixture(mixture: &ProcessMixture) {
    for (k, term) in mixture.terms().iter().enumerate() {
        println!(
            "  term {k}: p = {}  psi = {}  phi = {}",
            fmt_real(term.probability()),
            fmt_state(term.psi()),
            fmt_state(term.phi()),
        );
    }
}

fn print_report(report: &MeasureReport) {
    for check in &report.checks {
        println!(
            "  {:<28} expected {:<14} actual {:<32} {}",
            check.name,
            fmt_complex(check.expected),
            fmt_complex(check.actual),
            if check.pass { "pass" } else { "FAIL" },
        );
    }
}

fn report_json(report: &MeasureReport) -> Value {
    Value::Array(
        report
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "expected": json_complex(c.expected),
                    "actual": json_complex(c.actual),
                    "pass": c.pass,
                })
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------

fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::Measure(args) => cmd_measure(args),
        Command::Expectation(args) => cmd_expectation(args),
        Command::WeakValue(args) => cmd_weak_value(args),
        Command::Evolve(args) => cmd_evolve(args),
        Command::Dual(args) => cmd_dual(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Svd(args) => cmd_svd(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Spin1Example(args) => cmd_spin1(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn cmd_measure(args: &MeasureArgs) -> Result<()> {
    let w = args.source.load_double_state()?;
    let p = Document::read_file(&args.projector)?.into_operator()?;
    let value = w.complex_measure(&p)?;
    if args.json {
        emit_json(json!({
            "command": "measure",
            "dim": w.dim(),
            "value": json_complex(value),
            "tolerance": tolerance::PROJECTOR_TOL,
        }));
    } else {
        println!("mu(P) = {}", fmt_complex(value));
    }
    Ok(())
}

fn cmd_expectation(args: &ExpectationArgs) -> Result<()> {
    let w = args.source.load_double_state()?;
    let a = Document::read_file(&args.obs)?.into_operator()?;
    let value = w.lambda_expectation(&a)?;
    if args.json {
        emit_json(json!({
            "command": "expectation",
            "dim": w.dim(),
            "value": json_complex(value),
            "tolerance": tolerance::HERMITIAN_TOL,
        }));
    } else {
        println!("lambda(A) = {}", fmt_complex(value));
    }
    Ok(())
}

fn cmd_weak_value(args: &WeakValueArgs) -> Result<()> {
    let psi = Document::read_file(&args.psi)?.into_state()?;
    let phi = Document::read_file(&args.phi)?.into_state()?;
    let a = Document::read_file(&args.obs)?.into_operator()?;
    let value = weak_value(&psi, &phi, &a)?;
    if args.json {
        emit_json(json!({
            "command": "weak-value",
            "dim": psi.dim(),
            "value": json_complex(value),
            "tolerance": tolerance::OVERLAP_FLOOR,
        }));
    } else {
        println!("{}", fmt_complex(value));
    }
    Ok(())
}

fn cmd_evolve(args: &EvolveArgs) -> Result<()> {
    let (psi, phi, alpha) = args.source.load_pair()?;
    let window = args.window.load()?;
    let evolved = evolve_double_state(&psi, &phi, alpha, &window, args.t)?;
    let trace_drift = (evolved.operator().trace() - Complex64::new(1.0, 0.0)).norm();
    let doc = Document::from_double_state(&evolved);
    if let Some(path) = &args.out {
        doc.write_file(path)?;
    }
    if args.json {
        emit_json(json!({
            "command": "evolve",
            "t": args.t,
            "t_i": window.t_i(),
            "t_f": window.t_f(),
            "double_state": serde_json::to_value(&doc).expect("documents always serialize"),
            "residual": trace_drift,
            "tolerance": tolerance::TRACE_ONE_TOL,
        }));
    } else {
        println!(
            "W(t) at t = {} (window [{}, {}]):",
            fmt_real(args.t),
            fmt_real(window.t_i()),
            fmt_real(window.t_f()),
        );
        print_matrix(evolved.operator());
        println!("trace drift: {}", fmt_real(trace_drift));
    }
    Ok(())
}

fn cmd_dual(args: &DualArgs) -> Result<()> {
    let (psi, phi, alpha) = args.source.load_pair()?;
    let window = args.window.load()?;
    let (preparation, post_selection) = dual_process(&psi, &phi, &window)?;
    let t = args.t.unwrap_or_else(|| window.t_i());
    let one = Complex64::new(1.0, 0.0);
    let original = evolve_double_state(&psi, &phi, alpha, &window, t)?;
    let dual = evolve_double_state(&preparation, &post_selection, one - alpha, &window, t)?;
    let residual = original.operator().max_abs_diff(dual.operator());
    if args.json {
        emit_json(json!({
            "command": "dual",
            "preparation": json_state(&preparation),
            "post_selection": json_state(&post_selection),
            "alpha": json_complex(alpha),
            "dual_alpha": json_complex(one - alpha),
            "t": t,
            "residual": residual,
            "tolerance": tolerance::REPORT_TOL,
        }));
    } else {
        println!("dual preparation:    {}", fmt_state(&preparation));
        println!("dual post-selection: {}", fmt_state(&post_selection));
        println!(
            "weights exchange: alpha = {} -> {}",
            fmt_complex(alpha),
            fmt_complex(one - alpha),
        );
        println!(
            "equivalence residual at t = {}: {}",
            fmt_real(t),
            fmt_real(residual),
        );
    }
    Ok(())
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<()> {
    let w = args.source.load_double_state()?;
    let plan = match &args.plan {
        Some(path) => Some(Document::read_file(path)?.into_plan()?),
        None => None,
    };
    let mixture = decompose_processes(&w, plan.as_ref())?;
    let residual = mixture.reconstruct()?.operator().max_abs_diff(w.operator());
    let caveat = residual > CAVEAT_RESIDUAL;
    if let Some(path) = &args.out {
        Document::from_mixture(&mixture).write_file(path)?;
    }
    if args.json {
        emit_json(json!({
            "command": "decompose",
            "dim": w.dim(),
            "terms": mixture_terms_json(&mixture),
            "residual": residual,
            "tolerance": CHECK_RESIDUAL,
            "caveat": caveat,
            "convention": EXPANSION_CONVENTION,
        }));
    } else {
        println!(
            "process mixture ({} terms, reconstruction residual {}):",
            mixture.terms().len(),
            fmt_real(residual),
        );
        print_mixture(&mixture);
        if caveat {
            println!("warning: residual exceeds {CAVEAT_RESIDUAL:e}");
        }
        println!("coefficient convention: {EXPANSION_CONVENTION}");
    }
    if args.check && residual >= CHECK_RESIDUAL {
        return Err(Error::Numerical {
            context: format!("reconstruction residual {residual:.3e} exceeds {CHECK_RESIDUAL:e}"),
        });
    }
    Ok(())
}

fn svd_terms_json(terms: &[SvdTerm]) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|t| {
                json!({
                    "singular_value": t.singular_value,
                    "u": json_state(&t.u),
                    "v": json_state(&t.v),
                    "overlap": json_complex(t.u.inner(&t.v)),
                    "physical": t.physical,
                })
            })
            .collect(),
    )
}

fn cmd_svd(args: &SvdArgs) -> Result<()> {
    let w = args.source.load_double_state()?;
    let terms = svd_decompose(&w)?;
    let residual = svd_reconstruct(&terms, w.dim()).max_abs_diff(w.operator());
    let physical = terms.iter().filter(|t| t.physical).count();
    if args.json {
        emit_json(json!({
            "command": "svd",
            "dim": w.dim(),
            "terms": svd_terms_json(&terms),
            "physical_terms": physical,
            "residual": residual,
            "tolerance": tolerance::SVD_PHYSICAL_TOL,
        }));
    } else {
        println!(
            "singular expansion ({} terms, reconstruction residual {}):",
            terms.len(),
            fmt_real(residual),
        );
        for (k, term) in terms.iter().enumerate() {
            println!(
                "  term {k}: sigma = {}  u = {}  v = {}  physical = {} (|<u|v>| = {})",
                fmt_real(term.singular_value),
                fmt_state(&term.u),
                fmt_state(&term.v),
                term.physical,
                fmt_real(term.u.inner(&term.v).norm()),
            );
        }
        println!("{physical} of {} terms describe processes", terms.len());
    }
    Ok(())
}

fn estimate_json(estimate: &MonteCarloEstimate) -> Value {
    json!({
        "mean": json_complex(estimate.mean),
        "std_error": estimate.std_error,
        "n_samples": estimate.n_samples,
        "seed": estimate.seed,
    })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let mixture = if let Some(path) = &args.mixture {
        Document::read_file(path)?.into_mixture()?
    } else {
        let w = args.source.load_double_state()?;
        let plan = match &args.plan {
            Some(path) => Some(Document::read_file(path)?.into_plan()?),
            None => None,
        };
        decompose_processes(&w, plan.as_ref())?
    };
    let a = Document::read_file(&args.obs)?.into_operator()?;

    if let Some(schedule) = &args.schedule {
        let estimates = convergence_study(&mixture, &a, schedule, args.seed)?;
        let exact = mixture.expectation(&a)?;
        let points: Vec<(f64, f64)> = estimates
            .iter()
            .map(|e| (e.n_samples as f64, (e.mean - exact).norm()))
            .collect();
        let slope = log_log_slope(&points);
        if args.json {
            emit_json(json!({
                "command": "simulate",
                "seed": args.seed,
                "exact": json_complex(exact),
                "estimates": Value::Array(estimates.iter().map(estimate_json).collect()),
                "slope": slope,
            }));
        } else {
            println!("convergence study (seed {}):", args.seed);
            for e in &estimates {
                println!(
                    "  n = {:<8} mean = {:<42} std error = {}",
                    e.n_samples,
                    fmt_complex(e.mean),
                    fmt_real(e.std_error),
                );
            }
            println!("exact mixture expectation: {}", fmt_complex(exact));
            match slope {
                Some(s) => println!("log-log error slope: {}", fmt_real(s)),
                None => println!("log-log error slope: undefined (an error vanished)"),
            }
        }
        return Ok(());
    }

    let n = args.samples.ok_or(Error::InvalidSampleCount)?;
    let estimate = sample_ensemble(&mixture, &a, n, args.seed)?;
    if args.json {
        let mut value = estimate_json(&estimate);
        value["command"] = json!("simulate");
        emit_json(value);
    } else {
        println!(
            "estimate over {} samples (seed {}):",
            estimate.n_samples, estimate.seed,
        );
        println!("  mean      = {}", fmt_complex(estimate.mean));
        println!("  std error = {}", fmt_real(estimate.std_error));
    }
    Ok(())
}

fn cmd_spin1(args: &Spin1Args) -> Result<()> {
    let (w, mixture, report) = spin1_example(args.alpha);
    let residual = mixture.reconstruct()?.operator().max_abs_diff(w.operator());
    let caveat = residual > CAVEAT_RESIDUAL;
    if let Some(path) = &args.out {
        Document::from_mixture(&mixture).write_file(path)?;
    }
    if args.json {
        emit_json(json!({
            "command": "spin1-example",
            "alpha": json_complex(args.alpha),
            "double_state": serde_json::to_value(Document::from_double_state(&w))
                .expect("documents always serialize"),
            "terms": mixture_terms_json(&mixture),
            "residual": residual,
            "tolerance": report.tolerance,
            "caveat": caveat,
            "checks": report_json(&report),
            "all_pass": report.all_pass(),
            "convention": EXPANSION_CONVENTION,
        }));
    } else {
        println!(
            "three-level example, alpha = {}: prepared x+, post-selected z+",
            fmt_complex(args.alpha),
        );
        println!("double state:");
        print_matrix(w.operator());
        println!(
            "four-term mixture (reconstruction residual {}):",
            fmt_real(residual)
        );
        print_mixture(&mixture);
        if caveat {
            println!("warning: residual exceeds {CAVEAT_RESIDUAL:e}");
        }
        print_report(&report);
        println!("coefficient convention: {EXPANSION_CONVENTION}");
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let psi = Document::read_file(&args.psi)?.into_state()?;
    let phi = Document::read_file(&args.phi)?.into_state()?;
    let report = verify_consistency(&psi, &phi, args.alpha, args.tol)?;
    if args.json {
        emit_json(json!({
            "command": "verify",
            "alpha": json_complex(args.alpha),
            "checks": report_json(&report),
            "tolerance": report.tolerance,
            "residual": report.worst_deviation(),
            "all_pass": report.all_pass(),
        }));
    } else {
        print_report(&report);
        let verdict = if report.all_pass() { "pass" } else { "FAIL" };
        println!(
            "{} of {} checks pass (tolerance {}, worst deviation {}) -> {verdict}",
            report.checks.iter().filter(|c| c.pass).count(),
            report.checks.len(),
            fmt_real(report.tolerance),
            fmt_real(report.worst_deviation()),
        );
    }
    if !report.all_pass() {
        let failures = report.failures();
        return Err(Error::Numerical {
            context: format!(
                "{} of {} consistency checks fail (worst deviation {:.3e})",
                failures.len(),
                report.checks.len(),
                report.worst_deviation(),
            ),
        });
    }
    Ok(())
}
