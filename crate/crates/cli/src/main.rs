//! `proctheory`: run audits, law suites, closures, GP round trips and
//! totalisations, and print text or JSON reports.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use proctheory::audit::{run_audit, AuditConfig};
use proctheory::backends::spek::{closure_generate, spek_pure_exclusion_witness, ClosureSpec, DEFAULT_BUDGET};
use proctheory::backends::{MatCat, MatSampler, RelCat, RelSampler};
use proctheory::catcore::{check_laws, Law, LawConfig, Sampler, Theory};
use proctheory::cpm::{Cpm, CpmSampler, FloatCpmSampler};
use proctheory::phased::gp_roundtrip_check;
use proctheory::scalars::{Complex64, GaussRat, Nat, Rat, RatNonneg};
use proctheory::subcausal::{totalise_pcm, FinitePCM};
use proctheory::{Error, LawReport};

const SEED_ENV: &str = "PROCTHEORY_SEED";

#[derive(Parser, Debug)]
#[command(name = "proctheory", version, about = "Audit finite process theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the principle audit on a theory.
    Audit(AuditArgs),
    /// Run the category, monoidal, dagger, compact and discard law suites.
    Laws(LawsArgs),
    /// Generate the Spek or MSpek closure and check its states.
    Closure(ClosureArgs),
    /// Round trip through the phase quotient and GP construction.
    GpRoundtrip(GpArgs),
    /// Bounded totalisation of a finite partial commutative monoid.
    Totalise(TotaliseArgs),
    /// Print the JSON schema of audit reports.
    ReportSchema,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Samples per check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Base seed; the PROCTHEORY_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Numerical tolerance for float backends.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here; a summary still goes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Record elapsed times (reports are then no longer byte-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct AuditArgs {
    /// cpmC, cpmR or mspek.
    #[arg(long, default_value = "cpmC")]
    backend: String,
    /// Object dimensions (generator powers for mspek).
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    /// Check names, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    checks: Vec<String>,
    /// Corrupt the backend: non_isometric_kernels, non_central_phases,
    /// transpose_composed or no_dagger.
    #[arg(long)]
    mutant: Option<String>,
    /// Audit configuration JSON; replaces the other audit flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct LawsArgs {
    /// matB, matN, matQ, matQplus, matQi, matR, matC, rel, cpmQ, cpmQi, cpmR or cpmC.
    #[arg(long)]
    backend: String,
    /// Largest object dimension is the maximum listed.
    #[arg(long, value_delimiter = ',', default_value = "4")]
    dims: Vec<usize>,
    /// Law names; all by default.
    #[arg(long, value_delimiter = ',')]
    laws: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    Spek,
    Mspek,
}

#[derive(Args, Debug)]
struct ClosureArgs {
    #[arg(long, value_enum, default_value_t = Model::Spek)]
    model: Model,
    /// Generator power `n` (objects up to IV^n).
    #[arg(long, default_value_t = 1)]
    n: u8,
    /// Largest number of generated morphisms.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Allow n ≥ 2, which is expensive and need not saturate.
    #[arg(long)]
    large: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct GpArgs {
    #[arg(long, value_delimiter = ',', default_value = "3")]
    dims: Vec<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct TotaliseArgs {
    /// PCM JSON file; defaults to {0, 1/2, 1}.
    #[arg(long)]
    pcm: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    max_word: usize,
    #[command(flatten)]
    common: Common,
}

/// Exit code 2 problems.
#[derive(Debug)]
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = Result<T, UsageError>;

fn effective_seed(flag: u64) -> CliResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn versions() -> Value {
    json!({"proctheory": env!("CARGO_PKG_VERSION")})
}

/// Generic report for the non-audit subcommands.
fn command_report(command: &str, seed: u64, params: Value, entries: &[LawReport], extra: Value) -> Value {
    let pass = entries.iter().all(LawReport::passed);
    let mut v = json!({
        "command": command,
        "metadata": {"seed": seed, "versions": versions(), "params": params, "timestamp": timestamp()},
        "entries": entries,
        "pass": pass,
    });
    if !extra.is_null() {
        v["result"] = extra;
    }
    v
}

fn text_of(entries: &[LawReport]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&e.summary_line());
        out.push('\n');
        for f in e.failures.iter().take(3) {
            out.push_str(&format!("    witness: {}\n", f.message));
        }
        for n in &e.notes {
            out.push_str(&format!("    note: {n}\n"));
        }
    }
    out
}

/// Prints or writes the report and returns the exit code.
fn emit(common: &Common, json_report: &Value, text: String, pass: bool) -> CliResult<ExitCode> {
    let json_text = serde_json::to_string_pretty(json_report).expect("report serializes") + "\n";
    let rendered = match common.format {
        Format::Json => json_text,
        Format::Text => text.clone(),
    };
    match &common.output {
        Some(path) => {
            fs::write(path, rendered).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
            print!("{text}");
        }
        None => print!("{rendered}"),
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn audit(args: AuditArgs) -> CliResult<ExitCode> {
    let mut cfg = match &args.config {
        Some(path) => {
            let raw = fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&raw).map_err(|e| UsageError(format!("config is not JSON: {e}")))?;
            AuditConfig::from_json(&v)?
        }
        None => AuditConfig {
            backend: args.backend.clone(),
            dims: args.dims.clone(),
            samples: args.common.samples,
            seed: args.common.seed,
            tol: args.common.tol,
            checks: args.checks.clone(),
            mutant: args.mutant.clone(),
            timings: args.common.timings,
        },
    };
    cfg.seed = effective_seed(cfg.seed)?;
    let report = run_audit(&cfg)?;
    let mut v = report.to_json();
    v["metadata"]["timestamp"] = json!(timestamp());
    emit(&args.common, &v, report.summary(), report.passed())
}

fn run_suite<T: Theory, P: Sampler<T>>(t: &T, p: &P, laws: &[Law], cfg: &LawConfig) -> Vec<LawReport> {
    check_laws(t, p, laws, cfg)
}

fn laws(args: LawsArgs) -> CliResult<ExitCode> {
    let c = &args.common;
    let seed = effective_seed(c.seed)?;
    let max_dim = *args.dims.iter().max().ok_or_else(|| UsageError("no dimensions given".into()))?;
    if max_dim == 0 || max_dim > 8 {
        return Err(UsageError("dimensions must lie between 1 and 8".into()));
    }
    let laws: Vec<Law> = if args.laws.is_empty() {
        Law::ALL.to_vec()
    } else {
        args.laws
            .iter()
            .map(|n| Law::from_name(n).ok_or_else(|| UsageError(format!("unknown law `{n}`"))))
            .collect::<CliResult<_>>()?
    };
    let cfg = LawConfig {
        samples: c.samples,
        seed,
        max_dim,
        timings: c.timings,
    };
    let tol = c.tol;
    let entries = match args.backend.as_str() {
        "matB" => run_suite(&MatCat::<bool>::new(), &MatSampler, &laws, &cfg),
        "matN" => run_suite(&MatCat::<Nat>::new(), &MatSampler, &laws, &cfg),
        "matQ" => run_suite(&MatCat::<Rat>::new(), &MatSampler, &laws, &cfg),
        "matQplus" => run_suite(&MatCat::<RatNonneg>::new(), &MatSampler, &laws, &cfg),
        "matQi" => run_suite(&MatCat::<GaussRat>::new(), &MatSampler, &laws, &cfg),
        "matR" => run_suite(&MatCat::<f64>::with_tolerance(tol), &MatSampler, &laws, &cfg),
        "matC" => run_suite(&MatCat::<Complex64>::with_tolerance(tol), &MatSampler, &laws, &cfg),
        "rel" => run_suite(&RelCat::new(), &RelSampler, &laws, &cfg),
        "cpmQ" => run_suite(&Cpm::<Rat>::new(), &CpmSampler, &laws, &cfg),
        "cpmQi" => run_suite(&Cpm::<GaussRat>::new(), &CpmSampler, &laws, &cfg),
        "cpmR" => run_suite(&Cpm::<f64>::with_tolerance(tol), &FloatCpmSampler, &laws, &cfg),
        "cpmC" => run_suite(&Cpm::<Complex64>::with_tolerance(tol), &FloatCpmSampler, &laws, &cfg),
        other => return Err(UsageError(format!("unknown backend `{other}`"))),
    };
    let params = json!({"backend": args.backend, "max_dim": max_dim, "samples": c.samples, "tol": tol});
    let report = command_report("laws", seed, params, &entries, Value::Null);
    let pass = entries.iter().all(LawReport::passed);
    emit(c, &report, text_of(&entries), pass)
}

fn closure(args: ClosureArgs) -> CliResult<ExitCode> {
    let c = &args.common;
    let seed = effective_seed(c.seed)?;
    if args.n == 0 {
        return Err(UsageError("generator power must be at least 1".into()));
    }
    if args.n >= 2 && !args.large {
        return Err(UsageError("n ≥ 2 needs --large".into()));
    }
    if args.n > 2 {
        return Err(UsageError("generator powers above 2 are not supported".into()));
    }
    let spec = match args.model {
        Model::Spek => ClosureSpec::spek(args.n),
        Model::Mspek => ClosureSpec::mspek(args.n),
    }
    .with_budget(args.budget);
    let closure = closure_generate(&spec);
    let mut entries = Vec::new();
    let mut sat = LawReport::new("saturated").with_statement("the closure reaches a fixpoint within the budget");
    sat.check(closure.saturated, || {
        proctheory::Failure::new(format!("budget exhausted after {} morphisms", closure.len()))
    });
    entries.push(sat);
    for n in 1..=args.n {
        let want = 1usize << n;
        let mut card = LawReport::new(format!("state_cardinality[IV^{n}]"));
        for s in closure.nonzero_states(n) {
            let k = s.cardinality();
            let ok = match args.model {
                Model::Spek => k == want,
                Model::Mspek => k >= want,
            };
            card.check(ok, || proctheory::Failure::new(format!("state of cardinality {k}")).input(s.to_json()));
        }
        card.statement = match args.model {
            Model::Spek => format!("nonzero states on IV^{n} have cardinality {want}"),
            Model::Mspek => format!("nonzero states on IV^{n} have cardinality at least {want}"),
        };
        entries.push(card);
    }
    if args.model == Model::Spek {
        let mut excl = LawReport::new("pure_exclusion[IV]").with_statement("every nonzero state on IV is annihilated by a nonzero effect");
        for s in closure.nonzero_states(1) {
            excl.check(spek_pure_exclusion_witness(&closure, s).is_some(), || {
                proctheory::Failure::new("no excluding effect").input(s.to_json())
            });
        }
        entries.push(excl);
    }
    let params = json!({"model": format!("{:?}", args.model).to_lowercase(), "n": args.n, "budget": args.budget});
    let report = command_report("closure", seed, params, &entries, closure.report_json());
    let pass = entries.iter().all(LawReport::passed);
    let text = format!(
        "{} closure n = {}: {} morphisms, saturated = {}\n{}",
        if args.model == Model::Spek { "Spek" } else { "MSpek" },
        args.n,
        closure.len(),
        closure.saturated,
        text_of(&entries)
    );
    emit(c, &report, text, pass)
}

fn gp_roundtrip(args: GpArgs) -> CliResult<ExitCode> {
    let c = &args.common;
    let seed = effective_seed(c.seed)?;
    let max_dim = *args.dims.iter().max().ok_or_else(|| UsageError("no dimensions given".into()))?;
    if max_dim == 0 {
        return Err(UsageError("dimensions must be positive".into()));
    }
    let mut gp = gp_roundtrip_check(max_dim, c.samples, seed, 1e3 * c.tol);
    if c.timings {
        gp.elapsed_ms = Some(0);
    }
    let mut cfg = AuditConfig::new("cpmC");
    cfg.dims = (1..=max_dim).collect();
    cfg.samples = c.samples;
    cfg.seed = seed;
    cfg.tol = c.tol;
    cfg.checks = vec!["reconstruction_roundtrip".into()];
    let audit = run_audit(&cfg)?;
    let e = &audit.entries[0];
    let mut recon = LawReport::new(e.check.clone()).with_statement(e.statement.clone());
    recon.samples = e.samples;
    for w in &e.witnesses {
        recon.fail(w.clone());
    }
    recon.failure_count = e.failure_count;
    recon.notes = e.notes.clone();
    let entries = vec![gp, recon];
    let params = json!({"max_dim": max_dim, "samples": c.samples, "tol": c.tol});
    let report = command_report("gp-roundtrip", seed, params, &entries, Value::Null);
    let pass = entries.iter().all(LawReport::passed);
    emit(c, &report, text_of(&entries), pass)
}

fn totalise(args: TotaliseArgs) -> CliResult<ExitCode> {
    let c = &args.common;
    let seed = effective_seed(c.seed)?;
    let pcm = match &args.pcm {
        Some(path) => {
            let raw = fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&raw).map_err(|e| UsageError(format!("PCM file is not JSON: {e}")))?;
            FinitePCM::from_json(&v)?
        }
        None => FinitePCM::unit_interval(2),
    };
    let axioms = pcm.check_axioms();
    if !axioms.passed() {
        return Err(UsageError(format!("not a partial commutative monoid: {}", axioms.failures[0].message)));
    }
    let t = totalise_pcm(&pcm, args.max_word)?;
    let entries = vec![axioms, t.check_embedding(&pcm), t.check_fact(&pcm)];
    let params = json!({"max_word": args.max_word, "elements": pcm.elements});
    let report = command_report("totalise", seed, params, &entries, t.to_json(&pcm));
    let pass = entries.iter().all(LawReport::passed);
    let certified = t.certified().count();
    let text = format!(
        "totalisation with max_word {}: {} classes, {certified} certified\n{}",
        args.max_word,
        t.classes.len(),
        text_of(&entries)
    );
    emit(c, &report, text, pass)
}

fn report_schema() -> CliResult<ExitCode> {
    let failure = json!({
        "type": "object",
        "required": ["message", "inputs", "deviation"],
        "properties": {
            "message": {"type": "string"},
            "inputs": {"type": "array", "description": "serialized morphisms replaying the instance"},
            "lhs": {},
            "rhs": {},
            "deviation": {"type": "number"}
        }
    });
    let schema = json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "AuditReport",
        "type": "object",
        "required": ["metadata", "entries", "pass"],
        "properties": {
            "metadata": {
                "type": "object",
                "required": ["backend", "dims", "samples", "seed", "tol", "versions"],
                "properties": {
                    "backend": {"enum": ["cpmC", "cpmR", "mspek"]},
                    "mutant": {"enum": ["non_isometric_kernels", "non_central_phases", "transpose_composed", "no_dagger"]},
                    "dims": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                    "samples": {"type": "integer", "minimum": 1},
                    "seed": {"type": "integer", "minimum": 0},
                    "tol": {"type": "number", "exclusiveMinimum": 0},
                    "versions": {"type": "object", "additionalProperties": {"type": "string"}},
                    "timestamp": {"type": "integer", "description": "unix seconds; the only field that varies between identical runs"}
                }
            },
            "entries": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["check", "statement", "pass", "samples", "failure_count", "witnesses"],
                    "properties": {
                        "check": {"type": "string"},
                        "statement": {"type": "string"},
                        "pass": {"type": "boolean"},
                        "samples": {"type": "integer", "minimum": 0},
                        "failure_count": {"type": "integer", "minimum": 0},
                        "witnesses": {"type": "array", "items": failure},
                        "notes": {"type": "array", "items": {"type": "string"}},
                        "elapsed_ms": {"type": "integer", "minimum": 0}
                    }
                }
            },
            "pass": {"type": "boolean"}
        }
    });
    println!("{}", serde_json::to_string_pretty(&schema).expect("schema serializes"));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Audit(a) => audit(a),
        Command::Laws(a) => laws(a),
        Command::Closure(a) => closure(a),
        Command::GpRoundtrip(a) => gp_roundtrip(a),
        Command::Totalise(a) => totalise(a),
        Command::ReportSchema => report_schema(),
    };
    match result {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
