use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liecert::notation::{format_root, parse_root, parse_simple_set, simple_label};
use liecert::prover::{
    self, prove, render_trace, verify_certificate, Budget, Certificate, Problem, SearchOptions,
    SweepConfig,
};
use liecert::rankone::{
    nonequicontinuity_witness, parse_rational, scale, TwoStepNilpotent, Vector,
};
use liecert::{Root, RootSystem, Series};
use serde_json::json;

/// Exit codes.
const USAGE: u8 = 2;
const SEARCH: u8 = 3;
const VERIFY: u8 = 4;
const IO: u8 = 5;

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn usage(e: impl ToString) -> Failure {
    fail(USAGE, e.to_string())
}

type Outcome = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "liecert",
    version,
    about = "Root-system combinatorics and certified degree-reduction derivations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positive roots, Φ⁺_max and the Dynkin graph of a simple system.
    Roots {
        series: Series,
        rank: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Search for a degree-reduction derivation and print its trace.
    Derive {
        series: Series,
        rank: usize,
        /// Simple roots of the Levi factor, e.g. `β`, `a,c` or `∅`.
        #[arg(long, default_value = "∅")]
        lambda: String,
        /// Essential range, e.g. `α+β,α+2β` or `[1,1]`.
        #[arg(long)]
        er: String,
        /// Write the certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stop at the first root outside Φ⁺_max instead of recursing.
        #[arg(long)]
        stop_at_goal: bool,
        /// Never fall back to exhaustive search.
        #[arg(long)]
        playbook_only: bool,
        #[arg(long, value_enum, default_value_t = DeriveFormat::Trace)]
        format: DeriveFormat,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Derive and verify every instance up to a rank.
    Sweep {
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        /// Series to include, comma separated.
        #[arg(long, value_delimiter = ',')]
        series: Vec<Series>,
        /// Largest essential range tried.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        er_size: u64,
        /// Also sweep E6, E7 and E8.
        #[arg(long)]
        include_large: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Replay a certificate file.
    Verify { path: PathBuf },
    /// Non-equicontinuity witness in a rank-one chart algebra.
    Rankone {
        #[arg(value_enum)]
        model: Model,
        /// Model size (`n` of the Heisenberg or quaternionic algebra, or the dimension).
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Scalars `k`; the sequence is `v_k = k·v`.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
        k: Vec<String>,
        /// Central direction: a basis label (`z`, `z2`) or coordinates.
        #[arg(long, default_value = "z")]
        dir: String,
        /// Base vector: a basis label (`e1`, `f1`) or coordinates.
        #[arg(long, default_value = "e1")]
        v: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Search step budget.
    #[arg(long, env = "LIECERT_MAX_STEPS", value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: Option<u64>,
    /// Wall-clock budget in seconds.
    #[arg(long, value_parser = positive_seconds)]
    max_seconds: Option<f64>,
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(s) = self.max_steps {
            b.max_steps = s;
        }
        b.max_seconds = self.max_seconds;
        b
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeriveFormat {
    Trace,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Abelian,
    Heisenberg,
    Quaternionic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Roots {
            series,
            rank,
            format,
        } => cmd_roots(series, rank, format),
        Command::Derive {
            series,
            rank,
            lambda,
            er,
            out,
            stop_at_goal,
            playbook_only,
            format,
            budget,
        } => {
            let opts = SearchOptions {
                budget: budget.budget(),
                stop_at_goal,
                playbook_only,
            };
            cmd_derive(series, rank, &lambda, &er, &opts, format, out.as_deref())
        }
        Command::Sweep {
            max_rank,
            series,
            er_size,
            include_large,
            format,
            budget,
        } => {
            let mut config = SweepConfig::new(max_rank);
            if !series.is_empty() {
                config.series = series;
            }
            config.er_size_cap = er_size as usize;
            config.include_large = include_large;
            config.options.budget = budget.budget();
            cmd_sweep(&config, format)
        }
        Command::Verify { path } => cmd_verify(&path),
        Command::Rankone {
            model,
            n,
            k,
            dir,
            v,
            out,
        } => cmd_rankone(model, n as usize, &k, &dir, &v, out.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("liecert: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| fail(IO, format!("cannot write {}: {e}", path.display())))
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON value serializes");
    s.push('\n');
    s
}

fn root_entry(r: &Root) -> serde_json::Value {
    json!({ "label": format_root(r), "coeffs": r.coeffs(), "degree": r.degree().unwrap_or(0) })
}

fn cmd_roots(series: Series, rank: usize, format: Format) -> Outcome {
    let sys = RootSystem::build(series, rank).map_err(usage)?;
    let positive = sys.positive_roots();
    let phi_max = sys.phi_max();
    let edges = sys.dynkin_edges();
    match format {
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "system": sys.name(),
                "series": series,
                "rank": rank,
                "reduced": sys.is_reduced(),
                "cartan": sys.cartan(),
                "positive_roots": positive.iter().map(root_entry).collect::<Vec<_>>(),
                "phi_max": phi_max.iter().map(root_entry).collect::<Vec<_>>(),
                "dynkin_edges": edges,
            });
            emit(&pretty(&doc));
        }
        Format::Table => {
            let reduced = if sys.is_reduced() {
                "reduced"
            } else {
                "non-reduced"
            };
            let mut out = String::new();
            let _ = writeln!(out, "{} ({reduced})", sys.name());
            let labels: Vec<String> = (0..rank).map(simple_label).collect();
            let _ = writeln!(out, "simple roots: {}", labels.join(", "));
            let edges: Vec<String> = edges
                .iter()
                .map(|&(i, j)| format!("{}-{}", simple_label(i), simple_label(j)))
                .collect();
            let edges = if edges.is_empty() {
                "none".to_string()
            } else {
                edges.join(", ")
            };
            let _ = writeln!(out, "Dynkin edges: {edges}");
            let _ = writeln!(out, "positive roots ({}):", positive.len());
            for r in positive {
                let _ = writeln!(
                    out,
                    "  {:<16} {:?}  degree {}",
                    format_root(r),
                    r.coeffs(),
                    r.degree().unwrap_or(0)
                );
            }
            let max: Vec<String> = phi_max.iter().map(format_root).collect();
            let _ = writeln!(out, "Φ⁺_max ({}): {}", max.len(), max.join(", "));
            emit(&out);
        }
    }
    Ok(())
}

/// Splits on commas that are not inside brackets, so `[1,1],a+b` is two items.
fn split_items(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out.into_iter().filter(|s| !s.is_empty()).collect()
}

fn cmd_derive(
    series: Series,
    rank: usize,
    lambda: &str,
    er: &str,
    opts: &SearchOptions,
    format: DeriveFormat,
    out: Option<&Path>,
) -> Outcome {
    let sys = RootSystem::build(series, rank).map_err(usage)?;
    let lambda = parse_simple_set(&sys, lambda).map_err(usage)?;
    let er = split_items(er)
        .into_iter()
        .map(|t| parse_root(&sys, t))
        .collect::<liecert::Result<Vec<Root>>>()
        .map_err(usage)?;
    let problem = Problem::new(series, rank, lambda, er);
    problem.initial_descriptor().map_err(usage)?;
    let cert = prove(&problem, opts).map_err(|e| {
        let mut msg = format!("no derivation found: {e}");
        for f in &e.frontier {
            msg.push_str(&format!("\n  frontier: {f}"));
        }
        fail(SEARCH, msg)
    })?;
    let check = verify_certificate(&cert);
    if let Some(path) = out {
        write_file(path, &cert.to_json())?;
    }
    match format {
        DeriveFormat::Trace => emit(&render_trace(&cert)),
        DeriveFormat::Json => emit(&format!("{}\n", cert.to_json())),
    }
    match check.failure {
        None => Ok(()),
        Some(f) => Err(fail(VERIFY, format!("certificate does not replay: {f}"))),
    }
}

fn cmd_sweep(config: &SweepConfig, format: Format) -> Outcome {
    let report = prover::sweep(config).map_err(usage)?;
    match format {
        Format::Table => emit(&report.table()),
        Format::Json => {
            let doc = json!({ "schema_version": SCHEMA_VERSION, "report": report });
            emit(&pretty(&doc));
        }
    }
    if report.failures == 0 {
        Ok(())
    } else {
        Err(fail(
            SEARCH,
            format!("{} instances failed", report.failures),
        ))
    }
}

fn cmd_verify(path: &Path) -> Outcome {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(IO, format!("cannot read {}: {e}", path.display())))?;
    let cert =
        Certificate::from_json(&text).map_err(|e| fail(IO, format!("{}: {e}", path.display())))?;
    let v = verify_certificate(&cert);
    match v.failure {
        None => {
            emit(&format!("valid: {} nodes replayed\n", v.nodes_checked));
            Ok(())
        }
        Some(f) => {
            emit(&format!("invalid: {}\n", f.clause));
            Err(fail(VERIFY, f.to_string()))
        }
    }
}

/// A basis label of `alg` or comma-separated rational coordinates.
fn parse_vector(alg: &TwoStepNilpotent, text: &str) -> Result<Vector, Failure> {
    if let Some(i) = alg.basis_index(text.trim()) {
        return Ok(alg.basis_vector(i));
    }
    let v = text
        .split(',')
        .map(parse_rational)
        .collect::<liecert::Result<Vector>>()
        .map_err(|_| usage(format!("`{text}` is neither a basis label nor a vector")))?;
    if v.len() != alg.dim() {
        return Err(usage(format!(
            "`{text}` has {} coordinates, expected {}",
            v.len(),
            alg.dim()
        )));
    }
    Ok(v)
}

fn cmd_rankone(
    model: Model,
    n: usize,
    ks: &[String],
    dir: &str,
    v: &str,
    out: Option<&Path>,
) -> Outcome {
    let alg = match model {
        Model::Abelian => TwoStepNilpotent::abelian(n),
        Model::Heisenberg => TwoStepNilpotent::heisenberg(n),
        Model::Quaternionic => TwoStepNilpotent::quaternionic(n),
    };
    let xi = parse_vector(&alg, dir)?;
    let base = parse_vector(&alg, v)?;
    let labels: Vec<String> = ks.iter().map(|k| k.trim().to_string()).collect();
    let seq = labels
        .iter()
        .map(|k| parse_rational(k).map(|c| scale(&base, &c)))
        .collect::<liecert::Result<Vec<Vector>>>()
        .map_err(usage)?;
    let witness = nonequicontinuity_witness(&alg, &labels, &seq, &xi).map_err(usage)?;
    let value = serde_json::to_value(witness.to_doc()).expect("witness serializes");
    let text = pretty(&value);
    match out {
        Some(path) => write_file(path, &text),
        None => {
            emit(&text);
            Ok(())
        }
    }
}
