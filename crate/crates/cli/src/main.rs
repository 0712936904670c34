//! `sawcount`: exact self-avoiding walk counts and connective-constant bounds.
//!
//! Exit codes: 0 on success, 1 on usage or parse errors, 2 when a resource
//! cap stopped the run (partial results are still written and flagged).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use saw_core::enumerate::WORKERS_ENV;
use saw_core::EnumOptions;

#[derive(Parser, Debug)]
#[command(name = "sawcount", version, about = "Exact self-avoiding walk enumeration and connective-constant bounds")]
struct Cli {
    /// Worker threads for enumeration.
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,

    /// Largest ball materialized before falling back to direct search.
    #[arg(long, global = true, default_value_t = saw_core::graph::DEFAULT_BALL_CAP)]
    max_ball: usize,

    /// Wall-clock limit in seconds; exceeding it exits with code 2.
    #[arg(long, global = true)]
    max_seconds: Option<f64>,

    /// Prefix length at which the search is split into tasks.
    #[arg(long, global = true, default_value_t = 4)]
    split_depth: usize,

    /// Suppress progress messages on stderr.
    #[arg(short, long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count self-avoiding walks (and optional variants) up to length n.
    Count(CountArgs),
    /// Bracket the connective constant with rigorous bounds.
    Estimate(EstimateArgs),
    /// Apply a graph construction and print the resulting spec.
    #[command(subcommand)]
    Transform(TransformCmd),
    /// Test whether mu(A) < mu(B) is established by the computed intervals.
    Compare(CompareArgs),
    /// Connectivity, degree and local transitivity checks.
    Check(CheckArgs),
    /// Solve the Fisher or semi-Fisher relation for a given mu.
    Solve(SolveArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    /// Built-in name, spec file, or group description.
    #[arg(short, long)]
    graph: String,
    /// Longest walk length.
    #[arg(short, long)]
    n: usize,
    /// Also count walks extendable by k further steps.
    #[arg(short, long)]
    k: Option<usize>,
    /// Also count walks ending at this vertex key, e.g. `0,1,0`.
    #[arg(long)]
    two_point: Option<String>,
    /// Also count bridges along `--axis`.
    #[arg(long)]
    bridges: bool,
    #[arg(long, default_value_t = 0)]
    axis: usize,
    /// Also compute exact mean-square displacement.
    #[arg(long)]
    msd: bool,
    /// Maximize counts over all orbit representatives.
    #[arg(long)]
    all_classes: bool,
    #[arg(short, long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(short, long)]
    graph: String,
    /// Longest walk length for the upper bound.
    #[arg(short, long)]
    n: usize,
    /// Bridge length (defaults to n).
    #[arg(long)]
    bridge_n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    axis: usize,
    /// Use the closed-form mu of a built-in when known.
    #[arg(long)]
    use_known: bool,
    /// Map the interval through the Fisher relation (cubic graphs).
    #[arg(long)]
    fisher: bool,
    /// json: full report; csv: ratio table.
    #[arg(short, long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand, Debug)]
enum TransformCmd {
    /// Replace every vertex of a cubic graph by a triangle.
    Fisher(TransformArgs),
    /// Replace the black vertices of a 2-coloured graph by triangles.
    Semifisher(TransformArgs),
    /// Directed quotient by the translations mod * e_axis.
    Quotient(QuotientArgs),
    /// Add offset edges, e.g. `--edge "0 0 1,1"`.
    Augment(AugmentArgs),
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[arg(short, long)]
    graph: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct QuotientArgs {
    #[arg(short, long)]
    graph: String,
    #[arg(long)]
    axis: usize,
    #[arg(long = "mod")]
    modulus: i64,
    /// Search bound for the shortest orbit-closing walk.
    #[arg(long, default_value_t = 64)]
    max_len: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct AugmentArgs {
    #[arg(short, long)]
    graph: String,
    /// Edge as `<u> <v> <offset> [x<mult>] [directed]`; repeatable.
    #[arg(long = "edge", required = true)]
    edges: Vec<String>,
    /// Allow parallel copies of existing edges.
    #[arg(long)]
    parallel: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long, default_value_t = 16)]
    n_a: usize,
    #[arg(long, default_value_t = 16)]
    n_b: usize,
    /// Bridge length on B (defaults to n-b).
    #[arg(long)]
    bridge_n_b: Option<usize>,
    #[arg(long, default_value_t = 0)]
    axis: usize,
    /// Ignore closed-form values of built-ins.
    #[arg(long)]
    no_known: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(short, long)]
    graph: String,
    /// Radius of the balls compared by the transitivity check.
    #[arg(long, default_value_t = 3)]
    radius: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Relation {
    Fisher,
    Semifisher,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(value_enum)]
    relation: Relation,
    /// Input mu: a number, `hexagonal` or `phi`.
    #[arg(long)]
    mu: String,
    /// Fisher only: iterate this many times and check the envelope.
    #[arg(long)]
    iterate: Option<usize>,
}

impl Cli {
    fn options(&self) -> EnumOptions {
        let mut o = EnumOptions {
            max_ball_vertices: self.max_ball.max(1),
            split_depth: self.split_depth,
            deadline: self.max_seconds.map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
            ..EnumOptions::default()
        };
        if let Some(w) = self.workers {
            o.workers = w.max(1);
        }
        o
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
