use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use minimax_cli::render::{render_outcome, render_reproduction};
use minimax_cli::{
    bound_specs, compute, parse_loss, parse_manifest, run_manifest, CliError, CliResult, Format, DEFAULT_MANIFEST,
};
use minimax_core::models::{descriptors, Params, DEFAULT_SEED};
use minimax_core::oracle::default_suite;

#[derive(Parser)]
#[command(name = "minimax-bounds", version, about = "Local asymptotic minimax lower bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one bound on one model.
    Compute(ComputeArgs),
    /// Run the oracle checks and the reproduction manifest.
    Reproduce(ReproduceArgs),
    /// List model and bound ids with their parameters.
    List,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    bound: String,
    /// mse, abs, power (with --t), power:<t> or threshold:<delta>.
    #[arg(long, default_value = "mse")]
    loss: String,
    /// Exponent of the power loss.
    #[arg(long)]
    t: Option<f64>,
    /// Working point of the model.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    theta0: Option<f64>,
    #[arg(long)]
    theta1: Option<f64>,
    /// Any other parameter, as key=value; may be repeated.
    #[arg(short = 'p', long = "param", value_parser = key_value)]
    params: Vec<(String, f64)>,
    #[arg(long, default_value = "table")]
    format: Format,
    /// Seed for simulated entries.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Manifest file; the built-in manifest when absent.
    #[arg(long)]
    manifest: Option<String>,
    /// Run only entries whose label starts with this group, e.g. `example2`.
    #[arg(long)]
    only: Option<String>,
    #[arg(long, default_value = "table")]
    format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn key_value(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("`{s}` is not key=value"))?;
    let v: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.to_string(), v))
}

fn run_compute(args: ComputeArgs) -> CliResult<u8> {
    let loss = parse_loss(&args.loss, args.t)?;
    let mut params = Params::new();
    let named = [
        ("theta", args.theta),
        ("sigma", args.sigma),
        ("n", args.n),
        ("q", args.q),
        ("theta0", args.theta0),
        ("theta1", args.theta1),
    ];
    for (k, v) in named {
        if let Some(v) = v {
            params.insert(k, v);
        }
    }
    for (k, v) in args.params {
        params.insert(&k, v);
    }
    let out = compute(&args.model, &args.bound, &loss, &params, args.seed)?;
    print!("{}", render_outcome(&out, args.format)?);
    Ok(0)
}

fn run_reproduce(args: ReproduceArgs) -> CliResult<u8> {
    let text = match &args.manifest {
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.clone(), source })?,
        None => DEFAULT_MANIFEST.to_string(),
    };
    let mut entries = parse_manifest(&text)?;
    if let Some(group) = &args.only {
        entries.retain(|e| e.group() == group);
        if entries.is_empty() {
            return Err(CliError::Usage(format!("no manifest entries in group `{group}`")));
        }
    }
    let checks = default_suite()?;
    if checks.iter().any(|c| !c.pass) {
        print!("{}", render_reproduction(&checks, &[], args.format)?);
        eprintln!("oracle checks failed; reproduction aborted");
        return Ok(1);
    }
    let jobs = args.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let rows = run_manifest(&entries, jobs, args.seed);
    print!("{}", render_reproduction(&checks, &rows, args.format)?);
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.label.as_str()).collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("failed entries: {}", failed.join(", "));
        Ok(1)
    }
}

fn list() {
    println!("models:");
    for d in descriptors() {
        let params = if d.params.is_empty() { String::new() } else { format!(" [{}]", d.params.join(", ")) };
        println!("  {:<18} {}{params}", d.id, d.notes);
    }
    println!("bounds:");
    for b in bound_specs() {
        println!("  {:<18} {} [{}]", b.id, b.summary, b.params.join(", "));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(args) => run_compute(args),
        Command::Reproduce(args) => run_reproduce(args),
        Command::List => {
            list();
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(&e, CliError::Core(minimax_core::Error::UnknownId { .. })) {
                eprintln!("run `minimax-bounds list` for the available ids");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
