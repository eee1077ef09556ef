use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clique_match::assignment::{match_error, match_frames, shared_id_truth};
use clique_match::experiment::{
    run_protocol, run_theory_suite, synthetic_sequence, ExperimentConfig, Protocol, ReportRow, ReportTable,
    TransformSpec,
};
use clique_match::geometry::{apply_about_centroid, load_landmarks, LandmarkFormat};
use clique_match::rng::derive_seed;
use clique_match::theory::{all_ok, validator_csv, VALIDATORS};
use clique_match::Error;

mod checks;

#[derive(Parser, Debug)]
#[command(name = "clique-match", version, about = "Landmark matching over random clique complexes")]
struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Landmark CSV (`frame,point,x,y`). Enables the dataset assertions.
    #[arg(long, global = true)]
    with_dataset: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Match two frames and print the per-dimension clique matching.
    Match(MatchArgs),
    /// Run one experiment protocol and print its report table.
    Experiment(ExperimentArgs),
    /// Run theory validators and print their rows.
    Validate(ValidateArgs),
    /// The k-NN graph parameter sweep.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct Overrides {
    /// Extra `key=value` settings applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args, Debug)]
struct MatchArgs {
    /// Frame indices to match.
    #[arg(long, num_args = 2, value_names = ["A", "B"], default_values_t = [0usize, 1])]
    frames: Vec<usize>,
    /// Transform applied to the second frame about its centroid, e.g. `rotation:20`.
    #[arg(long)]
    transform: Option<TransformSpec>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    protocol: Option<Protocol>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Validator names, or `all`.
    #[arg(default_value = "all")]
    validators: Vec<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated edge probabilities.
    #[arg(long)]
    p: Option<String>,
    /// Comma-separated k-NN sizes.
    #[arg(long)]
    k: Option<String>,
    #[command(flatten)]
    overrides: Overrides,
}

enum Failure {
    Usage(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } => Failure::Assertion(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Match(args) => run_match(cli, args),
        Command::Experiment(args) => {
            let mut cfg = load_config(cli, &args.overrides)?;
            if let Some(p) = args.protocol {
                cfg.protocol = p;
            }
            run_experiment(cli, &cfg)
        }
        Command::Validate(args) => {
            let seed = load_config(cli, &Overrides { set: vec![] })?.seed;
            for v in &args.validators {
                if v != "all" && !VALIDATORS.contains(&v.as_str()) {
                    return Err(Failure::Usage(format!(
                        "unknown validator '{v}' (known: {})",
                        VALIDATORS.join(", ")
                    )));
                }
            }
            let names: Vec<&str> = args.validators.iter().map(String::as_str).collect();
            let rows = run_theory_suite(&names, seed)?;
            emit(cli, &validator_csv(&rows))?;
            if !all_ok(&rows) {
                let failed: Vec<String> = rows
                    .iter()
                    .filter(|r| r.ok == Some(false))
                    .map(|r| format!("{}/{}/{}", r.validator, r.param_set, r.statistic))
                    .collect();
                return Err(Failure::Assertion(format!("validator rows out of bound: {}", failed.join(", "))));
            }
            Ok(())
        }
        Command::Sweep(args) => {
            let mut cfg = load_config(cli, &args.overrides)?;
            cfg.protocol = Protocol::KnnSweep;
            if let Some(p) = &args.p {
                cfg.set("p_grid", p)?;
            }
            if let Some(k) = &args.k {
                cfg.set("k_grid", k)?;
            }
            run_experiment(cli, &cfg)
        }
    }
}

fn load_config(cli: &Cli, overrides: &Overrides) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    for kv in &overrides.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(path) = &cli.with_dataset {
        cfg.dataset = Some(path.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => write_file(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("stdout: {e}"))),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run_experiment(cli: &Cli, cfg: &ExperimentConfig) -> Result<(), Failure> {
    let table = run_protocol(cfg)?;
    emit(cli, &table.to_csv())?;
    if let Some(max) = cfg.max_error {
        check_max_error(&table.rows, max)?;
    }
    if cli.with_dataset.is_some() {
        dataset_assertions(cfg, &table)?;
    }
    Ok(())
}

fn check_max_error(rows: &[ReportRow], max: f64) -> Result<(), Failure> {
    for r in rows {
        if let Some(e) = r.mean_error {
            if e > max {
                return Err(Failure::Assertion(format!("cell {} mean error {e:.4}% > {max}%", r.cell)));
            }
        }
    }
    Ok(())
}

fn dataset_assertions(cfg: &ExperimentConfig, table: &ReportTable) -> Result<(), Failure> {
    match cfg.protocol {
        Protocol::Transform => {
            let row = table
                .rows
                .iter()
                .find(|r| r.cell == checks::REFERENCE_TRANSFORM_CELL)
                .ok_or_else(|| {
                    Failure::Usage(format!(
                        "dataset check needs the cell {} in the transform grid",
                        checks::REFERENCE_TRANSFORM_CELL
                    ))
                })?;
            checks::transform_ok(row).map_err(Failure::Assertion)?;
            eprintln!("dataset transform check passed ({})", row.cell);
        }
        Protocol::Occlusion => {
            checks::occlusion_monotone(&table.rows, cfg.repetitions).map_err(Failure::Assertion)?;
            eprintln!("dataset occlusion check passed");
        }
        _ => {}
    }
    Ok(())
}

fn run_match(cli: &Cli, args: &MatchArgs) -> Result<(), Failure> {
    let cfg = load_config(cli, &args.overrides)?;
    let seq = match &cfg.dataset {
        Some(path) => load_landmarks(path, LandmarkFormat::Csv)?,
        None => synthetic_sequence(&cfg.synthetic, cfg.seed)?,
    };
    let (ia, ib) = (args.frames[0], args.frames[1]);
    let n = seq.frame_count();
    if ia >= n || ib >= n {
        return Err(Failure::Usage(format!("frame index out of range (sequence has {n} frames)")));
    }
    let a = &seq.frames[ia];
    let mut b = seq.frames[ib].clone();
    if let Some(t) = &args.transform {
        b = apply_about_centroid(&b, &t.build()?);
    }
    let mut matcher = cfg.matcher.clone();
    if cli.seed.is_some() {
        matcher.seed_a = derive_seed(cfg.seed, 0);
        matcher.seed_b = derive_seed(cfg.seed, 1);
    }
    let result = match_frames(a, &b, &matcher)?;
    emit(cli, &result.to_csv())?;
    let truth = shared_id_truth(a, &b);
    let err = match_error(&result, &truth, matcher.error_mode);
    match err {
        Some(e) => eprintln!("vertex error {e:.4}% over {} ground-truth pairs", truth.len()),
        None => eprintln!("vertex error undefined (nothing scorable)"),
    }
    if let (Some(max), Some(e)) = (cfg.max_error, err) {
        if e > max {
            return Err(Failure::Assertion(format!("vertex error {e:.4}% > {max}%")));
        }
    }
    Ok(())
}
