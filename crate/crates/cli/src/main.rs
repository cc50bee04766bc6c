//! `entrofy`: select a cohort from a CSV pool, check a schema against the
//! data, or run the planted-solution experiments.

mod config;
mod fail;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entrofy::experiments::{
    outcomes_to_csv, run_experiment1, run_experiment2, Experiment1Grid, Experiment2Config,
    ExperimentOutcome,
};
use entrofy::{
    build_matrix, encode::validate_schema, pool_distance, report, run_selection, CandidateTable,
};
use serde_json::json;

use config::{read_id_list, ConfigFile, ParamOverrides};
use fail::Failure;
use output::{ensure_dir, sha256_hex, to_json, write_atomic};

#[derive(Parser, Debug)]
#[command(name = "entrofy", version, about = "Cohort selection against attribute targets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Select a cohort and write the selection, result, report and manifest
    Select(SelectArgs),
    /// Check a schema against the data and print pool fractions vs targets
    Validate(ValidateArgs),
    /// Run a planted-solution experiment and write its failure table
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct SelectArgs {
    /// Candidate pool as CSV with a header row
    #[arg(long)]
    input: PathBuf,
    /// JSON file with `schema`, optional `id_column` and optional `params`
    #[arg(long)]
    config: PathBuf,
    /// Cohort size
    #[arg(long)]
    k: Option<usize>,
    /// Exponent of the concave transform [default: 0.5]
    #[arg(long)]
    alpha: Option<f64>,
    /// Quantile level of the randomized step; 1.0 is plain greedy [default: 1.0]
    #[arg(long)]
    quantile: Option<f64>,
    /// Independent randomized restarts [default: 15]
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; drawn from system entropy and recorded when omitted
    #[arg(long)]
    seed: Option<u64>,
    /// File of candidate ids to fix into the cohort, one per line
    #[arg(long)]
    pre_selected: Option<PathBuf>,
    /// Directory for selected.txt, result.json, report.csv and manifest.json
    #[arg(long, default_value = "entrofy-out")]
    out_dir: PathBuf,
    /// Worker threads (results do not depend on this)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    config: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ExperimentName {
    /// Failure rate over a grid of pool sizes, targets, noise and alpha
    Exp1,
    /// Failure rate against the number of restarts
    Exp2,
}

impl ExperimentName {
    fn as_str(self) -> &'static str {
        match self {
            ExperimentName::Exp1 => "exp1",
            ExperimentName::Exp2 => "exp2",
        }
    }
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    name: ExperimentName,
    #[arg(long, default_value = "entrofy-out")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Simulations per cell (exp1) or per restart count (exp2)
    #[arg(long)]
    sims: Option<usize>,
    #[arg(long)]
    quantile: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    /// exp1: planted cohort sizes
    #[arg(long, value_delimiter = ',')]
    n_out: Vec<usize>,
    /// exp1: distractor counts
    #[arg(long, value_delimiter = ',')]
    n_random: Vec<usize>,
    /// exp1: target fractions of the varied category
    #[arg(long, value_delimiter = ',')]
    target: Vec<f64>,
    /// exp1: distractor yes-probabilities of the varied category
    #[arg(long, value_delimiter = ',')]
    noise: Vec<f64>,
    /// exp1: exponents of the concave transform
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    /// exp1: restarts per simulated run
    #[arg(long)]
    trials_per_run: Option<usize>,
    /// exp2: restart counts to compare
    #[arg(long, value_delimiter = ',')]
    n_trials: Vec<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Select(args) => cmd_select(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Experiment(args) => cmd_experiment(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.code())
        }
    }
}

fn set_threads(threads: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::validation("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::io(format!("cannot start thread pool: {e}")))?;
    }
    Ok(())
}

fn load_table(path: &Path, id_column: Option<&str>) -> Result<(CandidateTable, Vec<u8>), Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
    let table = CandidateTable::from_csv(bytes.as_slice(), id_column)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    Ok((table, bytes))
}

fn cmd_select(args: SelectArgs) -> Result<(), Failure> {
    set_threads(args.threads)?;
    let config = ConfigFile::load(&args.config)?;
    let pre_selected = args.pre_selected.as_deref().map(read_id_list).transpose()?;
    let flags = ParamOverrides {
        k: args.k,
        alpha: args.alpha,
        quantile: args.quantile,
        n_trials: args.trials,
        seed: args.seed,
        pre_selected,
    };
    let (request, seed_source) = config.resolve(flags)?;
    let (table, raw) = load_table(&args.input, request.id_column.as_deref())?;

    let outcome = run_selection(&table, &request.schema, &request.params)?;
    let result = &outcome.result;

    ensure_dir(&args.out_dir)?;
    let mut selected = result.selected.join("\n");
    selected.push('\n');
    write_atomic(&args.out_dir, "selected.txt", selected.as_bytes())?;
    write_atomic(&args.out_dir, "result.json", &to_json(result))?;
    write_atomic(&args.out_dir, "report.csv", &outcome.report.to_csv())?;
    let manifest = json!({
        "command": "select",
        "versions": { "entrofy-cli": env!("CARGO_PKG_VERSION"), "entrofy": entrofy::VERSION },
        "seed": request.params.seed,
        "seed_source": seed_source,
        "input": {
            "path": args.input,
            "sha256": sha256_hex(&raw),
            "candidates": table.len(),
        },
        "config": request,
        "outputs": ["selected.txt", "result.json", "report.csv"],
    });
    write_atomic(&args.out_dir, "manifest.json", &to_json(&manifest))?;

    println!(
        "selected {} of {} candidates (trial {} of {}, seed {})",
        result.selected.len(),
        table.len(),
        result.trial_index,
        result.per_trial_scores.len(),
        request.params.seed
    );
    println!("score  f(X) = {}", result.score.value);
    println!("d(S) = {:.6}  (whole pool)", outcome.report.pool.overall);
    println!("d(X) = {:.6}  (selected)", outcome.report.selected.overall);
    println!("wrote {}", args.out_dir.display());
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<(), Failure> {
    let config = ConfigFile::load(&args.config)?;
    let (table, _) = load_table(&args.input, config.id_column.as_deref())?;

    let errors = validate_schema(&table, &config.schema);
    if !errors.is_empty() {
        return Err(Failure::Validation(errors.iter().map(ToString::to_string).collect()));
    }
    let matrix = build_matrix(&table, &config.schema)?;
    if let Some(k) = config.params.k {
        let mut params = entrofy::SelectionParams::new(k);
        params.pre_selected = config.params.pre_selected.clone().unwrap_or_default();
        params.validate_for(&matrix)?;
    }

    let pool = report(&matrix, matrix.candidate_ids())?;
    println!("{} candidates, {} columns", matrix.pool_size(), matrix.column_count());
    for spec in config.schema.iter().filter(|s| !s.component_only) {
        println!(
            "\n{}  (weight {}, targets sum {:.6}, slack {:.6})",
            spec.name,
            spec.weight,
            spec.target_sum(),
            spec.target_slack()
        );
        println!("  {:<28} {:>8} {:>8} {:>8}", "label", "target", "pool", "|diff|");
        for row in pool.rows.iter().filter(|r| r.attribute == spec.name) {
            println!(
                "  {:<28} {:>8.4} {:>8.4} {:>8.4}",
                row.label, row.target, row.pool_fraction, row.deviation
            );
        }
    }
    println!("\nd(S) = {:.6}", pool_distance(&matrix)?.overall);
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), Failure> {
    set_threads(args.threads)?;
    let name = args.name.as_str();
    let started = Instant::now();
    let (outcomes, settings) = match args.name {
        ExperimentName::Exp1 => {
            if !args.n_trials.is_empty() {
                return Err(Failure::validation("--n-trials applies to exp2 only"));
            }
            let mut grid = Experiment1Grid::default();
            replace_if_given(&mut grid.n_out, args.n_out);
            replace_if_given(&mut grid.n_random, args.n_random);
            replace_if_given(&mut grid.target_fraction, args.target);
            replace_if_given(&mut grid.noise_fraction, args.noise);
            replace_if_given(&mut grid.alpha, args.alpha);
            if let Some(s) = args.sims {
                grid.sims_per_cell = s;
            }
            if let Some(q) = args.quantile {
                grid.quantile = q;
            }
            if let Some(t) = args.trials_per_run {
                grid.trials_per_run = t;
            }
            (run_experiment1(&grid, args.seed)?, json!(grid))
        }
        ExperimentName::Exp2 => {
            let exp1_only = !args.n_out.is_empty()
                || !args.n_random.is_empty()
                || !args.target.is_empty()
                || !args.noise.is_empty()
                || !args.alpha.is_empty()
                || args.trials_per_run.is_some();
            if exp1_only {
                return Err(Failure::validation("grid flags apply to exp1 only"));
            }
            let mut config = Experiment2Config::default();
            replace_if_given(&mut config.n_trials, args.n_trials);
            if let Some(s) = args.sims {
                config.sims = s;
            }
            if let Some(q) = args.quantile {
                config.quantile = q;
            }
            (run_experiment2(&config, args.seed)?, json!(config))
        }
    };

    ensure_dir(&args.out_dir)?;
    let csv = outcomes_to_csv(&outcomes)?;
    write_atomic(&args.out_dir, &format!("{name}.csv"), &csv)?;
    let manifest = json!({
        "command": "experiment",
        "experiment": name,
        "versions": { "entrofy-cli": env!("CARGO_PKG_VERSION"), "entrofy": entrofy::VERSION },
        "seed": args.seed,
        "settings": settings,
        "rows": outcomes.len(),
        "elapsed_seconds": started.elapsed().as_secs_f64(),
    });
    write_atomic(&args.out_dir, &format!("{name}_manifest.json"), &to_json(&manifest))?;
    print_summary(args.name, &outcomes);
    println!("wrote {}", args.out_dir.join(format!("{name}.csv")).display());
    Ok(())
}

fn replace_if_given<T>(slot: &mut Vec<T>, given: Vec<T>) {
    if !given.is_empty() {
        *slot = given;
    }
}

fn print_summary(name: ExperimentName, outcomes: &[ExperimentOutcome]) {
    match name {
        ExperimentName::Exp2 => {
            println!("{:>8} {:>10} {:>8}", "n_trials", "failures", "rate");
            for o in outcomes {
                println!(
                    "{:>8} {:>6}/{:<3} {:>8.3}",
                    o.cell.n_trials, o.failures, o.sims, o.failure_rate
                );
            }
        }
        ExperimentName::Exp1 => {
            let mut alphas: Vec<f64> = outcomes.iter().map(|o| o.cell.alpha).collect();
            alphas.sort_by(f64::total_cmp);
            alphas.dedup();
            println!("{} cells", outcomes.len());
            for a in alphas {
                let (f, s) = outcomes
                    .iter()
                    .filter(|o| o.cell.alpha == a)
                    .fold((0, 0), |(f, s), o| (f + o.failures, s + o.sims));
                println!("alpha {a}: {f} failures in {s} runs");
            }
        }
    }
}
