//! Argument parsing and command dispatch.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permoptics::photonic::{click_probability_interfering, fock_oracle_probability, DetectionKind, DetectionModel};
use permoptics::resources::{samples, Flavor, ResourceQuery};
use permoptics::sampling::{estimate_permanent_thermal, estimate_permanent_unitary};
use permoptics::{permanent_exact, ComplexMatrix, MatrixWire, PermanentMethod};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::config::{bundled, ExperimentConfig, Mode};
use crate::error::CliError;
use crate::output::{self, Format};
use crate::record::{self, RunRecord};
use crate::reproduce;

#[derive(Debug, Parser)]
#[command(name = "permoptics", version, about = "Matrix permanents through linear optics")]
pub struct Cli {
    /// Overrides the seed of any seeded computation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Parallel sampling partitions; results do not depend on it.
    #[arg(long, global = true)]
    pub partitions: Option<usize>,
    /// Directory for report files and the default run log.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact permanent of a matrix file.
    Perm {
        file: PathBuf,
        #[arg(long, default_value = "glynn")]
        method: PermanentMethod,
    },
    /// Monte Carlo coincidence-counting run for an experiment config.
    Simulate {
        /// Config path, or the name of a bundled config.
        config: String,
    },
    /// Sample count for a target error and confidence.
    Resources(ResourceArgs),
    /// Regenerates a printed table or figure.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        /// Repetitions per grid point for `fig3`.
        #[arg(long, default_value_t = reproduce::FIG3_REPEATS)]
        repeats: usize,
        /// Haar draws per mode count for `haar`.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Random instances for the `bounds` search.
        #[arg(long, default_value_t = 10_000)]
        instances: usize,
    },
    /// Brute-force Fock-space evaluation of a config.
    Oracle {
        config: String,
        #[arg(long, value_enum, default_value_t = OracleKind::Exact)]
        kind: OracleKind,
        #[arg(long, default_value_t = 4)]
        cutoff: u32,
    },
}

#[derive(Debug, Args)]
pub struct ResourceArgs {
    /// Click probability (thermal flavors).
    #[arg(long, required_unless_present = "perm_u2", conflicts_with = "perm_u2")]
    pub p: Option<f64>,
    /// `|Perm U|^2` (unitary flavors).
    #[arg(long = "perm-u2")]
    pub perm_u2: Option<f64>,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, value_enum)]
    pub flavor: Option<FlavorArg>,
    /// Source spectrum, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub mus: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FlavorArg {
    MultiplicativeThermal,
    MultiplicativeUnitary,
    AlmostMultiplicativeThermal,
    AlmostMultiplicativeUnitary,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::MultiplicativeThermal => Flavor::MultiplicativeThermal,
            FlavorArg::MultiplicativeUnitary => Flavor::MultiplicativeUnitary,
            FlavorArg::AlmostMultiplicativeThermal => Flavor::AlmostMultiplicativeThermal,
            FlavorArg::AlmostMultiplicativeUnitary => Flavor::AlmostMultiplicativeUnitary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Table1,
    Fig3,
    Visibility,
    Haar,
    Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Exact,
    Threshold,
}

/// What a command produced: machine output for stdout, a human summary for
/// stderr, and report files for `--out`.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub summary: String,
    pub files: Vec<(String, String)>,
}

pub const DEFAULT_SEED: u64 = 20_240_229;

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let outcome = match &cli.command {
        Command::Perm { file, method } => perm(file, *method, cli.format)?,
        Command::Simulate { config } => simulate(cli, config)?,
        Command::Resources(args) => resources(args, cli.format)?,
        Command::Reproduce { target, repeats, samples, instances } => {
            reproduce_target(cli, *target, *repeats, *samples, *instances)?
        }
        Command::Oracle { config, kind, cutoff } => oracle(config, *kind, *cutoff, cli.format)?,
    };
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir)?;
        for (name, content) in &outcome.files {
            std::fs::write(dir.join(name), content)?;
        }
    }
    Ok(outcome)
}

fn load_config(source: &str) -> Result<ExperimentConfig, CliError> {
    let path = Path::new(source);
    if path.exists() {
        return ExperimentConfig::load(path);
    }
    bundled(source).ok_or_else(|| CliError::Input(format!("no config file or bundled config named {source:?}")))
}

fn perm(file: &Path, method: PermanentMethod, format: Format) -> Result<Outcome, CliError> {
    let text =
        std::fs::read_to_string(file).map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))?;
    let wire: MatrixWire = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("bad matrix: {e}")))?;
    let matrix = ComplexMatrix::try_from(wire)?;
    let start = Instant::now();
    let value = permanent_exact(&matrix, method)?;
    let elapsed = start.elapsed().as_secs_f64();
    #[derive(Serialize)]
    struct PermOut {
        dim: usize,
        method: &'static str,
        re: f64,
        im: f64,
        abs: f64,
        elapsed_s: f64,
    }
    let out = PermOut {
        dim: matrix.dim(),
        method: method.name(),
        re: value.re,
        im: value.im,
        abs: value.norm(),
        elapsed_s: elapsed,
    };
    Ok(Outcome {
        stdout: output::render(format, std::slice::from_ref(&out), &out)?,
        summary: format!("Perm = {:e}{:+e}i ({}, {:.3} s)", value.re, value.im, method.name(), elapsed),
        files: vec![],
    })
}

fn simulate(cli: &Cli, source: &str) -> Result<Outcome, CliError> {
    let config = load_config(source)?;
    let start = Instant::now();
    let v = config.validate(cli.seed, cli.partitions)?;
    let result = match v.config.mode {
        Mode::Thermal => estimate_permanent_thermal(&v.unitary, &v.bank, &v.plan)?,
        Mode::Unitary => estimate_permanent_unitary(&v.unitary, &v.plan)?,
    };
    let mut rec = RunRecord::new("simulate", v.hash.clone());
    rec.seed = Some(v.plan.seed);
    rec.partitions = Some(v.plan.partitions);
    rec.sampling = Some(result.clone());
    rec.duration_s = start.elapsed().as_secs_f64();
    let log = record::log_path(cli.out.as_deref());
    record::append(&log, &rec)?;

    let doc = json!({
        "name": v.config.name,
        "config_hash": v.hash,
        "mode": v.config.mode,
        "result": result,
        "reference": v.config.reference,
        "log": log,
    });
    let est = result.perm_estimate.unwrap_or(result.p_hat);
    let se = result.perm_stderr.unwrap_or(result.stderr);
    let exact = result.perm_exact.unwrap_or(result.p_exact);
    let mut summary =
        format!("estimate {est:.4e} +- {se:.2e} (1 sigma, N = {}, k = {}); exact {exact:.4e}", result.n, result.k);
    for w in &result.warnings {
        summary.push_str(&format!("\nwarning: {w}"));
    }
    #[derive(Serialize)]
    struct Row<'a> {
        config_hash: &'a str,
        seed: u64,
        n: u64,
        k: u64,
        p_hat: f64,
        stderr: f64,
        ci_lo: f64,
        ci_hi: f64,
        estimate: f64,
        estimate_stderr: f64,
        exact: f64,
    }
    let row = Row {
        config_hash: &rec.config_hash,
        seed: v.plan.seed,
        n: result.n,
        k: result.k,
        p_hat: result.p_hat,
        stderr: result.stderr,
        ci_lo: result.ci.0,
        ci_hi: result.ci.1,
        estimate: est,
        estimate_stderr: se,
        exact,
    };
    let stdout = output::render(cli.format, std::slice::from_ref(&row), &doc)?;
    Ok(Outcome { stdout, summary, files: vec![] })
}

fn resources(args: &ResourceArgs, format: Format) -> Result<Outcome, CliError> {
    let (p, unitary_source) = match (args.p, args.perm_u2) {
        (Some(p), None) => (p, false),
        (None, Some(p)) => (p, true),
        _ => return Err(CliError::Input("give exactly one of --p and --perm-u2".into())),
    };
    let flavor: Flavor = match args.flavor {
        Some(f) => f.into(),
        None if unitary_source => Flavor::MultiplicativeUnitary,
        None => Flavor::MultiplicativeThermal,
    };
    let unitary_flavor = matches!(flavor, Flavor::MultiplicativeUnitary | Flavor::AlmostMultiplicativeUnitary);
    if unitary_flavor != unitary_source {
        return Err(CliError::Input(format!(
            "--{} conflicts with flavor {}",
            if unitary_source { "perm-u2" } else { "p" },
            flavor.formula_id()
        )));
    }
    let query = ResourceQuery { p, epsilon: args.epsilon, delta: args.delta, flavor, mus: args.mus.clone() };
    let est = samples(&query)?;
    #[derive(Serialize)]
    struct Row<'a> {
        flavor: &'a str,
        p: f64,
        epsilon: f64,
        delta: f64,
        n_required: Option<u64>,
        n_real: f64,
        z_c: f64,
    }
    let row = Row {
        flavor: &est.formula_id,
        p,
        epsilon: args.epsilon,
        delta: args.delta,
        n_required: est.n_required,
        n_real: est.n_real,
        z_c: est.z_c,
    };
    let doc = json!({ "query": query, "estimate": est });
    let n_text = est.n_required.map_or_else(|| "infinite".to_string(), |n| n.to_string());
    Ok(Outcome {
        stdout: output::render(format, std::slice::from_ref(&row), &doc)?,
        summary: format!("N = {n_text} (z_c = {:.6}, {})", est.z_c, est.formula_id),
        files: vec![],
    })
}

fn params_hash(value: &serde_json::Value) -> String {
    hex::encode(Sha256::digest(value.to_string().as_bytes()))
}

fn reproduce_target(
    cli: &Cli,
    target: Target,
    repeats: usize,
    samples: usize,
    instances: usize,
) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let format = cli.format;
    let (stdout, summary, analytic) = match target {
        Target::Table1 => {
            let rows = reproduce::table1(cli.seed, cli.partitions)?;
            let summary = rows
                .iter()
                .map(|r| {
                    format!(
                        "row {}: exact {:.4e} (printed {:.3e}, {}), no interference {:.4e} (printed {:.3e}, {}), simulated {:.4e} +- {:.2e}",
                        r.row,
                        r.perm_exact,
                        r.perm_exact_printed,
                        ok(r.perm_exact_ok),
                        r.no_interference,
                        r.no_interference_printed,
                        ok(r.no_interference_ok),
                        r.perm_simulated,
                        r.perm_simulated_sigma
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            (output::render(format, &rows, &rows)?, summary, serde_json::to_value(&rows)?)
        }
        Target::Fig3 => {
            let report =
                reproduce::fig3(reproduce::FIG3_P, &reproduce::FIG3_GRID, &reproduce::FIG3_DELTAS, repeats, seed)?;
            let summary = report
                .slopes
                .iter()
                .map(|(d, s)| format!("delta {d}: log-log slope {s:.4}"))
                .collect::<Vec<_>>()
                .join("\n");
            (output::render(format, &report.rows, &report)?, summary, serde_json::to_value(&report)?)
        }
        Target::Visibility => {
            let rows = reproduce::visibility(&[1e-3, 0.01, 0.1, 0.3])?;
            let summary = format!("visibility {:.4} (ideal 1/3)", rows[0].visibility);
            (output::render(format, &rows, &rows)?, summary, serde_json::to_value(&rows)?)
        }
        Target::Haar => {
            let rows = reproduce::haar(&[1, 2, 3, 4, 5, 6], samples, seed)?;
            let summary = rows
                .iter()
                .map(|r| format!("M={}: exact {:.6}, MC {:.6} +- {:.1e}", r.modes, r.exact, r.mc_mean, r.mc_stderr))
                .collect::<Vec<_>>()
                .join("\n");
            (output::render(format, &rows, &rows)?, summary, serde_json::to_value(&rows)?)
        }
        Target::Bounds => {
            let rows = reproduce::bounds(20, 4, instances, seed)?;
            let violations = rows.iter().filter(|r| r.search_max.is_some_and(|m| m > r.bound)).count();
            let summary = format!("{} mode counts, {violations} search violations", rows.len());
            (output::render(format, &rows, &rows)?, summary, serde_json::to_value(&rows)?)
        }
    };
    let params = json!({ "target": target, "seed": seed, "partitions": cli.partitions, "repeats": repeats,
        "samples": samples, "instances": instances });
    let mut rec = RunRecord::new("reproduce", params_hash(&params));
    rec.seed = Some(seed);
    rec.partitions = cli.partitions;
    rec.analytic = Some(analytic);
    rec.duration_s = start.elapsed().as_secs_f64();
    record::append(&record::log_path(cli.out.as_deref()), &rec)?;
    let name = format!("{}.{}", target_name(target), format.extension());
    Ok(Outcome { files: vec![(name, stdout.clone())], stdout, summary })
}

fn target_name(t: Target) -> &'static str {
    match t {
        Target::Table1 => "table1",
        Target::Fig3 => "fig3",
        Target::Visibility => "visibility",
        Target::Haar => "haar",
        Target::Bounds => "bounds",
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISS"
    }
}

fn oracle(source: &str, kind: OracleKind, cutoff: u32, format: Format) -> Result<Outcome, CliError> {
    let v = load_config(source)?.validate(None, None)?;
    let model = DetectionModel {
        kind: match kind {
            OracleKind::Exact => DetectionKind::ExactSinglePhoton,
            OracleKind::Threshold => DetectionKind::Threshold,
        },
        fock_cutoff: cutoff,
    };
    let res = fock_oracle_probability(&v.unitary, &v.bank, model)?;
    let closed_form = click_probability_interfering(&v.unitary, &v.bank)?;
    #[derive(Serialize)]
    struct Row {
        probability: f64,
        truncation_bound: f64,
        configurations: usize,
        closed_form: f64,
    }
    let row = Row {
        probability: res.probability,
        truncation_bound: res.truncation_bound,
        configurations: res.configurations,
        closed_form,
    };
    Ok(Outcome {
        stdout: output::render(format, std::slice::from_ref(&row), &row)?,
        summary: format!(
            "oracle {:.6e} (truncation <= {:.1e}); closed form {:.6e}",
            res.probability, res.truncation_bound, closed_form
        ),
        files: vec![],
    })
}
