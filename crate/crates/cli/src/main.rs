use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use propb::experiment::{
    algorithm_seed, csv_string, emit_moment_table, instance_seed, run_experiment, scan_colorability_small,
    rows_string, scan_success_rate, summarize, ExperimentConfig,
};
use propb::hypergraph::{count_monochromatic, is_proper};
use propb::io::{parse_coloring, parse_hypergraph, write_coloring, write_json, write_text};
use propb::models::{alpha_rule_edges, generate, EdgeUniverse, Model, ModelSpec};
use propb::oracle::brute_force_oracle_with_limit;
use propb::plot::{render_svg, PlotSpec};
use propb::recoloring::{run, AlgorithmParams};
use propb::threshold::{sharp_threshold_c, ThresholdQuantities};
use propb::Hypergraph;

/// Exit status of `color` and `verify` when no proper coloring results.
const EXIT_NOT_COLORED: u8 = 2;

#[derive(Parser)]
#[command(name = "propb", version, about = "Two-coloring random k-uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random hypergraph.
    Generate(GenerateArgs),
    /// Run the recoloring procedure on a file or a freshly sampled instance.
    Color(ColorArgs),
    /// Check a coloring against a hypergraph.
    Verify(VerifyArgs),
    /// Exhaustive colorability search for small instances.
    Oracle(OracleArgs),
    /// Second-moment decomposition table as CSV.
    Moments(MomentsArgs),
    /// Threshold quantities for (n, k) as JSON.
    Threshold(ThresholdArgs),
    /// Batch experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Render an SVG line chart from CSV.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    UniformDistinct,
    UniformWithReplacement,
    Binomial,
    BinomialStructured,
}

impl From<ModelKind> for Model {
    fn from(m: ModelKind) -> Model {
        match m {
            ModelKind::UniformDistinct => Model::UniformDistinct,
            ModelKind::UniformWithReplacement => Model::UniformWithReplacement,
            ModelKind::Binomial => Model::Binomial,
            ModelKind::BinomialStructured => Model::BinomialStructured,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "binomial")]
    model: ModelKind,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Edge count (uniform models).
    #[arg(long, conflicts_with = "p")]
    m: Option<u64>,
    /// Edge probability (binomial models).
    #[arg(long)]
    p: Option<f64>,
}

impl ModelArgs {
    /// Without `--m`/`--p` the density follows the alpha rule.
    fn spec(&self, alpha: f64, seed: u64) -> Result<ModelSpec> {
        let (Some(n), Some(k)) = (self.n, self.k) else {
            bail!("--n and --k are required to sample an instance");
        };
        let model = Model::from(self.model);
        let spec = if model.is_binomial() {
            if self.m.is_some() {
                bail!("binomial models take --p, not --m");
            }
            let p = match self.p {
                Some(p) => p,
                None => alpha_rule_edges(n, k, alpha)? / EdgeUniverse::all(n, k).approx(),
            };
            ModelSpec::binomial(model, n, k, p, seed)
        } else {
            if self.p.is_some() {
                bail!("uniform models take --m, not --p");
            }
            let m = match self.m {
                Some(m) => m,
                None => alpha_rule_edges(n, k, alpha)?.round() as u64,
            };
            ModelSpec::uniform(model, n, k, m, seed)
        };
        spec.validate()?;
        Ok(spec)
    }

    fn sample(&self, alpha: f64, seed: u64) -> Result<Hypergraph> {
        Ok(generate(&self.spec(alpha, instance_seed(seed))?)?.hypergraph)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Density parameter used when neither --m nor --p is given.
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ColorArgs {
    /// Hypergraph file (text or JSON). Without it an instance is sampled.
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Artificial edge budget; defaults to ceil(10 n ln n).
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    random_equipartition: bool,
    /// Re-test vertices that failed an earlier safety check.
    #[arg(long)]
    recheck: bool,
    /// Write the run result and diagnostics as JSON (`-` for stdout).
    #[arg(long)]
    emit_diagnostics: Option<PathBuf>,
    /// Where to write the coloring on success (default stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    coloring: PathBuf,
    /// Also require equal class sizes.
    #[arg(long)]
    equitable: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, short)]
    input: PathBuf,
    /// Count only equitable colorings.
    #[arg(long)]
    equitable: bool,
    #[arg(long, default_value_t = propb::oracle::DEFAULT_ORACLE_LIMIT)]
    limit: u32,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// Densities c.
    #[arg(long, value_delimiter = ',', num_args = 1.., required_unless_present = "c_fraction")]
    c: Vec<f64>,
    /// Densities as fractions of c* = ln 2 / phi.
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "c")]
    c_fraction: Vec<f64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Run a JSON experiment configuration and write per-trial CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured output path.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Success rate per k at the alpha rule with n = even(k^2/2).
    ScanSuccess {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        ks: Vec<u32>,
        #[arg(long, default_value_t = 0.3)]
        alpha: f64,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Oracle colorability rates over a range of edge counts.
    ScanColorability {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        ms: Vec<u64>,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "uniform-distinct")]
        model: ModelKind,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long)]
    series: Option<String>,
    #[arg(long)]
    title: Option<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, content).with_context(|| format!("cannot write {}", p.display()))
        }
        _ => match io::stdout().lock().write_all(content.as_bytes()) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            other => Ok(other?),
        },
    }
}

fn generate_cmd(args: GenerateArgs) -> Result<ExitCode> {
    let h = args.model.sample(args.alpha, args.seed)?;
    let text = match args.format {
        Format::Text => write_text(&h),
        Format::Json => write_json(&h),
    };
    emit(args.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn color_cmd(args: ColorArgs) -> Result<ExitCode> {
    let h = match &args.input {
        Some(path) => parse_hypergraph(&read(path)?)?,
        None => args.model.sample(args.alpha, args.seed)?,
    };
    let params = AlgorithmParams {
        alpha: args.alpha,
        artificial_edge_cap: args.cap,
        seed: algorithm_seed(args.seed),
        random_equipartition: args.random_equipartition,
        recheck_unsafe: args.recheck,
    };
    let result = run(&h, &params)?;
    if let Some(path) = &args.emit_diagnostics {
        emit(Some(path), &(serde_json::to_string_pretty(&result)? + "\n"))?;
    }
    eprintln!(
        "{}: n = {}, k = {}, m = {}, {} iterations, {} artificial edges",
        result.outcome.label(),
        h.n(),
        h.k(),
        h.num_edges(),
        result.iterations,
        result.report.counters.artificial_draws
    );
    match result.outcome.coloring() {
        Some(c) => {
            if !is_proper(&h, &c)? {
                bail!("internal error: the returned coloring is not proper");
            }
            if args.emit_diagnostics.as_deref() != Some(Path::new("-")) || args.output.is_some() {
                emit(args.output.as_deref(), &write_coloring(&c))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        None => Ok(ExitCode::from(EXIT_NOT_COLORED)),
    }
}

fn verify_cmd(args: VerifyArgs) -> Result<ExitCode> {
    let h = parse_hypergraph(&read(&args.input)?)?;
    let c = parse_coloring(&read(&args.coloring)?)?;
    let (red, blue) = count_monochromatic(&h, &c)?;
    let proper = red + blue == 0;
    let equitable = c.is_equitable();
    let report = serde_json::json!({
        "proper": proper,
        "equitable": equitable,
        "mono_red": red,
        "mono_blue": blue,
    });
    emit(None, &format!("{report}\n"))?;
    let ok = proper && (equitable || !args.equitable);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NOT_COLORED) })
}

fn oracle_cmd(args: OracleArgs) -> Result<ExitCode> {
    let h = parse_hypergraph(&read(&args.input)?)?;
    let result = brute_force_oracle_with_limit(&h, args.equitable, args.limit)?;
    emit(None, &(serde_json::to_string(&result)? + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn moments_cmd(args: MomentsArgs) -> Result<ExitCode> {
    let cs = if args.c_fraction.is_empty() {
        args.c
    } else {
        let c_star = sharp_threshold_c(args.n, args.k)?;
        args.c_fraction.iter().map(|f| f * c_star).collect()
    };
    let rows = emit_moment_table(args.n, args.k, &cs)?;
    emit(args.output.as_deref(), &rows_string(&rows)?)?;
    Ok(ExitCode::SUCCESS)
}

fn threshold_cmd(args: ThresholdArgs) -> Result<ExitCode> {
    let q = ThresholdQuantities::compute(args.n, args.k, args.epsilon)?;
    emit(None, &(serde_json::to_string_pretty(&q)? + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn experiment_cmd(cmd: ExperimentCommand) -> Result<ExitCode> {
    match cmd {
        ExperimentCommand::Run { config, output, workers } => {
            let mut config = ExperimentConfig::from_json(&read(&config)?)?;
            if output.is_some() {
                config.output = output;
            }
            if workers.is_some() {
                config.workers = workers;
            }
            let to_stdout = config.output.is_none();
            let records = run_experiment(&config)?;
            if to_stdout {
                emit(None, &csv_string(&records)?)?;
            }
            for row in summarize(&records) {
                eprintln!(
                    "k = {}, n = {}: {}/{} successes, all verified: {}",
                    row.k, row.n, row.successes, row.trials, row.all_verified
                );
            }
        }
        ExperimentCommand::ScanSuccess { ks, alpha, trials, seed, workers, output } => {
            let rows = scan_success_rate(&ks, alpha, trials, seed, workers)?;
            emit(output.as_deref(), &rows_string(&rows)?)?;
        }
        ExperimentCommand::ScanColorability { n, k, ms, trials, seed, model, output } => {
            let rows = scan_colorability_small(n, k, &ms, trials, seed, model.into())?;
            emit(output.as_deref(), &rows_string(&rows)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn plot_cmd(args: PlotArgs) -> Result<ExitCode> {
    let spec = PlotSpec { x: args.x, y: args.y, series: args.series, title: args.title };
    let svg = render_svg(&read(&args.input)?, &spec)?;
    emit(args.output.as_deref(), &svg)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate_cmd(a),
        Command::Color(a) => color_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Oracle(a) => oracle_cmd(a),
        Command::Moments(a) => moments_cmd(a),
        Command::Threshold(a) => threshold_cmd(a),
        Command::Experiment(c) => experiment_cmd(c),
        Command::Plot(a) => plot_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
