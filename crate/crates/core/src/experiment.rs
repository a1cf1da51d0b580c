//! Batch Monte Carlo harness.
//!
//! A configuration is a grid of cells `(k, n, density)`. Every trial gets its
//! own substream seed `substream_seed(master_seed, cell, trial)`, from which
//! both the instance and the run's randomness are derived, so the output does
//! not depend on how many workers run the trials.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{is_proper, Hypergraph};
use crate::models::{alpha_rule_edges, generate, EdgeUniverse, Model, ModelSpec};
use crate::oracle::brute_force_oracle;
use crate::recoloring::{run, AlgorithmParams, RunResult};
use crate::rng::{derive_seed, substream_seed};
use crate::threshold::{
    edges_for_density, log_first_moment, log_first_moment_distinct, phi, second_moment_ratio,
    sharp_threshold_c,
};

/// Worker-count override.
pub const WORKERS_ENV: &str = "PROPB_WORKERS";

const INSTANCE_TAG: u64 = 1;
const ALGORITHM_TAG: u64 = 2;
const REDRAW_TAG: u64 = 3;
const MAX_REDRAWS: u64 = 10_000;

/// Seed of the instance sampled for a trial seed.
pub fn instance_seed(trial_seed: u64) -> u64 {
    derive_seed(trial_seed, INSTANCE_TAG)
}

/// Seed of the recoloring run for a trial seed.
pub fn algorithm_seed(trial_seed: u64) -> u64 {
    derive_seed(trial_seed, ALGORITHM_TAG)
}

/// Vertex count as a function of `k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum NRule {
    Fixed { n: u32 },
    /// `k^2 / 2` rounded to an even number.
    HalfSquareEven,
    /// `k^3`, plus one when odd.
    Cube,
}

impl NRule {
    pub fn n_for(self, k: u32) -> Result<u32> {
        let n = match self {
            NRule::Fixed { n } => n,
            NRule::HalfSquareEven => 2 * ((k * k + 2) / 4),
            NRule::Cube => {
                let c = k.checked_pow(3).ok_or_else(|| Error::input(format!("k^3 overflows for k = {k}")))?;
                c + c % 2
            }
        };
        let n = match self {
            NRule::Fixed { .. } => n,
            _ => n.max(2 * k),
        };
        if n % 2 == 1 || n < 2 * k {
            return Err(Error::input(format!("the vertex rule gives n = {n} for k = {k}; need even n >= 2k")));
        }
        Ok(n)
    }
}

/// Edge density of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum DensityRule {
    /// `m = fraction c* n 2^(k-1)`.
    CFraction { fraction: f64 },
    /// `m = 2 alpha (n ln k / k) phi^-1 2^(k-1)`.
    Alpha { alpha: f64 },
    Edges { m: u64 },
}

impl DensityRule {
    /// Expected edge count of the cell.
    pub fn edges(self, n: u32, k: u32) -> Result<f64> {
        match self {
            DensityRule::CFraction { fraction } => {
                let c = fraction * sharp_threshold_c(u64::from(n), u64::from(k))?;
                Ok(edges_for_density(u64::from(n), u64::from(k), c))
            }
            DensityRule::Alpha { alpha } => alpha_rule_edges(n, k, alpha),
            DensityRule::Edges { m } => Ok(m as f64),
        }
    }

    /// The value written to the `alpha_or_c` column.
    pub fn label_value(self) -> f64 {
        match self {
            DensityRule::CFraction { fraction } => fraction,
            DensityRule::Alpha { alpha } => alpha,
            DensityRule::Edges { m } => m as f64,
        }
    }
}

/// Options passed through to every run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunOptions {
    pub artificial_edge_cap: Option<u64>,
    pub random_equipartition: bool,
    pub recheck_unsafe: bool,
    /// Redraw with-replacement instances until no edge repeats.
    pub require_distinct: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ks: Vec<u32>,
    pub n_rule: NRule,
    pub densities: Vec<DensityRule>,
    pub trials: u32,
    pub master_seed: u64,
    pub model: Model,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Worker threads; `None` uses the rayon default.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Fill `runtime_ms`. Off by default since timings are not reproducible.
    #[serde(default)]
    pub record_timings: bool,
    #[serde(default)]
    pub options: RunOptions,
}

impl ExperimentConfig {
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let mut cells = Vec::with_capacity(self.ks.len() * self.densities.len());
        for &k in &self.ks {
            let n = self.n_rule.n_for(k)?;
            for &density in &self.densities {
                cells.push(Cell { id: cells.len() as u64, k, n, density, model: self.model, options: self.options.clone() });
            }
        }
        Ok(cells)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// One grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub id: u64,
    pub k: u32,
    pub n: u32,
    pub density: DensityRule,
    pub model: Model,
    pub options: RunOptions,
}

impl Cell {
    pub fn model_spec(&self, seed: u64) -> Result<ModelSpec> {
        let m = self.density.edges(self.n, self.k)?;
        Ok(if self.model.is_binomial() {
            let p = (m / EdgeUniverse::all(self.n, self.k).approx()).min(1.0);
            ModelSpec::binomial(self.model, self.n, self.k, p, seed)
        } else {
            ModelSpec::uniform(self.model, self.n, self.k, m.round() as u64, seed)
        })
    }

    pub fn algorithm_params(&self, seed: u64) -> AlgorithmParams {
        let alpha = match self.density {
            DensityRule::Alpha { alpha } => alpha,
            _ => AlgorithmParams::default().alpha,
        };
        AlgorithmParams {
            alpha,
            artificial_edge_cap: self.options.artificial_edge_cap,
            seed,
            random_equipartition: self.options.random_equipartition,
            recheck_unsafe: self.options.recheck_unsafe,
        }
    }

    pub fn instance(&self, trial_seed: u64) -> Result<Hypergraph> {
        let seed = instance_seed(trial_seed);
        let h = generate(&self.model_spec(seed)?)?.hypergraph;
        if !self.options.require_distinct || !h.has_duplicate_edges() {
            return Ok(h);
        }
        for attempt in 1..=MAX_REDRAWS {
            let h = generate(&self.model_spec(derive_seed(derive_seed(seed, REDRAW_TAG), attempt))?)?.hypergraph;
            if !h.has_duplicate_edges() {
                return Ok(h);
            }
        }
        Err(Error::input(format!("no distinct instance in {MAX_REDRAWS} redraws")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub cell: u64,
    pub k: u32,
    pub n: u32,
    /// Realised edge count.
    pub m: u64,
    pub alpha_or_c: f64,
    pub model: Model,
    pub seed: u64,
    pub trial: u32,
    pub outcome: String,
    pub iterations: u64,
    pub recolorings: u64,
    pub artificial_draws: u64,
    pub mono_red: u64,
    pub mono_blue: u64,
    pub corrupted_checks: u64,
    /// Independent check of a successful output; `None` for failed runs.
    pub verified: Option<bool>,
    pub invariant_violations: u64,
    pub runtime_ms: Option<f64>,
}

/// A trial together with its instance and full run result.
pub struct TrialOutput {
    pub record: TrialRecord,
    pub hypergraph: Hypergraph,
    pub result: RunResult,
}

pub fn run_trial(cell: &Cell, master_seed: u64, trial: u32, record_timings: bool) -> Result<TrialOutput> {
    let start = Instant::now();
    let seed = substream_seed(master_seed, cell.id, u64::from(trial));
    let h = cell.instance(seed)?;
    let result = run(&h, &cell.algorithm_params(algorithm_seed(seed)))?;
    let verified = match result.outcome.coloring() {
        Some(c) => Some(c.is_equitable() && is_proper(&h, &c)?),
        None => None,
    };
    let counters = &result.report.counters;
    let record = TrialRecord {
        cell: cell.id,
        k: cell.k,
        n: cell.n,
        m: h.num_edges() as u64,
        alpha_or_c: cell.density.label_value(),
        model: cell.model,
        seed,
        trial,
        outcome: result.outcome.label().to_string(),
        iterations: result.iterations,
        recolorings: result.recolorings,
        artificial_draws: counters.artificial_draws,
        mono_red: result.mono_red,
        mono_blue: result.mono_blue,
        corrupted_checks: counters.corrupted_checks,
        verified,
        invariant_violations: counters.invariant_violations(),
        runtime_ms: record_timings.then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    Ok(TrialOutput { record, hypergraph: h, result })
}

/// Worker count: the environment override, else the configured value.
pub fn worker_count(configured: Option<usize>) -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w: &usize| w > 0)
        .or(configured)
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = worker_count(workers) {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| Error::input(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs every (cell, trial) and returns the records sorted by (cell, trial).
/// Writes the CSV to `config.output` when set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    let cells = config.cells()?;
    let jobs: Vec<(usize, u32)> =
        (0..cells.len()).flat_map(|c| (0..config.trials).map(move |t| (c, t))).collect();
    let records = in_pool(config.workers, || {
        jobs.par_iter()
            .map(|&(c, t)| run_trial(&cells[c], config.master_seed, t, config.record_timings).map(|o| o.record))
            .collect::<Result<Vec<_>>>()
    })??;
    if let Some(path) = &config.output {
        let file = std::fs::File::create(path)?;
        write_csv(&records, std::io::BufWriter::new(file))?;
    }
    Ok(records)
}

pub const CSV_COLUMNS: [&str; 16] = [
    "k",
    "n",
    "m",
    "alpha_or_c",
    "model",
    "seed",
    "trial",
    "outcome",
    "iterations",
    "recolorings",
    "artificial_draws",
    "mono_red",
    "mono_blue",
    "corrupted_checks",
    "verified",
    "runtime_ms",
];

pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.write_record([
            r.k.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.alpha_or_c.to_string(),
            r.model.name().to_string(),
            r.seed.to_string(),
            r.trial.to_string(),
            r.outcome.clone(),
            r.iterations.to_string(),
            r.recolorings.to_string(),
            r.artificial_draws.to_string(),
            r.mono_red.to_string(),
            r.mono_blue.to_string(),
            r.corrupted_checks.to_string(),
            r.verified.map_or_else(String::new, |v| v.to_string()),
            r.runtime_ms.map_or_else(String::new, |t| format!("{t:.3}")),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[TrialRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuccessRow {
    pub k: u32,
    pub n: u32,
    pub trials: u32,
    pub successes: u32,
    pub rate: f64,
    pub mean_edges: f64,
    pub mean_iterations: f64,
    pub fail_red: u32,
    pub fail_blue: u32,
    pub cap_exceeded: u32,
    /// Every success passed the verifier.
    pub all_verified: bool,
    pub corrupted_checks: u64,
    pub invariant_violations: u64,
}

/// Success statistics per `k` for the binomial model at the alpha rule with
/// `n = even(k^2 / 2)`.
pub fn scan_success_rate(ks: &[u32], alpha: f64, trials: u32, seed: u64, workers: Option<usize>) -> Result<Vec<SuccessRow>> {
    if trials == 0 {
        return Ok(Vec::new());
    }
    let config = ExperimentConfig {
        ks: ks.to_vec(),
        n_rule: NRule::HalfSquareEven,
        densities: vec![DensityRule::Alpha { alpha }],
        trials,
        master_seed: seed,
        model: Model::Binomial,
        output: None,
        workers,
        record_timings: false,
        options: RunOptions::default(),
    };
    let records = run_experiment(&config)?;
    Ok(summarize(&records))
}

/// Groups records by cell.
pub fn summarize(records: &[TrialRecord]) -> Vec<SuccessRow> {
    let mut rows: Vec<SuccessRow> = Vec::new();
    let mut current: Option<u64> = None;
    for r in records {
        if current != Some(r.cell) {
            current = Some(r.cell);
            rows.push(SuccessRow {
                k: r.k,
                n: r.n,
                trials: 0,
                successes: 0,
                rate: 0.0,
                mean_edges: 0.0,
                mean_iterations: 0.0,
                fail_red: 0,
                fail_blue: 0,
                cap_exceeded: 0,
                all_verified: true,
                corrupted_checks: 0,
                invariant_violations: 0,
            });
        }
        let row = rows.last_mut().expect("row pushed above");
        row.trials += 1;
        row.mean_edges += r.m as f64;
        row.mean_iterations += r.iterations as f64;
        match r.outcome.as_str() {
            "success" => row.successes += 1,
            "fail_red" => row.fail_red += 1,
            "fail_blue" => row.fail_blue += 1,
            _ => row.cap_exceeded += 1,
        }
        if r.outcome == "success" && r.verified != Some(true) {
            row.all_verified = false;
        }
        row.corrupted_checks += r.corrupted_checks;
        row.invariant_violations += r.invariant_violations;
    }
    for row in &mut rows {
        let t = f64::from(row.trials);
        row.rate = f64::from(row.successes) / t;
        row.mean_edges /= t;
        row.mean_iterations /= t;
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColorabilityRow {
    pub m: u64,
    pub trials: u32,
    pub colorable_rate: f64,
    pub equitable_rate: f64,
    pub mean_equitable_count: f64,
    /// Sample standard deviation of the equitable-proper count.
    pub sd_equitable_count: f64,
    /// `E[X]` for edges drawn with replacement.
    pub expected_count: f64,
    /// `E[X]` for distinct edges, when the universe is small enough.
    pub expected_count_distinct: Option<f64>,
}

/// Oracle-based colorability statistics over `m`. `model` must be one of the
/// two fixed-size models.
pub fn scan_colorability_small(
    n: u32,
    k: u32,
    ms: &[u64],
    trials: u32,
    seed: u64,
    model: Model,
) -> Result<Vec<ColorabilityRow>> {
    if model.is_binomial() {
        return Err(Error::input("colorability scans take a fixed edge count; use a uniform model"));
    }
    let mut rows = Vec::with_capacity(ms.len());
    for (cell, &m) in ms.iter().enumerate() {
        let mut colorable = 0u32;
        let mut equitable = 0u32;
        let mut counts = Vec::with_capacity(trials as usize);
        for trial in 0..trials {
            let s = substream_seed(seed, cell as u64, u64::from(trial));
            let h = generate(&ModelSpec::uniform(model, n, k, m, instance_seed(s)))?.hypergraph;
            colorable += u32::from(brute_force_oracle(&h, false)?.colorable);
            let eq = brute_force_oracle(&h, true)?;
            equitable += u32::from(eq.colorable);
            counts.push(eq.count as f64);
        }
        let t = f64::from(trials);
        let (mean, sd) = mean_sd(&counts);
        rows.push(ColorabilityRow {
            m,
            trials,
            colorable_rate: if trials == 0 { f64::NAN } else { f64::from(colorable) / t },
            equitable_rate: if trials == 0 { f64::NAN } else { f64::from(equitable) / t },
            mean_equitable_count: mean,
            sd_equitable_count: sd,
            expected_count: log_first_moment(u64::from(n), u64::from(k), m as f64)?.exp(),
            expected_count_distinct: log_first_moment_distinct(u64::from(n), u64::from(k), m).ok().map(f64::exp),
        });
    }
    Ok(rows)
}

pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub n: u64,
    pub k: u64,
    pub c: f64,
    pub phi: f64,
    pub c_star: f64,
    pub m: f64,
    pub ratio: f64,
    pub central_sum: f64,
    pub tail1_sum: f64,
    pub tail2_sum: f64,
    pub delta: f64,
    pub clamped: bool,
    pub log_ex: f64,
}

/// Second-moment decomposition at each density `c` (absolute, not a fraction
/// of `c*`).
pub fn emit_moment_table(n: u64, k: u64, cs: &[f64]) -> Result<Vec<MomentRow>> {
    let phi = phi(n, k)?;
    let c_star = sharp_threshold_c(n, k)?;
    cs.iter()
        .map(|&c| {
            let m = edges_for_density(n, k, c);
            let mc = second_moment_ratio(n, k, m)?;
            Ok(MomentRow {
                n,
                k,
                c,
                phi,
                c_star,
                m,
                ratio: mc.ratio,
                central_sum: mc.central_sum,
                tail1_sum: mc.tail1_sum,
                tail2_sum: mc.tail2_sum,
                delta: mc.delta,
                clamped: mc.clamped,
                log_ex: mc.log_ex,
            })
        })
        .collect()
}

/// Writes any serializable rows as CSV with a header.
pub fn write_rows<W: Write, T: Serialize>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn rows_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}
