//! Greedy recoloring of safe vertices.
//!
//! Start from an equipartition `(R0, B0)`. The edges inside `R0` (initially
//! red) and inside `B0` (initially blue) are visited in random order. Each
//! round picks one red and one blue vertex that are *safe* (recoloring them
//! creates no new monochromatic edge) and swaps their colors, so the coloring
//! stays equitable. The red picker walks the current red edge in random
//! order:
//!
//! - an unchecked vertex is appended to the checked list `C_R` and tested; if
//!   safe it is returned, otherwise it is remembered as permanently unsafe;
//! - a vertex already recolored means the edge is repaired, so the picker
//!   moves on to the next edge;
//! - a permanently unsafe vertex is skipped.
//!
//! If an edge runs out, the run fails when the edge is a real one or when
//! every vertex of `R0` has been checked; otherwise the edge was artificial
//! (a uniform k-subset of `R0` appended once the real edges are used up) and
//! the picker draws another one. The blue picker is symmetric.
//!
//! The swap is the two-element exchange `R <- R - {v_R} + {v_B}`,
//! `B <- B - {v_B} + {v_R}`.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Color, Coloring, Hypergraph, Vertex};
use crate::models::{alpha_rule_edges, random_k_subset, EdgeUniverse};
use crate::rng::{rng_from_seed, TrialRng};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgorithmParams {
    /// Density parameter; the analysed regime is `alpha < 1/2`. Only feeds the
    /// expected-value diagnostics, the procedure itself does not read it.
    pub alpha: f64,
    /// Maximum number of artificial edges per run; `None` means
    /// `ceil(10 n ln n)`.
    pub artificial_edge_cap: Option<u64>,
    pub seed: u64,
    /// Start from a uniformly random equipartition instead of `0..n/2` red.
    pub random_equipartition: bool,
    /// Re-test permanently unsafe vertices when they are met again.
    /// Experimental; off by default.
    pub recheck_unsafe: bool,
}

impl Default for AlgorithmParams {
    fn default() -> Self {
        AlgorithmParams {
            alpha: 0.3,
            artificial_edge_cap: None,
            seed: 0,
            random_equipartition: false,
            recheck_unsafe: false,
        }
    }
}

impl AlgorithmParams {
    /// `q = 2 alpha n ln(k) / k`, the expected number of initially
    /// monochromatic edges.
    pub fn q(&self, n: u32, k: u32) -> f64 {
        let kf = f64::from(k);
        2.0 * self.alpha * f64::from(n) * kf.ln() / kf
    }

    /// Edge probability with `p C(n,k) = q 2^(k-1) / phi`.
    pub fn p(&self, n: u32, k: u32) -> Result<f64> {
        let m = self.expected_edges(n, k)?;
        Ok(m / EdgeUniverse::all(n, k).approx())
    }

    pub fn expected_edges(&self, n: u32, k: u32) -> Result<f64> {
        alpha_rule_edges(n, k, self.alpha)
    }

    pub fn cap_for(&self, n: u32) -> u64 {
        self.artificial_edge_cap.unwrap_or_else(|| {
            let nf = f64::from(n);
            (10.0 * nf * nf.ln()).ceil() as u64
        })
    }

    /// Predicted safety-check pass rate `k^(-2 alpha)`.
    pub fn delta_safe(&self, k: u32) -> f64 {
        f64::from(k).powf(-2.0 * self.alpha)
    }

    /// Predicted lower bound `k^(-2 alpha')` on the recolored fraction of every
    /// long prefix of a checked list, `alpha' = (1/2 + alpha) / 2`.
    pub fn prefix_density_target(&self, k: u32) -> f64 {
        let alpha_prime = (0.5 + self.alpha) / 2.0;
        f64::from(k).powf(-2.0 * alpha_prime)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    UnsafePermanent,
    Recolored,
}

/// Per-color picker state: the `R0`/`r`/`N_R`/`C_R` quadruple or its blue
/// mirror.
#[derive(Clone, Debug)]
pub struct SideState {
    color: Color,
    pool: Vec<Vertex>,
    seq: Vec<u32>,
    cursor: u64,
    checked: Vec<(Vertex, Verdict)>,
    verdict: Vec<Option<Verdict>>,
    checks: u64,
    passes: u64,
}

impl SideState {
    fn new(color: Color, pool: Vec<Vertex>, seq: Vec<u32>, n: u32) -> Self {
        SideState {
            color,
            pool,
            seq,
            cursor: 0,
            checked: Vec::new(),
            verdict: vec![None; n as usize],
            checks: 0,
            passes: 0,
        }
    }

    pub fn color(&self) -> Color {
        self.color
    }

    /// Vertices initially of this color.
    pub fn pool(&self) -> &[Vertex] {
        &self.pool
    }

    /// Initially monochromatic edges of this color, in visiting order.
    pub fn edge_sequence(&self) -> &[u32] {
        &self.seq
    }

    /// Number of initially monochromatic edges (`N_R` or `N_B`).
    pub fn initial_count(&self) -> u64 {
        self.seq.len() as u64
    }

    /// 1-based index of the current or most recent edge, real or artificial.
    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    /// The checked list in check order.
    pub fn checked(&self) -> &[(Vertex, Verdict)] {
        &self.checked
    }

    pub fn verdict(&self, v: Vertex) -> Option<Verdict> {
        self.verdict[v as usize]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Counters {
    pub iterations: u64,
    pub recolorings: u64,
    pub safety_checks_red: u64,
    pub safety_checks_blue: u64,
    pub safety_passes_red: u64,
    pub safety_passes_blue: u64,
    pub artificial_draws: u64,
    /// Edges recorded as the reason for a failed check.
    pub witnessing_edges: u64,
    /// Checks failed by an edge that had already failed a check of the other
    /// color: the edge's tail was recolored almost entirely in between.
    pub corrupted_checks: u64,
    /// Monochromatic (red, blue) counts before the first round and after each.
    pub mono_trace: Vec<(u64, u64)>,
    pub equitability_violations: u64,
    pub monotonicity_violations: u64,
    pub progress_violations: u64,
    /// A vertex was checked twice outside recheck mode, or an edge failed two
    /// checks of the same color on different vertices.
    pub disjointness_violations: u64,
    /// A permanently unsafe vertex was returned (default mode only).
    pub reuse_violations: u64,
}

impl Counters {
    pub fn invariant_violations(&self) -> u64 {
        self.equitability_violations
            + self.monotonicity_violations
            + self.progress_violations
            + self.disjointness_violations
            + self.reuse_violations
    }
}

const NO_HEAD: u32 = u32::MAX;

pub struct AlgorithmState {
    n: u32,
    k: u32,
    params: AlgorithmParams,
    coloring: Coloring,
    initial: Coloring,
    red: SideState,
    blue: SideState,
    red_in_edge: Vec<u32>,
    mono: (u64, u64),
    /// Per edge, the head of the failed red check and failed blue check it
    /// witnessed, if any.
    witness: Vec<[u32; 2]>,
    rng: TrialRng,
    cap: u64,
    counters: Counters,
}

impl AlgorithmState {
    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn initial_coloring(&self) -> &Coloring {
        &self.initial
    }

    pub fn side(&self, c: Color) -> &SideState {
        match c {
            Color::Red => &self.red,
            Color::Blue => &self.blue,
        }
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn params(&self) -> &AlgorithmParams {
        &self.params
    }

    /// Current (red, blue) monochromatic edge counts.
    pub fn monochromatic(&self) -> (u64, u64) {
        self.mono
    }

    fn side_mut(&mut self, c: Color) -> &mut SideState {
        match c {
            Color::Red => &mut self.red,
            Color::Blue => &mut self.blue,
        }
    }

    /// Safety test against the current coloring via the per-edge red counts.
    /// Failing edges are logged as witnesses.
    fn check_safe(&mut self, h: &Hypergraph, v: Vertex) -> bool {
        let color = self.coloring.color(v);
        // Red count of an edge whose unique off-color vertex is `v`.
        let head_count = match color {
            Color::Red => 1,
            Color::Blue => self.k - 1,
        };
        let slot = color as usize;
        if !self.params.recheck_unsafe && self.side(color).verdict(v).is_some() {
            self.counters.disjointness_violations += 1;
        }
        let mut safe = true;
        let mut corrupted = false;
        for &e in h.incident(v) {
            let e = e as usize;
            if self.red_in_edge[e] != head_count {
                continue;
            }
            safe = false;
            self.counters.witnessing_edges += 1;
            let seen = self.witness[e];
            if seen[slot] != NO_HEAD && seen[slot] != v {
                self.counters.disjointness_violations += 1;
            }
            if seen[1 - slot] != NO_HEAD {
                corrupted = true;
            }
            self.witness[e][slot] = v;
        }
        if corrupted {
            self.counters.corrupted_checks += 1;
        }
        let side = self.side_mut(color);
        side.checks += 1;
        if safe {
            side.passes += 1;
        }
        match color {
            Color::Red => {
                self.counters.safety_checks_red += 1;
                self.counters.safety_passes_red += u64::from(safe);
            }
            Color::Blue => {
                self.counters.safety_checks_blue += 1;
                self.counters.safety_passes_blue += u64::from(safe);
            }
        }
        safe
    }

    fn recolor(&mut self, h: &Hypergraph, v: Vertex, to: Color) {
        let from = self.coloring.color(v);
        if from == to {
            return;
        }
        let k = self.k;
        for &e in h.incident(v) {
            let count = &mut self.red_in_edge[e as usize];
            let old = *count;
            *count = if to == Color::Red { old + 1 } else { old - 1 };
            let new = *count;
            if old == k {
                self.mono.0 -= 1;
            }
            if old == 0 {
                self.mono.1 -= 1;
            }
            if new == k {
                self.mono.0 += 1;
            }
            if new == 0 {
                self.mono.1 += 1;
            }
        }
        self.coloring.set(v, to);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PickFailure {
    /// The picker exhausted an edge. `edge` is the 1-based cursor; `artificial`
    /// is set when the edge was not part of the input.
    Fail { side: Color, edge: u64, artificial: bool },
    CapExceeded,
}

/// Sets up `(R0, B0)`, classifies the edges and shuffles the visiting order.
pub fn initialize(h: &Hypergraph, params: &AlgorithmParams) -> Result<AlgorithmState> {
    let (n, k) = (h.n(), h.k());
    if n % 2 == 1 {
        return Err(Error::input(format!("the procedure needs an even vertex count, got {n}")));
    }
    if k < 3 {
        return Err(Error::input("the procedure needs k >= 3; 2-edges have no well-defined head"));
    }
    if n < 2 * k {
        return Err(Error::input(format!("need n >= 2k, got n = {n}, k = {k}")));
    }
    let mut rng = rng_from_seed(params.seed);
    let initial = if params.random_equipartition {
        let mut order: Vec<Vertex> = (0..n).collect();
        order.shuffle(&mut rng);
        Coloring::from_red_set(n, order[..(n / 2) as usize].iter().copied())?
    } else {
        Coloring::halves(n)
    };

    let mut red_in_edge = Vec::with_capacity(h.num_edges());
    let mut red_seq = Vec::new();
    let mut blue_seq = Vec::new();
    for (i, e) in h.edges().enumerate() {
        let reds = e.iter().filter(|&&v| initial.color(v) == Color::Red).count() as u32;
        red_in_edge.push(reds);
        if reds == k {
            red_seq.push(i as u32);
        } else if reds == 0 {
            blue_seq.push(i as u32);
        }
    }
    red_seq.shuffle(&mut rng);
    blue_seq.shuffle(&mut rng);
    let mono = (red_seq.len() as u64, blue_seq.len() as u64);

    let counters = Counters { mono_trace: vec![mono], ..Counters::default() };
    Ok(AlgorithmState {
        n,
        k,
        cap: params.cap_for(n),
        params: params.clone(),
        red: SideState::new(Color::Red, initial.vertices_of(Color::Red), red_seq, n),
        blue: SideState::new(Color::Blue, initial.vertices_of(Color::Blue), blue_seq, n),
        coloring: initial.clone(),
        initial,
        red_in_edge,
        mono,
        witness: vec![[NO_HEAD; 2]; h.num_edges()],
        rng,
        counters,
    })
}

fn pick(state: &mut AlgorithmState, h: &Hypergraph, color: Color) -> Result<Vertex, PickFailure> {
    let (n, k) = (state.n, state.k);
    let recheck = state.params.recheck_unsafe;
    let mut verts: Vec<Vertex> = Vec::with_capacity(k as usize);
    let mut buf: Vec<Vertex> = Vec::with_capacity(k as usize);
    loop {
        let side = state.side_mut(color);
        side.cursor += 1;
        let r = side.cursor;
        let real = r <= side.initial_count();
        verts.clear();
        if real {
            verts.extend_from_slice(h.edge(side.seq[(r - 1) as usize] as usize));
        } else {
            if state.counters.artificial_draws >= state.cap {
                return Err(PickFailure::CapExceeded);
            }
            state.counters.artificial_draws += 1;
            random_k_subset(&mut state.rng, n / 2, k, &mut buf);
            let pool = &state.side(color).pool;
            verts.extend(buf.iter().map(|&i| pool[i as usize]));
        }
        verts.shuffle(&mut state.rng);

        let mut restart = false;
        for &v in &verts {
            match state.side(color).verdict(v) {
                None => {
                    let safe = state.check_safe(h, v);
                    let verdict = if safe { Verdict::Recolored } else { Verdict::UnsafePermanent };
                    let side = state.side_mut(color);
                    side.checked.push((v, verdict));
                    side.verdict[v as usize] = Some(verdict);
                    if safe {
                        return Ok(v);
                    }
                }
                Some(Verdict::Recolored) => {
                    restart = true;
                    break;
                }
                Some(Verdict::UnsafePermanent) => {
                    if recheck && state.check_safe(h, v) {
                        let side = state.side_mut(color);
                        side.verdict[v as usize] = Some(Verdict::Recolored);
                        if let Some(entry) = side.checked.iter_mut().find(|(u, _)| *u == v) {
                            entry.1 = Verdict::Recolored;
                        }
                        return Ok(v);
                    }
                }
            }
        }
        if restart {
            continue;
        }
        let side = state.side(color);
        if real || side.checked.len() == side.pool.len() {
            return Err(PickFailure::Fail { side: color, edge: r, artificial: !real });
        }
    }
}

/// Returns a safe red vertex to recolor, advancing the red cursor.
pub fn pick_red_vertex(state: &mut AlgorithmState, h: &Hypergraph) -> Result<Vertex, PickFailure> {
    pick(state, h, Color::Red)
}

/// Mirror image of [`pick_red_vertex`] on `B0`.
pub fn pick_blue_vertex(state: &mut AlgorithmState, h: &Hypergraph) -> Result<Vertex, PickFailure> {
    pick(state, h, Color::Blue)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Outcome {
    Success { coloring: Vec<Color> },
    ExplicitFail { side: Color, edge: u64, artificial: bool },
    CapExceeded,
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Success { .. } => "success",
            Outcome::ExplicitFail { side: Color::Red, .. } => "fail_red",
            Outcome::ExplicitFail { side: Color::Blue, .. } => "fail_blue",
            Outcome::CapExceeded => "cap_exceeded",
        }
    }

    pub fn coloring(&self) -> Option<Coloring> {
        match self {
            Outcome::Success { coloring } => Some(Coloring::new(coloring.clone())),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub outcome: Outcome,
    pub iterations: u64,
    pub recolorings: u64,
    pub mono_red: u64,
    pub mono_blue: u64,
    pub report: DiagnosticsReport,
}

/// Runs the main loop to completion.
pub fn run(h: &Hypergraph, params: &AlgorithmParams) -> Result<RunResult> {
    let mut state = initialize(h, params)?;
    let outcome = drive(&mut state, h);
    Ok(RunResult {
        outcome,
        iterations: state.counters.iterations,
        recolorings: state.counters.recolorings,
        mono_red: state.mono.0,
        mono_blue: state.mono.1,
        report: diagnostics_report(&state),
    })
}

/// Main loop on an initialized state; the state is left as the loop left it.
pub fn drive(state: &mut AlgorithmState, h: &Hypergraph) -> Outcome {
    let half = (state.n / 2) as usize;
    while state.red.cursor < state.red.initial_count() || state.blue.cursor < state.blue.initial_count() {
        let before = state.mono.0 + state.mono.1;
        let v_r = match pick_red_vertex(state, h) {
            Ok(v) => v,
            Err(f) => return failure(f),
        };
        let r = state.red.cursor;
        let v_b = match pick_blue_vertex(state, h) {
            Ok(v) => v,
            Err(f) => return failure(f),
        };
        let b = state.blue.cursor;

        state.recolor(h, v_r, Color::Blue);
        state.recolor(h, v_b, Color::Red);
        state.counters.iterations += 1;
        state.counters.recolorings += 2;
        state.counters.mono_trace.push(state.mono);

        if state.coloring.red_count() != half {
            state.counters.equitability_violations += 1;
        }
        if state.mono.0 + state.mono.1 > before {
            state.counters.monotonicity_violations += 1;
        }
        if r <= state.red.initial_count() && state.red_in_edge[state.red.seq[(r - 1) as usize] as usize] == state.k {
            state.counters.progress_violations += 1;
        }
        if b <= state.blue.initial_count() && state.red_in_edge[state.blue.seq[(b - 1) as usize] as usize] == 0 {
            state.counters.progress_violations += 1;
        }
        if !state.params.recheck_unsafe {
            let stale = |side: &SideState, v: Vertex| {
                side.checked.iter().filter(|(u, _)| *u == v).count() != 1
            };
            if stale(&state.red, v_r) || stale(&state.blue, v_b) {
                state.counters.reuse_violations += 1;
            }
        }
    }
    Outcome::Success { coloring: state.coloring.as_slice().to_vec() }
}

fn failure(f: PickFailure) -> Outcome {
    match f {
        PickFailure::Fail { side, edge, artificial } => Outcome::ExplicitFail { side, edge, artificial },
        PickFailure::CapExceeded => Outcome::CapExceeded,
    }
}

/// Prefix statistics of one checked list.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PrefixStats {
    pub checked: u64,
    pub recolored: u64,
    /// Smallest recolored fraction over prefixes of length `>= k/2`; `None`
    /// if the list is shorter than that.
    pub min_prefix_density: Option<f64>,
    /// Prefixes of length `>= k/2` with fewer than `l k^(-2 alpha')`
    /// recolored vertices.
    pub prefix_violations: u64,
}

fn prefix_stats(side: &SideState, k: u32, target: f64) -> PrefixStats {
    let start = ((f64::from(k) / 2.0).ceil() as usize).max(1);
    let mut recolored = 0u64;
    let mut min_density: Option<f64> = None;
    let mut violations = 0;
    for (i, (_, verdict)) in side.checked.iter().enumerate() {
        if *verdict == Verdict::Recolored {
            recolored += 1;
        }
        let l = i + 1;
        if l >= start {
            let density = recolored as f64 / l as f64;
            min_density = Some(min_density.map_or(density, |m| m.min(density)));
            if (recolored as f64) < l as f64 * target {
                violations += 1;
            }
        }
    }
    PrefixStats { checked: side.checked.len() as u64, recolored, min_prefix_density: min_density, prefix_violations: violations }
}

/// Per-run statistics set against the quantities the analysis predicts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub n: u32,
    pub k: u32,
    pub alpha: f64,
    pub n_r: u64,
    pub n_b: u64,
    /// Predicted mean of `N_R + N_B`.
    pub q: f64,
    pub safety_pass_rate: Option<f64>,
    /// Predicted pass rate `k^(-2 alpha)`.
    pub delta_safe: f64,
    pub prefix_density_target: f64,
    pub red_prefix: PrefixStats,
    pub blue_prefix: PrefixStats,
    pub counters: Counters,
}

pub fn diagnostics_report(state: &AlgorithmState) -> DiagnosticsReport {
    let c = &state.counters;
    let checks = c.safety_checks_red + c.safety_checks_blue;
    let passes = c.safety_passes_red + c.safety_passes_blue;
    let target = state.params.prefix_density_target(state.k);
    DiagnosticsReport {
        n: state.n,
        k: state.k,
        alpha: state.params.alpha,
        n_r: state.red.initial_count(),
        n_b: state.blue.initial_count(),
        q: state.params.q(state.n, state.k),
        safety_pass_rate: (checks > 0).then(|| passes as f64 / checks as f64),
        delta_safe: state.params.delta_safe(state.k),
        prefix_density_target: target,
        red_prefix: prefix_stats(&state.red, state.k, target),
        blue_prefix: prefix_stats(&state.blue, state.k, target),
        counters: c.clone(),
    }
}
