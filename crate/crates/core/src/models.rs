//! Seeded generators for random k-uniform hypergraphs.
//!
//! - [`Model::UniformDistinct`]: `m` distinct uniform k-sets.
//! - [`Model::UniformWithReplacement`]: `m` independent uniform k-sets.
//! - [`Model::Binomial`]: every k-set present independently with probability `p`.
//! - [`Model::BinomialStructured`]: the binomial model rebuilt around a fixed
//!   equipartition, with the initially monochromatic edges drawn with
//!   repetition (see [`sample_binomial_structured`]).

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Color, Coloring, Hypergraph, Vertex};
use crate::rng::{rng_from_seed, TrialRng};
use crate::special::ln_choose;
use crate::threshold::phi;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    UniformDistinct,
    UniformWithReplacement,
    Binomial,
    BinomialStructured,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::UniformDistinct => "uniform_distinct",
            Model::UniformWithReplacement => "uniform_with_replacement",
            Model::Binomial => "binomial",
            Model::BinomialStructured => "binomial_structured",
        }
    }

    pub fn is_binomial(self) -> bool {
        matches!(self, Model::Binomial | Model::BinomialStructured)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: Model,
    pub n: u32,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ModelSpec {
    pub fn uniform(model: Model, n: u32, k: u32, m: u64, seed: u64) -> Self {
        ModelSpec { model, n, k, m: Some(m), p: None, seed }
    }

    pub fn binomial(model: Model, n: u32, k: u32, p: f64, seed: u64) -> Self {
        ModelSpec { model, n, k, m: None, p: Some(p), seed }
    }

    /// Binomial model whose expected edge count is
    /// `2 alpha (n ln k / k) phi^-1 2^(k-1)`.
    pub fn binomial_for_alpha(model: Model, n: u32, k: u32, alpha: f64, seed: u64) -> Result<Self> {
        let m = alpha_rule_edges(n, k, alpha)?;
        Ok(Self::binomial(model, n, k, m / EdgeUniverse::all(n, k).approx(), seed))
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.k > self.n {
            return Err(Error::input(format!("need 2 <= k <= n, got n = {}, k = {}", self.n, self.k)));
        }
        if self.model.is_binomial() {
            if self.m.is_some() {
                return Err(Error::input("binomial models take p, not m"));
            }
            let p = self.p.ok_or_else(|| Error::input("binomial models need p"))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::input(format!("p must lie in [0, 1], got {p}")));
            }
            if self.model == Model::BinomialStructured && self.n % 2 == 1 {
                return Err(Error::input("the structured model needs even n"));
            }
        } else {
            if self.p.is_some() {
                return Err(Error::input("uniform models take m, not p"));
            }
            if self.m.is_none() {
                return Err(Error::input("uniform models need m"));
            }
        }
        Ok(())
    }
}

/// Expected edge count of the alpha rule: `2 alpha (n ln k / k) phi^-1 2^(k-1)`.
pub fn alpha_rule_edges(n: u32, k: u32, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::input(format!("alpha must be positive, got {alpha}")));
    }
    let (nf, kf) = (f64::from(n), f64::from(k));
    let q = 2.0 * alpha * nf * kf.ln() / kf;
    Ok(q * (kf - 1.0).exp2() / phi(u64::from(n), u64::from(k))?)
}

/// How the edge count of a binomial sample was drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Fixed,
    Exact,
    Poisson,
    Normal,
}

/// Universes above this size use an approximate binomial draw.
pub const EXACT_BINOMIAL_LIMIT: f64 = 1e15;
/// Below this `p` the approximation is Poisson, above it normal.
const POISSON_P_LIMIT: f64 = 1e-3;

/// Size of a family of k-sets, exact when it fits in `u128`.
#[derive(Clone, Copy, Debug)]
pub struct EdgeUniverse {
    exact: Option<u128>,
    ln: f64,
}

impl EdgeUniverse {
    pub fn all(n: u32, k: u32) -> Self {
        Self::choose(u64::from(n), u64::from(k))
    }

    fn choose(n: u64, k: u64) -> Self {
        let mut exact = Some(1u128);
        for j in 0..k.min(n.saturating_sub(k)) {
            // C(n, j+1) = C(n, j) (n - j) / (j + 1), exact at every step.
            exact = exact
                .and_then(|c| c.checked_mul(u128::from(n - j)))
                .map(|c| c / u128::from(j + 1));
        }
        if k > n {
            exact = Some(0);
        }
        EdgeUniverse { exact, ln: ln_choose(n, k) }
    }

    /// Monochromatic-free part: `C(n,k) - 2 C(n/2,k)`.
    fn non_monochromatic(n: u32, k: u32) -> Self {
        let all = Self::all(n, k);
        let half = Self::all(n / 2, k);
        let exact = match (all.exact, half.exact) {
            (Some(a), Some(h)) => Some(a - 2 * h),
            _ => None,
        };
        let ln = all.ln + (-2.0 * (half.ln - all.ln).exp()).ln_1p();
        EdgeUniverse { exact, ln }
    }

    pub fn approx(&self) -> f64 {
        match self.exact {
            Some(e) => e as f64,
            None => self.ln.exp(),
        }
    }

    pub fn exact(&self) -> Option<u128> {
        self.exact
    }
}

fn draw_binomial_count(rng: &mut TrialRng, universe: EdgeUniverse, p: f64) -> Result<(u64, CountMethod)> {
    if p == 0.0 {
        return Ok((0, CountMethod::Exact));
    }
    let size = universe.approx();
    if size <= EXACT_BINOMIAL_LIMIT {
        let trials = universe.exact.map_or(size as u64, |e| e as u64);
        let dist = Binomial::new(trials, p).map_err(|e| Error::input(e.to_string()))?;
        return Ok((dist.sample(rng), CountMethod::Exact));
    }
    let mean = size * p;
    if p <= POISSON_P_LIMIT {
        let dist = Poisson::new(mean).map_err(|e| Error::input(e.to_string()))?;
        let x: f64 = dist.sample(rng);
        Ok((x as u64, CountMethod::Poisson))
    } else {
        let sd = (mean * (1.0 - p)).sqrt();
        let dist = Normal::new(mean, sd).map_err(|e| Error::input(e.to_string()))?;
        let x: f64 = dist.sample(rng);
        Ok((x.round().clamp(0.0, size) as u64, CountMethod::Normal))
    }
}

/// Uniform k-subset of `0..n`, ascending (Floyd's algorithm).
pub fn random_k_subset(rng: &mut TrialRng, n: u32, k: u32, out: &mut Vec<Vertex>) {
    out.clear();
    for j in n - k..n {
        let t = rng.random_range(0..=j);
        if out.contains(&t) {
            out.push(j);
        } else {
            out.push(t);
        }
    }
    out.sort_unstable();
}

/// Canonical key for rejection sampling of distinct edges.
enum KeySet {
    Bits(HashSet<u128>),
    Tuples(HashSet<Vec<Vertex>>),
}

impl KeySet {
    fn new(n: u32, capacity: usize) -> Self {
        if n <= 128 {
            KeySet::Bits(HashSet::with_capacity(capacity))
        } else {
            KeySet::Tuples(HashSet::with_capacity(capacity))
        }
    }

    fn insert(&mut self, e: &[Vertex]) -> bool {
        match self {
            KeySet::Bits(s) => s.insert(e.iter().fold(0u128, |acc, &v| acc | (1u128 << v))),
            KeySet::Tuples(s) => s.insert(e.to_vec()),
        }
    }
}

/// All k-subsets of `0..n` in lexicographic order, filtered.
fn enumerate_subsets(n: u32, k: u32, keep: impl Fn(&[Vertex]) -> bool) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vertex> = (0..k).collect();
    loop {
        if keep(&cur) {
            out.push(cur.clone());
        }
        let mut i = k as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i as u32 {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k as usize {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Universes up to this size are enumerated when the request is dense.
const ENUMERATE_LIMIT: u128 = 1 << 22;

/// `count` distinct uniform k-subsets of `0..n` satisfying `keep`, drawn by
/// rejection; dense requests over small universes enumerate instead.
fn distinct_subsets(
    rng: &mut TrialRng,
    n: u32,
    k: u32,
    count: u64,
    universe: EdgeUniverse,
    keep: impl Fn(&[Vertex]) -> bool,
) -> Result<Vec<Vertex>> {
    if let Some(size) = universe.exact {
        if u128::from(count) > size {
            return Err(Error::input(format!("cannot draw {count} distinct edges from {size}")));
        }
        if size <= ENUMERATE_LIMIT && u128::from(count) * 2 > size {
            let mut all = enumerate_subsets(n, k, keep);
            let (chosen, _) = all.partial_shuffle(rng, count as usize);
            return Ok(chosen.iter().flatten().copied().collect());
        }
    }
    let count = usize::try_from(count).map_err(|_| Error::input("edge count overflows"))?;
    let mut flat = Vec::with_capacity(count * k as usize);
    let mut seen = KeySet::new(n, count);
    let mut buf = Vec::with_capacity(k as usize);
    let mut accepted = 0;
    while accepted < count {
        random_k_subset(rng, n, k, &mut buf);
        if keep(&buf) && seen.insert(&buf) {
            flat.extend_from_slice(&buf);
            accepted += 1;
        }
    }
    Ok(flat)
}

fn expect_model(spec: &ModelSpec, model: Model) -> Result<()> {
    spec.validate()?;
    if spec.model != model {
        return Err(Error::input(format!("expected a {} spec, got {}", model.name(), spec.model.name())));
    }
    Ok(())
}

pub fn sample_uniform_distinct(spec: &ModelSpec) -> Result<Hypergraph> {
    expect_model(spec, Model::UniformDistinct)?;
    let mut rng = rng_from_seed(spec.seed);
    uniform_distinct_with(&mut rng, spec.n, spec.k, spec.m.unwrap_or(0))
}

pub fn uniform_distinct_with(rng: &mut TrialRng, n: u32, k: u32, m: u64) -> Result<Hypergraph> {
    let universe = EdgeUniverse::all(n, k);
    if universe.exact.is_none() && (m as f64).ln() > universe.ln {
        return Err(Error::input("m exceeds the number of k-subsets"));
    }
    let flat = distinct_subsets(rng, n, k, m, universe, |_| true)?;
    Hypergraph::from_flat(n, k, flat)
}

pub fn sample_uniform_with_replacement(spec: &ModelSpec) -> Result<Hypergraph> {
    expect_model(spec, Model::UniformWithReplacement)?;
    let mut rng = rng_from_seed(spec.seed);
    uniform_with_replacement_with(&mut rng, spec.n, spec.k, spec.m.unwrap_or(0))
}

pub fn uniform_with_replacement_with(rng: &mut TrialRng, n: u32, k: u32, m: u64) -> Result<Hypergraph> {
    let mut flat = Vec::with_capacity(m as usize * k as usize);
    let mut buf = Vec::with_capacity(k as usize);
    for _ in 0..m {
        random_k_subset(rng, n, k, &mut buf);
        flat.extend_from_slice(&buf);
    }
    Hypergraph::from_flat(n, k, flat)
}

pub fn sample_binomial(spec: &ModelSpec) -> Result<Hypergraph> {
    expect_model(spec, Model::Binomial)?;
    let mut rng = rng_from_seed(spec.seed);
    Ok(binomial_with(&mut rng, spec.n, spec.k, spec.p.unwrap_or(0.0))?.0)
}

/// Draws the edge count from `Bin(C(n,k), p)` and then that many distinct
/// uniform edges; equivalent to independent per-subset inclusion without
/// enumerating the universe.
pub fn binomial_with(rng: &mut TrialRng, n: u32, k: u32, p: f64) -> Result<(Hypergraph, CountMethod)> {
    let universe = EdgeUniverse::all(n, k);
    let (count, method) = draw_binomial_count(rng, universe, p)?;
    let flat = distinct_subsets(rng, n, k, count, universe, |_| true)?;
    Ok((Hypergraph::from_flat(n, k, flat)?, method))
}

/// The binomial model split around the equipartition `r0`: initially red and
/// blue edges are drawn with repetition, the rest binomially.
#[derive(Clone, Debug)]
pub struct StructuredSample {
    pub n: u32,
    pub k: u32,
    pub n_r: u64,
    pub n_b: u64,
    pub red_edges: Vec<Vec<Vertex>>,
    pub blue_edges: Vec<Vec<Vertex>>,
    pub other_edges: Vec<Vec<Vertex>>,
    pub count_method: CountMethod,
}

impl StructuredSample {
    /// Red edges, then blue, then the rest.
    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        let edges = self
            .red_edges
            .iter()
            .chain(&self.blue_edges)
            .chain(&self.other_edges)
            .cloned()
            .collect();
        Hypergraph::new(self.n, self.k, edges)
    }

    /// True if some red or blue edge was drawn twice. Other edges are distinct
    /// by construction and never monochromatic, so they cannot collide.
    pub fn has_repeats(&self) -> bool {
        let dup = |edges: &[Vec<Vertex>]| {
            let mut seen = HashSet::new();
            edges.iter().any(|e| !seen.insert(e))
        };
        dup(&self.red_edges) || dup(&self.blue_edges)
    }
}

pub fn sample_binomial_structured(spec: &ModelSpec, r0: &Coloring) -> Result<StructuredSample> {
    expect_model(spec, Model::BinomialStructured)?;
    let mut rng = rng_from_seed(spec.seed);
    binomial_structured_with(&mut rng, spec.n, spec.k, spec.p.unwrap_or(0.0), r0)
}

pub fn binomial_structured_with(
    rng: &mut TrialRng,
    n: u32,
    k: u32,
    p: f64,
    r0: &Coloring,
) -> Result<StructuredSample> {
    if r0.n() != n || !r0.is_equitable() {
        return Err(Error::input("the initial coloring must be an equipartition of the vertex set"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("p must lie in [0, 1], got {p}")));
    }
    let half = n / 2;
    let class_universe = EdgeUniverse::all(half, k);
    let reds = r0.vertices_of(Color::Red);
    let blues = r0.vertices_of(Color::Blue);

    let draw_class = |rng: &mut TrialRng, pool: &[Vertex]| -> Result<(u64, Vec<Vec<Vertex>>)> {
        if k > half {
            return Ok((0, Vec::new()));
        }
        let (count, _) = draw_binomial_count(rng, class_universe, p)?;
        let mut buf = Vec::with_capacity(k as usize);
        let edges = (0..count)
            .map(|_| {
                random_k_subset(rng, half, k, &mut buf);
                let mut e: Vec<Vertex> = buf.iter().map(|&i| pool[i as usize]).collect();
                e.sort_unstable();
                e
            })
            .collect();
        Ok((count, edges))
    };
    let (n_r, red_edges) = draw_class(rng, &reds)?;
    let (n_b, blue_edges) = draw_class(rng, &blues)?;

    let universe = EdgeUniverse::non_monochromatic(n, k);
    let (count, count_method) = draw_binomial_count(rng, universe, p)?;
    let mixed = |e: &[Vertex]| {
        let first = r0.color(e[0]);
        e.iter().any(|&v| r0.color(v) != first)
    };
    let flat = distinct_subsets(rng, n, k, count, universe, mixed)?;
    let other_edges = flat.chunks(k as usize).map(<[Vertex]>::to_vec).collect();

    Ok(StructuredSample { n, k, n_r, n_b, red_edges, blue_edges, other_edges, count_method })
}

/// A generated instance with the bookkeeping the harness records.
#[derive(Clone, Debug)]
pub struct Generated {
    pub hypergraph: Hypergraph,
    pub count_method: CountMethod,
}

/// Generates any model. The structured model is built around `0..n/2` red.
pub fn generate(spec: &ModelSpec) -> Result<Generated> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);
    let (n, k) = (spec.n, spec.k);
    let (hypergraph, count_method) = match spec.model {
        Model::UniformDistinct => {
            (uniform_distinct_with(&mut rng, n, k, spec.m.unwrap_or(0))?, CountMethod::Fixed)
        }
        Model::UniformWithReplacement => {
            (uniform_with_replacement_with(&mut rng, n, k, spec.m.unwrap_or(0))?, CountMethod::Fixed)
        }
        Model::Binomial => binomial_with(&mut rng, n, k, spec.p.unwrap_or(0.0))?,
        Model::BinomialStructured => {
            let s = binomial_structured_with(&mut rng, n, k, spec.p.unwrap_or(0.0), &Coloring::halves(n))?;
            (s.to_hypergraph()?, s.count_method)
        }
    };
    Ok(Generated { hypergraph, count_method })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_edges(h: &Hypergraph) -> Vec<Vec<Vertex>> {
        let mut v: Vec<Vec<Vertex>> = h.edges().map(<[Vertex]>::to_vec).collect();
        v.sort();
        v
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(EdgeUniverse::all(10, 3).exact(), Some(120));
        assert_eq!(EdgeUniverse::all(128, 16).exact(), Some(93_343_021_201_262_177_400));
        assert_eq!(EdgeUniverse::non_monochromatic(4, 2).exact(), Some(4));
        assert!(EdgeUniverse::all(2000, 1000).exact().is_none());
        assert!((EdgeUniverse::all(60, 30).approx() - 1.182_645_815_648_614_2e17).abs() < 1e3);
    }

    #[test]
    fn uniform_distinct_examples() {
        let h = sample_uniform_distinct(&ModelSpec::uniform(Model::UniformDistinct, 10, 3, 0, 1)).unwrap();
        assert_eq!(h.num_edges(), 0);

        let h = sample_uniform_distinct(&ModelSpec::uniform(Model::UniformDistinct, 4, 2, 6, 1)).unwrap();
        assert_eq!(sorted_edges(&h), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);

        let a = sample_uniform_distinct(&ModelSpec::uniform(Model::UniformDistinct, 6, 3, 5, 1)).unwrap();
        let b = sample_uniform_distinct(&ModelSpec::uniform(Model::UniformDistinct, 6, 3, 5, 1)).unwrap();
        let c = sample_uniform_distinct(&ModelSpec::uniform(Model::UniformDistinct, 6, 3, 5, 2)).unwrap();
        assert_eq!(a, b);
        assert_ne!(sorted_edges(&a), sorted_edges(&c));
        assert!(!a.has_duplicate_edges());

        assert!(sample_uniform_distinct(&ModelSpec::uniform(Model::UniformDistinct, 4, 2, 7, 1)).is_err());
    }

    #[test]
    fn with_replacement_examples() {
        let h = sample_uniform_with_replacement(&ModelSpec::uniform(Model::UniformWithReplacement, 4, 4, 0, 3))
            .unwrap();
        assert_eq!(h.num_edges(), 0);
        let h = sample_uniform_with_replacement(&ModelSpec::uniform(Model::UniformWithReplacement, 4, 4, 3, 3))
            .unwrap();
        assert_eq!(sorted_edges(&h), vec![vec![0, 1, 2, 3]; 3]);
    }

    #[test]
    fn binomial_examples() {
        let h = sample_binomial(&ModelSpec::binomial(Model::Binomial, 10, 3, 0.0, 5)).unwrap();
        assert_eq!(h.num_edges(), 0);
        let h = sample_binomial(&ModelSpec::binomial(Model::Binomial, 4, 2, 1.0, 5)).unwrap();
        assert_eq!(h.num_edges(), 6);
        assert!(!h.has_duplicate_edges());
        assert!(sample_binomial(&ModelSpec::binomial(Model::Binomial, 4, 2, 1.5, 5)).is_err());
        assert!(sample_binomial(&ModelSpec::binomial(Model::Binomial, 4, 2, -0.1, 5)).is_err());
    }

    #[test]
    fn huge_universes_use_an_approximate_count() {
        let spec = ModelSpec::binomial_for_alpha(Model::Binomial, 128, 16, 0.3, 9).unwrap();
        let mut rng = rng_from_seed(9);
        let (count, method) = draw_binomial_count(&mut rng, EdgeUniverse::all(128, 16), spec.p.unwrap()).unwrap();
        assert_eq!(method, CountMethod::Poisson);
        let expected = alpha_rule_edges(128, 16, 0.3).unwrap();
        assert!((count as f64 - expected).abs() < 6.0 * expected.sqrt());
    }

    #[test]
    fn structured_examples() {
        let r0 = Coloring::halves(8);
        let s = sample_binomial_structured(&ModelSpec::binomial(Model::BinomialStructured, 8, 2, 0.0, 1), &r0)
            .unwrap();
        assert_eq!((s.n_r, s.n_b), (0, 0));
        assert!(s.red_edges.is_empty() && s.blue_edges.is_empty() && s.other_edges.is_empty());

        let s = sample_binomial_structured(&ModelSpec::binomial(Model::BinomialStructured, 8, 2, 0.6, 1), &r0)
            .unwrap();
        assert_eq!(s.red_edges.len() as u64, s.n_r);
        assert!(s.red_edges.iter().flatten().all(|&v| r0.color(v) == Color::Red));
        assert!(s.blue_edges.iter().flatten().all(|&v| r0.color(v) == Color::Blue));
        for e in &s.other_edges {
            assert!(e.iter().any(|&v| r0.color(v) == Color::Red));
            assert!(e.iter().any(|&v| r0.color(v) == Color::Blue));
        }
        let h = s.to_hypergraph().unwrap();
        assert_eq!(h.num_edges(), s.red_edges.len() + s.blue_edges.len() + s.other_edges.len());

        let lopsided = Coloring::from_red_set(8, [0]).unwrap();
        assert!(sample_binomial_structured(&ModelSpec::binomial(Model::BinomialStructured, 8, 2, 0.1, 1), &lopsided)
            .is_err());
    }

    #[test]
    fn spec_validation_and_json() {
        assert!(ModelSpec { model: Model::Binomial, n: 10, k: 3, m: Some(3), p: None, seed: 0 }.validate().is_err());
        assert!(ModelSpec { model: Model::UniformDistinct, n: 10, k: 3, m: None, p: Some(0.1), seed: 0 }
            .validate()
            .is_err());
        assert!(ModelSpec::uniform(Model::UniformDistinct, 10, 11, 3, 0).validate().is_err());
        let spec: ModelSpec = serde_json::from_str(r#"{"model":"binomial","n":10,"k":3,"p":0.1,"seed":4}"#).unwrap();
        assert_eq!(spec, ModelSpec::binomial(Model::Binomial, 10, 3, 0.1, 4));
        let back: ModelSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn generate_is_deterministic_per_seed() {
        for model in [Model::UniformDistinct, Model::UniformWithReplacement] {
            let spec = ModelSpec::uniform(model, 20, 4, 30, 11);
            assert_eq!(generate(&spec).unwrap().hypergraph, generate(&spec).unwrap().hypergraph);
        }
        for model in [Model::Binomial, Model::BinomialStructured] {
            let spec = ModelSpec::binomial(model, 20, 4, 0.01, 11);
            assert_eq!(generate(&spec).unwrap().hypergraph, generate(&spec).unwrap().hypergraph);
        }
    }

    #[test]
    fn floyd_subsets_are_valid() {
        let mut rng = rng_from_seed(3);
        let mut buf = Vec::new();
        for _ in 0..1000 {
            random_k_subset(&mut rng, 9, 4, &mut buf);
            assert_eq!(buf.len(), 4);
            assert!(buf.windows(2).all(|w| w[0] < w[1]));
            assert!(buf.iter().all(|&v| v < 9));
        }
        random_k_subset(&mut rng, 5, 5, &mut buf);
        assert_eq!(buf, vec![0, 1, 2, 3, 4]);
    }
}
