//! Seeded statistical checks of the samplers and the log-space moments.
//! Every bound is at least four standard errors wide.

use std::collections::{HashMap, HashSet};

use propb::models::{
    binomial_structured_with, binomial_with, random_k_subset, uniform_distinct_with, uniform_with_replacement_with,
};
use propb::recoloring::AlgorithmParams;
use propb::rng::rng_from_seed;
use propb::threshold::log_f;
use propb::{Color, Coloring};

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

#[test]
fn k_subsets_are_uniform() {
    let mut rng = rng_from_seed(11);
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut buf = Vec::new();
    let draws = 40_000;
    for _ in 0..draws {
        random_k_subset(&mut rng, 6, 3, &mut buf);
        assert!(buf.windows(2).all(|w| w[0] < w[1]));
        *counts.entry(buf.clone()).or_default() += 1;
    }
    assert_eq!(counts.len(), 20);
    let expected = draws as f64 / 20.0;
    let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 19 degrees of freedom; 50 is past the 0.9999 quantile.
    assert!(chi2 < 50.0, "chi2 = {chi2}");
}

#[test]
fn with_replacement_repeats_at_the_birthday_rate() {
    let (n, k, m) = (8, 2, 10u64);
    let universe = 28.0;
    let p_distinct: f64 = (0..m).map(|i| 1.0 - i as f64 / universe).product();
    let trials = 5_000;
    let mut rng = rng_from_seed(12);
    let repeats = (0..trials)
        .filter(|_| uniform_with_replacement_with(&mut rng, n, k, m).unwrap().has_duplicate_edges())
        .count();
    let expected = 1.0 - p_distinct;
    let se = (expected * (1.0 - expected) / trials as f64).sqrt();
    let observed = repeats as f64 / trials as f64;
    assert!((observed - expected).abs() < 4.0 * se, "{observed} vs {expected}");
}

#[test]
fn distinct_model_never_repeats_and_degrees_are_exchangeable() {
    let (n, k, m) = (10u32, 3u32, 15u64);
    let trials = 3_000;
    let mut rng = rng_from_seed(13);
    let mut degree = vec![Vec::with_capacity(trials); n as usize];
    for _ in 0..trials {
        let h = uniform_distinct_with(&mut rng, n, k, m).unwrap();
        assert_eq!(h.num_edges(), m as usize);
        assert!(!h.has_duplicate_edges());
        for v in 0..n {
            degree[v as usize].push(h.degree(v) as f64);
        }
    }
    let target = (m * u64::from(k)) as f64 / f64::from(n);
    for d in &degree {
        let (mean, var) = mean_var(d);
        let se = (var / trials as f64).sqrt();
        assert!((mean - target).abs() < 4.5 * se, "mean degree {mean} vs {target}");
    }
}

#[test]
fn binomial_edge_count_has_the_right_mean() {
    let (n, k, p) = (12, 3, 0.1);
    let mut rng = rng_from_seed(14);
    let counts: Vec<f64> = (0..2_000)
        .map(|_| {
            let (h, _) = binomial_with(&mut rng, n, k, p).unwrap();
            assert!(!h.has_duplicate_edges());
            h.num_edges() as f64
        })
        .collect();
    let (mean, var) = mean_var(&counts);
    let (mu, sigma2) = (220.0 * p, 220.0 * p * (1.0 - p));
    assert!((mean - mu).abs() < 4.0 * (sigma2 / 2_000.0).sqrt(), "{mean} vs {mu}");
    assert!((var / sigma2 - 1.0).abs() < 0.15, "{var} vs {sigma2}");
}

#[test]
fn initial_monochromatic_count_averages_q() {
    let (n, k) = (20, 5);
    let params = AlgorithmParams { alpha: 0.3, ..AlgorithmParams::default() };
    let p = params.p(n, k).unwrap();
    let q = params.q(n, k);
    let r0 = Coloring::halves(n);
    let mut rng = rng_from_seed(15);
    let totals: Vec<f64> = (0..4_000)
        .map(|_| {
            let s = binomial_structured_with(&mut rng, n, k, p, &r0).unwrap();
            assert_eq!(s.red_edges.len() as u64, s.n_r);
            for e in &s.red_edges {
                assert!(e.iter().all(|&v| r0.color(v) == Color::Red));
            }
            for e in &s.other_edges {
                assert!(e.iter().any(|&v| r0.color(v) == Color::Red));
                assert!(e.iter().any(|&v| r0.color(v) == Color::Blue));
            }
            (s.n_r + s.n_b) as f64
        })
        .collect();
    let (mean, var) = mean_var(&totals);
    assert!((mean - q).abs() < 4.0 * (var / 4_000.0).sqrt(), "{mean} vs {q}");
}

#[test]
fn structured_repeats_are_rare_at_small_p() {
    let r0 = Coloring::halves(8);
    let mut rng = rng_from_seed(16);
    let trials = 5_000;
    let mut other_seen = 0usize;
    let repeats = (0..trials)
        .filter(|_| {
            let s = binomial_structured_with(&mut rng, 8, 2, 0.02, &r0).unwrap();
            let distinct: HashSet<_> = s.other_edges.iter().collect();
            assert_eq!(distinct.len(), s.other_edges.len());
            other_seen += s.other_edges.len();
            s.has_repeats()
        })
        .count();
    // Repeats are where this model departs from the plain binomial one.
    assert!((repeats as f64 / trials as f64) <= 0.01, "{repeats} repeats");
    // 16 mixed pairs at p = 0.02.
    let mean = other_seen as f64 / trials as f64;
    assert!((mean - 0.32).abs() < 4.0 * (16.0 * 0.02 * 0.98 / trials as f64).sqrt(), "{mean}");
}

#[test]
fn f_sums_to_one() {
    for n in [2u64, 10, 64, 250, 1000, 2000] {
        let terms: Vec<f64> = (0..=n / 2).map(|a| log_f(n, a).unwrap().exp()).collect();
        let total = propb::special::neumaier_sum(terms);
        assert!((total - 1.0).abs() < 1e-12, "n = {n}: {total}");
    }
}
