use proptest::prelude::*;

use propb::hypergraph::{classify_edge, count_monochromatic, is_proper, is_safe, EdgeKind};
use propb::io::{parse_hypergraph, parse_text, write_json, write_text};
use propb::oracle::brute_force_oracle;
use propb::recoloring::{drive, initialize, run, AlgorithmParams};
use propb::threshold::{log_f, log_first_moment, log_g, phi, second_moment_ratio};
use propb::{exact, Color, Coloring, Hypergraph};

/// Random k-graph with `n` even in `[2k, 2k + 10]`.
fn hypergraph(max_k: u32, max_m: usize) -> impl Strategy<Value = Hypergraph> {
    (3..=max_k)
        .prop_flat_map(|k| (Just(k), (k..=k + 5).prop_map(|h| 2 * h)))
        .prop_flat_map(move |(k, n)| {
            let edge = proptest::sample::subsequence((0..n).collect::<Vec<u32>>(), k as usize);
            (Just(n), Just(k), proptest::collection::vec(edge, 0..=max_m))
        })
        .prop_map(|(n, k, edges)| Hypergraph::new(n, k, edges).unwrap())
}

fn coloring(n: u32) -> impl Strategy<Value = Coloring> {
    proptest::collection::vec(any::<bool>(), n as usize)
        .prop_map(|bits| Coloring::new(bits.into_iter().map(|b| if b { Color::Red } else { Color::Blue }).collect()))
}

fn with_coloring(max_k: u32, max_m: usize) -> impl Strategy<Value = (Hypergraph, Coloring)> {
    hypergraph(max_k, max_m).prop_flat_map(|h| {
        let n = h.n();
        (Just(h), coloring(n))
    })
}

proptest! {
    #[test]
    fn incidence_matches_edges(h in hypergraph(6, 30)) {
        for v in 0..h.n() {
            for &e in h.incident(v) {
                prop_assert!(h.edge(e as usize).contains(&v));
            }
        }
        for (i, e) in h.edges().enumerate() {
            prop_assert!(e.windows(2).all(|w| w[0] < w[1]));
            for &v in e {
                prop_assert!(h.incident(v).contains(&(i as u32)));
            }
        }
        let total: usize = (0..h.n()).map(|v| h.degree(v)).sum();
        prop_assert_eq!(total, h.num_edges() * h.k() as usize);
    }

    #[test]
    fn text_and_json_round_trip(h in hypergraph(6, 20)) {
        let text = write_text(&h);
        prop_assert_eq!(&parse_text(&text).unwrap(), &h);
        prop_assert_eq!(&parse_hypergraph(&write_json(&h)).unwrap(), &h);
    }

    #[test]
    fn classification_agrees_with_counts((h, c) in with_coloring(6, 30)) {
        let mut mono = (0, 0);
        for e in 0..h.num_edges() {
            let reds = h.edge(e).iter().filter(|&&v| c.color(v) == Color::Red).count();
            let k = h.k() as usize;
            match classify_edge(&h, &c, e).unwrap().kind {
                EdgeKind::Monochromatic(Color::Red) => { prop_assert_eq!(reds, k); mono.0 += 1; }
                EdgeKind::Monochromatic(Color::Blue) => { prop_assert_eq!(reds, 0); mono.1 += 1; }
                EdgeKind::AlmostMonochromatic { head, majority } => {
                    prop_assert!(reds == 1 || reds == k - 1);
                    prop_assert_ne!(c.color(head), majority);
                    prop_assert!(h.edge(e).contains(&head));
                }
                EdgeKind::Bichromatic => prop_assert!(reds >= 2 && reds <= k - 2),
            }
        }
        prop_assert_eq!(count_monochromatic(&h, &c).unwrap(), mono);
    }

    #[test]
    fn recoloring_a_safe_vertex_creates_no_monochromatic_edge((h, c) in with_coloring(6, 30)) {
        let (r0, b0) = count_monochromatic(&h, &c).unwrap();
        for v in 0..h.n() {
            if is_safe(&h, &c, v).unwrap() {
                let mut d = c.clone();
                d.set(v, c.color(v).other());
                let (r1, b1) = count_monochromatic(&h, &d).unwrap();
                prop_assert!(r1 + b1 <= r0 + b0);
            }
        }
    }

    #[test]
    fn runs_are_sound_and_deterministic(h in hypergraph(6, 60), seed in any::<u64>(), random in any::<bool>()) {
        let params = AlgorithmParams { seed, random_equipartition: random, ..AlgorithmParams::default() };
        let a = run(&h, &params).unwrap();
        let b = run(&h, &params).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.report.counters.invariant_violations(), 0);
        if let Some(c) = a.outcome.coloring() {
            prop_assert!(c.is_equitable());
            prop_assert!(is_proper(&h, &c).unwrap());
            prop_assert_eq!((a.mono_red, a.mono_blue), (0, 0));
        }
        let trace = &a.report.counters.mono_trace;
        prop_assert!(trace.windows(2).all(|w| w[1].0 + w[1].1 <= w[0].0 + w[0].1));
        prop_assert_eq!(trace.len() as u64, a.iterations + 1);
    }

    #[test]
    fn incremental_counts_track_the_coloring(h in hypergraph(5, 40), seed in any::<u64>()) {
        let mut state = initialize(&h, &AlgorithmParams { seed, ..AlgorithmParams::default() }).unwrap();
        drive(&mut state, &h);
        let (r, b) = count_monochromatic(&h, state.coloring()).unwrap();
        prop_assert_eq!(state.monochromatic(), (r as u64, b as u64));
        // Checked lists hold distinct vertices of the initial classes.
        for side in [Color::Red, Color::Blue] {
            let s = state.side(side);
            let mut seen: Vec<u32> = s.checked().iter().map(|&(v, _)| v).collect();
            prop_assert!(seen.iter().all(|&v| state.initial_coloring().color(v) == side));
            seen.sort_unstable();
            seen.dedup();
            prop_assert_eq!(seen.len(), s.checked().len());
        }
    }

    #[test]
    fn success_implies_oracle_colorable(h in hypergraph(4, 40), seed in any::<u64>()) {
        prop_assume!(h.n() <= 16);
        let res = run(&h, &AlgorithmParams { seed, ..AlgorithmParams::default() }).unwrap();
        let all = brute_force_oracle(&h, false).unwrap();
        let eq = brute_force_oracle(&h, true).unwrap();
        prop_assert!(eq.count <= all.count);
        prop_assert_eq!(eq.count % 2, 0);
        prop_assert_eq!(all.count % 2, 0);
        prop_assert_eq!(eq.colorable, eq.count > 0);
        if res.outcome.is_success() {
            prop_assert!(eq.colorable);
        }
    }

    #[test]
    fn phi_lies_in_its_bounds(k in 1u64..400, extra in 0u64..5000) {
        let n = 2 * (k + extra);
        let p = phi(n, k).unwrap();
        prop_assert!(p <= 1.0 + 1e-12);
        prop_assert!(p >= (-(k as f64) * std::f64::consts::LN_2).exp() * (1.0 - 1e-12));
    }

    #[test]
    fn f_and_g_are_symmetric(k in 2u64..12, extra in 0u64..40, m in 0.0f64..1e4) {
        let n = 2 * (k + extra);
        for a in 0..=n / 2 {
            let b = n / 2 - a;
            prop_assert!((log_f(n, a).unwrap() - log_f(n, b).unwrap()).abs() < 1e-10);
            let (ga, gb) = (log_g(n, k, m, a).unwrap(), log_g(n, k, m, b).unwrap());
            prop_assert!((ga - gb).abs() <= 1e-12 * ga.abs().max(1.0));
        }
    }

    #[test]
    fn first_moment_decreases_in_m(k in 2u64..20, extra in 0u64..100, m in 0.0f64..1e5, dm in 1.0f64..1e3) {
        let n = 2 * (k + extra);
        prop_assert!(log_first_moment(n, k, m + dm).unwrap() < log_first_moment(n, k, m).unwrap());
    }

    #[test]
    fn log_path_matches_exact_path(k in 2u64..6, extra in 0u64..10, m in 0u64..200) {
        let n = 2 * (k + extra);
        let ex = exact::to_f64(&exact::first_moment(n, k, m).unwrap());
        let lx = log_first_moment(n, k, m as f64).unwrap().exp();
        prop_assert!((lx / ex - 1.0).abs() < 1e-9, "E[X]: {lx} vs {ex}");
        let er = exact::to_f64(&exact::second_moment_ratio(n, k, m).unwrap());
        let lr = second_moment_ratio(n, k, m as f64).unwrap();
        prop_assert!((lr.ratio / er - 1.0).abs() < 1e-9, "ratio: {} vs {er}", lr.ratio);
        prop_assert!((lr.excess - (er - 1.0)).abs() <= 1e-9 * er);
        prop_assert!(lr.ratio >= 1.0);
        for a in 0..=n / 2 {
            let f = exact::to_f64(&exact::f(n, a).unwrap());
            prop_assert!((log_f(n, a).unwrap().exp() / f - 1.0).abs() < 1e-9);
            let g = exact::to_f64(&exact::g(n, k, m, a).unwrap());
            prop_assert!((log_g(n, k, m as f64, a).unwrap().exp() / g - 1.0).abs() < 1e-9);
        }
    }
}
