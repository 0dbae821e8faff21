use rainbow_core::bounds::{bipartite_pair_formulas, BoundCase};
use rainbow_core::montecarlo::exact_probability;
use rainbow_core::*;

fn config(seed: u64, trials: u64, t: u32, l: usize, selector: Selector) -> McConfig {
    McConfig {
        master_seed: seed,
        trials,
        t,
        l,
        selector,
    }
}

#[test]
fn single_edge_colors_are_uniform() {
    let g = MultipartiteGraph::new(&[1, 1]).unwrap();
    for t in [2u32, 3, 5] {
        let mut counts = vec![0u64; t as usize + 1];
        let trials = 10_000u64;
        for i in 0..trials {
            let c = random_coloring(&g, t, &mut trial_rng(1234, i)).unwrap();
            counts[c.colors()[0] as usize] += 1;
        }
        let p = 1.0 / t as f64;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        for &n in &counts[1..] {
            assert!((n as f64 - trials as f64 * p).abs() < 5.0 * sd, "t {t}: {counts:?}");
        }
    }
}

#[test]
fn star_tail_frequency_matches_exact_value() {
    let g = MultipartiteGraph::new(&[6, 6]).unwrap();
    let cfg = config(2024, 100_000, 3, 2, Selector::Case { case: SetCase::OneClass, k: 3 });
    let est = estimate_event(&g, &cfg, Event::StarTail).unwrap();
    let exact = exact_probability(&g, &cfg, Event::StarTail).unwrap().unwrap();
    assert_eq!(exact, bipartite_pair_formulas(6, BoundCase::BipStarTail).unwrap().exact.unwrap());
    let z = est.z_score(num_traits::ToPrimitive::to_f64(&exact).unwrap());
    assert!(z.abs() < 4.0, "z = {z}, {}", est.machine_line());
}

#[test]
fn pair_family_frequency_matches_exact_value() {
    let g = MultipartiteGraph::new(&[6, 6]).unwrap();
    let cfg = config(99, 100_000, 3, 2, Selector::Case { case: SetCase::TwoClasses, k: 3 });
    let est = estimate_event(&g, &cfg, Event::PairFamilyFails).unwrap();
    let exact = exact_probability(&g, &cfg, Event::PairFamilyFails).unwrap().unwrap();
    assert_eq!(exact, bipartite_pair_formulas(6, BoundCase::BipPairTotal).unwrap().exact.unwrap());
    let z = est.z_score(num_traits::ToPrimitive::to_f64(&exact).unwrap());
    assert!(z.abs() < 4.0, "z = {z}");
}

#[test]
fn double_star_frequency_matches_exact_value() {
    let g = MultipartiteGraph::new(&[6, 6]).unwrap();
    let cfg = config(5, 50_000, 4, 2, Selector::Case { case: SetCase::TwoClasses, k: 3 });
    let est = estimate_event(&g, &cfg, Event::DoubleStarTail).unwrap();
    let exact = exact_probability(&g, &cfg, Event::DoubleStarTail).unwrap().unwrap();
    let z = est.z_score(num_traits::ToPrimitive::to_f64(&exact).unwrap());
    assert!(z.abs() < 4.0, "z = {z}");
}

/// With `x, y` in one class and `z` in the other, every rainbow S-tree under
/// three colors is either `{xz, yz}` or one of the paired trees, so the family
/// event and the full event coincide coloring by coloring.
#[test]
fn pair_family_event_equals_full_packing_event() {
    let g = MultipartiteGraph::new(&[4, 4]).unwrap();
    let cfg = config(8, 3_000, 3, 2, Selector::Case { case: SetCase::TwoClasses, k: 3 });
    let family = estimate_event(&g, &cfg, Event::PairFamilyFails).unwrap();
    let full = estimate_event(&g, &cfg, Event::PackingFails).unwrap();
    assert_eq!(family.successes, full.successes);
}

#[test]
fn repeated_meta_trials_stay_within_four_sigma() {
    let g = MultipartiteGraph::new(&[5, 5]).unwrap();
    let mut cfg = config(0, 5_000, 3, 2, Selector::Case { case: SetCase::OneClass, k: 3 });
    let exact = exact_probability(&g, &cfg, Event::StarTail).unwrap().unwrap();
    let p = num_traits::ToPrimitive::to_f64(&exact).unwrap();
    let mut inside = 0;
    for meta in 0..20 {
        cfg.master_seed = 1000 + meta;
        let est = estimate_event(&g, &cfg, Event::StarTail).unwrap();
        if est.z_score(p).abs() < 4.0 {
            inside += 1;
        }
    }
    // at least 99% of 20 means all of them
    assert_eq!(inside, 20);
}

#[test]
fn estimates_are_deterministic_and_independent_of_threads() {
    let g = MultipartiteGraph::new(&[3, 3, 3]).unwrap();
    let cfg = config(77, 2_000, 3, 1, Selector::Case { case: SetCase::Spread, k: 3 });
    for event in [Event::TriangleDistinct, Event::TriangleTwo, Event::TriangleMono, Event::RainbowTree] {
        let a = estimate_event(&g, &cfg, event).unwrap();
        let b = estimate_event(&g, &cfg, event).unwrap();
        let c = estimate_event_par(&g, &cfg, event, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.machine_line(), c.machine_line());
    }
    let sum: u64 = [Event::TriangleDistinct, Event::TriangleTwo, Event::TriangleMono]
        .into_iter()
        .map(|e| estimate_event(&g, &cfg, e).unwrap().successes)
        .sum();
    assert_eq!(sum, cfg.trials);
}

#[test]
fn any_set_event_agrees_with_verification() {
    let g = MultipartiteGraph::new(&[2, 3]).unwrap();
    let cfg = config(3, 200, 3, 1, Selector::AllSets { k: 3 });
    let est = estimate_event(&g, &cfg, Event::AnySetFails).unwrap();
    let manual = (0..cfg.trials)
        .filter(|&i| {
            let c = random_coloring(&g, 3, &mut trial_rng(3, i)).unwrap();
            verify_coloring(&g, &c, 3, 1).unwrap().is_some()
        })
        .count() as u64;
    assert_eq!(est.successes, manual);
}

#[test]
fn search_witnesses_reverify_from_their_certificates() {
    let g = MultipartiteGraph::new(&[3, 3]).unwrap();
    let out = search_good_coloring(&g, 3, 2, 1, 50, 17).unwrap();
    let SearchOutcome::Found { coloring, attempt } = out.clone() else {
        panic!("expected a witness: {out:?}");
    };
    assert_eq!(coloring, random_coloring(&g, 3, &mut trial_rng(17, attempt)).unwrap());
    let text = Certificate::new(g.clone(), coloring).render();
    let back = Certificate::parse(&text).unwrap();
    assert_eq!(verify_coloring(&back.graph, &back.coloring, 2, 1).unwrap(), None);
    assert_eq!(search_good_coloring(&g, 3, 2, 1, 50, 17).unwrap(), out);
    assert_eq!(search_good_coloring_par(&g, 3, 2, 1, 50, 17, 2).unwrap(), out);
}

#[test]
fn search_reports_exhaustion_with_a_failing_set() {
    let g = MultipartiteGraph::new(&[4, 4]).unwrap();
    match search_good_coloring(&g, 3, 3, 2, 3, 1).unwrap() {
        SearchOutcome::Exhausted { attempts: 3, reason: montecarlo::ExhaustReason::AllFailed { last_failing } } => {
            let c = random_coloring(&g, 3, &mut trial_rng(1, 2)).unwrap();
            assert!(has_l_packing(&g, &c, &last_failing, 2).is_none());
        }
        other => panic!("unexpected {other:?}"),
    }
}
