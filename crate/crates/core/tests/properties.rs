//! Randomised invariants over generated instances.

mod common;

use common::*;
use dmst_core::bench::{aggregate, read_records, write_records, Algorithm, RunConfig, RunRecord};
use dmst_core::construct::{delta_prim, mhc_observed, rpm, Chromosome, MhcParams};
use dmst_core::gen::{read_instance, write_instance, InstanceKind};
use dmst_core::hampath::shortcut;
use dmst_core::mst::mst;
use dmst_core::swap::{apply_swap, neighbourhood, SwapSearch};
use dmst_core::{feasibility_error, DegreeBound, Point, PointSet, Tree};
use proptest::prelude::*;

fn points(max_n: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::hash_set((0i32..2000, 0i32..2000), 3..=max_n).prop_map(|set| {
        let xy: Vec<(f64, f64)> = set.into_iter().map(|(x, y)| (x as f64, y as f64)).collect();
        PointSet::from_xy(&xy, "prop").unwrap()
    })
}

fn delta() -> impl Strategy<Value = usize> {
    2usize..=4
}

fn fast_config() -> RunConfig {
    RunConfig {
        mhc: MhcParams {
            m: 40,
            r: 10,
            ..MhcParams::default()
        },
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn every_algorithm_is_feasible_and_above_the_mst(ps in points(30), delta in delta(), seed in any::<u64>()) {
        let base = mst(&ps).unwrap().tree;
        let d = DegreeBound::new(delta).unwrap();
        for alg in Algorithm::for_delta(delta) {
            let out = alg.run(&ps, d, seed, &fast_config()).unwrap();
            out.tree.check_invariants().unwrap();
            prop_assert_eq!(out.tree.n(), ps.len());
            prop_assert_eq!(feasibility_error(&out.tree, d), 0, "{}", alg);
            prop_assert!(weight(&out.tree, &ps) >= weight(&base, &ps) - 1e-9, "{}", alg);
            prop_assert!(bottleneck(&out.tree, &ps) >= bottleneck(&base, &ps) - 1e-9, "{}", alg);
        }
    }

    #[test]
    fn algorithms_are_deterministic(ps in points(20), delta in delta(), seed in any::<u64>()) {
        let d = DegreeBound::new(delta).unwrap();
        for alg in Algorithm::for_delta(delta) {
            let a = alg.run(&ps, d, seed, &fast_config()).unwrap();
            let b = alg.run(&ps, d, seed, &fast_config()).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn relabelling_preserves_tree_measures(ps in points(20), rot in 0usize..20) {
        let n = ps.len();
        let t = mst(&ps).unwrap().tree;
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let mut moved = vec![Point::new(0.0, 0.0); n];
        for i in 0..n {
            moved[perm[i]] = ps.point(i);
        }
        let qs = PointSet::new(moved, "moved").unwrap();
        let edges = t.edges().iter().map(|e| dmst_core::Edge::new(perm[e.u], perm[e.v])).collect();
        let u = Tree::new(n, edges).unwrap();
        prop_assert!((weight(&t, &ps) - weight(&u, &qs)).abs() < 1e-9);
        prop_assert_eq!(bottleneck(&t, &ps), bottleneck(&u, &qs));
        prop_assert!(bottleneck(&t, &ps) <= weight(&t, &ps));
        prop_assert_eq!(mst(&qs).unwrap().tree.max_degree(), t.max_degree());
    }

    #[test]
    fn swaps_are_invertible(ps in points(12), pick in any::<prop::sample::Index>()) {
        let t = mst(&ps).unwrap().tree;
        let all = neighbourhood(&t);
        let s = all[pick.index(all.len())];
        let next = apply_swap(&t, s).unwrap();
        next.check_invariants().unwrap();
        prop_assert!(next.contains(s.add) && !next.contains(s.remove));
        prop_assert_eq!(apply_swap(&next, s.inverse()).unwrap(), t);
    }

    #[test]
    fn feasibility_error_is_zero_exactly_when_degrees_fit(ps in points(20), delta in 2usize..=6) {
        let t = mst(&ps).unwrap().tree;
        let d = DegreeBound::relaxed(delta).unwrap();
        prop_assert_eq!(feasibility_error(&t, d) == 0, t.max_degree() <= delta);
        prop_assert_eq!(feasibility_error(&t, d), excess(&t, delta));
    }

    #[test]
    fn strict_searches_reduce_excess_every_step(ps in points(40), delta in 2usize..=3) {
        let d = DegreeBound::new(delta).unwrap();
        let f0 = excess(&mst(&ps).unwrap().tree, delta);
        for search in [SwapSearch::Fls, SwapSearch::Fwls, SwapSearch::FwlsB] {
            let mut last = f0;
            let out = search.run_observed(&ps, d, |step| {
                assert!(step.feasibility_error < last);
                last = step.feasibility_error;
            }).unwrap();
            prop_assert!(out.iterations <= f0);
        }
    }

    #[test]
    fn dnls_measure_strictly_decreases(ps in points(40), delta in 2usize..=4) {
        let d = DegreeBound::new(delta).unwrap();
        let t0 = mst(&ps).unwrap().tree;
        let mut last = (ps.len() + 1, 0);
        let mut first = true;
        SwapSearch::Dnls.run_observed(&ps, d, |step| {
            let locks = step.locks.unwrap();
            let m = locks.measure(step.tree);
            assert!(first || m < last, "{m:?} !< {last:?}");
            assert!(m.0 < ps.len());
            assert!(locks.is_consistent(step.tree, d));
            first = false;
            last = m;
        }).unwrap();
        prop_assert!(t0.n() == ps.len());
    }

    #[test]
    fn all_ones_rpm_is_delta_prim(ps in points(40), delta in delta(), start in 0usize..3) {
        let d = DegreeBound::new(delta).unwrap();
        let start = start % ps.len();
        let c = Chromosome::ones(ps.len(), d);
        prop_assert_eq!(rpm(&ps, d, &c, start).unwrap(), delta_prim(&ps, d, start).unwrap());
    }

    #[test]
    fn mhc_returns_its_best_evaluation(ps in points(25), delta in delta(), seed in any::<u64>()) {
        let d = DegreeBound::new(delta).unwrap();
        let params = MhcParams { m: 30, r: 5, seed, ..MhcParams::default() };
        let mut seen = Vec::new();
        let out = mhc_observed(&ps, d, &params, |w| seen.push(w)).unwrap();
        prop_assert_eq!(out.iterations, seen.len());
        let w = weight(&out.tree, &ps);
        let best = seen.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!((w - best).abs() < 1e-9);
    }

    #[test]
    fn shortcut_keeps_first_occurrences(seq in prop::collection::vec(0usize..10, 0..40)) {
        let out = shortcut(&seq);
        let mut seen = std::collections::HashSet::new();
        let want: Vec<usize> = seq.iter().copied().filter(|v| seen.insert(*v)).collect();
        prop_assert_eq!(out, want);
    }

    #[test]
    fn instance_files_round_trip(
        coords in prop::collection::hash_set((-1e6f64..1e6, -1e6f64..1e6).prop_map(|(x, y)| (x.to_bits(), y.to_bits())), 1..50),
        seed in any::<u64>(),
        special in any::<bool>(),
    ) {
        let xy: Vec<(f64, f64)> = coords.into_iter().map(|(x, y)| (f64::from_bits(x), f64::from_bits(y))).collect();
        let ps = PointSet::from_xy(&xy, "x").unwrap();
        let kind = if special { InstanceKind::Special } else { InstanceKind::Uniform };
        let mut buf = Vec::new();
        write_instance(&mut buf, &ps, seed, kind).unwrap();
        let (header, back) = read_instance(buf.as_slice()).unwrap();
        prop_assert_eq!(header.n, ps.len());
        prop_assert_eq!(header.seed, seed);
        prop_assert_eq!(header.kind, kind);
        prop_assert_eq!(back.points(), ps.points());
    }

    #[test]
    fn aggregate_matches_direct_means(raw in prop::collection::vec((0usize..3, 0usize..2, 1.0f64..3.0, 1.0f64..3.0), 0..60)) {
        let names = ["FLS", "Prim", "DT"];
        let records: Vec<RunRecord> = raw.iter().enumerate().map(|(i, &(a, n, wr, br))| RunRecord {
            algorithm: names[a].into(),
            instance_id: format!("uniform-n{}-s{i}", 10 + n),
            n: 10 + n,
            delta: 2,
            seed: i as u64,
            weight: wr * 100.0,
            bottleneck: br * 10.0,
            mst_weight: 100.0,
            mst_bottleneck: 10.0,
            iterations: 0,
            elapsed_ms: 0.0,
        }).collect();
        let rows = aggregate(&records);
        prop_assert_eq!(rows.iter().map(|r| r.count).sum::<usize>(), records.len());
        for row in &rows {
            let group: Vec<&RunRecord> = records.iter().filter(|r| r.algorithm == row.algorithm && r.n == row.n).collect();
            prop_assert_eq!(group.len(), row.count);
            let mw = group.iter().map(|r| r.weight_ratio()).sum::<f64>() / group.len() as f64;
            let mb = group.iter().map(|r| r.bottleneck_ratio()).sum::<f64>() / group.len() as f64;
            prop_assert!((mw - row.mean_weight_ratio).abs() < 1e-12);
            prop_assert!((mb - row.mean_bottleneck_ratio).abs() < 1e-12);
        }
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        prop_assert_eq!(read_records(buf.as_slice()).unwrap(), records);
    }
}
