use netdiff::graph::{format_edge_list, largest_component, parse_edge_list, Directedness, EdgeList, EdgePolicy, Graph};
use netdiff::meanfield::{joint_histogram, predict, Weighting};
use netdiff::stats::{binned_by_degree, ccdf, fit_powerlaw, BinnedCurve};
use netdiff::transport::{step, Model, MassVector, TransportSpec};
use proptest::prelude::*;

fn edge_lists(max_nodes: u32, max_edges: usize) -> impl Strategy<Value = EdgeList> {
    (2..max_nodes).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 1..max_edges)
            .prop_map(move |edges| EdgeList::with_node_count(n as usize, edges))
    })
}

fn undirected(list: &EdgeList) -> Graph {
    Graph::build(list, Directedness::Undirected).unwrap().0
}

proptest! {
    #[test]
    fn build_is_idempotent(list in edge_lists(40, 120), directed in any::<bool>(), multi in any::<bool>()) {
        let dir = if directed { Directedness::Directed } else { Directedness::Undirected };
        let policy = if multi { EdgePolicy::Multi } else { EdgePolicy::Simple };
        let (g, _) = Graph::build_with(&list, dir, policy).unwrap();
        prop_assert!(g.check_invariants().is_ok());
        let (again, report) = Graph::build_with(&g.to_edge_list(), dir, policy).unwrap();
        prop_assert_eq!(report.duplicates_removed, 0);
        prop_assert_eq!(again.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn text_format_round_trips(list in edge_lists(40, 120), directed in any::<bool>(), multi in any::<bool>()) {
        let dir = if directed { Directedness::Directed } else { Directedness::Undirected };
        let policy = if multi { EdgePolicy::Multi } else { EdgePolicy::Simple };
        let (g, _) = Graph::build_with(&list, dir, policy).unwrap();
        let parsed = parse_edge_list(&format_edge_list(&g)).unwrap();
        prop_assert_eq!(parsed.declared, Some((dir, policy)));
        let (back, _) = Graph::build_with(&parsed, dir, policy).unwrap();
        prop_assert_eq!(back.node_count(), g.node_count());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn transport_step_conserves_mass(list in edge_lists(30, 90), weighted in any::<bool>(), lazy in 0.0..0.9f64) {
        let g = largest_component(&undirected(&list)).graph;
        prop_assume!(g.node_count() >= 2);
        let model = if weighted { Model::WeightedPartition } else { Model::EquiPartition };
        let spec = TransportSpec { lazy_factor: lazy, ..TransportSpec::new(model) };
        let mut x = MassVector::uniform(g.node_count());
        for _ in 0..5 {
            let out = step(&g, &x, &spec).unwrap();
            prop_assert_eq!(out.dropped, 0.0);
            prop_assert!(out.mass.values().iter().all(|&v| v >= 0.0));
            prop_assert!((out.mass.total() - 1.0).abs() < 1e-12);
            x = out.mass;
        }
    }

    #[test]
    fn directed_step_never_creates_mass(list in edge_lists(30, 90)) {
        let (g, _) = Graph::build(&list, Directedness::Directed).unwrap();
        let x = MassVector::uniform(g.node_count());
        let out = step(&g, &x, &TransportSpec::new(Model::EquiPartition)).unwrap();
        prop_assert!(out.mass.values().iter().all(|&v| v >= 0.0));
        prop_assert!((out.mass.total() + out.dropped - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_histogram_is_symmetric(list in edge_lists(40, 150), multi in any::<bool>()) {
        let policy = if multi { EdgePolicy::Multi } else { EdgePolicy::Simple };
        let (g, _) = Graph::build_with(&list, Directedness::Undirected, policy).unwrap();
        let h = joint_histogram(&g).unwrap();
        prop_assert!(h.detailed_balance_holds());
        let c = h.classes().len();
        for a in 0..c {
            for b in 0..c {
                prop_assert_eq!(h.count(a, b), h.count(b, a));
            }
        }
    }

    #[test]
    fn prediction_is_a_fixed_point(list in edge_lists(40, 150), weighted in any::<bool>()) {
        let g = undirected(&list);
        let h = joint_histogram(&g).unwrap();
        let w = if weighted { Weighting::Linear } else { Weighting::Unit };
        let p = predict(&h, w);
        let q = netdiff::meanfield::annealed_transition(&h, w);
        let next = q.apply(&p.r);
        for (a, b) in next.iter().zip(&p.r) {
            prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
        }
        let total: f64 = p.r.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn binning_partitions_the_samples(degrees in prop::collection::vec(0usize..5000, 1..300)) {
        let values: Vec<f64> = degrees.iter().map(|&k| k as f64).collect();
        let curve = binned_by_degree(&degrees, &values, 2.0).unwrap();
        let positive = degrees.iter().filter(|&&k| k > 0).count();
        prop_assert_eq!(curve.total_count(), positive);
        for w in curve.bins.windows(2) {
            prop_assert!(w[0].upper <= w[1].lower + 1e-9);
        }
        for b in &curve.bins {
            prop_assert!(b.mean >= b.lower - 1e-9 && b.mean < b.upper + 1e-9);
        }
    }

    #[test]
    fn fitted_slope_is_scale_invariant(exponent in -2.0..3.0f64, scale in 1e-3..1e3f64) {
        let points: Vec<(f64, f64)> = (0..12).map(|i| {
            let k = 2f64.powi(i);
            (k, k.powf(exponent))
        }).collect();
        let scaled: Vec<(f64, f64)> = points.iter().map(|&(k, y)| (k, scale * y)).collect();
        let a = fit_powerlaw(&BinnedCurve::from_points(2.0, &points), 1.0).unwrap();
        let b = fit_powerlaw(&BinnedCurve::from_points(2.0, &scaled), 1.0).unwrap();
        prop_assert!((a.exponent - exponent).abs() < 1e-9);
        prop_assert!((a.exponent - b.exponent).abs() < 1e-9);
        prop_assert!((b.intercept - a.intercept - scale.ln()).abs() < 1e-8);
    }

    #[test]
    fn ccdf_is_monotone(degrees in prop::collection::vec(0usize..200, 1..300)) {
        let c = ccdf(&degrees);
        let mut last = f64::INFINITY;
        for (&k, &p) in &c {
            prop_assert!(p <= last && p > 0.0 && p <= 1.0);
            let expected = degrees.iter().filter(|&&d| d >= k).count() as f64 / degrees.len() as f64;
            prop_assert!((p - expected).abs() < 1e-12);
            last = p;
        }
    }
}
