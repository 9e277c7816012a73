use designwalk::design::caratheodory_reduce_observed;
use designwalk::{
    build_moment_system, decompose, generate, iterate_walk, load_edge_list, make_test_function, quadrature,
    solve_design, spectral_distances, verify_design, DesignMethod, Family, Graph, OperatorKind, OrderingPolicy,
    SpectralBasis, TestFunction,
};
use proptest::prelude::*;

fn arb_regular() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (3usize..24).prop_map(|n| generate(&Family::Cycle { n }).unwrap()),
        (2usize..7).prop_map(|m| generate(&Family::CompleteBipartite { m }).unwrap()),
        (2usize..5).prop_map(|dim| generate(&Family::Hypercube { dim }).unwrap()),
        Just(generate(&Family::Petersen).unwrap()),
        (3usize..12, 0u64..1000).prop_map(|(half, seed)| {
            let n = 2 * half;
            generate(&Family::RandomRegular { n, degree: 3, seed }).unwrap()
        }),
        (5usize..20, 0u64..1000).prop_map(|(n, seed)| {
            generate(&Family::RandomRegular { n, degree: 4, seed }).unwrap()
        }),
    ]
}

/// Connected graphs with arbitrary degrees: a random tree plus chords.
fn arb_connected() -> impl Strategy<Value = Graph> {
    (3usize..25)
        .prop_flat_map(|n| {
            let parents = (1..n).map(|v| 0..v).collect::<Vec<_>>();
            (Just(n), parents, prop::collection::vec((0..n, 0..n), 0..n))
        })
        .prop_map(|(n, parents, chords)| {
            let mut edges: std::collections::BTreeSet<(usize, usize)> =
                parents.into_iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
            edges.extend(chords.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))));
            Graph::from_edges(n, edges).unwrap()
        })
}

fn probability(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter_map("zero mass", |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-3).then(|| w.iter().map(|x| x / total).collect())
    })
}

fn walk(g: &Graph) -> SpectralBasis {
    decompose(g, OperatorKind::WalkMatrix, OrderingPolicy::AbsDesc).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walk_preserves_mass_and_symmetry(
        (g, mu) in arb_regular().prop_flat_map(|g| { let n = g.n(); (Just(g), probability(n)) }),
        x in prop::collection::vec(-1.0f64..1.0, 64),
    ) {
        let n = g.n();
        let trace = iterate_walk(&g, &mu, 5).unwrap();
        prop_assert!(trace.distances.iter().all(|d| d.is_finite() && *d >= 0.0));
        let next = g.walk_matrix_apply(&mu).unwrap();
        prop_assert!((next.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        // <x, Py> = <Px, y>
        let (x, y) = (&x[..n], &mu);
        let lhs: f64 = x.iter().zip(&next).map(|(a, b)| a * b).sum();
        let px = g.walk_matrix_apply(x).unwrap();
        let rhs: f64 = px.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn parseval_and_orthonormality(
        (g, x) in arb_regular().prop_flat_map(|g| { let n = g.n(); (Just(g), prop::collection::vec(-5.0f64..5.0, n)) }),
    ) {
        let basis = walk(&g);
        prop_assert!(basis.orthonormality_error() <= 1e-10);
        prop_assert!(basis.residual() <= 1e-10);
        let c = basis.coefficients(&x).unwrap();
        let lhs: f64 = x.iter().map(|v| v * v).sum();
        let rhs: f64 = c.iter().map(|v| v * v).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.max(1.0));
        let mags: Vec<f64> = basis.eigenvalues().iter().map(|l| l.abs()).collect();
        prop_assert!(mags.windows(2).all(|w| w[0] >= w[1] - 1e-9));
    }

    #[test]
    fn walk_evaluators_agree(
        (g, mu) in arb_regular().prop_flat_map(|g| { let n = g.n(); (Just(g), probability(n)) }),
    ) {
        let basis = walk(&g);
        let trace = iterate_walk(&g, &mu, 50).unwrap();
        let spectral = spectral_distances(&basis, &mu, 50).unwrap();
        for (a, b) in trace.distances.iter().zip(&spectral) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn reduction_conserves_moments(g in arb_regular(), ell_frac in 0.0f64..1.0) {
        let basis = walk(&g);
        let n = g.n();
        let ell = 1 + ((n - 2) as f64 * ell_frac) as usize;
        let system = build_moment_system(&basis, ell).unwrap();
        let mut supports = vec![n];
        let mut worst = 0.0_f64;
        let w = caratheodory_reduce_observed(&system, basis.eigenvector(1), |w| {
            worst = worst.max(system.residual(w));
            supports.push(w.iter().filter(|&&x| x > 0.0).count());
        }).unwrap();
        prop_assert!(worst <= 1e-9, "residual {worst:e}");
        prop_assert!(supports.windows(2).all(|s| s[1] < s[0]), "{supports:?}");
        prop_assert!(w.iter().filter(|&&x| x > 0.0).count() <= ell);
        prop_assert!(w.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn designs_verify_and_bound_quadrature(g in arb_regular(), ell_frac in 0.0f64..1.0, seed in 0u64..10_000) {
        let basis = walk(&g);
        let n = g.n();
        let ell = 1 + ((n - 2) as f64 * ell_frac) as usize;
        let m = solve_design(&basis, ell, &DesignMethod::ReduceUniform).unwrap();
        prop_assert!(verify_design(&basis, &m, 1e-9).unwrap().passed);
        let f = make_test_function(&basis, &TestFunction::Random { seed }).unwrap();
        let r = quadrature(&basis, &m, &f, 1e-9).unwrap();
        prop_assert!(r.within_bound, "{r:?}");
        prop_assert!(r.error <= r.cauchy_schwarz_bound + 1e-9);
        prop_assert!(r.identity_ok, "{r:?}");
        let low = make_test_function(&basis, &TestFunction::LowPass { band: ell, seed }).unwrap();
        prop_assert!(quadrature(&basis, &m, &low, 1e-9).unwrap().error <= 1e-9);
    }

    #[test]
    fn custom_order_keeps_eigenvalue_multiset(g in arb_regular(), keys in prop::collection::vec(any::<u32>(), 64)) {
        let basis = walk(&g);
        let n = g.n();
        let mut order: Vec<usize> = (2..=n).collect();
        order.sort_by_key(|&p| keys[p - 2]);
        let custom = decompose(&g, OperatorKind::WalkMatrix, OrderingPolicy::Custom(order.clone())).unwrap();
        for (new_pos, &old_pos) in order.iter().enumerate() {
            prop_assert_eq!(custom.eigenvalue(new_pos + 2), basis.eigenvalue(old_pos));
            prop_assert_eq!(custom.eigenvector(new_pos + 2), basis.eigenvector(old_pos));
        }
        let ell = n / 2;
        let m = solve_design(&custom, ell, &DesignMethod::ReduceUniform).unwrap();
        prop_assert!(m.support.len() <= ell);
        prop_assert!(verify_design(&custom, &m, 1e-9).unwrap().passed);
    }

    #[test]
    fn edge_list_round_trips(g in arb_regular()) {
        prop_assert_eq!(load_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn laplacian_pipeline_on_irregular_graphs(g in arb_connected(), ell_frac in 0.0f64..1.0, seed in 0u64..1000) {
        let basis = decompose(&g, OperatorKind::Laplacian, OrderingPolicy::AbsDesc).unwrap();
        prop_assert!(basis.residual() <= 1e-10);
        prop_assert!(basis.eigenvalue(1).abs() <= 1e-9);
        prop_assert!(basis.eigenvalues().windows(2).all(|w| w[0] <= w[1] + 1e-9));
        let n = g.n();
        let ell = 1 + ((n - 2) as f64 * ell_frac) as usize;
        let m = solve_design(&basis, ell, &DesignMethod::ReduceUniform).unwrap();
        prop_assert!(verify_design(&basis, &m, 1e-9).unwrap().passed);
        let f = make_test_function(&basis, &TestFunction::Random { seed }).unwrap();
        prop_assert!(quadrature(&basis, &m, &f, 1e-9).unwrap().within_bound);
    }
}
