use proptest::prelude::*;
use uniquant_core::classification::classify;
use uniquant_core::decomposition::decompose;
use uniquant_core::measure::{synth, Atom, DiscreteMeasure, Point};
use uniquant_core::quantization::{coupling_upper_bound, quantize};
use uniquant_core::transport::{coupling_cost, exact_wasserstein};

fn measure(dim: usize, max_atoms: usize) -> impl Strategy<Value = DiscreteMeasure> {
    prop::collection::vec((prop::collection::vec(-5.0..5.0f64, dim), 0.0..1.0f64), 1..=max_atoms)
        .prop_filter("needs positive mass", |atoms| atoms.iter().any(|a| a.1 > 1e-3))
        .prop_map(move |atoms| {
            let atoms = atoms.into_iter().map(|(x, w)| Atom::new(Point::new(x).unwrap(), w)).collect();
            DiscreteMeasure::new(dim, atoms).unwrap().normalized().unwrap()
        })
}

fn any_measure(max_atoms: usize) -> impl Strategy<Value = DiscreteMeasure> {
    (1usize..=3).prop_flat_map(move |d| measure(d, max_atoms))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decomposition_invariants(rho in any_measure(60), n in 1usize..=40) {
        let dec = decompose(&rho, n).unwrap();
        prop_assert_eq!(dec.pieces.len(), n);
        prop_assert!(dec.check(&rho).holds(), "{:?}", dec.check(&rho));
        let ks: Vec<usize> = dec.pieces.iter().map(|p| p.k).collect();
        prop_assert_eq!(ks, (1..=n).collect::<Vec<_>>());
    }

    #[test]
    fn decomposition_ignores_atom_order(rho in any_measure(30), n in 1usize..=12) {
        let mut reversed = rho.atoms().to_vec();
        reversed.reverse();
        let reversed = DiscreteMeasure::new(rho.dim(), reversed).unwrap();
        let a = decompose(&rho, n).unwrap();
        let b = decompose(&reversed, n).unwrap();
        for (x, y) in a.pieces.iter().zip(&b.pieces) {
            prop_assert_eq!(&x.cube, &y.cube);
        }
    }

    #[test]
    fn quantizer_sandwich(rho in any_measure(25), n in 1usize..=12, p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0])) {
        let q = quantize(&rho, n).unwrap();
        let w = exact_wasserstein(&q.empirical_measure(), &rho, p).unwrap().value;
        let coupling = coupling_cost(&q.decomposition, &q, p).unwrap();
        let upper = coupling_upper_bound(&q.decomposition, p).unwrap();
        let closed = q.certificates(p).unwrap().closed_form_bound;
        prop_assert!(w <= coupling + 1e-9, "{w} > {coupling}");
        prop_assert!(coupling <= upper + 1e-12, "{coupling} > {upper}");
        prop_assert!(upper <= closed + 1e-12, "{upper} > {closed}");
    }

    #[test]
    fn wasserstein_metric_axioms(
        (x, y, z) in (1usize..=2).prop_flat_map(|d| (measure(d, 6), measure(d, 6), measure(d, 6))),
        p in prop::sample::select(vec![1.0, 2.0, 3.0]),
    ) {
        let w = |a: &DiscreteMeasure, b: &DiscreteMeasure| exact_wasserstein(a, b, p).unwrap().value;
        prop_assert!(w(&x, &x) <= 1e-12);
        prop_assert!((w(&x, &y) - w(&y, &x)).abs() <= 1e-9);
        prop_assert!(w(&x, &z) <= w(&x, &y) + w(&y, &z) + 1e-7);
    }

    #[test]
    fn wasserstein_increases_with_order(
        (x, y) in (1usize..=3).prop_flat_map(|d| (measure(d, 8), measure(d, 8))),
    ) {
        let mut prev = 0.0;
        for p in [1.0, 1.5, 2.0, 4.0] {
            let v = exact_wasserstein(&x, &y, p).unwrap().value;
            prop_assert!(v >= prev - 1e-9, "p={p}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn plan_has_the_right_marginals(
        (x, y) in (1usize..=2).prop_flat_map(|d| (measure(d, 10), measure(d, 10))),
    ) {
        let w = exact_wasserstein(&x, &y, 2.0).unwrap();
        for (got, want) in w.plan.row_sums(x.len()).iter().zip(x.weights()) {
            prop_assert!((got - want).abs() < 1e-9);
        }
        for (got, want) in w.plan.column_sums(y.len()).iter().zip(y.weights()) {
            prop_assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn classes_are_balanced(
        dim in 1usize..=3,
        n in 1usize..=20,
        c in 1usize..=5,
        seed in any::<u64>(),
    ) {
        let spec = format!("sample:dist=gaussian,N={},d={dim},seed={seed}", n * c);
        let cloud = synth(&spec.parse().unwrap()).unwrap();
        let points: Vec<Point> = cloud.atoms().iter().map(|a| a.point.clone()).collect();
        let cls = classify(&points, n).unwrap();
        prop_assert!(cls.check(&points).unwrap().holds());
    }
}

/// Many equal small weights against a few large ones leave a rounding
/// residual once every sink is full.
#[test]
fn dense_grid_against_quantizer() {
    for m in [20, 50] {
        let rho = synth(&format!("grid:d=2,m={m},r=1").parse().unwrap()).unwrap();
        for n in 1..=6 {
            let q = quantize(&rho, n).unwrap();
            let mu = q.empirical_measure();
            let forward = exact_wasserstein(&mu, &rho, 1.0).unwrap();
            let backward = exact_wasserstein(&rho, &mu, 1.0).unwrap();
            assert!((forward.value - backward.value).abs() < 1e-12);
            assert!(forward.value <= coupling_cost(&q.decomposition, &q, 1.0).unwrap() + 1e-9);
        }
    }
}
