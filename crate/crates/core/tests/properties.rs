use ghz_core::games::{
    classical_value, play_quantum, pr_box, ContextDistribution, GameSpec, QuantumStrategy,
};
use ghz_core::linalg::{inner, nullity, rank, tensor, Matrix, Vector, C64, EPS};
use ghz_core::logic::{enumerate_states, is_separating, Hypergraph, TwoValuedState};
use ghz_core::quantum::{
    born_probabilities, expand, general_state, product_basis, reconstruct, sample_outcome,
    seeded_rng, GhzBasis,
};
use ghz_core::{Context, Sign};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(complex(), dim).prop_map(Vector::new)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(complex(), rows * cols)
        .prop_map(move |data| Matrix::from_vec(rows, cols, data))
}

/// Nonzero coefficients normalised to a unit state.
fn unit_alpha() -> impl Strategy<Value = [C64; 8]> {
    prop::array::uniform8(complex())
        .prop_filter("nonzero", |a| a.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|a| {
            let n = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            a.map(|z| z / n)
        })
}

fn context() -> impl Strategy<Value = Context> {
    prop::sample::select(Context::ghz().to_vec())
}

/// Small random hypergraph: every atom is put into at least one context.
fn hypergraph() -> impl Strategy<Value = Hypergraph> {
    (2usize..8).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(0..n, 1..=n.min(4)), 1..6).prop_map(
            move |mut sets| {
                for a in 0..n {
                    if !sets.iter().any(|s| s.contains(&a)) {
                        let k = a % sets.len();
                        sets[k].insert(a);
                    }
                }
                let atoms = (0..n).map(|a| format!("a{a}")).collect();
                let contexts = sets.into_iter().map(|s| s.into_iter().collect()).collect();
                Hypergraph::new(atoms, contexts).unwrap()
            },
        )
    })
}

fn brute_force_states(h: &Hypergraph) -> Vec<Vec<bool>> {
    let n = h.atom_count();
    (0..1u32 << n)
        .map(|bits| (0..n).map(|a| bits >> a & 1 == 1).collect::<Vec<bool>>())
        .filter(|v| h.contexts().iter().all(|c| c.iter().filter(|&&a| v[a]).count() == 1))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_associative(a in matrix(2, 2), b in matrix(2, 2), c in matrix(2, 2)) {
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        prop_assert!(left.approx_eq(&right, EPS));
    }

    #[test]
    fn inner_is_conjugate_symmetric(a in vector(8), b in vector(8)) {
        let ab = inner(&a, &b).unwrap();
        let ba = inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= EPS);
    }

    #[test]
    fn rank_nullity(m in matrix(4, 8), zero_rows in 0usize..4) {
        // zero out some rows so the rank actually varies
        let mut data = m.entries().to_vec();
        for v in data.iter_mut().take(zero_rows * 8) {
            *v = C64::new(0.0, 0.0);
        }
        let m = Matrix::from_vec(4, 8, data);
        prop_assert_eq!(rank(&m, 1e-9) + nullity(&m, 1e-9), 8);
        prop_assert!(rank(&m, 1e-9) <= 4 - zero_rows);
    }

    #[test]
    fn expansion_roundtrips(alpha in unit_alpha(), ctx in context()) {
        let psi = general_state(&alpha);
        let pb = product_basis(&ctx);
        let back = reconstruct(&expand(&psi, &pb).unwrap(), &pb).unwrap();
        prop_assert!(back.approx_eq(&psi, 1e-9));
    }

    #[test]
    fn general_state_matches_superposition(alpha in unit_alpha()) {
        let basis = GhzBasis::standard();
        let closed = general_state(&alpha);
        for (i, a) in alpha.iter().enumerate() {
            let overlap = inner(basis.upsilon(i + 1), &closed).unwrap();
            prop_assert!((overlap - a).norm() <= 1e-9);
        }
    }

    #[test]
    fn born_probabilities_sum_to_one(alpha in unit_alpha(), ctx in context()) {
        let probs = born_probabilities(&general_state(&alpha), &product_basis(&ctx)).unwrap();
        let total: f64 = probs.iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        prop_assert!(probs.iter().all(|(_, p)| *p >= 0.0));
    }

    #[test]
    fn samples_land_in_the_support(alpha in unit_alpha(), ctx in context(), seed in any::<u64>()) {
        let psi = general_state(&alpha);
        let pb = product_basis(&ctx);
        let probs = born_probabilities(&psi, &pb).unwrap();
        let mut rng = seeded_rng(seed);
        for _ in 0..32 {
            let o = sample_outcome(&psi, &pb, &mut rng).unwrap();
            let p = probs.iter().find(|(q, _)| *q == o).unwrap().1;
            prop_assert!(p > 0.0);
        }
    }

    #[test]
    fn quantum_play_replays(alpha in unit_alpha(), seed in any::<u64>()) {
        let g = GameSpec::ghz();
        let s = QuantumStrategy::new(general_state(&alpha)).unwrap();
        let dist = ContextDistribution::uniform(4);
        let a = play_quantum(&g, &s, 200, &dist, &mut seeded_rng(seed)).unwrap();
        let b = play_quantum(&g, &s, 200, &dist, &mut seeded_rng(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn pr_box_law_holds(i1 in any::<bool>(), i2 in any::<bool>(), seed in any::<u64>()) {
        let (o1, o2) = pr_box(i1, i2, &mut seeded_rng(seed));
        prop_assert_eq!(o1 ^ o2, i1 && i2);
    }

    #[test]
    fn classical_value_tracks_target_parity(bits in 0u8..16) {
        let targets: Vec<Sign> = (0..4)
            .map(|k| if bits >> k & 1 == 0 { Sign::Plus } else { Sign::Minus })
            .collect();
        let g = GameSpec::three_party(&targets).unwrap();
        let value = classical_value(&g, &ContextDistribution::uniform(4)).unwrap().value;
        let expected = if bits.count_ones() % 2 == 0 { 1.0 } else { 0.75 };
        prop_assert_eq!(value, expected);
    }

    #[test]
    fn enumeration_agrees_with_brute_force(h in hypergraph()) {
        let found: Vec<Vec<bool>> = enumerate_states(&h, None)
            .iter()
            .map(|s: &TwoValuedState| s.values().to_vec())
            .collect();
        let mut expected = brute_force_states(&h);
        expected.sort_by_key(|v| v.iter().map(|&b| u8::from(b)).collect::<Vec<_>>());
        prop_assert_eq!(&found, &expected);
        for s in enumerate_states(&h, None) {
            prop_assert!(s.check(&h).is_ok());
        }
    }

    #[test]
    fn separating_matches_pairwise_definition(h in hypergraph()) {
        let states = enumerate_states(&h, None);
        let n = h.atom_count();
        let pairwise = !states.is_empty() && (0..n).all(|a| {
            (a + 1..n).all(|b| states.iter().any(|s| s.value(a) != s.value(b)))
        });
        prop_assert_eq!(is_separating(&h, &states), pairwise);
    }
}
