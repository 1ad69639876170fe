//! Randomized invariants of the algebra, filtration and gauge layers.

mod common;

use common::*;
use dskit::algebra::{partitions_of, LaurentMatrix, Matrix, OrbitSpec, Partition, Scalar};
use dskit::formal::{gauge_transform, regsing_normalize, series_inverse, StandardParahoric};
use dskit::fuchsian::build_cb_data;
use proptest::prelude::*;

fn partition_strategy(max: usize) -> impl Strategy<Value = Partition> {
    (1..=max).prop_flat_map(|m| {
        let all = partitions_of(m);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn orbit_strategy(max_n: usize) -> impl Strategy<Value = OrbitSpec> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| random_orbit(&mut rng(seed), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution_preserving_weight(p in partition_strategy(12)) {
        prop_assert_eq!(p.dual().dual(), p.clone());
        prop_assert_eq!(p.dual().weight(), p.weight());
        prop_assert_eq!(p.dual().num_parts(), p.largest());
    }

    #[test]
    fn minimal_partition_with_bounded_parts(m in 1usize..15, r in 1usize..8) {
        let g = Partition::min_with_at_most_parts(r, m).unwrap();
        prop_assert!(g.num_parts() <= r);
        prop_assert_eq!(g.weight(), m);
        for p in partitions_of(m) {
            if p.num_parts() <= r {
                prop_assert!(g.dominance_leq(&p).unwrap(), "{} not below {}", g, p);
            }
        }
    }

    #[test]
    fn dominance_rejects_weight_mismatch(a in partition_strategy(8), b in partition_strategy(8)) {
        prop_assert_eq!(a.dominance_leq(&b).is_err(), a.weight() != b.weight());
    }

    #[test]
    fn orbit_dim_matches_commutant(o in orbit_strategy(5)) {
        prop_assert_eq!(o.dim(), orbit_dim_by_commutant(&o));
        prop_assert_eq!(o.dim() % 2, 0);
    }

    #[test]
    fn rank_after_factors_matches_matrix_rank(o in orbit_strategy(5), seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_invertible(&mut r, o.n());
        let c = &(&p * &o.jordan_matrix()) * &p.inverse().unwrap();
        let seq = o.default_factor_sequence();
        let mut prod = Matrix::identity(o.n());
        prop_assert_eq!(o.rank_after_factors(&seq, 0).unwrap(), o.n());
        for (j, x) in seq.iter().enumerate() {
            prod = &prod * &(&c - &Matrix::scalar(o.n(), x));
            prop_assert_eq!(o.rank_after_factors(&seq, j + 1).unwrap(), prod.rank());
        }
        prop_assert!(prod.is_zero());
    }

    #[test]
    fn jordan_matrix_lies_in_its_orbit(o in orbit_strategy(5)) {
        prop_assert!(matrix_in_orbit(&o.jordan_matrix(), &o));
        prop_assert_eq!(o.jordan_matrix().trace(), o.trace());
    }

    #[test]
    fn star_data_pairs_to_minus_trace(seed in any::<u64>(), n in 1usize..4, k in 1usize..5) {
        let mut r = rng(seed);
        let orbits: Vec<OrbitSpec> = (0..k).map(|_| random_orbit(&mut r, n)).collect();
        let data = build_cb_data(&orbits, None).unwrap();
        let dot: Scalar = data.alpha.iter().zip(&data.lambda).map(|(a, l)| l.scale_int(*a)).sum();
        let trace: Scalar = orbits.iter().map(|o| o.trace()).sum();
        prop_assert_eq!(dot, -trace);
        prop_assert_eq!(data.alpha[0], n as i64);
        // arm lengths are minimal polynomial degree minus one
        let arms: usize = orbits.iter().map(|o| o.min_poly_degree() - 1).sum();
        prop_assert_eq!(data.quiver.num_vertices(), 1 + arms);
    }

    #[test]
    fn filtration_is_periodic_and_additive(
        n in 1usize..7, mask in any::<u8>(), a in 0usize..6, b in 0usize..6, c in 0usize..6, k in -3i64..3, l in -3i64..3
    ) {
        let (a, b, c) = (a % n, b % n, c % n);
        let ks: Vec<usize> = (0..n).filter(|&j| j == 0 || mask & (1 << j) != 0).collect();
        let p = StandardParahoric::new(n, ks).unwrap();
        let e = p.period() as i64;
        prop_assert_eq!(p.filtration_degree(a, b, k + 1), p.filtration_degree(a, b, k) + e);
        prop_assert_eq!(
            p.filtration_degree(a, c, k + l),
            p.filtration_degree(a, b, k) + p.filtration_degree(b, c, l)
        );
        prop_assert_eq!(p.filtration_degree(a, b, k), p.filtration_degree_by_definition(a, b, k));
    }

    #[test]
    fn normalization_satisfies_gauge_identity(seed in any::<u64>(), n in 1usize..4, order in 1i64..6) {
        let mut r = rng(seed);
        let b0 = random_nonresonant_matrix(&mut r, n);
        let mut terms = vec![(0, b0.clone())];
        for k in 1..order {
            terms.push((k, random_small_matrix(&mut r, n, 3)));
        }
        let m = LaurentMatrix::from_terms(n, terms, Some(order)).unwrap();
        let g = regsing_normalize(&m, order).unwrap();
        prop_assert!(gauge_defect(&g, &m, &b0, order).is_known_zero());
        let via_inverse = gauge_transform(&g, &m, order).unwrap();
        prop_assert!(via_inverse.agrees_below(&LaurentMatrix::constant(b0), order));
    }

    #[test]
    fn series_inverse_is_two_sided(seed in any::<u64>(), n in 1usize..4, order in 1i64..6) {
        let mut r = rng(seed);
        let mut terms = vec![(0, random_invertible(&mut r, n))];
        for k in 1..order {
            terms.push((k, random_small_matrix(&mut r, n, 3)));
        }
        let g = LaurentMatrix::from_terms(n, terms, Some(order)).unwrap();
        let h = series_inverse(&g, order).unwrap();
        let id = LaurentMatrix::identity(n);
        prop_assert!(g.mul(&h).agrees_below(&id, order));
        prop_assert!(h.mul(&g).agrees_below(&id, order));
    }

    #[test]
    fn scalar_text_and_json_round_trip(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20) {
        let x = gauss((a, b), (c, d));
        let text = x.to_string();
        prop_assert_eq!(text.parse::<Scalar>().unwrap(), x.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&json).unwrap(), x);
    }
}

#[test]
fn resonant_leading_term_is_rejected() {
    let m = LaurentMatrix::constant(Matrix::diagonal(&[s(0), s(1)])).with_trunc(Some(3));
    assert!(matches!(
        regsing_normalize(&m, 3),
        Err(dskit::DsError::Resonant(_, _))
    ));
}
