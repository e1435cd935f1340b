//! Randomized invariants across the thermal, region, and bound layers.

use bosonsplit_core::entanglement::{self, PairWeighting};
use bosonsplit_core::regions::{self, OverlapTable, RegionSplit};
use bosonsplit_core::thermo;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chemical_potential_residual_stays_certified(
        log_t in -3.0f64..4.6,
        n_target in 0.5f64..150.0,
    ) {
        let t = log_t.exp();
        let mu = thermo::solve_chemical_potential(t, n_target, 1e-10).unwrap();
        prop_assert!(mu < 0.0, "T={t} N={n_target}: mu {mu}");
        let realized = thermo::mean_particle_number(t, mu).unwrap();
        prop_assert!(
            (realized - n_target).abs() <= 1e-8 * n_target,
            "T={t} N={n_target}: realized {realized}"
        );
    }

    #[test]
    fn overlaps_bounded_and_same_side_probability_enhanced(
        a in -3.0f64..3.0,
        k in 0usize..9,
        l in 0usize..9,
    ) {
        let split = RegionSplit::new(a).unwrap();
        let o = regions::overlap(k, l, &split).unwrap();
        prop_assert!(o.abs() <= 1.0 + 1e-12, "O_{k}{l}({a}) = {o}");

        let b = regions::bunching_probabilities(k, l, &split).unwrap();
        let total = b.both_left + b.both_right + b.one_each;
        prop_assert!((total - 1.0).abs() <= 1e-12, "probabilities sum to {total}");
        prop_assert!(b.both_left >= -1e-15 && b.both_right >= -1e-15 && b.one_each >= -1e-13);

        if k != l {
            // bunching can only raise the same-side probabilities
            let pk = regions::left_probability(k, &split).unwrap();
            let pl = regions::left_probability(l, &split).unwrap();
            prop_assert!(b.both_left >= pk * pl - 1e-13);
            prop_assert!(b.both_right >= (1.0 - pk) * (1.0 - pl) - 1e-13);
        }
    }

    #[test]
    fn contracted_chi_norm_matches_literal_loops(
        occupations in prop::collection::vec(0.01f64..4.0, 1..7),
    ) {
        let table = OverlapTable::build(&RegionSplit::symmetric(), occupations.len()).unwrap();
        for weighting in [PairWeighting::Bunching, PairWeighting::Plain] {
            let fast =
                entanglement::chi_norm_squared_from_occupations(&occupations, &table, weighting)
                    .unwrap();
            let slow =
                entanglement::chi_norm_squared_direct(&occupations, &table, weighting).unwrap();
            prop_assert!(
                (fast - slow).abs() <= 1e-11 * slow.abs(),
                "{weighting:?}: contracted {fast} vs loops {slow}"
            );
        }
    }
}

proptest! {
    // quadrature-heavy cases, kept smaller
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pair_entropy_is_even_in_the_cut_position(
        a in 0.01f64..2.5,
        k in 0usize..4,
        l in 0usize..4,
    ) {
        let plus = entanglement::pure_pair_entropy(k, l, &RegionSplit::new(a).unwrap()).unwrap();
        let minus = entanglement::pure_pair_entropy(k, l, &RegionSplit::new(-a).unwrap()).unwrap();
        prop_assert!((plus - minus).abs() <= 1e-9, "k={k} l={l} a={a}: {plus} vs {minus}");
    }

    #[test]
    fn table_entries_agree_with_pointwise_evaluation(
        a in -2.0f64..2.0,
        count in 2usize..7,
    ) {
        let split = RegionSplit::new(a).unwrap();
        let table = OverlapTable::build(&split, count).unwrap();
        for k in 0..count {
            let p = regions::left_probability(k, &split).unwrap();
            prop_assert!((table.left_probability(k) - p).abs() <= 1e-12);
            for l in 0..count {
                let o = regions::overlap(k, l, &split).unwrap();
                prop_assert!(
                    (table.overlap(k, l) - o).abs() <= 1e-12,
                    "({k},{l}) at a={a}: {} vs {o}",
                    table.overlap(k, l)
                );
            }
        }
    }
}
