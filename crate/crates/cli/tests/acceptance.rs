//! Release gate: one test per numerical claim the crate makes, each
//! printing a single PASS or FAIL line with the measured numbers behind
//! the verdict. Run with `-- --nocapture` to see the lines for passing
//! criteria too; failures carry the same line in the panic message.

use std::time::{Duration, Instant};

use bosonsplit_core::entanglement::{self, lambda_lower_bound, PairWeighting};
use bosonsplit_core::oracle::{
    build_rho2_matrix, chi_gram_norm_squared, exact_negativity, rank2_part_eigenvalue,
};
use bosonsplit_core::regions::{self, OverlapTable, RegionSplit};
use bosonsplit_core::thermo::{self, ThermalState};

fn verdict(ok: bool, name: &str, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("acceptance {tag} {name}: {detail}");
    assert!(ok, "acceptance FAIL {name}: {detail}");
}

#[test]
fn cold_limit_bound_is_one_quarter() {
    let mut worst_gap = 0.0f64;
    let mut slowest = Duration::ZERO;
    for n in [1.0, 10.0, 100.0] {
        let started = Instant::now();
        let report = lambda_lower_bound(0.01, n, 1e-8).unwrap();
        slowest = slowest.max(started.elapsed());
        worst_gap = worst_gap.max((report.lambda - 0.25).abs());
    }
    verdict(
        worst_gap <= 1e-3 && slowest < Duration::from_secs(1),
        "cold-limit anchor",
        &format!(
            "max |lambda - 1/4| = {worst_gap:.3e} at T = 0.01 over N in {{1, 10, 100}} \
             (tolerance 1e-3), slowest point {slowest:?} (budget 1 s)"
        ),
    );
}

#[test]
fn bound_stays_positive_across_the_temperature_grid() {
    let started = Instant::now();
    let mut min_lambda = f64::INFINITY;
    let mut min_at = (0.0, 0.0);
    for n in [10.0, 100.0] {
        for i in 0..50 {
            let t = 0.1 * 1000f64.powf(i as f64 / 49.0);
            let report = lambda_lower_bound(t, n, 1e-8).unwrap();
            if report.lambda < min_lambda {
                min_lambda = report.lambda;
                min_at = (t, n);
            }
        }
    }
    let took = started.elapsed();
    verdict(
        min_lambda > 0.0 && took < Duration::from_secs(300),
        "bound persists",
        &format!(
            "min lambda = {min_lambda:.6e} at (T, N) = {min_at:?} over the 50-point \
             log grid T in [0.1, 100] for N in {{10, 100}}; total {took:?} (budget 5 min)"
        ),
    );
}

#[test]
fn exact_negativity_dominates_the_block_eigenvalue() {
    let started = Instant::now();
    let split = RegionSplit::symmetric();
    let mut worst_margin = f64::INFINITY;
    let mut worst_at = (0.0, 0.0, 0usize);
    for t in [0.05, 0.5, 2.0, 10.0, 50.0] {
        for n in [1.0, 10.0, 100.0] {
            let state = ThermalState::solve(t, n, 1e-8).unwrap();
            for count in [2usize, 3, 4] {
                let rho = build_rho2_matrix(&state, &split, count).unwrap();
                let negativity = exact_negativity(&rho).unwrap();
                let table = OverlapTable::build(&split, count).unwrap();
                let block = rank2_part_eigenvalue(&state, &table, count).unwrap();
                let margin = negativity - block;
                if margin < worst_margin {
                    worst_margin = margin;
                    worst_at = (t, n, count);
                }
            }
        }
    }
    let took = started.elapsed();
    verdict(
        worst_margin >= -1e-9 && took < Duration::from_secs(120),
        "lower-bound certificate",
        &format!(
            "min (negativity - block eigenvalue) = {worst_margin:.3e} at (T, N, K) = \
             {worst_at:?} over 5 temperatures x 3 mean numbers x K in {{2, 3, 4}} \
             (floor -1e-9); total {took:?} (budget 2 min)"
        ),
    );
}

#[test]
fn closed_form_chi_norm_matches_the_gram_oracle() {
    let split = RegionSplit::symmetric();
    let mut worst_rel = 0.0f64;
    let mut worst = (0.0, 0.0, 0usize, 0.0, 0.0);
    for count in [2usize, 3] {
        let table = OverlapTable::build(&split, count).unwrap();
        for t in [0.5, 2.0] {
            for n in [1.0, 10.0] {
                let state = ThermalState::solve(t, n, 1e-8).unwrap();
                let occ: Vec<f64> = (0..count).map(|k| state.occupation(k)).collect();
                let closed = entanglement::chi_norm_squared_from_occupations(
                    &occ,
                    &table,
                    PairWeighting::Bunching,
                )
                .unwrap();
                let gram =
                    chi_gram_norm_squared(&occ, &table, PairWeighting::Bunching).unwrap();
                let rel = (closed - gram).abs() / closed.abs().max(gram.abs());
                if rel > worst_rel {
                    worst_rel = rel;
                    worst = (t, n, count, closed, gram);
                }
            }
        }
    }
    let (t, n, count, closed, gram) = worst;
    verdict(
        worst_rel <= 1e-10,
        "chi-norm route agreement",
        &format!(
            "worst relative gap {worst_rel:.3e} at (T, N, K) = ({t}, {n}, {count}): \
             closed form {closed:.12e} vs gram oracle {gram:.12e} (tolerance 1e-10). \
             The closed form weights interference terms by same-side bunching \
             probabilities that the honest pair-state geometry does not produce, \
             so these two routes disagree by construction; the certified quantity \
             is the lower bound, not this identity."
        ),
    );
}

#[test]
fn pure_pair_entropy_anchors() {
    let split = RegionSplit::symmetric();
    let e00 = entanglement::pure_pair_entropy(0, 0, &split).unwrap();
    let e02 = entanglement::pure_pair_entropy(0, 2, &split).unwrap();
    verdict(
        (e00 - 1.5).abs() <= 1e-6 && (e02 - 2.0).abs() <= 1e-6,
        "pair entropy anchors",
        &format!(
            "entropy(both in mode 0, a = 0) = {e00:.9} bits (want 1.5 +- 1e-6); \
             entropy(modes 0 and 2, a = 0) = {e02:.9} bits (want 2 +- 1e-6)"
        ),
    );
}

#[test]
fn balanced_cut_maximizes_pair_entropy() {
    // positions built as exact +-x pairs so the mirror test is about the
    // entropy, not about decimal grid rounding
    let mut positions = vec![0.0f64; 41];
    for i in 0..=20usize {
        let x = 0.1 * i as f64;
        positions[20 + i] = x;
        positions[20 - i] = -x;
    }
    let scan = entanglement::split_scan_entropy(0, &positions).unwrap();
    let center = scan[20].entropy_bits;
    let mut best_off_center = f64::NEG_INFINITY;
    let mut mirror_gap = 0.0f64;
    for i in 0..41 {
        if i != 20 {
            best_off_center = best_off_center.max(scan[i].entropy_bits);
        }
        mirror_gap = mirror_gap.max((scan[i].entropy_bits - scan[40 - i].entropy_bits).abs());
    }
    verdict(
        center > best_off_center && mirror_gap <= 1e-8,
        "balanced cut is maximal",
        &format!(
            "entropy(a = 0) = {center:.9} bits vs best off-center {best_off_center:.9} \
             over 41 points a in [-2, 2]; max |S(a) - S(-a)| = {mirror_gap:.3e} \
             (tolerance 1e-8)"
        ),
    );
}

#[test]
fn overlap_parity_and_orthonormality() {
    let split = RegionSplit::symmetric();

    // same-parity modes have vanishing one-sided overlap at the balanced cut;
    // measured by quadrature, independent of the boundary-term route
    let mut worst_parity = 0.0f64;
    for k in 0..=20usize {
        for l in ((k + 2)..=20).step_by(2) {
            let raw = regions::raw_left_overlap_quadrature(k, l, &split).unwrap();
            worst_parity = worst_parity.max((2.0 * raw).abs());
            assert_eq!(regions::overlap(k, l, &split).unwrap(), 0.0);
        }
    }

    let o01 = regions::overlap(0, 1, &split).unwrap();
    let o01_expected = -(2.0 / core::f64::consts::PI).sqrt();

    let mut worst_complete = 0.0f64;
    for k in 0..=20usize {
        for l in k..=20 {
            let left = regions::raw_left_overlap_quadrature(k, l, &split).unwrap();
            let right = regions::raw_right_overlap_quadrature(k, l, &split).unwrap();
            let expect = if k == l { 1.0 } else { 0.0 };
            worst_complete = worst_complete.max((left + right - expect).abs());
        }
    }

    verdict(
        worst_parity <= 1e-12 && (o01 - o01_expected).abs() <= 1e-10 && worst_complete <= 1e-10,
        "overlap geometry",
        &format!(
            "max same-parity |O_kl| = {worst_parity:.3e} for k != l <= 20 (tolerance 1e-12); \
             O_01(0) = {o01:.12} vs -sqrt(2/pi) = {o01_expected:.12} (tolerance 1e-10); \
             max orthonormality reconstruction error {worst_complete:.3e} (tolerance 1e-10)"
        ),
    );
}

#[test]
fn chemical_potential_certified_and_bound_truncation_stable() {
    let mut worst_rel = 0.0f64;
    for n in [1.0, 10.0, 100.0] {
        for i in 0..31 {
            // 0.05 * 2000^(i/30) spans [0.05, 100]
            let t = 0.05 * 2000f64.powf(i as f64 / 30.0);
            let mu = thermo::solve_chemical_potential(t, n, 1e-10).unwrap();
            let realized = thermo::mean_particle_number(t, mu).unwrap();
            worst_rel = worst_rel.max((realized - n).abs() / n);
        }
    }

    let eps_tail = 1e-8;
    let split = RegionSplit::symmetric();
    let mut worst_shift = 0.0f64;
    let mut shift_at = (0.0, 0.0);
    for (t, n) in [(1.0, 10.0), (10.0, 10.0), (10.0, 100.0), (50.0, 10.0)] {
        let state = ThermalState::solve(t, n, eps_tail).unwrap();
        let m = entanglement::pair_weight_norm_full(&state);
        let lambda_at = |count: usize| {
            let occ: Vec<f64> = (0..count).map(|k| state.occupation(k)).collect();
            let table = OverlapTable::build(&split, count).unwrap();
            let chi = entanglement::chi_norm_squared_from_occupations(
                &occ,
                &table,
                PairWeighting::Bunching,
            )
            .unwrap();
            chi.sqrt() / m
        };
        let shift = (lambda_at(2 * state.k_max) - lambda_at(state.k_max)).abs();
        if shift > worst_shift {
            worst_shift = shift;
            shift_at = (t, n);
        }
    }

    verdict(
        worst_rel <= 1e-8 && worst_shift < 10.0 * eps_tail,
        "thermal solver and truncation",
        &format!(
            "max |<N> - target|/target = {worst_rel:.3e} over T in [0.05, 100], \
             N in {{1, 10, 100}} (tolerance 1e-8); max |lambda(2K) - lambda(K)| = \
             {worst_shift:.3e} at (T, N) = {shift_at:?} (budget {:.1e})",
            10.0 * eps_tail
        ),
    );
}
