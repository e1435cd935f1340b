//! End-to-end certificate runs, gram spectral sanity at a truncation the
//! oracle itself never reaches, and a negative control: a corrupted overlap
//! table has to trip the lower-bound comparison rather than pass silently.

use bosonsplit_core::entanglement::PairWeighting;
use bosonsplit_core::linalg::{self, Mat};
use bosonsplit_core::oracle::{
    build_rho2_matrix, exact_negativity, rank2_routes, run_certificates, CertificateGrid,
};
use bosonsplit_core::regions::{OverlapTable, RegionSplit};
use bosonsplit_core::thermo::ThermalState;

#[test]
fn certificate_run_is_green_on_a_small_grid() {
    let grid = CertificateGrid {
        temperatures: &[0.5, 5.0],
        mean_numbers: &[1.0, 10.0],
        truncations: &[2, 3],
        eps_tail: 1e-8,
    };
    let report = run_certificates(&grid).unwrap();
    for check in &report.checks {
        assert!(
            check.passed,
            "{} at T={:?} N={:?} K={}: {} vs {} (tol {})",
            check.name, check.t, check.n_target, check.truncation,
            check.value, check.reference, check.tolerance
        );
    }
    assert!(report.certificates_passed);
    assert!(!report.block_comparisons.is_empty());
    for cmp in &report.block_comparisons {
        assert!(cmp.weight_norm > 0.0);
        assert!(cmp.block_eigenvalue > 0.0);
        assert!(cmp.gram_norm_bunching > 0.0);
    }
}

#[test]
fn gram_spectra_stay_inside_the_unit_interval() {
    // left gram and its right complement are both PSD, so every eigenvalue
    // lands in [0, 1]; checked well past the oracle's own mode limit
    let count = 30;
    for a in [-1.2, 0.0, 0.8] {
        let split = RegionSplit::new(a).unwrap();
        let table = OverlapTable::build(&split, count).unwrap();
        let gram = Mat::from_fn(count, count, |k, l| table.raw_overlap(k, l));
        let eig = linalg::symmetric_eigen(&gram).unwrap();
        let lo = eig.values[0];
        let hi = *eig.values.last().unwrap();
        assert!(lo >= -1e-12, "a={a}: min gram eigenvalue {lo}");
        assert!(hi <= 1.0 + 1e-12, "a={a}: max gram eigenvalue {hi}");
    }
}

#[test]
fn corrupted_overlap_table_trips_the_lower_bound_certificate() {
    let t = 10.0;
    let n_target = 10.0;
    let count = 3;
    let state = ThermalState::solve(t, n_target, 1e-8).unwrap();
    let split = RegionSplit::symmetric();

    let honest = exact_negativity(&build_rho2_matrix(&state, &split, count).unwrap()).unwrap();
    let honest_table = OverlapTable::build(&split, count).unwrap();
    let honest_routes = rank2_routes(&state, &honest_table, count, PairWeighting::Bunching).unwrap();
    assert!(
        honest >= honest_routes.from_spectrum - 1e-9,
        "honest table must satisfy the bound: negativity {honest} vs block {}",
        honest_routes.from_spectrum
    );

    // same residence probabilities, but overlaps inflated to 0.9 everywhere;
    // no PSD-respecting table could produce these numbers
    let overlap = Mat::from_fn(count, count, |i, j| if i == j { 1.0 } else { 0.9 });
    let corrupted = OverlapTable::from_parts(0.0, vec![0.5; count], overlap).unwrap();
    let routes = rank2_routes(&state, &corrupted, count, PairWeighting::Bunching).unwrap();
    assert!(
        routes.from_spectrum > honest + 1e-6,
        "corruption went unflagged: block {} vs exact negativity {honest}",
        routes.from_spectrum
    );
}
