//! Grand-canonical thermodynamics of the ideal trapped Bose gas in natural
//! units (temperature in trap quanta, mode energies E_k = k with the zero
//! point dropped). The chemical potential is pinned by the mean particle
//! number; everything downstream consumes the resulting occupation list plus
//! certified bounds on what truncation throws away.

use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)] // used by no_std builds; std f64 methods shadow it otherwise
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub enum ThermoError {
    InvalidTemperature { t: f64 },
    InvalidChemicalPotential { mu: f64 },
    InvalidTargetNumber { n: f64 },
    InvalidTolerance { tol: f64 },
    SeriesNotConvergent { t: f64, mu: f64 },
    SolveStalled { residual: f64 },
    TruncationOverflow { k: usize },
}

impl fmt::Display for ThermoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThermoError::InvalidTemperature { t } => {
                write!(f, "temperature {t} must be finite and positive")
            }
            ThermoError::InvalidChemicalPotential { mu } => {
                write!(f, "chemical potential {mu} must be finite and negative")
            }
            ThermoError::InvalidTargetNumber { n } => {
                write!(f, "target particle number {n} must be finite and positive")
            }
            ThermoError::InvalidTolerance { tol } => {
                write!(f, "tolerance {tol} outside supported range")
            }
            ThermoError::SeriesNotConvergent { t, mu } => {
                write!(f, "occupation series did not settle at T={t}, mu={mu}")
            }
            ThermoError::SolveStalled { residual } => {
                write!(f, "chemical potential solve stalled with residual {residual:.3e}")
            }
            ThermoError::TruncationOverflow { k } => {
                write!(f, "no admissible truncation below {k} modes")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ThermoError {}

fn check_t(t: f64) -> Result<(), ThermoError> {
    if !t.is_finite() || t <= 0.0 {
        return Err(ThermoError::InvalidTemperature { t });
    }
    Ok(())
}

fn check_mu(mu: f64) -> Result<(), ThermoError> {
    if !mu.is_finite() || mu >= 0.0 {
        return Err(ThermoError::InvalidChemicalPotential { mu });
    }
    Ok(())
}

#[inline]
fn occupation_unchecked(k: f64, t: f64, mu: f64) -> f64 {
    // 1 / (e^{(k - mu)/T} - 1), stable for small exponents via expm1
    1.0 / ((k - mu) / t).exp_m1()
}

/// Bose-Einstein occupation of mode k.
pub fn bose_occupation(k: usize, t: f64, mu: f64) -> Result<f64, ThermoError> {
    check_t(t)?;
    check_mu(mu)?;
    Ok(occupation_unchecked(k as f64, t, mu))
}

/// Upper bound on the occupation tail sum_{k >= k_from} n_k. Bounding each
/// occupation by its Boltzmann factor gives a geometric series:
///
///   n_k <= e^{-(k - mu)/T} / (1 - e^{-(k_from - mu)/T})
///
/// (the denominator corrects 1/(e^x - 1) <= e^{-x}/(1 - e^{-x}) at the
/// smallest exponent), then the sum telescopes through 1/(1 - e^{-1/T}).
/// Conservative, closed form, and monotone decreasing in k_from.
pub fn occupation_tail_bound(k_from: usize, t: f64, mu: f64) -> Result<f64, ThermoError> {
    check_t(t)?;
    check_mu(mu)?;
    let x = (k_from as f64 - mu) / t;
    let boltz = (-x).exp();
    let geo = 1.0 - (-1.0 / t).exp();
    let head = 1.0 - boltz;
    if geo <= 0.0 || head <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(boltz / (geo * head))
}

const MAX_SERIES_TERMS: usize = 10_000_000;

/// Sum of n_k and of n_k^2 over the full spectrum, each converged to relative
/// accuracy near machine precision.
fn occupation_sums(t: f64, mu: f64) -> Result<(f64, f64), ThermoError> {
    let mut total = 0.0_f64;
    let mut total_sq = 0.0_f64;
    for k in 0..MAX_SERIES_TERMS {
        let n = occupation_unchecked(k as f64, t, mu);
        total += n;
        total_sq += n * n;
        if n < 1.0 {
            // once occupations drop below 1 the same geometric bound covers
            // both series; stop when it is negligible against either total
            let bound = occupation_tail_bound(k + 1, t, mu)?;
            if bound <= 1e-16 * total.min(total_sq) {
                return Ok((total, total_sq));
            }
        }
    }
    Err(ThermoError::SeriesNotConvergent { t, mu })
}

/// Mean total particle number at (T, mu), summed over the full spectrum.
pub fn mean_particle_number(t: f64, mu: f64) -> Result<f64, ThermoError> {
    check_t(t)?;
    check_mu(mu)?;
    occupation_sums(t, mu).map(|(n, _)| n)
}

/// Solve N(T, mu) = n_target for mu < 0.
///
/// The single-mode solution mu_1 = -T ln(1 + 1/N) already overshoots the
/// target once the rest of the spectrum is added, so [mu_1 - 50 T, mu_1]
/// brackets the root. Illinois-damped false position does the rest.
pub fn solve_chemical_potential(t: f64, n_target: f64, rel_tol: f64) -> Result<f64, ThermoError> {
    check_t(t)?;
    if !n_target.is_finite() || n_target <= 0.0 {
        return Err(ThermoError::InvalidTargetNumber { n: n_target });
    }
    if !(1e-14..1.0).contains(&rel_tol) {
        return Err(ThermoError::InvalidTolerance { tol: rel_tol });
    }

    let mu_single = -t * (1.0 / n_target).ln_1p();
    let mut hi = mu_single;
    let mut lo = mu_single - 50.0 * t;
    let residual = |mu: f64| -> Result<f64, ThermoError> {
        Ok(occupation_sums(t, mu)?.0 - n_target)
    };
    let mut f_hi = residual(hi)?;
    let mut f_lo = residual(lo)?;
    let tol = rel_tol * n_target;
    // accept endpoints before the sign guard: at low T the residual at mu_1
    // is pure rounding noise and may land on either side of zero
    if f_hi.abs() <= tol {
        return Ok(hi);
    }
    if f_lo.abs() <= tol {
        return Ok(lo);
    }
    if f_hi < 0.0 || f_lo > 0.0 {
        // cannot happen for a valid (t, n_target); defend against it anyway
        return Err(ThermoError::SolveStalled { residual: f_hi.abs().min(f_lo.abs()) });
    }

    let mut best = (hi, f_hi.abs());
    let mut side = 0_i8;
    for _ in 0..200 {
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !x.is_finite() || x <= lo || x >= hi {
            x = 0.5 * (lo + hi);
        }
        let fx = residual(x)?;
        if fx.abs() < best.1 {
            best = (x, fx.abs());
        }
        if fx.abs() <= tol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()) {
            break;
        }
    }
    if best.1 <= tol {
        Ok(best.0)
    } else {
        Err(ThermoError::SolveStalled { residual: best.1 })
    }
}

/// Smallest mode count K such that the certified occupation tail beyond K is
/// at most eps_tail * n_target.
pub fn choose_truncation(t: f64, mu: f64, n_target: f64, eps_tail: f64) -> Result<usize, ThermoError> {
    check_t(t)?;
    check_mu(mu)?;
    if !n_target.is_finite() || n_target <= 0.0 {
        return Err(ThermoError::InvalidTargetNumber { n: n_target });
    }
    if !(eps_tail > 0.0 && eps_tail < 1.0) {
        return Err(ThermoError::InvalidTolerance { tol: eps_tail });
    }
    let budget = eps_tail * n_target;
    let mut k = 1usize;
    while occupation_tail_bound(k, t, mu)? > budget {
        k += 1;
        if k > crate::hermite::MAX_MODE {
            return Err(ThermoError::TruncationOverflow { k });
        }
    }
    Ok(k)
}

/// A solved thermal operating point: chemical potential, retained occupation
/// list, and the certified tail left outside the truncation.
#[derive(Debug, Clone)]
pub struct ThermalState {
    pub t: f64,
    pub mu: f64,
    /// Full-series mean particle number actually realized at (t, mu).
    pub n_mean: f64,
    /// Modes 0..k_max-1 are retained.
    pub k_max: usize,
    pub occupations: Vec<f64>,
    /// Bound on the occupation sum beyond k_max.
    pub tail_bound: f64,
    occupation_sq_total: f64,
}

impl ThermalState {
    pub fn solve(t: f64, n_target: f64, eps_tail: f64) -> Result<Self, ThermoError> {
        let mu = solve_chemical_potential(t, n_target, 1e-10)?;
        let (n_mean, occupation_sq_total) = occupation_sums(t, mu)?;
        let k_max = choose_truncation(t, mu, n_target, eps_tail)?;
        let occupations = (0..k_max).map(|k| occupation_unchecked(k as f64, t, mu)).collect();
        let tail_bound = occupation_tail_bound(k_max, t, mu)?;
        Ok(ThermalState { t, mu, n_mean, k_max, occupations, tail_bound, occupation_sq_total })
    }

    /// Occupation of any mode, inside or outside the retained window.
    pub fn occupation(&self, k: usize) -> f64 {
        self.occupations
            .get(k)
            .copied()
            .unwrap_or_else(|| occupation_unchecked(k as f64, self.t, self.mu))
    }

    /// Full-series sum of squared occupations.
    pub fn occupation_sq_total(&self) -> f64 {
        self.occupation_sq_total
    }

    pub fn condensate_fraction(&self) -> f64 {
        self.occupations[0] / self.n_mean
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn occupation_pinned_value() {
        // 1/(e^{0.75} - 1) for k=1, T=2, mu=-0.5
        let n = bose_occupation(1, 2.0, -0.5).unwrap();
        assert_relative_eq!(n, 0.89525513440234351551, epsilon = 1e-15);
    }

    #[test]
    fn mean_number_matches_pinned_series() {
        // sum_k 1/(2 e^k - 1) at T=1, mu=-ln 2
        let mu = -(2.0_f64).ln();
        let n = mean_particle_number(1.0, mu).unwrap();
        assert_relative_eq!(n, 1.3380928639832559311, epsilon = 1e-14);
    }

    #[test]
    fn tail_bound_dominates_direct_tail() {
        let (t, mu) = (3.0, -0.2);
        for k_from in [1usize, 5, 20, 60] {
            let bound = occupation_tail_bound(k_from, t, mu).unwrap();
            let direct: f64 =
                (k_from..k_from + 4000).map(|k| occupation_unchecked(k as f64, t, mu)).sum();
            assert!(bound >= direct, "bound {bound} < direct {direct} at k={k_from}");
            assert!(bound < 2.5 * direct, "bound {bound} is uselessly loose vs {direct}");
        }
    }

    #[test]
    fn solver_hits_single_mode_closed_form_at_low_t() {
        // at T = 0.01 every excited mode is frozen out, so mu = -T ln(1 + 1/N)
        for n_target in [1.0, 10.0, 100.0] {
            let mu = solve_chemical_potential(0.01, n_target, 1e-12).unwrap();
            let expected = -0.01 * (1.0 / n_target).ln_1p();
            assert_relative_eq!(mu, expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn solved_number_round_trips() {
        for &(t, n) in &[(0.1, 1.0), (1.0, 10.0), (10.0, 100.0), (100.0, 10.0)] {
            let mu = solve_chemical_potential(t, n, 1e-11).unwrap();
            assert!(mu < 0.0);
            let back = mean_particle_number(t, mu).unwrap();
            assert_relative_eq!(back, n, max_relative = 1e-10);
        }
    }

    #[test]
    fn truncation_is_minimal_and_certified() {
        let (t, n) = (5.0, 20.0);
        let mu = solve_chemical_potential(t, n, 1e-10).unwrap();
        let k = choose_truncation(t, mu, n, 1e-8).unwrap();
        assert!(occupation_tail_bound(k, t, mu).unwrap() <= 1e-8 * n);
        if k > 1 {
            assert!(occupation_tail_bound(k - 1, t, mu).unwrap() > 1e-8 * n);
        }
    }

    #[test]
    fn tighter_tail_never_shrinks_truncation() {
        let (t, n) = (8.0, 50.0);
        let mu = solve_chemical_potential(t, n, 1e-10).unwrap();
        let loose = choose_truncation(t, mu, n, 1e-6).unwrap();
        let tight = choose_truncation(t, mu, n, 1e-12).unwrap();
        assert!(tight >= loose);
    }

    #[test]
    fn state_is_self_consistent() {
        let st = ThermalState::solve(2.0, 10.0, 1e-8).unwrap();
        assert_eq!(st.occupations.len(), st.k_max);
        assert_relative_eq!(st.n_mean, 10.0, max_relative = 1e-9);
        let retained: f64 = st.occupations.iter().sum();
        assert!(st.n_mean - retained <= st.tail_bound * 1.0000001);
        assert!(st.condensate_fraction() > 0.0 && st.condensate_fraction() < 1.0);
        assert_relative_eq!(st.occupation(3), bose_occupation(3, st.t, st.mu).unwrap());
        // occupation beyond the window still evaluates
        assert!(st.occupation(st.k_max + 10) > 0.0);
    }

    #[test]
    fn low_temperature_condenses() {
        let st = ThermalState::solve(0.05, 100.0, 1e-8).unwrap();
        assert!(st.condensate_fraction() > 0.999);
        assert!(st.k_max <= 3);
    }

    #[test]
    fn input_validation() {
        assert!(bose_occupation(0, -1.0, -0.5).is_err());
        assert!(bose_occupation(0, 1.0, 0.0).is_err());
        assert!(bose_occupation(0, 1.0, f64::NAN).is_err());
        assert!(solve_chemical_potential(1.0, -3.0, 1e-10).is_err());
        assert!(solve_chemical_potential(1.0, 3.0, 0.5e-14).is_err());
        assert!(choose_truncation(1.0, -0.1, 1.0, 2.0).is_err());
    }
}
