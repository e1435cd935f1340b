//! Harmonic-oscillator eigenfunctions in natural trap units, evaluated with
//! the normalized three-term recurrence
//!
//!   phi_{k+1}(x) = x sqrt(2/(k+1)) phi_k(x) - sqrt(k/(k+1)) phi_{k-1}(x)
//!
//! seeded by phi_0(x) = pi^{-1/4} exp(-x^2/2). Working with the normalized
//! functions directly keeps every intermediate bounded (|phi_k| < 1), so the
//! recurrence is safe to thousands of modes where the textbook Hermite
//! polynomials would overflow near k = 150.

use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)] // used by no_std builds; std f64 methods shadow it otherwise
use num_traits::Float;

/// Largest accepted mode index. The recurrence itself stays finite well past
/// this, but overlap tables are quadratic in the mode count, so anything
/// larger is almost certainly a caller bug.
pub const MAX_MODE: usize = 10_000;

/// pi^(-1/4), the value of phi_0 at the origin.
const PHI0_AT_ORIGIN: f64 = 0.751_125_544_464_942_5;

#[derive(Debug, Clone, PartialEq)]
pub enum HermiteError {
    ModeOutOfRange { k: usize },
    NonFiniteArgument,
}

impl fmt::Display for HermiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HermiteError::ModeOutOfRange { k } => {
                write!(f, "mode index {k} exceeds cap {MAX_MODE}")
            }
            HermiteError::NonFiniteArgument => write!(f, "eigenfunction argument must be finite"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for HermiteError {}

fn check_mode(k: usize) -> Result<(), HermiteError> {
    if k > MAX_MODE {
        return Err(HermiteError::ModeOutOfRange { k });
    }
    Ok(())
}

fn check_arg(x: f64) -> Result<(), HermiteError> {
    if !x.is_finite() {
        return Err(HermiteError::NonFiniteArgument);
    }
    Ok(())
}

/// One trap eigenmode. Energy is measured in trap quanta from the ground
/// state, so `energy() == index()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenMode {
    k: usize,
}

impl EigenMode {
    pub fn new(k: usize) -> Result<Self, HermiteError> {
        check_mode(k)?;
        Ok(EigenMode { k })
    }

    pub fn index(&self) -> usize {
        self.k
    }

    pub fn energy(&self) -> f64 {
        self.k as f64
    }

    pub fn eval(&self, x: f64) -> Result<f64, HermiteError> {
        eval_eigenfunction(self.k, x)
    }

    pub fn eval_with_derivative(&self, x: f64) -> Result<(f64, f64), HermiteError> {
        check_arg(x)?;
        let (lo, hi) = eval_pair_unchecked(self.k.saturating_sub(1), self.k, x);
        let phi = if self.k == 0 { lo } else { hi };
        let below = if self.k == 0 { 0.0 } else { lo };
        // phi_k' = sqrt(2k) phi_{k-1} - x phi_k
        let dphi = (2.0 * self.k as f64).sqrt() * below - x * phi;
        Ok((phi, dphi))
    }
}

#[inline]
fn phi0(x: f64) -> f64 {
    PHI0_AT_ORIGIN * (-0.5 * x * x).exp()
}

/// Runs the recurrence once and returns (phi_ka, phi_kb) for ka <= kb.
/// No allocation; this is the hot path under the quadrature routines.
fn eval_pair_unchecked(ka: usize, kb: usize, x: f64) -> (f64, f64) {
    debug_assert!(ka <= kb);
    let mut prev = 0.0_f64;
    let mut cur = phi0(x);
    let mut lo = cur;
    for k in 0..kb {
        let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * cur
            - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if k + 1 == ka {
            lo = cur;
        }
    }
    (lo, cur)
}

pub fn eval_eigenfunction(k: usize, x: f64) -> Result<f64, HermiteError> {
    check_mode(k)?;
    check_arg(x)?;
    Ok(eval_pair_unchecked(k, k, x).1)
}

/// phi_ka(x) and phi_kb(x) from a single pass of the recurrence.
pub fn eval_pair(ka: usize, kb: usize, x: f64) -> Result<(f64, f64), HermiteError> {
    check_mode(ka)?;
    check_mode(kb)?;
    check_arg(x)?;
    if ka <= kb {
        Ok(eval_pair_unchecked(ka, kb, x))
    } else {
        let (lo, hi) = eval_pair_unchecked(kb, ka, x);
        Ok((hi, lo))
    }
}

/// All of phi_0(x) .. phi_{count-1}(x).
pub fn eval_batch(count: usize, x: f64) -> Result<Vec<f64>, HermiteError> {
    if count == 0 {
        return Ok(Vec::new());
    }
    check_mode(count - 1)?;
    check_arg(x)?;
    let mut out = Vec::with_capacity(count);
    let mut prev = 0.0_f64;
    let mut cur = phi0(x);
    out.push(cur);
    for k in 0..count - 1 {
        let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * cur
            - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    Ok(out)
}

/// Values and first derivatives of the first `count` modes at x.
pub fn eval_batch_with_derivatives(count: usize, x: f64) -> Result<(Vec<f64>, Vec<f64>), HermiteError> {
    let values = eval_batch(count, x)?;
    let mut derivs = Vec::with_capacity(count);
    for (k, &phi) in values.iter().enumerate() {
        let below = if k == 0 { 0.0 } else { values[k - 1] };
        derivs.push((2.0 * k as f64).sqrt() * below - x * phi);
    }
    Ok((values, derivs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ground_state_at_origin() {
        let v = eval_eigenfunction(0, 0.0).unwrap();
        assert_relative_eq!(v, 0.75112554446494248286, epsilon = 1e-16);
    }

    #[test]
    fn pinned_values_from_reference_evaluation() {
        // 20-digit references computed with arbitrary-precision Hermite series
        assert_relative_eq!(
            eval_eigenfunction(5, 1.3).unwrap(),
            -0.39939146281375073457,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            eval_eigenfunction(3, -0.4).unwrap(),
            0.42914408535388808286,
            epsilon = 1e-15
        );
    }

    #[test]
    fn batch_matches_single_eval() {
        let xs = [-3.7, -0.2, 0.0, 0.9, 4.4];
        for &x in &xs {
            let batch = eval_batch(40, x).unwrap();
            for (k, &b) in batch.iter().enumerate() {
                assert_eq!(b, eval_eigenfunction(k, x).unwrap());
            }
        }
    }

    #[test]
    fn pair_eval_matches_batch_either_order() {
        let batch = eval_batch(30, 0.77).unwrap();
        let (a, b) = eval_pair(4, 29, 0.77).unwrap();
        assert_eq!((a, b), (batch[4], batch[29]));
        let (b2, a2) = eval_pair(29, 4, 0.77).unwrap();
        assert_eq!((a2, b2), (batch[4], batch[29]));
    }

    #[test]
    fn parity_alternates_with_mode_index() {
        for k in 0..60 {
            let plus = eval_eigenfunction(k, 1.234).unwrap();
            let minus = eval_eigenfunction(k, -1.234).unwrap();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(plus, sign * minus, epsilon = 1e-15);
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-6;
        for k in [0usize, 1, 2, 7, 20] {
            let mode = EigenMode::new(k).unwrap();
            for &x in &[-1.9, 0.0, 0.6, 2.5] {
                let (_, d) = mode.eval_with_derivative(x).unwrap();
                let num = (mode.eval(x + h).unwrap() - mode.eval(x - h).unwrap()) / (2.0 * h);
                assert_relative_eq!(d, num, epsilon = 1e-7, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn derivative_at_origin_comes_from_mode_below() {
        let (phi, dphi) = EigenMode::new(7).unwrap().eval_with_derivative(0.0).unwrap();
        assert_eq!(phi, 0.0); // odd mode
        let below = eval_eigenfunction(6, 0.0).unwrap();
        assert_relative_eq!(dphi, (14.0_f64).sqrt() * below, epsilon = 1e-15);
    }

    #[test]
    fn values_stay_finite_and_bounded_high_in_the_spectrum() {
        for &x in &[0.0, 1.0, 10.0, 30.0] {
            let batch = eval_batch(5001, x).unwrap();
            for (k, &v) in batch.iter().enumerate() {
                assert!(v.is_finite(), "phi_{k}({x}) not finite");
                assert!(v.abs() < 1.0, "phi_{k}({x}) = {v} out of bound");
            }
        }
    }

    #[test]
    fn mode_cap_is_enforced() {
        assert!(EigenMode::new(MAX_MODE).is_ok());
        assert!(matches!(
            EigenMode::new(MAX_MODE + 1),
            Err(HermiteError::ModeOutOfRange { .. })
        ));
        assert!(eval_eigenfunction(MAX_MODE + 5, 0.0).is_err());
    }

    #[test]
    fn non_finite_arguments_rejected() {
        assert!(eval_eigenfunction(3, f64::NAN).is_err());
        assert!(eval_eigenfunction(3, f64::INFINITY).is_err());
        assert!(eval_batch(10, f64::NEG_INFINITY).is_err());
    }
}
