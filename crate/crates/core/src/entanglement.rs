//! The analytic entanglement quantities for an average thermal pair split at
//! the trap center: the coherent-bunching norm that feeds the negativity
//! lower bound lambda = sqrt(<chi|chi>) / M, and closed-form entanglement
//! entropies of single pure pair states under a cut at arbitrary position.

use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)] // used by no_std builds; std f64 methods shadow it otherwise
use num_traits::Float;

use crate::linalg::Mat;
use crate::regions::{self, OverlapTable, RegionError, RegionSplit};
use crate::thermo::{ThermalState, ThermoError};

#[derive(Debug, Clone, PartialEq)]
pub enum EntanglementError {
    Thermo(ThermoError),
    Region(RegionError),
    AsymmetricSplit { a: f64 },
    SizeMismatch { occupations: usize, table: usize },
    EmptySystem,
}

impl fmt::Display for EntanglementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntanglementError::Thermo(e) => write!(f, "{e}"),
            EntanglementError::Region(e) => write!(f, "{e}"),
            EntanglementError::AsymmetricSplit { a } => {
                write!(f, "negativity bound needs the balanced cut, got a = {a}")
            }
            EntanglementError::SizeMismatch { occupations, table } => {
                write!(f, "{occupations} occupations vs {table}-mode overlap table")
            }
            EntanglementError::EmptySystem => write!(f, "need at least one retained mode"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EntanglementError {}

impl From<ThermoError> for EntanglementError {
    fn from(e: ThermoError) -> Self {
        EntanglementError::Thermo(e)
    }
}

impl From<RegionError> for EntanglementError {
    fn from(e: RegionError) -> Self {
        EntanglementError::Region(e)
    }
}

/// Normalization M of the average-pair mixture, from occupation sums:
/// M = 2 sum_k n_k^2 + sum_{k>l} n_k n_l = (3 sum n^2 + (sum n)^2) / 2.
#[inline]
fn mixture_norm_from_sums(total: f64, total_sq: f64) -> f64 {
    0.5 * (3.0 * total_sq + total * total)
}

/// Mixture normalization over the retained modes only.
pub fn pair_weight_norm(occupations: &[f64]) -> f64 {
    let total: f64 = occupations.iter().sum();
    let total_sq: f64 = occupations.iter().map(|n| n * n).sum();
    mixture_norm_from_sums(total, total_sq)
}

/// Mixture normalization including the full occupation series, so the bound
/// is not inflated by whatever truncation dropped.
pub fn pair_weight_norm_full(state: &ThermalState) -> f64 {
    mixture_norm_from_sums(state.n_mean, state.occupation_sq_total())
}

/// Whether pair coefficients carry the same-side bunching probability factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairWeighting {
    /// Each (k, l) pair weighted by its both-left probability p_kl.
    Bunching,
    /// Occupation product only.
    Plain,
}

fn check_inputs(occupations: &[f64], table: &OverlapTable) -> Result<(), EntanglementError> {
    if occupations.is_empty() {
        return Err(EntanglementError::EmptySystem);
    }
    if occupations.len() != table.count() {
        return Err(EntanglementError::SizeMismatch {
            occupations: occupations.len(),
            table: table.count(),
        });
    }
    if !table.is_symmetric_split() {
        return Err(EntanglementError::AsymmetricSplit { a: table.split_at() });
    }
    Ok(())
}

fn pair_coefficient(table: &OverlapTable, weighting: PairWeighting, k: usize, l: usize) -> f64 {
    match weighting {
        PairWeighting::Bunching => table.bunching(k, l).both_left,
        PairWeighting::Plain => 1.0,
    }
}

/// The closed-form coherent-bunching norm <chi|chi>:
///
///   (1/4) sum_{k,l}        n_k^2 n_l^2 O_kl^4
/// + sum_{k>l, k'>l'}       v_kl v_k'l' O_kk'^2 O_ll'^2
/// + sum_k sum_{k'>l'}      n_k^2 v_k'l' O_kk'^2 O_kl'^2
///
/// with v_kl = n_k n_l (times the bunching probability under
/// `PairWeighting::Bunching`). Contracting with A = O elementwise-squared
/// and V the strictly lower triangular matrix of v turns the two pair sums
/// into traces against P = A V A, so the whole thing is two matrix products.
pub fn chi_norm_squared_from_occupations(
    occupations: &[f64],
    table: &OverlapTable,
    weighting: PairWeighting,
) -> Result<f64, EntanglementError> {
    check_inputs(occupations, table)?;
    let kk = occupations.len();

    let a = Mat::from_fn(kk, kk, |i, j| {
        let o = table.overlap(i, j);
        o * o
    });
    let v = Mat::from_fn(kk, kk, |i, j| {
        if j < i {
            occupations[i] * occupations[j] * pair_coefficient(table, weighting, i, j)
        } else {
            0.0
        }
    });
    let p = a.mul(&v).mul(&a);

    let mut pair_pair = 0.0;
    for i in 0..kk {
        for j in 0..i {
            pair_pair += v.at(i, j) * p.at(i, j);
        }
    }
    let mut diag_pair = 0.0;
    let mut diag_diag = 0.0;
    for i in 0..kk {
        let ni2 = occupations[i] * occupations[i];
        diag_pair += ni2 * p.at(i, i);
        for j in 0..kk {
            let aij = a.at(i, j);
            diag_diag += ni2 * occupations[j] * occupations[j] * aij * aij;
        }
    }
    Ok(0.25 * diag_diag + pair_pair + diag_pair)
}

/// Same sums as literal nested loops. Quartic in the mode count; exists to
/// pin the contracted evaluation against something with no reorganization.
pub fn chi_norm_squared_direct(
    occupations: &[f64],
    table: &OverlapTable,
    weighting: PairWeighting,
) -> Result<f64, EntanglementError> {
    check_inputs(occupations, table)?;
    let kk = occupations.len();
    let n = occupations;
    let o = |i: usize, j: usize| table.overlap(i, j);
    let v = |i: usize, j: usize| n[i] * n[j] * pair_coefficient(table, weighting, i, j);

    let mut s1 = 0.0;
    for k in 0..kk {
        for l in 0..kk {
            s1 += n[k] * n[k] * n[l] * n[l] * o(k, l).powi(4);
        }
    }
    let mut s2 = 0.0;
    for k in 0..kk {
        for l in 0..k {
            for kp in 0..kk {
                for lp in 0..kp {
                    s2 += v(k, l) * v(kp, lp) * o(k, kp).powi(2) * o(l, lp).powi(2);
                }
            }
        }
    }
    let mut s3 = 0.0;
    for kp in 0..kk {
        for lp in 0..kp {
            for k in 0..kk {
                s3 += n[k] * n[k] * v(kp, lp) * o(k, kp).powi(2) * o(k, lp).powi(2);
            }
        }
    }
    Ok(0.25 * s1 + s2 + s3)
}

pub fn chi_norm_squared(state: &ThermalState, table: &OverlapTable) -> Result<f64, EntanglementError> {
    chi_norm_squared_from_occupations(&state.occupations, table, PairWeighting::Bunching)
}

pub fn chi_norm_squared_with(
    state: &ThermalState,
    table: &OverlapTable,
    weighting: PairWeighting,
) -> Result<f64, EntanglementError> {
    chi_norm_squared_from_occupations(&state.occupations, table, weighting)
}

/// One evaluated operating point of the negativity lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct NegativityReport {
    pub t: f64,
    pub mu: f64,
    pub n_mean: f64,
    pub k_max: usize,
    /// The bound itself: sqrt(chi_norm_sq) / M.
    pub lambda: f64,
    pub chi_norm_sq: f64,
    pub condensate_fraction: f64,
    /// Occupation mass certified to lie beyond k_max.
    pub tail_bound: f64,
    /// Filled in when an exact small-truncation diagonalization was run.
    pub oracle_negativity: Option<f64>,
}

/// Solve the thermal point, build the overlap table at the balanced cut, and
/// evaluate the lower bound on the negativity of the average-pair state.
pub fn lambda_lower_bound(
    t: f64,
    n_target: f64,
    eps_tail: f64,
) -> Result<NegativityReport, EntanglementError> {
    lambda_lower_bound_at(t, n_target, eps_tail, &RegionSplit::symmetric())
}

/// Same pipeline with the cut position exposed. The bound itself only holds
/// at a = 0; any other split is reported as an error once the table is built,
/// which lets callers surface the rejection per operating point.
pub fn lambda_lower_bound_at(
    t: f64,
    n_target: f64,
    eps_tail: f64,
    split: &RegionSplit,
) -> Result<NegativityReport, EntanglementError> {
    let state = ThermalState::solve(t, n_target, eps_tail)?;
    let table = OverlapTable::build(split, state.k_max)?;
    let chi_norm_sq = chi_norm_squared(&state, &table)?;
    let m = pair_weight_norm_full(&state);
    Ok(NegativityReport {
        t,
        mu: state.mu,
        n_mean: state.n_mean,
        k_max: state.k_max,
        lambda: chi_norm_sq.sqrt() / m,
        chi_norm_sq,
        condensate_fraction: state.condensate_fraction(),
        tail_bound: state.tail_bound,
        oracle_negativity: None,
    })
}

/// Shannon entropy in bits of a (sub)probability list; zero entries carry
/// zero entropy.
pub(crate) fn entropy_bits<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    let mut s = 0.0;
    for p in probs {
        if p > 0.0 {
            s -= p * p.log2();
        }
    }
    s
}

/// Entanglement entropy (bits) across the cut for a single pure pair with one
/// boson in mode k and one in mode l.
///
/// For k = l the state is a binomial split with amplitudes {p, q, sqrt(2pq)},
/// so the spectrum is {p^2, q^2, 2pq}. For k != l the reduced state is rank
/// four: the two double-occupancy weights p_kl (both left) and q_kl (both
/// right), plus the two eigenvalues of the 2x2 one-each-side block
///
///   X G,  X = [[alpha, c], [c, beta]],  G = [[1, O], [O, 1]]
///
/// with alpha = p_k q_l, beta = p_l q_k, c = sqrt(alpha beta) Obar, where O
/// and Obar are the left and right normalized overlaps. G is the Gram matrix
/// of the nonorthogonal left one-particle states, which is what makes the
/// trace and determinant below the correct invariants.
pub fn pure_pair_entropy(k: usize, l: usize, split: &RegionSplit) -> Result<f64, EntanglementError> {
    let pk = regions::left_probability(k, split)?;
    if k == l {
        let q = 1.0 - pk;
        return Ok(entropy_bits([pk * pk, q * q, 2.0 * pk * q]));
    }
    let pl = regions::left_probability(l, split)?;
    let (qk, ql) = (1.0 - pk, 1.0 - pl);
    // entropy of an all-but-empty region is below measurable precision
    if pk.min(pl).min(qk).min(ql) < 1e-250 {
        return Ok(0.0);
    }
    let s = regions::raw_left_overlap(k, l, split)?;
    // |overlaps| <= 1 by Cauchy-Schwarz; clamp what roundoff may exceed
    let o = (s / (pk * pl).sqrt()).clamp(-1.0, 1.0);
    let ob = (-s / (qk * ql).sqrt()).clamp(-1.0, 1.0);

    let both_left = pk * pl + s * s;
    let both_right = qk * ql + s * s;
    let alpha = pk * ql;
    let beta = pl * qk;
    let c = (alpha * beta).sqrt() * ob;
    let tr = alpha + beta + 2.0 * c * o;
    let det = (alpha * beta - c * c) * (1.0 - o * o);
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    Ok(entropy_bits([
        both_left,
        both_right,
        0.5 * (tr + disc),
        0.5 * (tr - disc),
    ]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitEntropyPoint {
    pub a: f64,
    pub entropy_bits: f64,
}

/// Entropy of the k-k pair as the cut position scans over `positions`.
pub fn split_scan_entropy(
    k: usize,
    positions: &[f64],
) -> Result<Vec<SplitEntropyPoint>, EntanglementError> {
    let mut out = Vec::with_capacity(positions.len());
    for &a in positions {
        let split = RegionSplit::new(a)?;
        out.push(SplitEntropyPoint { a, entropy_bits: pure_pair_entropy(k, k, &split)? });
    }
    Ok(out)
}
