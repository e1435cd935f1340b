//! Splitting the trap at a point x = a into a left region (x < a) and a right
//! region (x > a): single-mode residence probabilities, normalized overlaps of
//! region-restricted modes, and the pair bunching probabilities built from them.
//!
//! Off-diagonal raw overlaps come from a boundary identity rather than
//! quadrature. Two eigenfunctions obey phi_k'' = (x^2 - (2k+1)) phi_k, so
//!
//!   d/dx [phi_k' phi_l - phi_k phi_l'] = 2 (l - k) phi_k phi_l
//!
//! and the half-line integral collapses to the Wronskian at the cut:
//!
//!   int_{-inf}^{a} phi_k phi_l dx = (phi_k'(a) phi_l(a) - phi_k(a) phi_l'(a)) / (2 (l - k)).
//!
//! This is exact, O(1) per entry after one recurrence pass, and keeps overlap
//! tables cheap at thousands of modes. Quadrature versions of the same
//! integrals stay available as an independent route for cross-checks.

use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)] // used by no_std builds; std f64 methods shadow it otherwise
use num_traits::Float;

use crate::hermite::{self, HermiteError};
use crate::linalg::Mat;
use crate::quad::{self, QuadError, QuadOptions};

/// Largest split position accepted. Far past any classical turning point we
/// care about; residence probabilities out here underflow anyway.
pub const MAX_SPLIT_POSITION: f64 = 30.0;

#[derive(Debug, Clone, PartialEq)]
pub enum RegionError {
    Mode(HermiteError),
    Quadrature(QuadError),
    InvalidSplitPoint { a: f64 },
    InvalidTolerance { tol: f64 },
    EmptyTable,
    ShapeMismatch { probabilities: usize, rows: usize, cols: usize },
    DegenerateRegion { k: usize },
}

impl fmt::Display for RegionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionError::Mode(e) => write!(f, "{e}"),
            RegionError::Quadrature(e) => write!(f, "{e}"),
            RegionError::InvalidSplitPoint { a } => {
                write!(f, "split position {a} must be finite with |a| <= {MAX_SPLIT_POSITION}")
            }
            RegionError::InvalidTolerance { tol } => {
                write!(f, "quadrature tolerance {tol} outside [1e-14, 1e-2]")
            }
            RegionError::EmptyTable => write!(f, "overlap table needs at least one mode"),
            RegionError::ShapeMismatch { probabilities, rows, cols } => write!(
                f,
                "table shape mismatch: {probabilities} probabilities vs {rows}x{cols} overlaps"
            ),
            RegionError::DegenerateRegion { k } => write!(
                f,
                "residence probability of mode {k} underflowed; overlaps are not normalizable"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RegionError {}

impl From<HermiteError> for RegionError {
    fn from(e: HermiteError) -> Self {
        RegionError::Mode(e)
    }
}

impl From<QuadError> for RegionError {
    fn from(e: QuadError) -> Self {
        RegionError::Quadrature(e)
    }
}

/// A cut of the line at x = a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSplit {
    a: f64,
    quadrature_tol: f64,
}

impl RegionSplit {
    pub fn new(a: f64) -> Result<Self, RegionError> {
        if !a.is_finite() || a.abs() > MAX_SPLIT_POSITION {
            return Err(RegionError::InvalidSplitPoint { a });
        }
        Ok(RegionSplit { a, quadrature_tol: 1e-12 })
    }

    /// The balanced cut at the trap center.
    pub fn symmetric() -> Self {
        RegionSplit { a: 0.0, quadrature_tol: 1e-12 }
    }

    pub fn with_quadrature_tol(mut self, tol: f64) -> Result<Self, RegionError> {
        if !(1e-14..=1e-2).contains(&tol) {
            return Err(RegionError::InvalidTolerance { tol });
        }
        self.quadrature_tol = tol;
        Ok(self)
    }

    pub fn position(&self) -> f64 {
        self.a
    }

    pub fn is_symmetric(&self) -> bool {
        self.a == 0.0
    }

    fn quad_options(&self) -> QuadOptions {
        // abs_tol backstops integrals whose value is an exact parity zero;
        // 1e-13 sits above the accumulated per-panel rounding floor
        QuadOptions { rel_tol: self.quadrature_tol, abs_tol: 1e-13, max_subdivisions: 512 }
    }
}

/// Everything below this leaves nothing numerically meaningful to normalize.
const PROBABILITY_FLOOR: f64 = 1e-290;

/// x beyond which phi_0..phi_k carry no mass at double precision: the largest
/// classical turning point plus a fixed margin into the Gaussian tail.
fn integration_edge(k: usize) -> f64 {
    (2.0 * (k as f64 + 1.0)).sqrt() + 8.0
}

/// Probability that a particle in mode k sits left of the cut.
pub fn left_probability(k: usize, split: &RegionSplit) -> Result<f64, RegionError> {
    hermite::eval_eigenfunction(k, 0.0)?; // validates k against the mode cap
    if split.is_symmetric() {
        return Ok(0.5); // every |phi_k|^2 is even
    }
    let lo = (-integration_edge(k)).min(split.a - 8.0);
    let r = quad::integrate(
        |x| {
            let v = hermite::eval_pair(k, k, x).map(|p| p.0).unwrap_or(0.0);
            v * v
        },
        lo,
        split.a,
        &split.quad_options(),
    )?;
    Ok(r.value)
}

/// Raw left-region overlap s_kl = int_{-inf}^a phi_k phi_l dx. Off-diagonal
/// entries use the boundary identity; the diagonal is `left_probability`.
pub fn raw_left_overlap(k: usize, l: usize, split: &RegionSplit) -> Result<f64, RegionError> {
    if k == l {
        return left_probability(k, split);
    }
    let (pk, dk) = hermite::EigenMode::new(k)?.eval_with_derivative(split.a)?;
    let (pl, dl) = hermite::EigenMode::new(l)?.eval_with_derivative(split.a)?;
    Ok((dk * pl - pk * dl) / (2.0 * (l as f64 - k as f64)))
}

/// Same integral by adaptive quadrature; the independent route.
pub fn raw_left_overlap_quadrature(k: usize, l: usize, split: &RegionSplit) -> Result<f64, RegionError> {
    hermite::eval_eigenfunction(k.max(l), 0.0)?;
    let lo = (-integration_edge(k.max(l))).min(split.a - 8.0);
    let r = quad::integrate(
        |x| {
            let (a, b) = hermite::eval_pair(k, l, x).unwrap_or((0.0, 0.0));
            a * b
        },
        lo,
        split.a,
        &split.quad_options(),
    )?;
    Ok(r.value)
}

/// int_a^inf phi_k phi_l dx by quadrature. With the left-region integral this
/// reconstructs full-line orthonormality without invoking it.
pub fn raw_right_overlap_quadrature(k: usize, l: usize, split: &RegionSplit) -> Result<f64, RegionError> {
    hermite::eval_eigenfunction(k.max(l), 0.0)?;
    let hi = integration_edge(k.max(l)).max(split.a + 8.0);
    let r = quad::integrate(
        |x| {
            let (a, b) = hermite::eval_pair(k, l, x).unwrap_or((0.0, 0.0));
            a * b
        },
        split.a,
        hi,
        &split.quad_options(),
    )?;
    Ok(r.value)
}

/// Normalized overlap of modes k and l restricted to the left region,
/// O_kl = s_kl / sqrt(p_k p_l). Equals 1 on the diagonal by construction.
pub fn overlap(k: usize, l: usize, split: &RegionSplit) -> Result<f64, RegionError> {
    if k == l {
        return Ok(1.0);
    }
    let s = raw_left_overlap(k, l, split)?;
    let pk = left_probability(k, split)?;
    let pl = left_probability(l, split)?;
    if pk < PROBABILITY_FLOOR || pl < PROBABILITY_FLOOR {
        return Err(RegionError::DegenerateRegion { k: if pk < pl { k } else { l } });
    }
    Ok(s / (pk * pl).sqrt())
}

/// Where a distinguishable pair in modes (k, l) ends up: both left, both
/// right, or one on each side. Identical bosons bunch, so for k != l the
/// same-side entries are enhanced over p_k p_l by the overlap squared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BunchingProbabilities {
    pub both_left: f64,
    pub both_right: f64,
    pub one_each: f64,
}

impl BunchingProbabilities {
    fn from_raw(pk: f64, pl: f64, s: f64) -> Self {
        let both_left = pk * pl + s * s;
        let both_right = (1.0 - pk) * (1.0 - pl) + s * s;
        BunchingProbabilities {
            both_left,
            both_right,
            one_each: 1.0 - both_left - both_right,
        }
    }

    fn same_mode(p: f64) -> Self {
        let q = 1.0 - p;
        BunchingProbabilities { both_left: p * p, both_right: q * q, one_each: 2.0 * p * q }
    }
}

pub fn bunching_probabilities(
    k: usize,
    l: usize,
    split: &RegionSplit,
) -> Result<BunchingProbabilities, RegionError> {
    if k == l {
        return Ok(BunchingProbabilities::same_mode(left_probability(k, split)?));
    }
    let pk = left_probability(k, split)?;
    let pl = left_probability(l, split)?;
    let s = raw_left_overlap(k, l, split)?;
    Ok(BunchingProbabilities::from_raw(pk, pl, s))
}

/// Precomputed residence probabilities and normalized overlaps for modes
/// 0..count-1 at a fixed cut.
#[derive(Debug, Clone)]
pub struct OverlapTable {
    split_at: f64,
    p_left: Vec<f64>,
    overlap: Mat,
}

impl OverlapTable {
    pub fn build(split: &RegionSplit, count: usize) -> Result<Self, RegionError> {
        if count == 0 {
            return Err(RegionError::EmptyTable);
        }
        hermite::eval_eigenfunction(count - 1, 0.0)?;
        let mut p_left = Vec::with_capacity(count);
        for k in 0..count {
            let p = left_probability(k, split)?;
            if p < PROBABILITY_FLOOR || 1.0 - p < PROBABILITY_FLOOR {
                return Err(RegionError::DegenerateRegion { k });
            }
            p_left.push(p);
        }
        let (phi, dphi) = hermite::eval_batch_with_derivatives(count, split.a)?;
        let mut overlap = Mat::identity(count);
        for k in 0..count {
            for l in (k + 1)..count {
                let s = (dphi[k] * phi[l] - phi[k] * dphi[l]) / (2.0 * (l as f64 - k as f64));
                let o = s / (p_left[k] * p_left[l]).sqrt();
                overlap.set(k, l, o);
                overlap.set(l, k, o);
            }
        }
        Ok(OverlapTable { split_at: split.a, p_left, overlap })
    }

    /// Assemble a table from explicit values. Exists so tests can feed the
    /// certificate machinery deliberately wrong tables.
    pub fn from_parts(split_at: f64, p_left: Vec<f64>, overlap: Mat) -> Result<Self, RegionError> {
        if p_left.is_empty() {
            return Err(RegionError::EmptyTable);
        }
        if overlap.rows() != p_left.len() || overlap.cols() != p_left.len() {
            return Err(RegionError::ShapeMismatch {
                probabilities: p_left.len(),
                rows: overlap.rows(),
                cols: overlap.cols(),
            });
        }
        if !split_at.is_finite() || split_at.abs() > MAX_SPLIT_POSITION {
            return Err(RegionError::InvalidSplitPoint { a: split_at });
        }
        Ok(OverlapTable { split_at, p_left, overlap })
    }

    pub fn count(&self) -> usize {
        self.p_left.len()
    }

    pub fn split_at(&self) -> f64 {
        self.split_at
    }

    pub fn is_symmetric_split(&self) -> bool {
        self.split_at == 0.0
    }

    pub fn left_probability(&self, k: usize) -> f64 {
        self.p_left[k]
    }

    pub fn right_probability(&self, k: usize) -> f64 {
        1.0 - self.p_left[k]
    }

    pub fn overlap(&self, k: usize, l: usize) -> f64 {
        self.overlap.at(k, l)
    }

    pub fn overlap_matrix(&self) -> &Mat {
        &self.overlap
    }

    /// Raw left gram entry: p_k on the diagonal, O_kl sqrt(p_k p_l) off it.
    pub fn raw_overlap(&self, k: usize, l: usize) -> f64 {
        if k == l {
            self.p_left[k]
        } else {
            self.overlap.at(k, l) * (self.p_left[k] * self.p_left[l]).sqrt()
        }
    }

    /// Raw right gram entry via completeness: delta_kl minus the left entry.
    pub fn raw_right_overlap(&self, k: usize, l: usize) -> f64 {
        let d = if k == l { 1.0 } else { 0.0 };
        d - self.raw_overlap(k, l)
    }

    pub fn bunching(&self, k: usize, l: usize) -> BunchingProbabilities {
        if k == l {
            BunchingProbabilities::same_mode(self.p_left[k])
        } else {
            BunchingProbabilities::from_raw(self.p_left[k], self.p_left[l], self.raw_overlap(k, l))
        }
    }
}

/// Full raw left gram by per-entry quadrature. Quadratically many integrals,
/// so only sensible at small mode counts; this is the oracle-side route that
/// never touches the boundary identity.
pub fn raw_left_gram_quadrature(split: &RegionSplit, count: usize) -> Result<Mat, RegionError> {
    if count == 0 {
        return Err(RegionError::EmptyTable);
    }
    let mut g = Mat::zeros(count, count);
    for k in 0..count {
        for l in k..count {
            let v = raw_left_overlap_quadrature(k, l, split)?;
            g.set(k, l, v);
            g.set(l, k, v);
        }
    }
    Ok(g)
}
