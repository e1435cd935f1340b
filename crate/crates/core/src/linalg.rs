//! Dense row-major matrices sized for this problem (a few thousand square at
//! most) plus the two decompositions the rest of the crate needs: a cyclic
//! Jacobi eigensolver for symmetric matrices and Gram-matrix orthonormalization.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)] // used by no_std builds; std f64 methods shadow it otherwise
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// self * other. Zero entries of the left factor are skipped, which makes
    /// multiplication by parity-sparse or triangular matrices roughly twice
    /// as cheap without any special-cased storage.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mat mul");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let arow = self.row(i);
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &aik) in arow.iter().enumerate() {
                if aik == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow.iter()) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_asymmetry(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.at(i, j) - self.at(j, i)).abs());
            }
        }
        worst
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn off_diagonal_frobenius(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    let v = self.data[i * self.cols + j];
                    acc += v * v;
                }
            }
        }
        acc.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    NotSquare { rows: usize, cols: usize },
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    RankDeficient { rank: usize, needed: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NotSquare { rows, cols } => {
                write!(f, "matrix is {rows}x{cols}, expected square")
            }
            LinalgError::NoConvergence { sweeps, off_diagonal } => write!(
                f,
                "jacobi iteration left off-diagonal norm {off_diagonal:.3e} after {sweeps} sweeps"
            ),
            LinalgError::RankDeficient { rank, needed } => {
                write!(f, "gram matrix rank {rank} below required {needed}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LinalgError {}

#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column j is the eigenvector for `values[j]`.
    pub vectors: Mat,
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Input asymmetry is
/// not checked beyond debug assertions; callers hold that invariant.
pub fn symmetric_eigen(m: &Mat) -> Result<SymmetricEigen, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut v = Mat::identity(n);
    if n <= 1 {
        return Ok(SymmetricEigen { values: a.data.clone(), vectors: v });
    }

    let scale = a.frobenius().max(f64::MIN_POSITIVE);
    // rounding regenerates off-diagonal mass of order eps*scale per entry,
    // so the reachable floor grows with n; without the factor a 30x30 gram
    // stalls around 2x the threshold and falsely reports no convergence
    let tol = f64::EPSILON * scale * (n as f64);
    let max_sweeps = 64;
    for sweep in 0..max_sweeps {
        let off = a.off_diagonal_frobenius();
        if off <= tol {
            break;
        }
        if sweep == max_sweeps - 1 {
            return Err(LinalgError::NoConvergence { sweeps: max_sweeps, off_diagonal: off });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.at(p, q);
                if apq.abs() <= tol / (n as f64) {
                    continue;
                }
                let theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rows/cols p and q of A
                for i in 0..n {
                    let aip = a.at(i, p);
                    let aiq = a.at(i, q);
                    a.set(i, p, c * aip - s * aiq);
                    a.set(i, q, s * aip + c * aiq);
                }
                for j in 0..n {
                    let apj = a.at(p, j);
                    let aqj = a.at(q, j);
                    a.set(p, j, c * apj - s * aqj);
                    a.set(q, j, s * apj + c * aqj);
                }
                for i in 0..n {
                    let vip = v.at(i, p);
                    let viq = v.at(i, q);
                    v.set(i, p, c * vip - s * viq);
                    v.set(i, q, s * vip + c * viq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.at(i, i)).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(core::cmp::Ordering::Equal));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v.at(i, order[j]));
    Ok(SymmetricEigen { values, vectors })
}

/// Transform X with X^T G X = I on the retained rank, for a symmetric
/// positive semidefinite Gram matrix G. Full-rank inputs get the symmetric
/// (Loewdin) square root inverse; eigenvalues at or below `cutoff` times the
/// largest are dropped, falling back to canonical columns.
pub fn orthonormal_transform(gram: &Mat, cutoff: f64) -> Result<(Mat, usize), LinalgError> {
    let eig = symmetric_eigen(gram)?;
    let n = gram.rows();
    let top = eig.values.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Err(LinalgError::RankDeficient { rank: 0, needed: 1 });
    }
    let keep: Vec<usize> =
        (0..n).filter(|&j| eig.values[j] > cutoff * top).collect();
    let rank = keep.len();
    if rank == n {
        // X = U diag(1/sqrt(w)) U^T
        let mut x = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for (m, &w) in eig.values.iter().enumerate() {
                    acc += eig.vectors.at(i, m) * eig.vectors.at(j, m) / w.sqrt();
                }
                x.set(i, j, acc);
            }
        }
        Ok((x, n))
    } else {
        let mut x = Mat::zeros(n, rank);
        for (col, &m) in keep.iter().enumerate() {
            let w = eig.values[m].sqrt();
            for i in 0..n {
                x.set(i, col, eig.vectors.at(i, m) / w);
            }
        }
        Ok((x, rank))
    }
}
