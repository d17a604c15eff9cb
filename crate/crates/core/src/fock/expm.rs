//! Matrix exponentials of truncated bosonic generators.
//!
//! Two entry points share the same generators: [`expm`] produces the dense
//! unitary by scaling and squaring a fixed-order Taylor polynomial, and
//! [`BandedOperator::exp_apply`] evaluates the action `exp(A) v` without ever
//! forming the dense matrix. The second is what makes squeezing and
//! displacing states with thousands of Fock levels affordable.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

const TAYLOR_ORDER: usize = 18;

/// Dense matrix exponential `exp(a)`.
///
/// The argument is scaled by `2^-s` until its 1-norm is at most 1/2, the
/// degree-18 Taylor polynomial is evaluated and the result squared `s` times.
/// The truncation error of the polynomial is below `0.5^19 / 19!`.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = one_norm(a);
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scale = 0.5f64.powi(squarings as i32);
    let scaled = a.mapv(|z| z * scale);

    // Horner evaluation of sum_{k<=order} A^k / k!.
    let eye = Array2::<Complex64>::eye(n);
    let mut result = eye.clone();
    for k in (1..=TAYLOR_ORDER).rev() {
        result = scaled.dot(&result).mapv(|z| z / k as f64);
        result += &eye;
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Sparse operator stored as a handful of diagonals.
///
/// Band `(k, coeffs)` holds the entries `A[i][i + k]` (`k` may be negative);
/// `coeffs[j]` is the entry on the `j`-th row that has one.
#[derive(Debug, Clone)]
pub struct BandedOperator {
    dim: usize,
    bands: Vec<(isize, Vec<Complex64>)>,
}

impl BandedOperator {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            bands: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds a band of offset `k`; `entry(row)` gives `A[row][row + k]`.
    pub fn with_band(mut self, k: isize, entry: impl Fn(usize) -> Complex64) -> Self {
        let len = self.dim.saturating_sub(k.unsigned_abs());
        let first_row = if k < 0 { k.unsigned_abs() } else { 0 };
        let coeffs = (0..len).map(|j| entry(first_row + j)).collect();
        self.bands.push((k, coeffs));
        self
    }

    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (k, coeffs) in &self.bands {
            let (row0, col0) = if *k < 0 {
                (k.unsigned_abs(), 0)
            } else {
                (0, *k as usize)
            };
            for (j, c) in coeffs.iter().enumerate() {
                y[row0 + j] += c * x[col0 + j];
            }
        }
    }

    /// Upper bound on the induced 1-norm.
    pub fn norm_bound(&self) -> f64 {
        let mut col_sums = vec![0.0; self.dim];
        for (k, coeffs) in &self.bands {
            let col0 = if *k < 0 { 0 } else { *k as usize };
            for (j, c) in coeffs.iter().enumerate() {
                col_sums[col0 + j] += c.norm();
            }
        }
        col_sums.into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Array2<Complex64> {
        let mut out = Array2::zeros((self.dim, self.dim));
        for (k, coeffs) in &self.bands {
            let (row0, col0) = if *k < 0 {
                (k.unsigned_abs(), 0)
            } else {
                (0, *k as usize)
            };
            for (j, c) in coeffs.iter().enumerate() {
                out[[row0 + j, col0 + j]] = *c;
            }
        }
        out
    }

    /// `exp(A) v` by a sequence of short Taylor steps, each with a step norm
    /// of at most one. The series of a step is summed until the next term is
    /// below 1e-18 relative to the running result.
    pub fn exp_apply(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length does not match operator");
        let norm = self.norm_bound();
        let steps = norm.ceil().max(1.0) as usize;
        let inv_steps = 1.0 / steps as f64;

        let mut acc: Vec<Complex64> = v.to_vec();
        let mut term = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut next = vec![Complex64::new(0.0, 0.0); self.dim];
        for _ in 0..steps {
            term.copy_from_slice(&acc);
            for k in 1..=64 {
                self.apply(&term, &mut next);
                let f = inv_steps / k as f64;
                let mut term_norm = 0.0f64;
                for (t, nx) in term.iter_mut().zip(next.iter()) {
                    *t = nx * f;
                    term_norm = term_norm.max(t.norm());
                }
                let mut acc_norm = 0.0f64;
                for (a, t) in acc.iter_mut().zip(term.iter()) {
                    *a += t;
                    acc_norm = acc_norm.max(a.norm());
                }
                if term_norm <= 1e-18 * acc_norm.max(f64::MIN_POSITIVE) {
                    break;
                }
            }
        }
        Array1::from(acc)
    }
}
