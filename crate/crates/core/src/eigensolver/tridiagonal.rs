use ndarray::Array2;

use super::EigenResult;
use crate::error::{Error, Result};

const MAX_INVERSE_ITERATIONS: usize = 40;

/// Real symmetric tridiagonal matrix: `diag[i] = T[i][i]`, `off[i] = T[i][i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidRequest("empty tridiagonal matrix".into()));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: off.len(),
            });
        }
        if diag.iter().chain(off.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidRequest("non-finite tridiagonal entry".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let n = self.dim();
        let mut a = Array2::zeros((n, n));
        for i in 0..n {
            a[[i, i]] = self.diag[i];
        }
        for (i, e) in self.off.iter().enumerate() {
            a[[i, i + 1]] = *e;
            a[[i + 1, i]] = *e;
        }
        a
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn spectrum_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.spectrum_bounds();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.sqrt() * self.norm_bound().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.dim());
        let (mut lo, mut hi) = self.spectrum_bounds();
        let pad = 2.0 * f64::EPSILON * self.norm_bound() + f64::MIN_POSITIVE;
        lo -= pad;
        hi += pad;
        // Invariant: count_below(lo) <= k < count_below(hi).
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs());
            if hi - lo <= tol {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Lowest `k` eigenpairs with residual `‖T v − E v‖₂ ≤ tol`.
    pub fn lowest(&self, k: usize, tol: f64) -> Result<EigenResult> {
        let n = self.dim();
        if k == 0 || k > n {
            return Err(Error::InvalidRequest(format!("requested {k} eigenpairs of a {n}-dimensional matrix")));
        }
        let values: Vec<f64> = (0..k).map(|i| self.eigenvalue(i)).collect();
        let scale = self.norm_bound();
        let cluster_gap = 1e-3 * scale;

        let mut vectors = Array2::<f64>::zeros((n, k));
        let mut refined = Vec::with_capacity(k);
        let mut residuals = Vec::with_capacity(k);
        let mut cluster_start = 0;
        for j in 0..k {
            if j > 0 && values[j] - values[j - 1] > cluster_gap {
                cluster_start = j;
            }
            let earlier: Vec<Vec<f64>> = (cluster_start..j).map(|i| vectors.column(i).to_vec()).collect();
            let (v, res) = self.inverse_iteration(values[j], j, &earlier, tol)?;
            let mut hv = vec![0.0; n];
            self.apply(&v, &mut hv);
            let rq: f64 = v.iter().zip(hv.iter()).map(|(a, b)| a * b).sum();
            for (i, x) in v.iter().enumerate() {
                vectors[[i, j]] = *x;
            }
            refined.push(rq);
            residuals.push(res);
        }
        // Rayleigh quotients can reorder values only within roundoff; keep the
        // bisection order and report the quotients.
        Ok(EigenResult {
            values: refined,
            vectors,
            residuals,
        })
    }

    /// Inverse iteration for an eigenvalue already known to full precision.
    /// Vectors of earlier members of the same cluster are projected out.
    fn inverse_iteration(&self, lambda: f64, index: usize, earlier: &[Vec<f64>], tol: f64) -> Result<(Vec<f64>, f64)> {
        let n = self.dim();
        let lu = TridiagonalLu::factor(self, lambda);

        // Deterministic start vector that is unlikely to be orthogonal to the
        // wanted eigenvector.
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * (1.0 + index as f64) * 0.618_033_988_749_895).fract())
            .collect();
        normalize(&mut v);
        let mut hv = vec![0.0; n];
        let mut residual = f64::INFINITY;
        for _ in 0..MAX_INVERSE_ITERATIONS {
            lu.solve_in_place(&mut v);
            for u in earlier {
                project_out(&mut v, u);
            }
            if normalize(&mut v) == 0.0 {
                v = (0..n).map(|i| if i == index % n { 1.0 } else { 0.0 }).collect();
                for u in earlier {
                    project_out(&mut v, u);
                }
                normalize(&mut v);
            }
            self.apply(&v, &mut hv);
            let rq: f64 = v.iter().zip(hv.iter()).map(|(a, b)| a * b).sum();
            residual = hv.iter().zip(v.iter()).map(|(h, x)| (h - rq * x).powi(2)).sum::<f64>().sqrt();
            if residual <= tol * 1e-2 || residual <= 8.0 * f64::EPSILON * self.norm_bound() {
                break;
            }
        }
        if residual > tol {
            return Err(Error::NoConvergence {
                index,
                iterations: MAX_INVERSE_ITERATIONS,
                residual,
                tolerance: tol,
            });
        }
        Ok((v, residual))
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 && norm.is_finite() {
        v.iter_mut().for_each(|x| *x /= norm);
        norm
    } else {
        0.0
    }
}

fn project_out(v: &mut [f64], u: &[f64]) {
    let d: f64 = v.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
    v.iter_mut().zip(u.iter()).for_each(|(a, b)| *a -= d * b);
}

/// LU factorization of `T − λI` with partial pivoting, as used by LAPACK's
/// `stein`: the upper factor has up to two superdiagonals.
struct TridiagonalLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(t: &SymTridiagonal, lambda: f64) -> Self {
        let n = t.dim();
        let tiny = f64::EPSILON * t.norm_bound();
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];

        // Row i currently holds (diag, super, super2) starting at column i.
        let mut cur_d = t.diag[0] - lambda;
        let mut cur_e = if n > 1 { t.off[0] } else { 0.0 };
        let mut cur_f = 0.0;
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if cur_d.abs() < tiny { tiny } else { cur_d };
                u1[i] = 0.0;
                u2[i] = 0.0;
                break;
            }
            let sub = t.off[i];
            let next_d = t.diag[i + 1] - lambda;
            let next_e = if i + 2 < n { t.off[i + 1] } else { 0.0 };
            if sub.abs() > cur_d.abs() {
                // Pivot: next row becomes the pivot row.
                swapped[i] = true;
                u0[i] = sub;
                u1[i] = next_d;
                u2[i] = next_e;
                let m = cur_d / sub;
                mult[i] = m;
                cur_d = cur_e - m * next_d;
                cur_e = cur_f - m * next_e;
                cur_f = 0.0;
            } else {
                let piv = if cur_d.abs() < tiny { tiny } else { cur_d };
                u0[i] = piv;
                u1[i] = cur_e;
                u2[i] = cur_f;
                let m = sub / piv;
                mult[i] = m;
                cur_d = next_d - m * cur_e;
                cur_e = next_e - m * cur_f;
                cur_f = 0.0;
            }
        }
        Self {
            u0,
            u1,
            u2,
            mult,
            swapped,
        }
    }

    fn solve_in_place(&self, b: &mut [f64]) {
        let n = b.len();
        // Forward elimination with the recorded row swaps.
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.mult[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            if i + 1 < n {
                acc -= self.u1[i] * b[i + 1];
            }
            if i + 2 < n {
                acc -= self.u2[i] * b[i + 2];
            }
            b[i] = acc / self.u0[i];
            if !b[i].is_finite() {
                b[i] = if b[i].is_sign_negative() { -f64::MAX / 4.0 } else { f64::MAX / 4.0 };
            }
        }
        // Keep magnitudes bounded for the next sweep.
        let big = b.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if big > 1e150 {
            b.iter_mut().for_each(|x| *x /= big);
        }
    }
}
