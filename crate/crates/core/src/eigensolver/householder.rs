use ndarray::{s, Array1, Array2};

use super::SymTridiagonal;
use crate::error::Result;

/// Householder reduction `A = Q T Qᵀ` of a dense real symmetric matrix.
///
/// Reflector `k` acts on rows/columns `k+1..n` and is stored as a unit
/// vector; `Q = H_0 H_1 ⋯ H_{n-3}`.
pub(crate) struct Tridiagonalization {
    pub tridiagonal: SymTridiagonal,
    reflectors: Vec<Option<Array1<f64>>>,
}

impl Tridiagonalization {
    pub fn new(a: &Array2<f64>) -> Result<Self> {
        let n = a.nrows();
        let mut w = a.to_owned();
        let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
        for k in 0..n.saturating_sub(2) {
            let x = w.slice(s![k + 1.., k]).to_owned();
            let alpha = x.dot(&x).sqrt();
            if alpha == 0.0 || x.iter().skip(1).all(|v| *v == 0.0) {
                reflectors.push(None);
                continue;
            }
            let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
            let mut v = x;
            v[0] += sign * alpha;
            let vn = v.dot(&v).sqrt();
            v.mapv_inplace(|e| e / vn);

            // A ← H A H on the trailing block, H = I − 2vvᵀ:
            // p = A v, K = vᵀp, q = p − K v, A ← A − 2(v qᵀ + q vᵀ).
            let mut block = w.slice_mut(s![k + 1.., k + 1..]);
            let p = block.dot(&v);
            let kk = v.dot(&p);
            let q = &p - &(&v * kk);
            let m = v.len();
            for i in 0..m {
                for j in 0..m {
                    block[[i, j]] -= 2.0 * (v[i] * q[j] + q[i] * v[j]);
                }
            }
            // Column k below the diagonal becomes (−sign·alpha, 0, …).
            w[[k + 1, k]] = -sign * alpha;
            w[[k, k + 1]] = -sign * alpha;
            for i in k + 2..n {
                w[[i, k]] = 0.0;
                w[[k, i]] = 0.0;
            }
            reflectors.push(Some(v));
        }
        let diag = (0..n).map(|i| w[[i, i]]).collect();
        let off = (0..n.saturating_sub(1)).map(|i| w[[i + 1, i]]).collect();
        Ok(Self {
            tridiagonal: SymTridiagonal::new(diag, off)?,
            reflectors,
        })
    }

    /// Maps eigenvectors of `T` (columns) to eigenvectors of `A`.
    pub fn back_transform(&self, vectors: &mut Array2<f64>) {
        for (k, refl) in self.reflectors.iter().enumerate().rev() {
            let Some(v) = refl else { continue };
            let mut block = vectors.slice_mut(s![k + 1.., ..]);
            let proj = v.dot(&block);
            for (i, vi) in v.iter().enumerate() {
                for (j, pj) in proj.iter().enumerate() {
                    block[[i, j]] -= 2.0 * vi * pj;
                }
            }
        }
    }
}
