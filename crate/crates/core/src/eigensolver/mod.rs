//! Lowest eigenpairs of real symmetric matrices.
//!
//! Dense input is reduced to tridiagonal form by Householder reflections;
//! tridiagonal matrices (including the parity sectors of the squeezed-frame
//! Hamiltonian) are solved directly by Sturm bisection followed by inverse
//! iteration. Everything is deterministic and single-threaded.

mod householder;
mod tridiagonal;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub use tridiagonal::SymTridiagonal;

use crate::error::{Error, Result};
use crate::fock::{HermitianOperator, HERMITICITY_TOL};

/// Default residual tolerance for `‖H v − E v‖₂`.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Lowest eigenpairs: ascending values, orthonormal columns, per-pair residuals.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
    pub residuals: Vec<f64>,
}

impl EigenResult {
    pub fn vector(&self, i: usize) -> Array1<f64> {
        self.vectors.column(i).to_owned()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Lowest `k` eigenpairs of a real-symmetric Hermitian operator.
pub fn lowest_eigenpairs(h: &HermitianOperator, k: usize, tol: f64) -> Result<EigenResult> {
    let scale = h.entries().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let imag = h.max_imag();
    if imag > HERMITICITY_TOL * scale {
        return Err(Error::NotSymmetric { deviation: imag });
    }
    lowest_eigenpairs_real(&h.real_part(), k, tol)
}

/// Lowest `k` eigenpairs of a dense real symmetric matrix.
pub fn lowest_eigenpairs_real(a: &Array2<f64>, k: usize, tol: f64) -> Result<EigenResult> {
    let (n, m) = a.dim();
    if n != m {
        return Err(Error::DimensionMismatch { expected: n, found: m });
    }
    if k == 0 || k > n {
        return Err(Error::InvalidRequest(format!("requested {k} eigenpairs of a {n}-dimensional matrix")));
    }
    let scale = a.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let mut deviation = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            deviation = deviation.max((a[[i, j]] - a[[j, i]]).abs());
        }
    }
    if deviation > HERMITICITY_TOL * scale {
        return Err(Error::NotSymmetric { deviation });
    }

    let tri = householder::Tridiagonalization::new(a)?;
    // Solve the tridiagonal problem a little tighter than requested so the
    // back-transformation error still fits inside `tol`.
    let inner = tri.tridiagonal.lowest(k, tol * 0.1)?;
    let mut vectors = inner.vectors;
    tri.back_transform(&mut vectors);

    let mut values = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for j in 0..k {
        let v = vectors.column(j);
        let hv = a.dot(&v);
        let e = v.dot(&hv);
        let r = (&hv - &(&v * e)).mapv(|x| x * x).sum().sqrt();
        if r > tol {
            return Err(Error::NoConvergence {
                index: j,
                iterations: 0,
                residual: r,
                tolerance: tol,
            });
        }
        values.push(e);
        residuals.push(r);
    }
    Ok(EigenResult {
        values,
        vectors,
        residuals,
    })
}

/// `(E0, E1, E1 − E0)` from the two lowest eigenpairs.
pub fn ground_pair_gap(h: &HermitianOperator) -> Result<(f64, f64, f64)> {
    let r = lowest_eigenpairs(h, 2, DEFAULT_TOL)?;
    Ok((r.values[0], r.values[1], r.values[1] - r.values[0]))
}

/// Converts a real eigenvector to a complex amplitude vector.
pub fn to_complex(v: &Array1<f64>) -> Array1<Complex64> {
    v.mapv(|x| Complex64::new(x, 0.0))
}

/// Lowest `k` eigenvalues of a dense complex Hermitian matrix, via the real
/// symmetric embedding `[[Re, −Im], [Im, Re]]` whose spectrum is that of the
/// input with every eigenvalue doubled.
pub fn hermitian_eigenvalues(a: &Array2<Complex64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut big = Array2::<f64>::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            let z = a[[i, j]];
            big[[i, j]] = z.re;
            big[[i + n, j + n]] = z.re;
            big[[i, j + n]] = -z.im;
            big[[i + n, j]] = z.im;
        }
    }
    // Symmetrize away roundoff so the real check does not reject it.
    let sym = (&big + &big.t()) * 0.5;
    let tri = householder::Tridiagonalization::new(&sym)?;
    let t = tri.tridiagonal;
    Ok((0..n).map(|i| t.eigenvalue(2 * i)).collect())
}
