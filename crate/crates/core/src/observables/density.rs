use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64;

use crate::eigensolver::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::fock::{FieldState, FockFrame, QuantumState, Spin, Truncated};

/// Eigenvalues below this contribute nothing to the entropy.
pub const EIGEN_FLOOR: f64 = 1e-14;

/// Field density matrix stored as a factor `L` with `ρ = L L†`.
///
/// The reduced state of a joint field-qubit state has rank at most two, so
/// the factor is `fock_dim × 2` and nothing quadratic in `fock_dim` is ever
/// formed unless [`DensityMatrix::entries`] is called.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    factors: Array2<Complex64>,
    frame: FockFrame,
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ|` for a normalized field state.
    pub fn pure(state: &FieldState) -> Result<Self> {
        let n2 = state.norm_sqr();
        if (n2 - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDensityMatrix(format!("pure state has squared norm {n2}")));
        }
        let factors = state.amplitudes().clone().insert_axis(Axis(1));
        Ok(Self {
            factors,
            frame: state.frame(),
        })
    }

    /// Validates a dense matrix and factors it by pivoted Cholesky.
    pub fn from_entries(entries: Array2<Complex64>, frame: FockFrame) -> Result<Self> {
        let (n, m) = entries.dim();
        if n != m || n == 0 {
            return Err(Error::InvalidDensityMatrix(format!("shape {n}x{m} is not square")));
        }
        let mut herm = 0.0f64;
        for i in 0..n {
            for j in i..n {
                herm = herm.max((entries[[i, j]] - entries[[j, i]].conj()).norm());
            }
        }
        if herm > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let trace: f64 = entries.diag().iter().map(|z| z.re).sum();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} differs from 1")));
        }
        let min = hermitian_eigenvalues(&entries)?.first().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self {
            factors: pivoted_cholesky(&entries),
            frame,
        })
    }

    /// `p ρ₁ + (1 − p) ρ₂`.
    pub fn mixture(p: f64, a: &Self, b: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidRequest(format!("mixture weight {p} outside [0, 1]")));
        }
        if a.frame != b.frame {
            return Err(Error::FrameMismatch {
                left: a.frame.squeeze,
                right: b.frame.squeeze,
            });
        }
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        let fa = a.factors.mapv(|z| z * p.sqrt());
        let fb = b.factors.mapv(|z| z * (1.0 - p).sqrt());
        let factors = ndarray::concatenate(Axis(1), &[fa.view(), fb.view()]).expect("same row count");
        Ok(Self { factors, frame: a.frame })
    }

    pub fn dim(&self) -> usize {
        self.factors.nrows()
    }

    pub fn frame(&self) -> FockFrame {
        self.frame
    }

    pub fn factors(&self) -> &Array2<Complex64> {
        &self.factors
    }

    pub fn entries(&self) -> Array2<Complex64> {
        self.factors.dot(&self.factors.t().mapv(|z| z.conj()))
    }

    pub fn trace(&self) -> f64 {
        self.factors.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `L†L`, which shares the non-zero spectrum of `ρ`.
    pub fn gram(&self) -> Array2<Complex64> {
        self.factors.t().mapv(|z| z.conj()).dot(&self.factors)
    }

    /// Non-zero part of the spectrum, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.gram())
    }

    pub fn purity(&self) -> f64 {
        self.gram().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Re-expresses the density matrix in another Fock frame.
    pub fn to_frame(&self, target: FockFrame) -> Truncated<Self> {
        if target == self.frame {
            return Truncated::exact(self.clone());
        }
        let mut out = Array2::zeros(self.factors.dim());
        let mut defect = 0.0f64;
        for (k, col) in self.factors.columns().into_iter().enumerate() {
            let field = FieldState::new(col.to_owned(), self.frame).expect("fock_dim >= 2");
            let moved = field.to_frame(target);
            defect = defect.max(moved.defect());
            out.column_mut(k).assign(moved.value().amplitudes());
        }
        Truncated::new(
            Self {
                factors: out,
                frame: target,
            },
            defect,
        )
    }
}

fn pivoted_cholesky(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    let mut diag: Vec<f64> = a.diag().iter().map(|z| z.re).collect();
    let mut cols: Vec<Array1<Complex64>> = Vec::new();
    let mut used = vec![false; n];
    loop {
        let (piv, &d) = diag
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .max_by(|x, y| x.1.total_cmp(y.1))
            .unwrap_or((0, &0.0));
        if cols.len() == n || d <= EIGEN_FLOOR {
            break;
        }
        used[piv] = true;
        let mut col = a.column(piv).to_owned();
        for c in &cols {
            let cp = c[piv].conj();
            col.iter_mut().zip(c.iter()).for_each(|(x, y)| *x -= y * cp);
        }
        let scale = 1.0 / d.sqrt();
        col.mapv_inplace(|z| z * scale);
        for i in 0..n {
            diag[i] -= col[i].norm_sqr();
        }
        cols.push(col);
    }
    let mut out = Array2::zeros((n, cols.len().max(1)));
    for (k, c) in cols.iter().enumerate() {
        out.column_mut(k).assign(c);
    }
    out
}

/// `ρ_b = tr_qubit |s⟩⟨s|`, in the frame of `s`.
pub fn reduce_to_field(s: &QuantumState) -> DensityMatrix {
    let n = s.fock_dim();
    let mut factors = Array2::zeros((n, 2));
    factors.column_mut(0).assign(&s.field_component(Spin::Down));
    factors.column_mut(1).assign(&s.field_component(Spin::Up));
    DensityMatrix {
        factors,
        frame: s.frame(),
    }
}

/// 2×2 qubit reduced density matrix in the `(↓, ↑)` ordering.
pub fn reduce_to_qubit(s: &QuantumState) -> Array2<Complex64> {
    reduce_to_field(s).gram().t().to_owned()
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&rho.eigenvalues()?))
}

pub fn entropy_of_spectrum(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x >= EIGEN_FLOOR).map(|&x| -x * x.log2()).sum::<f64>().max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::HilbertConfig;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn product_state_reduces_to_pure() {
        let cfg = HilbertConfig::new(4).unwrap();
        let rho = reduce_to_field(&QuantumState::basis(cfg, 0, Spin::Down));
        let e = rho.entries();
        assert!((e[[0, 0]] - c(1.0)).norm() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        assert!(entropy(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bell_state_reduction() {
        let cfg = HilbertConfig::new(4).unwrap();
        let s = QuantumState::basis(cfg, 0, Spin::Down)
            .add(&QuantumState::basis(cfg, 1, Spin::Up))
            .unwrap()
            .normalized()
            .unwrap();
        let rho = reduce_to_field(&s);
        let e = rho.entries();
        assert!((e[[0, 0]].re - 0.5).abs() < 1e-15 && (e[[1, 1]].re - 0.5).abs() < 1e-15);
        assert!(e[[0, 1]].norm() < 1e-15);
        assert!((entropy(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert!((rho.purity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn scalar_entropy_values() {
        assert!((entropy_of_spectrum(&[0.5, 0.5]) - 1.0).abs() < 1e-15);
        assert!((entropy_of_spectrum(&[0.9, 0.1]) - 0.46900).abs() < 1e-5);
        assert_eq!(entropy_of_spectrum(&[1.0, 1e-16]), 0.0);
    }

    #[test]
    fn dense_round_trip_through_cholesky() {
        let e = ndarray::array![[c(0.7), Complex64::new(0.1, 0.2)], [Complex64::new(0.1, -0.2), c(0.3)]];
        let rho = DensityMatrix::from_entries(e.clone(), FockFrame::LAB).unwrap();
        for (a, b) in rho.entries().iter().zip(e.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
        let direct = hermitian_eigenvalues(&e).unwrap();
        let via = rho.eigenvalues().unwrap();
        for (a, b) in direct.iter().zip(via.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_matrices_rejected() {
        let bad_trace = ndarray::array![[c(0.7), c(0.0)], [c(0.0), c(0.7)]];
        assert!(DensityMatrix::from_entries(bad_trace, FockFrame::LAB).is_err());
        let negative = ndarray::array![[c(1.2), c(0.0)], [c(0.0), c(-0.2)]];
        assert!(DensityMatrix::from_entries(negative, FockFrame::LAB).is_err());
        let non_herm = ndarray::array![[c(0.5), c(0.1)], [c(0.0), c(0.5)]];
        assert!(DensityMatrix::from_entries(non_herm, FockFrame::LAB).is_err());
    }
}
