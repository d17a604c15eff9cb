use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::{derive_frame, ModelParams};
use crate::eigensolver::SymTridiagonal;
use crate::error::Result;
use crate::fock::{annihilation, on_field, quadrature_sum, spin_operator, FockFrame, HermitianOperator, HilbertConfig, Pauli, QuantumState};

/// Lab-frame Hamiltonian with the ancilla replaced by its Fock number:
/// `n ω_a + (Ω/2)σ_z + ω b†b − λ(b+b†)σ_x + (αλ²/Ω − n g0)(b+b†)²`.
///
/// `(b+b†)²` is the square of the truncated `b+b†`, so its top diagonal entry
/// is `fock_dim − 1`.
pub fn hamiltonian_original(p: &ModelParams, cfg: HilbertConfig) -> Result<HermitianOperator> {
    p.validate()?;
    let lambda = p.lambda();
    let b = annihilation(cfg);
    let x = quadrature_sum(cfg).into_entries();
    let num = b.t().mapv(|z| z.conj()).dot(&b);
    let x2 = x.dot(&x);
    let quad = p.alpha * lambda * lambda / p.big_omega - p.n as f64 * p.g0;

    let field = num.mapv(|z| z * p.omega) + x2.mapv(|z| z * quad);
    let mut h = on_field(&field);
    let sz = spin_operator(Pauli::Z, cfg);
    let sx = spin_operator(Pauli::X, cfg);
    h = h + sz.mapv(|z| z * (0.5 * p.big_omega)) - on_field(&x).dot(&sx).mapv(|z| z * lambda);
    let shift = Complex64::new(p.n as f64 * p.omega_a, 0.0);
    h.diag_mut().mapv_inplace(|z| z + shift);
    symmetrized(h)
}

/// Squeezed-frame Hamiltonian in the `b_n` Fock basis:
/// `(Ω/2)σ_z + ω_n b_n†b_n − λ_n(b_n+b_n†)σ_x + C_n`.
pub fn hamiltonian_squeezed(p: &ModelParams, cfg: HilbertConfig) -> Result<HermitianOperator> {
    let f = derive_frame(p)?;
    let n = cfg.fock_dim();
    let mut h = Array2::<Complex64>::zeros((cfg.dim(), cfg.dim()));
    for m in 0..n {
        for s in 0..2 {
            let i = 2 * m + s;
            let sz = if s == 1 { 1.0 } else { -1.0 };
            h[[i, i]] = Complex64::new(0.5 * p.big_omega * sz + f.omega_n * m as f64 + f.c_n, 0.0);
        }
        if m + 1 < n {
            // ⟨m|b+b†|m+1⟩ = √(m+1), σ_x flips the spin.
            let c = Complex64::new(-f.lambda_n * ((m + 1) as f64).sqrt(), 0.0);
            for s in 0..2 {
                let i = 2 * m + s;
                let j = 2 * (m + 1) + (1 - s);
                h[[i, j]] = c;
                h[[j, i]] = c;
            }
        }
    }
    HermitianOperator::new(h)
}

fn symmetrized(h: Array2<Complex64>) -> Result<HermitianOperator> {
    let ht = h.t().mapv(|z| z.conj());
    HermitianOperator::new((&h + &ht).mapv(|z| z * 0.5))
}

/// One parity block of the squeezed-frame Hamiltonian.
///
/// Basis element `m` of the block is `|m⟩|s⟩` with `s = (m + k) mod 2`, where
/// `k = 0` for the even sector (parity +1) and `k = 1` for the odd one. The
/// block is symmetric tridiagonal.
#[derive(Debug, Clone)]
pub struct ParitySector {
    pub parity: i8,
    pub matrix: SymTridiagonal,
    pub frame: FockFrame,
}

impl ParitySector {
    pub fn spin_of(&self, m: usize) -> usize {
        let k = if self.parity > 0 { 0 } else { 1 };
        (m + k) % 2
    }

    /// Lifts a sector eigenvector to the full product space, tagged with the
    /// squeezed frame.
    pub fn embed(&self, v: &Array1<f64>) -> QuantumState {
        let n = v.len();
        let mut amps = Array1::<Complex64>::zeros(2 * n);
        for m in 0..n {
            amps[2 * m + self.spin_of(m)] = Complex64::new(v[m], 0.0);
        }
        QuantumState::new(amps, self.frame).expect("sector length is the fock dimension")
    }
}

/// `[even, odd]` tridiagonal blocks of the squeezed-frame Hamiltonian.
pub fn parity_sectors(p: &ModelParams, cfg: HilbertConfig) -> Result<[ParitySector; 2]> {
    let f = derive_frame(p)?;
    let n = cfg.fock_dim();
    let frame = FockFrame::squeezed(f.r_n);
    let build = |k: usize, parity: i8| -> Result<ParitySector> {
        let diag = (0..n)
            .map(|m| {
                let sz = if (m + k) % 2 == 1 { 1.0 } else { -1.0 };
                0.5 * p.big_omega * sz + f.omega_n * m as f64 + f.c_n
            })
            .collect();
        let off = (1..n).map(|m| -f.lambda_n * (m as f64).sqrt()).collect();
        Ok(ParitySector {
            parity,
            matrix: SymTridiagonal::new(diag, off)?,
            frame,
        })
    };
    Ok([build(0, 1)?, build(1, -1)?])
}
