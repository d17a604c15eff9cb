//! Truncated Fock space of one bosonic mode tensored with a spin-1/2.
//!
//! Product-space index convention: `index(m, s) = 2m + s`, with `s = 0` for
//! `|↓⟩` and `s = 1` for `|↑⟩`. Operators are dense complex matrices built
//! directly in the truncated space; nothing is padded. Whether a truncation
//! is adequate is reported through [`Truncated`] rather than decided here.

mod expm;
mod state;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub use expm::{expm, BandedOperator};
pub use state::{FieldState, FockFrame, QuantumState};

use crate::error::{Error, Result};

/// General dense operator (not necessarily Hermitian).
pub type Operator = Array2<Complex64>;

/// Defect above which a truncated construction is reported as inadequate.
pub const TRUNCATION_THRESHOLD: f64 = 1e-6;

/// Elementwise Hermiticity tolerance, relative to `max(1, max |entry|)`.
pub const HERMITICITY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertConfig {
    fock_dim: usize,
}

impl HilbertConfig {
    pub fn new(fock_dim: usize) -> Result<Self> {
        if fock_dim < 2 {
            return Err(Error::InvalidFockDim(fock_dim));
        }
        Ok(Self { fock_dim })
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    /// Dimension of the field ⊗ spin product space.
    pub fn dim(&self) -> usize {
        2 * self.fock_dim
    }

    pub fn index(&self, m: usize, spin: Spin) -> usize {
        2 * m + spin as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Down = 0,
    Up = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Z,
    /// Raising operator `|↑⟩⟨↓|`.
    Plus,
    /// Lowering operator `|↓⟩⟨↑|`.
    Minus,
}

impl Pauli {
    /// 2×2 matrix in the `(↓, ↑)` ordering.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        match self {
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Z => [[-ONE, ZERO], [ZERO, ONE]],
            Pauli::Plus => [[ZERO, ZERO], [ONE, ZERO]],
            Pauli::Minus => [[ZERO, ONE], [ZERO, ZERO]],
        }
    }
}

/// A value built in a truncated space, together with a measure of how badly
/// the truncation distorts it.
#[derive(Debug, Clone)]
pub struct Truncated<T> {
    value: T,
    defect: f64,
}

impl<T> Truncated<T> {
    pub fn new(value: T, defect: f64) -> Self {
        Self { value, defect }
    }

    pub fn exact(value: T) -> Self {
        Self { value, defect: 0.0 }
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn is_adequate(&self) -> bool {
        self.defect <= TRUNCATION_THRESHOLD
    }

    pub fn value(&self) -> &T {
        &self.value
    }

    pub fn into_inner(self) -> T {
        self.value
    }

    /// Returns the value, or [`Error::Truncation`] when the defect exceeds
    /// [`TRUNCATION_THRESHOLD`].
    pub fn checked(self) -> Result<T> {
        if self.is_adequate() {
            Ok(self.value)
        } else {
            Err(Error::Truncation {
                defect: self.defect,
                threshold: TRUNCATION_THRESHOLD,
            })
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Truncated<U> {
        Truncated {
            value: f(self.value),
            defect: self.defect,
        }
    }
}

/// Dense Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: Array2<Complex64>,
}

impl HermitianOperator {
    pub fn new(entries: Array2<Complex64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c {
            return Err(Error::DimensionMismatch { expected: r, found: c });
        }
        let deviation = hermiticity_defect(&entries);
        let scale = entries.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if deviation > HERMITICITY_TOL * scale {
            return Err(Error::NotSymmetric { deviation });
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<Complex64> {
        self.entries
    }

    /// Largest imaginary part of any entry.
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn real_part(&self) -> Array2<f64> {
        self.entries.mapv(|z| z.re)
    }

    pub fn apply(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        self.entries.dot(v)
    }

    /// Frobenius norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &Array2<Complex64>) -> f64 {
        let ab = self.entries.dot(other);
        let ba = other.dot(&self.entries);
        (&ab - &ba).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn hermiticity_defect(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    worst
}

/// Field annihilation operator `b` on `fock_dim` levels: `⟨m-1|b|m⟩ = √m`.
pub fn annihilation(cfg: HilbertConfig) -> Operator {
    let n = cfg.fock_dim();
    let mut b = Array2::zeros((n, n));
    for m in 1..n {
        b[[m - 1, m]] = Complex64::new((m as f64).sqrt(), 0.0);
    }
    b
}

pub fn creation(cfg: HilbertConfig) -> Operator {
    annihilation(cfg).reversed_axes().as_standard_layout().into_owned()
}

pub fn number(cfg: HilbertConfig) -> HermitianOperator {
    let n = cfg.fock_dim();
    let diag = Array1::from_shape_fn(n, |m| Complex64::new(m as f64, 0.0));
    HermitianOperator { entries: Array2::from_diag(&diag) }
}

/// `b + b†` on the field alone. Square it with an ordinary matrix product to
/// get `(b + b†)²` in the same truncation; the top diagonal entry of that
/// square is then `fock_dim − 1` rather than `2·fock_dim − 1`.
pub fn quadrature_sum(cfg: HilbertConfig) -> HermitianOperator {
    let b = annihilation(cfg);
    let entries = &b + &b.t();
    HermitianOperator { entries }
}

/// Lifts a field operator to the product space (`op ⊗ 1`).
pub fn on_field(op: &Operator) -> Operator {
    let n = op.nrows();
    let mut out = Array2::zeros((2 * n, 2 * n));
    for ((m, k), v) in op.indexed_iter() {
        if *v != ZERO {
            out[[2 * m, 2 * k]] = *v;
            out[[2 * m + 1, 2 * k + 1]] = *v;
        }
    }
    out
}

/// Lifts a spin operator to the product space (`1 ⊗ σ`).
pub fn spin_operator(which: Pauli, cfg: HilbertConfig) -> Operator {
    let sigma = which.matrix();
    let n = cfg.fock_dim();
    let mut out = Array2::zeros((2 * n, 2 * n));
    for m in 0..n {
        for s in 0..2 {
            for t in 0..2 {
                out[[2 * m + s, 2 * m + t]] = sigma[s][t];
            }
        }
    }
    out
}

/// Parity `exp(iπ(b†b + (σ_z + 1)/2))`, i.e. the diagonal `(-1)^(m+s)`.
pub fn parity(cfg: HilbertConfig) -> HermitianOperator {
    let diag = Array1::from_shape_fn(cfg.dim(), |i| {
        let (m, s) = (i / 2, i % 2);
        if (m + s) % 2 == 0 {
            ONE
        } else {
            -ONE
        }
    });
    HermitianOperator { entries: Array2::from_diag(&diag) }
}

/// Field-only parity `(-1)^m`.
pub fn field_parity(cfg: HilbertConfig) -> HermitianOperator {
    let diag = Array1::from_shape_fn(cfg.fock_dim(), |m| if m % 2 == 0 { ONE } else { -ONE });
    HermitianOperator { entries: Array2::from_diag(&diag) }
}

/// Generator `α b† − α* b` as a banded operator.
pub fn displacement_generator(fock_dim: usize, amplitude: Complex64) -> BandedOperator {
    BandedOperator::new(fock_dim)
        .with_band(-1, |row| amplitude * (row as f64).sqrt())
        .with_band(1, |row| -amplitude.conj() * ((row + 1) as f64).sqrt())
}

/// Generator `r (b†² − b²) / 2` as a banded operator.
pub fn squeeze_generator(fock_dim: usize, r: f64) -> BandedOperator {
    BandedOperator::new(fock_dim)
        .with_band(-2, |row| Complex64::new(0.5 * r * ((row * (row - 1)) as f64).sqrt(), 0.0))
        .with_band(2, |row| Complex64::new(-0.5 * r * (((row + 1) * (row + 2)) as f64).sqrt(), 0.0))
}

/// Displacement operator `D(α) = exp(α b† − α* b)` on the field.
///
/// The defect is the largest deviation of `D† b D` from `b + α` on the lower
/// half of the Fock space, which is where truncation first shows.
pub fn displacement(amplitude: Complex64, cfg: HilbertConfig) -> Truncated<Operator> {
    let d = expm(&displacement_generator(cfg.fock_dim(), amplitude).to_dense());
    let b = annihilation(cfg);
    let conj = d.t().mapv(|z| z.conj()).dot(&b).dot(&d);
    let expected = &b + &Array2::from_diag(&Array1::from_elem(cfg.fock_dim(), amplitude));
    let defect = low_block_defect(&conj, &expected, 2);
    Truncated::new(d, defect)
}

/// Squeeze operator `S(r) = exp[r (b†² − b²) / 2]` on the field, with
/// `S† b S = cosh(r) b + sinh(r) b†`. The defect checks that relation on the
/// lowest quarter of the Fock space, since squeezing spreads states further than displacement.
pub fn squeeze(r: f64, cfg: HilbertConfig) -> Truncated<Operator> {
    let s = expm(&squeeze_generator(cfg.fock_dim(), r).to_dense());
    let b = annihilation(cfg);
    let conj = s.t().mapv(|z| z.conj()).dot(&b).dot(&s);
    let expected = b.mapv(|z| z * r.cosh()) + b.t().mapv(|z| z * r.sinh());
    let defect = low_block_defect(&conj, &expected, 4);
    Truncated::new(s, defect)
}

/// Largest entry deviation on the leading `n/fraction` block.
fn low_block_defect(a: &Operator, b: &Operator, fraction: usize) -> f64 {
    let block = (a.nrows() / fraction).max(1);
    let mut worst = 0.0f64;
    for i in 0..block {
        for j in 0..block {
            worst = worst.max((a[[i, j]] - b[[i, j]]).norm());
        }
    }
    worst
}

/// Number of top Fock levels inspected by [`edge_weight`].
pub(crate) fn edge_band(fock_dim: usize) -> usize {
    (fock_dim / 20).max(2).min(fock_dim)
}

/// Probability carried by the top 5% (at least two) of the Fock levels; a
/// state that reaches them is distorted by the truncation.
pub fn edge_weight(amplitudes: &Array1<Complex64>) -> f64 {
    let n = amplitudes.len();
    amplitudes.iter().skip(n - edge_band(n)).map(|a| a.norm_sqr()).sum()
}

/// `D(α)` applied to a field vector without forming the dense matrix.
pub fn displace_field(state: &FieldState, amplitude: Complex64) -> Truncated<FieldState> {
    let out = displacement_generator(state.fock_dim(), amplitude).exp_apply(state.amplitudes());
    let defect = edge_weight(&out);
    Truncated::new(FieldState::new(out, state.frame()).expect("same length"), defect)
}

/// `S(r)` applied to a field vector without forming the dense matrix.
pub fn squeeze_field(state: &FieldState, r: f64) -> Truncated<FieldState> {
    let out = squeeze_generator(state.fock_dim(), r).exp_apply(state.amplitudes());
    let defect = edge_weight(&out);
    Truncated::new(FieldState::new(out, state.frame()).expect("same length"), defect)
}
