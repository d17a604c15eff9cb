use ndarray::Array1;
use num_complex::Complex64;
use serde::Serialize;

use super::{edge_weight, squeeze_generator, HilbertConfig, Spin, Truncated};
use crate::error::{Error, Result};

/// Fock basis in which a state's amplitudes are expressed.
///
/// A frame with squeeze `r` uses the number states of `c = S(r) b S†(r)`,
/// so amplitudes `a_m` stand for `S(r) Σ a_m |m⟩_b`. The lab frame of mode
/// `b` has `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockFrame {
    pub squeeze: f64,
}

impl FockFrame {
    pub const LAB: FockFrame = FockFrame { squeeze: 0.0 };

    pub fn squeezed(squeeze: f64) -> Self {
        Self { squeeze }
    }

    pub fn is_lab(&self) -> bool {
        self.squeeze == 0.0
    }

    fn ensure_same(&self, other: &FockFrame) -> Result<()> {
        if self.squeeze == other.squeeze {
            Ok(())
        } else {
            Err(Error::FrameMismatch {
                left: self.squeeze,
                right: other.squeeze,
            })
        }
    }
}

/// Re-expresses field amplitudes given in frame `from` in frame `to`.
fn reframe_field(amps: &Array1<Complex64>, from: FockFrame, to: FockFrame) -> Truncated<Array1<Complex64>> {
    let delta = from.squeeze - to.squeeze;
    if delta == 0.0 {
        return Truncated::exact(amps.clone());
    }
    let out = squeeze_generator(amps.len(), delta).exp_apply(amps);
    let defect = edge_weight(&out);
    Truncated::new(out, defect)
}

/// Joint field-qubit state; amplitude of `|m⟩|s⟩` sits at index `2m + s`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Array1<Complex64>,
    frame: FockFrame,
}

impl QuantumState {
    pub fn new(amplitudes: Array1<Complex64>, frame: FockFrame) -> Result<Self> {
        let len = amplitudes.len();
        if len < 4 || !len.is_multiple_of(2) {
            return Err(Error::InvalidRequest(format!(
                "product-space vector length {len} must be even and at least 4"
            )));
        }
        Ok(Self { amplitudes, frame })
    }

    pub fn basis(cfg: HilbertConfig, m: usize, spin: Spin) -> Self {
        let mut amplitudes = Array1::zeros(cfg.dim());
        amplitudes[cfg.index(m, spin)] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            frame: FockFrame::LAB,
        }
    }

    /// `|field⟩ ⊗ (spin[0]|↓⟩ + spin[1]|↑⟩)`.
    pub fn product(field: &FieldState, spin: [Complex64; 2]) -> Self {
        let n = field.fock_dim();
        let mut amplitudes = Array1::zeros(2 * n);
        for (m, a) in field.amplitudes().iter().enumerate() {
            amplitudes[2 * m] = a * spin[0];
            amplitudes[2 * m + 1] = a * spin[1];
        }
        Self {
            amplitudes,
            frame: field.frame(),
        }
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn frame(&self) -> FockFrame {
        self.frame
    }

    pub fn fock_dim(&self) -> usize {
        self.amplitudes.len() / 2
    }

    pub fn config(&self) -> HilbertConfig {
        HilbertConfig::new(self.fock_dim()).expect("length checked on construction")
    }

    pub fn amplitude(&self, m: usize, spin: Spin) -> Complex64 {
        self.amplitudes[2 * m + spin as usize]
    }

    /// Unnormalized field vector attached to one spin state.
    pub fn field_component(&self, spin: Spin) -> Array1<Complex64> {
        let s = spin as usize;
        Array1::from_shape_fn(self.fock_dim(), |m| self.amplitudes[2 * m + s])
    }

    pub fn from_components(down: &Array1<Complex64>, up: &Array1<Complex64>, frame: FockFrame) -> Result<Self> {
        if down.len() != up.len() {
            return Err(Error::DimensionMismatch {
                expected: down.len(),
                found: up.len(),
            });
        }
        let n = down.len();
        let mut amplitudes = Array1::zeros(2 * n);
        for m in 0..n {
            amplitudes[2 * m] = down[m];
            amplitudes[2 * m + 1] = up[m];
        }
        Self::new(amplitudes, frame)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 < 1e-28 {
            return Err(Error::ZeroNorm {
                context: "normalizing a joint state",
                norm_sqr: n2,
            });
        }
        let inv = 1.0 / n2.sqrt();
        Ok(Self {
            amplitudes: self.amplitudes.mapv(|a| a * inv),
            frame: self.frame,
        })
    }

    /// `⟨self|other⟩`; both states must share frame and dimension.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.frame.ensure_same(&other.frame)?;
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.mapv(|a| a * factor),
            frame: self.frame,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.frame.ensure_same(&other.frame)?;
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(Self {
            amplitudes: &self.amplitudes + &other.amplitudes,
            frame: self.frame,
        })
    }

    /// Applies the parity `(-1)^(m+s)`.
    pub fn parity_flipped(&self) -> Self {
        let amplitudes = Array1::from_shape_fn(self.amplitudes.len(), |i| {
            let m = i / 2;
            let s = i % 2;
            if (m + s) % 2 == 0 {
                self.amplitudes[i]
            } else {
                -self.amplitudes[i]
            }
        });
        Self {
            amplitudes,
            frame: self.frame,
        }
    }

    /// Probability in the top levels of the Fock space (see [`edge_weight`]).
    pub fn edge_weight(&self) -> f64 {
        let n = self.fock_dim();
        let band = super::edge_band(n);
        self.amplitudes.iter().skip(2 * (n - band)).map(|a| a.norm_sqr()).sum()
    }

    /// Re-expresses the state in another Fock frame.
    pub fn to_frame(&self, target: FockFrame) -> Truncated<Self> {
        let down = reframe_field(&self.field_component(Spin::Down), self.frame, target);
        let up = reframe_field(&self.field_component(Spin::Up), self.frame, target);
        let defect = down.defect().max(up.defect());
        let state = Self::from_components(down.value(), up.value(), target).expect("components share a length");
        Truncated::new(state, defect)
    }
}

/// State of the field mode alone.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    amplitudes: Array1<Complex64>,
    frame: FockFrame,
}

impl FieldState {
    pub fn new(amplitudes: Array1<Complex64>, frame: FockFrame) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidFockDim(amplitudes.len()));
        }
        Ok(Self { amplitudes, frame })
    }

    pub fn fock(cfg: HilbertConfig, m: usize) -> Self {
        let mut amplitudes = Array1::zeros(cfg.fock_dim());
        amplitudes[m] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            frame: FockFrame::LAB,
        }
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn frame(&self) -> FockFrame {
        self.frame
    }

    pub fn fock_dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 < 1e-28 {
            return Err(Error::ZeroNorm {
                context: "normalizing a field state",
                norm_sqr: n2,
            });
        }
        let inv = 1.0 / n2.sqrt();
        Ok(Self {
            amplitudes: self.amplitudes.mapv(|a| a * inv),
            frame: self.frame,
        })
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.frame.ensure_same(&other.frame)?;
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn edge_weight(&self) -> f64 {
        edge_weight(&self.amplitudes)
    }

    pub fn to_frame(&self, target: FockFrame) -> Truncated<Self> {
        reframe_field(&self.amplitudes, self.frame, target).map(|amplitudes| Self {
            amplitudes,
            frame: target,
        })
    }
}
