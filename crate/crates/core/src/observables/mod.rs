//! Measurements on joint and field states.
//!
//! Field observables of mode `b` are evaluated in whatever Fock frame the
//! state is tagged with, through `S†(r) b S(r) = cosh(r) c + sinh(r) c†`, so
//! squeezed-frame eigenvectors never need to be re-expanded in the lab basis.

mod density;
mod wigner;

use ndarray::Array1;
use num_complex::Complex64;

pub use density::{entropy, entropy_of_spectrum, reduce_to_field, reduce_to_qubit, DensityMatrix, EIGEN_FLOOR};
pub use wigner::{hermite_functions, resolve_grid, wigner, wigner_point, GridAxis, GridSpec, WignerGrid};

use crate::error::{Error, Result};
use crate::fock::{FieldState, HermitianOperator, QuantumState, Spin};
use crate::model::{DerivedFrame, ModelParams};

/// Probabilities below this are treated as exact zeros.
pub const PROBABILITY_FLOOR: f64 = 1e-14;
/// Allowed distance of resolved parities from ±1.
pub const PARITY_TOL: f64 = 1e-6;

/// `(cosh r · c + sinh r · c†) v` for a field vector in a frame of squeeze `r`.
fn lab_annihilation(v: &Array1<Complex64>, r: f64) -> Array1<Complex64> {
    let n = v.len();
    let (ch, sh) = (r.cosh(), r.sinh());
    Array1::from_shape_fn(n, |m| {
        let lower = if m + 1 < n { v[m + 1] * ((m + 1) as f64).sqrt() } else { Complex64::new(0.0, 0.0) };
        let raise = if m > 0 { v[m - 1] * (m as f64).sqrt() } else { Complex64::new(0.0, 0.0) };
        lower * ch + raise * sh
    })
}

fn dot(a: &Array1<Complex64>, b: &Array1<Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `⟨b⟩` of mode `b`, whatever the frame of `s`.
pub fn coherence(s: &QuantumState) -> Complex64 {
    let r = s.frame().squeeze;
    [Spin::Down, Spin::Up]
        .iter()
        .map(|&spin| {
            let f = s.field_component(spin);
            dot(&f, &lab_annihilation(&f, r))
        })
        .sum()
}

/// `⟨a|b|c⟩` for mode `b`; both states must share a frame.
pub fn transition_coherence(a: &QuantumState, c: &QuantumState) -> Result<Complex64> {
    a.inner(c)?;
    let r = a.frame().squeeze;
    Ok([Spin::Down, Spin::Up]
        .iter()
        .map(|&spin| dot(&a.field_component(spin), &lab_annihilation(&c.field_component(spin), r)))
        .sum())
}

/// `⟨b†b⟩` of mode `b`, whatever the frame of `s`.
pub fn occupation(s: &QuantumState) -> f64 {
    let r = s.frame().squeeze;
    [Spin::Down, Spin::Up]
        .iter()
        .map(|&spin| lab_annihilation(&s.field_component(spin), r).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum()
}

/// `ψ_q = e^{−4 r_n} (ω/Ω) ⟨b†b⟩`.
pub fn order_parameter(s: &QuantumState, frame: &DerivedFrame, p: &ModelParams) -> f64 {
    (-4.0 * frame.r_n).exp() * p.omega / p.big_omega * occupation(s)
}

/// `|⟨a|b⟩|²`; `b` is first re-expressed in the frame of `a` if needed.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    if a.frame() == b.frame() {
        return Ok(a.inner(b)?.norm_sqr());
    }
    let moved = b.to_frame(a.frame()).checked()?;
    Ok(a.inner(&moved)?.norm_sqr())
}

/// `|⟨a|b⟩|²` for field states, reframing `b` if needed.
pub fn field_fidelity(a: &FieldState, b: &FieldState) -> Result<f64> {
    if a.frame() == b.frame() {
        return Ok(a.inner(b)?.norm_sqr());
    }
    let moved = b.to_frame(a.frame()).checked()?;
    Ok(a.inner(&moved)?.norm_sqr())
}

/// `⟨ψ|ρ|ψ⟩`, reframing `ψ` into the frame of `ρ` if needed.
pub fn fidelity_mixed(rho: &DensityMatrix, pure: &FieldState) -> Result<f64> {
    let psi = if pure.frame() == rho.frame() {
        pure.clone()
    } else {
        pure.to_frame(rho.frame()).checked()?
    };
    if psi.fock_dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: psi.fock_dim(),
        });
    }
    Ok(rho
        .factors()
        .columns()
        .into_iter()
        .map(|col| dot(psi.amplitudes(), &col.to_owned()).norm_sqr())
        .sum())
}

fn expectation(op: &HermitianOperator, a: &QuantumState, b: &QuantumState) -> Complex64 {
    dot(a.amplitudes(), &op.apply(b.amplitudes()))
}

/// Splits a near-degenerate doublet into its parity eigenstates.
///
/// `a` and `b` must be orthonormal and share a frame. Returns
/// `(even, odd)`, each with its largest amplitude made real and positive.
pub fn parity_resolve(a: &QuantumState, b: &QuantumState, parity: &HermitianOperator) -> Result<(QuantumState, QuantumState)> {
    // Fails early on a frame mismatch.
    a.inner(b)?;
    let paa = expectation(parity, a, a).re;
    let pbb = expectation(parity, b, b).re;
    let pab = expectation(parity, a, b);
    let mean = 0.5 * (paa + pbb);
    let half = ((0.5 * (paa - pbb)).powi(2) + pab.norm_sqr()).sqrt();
    let (hi, lo) = (mean + half, mean - half);
    if (hi - 1.0).abs() > PARITY_TOL || (lo + 1.0).abs() > PARITY_TOL {
        return Err(Error::ParityMixed { eigenvalues: [lo, hi] });
    }
    let combine = |lambda: f64| -> Result<QuantumState> {
        // Eigenvector of [[paa, pab], [pab*, pbb]] for eigenvalue lambda.
        let (ca, cb) = if pab.norm() > 1e-14 {
            (pab, Complex64::new(lambda - paa, 0.0))
        } else if (paa - lambda).abs() < (pbb - lambda).abs() {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
        };
        let v = a.scaled(ca).add(&b.scaled(cb))?.normalized()?;
        Ok(fix_phase(v))
    };
    Ok((combine(hi)?, combine(lo)?))
}

/// Multiplies by the phase that makes the largest amplitude real positive.
pub fn fix_phase(s: QuantumState) -> QuantumState {
    let big = s
        .amplitudes()
        .iter()
        .copied()
        .max_by(|x, y| x.norm_sqr().total_cmp(&y.norm_sqr()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    if big.norm() == 0.0 {
        return s;
    }
    s.scaled(big.conj() / big.norm())
}

/// Projects the qubit onto `spin = (c↓, c↑)`: returns the renormalized field
/// state `⟨spin|s⟩` and the probability of that outcome.
pub fn project_qubit(s: &QuantumState, spin: [Complex64; 2]) -> Result<(FieldState, f64)> {
    let norm = spin[0].norm_sqr() + spin[1].norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidRequest(format!("spin vector has squared norm {norm}")));
    }
    let down = s.field_component(Spin::Down);
    let up = s.field_component(Spin::Up);
    let amps = down.mapv(|z| z * spin[0].conj()) + up.mapv(|z| z * spin[1].conj());
    let field = FieldState::new(amps, s.frame())?;
    let probability = field.norm_sqr();
    if probability < PROBABILITY_FLOOR {
        return Err(Error::ZeroNorm {
            context: "qubit projection outcome has vanishing probability",
            norm_sqr: probability,
        });
    }
    Ok((field.normalized()?, probability))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{parity, HilbertConfig};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn vacuum_has_no_coherence_or_occupation() {
        let s = QuantumState::basis(HilbertConfig::new(5).unwrap(), 0, Spin::Down);
        assert_eq!(coherence(&s), c(0.0));
        assert_eq!(occupation(&s), 0.0);
    }

    #[test]
    fn occupation_of_fock_three() {
        let s = QuantumState::basis(HilbertConfig::new(8).unwrap(), 3, Spin::Up);
        assert!((occupation(&s) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn frame_formulas_match_explicit_reframing() {
        let cfg = HilbertConfig::new(60).unwrap();
        let s = QuantumState::basis(cfg, 1, Spin::Down)
            .add(&QuantumState::basis(cfg, 2, Spin::Up).scaled(Complex64::new(0.3, 0.4)))
            .unwrap()
            .normalized()
            .unwrap();
        let tagged = QuantumState::new(s.amplitudes().clone(), crate::fock::FockFrame::squeezed(0.4)).unwrap();
        let lab = tagged.to_frame(crate::fock::FockFrame::LAB).checked().unwrap();
        assert!((occupation(&tagged) - occupation(&lab)).abs() < 1e-10);
        assert!((coherence(&tagged) - coherence(&lab)).norm() < 1e-10);
    }

    #[test]
    fn fidelity_basics() {
        let cfg = HilbertConfig::new(6).unwrap();
        let a = QuantumState::basis(cfg, 0, Spin::Down);
        let b = QuantumState::basis(cfg, 1, Spin::Down);
        assert_eq!(fidelity(&a, &a).unwrap(), 1.0);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn projection_outcomes() {
        let cfg = HilbertConfig::new(4).unwrap();
        let s = QuantumState::basis(cfg, 0, Spin::Down);
        let (f, p) = project_qubit(&s, [c(1.0), c(0.0)]).unwrap();
        assert_eq!(p, 1.0);
        assert_eq!(f.amplitudes()[0], c(1.0));
        assert!(matches!(project_qubit(&s, [c(0.0), c(1.0)]), Err(Error::ZeroNorm { .. })));
        assert!(matches!(project_qubit(&s, [c(1.0), c(1.0)]), Err(Error::InvalidRequest(_))));
    }

    #[test]
    fn resolves_a_mixed_doublet() {
        let cfg = HilbertConfig::new(4).unwrap();
        let even = QuantumState::basis(cfg, 0, Spin::Down);
        let odd = QuantumState::basis(cfg, 1, Spin::Down);
        let a = even.add(&odd).unwrap().normalized().unwrap();
        let b = even.add(&odd.scaled(c(-1.0))).unwrap().normalized().unwrap();
        let (e, o) = parity_resolve(&a, &b, &parity(cfg)).unwrap();
        assert!((fidelity(&e, &even).unwrap() - 1.0).abs() < 1e-12);
        assert!((fidelity(&o, &odd).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn same_parity_pair_is_rejected() {
        let cfg = HilbertConfig::new(4).unwrap();
        let a = QuantumState::basis(cfg, 0, Spin::Down);
        let b = QuantumState::basis(cfg, 1, Spin::Up);
        assert!(matches!(parity_resolve(&a, &b, &parity(cfg)), Err(Error::ParityMixed { .. })));
    }
}
