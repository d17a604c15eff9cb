use ndarray::Array1;
use num_complex::Complex64;
use serde::Serialize;

use super::{derive_frame, DerivedFrame, ModelParams, Phase};
use crate::error::{Error, Result};
use crate::fock::{displace_field, squeeze_field, FieldState, FockFrame, HilbertConfig, QuantumState, Spin};

/// Closed-form normal-phase results (`χ_n < 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticNP {
    pub l: f64,
    pub omega_e: f64,
    pub e_g: f64,
    pub r_tot: f64,
}

/// Closed-form superradiant-phase results (`χ_n > 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticSP {
    /// `|β|`; the two branches are displaced by `±|β|`.
    pub beta: f64,
    pub theta: f64,
    pub omega_tilde: f64,
    pub lambda_tilde: f64,
    pub l_tilde: f64,
    pub omega_e_tilde: f64,
    pub e_g_tilde: f64,
    pub r_tot_tilde: f64,
}

pub fn analytic_np(p: &ModelParams) -> Result<AnalyticNP> {
    let f = derive_frame(p)?;
    if f.chi_n >= 1.0 {
        return Err(Error::WrongPhase {
            construction: "normal-phase solution",
            requirement: "<",
            chi_n: f.chi_n,
        });
    }
    let root = (1.0 - f.chi_n * f.chi_n).sqrt();
    let l = -0.25 * (1.0 - f.chi_n * f.chi_n).ln();
    Ok(AnalyticNP {
        l,
        omega_e: f.omega_n * root,
        e_g: 0.5 * f.omega_n * (root - 1.0) - 0.5 * p.big_omega + f.c_n,
        r_tot: f.r_n + l,
    })
}

pub fn analytic_sp(p: &ModelParams) -> Result<AnalyticSP> {
    let f = derive_frame(p)?;
    if f.chi_n <= 1.0 {
        return Err(Error::WrongPhase {
            construction: "superradiant-phase solution",
            requirement: ">",
            chi_n: f.chi_n,
        });
    }
    let c2 = f.chi_n * f.chi_n;
    let inv4 = 1.0 / (c2 * c2);
    let beta = (p.big_omega / (4.0 * f.omega_n) * (c2 - 1.0 / c2)).sqrt();
    let l_tilde = -0.25 * (1.0 - inv4).ln();
    let root = (1.0 - inv4).sqrt();
    Ok(AnalyticSP {
        beta,
        theta: 0.5 * (-4.0 * f.lambda_n * beta).atan2(p.big_omega),
        omega_tilde: c2 * p.big_omega,
        lambda_tilde: (p.big_omega * f.omega_n).sqrt() / (2.0 * f.chi_n),
        l_tilde,
        omega_e_tilde: f.omega_n * root,
        e_g_tilde: 0.5 * f.omega_n * (root - 1.0) - 0.25 * p.big_omega * (c2 + 1.0 / c2) + f.c_n,
        r_tot_tilde: f.r_n + l_tilde,
    })
}

/// Order parameter in the classical-oscillator limit: 0 in the NP,
/// `(χ_n² − χ_n⁻²)/4` in the SP.
pub fn psi_q_analytic(p: &ModelParams) -> Result<f64> {
    let f = derive_frame(p)?;
    Ok(match f.phase() {
        Phase::Superradiant => 0.25 * (f.chi_n * f.chi_n - 1.0 / (f.chi_n * f.chi_n)),
        _ => 0.0,
    })
}

/// Unit-norm spin states `|↓⟩±` in the `(↓, ↑)` ordering:
/// `(cos φ, ±sin φ)` with `cos²φ = (1 + χ_n⁻²)/2`.
pub fn spin_down_pm(frame: &DerivedFrame) -> Result<([Complex64; 2], [Complex64; 2])> {
    if frame.chi_n <= 1.0 {
        return Err(Error::WrongPhase {
            construction: "rotated spin states",
            requirement: ">",
            chi_n: frame.chi_n,
        });
    }
    let inv2 = 1.0 / (frame.chi_n * frame.chi_n);
    let c = Complex64::new((0.5 * (1.0 + inv2)).sqrt(), 0.0);
    let s = Complex64::new((0.5 * (1.0 - inv2)).sqrt(), 0.0);
    Ok(([c, s], [c, -s]))
}

/// Rough number of `b_n` Fock levels needed to hold the analytic ground
/// state, including a margin; callers should still check edge weights.
pub fn recommended_fock_dim(p: &ModelParams) -> Result<usize> {
    let f = derive_frame(p)?;
    let size = p.big_omega / f.omega_n;
    // Near χ_n = 1 the closed forms diverge while the finite-size state stays
    // bounded; cap the squeezing accordingly.
    let cap = 0.5 * (2.0 * size.cbrt() + 2.0).ln();
    let (beta, l) = match f.phase() {
        Phase::Superradiant => {
            let sp = analytic_sp(p)?;
            (sp.beta, sp.l_tilde.min(cap))
        }
        Phase::Normal => (0.0, analytic_np(p)?.l.min(cap)),
        Phase::Critical => (0.0, cap),
    };
    let tail = if l > 1e-12 { 40.0 / -(l.tanh().ln()) } else { 0.0 };
    let estimate = beta * beta + 12.0 * beta * l.exp() + tail + 40.0;
    Ok((estimate.ceil() as usize).clamp(40, 1 << 15))
}

fn vacuum(cfg: HilbertConfig, frame: FockFrame) -> FieldState {
    let mut amps = Array1::zeros(cfg.fock_dim());
    amps[0] = Complex64::new(1.0, 0.0);
    FieldState::new(amps, frame).expect("fock_dim >= 2")
}

/// `|G⟩_np = S(r_tot)|0⟩|↓⟩`, returned in the `b_n` frame as `S(l)|0⟩|↓⟩`.
pub fn ground_state_np(p: &ModelParams, cfg: HilbertConfig) -> Result<QuantumState> {
    let f = derive_frame(p)?;
    let np = analytic_np(p)?;
    let field = squeeze_field(&vacuum(cfg, FockFrame::squeezed(f.r_n)), np.l).checked()?;
    Ok(QuantumState::product(&field, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]))
}

fn sp_branches(p: &ModelParams, cfg: HilbertConfig) -> Result<(DerivedFrame, AnalyticSP, FieldState, FieldState)> {
    let f = derive_frame(p)?;
    let sp = analytic_sp(p)?;
    let squeezed = squeeze_field(&vacuum(cfg, FockFrame::squeezed(f.r_n)), sp.l_tilde).checked()?;
    let plus = displace_field(&squeezed, Complex64::new(sp.beta, 0.0)).checked()?;
    let minus = displace_field(&squeezed, Complex64::new(-sp.beta, 0.0)).checked()?;
    Ok((f, sp, plus, minus))
}

/// `|G⟩±_sp = D(±|β|) S(l̃)|0⟩ ⊗ |↓⟩±` in the `b_n` frame (mapping to the lab
/// frame adds the common factor `S(r_n)`).
pub fn ground_states_sp(p: &ModelParams, cfg: HilbertConfig) -> Result<(QuantumState, QuantumState)> {
    let (f, _, plus, minus) = sp_branches(p, cfg)?;
    let (sp_plus, sp_minus) = spin_down_pm(&f)?;
    let gp = QuantumState::product(&plus, sp_plus).normalized()?;
    let gm = QuantumState::product(&minus, sp_minus).normalized()?;
    Ok((gp, gm))
}

/// `|G⟩₀ = |0⟩_b|↓⟩` (lab frame).
pub fn approx_ground_n0(cfg: HilbertConfig) -> QuantumState {
    QuantumState::basis(cfg, 0, Spin::Down)
}

/// `|G⟩₁ ∝ |G⟩⁺_sp + |G⟩⁻_sp`, renormalized, in the `b_n` frame.
pub fn approx_ground_n1(p: &ModelParams, cfg: HilbertConfig) -> Result<QuantumState> {
    let (gp, gm) = ground_states_sp(p, cfg)?;
    gp.add(&gm)?.normalized()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CatParity {
    Even,
    Odd,
}

/// Squeezed cat `∝ [D(|β|) ± D(−|β|)] S(l̃)|0⟩` in the `b_n` frame, i.e.
/// `S(r_n)[D(|β|) ± D(−|β|)]S(l̃)|0⟩` for mode `b`. Renormalized.
pub fn squeezed_cat(p: &ModelParams, parity: CatParity, cfg: HilbertConfig) -> Result<FieldState> {
    let (_, _, plus, minus) = sp_branches(p, cfg)?;
    let sign = match parity {
        CatParity::Even => 1.0,
        CatParity::Odd => -1.0,
    };
    let amps = plus.amplitudes() + &minus.amplitudes().mapv(|a| a * sign);
    let field = FieldState::new(amps, plus.frame())?;
    if field.norm_sqr() < 1e-28 {
        return Err(Error::ZeroNorm {
            context: "odd cat with zero displacement",
            norm_sqr: field.norm_sqr(),
        });
    }
    field.normalized()
}

/// Re-expresses a squeezed-frame state in the lab Fock basis of mode `b`.
pub fn frame_change_to_b(state: &QuantumState) -> Result<QuantumState> {
    state.to_frame(FockFrame::LAB).checked()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::annihilation;

    fn sp_params() -> ModelParams {
        ModelParams::from_ratios(100.0, 0.3, 0.0, 0.245, 1).unwrap()
    }

    #[test]
    fn np_limits_at_zero_coupling() {
        let p = ModelParams::from_ratios(10.0, 0.0, 0.0, 0.1, 1).unwrap();
        let np = analytic_np(&p).unwrap();
        let f = derive_frame(&p).unwrap();
        assert_eq!(np.l, 0.0);
        assert!((np.omega_e - f.omega_n).abs() < 1e-15);
        assert!((np.e_g - (f.c_n - 5.0)).abs() < 1e-12);
    }

    #[test]
    fn wrong_phase_is_reported() {
        assert!(matches!(analytic_np(&sp_params()), Err(Error::WrongPhase { .. })));
        let np = ModelParams::from_ratios(100.0, 0.3, 0.0, 0.245, 0).unwrap();
        assert!(matches!(analytic_sp(&np), Err(Error::WrongPhase { .. })));
        assert!(matches!(squeezed_cat(&np, CatParity::Even, HilbertConfig::new(10).unwrap()), Err(Error::WrongPhase { .. })));
    }

    #[test]
    fn order_parameter_at_root_two() {
        // χ_n = √2 with α = 0, n = 0 means χ = √2.
        let p = ModelParams::from_ratios(1000.0, 2f64.sqrt(), 0.0, 0.0, 0).unwrap();
        assert!((psi_q_analytic(&p).unwrap() - 0.375).abs() < 1e-12);
    }

    #[test]
    fn spin_states_are_unit_and_match_rotation_angle() {
        let p = sp_params();
        let f = derive_frame(&p).unwrap();
        let sp = analytic_sp(&p).unwrap();
        let (up, dn) = spin_down_pm(&f).unwrap();
        for s in [up, dn] {
            assert!((s[0].norm_sqr() + s[1].norm_sqr() - 1.0).abs() < 1e-14);
        }
        // |↓⟩⁺ equals the rotated down state cos θ|↓⟩ − sin θ|↑⟩.
        assert!((up[0].re - sp.theta.cos()).abs() < 1e-12);
        assert!((up[1].re + sp.theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn sp_branches_are_parity_partners() {
        let p = ModelParams::from_ratios(20.0, 0.3, 0.0, 0.245, 1).unwrap();
        let cfg = HilbertConfig::new(recommended_fock_dim(&p).unwrap()).unwrap();
        let (gp, gm) = ground_states_sp(&p, cfg).unwrap();
        let overlap = gp.parity_flipped().inner(&gm).unwrap();
        assert!(overlap.norm() > 1.0 - 1e-4);
        // Branch coherence in the b_n frame is ±|β|.
        let b = annihilation(cfg);
        let sp = analytic_sp(&p).unwrap();
        let field = gp.field_component(Spin::Down);
        let fu = gp.field_component(Spin::Up);
        let mean: Complex64 = field.iter().zip(b.dot(&field).iter()).map(|(a, c)| a.conj() * c).sum::<Complex64>()
            + fu.iter().zip(b.dot(&fu).iter()).map(|(a, c)| a.conj() * c).sum::<Complex64>();
        assert!((mean.re - sp.beta).abs() < 1e-8);
    }

    #[test]
    fn degenerate_cat_is_squeezed_vacuum() {
        // χ_n slightly above one gives a tiny β; the even cat approaches S(l̃)|0⟩.
        let p = ModelParams::from_ratios(1e-6, 1.0 + 1e-3, 0.0, 0.0, 0).unwrap();
        let cfg = HilbertConfig::new(200).unwrap();
        let cat = squeezed_cat(&p, CatParity::Even, cfg).unwrap();
        let sp = analytic_sp(&p).unwrap();
        let sv = squeeze_field(&vacuum(cfg, cat.frame()), sp.l_tilde).into_inner();
        assert!(cat.inner(&sv).unwrap().norm() > 1.0 - 1e-6);
    }

    #[test]
    fn recommended_dim_grows_with_beta() {
        let small = recommended_fock_dim(&ModelParams::from_ratios(10.0, 0.3, 0.0, 0.245, 1).unwrap()).unwrap();
        let large = recommended_fock_dim(&sp_params()).unwrap();
        assert!(large > small);
        assert!(large > 757);
    }
}
