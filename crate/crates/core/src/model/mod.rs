//! Physical parameters, the photon-number-dependent squeezed frame, the two
//! Hamiltonian builders and the closed-form ground-state results.
//!
//! Conventions: ℏ = 1, `chi = 2λ/√(Ωω)` is the stored coupling, and the
//! ancilla enters only through its Fock number `n`.

mod analytic;
mod hamiltonian;

use serde::Serialize;

pub use analytic::{
    analytic_np, analytic_sp, approx_ground_n0, approx_ground_n1, frame_change_to_b, ground_state_np,
    ground_states_sp, psi_q_analytic, recommended_fock_dim, spin_down_pm, squeezed_cat, AnalyticNP, AnalyticSP,
    CatParity,
};
pub use hamiltonian::{hamiltonian_original, hamiltonian_squeezed, parity_sectors, ParitySector};

use crate::error::{Error, Result};

/// Relative tolerance within which `chi` is classified as critical.
pub const CRITICAL_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub omega: f64,
    #[serde(rename = "Omega")]
    pub big_omega: f64,
    pub chi: f64,
    pub alpha: f64,
    pub g0: f64,
    pub omega_a: f64,
    pub n: u32,
}

impl ModelParams {
    /// Validated parameters with `omega_a = omega`.
    pub fn new(omega: f64, big_omega: f64, chi: f64, alpha: f64, g0: f64, n: u32) -> Result<Self> {
        let p = Self {
            omega,
            big_omega,
            chi,
            alpha,
            g0,
            omega_a: omega,
            n,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters in units of `omega = 1`: `Omega/omega`, `g0/omega`.
    pub fn from_ratios(omega_ratio: f64, chi: f64, alpha: f64, g0_ratio: f64, n: u32) -> Result<Self> {
        Self::new(1.0, omega_ratio, chi, alpha, g0_ratio, n)
    }

    pub fn with_omega_a(mut self, omega_a: f64) -> Result<Self> {
        self.omega_a = omega_a;
        self.validate()?;
        Ok(self)
    }

    pub fn with_chi(mut self, chi: f64) -> Result<Self> {
        self.chi = chi;
        self.validate()?;
        Ok(self)
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool, &'static str); 6] = [
            ("omega", self.omega, self.omega > 0.0, "must be positive"),
            ("Omega", self.big_omega, self.big_omega > 0.0, "must be positive"),
            ("chi", self.chi, self.chi >= 0.0, "must be non-negative"),
            ("alpha", self.alpha, self.alpha >= 0.0, "must be non-negative"),
            ("g0", self.g0, self.g0 >= 0.0, "must be non-negative"),
            ("omega_a", self.omega_a, true, ""),
        ];
        for (name, value, ok, reason) in checks {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
            if !ok {
                return Err(Error::InvalidParameter { name, value, reason });
            }
        }
        Ok(())
    }

    /// Bare coupling `λ = (χ/2)√(Ωω)`.
    pub fn lambda(&self) -> f64 {
        0.5 * self.chi * (self.big_omega * self.omega).sqrt()
    }

    /// `1 + αχ² − 4n·g0/ω`, the squared frequency ratio of the field mode.
    pub fn frame_argument(&self) -> f64 {
        1.0 + self.alpha * self.chi * self.chi - 4.0 * self.n as f64 * self.g0 / self.omega
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Normal,
    Superradiant,
    Critical,
}

/// Squeezed-frame quantities for ancilla number `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedFrame {
    pub r_n: f64,
    pub omega_n: f64,
    pub lambda_n: f64,
    pub c_n: f64,
    pub chi_n: f64,
}

impl DerivedFrame {
    /// Field frequency before squeezing divided by after: `e^(2 r_n)`.
    pub fn squeeze_factor(&self) -> f64 {
        (2.0 * self.r_n).exp()
    }

    pub fn phase(&self) -> Phase {
        if (self.chi_n - 1.0).abs() <= CRITICAL_REL_TOL {
            Phase::Critical
        } else if self.chi_n < 1.0 {
            Phase::Normal
        } else {
            Phase::Superradiant
        }
    }
}

pub fn derive_frame(p: &ModelParams) -> Result<DerivedFrame> {
    p.validate()?;
    let argument = p.frame_argument();
    if argument <= 0.0 {
        return Err(Error::FrameUndefined { argument });
    }
    let r_n = -0.25 * argument.ln();
    let shrink = (-2.0 * r_n).exp();
    let omega_n = shrink * p.omega;
    let lambda_n = r_n.exp() * p.lambda();
    let c_n = p.n as f64 * p.omega_a + (shrink - 1.0) * 0.5 * p.omega;
    let chi_n = 2.0 * lambda_n / (p.big_omega * omega_n).sqrt();
    Ok(DerivedFrame {
        r_n,
        omega_n,
        lambda_n,
        c_n,
        chi_n,
    })
}

/// NP iff `χ < e^(−2 r_n)`; critical within relative tolerance 1e−10.
pub fn classify_phase(p: &ModelParams) -> Result<Phase> {
    let f = derive_frame(p)?;
    let threshold = (-2.0 * f.r_n).exp();
    if (p.chi - threshold).abs() <= CRITICAL_REL_TOL * threshold {
        Ok(Phase::Critical)
    } else if p.chi < threshold {
        Ok(Phase::Normal)
    } else {
        Ok(Phase::Superradiant)
    }
}

/// Which side of the critical coupling the superradiant phase occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuperradiantSide {
    /// `χ > χ_c` (ordinary transition, `α < 1`).
    Above,
    /// `χ < χ_c` (reversed transition, `α > 1`).
    Below,
}

/// Critical coupling `χ_c = √[(1 − 4n·g0/ω)/(1 − α)]`.
pub fn critical_chi(p: &ModelParams) -> Result<f64> {
    p.validate()?;
    if p.alpha == 1.0 {
        return Err(Error::NoCriticalPoint {
            reason: "alpha = 1 makes the critical condition independent of chi",
        });
    }
    let numerator = 1.0 - 4.0 * p.n as f64 * p.g0 / p.omega;
    let square = numerator / (1.0 - p.alpha);
    if !(square > 0.0) || !square.is_finite() {
        return Err(Error::NoCriticalPoint {
            reason: "chi_c^2 = (1 - 4n g0/omega)/(1 - alpha) is not positive",
        });
    }
    Ok(square.sqrt())
}

/// `χ_c` together with the side on which the superradiant phase lies.
pub fn critical_point(p: &ModelParams) -> Result<(f64, SuperradiantSide)> {
    let chi_c = critical_chi(p)?;
    let side = if p.alpha < 1.0 {
        SuperradiantSide::Above
    } else {
        SuperradiantSide::Below
    };
    Ok((chi_c, side))
}
