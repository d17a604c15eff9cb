use serde::Serialize;

use crate::eigensolver::{lowest_eigenpairs, EigenResult, DEFAULT_TOL};
use crate::error::Result;
use crate::fock::{HilbertConfig, QuantumState, TRUNCATION_THRESHOLD};
use crate::model::{derive_frame, hamiltonian_original, hamiltonian_squeezed, parity_sectors, recommended_fock_dim, DerivedFrame, ModelParams};
use crate::observables::{entropy, order_parameter, reduce_to_field, transition_coherence};

/// Edge weight the automatic dimension search aims for.
pub const AUTO_EDGE_TARGET: f64 = 1e-12;
/// Largest dimension the automatic search will try.
pub const MAX_AUTO_FOCK_DIM: usize = 1 << 15;
/// Eigenpairs solved per parity sector.
const PER_SECTOR: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FockDim {
    Fixed(usize),
    /// Start from the analytic estimate and double until the ground states
    /// keep less than [`AUTO_EDGE_TARGET`] of their weight in the top levels.
    Auto,
}

/// Squeezed-frame solution at one parameter point.
#[derive(Debug, Clone)]
pub struct PointSolution {
    pub params: ModelParams,
    pub frame: DerivedFrame,
    pub fock_dim: usize,
    pub even: EigenResult,
    pub odd: EigenResult,
    /// Lowest even-parity state; the canonical ground state.
    pub ground: QuantumState,
    /// Lowest odd-parity state.
    pub odd_ground: QuantumState,
    /// `(energy, parity)` of all solved levels, ascending.
    pub spectrum: Vec<(f64, i8)>,
}

impl PointSolution {
    pub fn ground_energy(&self) -> f64 {
        self.spectrum[0].0
    }

    /// `E1 − E0`.
    pub fn gap(&self) -> f64 {
        self.spectrum[1].0 - self.spectrum[0].0
    }

    /// `(E2 − E1)/ω_n`: the first excitation above the (near-)degenerate
    /// doublet in the SP and the second oscillator quantum in the NP, both of
    /// which approach the analytic excitation energy.
    pub fn excitation_gap(&self) -> f64 {
        (self.spectrum[2].0 - self.spectrum[1].0) / self.frame.omega_n
    }

    pub fn max_residual(&self) -> f64 {
        self.even.max_residual().max(self.odd.max_residual())
    }

    /// Probability in the top Fock levels, worst of the two sector ground states.
    pub fn edge_weight(&self) -> f64 {
        self.ground.edge_weight().max(self.odd_ground.edge_weight())
    }

    pub fn truncation_adequate(&self) -> bool {
        self.edge_weight() <= TRUNCATION_THRESHOLD
    }

    pub fn psi_q(&self) -> f64 {
        order_parameter(&self.ground, &self.frame, &self.params)
    }

    /// Entanglement entropy (bits) of the canonical ground state.
    pub fn entropy(&self) -> Result<f64> {
        entropy(&reduce_to_field(&self.ground))
    }

    /// `|⟨b⟩|` on the symmetry-broken branch `(|G_even⟩ + e^{iφ}|G_odd⟩)/√2`,
    /// i.e. `|⟨G_even|b|G_odd⟩|`.
    pub fn branch_coherence(&self) -> Result<f64> {
        Ok(transition_coherence(&self.ground, &self.odd_ground)?.norm())
    }
}

fn solve_fixed(p: &ModelParams, frame: DerivedFrame, fock_dim: usize, tol: f64) -> Result<PointSolution> {
    let cfg = HilbertConfig::new(fock_dim)?;
    let [even_sector, odd_sector] = parity_sectors(p, cfg)?;
    let k = PER_SECTOR.min(fock_dim);
    let even = even_sector.matrix.lowest(k, tol)?;
    let odd = odd_sector.matrix.lowest(k, tol)?;
    let ground = canonical_sign(even_sector.embed(&even.vector(0)));
    let odd_ground = canonical_sign(odd_sector.embed(&odd.vector(0)));
    let mut spectrum: Vec<(f64, i8)> = even
        .values
        .iter()
        .map(|&e| (e, 1))
        .chain(odd.values.iter().map(|&e| (e, -1)))
        .collect();
    spectrum.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    Ok(PointSolution {
        params: *p,
        frame,
        fock_dim,
        even,
        odd,
        ground,
        odd_ground,
        spectrum,
    })
}

/// Makes the largest amplitude positive so eigenvector signs are reproducible.
fn canonical_sign(s: QuantumState) -> QuantumState {
    crate::observables::fix_phase(s)
}

/// Solves the two parity sectors of the squeezed-frame Hamiltonian.
pub fn solve_point(p: &ModelParams, fock: FockDim, tol: f64) -> Result<PointSolution> {
    let frame = derive_frame(p)?;
    match fock {
        FockDim::Fixed(n) => solve_fixed(p, frame, n, tol),
        FockDim::Auto => {
            let mut n = recommended_fock_dim(p)?;
            loop {
                let sol = solve_fixed(p, frame, n, tol)?;
                if sol.edge_weight() <= AUTO_EDGE_TARGET || n >= MAX_AUTO_FOCK_DIM {
                    return Ok(sol);
                }
                n = (2 * n).min(MAX_AUTO_FOCK_DIM);
            }
        }
    }
}

/// Lowest `k` eigenpairs of the dense lab-frame Hamiltonian.
pub fn solve_point_dense(p: &ModelParams, cfg: HilbertConfig, k: usize) -> Result<EigenResult> {
    lowest_eigenpairs(&hamiltonian_original(p, cfg)?, k, DEFAULT_TOL)
}

/// Lowest `k` eigenpairs of the dense squeezed-frame Hamiltonian.
pub fn solve_point_dense_squeezed(p: &ModelParams, cfg: HilbertConfig, k: usize) -> Result<EigenResult> {
    lowest_eigenpairs(&hamiltonian_squeezed(p, cfg)?, k, DEFAULT_TOL)
}
