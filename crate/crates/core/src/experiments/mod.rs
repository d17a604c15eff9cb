//! Parameter sweeps, truncation convergence and the finite-size gap locator.
//!
//! Grid points are solved independently (in parallel through rayon) and
//! merged by grid index, so results never depend on scheduling.

mod point;
mod sweep;

use rayon::prelude::*;
use serde::Serialize;

pub use point::{solve_point, solve_point_dense, solve_point_dense_squeezed, FockDim, PointSolution, AUTO_EDGE_TARGET, MAX_AUTO_FOCK_DIM};
pub use sweep::{run_sweep, AxisParam, Quantity, RowFlag, SweepAxis, SweepResult, SweepRow, SweepSpec};

use crate::eigensolver::DEFAULT_TOL;
use crate::error::{Error, Result};
use crate::fock::TRUNCATION_THRESHOLD;
use crate::model::{derive_frame, recommended_fock_dim, ModelParams};

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub fock_dim: usize,
    pub ground_energy: f64,
    pub psi_q: f64,
    pub edge_weight: f64,
    /// Change from the previous row.
    pub delta_energy: Option<f64>,
    pub delta_psi_q: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Successive changes never grew (both quantities).
    pub monotone: bool,
}

/// Ground energy and `ψ_q` at each truncation in `fock_dims` (sorted ascending).
pub fn convergence_study(p: &ModelParams, fock_dims: &[usize]) -> Result<ConvergenceReport> {
    if fock_dims.is_empty() {
        return Err(Error::InvalidRequest("no fock dimensions given".into()));
    }
    let mut dims = fock_dims.to_vec();
    dims.sort_unstable();
    dims.dedup();
    let sols: Vec<Result<PointSolution>> = dims.par_iter().map(|&n| solve_point(p, FockDim::Fixed(n), DEFAULT_TOL)).collect();
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(dims.len());
    for sol in sols {
        let sol = sol?;
        let (e, psi) = (sol.ground_energy(), sol.psi_q());
        let (de, dp) = match rows.last() {
            Some(prev) => (Some(e - prev.ground_energy), Some(psi - prev.psi_q)),
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            fock_dim: sol.fock_dim,
            ground_energy: e,
            psi_q: psi,
            edge_weight: sol.edge_weight(),
            delta_energy: de,
            delta_psi_q: dp,
        });
    }
    let non_increasing = |f: fn(&ConvergenceRow) -> Option<f64>| {
        let d: Vec<f64> = rows.iter().filter_map(f).map(f64::abs).collect();
        d.windows(2).all(|w| w[1] <= w[0] || w[1] <= 1e-12)
    };
    let monotone = non_increasing(|r| r.delta_energy) && non_increasing(|r| r.delta_psi_q);
    Ok(ConvergenceReport { rows, monotone })
}

#[derive(Debug, Clone, Serialize)]
pub struct GapMinimum {
    pub omega_ratio: f64,
    pub chi_min: f64,
    /// `(E2 − E1)/ω_n` at `chi_min`.
    pub gap_min: f64,
    pub fock_dim: usize,
    /// Worst edge weight met during the search.
    pub edge_weight: f64,
}

/// Resolution of the golden-section refinement in `χ`.
pub const GAP_CHI_RESOLUTION: f64 = 1e-4;

/// For each `Ω/ω` in `omega_ratios`, the `χ` in `window` minimizing the
/// excitation gap `(E2 − E1)/ω_n`: a coarse scan of `coarse_points` samples
/// followed by golden-section refinement to [`GAP_CHI_RESOLUTION`].
pub fn gap_minimum_locator(
    base: &ModelParams,
    window: (f64, f64),
    omega_ratios: &[f64],
    coarse_points: usize,
    fock: FockDim,
) -> Result<Vec<GapMinimum>> {
    let (lo, hi) = window;
    if !(hi > lo) || lo < 0.0 || coarse_points < 3 {
        return Err(Error::InvalidRequest(format!("gap window [{lo}, {hi}] with {coarse_points} points")));
    }
    omega_ratios
        .iter()
        .map(|&ratio| locate_one(base, window, ratio, coarse_points, fock))
        .collect()
}

fn locate_one(base: &ModelParams, (lo, hi): (f64, f64), ratio: f64, coarse: usize, fock: FockDim) -> Result<GapMinimum> {
    let mut p = *base;
    p.big_omega = ratio * p.omega;
    p.validate()?;
    let chis: Vec<f64> = (0..coarse).map(|i| lo + (hi - lo) * i as f64 / (coarse - 1) as f64).collect();
    let at = |chi: f64| p.with_chi(chi);

    // One truncation for the whole window keeps the gap curve smooth.
    let fock_dim = match fock {
        FockDim::Fixed(n) => n,
        FockDim::Auto => {
            let mut n = 0;
            for &c in &chis {
                if let Ok(q) = at(c) {
                    if derive_frame(&q).is_ok() {
                        n = n.max(recommended_fock_dim(&q)?);
                    }
                }
            }
            n.max(40)
        }
    };
    let eval = |chi: f64| -> Result<(f64, f64)> {
        let sol = solve_point(&at(chi)?, FockDim::Fixed(fock_dim), DEFAULT_TOL)?;
        Ok((sol.excitation_gap(), sol.edge_weight()))
    };
    let scan: Vec<Option<(f64, f64)>> = chis.par_iter().map(|&c| eval(c).ok()).collect();
    let mut edge = 0.0f64;
    let mut best: Option<usize> = None;
    for (i, v) in scan.iter().enumerate() {
        if let Some((g, e)) = v {
            edge = edge.max(*e);
            if best.is_none_or(|b| *g < scan[b].unwrap().0) {
                best = Some(i);
            }
        }
    }
    let i = best.ok_or_else(|| Error::InvalidRequest(format!("no solvable point in the gap window at Omega/omega = {ratio}")))?;
    let mut a = chis[i.saturating_sub(1)];
    let mut b = chis[(i + 1).min(coarse - 1)];

    // Golden-section search on [a, b].
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, ec) = eval(c)?;
    let (mut fd, ed) = eval(d)?;
    edge = edge.max(ec).max(ed);
    while b - a > GAP_CHI_RESOLUTION {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            let (v, e) = eval(c)?;
            fc = v;
            edge = edge.max(e);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            let (v, e) = eval(d)?;
            fd = v;
            edge = edge.max(e);
        }
    }
    let chi_min = 0.5 * (a + b);
    let (gap_min, e) = eval(chi_min)?;
    edge = edge.max(e);
    if matches!(fock, FockDim::Auto) && edge > TRUNCATION_THRESHOLD {
        return Err(Error::Truncation {
            defect: edge,
            threshold: TRUNCATION_THRESHOLD,
        });
    }
    Ok(GapMinimum {
        omega_ratio: ratio,
        chi_min,
        gap_min,
        fock_dim,
        edge_weight: edge,
    })
}
