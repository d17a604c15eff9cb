//! Wigner functions of field density matrices.
//!
//! Quadratures are `x = (b + b†)/2`, `y = −i(b − b†)/2`, so vacuum has
//! `W(0, 0) = 2/π` and `∫W dx dy = 1`. Grids are evaluated from the
//! position representation
//! `W(x, y) = (2/π) Σ_k ∫ ψ_k(x − s) ψ_k*(x + s) e^{4iys} ds`
//! of the factors `ψ_k` of `ρ = Σ_k |ψ_k⟩⟨ψ_k|`. Single points can also be
//! evaluated as a displaced-parity expectation, which is independent of the
//! quadrature and serves as a cross-check.
//!
//! A density matrix tagged with squeeze `r` stores `S(r)ρ_c S†(r)`, whose
//! Wigner function is `W_c(x e^{−r}, y e^{r})`; both routes evaluate `W_c`
//! on the mapped coordinates.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::Serialize;

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::fock::{displacement_generator, edge_weight, TRUNCATION_THRESHOLD};

/// Coefficients below this relative weight are treated as absent when
/// bounding the spatial extent of a state.
const LEVEL_FLOOR: f64 = 1e-24;
/// Marginal density (relative to its peak) that marks the edge of the support.
const SUPPORT_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if points < 2 || !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidRequest(format!("grid axis [{min}, {max}] with {points} points")));
        }
        Ok(Self { min, max, points })
    }

    pub fn symmetric(half_width: f64, points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, points)
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    pub fn samples(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points).map(|i| self.min + i as f64 * h).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GridSpec {
    /// Exactly the given axes.
    Fixed { x: GridAxis, y: GridAxis },
    /// Symmetric axes of `points` samples covering `[−4, 4]`, widened per
    /// axis until the state's marginal densities fall below 1e−9 of their
    /// peaks.
    Auto { points: usize },
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Auto { points: 201 }
    }
}

/// Wigner values on a rectangular grid; `values[[i, j]] = W(x_i, y_j)`.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    pub values: Array2<f64>,
    pub cell_area: f64,
}

impl WignerGrid {
    /// Riemann-sum approximation of `∫W dx dy`.
    pub fn integral(&self) -> f64 {
        self.values.sum() * self.cell_area
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the sample closest to `(x, y)`.
    pub fn nearest(&self, x: f64, y: f64) -> (usize, usize) {
        let pick = |axis: &[f64], v: f64| {
            axis.iter()
                .enumerate()
                .min_by(|a, b| (a.1 - v).abs().total_cmp(&(b.1 - v).abs()))
                .map(|(i, _)| i)
                .unwrap_or(0)
        };
        (pick(&self.x_axis, x), pick(&self.y_axis, y))
    }
}

/// Hermite functions in the `x = X/√2` convention:
/// `out[m] = 2^{1/4} φ_m(√2 x)` for `m < out.len()`, each normalized on the
/// `x` line. The three-term recurrence is carried with a separate log scale
/// so that neither the Gaussian nor the polynomial part over- or underflows.
pub fn hermite_functions(x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let big_x = std::f64::consts::SQRT_2 * x;
    let norm = 2f64.powf(0.25) * std::f64::consts::PI.powf(-0.25);
    let mut log_scale = -0.5 * big_x * big_x;
    let mut prev = 0.0;
    let mut cur = 1.0;
    const RESCALE: f64 = 1e150;
    for m in 0..n {
        out[m] = norm * cur * log_scale.exp();
        let mf = m as f64;
        let next = (2.0 / (mf + 1.0)).sqrt() * big_x * cur - (mf / (mf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
}

struct FrameView<'a> {
    factors: &'a Array2<Complex64>,
    /// Highest Fock level carrying weight.
    top: usize,
    r: f64,
}

impl<'a> FrameView<'a> {
    fn new(rho: &'a DensityMatrix) -> Self {
        let f = rho.factors();
        let weights: Vec<f64> = f.rows().into_iter().map(|row| row.iter().map(|z| z.norm_sqr()).sum()).collect();
        let peak = weights.iter().copied().fold(0.0, f64::max);
        let top = weights.iter().rposition(|w| *w > LEVEL_FLOOR * peak).unwrap_or(0);
        Self {
            factors: f,
            top,
            r: rho.frame().squeeze,
        }
    }

    /// Half-width beyond which every basis function in use is negligible.
    fn reach(&self) -> f64 {
        (self.top as f64 + 0.5).sqrt() + 6.0
    }

    /// Position (or, with `momentum`, momentum) wavefunctions of all factors at `u`.
    fn wavefunctions(&self, u: f64, momentum: bool, scratch: &mut [f64], out: &mut [Complex64]) {
        hermite_functions(u, scratch);
        for (k, col) in self.factors.columns().into_iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, (c, h)) in col.iter().zip(scratch.iter()).enumerate() {
                let phase = if momentum {
                    // (−i)^m
                    match m % 4 {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, -1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, 1.0),
                    }
                } else {
                    Complex64::new(1.0, 0.0)
                };
                acc += c * phase * *h;
            }
            out[k] = acc;
        }
    }

    /// Half-width of the region holding all but a 1e−9 relative tail of
    /// the position (`momentum = false`) or momentum marginal, in the
    /// state's own frame.
    fn support(&self, momentum: bool) -> f64 {
        let reach = self.reach();
        let h = 0.02;
        let npts = (2.0 * reach / h).ceil() as usize + 1;
        let mut scratch = vec![0.0; self.top + 1];
        let mut psi = vec![Complex64::new(0.0, 0.0); self.factors.ncols()];
        let mut density = Vec::with_capacity(npts);
        for i in 0..npts {
            let u = -reach + i as f64 * h;
            self.wavefunctions(u, momentum, &mut scratch, &mut psi);
            density.push((u, psi.iter().map(|z| z.norm_sqr()).sum::<f64>()));
        }
        let peak = density.iter().map(|d| d.1).fold(0.0, f64::max);
        density
            .iter()
            .filter(|d| d.1 >= SUPPORT_FLOOR * peak)
            .map(|d| d.0.abs())
            .fold(0.0, f64::max)
            + h
    }
}

/// Resolves `spec` into concrete axes (lab-frame quadratures of mode `b`).
pub fn resolve_grid(rho: &DensityMatrix, spec: &GridSpec) -> Result<(GridAxis, GridAxis)> {
    match *spec {
        GridSpec::Fixed { x, y } => Ok((x, y)),
        GridSpec::Auto { points } => {
            let view = FrameView::new(rho);
            let x_half = (view.support(false) * view.r.exp()).max(4.0);
            let y_half = (view.support(true) * (-view.r).exp()).max(4.0);
            Ok((GridAxis::symmetric(x_half, points)?, GridAxis::symmetric(y_half, points)?))
        }
    }
}

/// Wigner function of `rho` on a grid.
pub fn wigner(rho: &DensityMatrix, spec: &GridSpec) -> Result<WignerGrid> {
    let (xa, ya) = resolve_grid(rho, spec)?;
    let view = FrameView::new(rho);
    let (ex, ey) = ((-view.r).exp(), view.r.exp());
    let xs: Vec<f64> = xa.samples();
    let ys: Vec<f64> = ya.samples();
    let xc0 = xa.min * ex;
    let dxc = xa.step() * ex;
    let y_extent = ya.min.abs().max(ya.max.abs()) * ey;
    let y_support = view.support(true);

    // Quadrature step: resolve e^{4iys} and the wavefunction products, and
    // divide the output spacing evenly so that x ± s lands on the fine grid.
    let h_max = (std::f64::consts::PI / (8.0 * (y_extent + 2.0 * y_support))).min(0.05);
    let k = (dxc / (2.0 * h_max)).ceil().max(1.0) as i64;
    let h = dxc / (2 * k) as f64;
    let reach = view.reach();

    // Fine grid u_t = xc0 + t h covering [−reach, reach].
    let t_lo = ((-reach - xc0) / h).floor() as i64;
    let t_hi = ((reach - xc0) / h).ceil() as i64;
    let rank = view.factors.ncols();
    let fine_len = (t_hi - t_lo + 1).max(1) as usize;
    let mut psi = Array2::<Complex64>::zeros((fine_len, rank));
    let mut scratch = vec![0.0; view.top + 1];
    let mut tmp = vec![Complex64::new(0.0, 0.0); rank];
    for t in t_lo..=t_hi {
        view.wavefunctions(xc0 + t as f64 * h, false, &mut scratch, &mut tmp);
        for (kk, v) in tmp.iter().enumerate() {
            psi[[(t - t_lo) as usize, kk]] = *v;
        }
    }
    let at = |t: i64| -> Option<ndarray::ArrayView1<Complex64>> {
        if t < t_lo || t > t_hi {
            None
        } else {
            Some(psi.row((t - t_lo) as usize))
        }
    };

    let n_s = (2.0 * reach / h).ceil() as usize + 1;
    // g[i, j] = Σ_k ψ_k(x_i − s_j) ψ_k*(x_i + s_j), with the j = 0 term halved.
    let mut g = Array2::<Complex64>::zeros((xs.len(), n_s));
    for i in 0..xs.len() {
        let center = 2 * k * i as i64;
        for j in 0..n_s {
            let (Some(lo), Some(hi)) = (at(center - j as i64), at(center + j as i64)) else {
                continue;
            };
            let mut acc = Complex64::new(0.0, 0.0);
            for kk in 0..rank {
                acc += lo[kk] * hi[kk].conj();
            }
            g[[i, j]] = if j == 0 { acc * 0.5 } else { acc };
        }
    }
    let kernel = Array2::from_shape_fn((n_s, ys.len()), |(j, l)| {
        let phase = 4.0 * ys[l] * ey * j as f64 * h;
        Complex64::new(phase.cos(), phase.sin())
    });
    let prefactor = 2.0 / std::f64::consts::PI * 2.0 * h;
    let values = g.dot(&kernel).mapv(|z| prefactor * z.re);

    Ok(WignerGrid {
        x_axis: xs,
        y_axis: ys,
        values,
        cell_area: xa.step() * ya.step(),
    })
}

/// `W(x, y) = (2/π) tr[ρ D(α) Π D(−α)]` at one lab-frame point.
pub fn wigner_point(rho: &DensityMatrix, x: f64, y: f64) -> Result<f64> {
    let r = rho.frame().squeeze;
    let alpha = Complex64::new(x * (-r).exp(), y * r.exp());
    let gen = displacement_generator(rho.dim(), -alpha);
    let mut total = 0.0;
    for col in rho.factors().columns() {
        let moved: Array1<Complex64> = gen.exp_apply(&col.to_owned());
        let defect = edge_weight(&moved);
        if defect > TRUNCATION_THRESHOLD {
            return Err(Error::Truncation {
                defect,
                threshold: TRUNCATION_THRESHOLD,
            });
        }
        total += moved
            .iter()
            .enumerate()
            .map(|(m, a)| if m % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum::<f64>();
    }
    Ok(2.0 / std::f64::consts::PI * total)
}
