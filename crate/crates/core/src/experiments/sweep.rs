use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::point::{solve_point, FockDim, PointSolution};
use crate::error::{Error, Result};
use crate::model::{derive_frame, psi_q_analytic, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxisParam {
    #[serde(rename = "chi")]
    Chi,
    #[serde(rename = "g0_over_omega")]
    G0OverOmega,
    #[serde(rename = "Omega_over_omega")]
    OmegaOverOmega,
}

impl AxisParam {
    pub fn name(self) -> &'static str {
        match self {
            AxisParam::Chi => "chi",
            AxisParam::G0OverOmega => "g0_over_omega",
            AxisParam::OmegaOverOmega => "Omega_over_omega",
        }
    }

    fn apply(self, p: &mut ModelParams, value: f64) {
        match self {
            AxisParam::Chi => p.chi = value,
            AxisParam::G0OverOmega => p.g0 = value * p.omega,
            AxisParam::OmegaOverOmega => p.big_omega = value * p.omega,
        }
    }
}

impl FromStr for AxisParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chi" => Ok(AxisParam::Chi),
            "g0_over_omega" | "g0" | "g0-ratio" => Ok(AxisParam::G0OverOmega),
            "Omega_over_omega" | "Omega" | "Omega-ratio" => Ok(AxisParam::OmegaOverOmega),
            other => Err(Error::InvalidRequest(format!("unknown sweep axis `{other}`"))),
        }
    }
}

impl fmt::Display for AxisParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepAxis {
    pub param: AxisParam,
    pub values: Vec<f64>,
}

impl SweepAxis {
    /// `points` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(param: AxisParam, start: f64, stop: f64, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidRequest("sweep axis needs at least one point".into()));
        }
        let values = if points == 1 {
            vec![start]
        } else {
            (0..points).map(|i| start + (stop - start) * i as f64 / (points - 1) as f64).collect()
        };
        Ok(Self { param, values })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    PsiQNumeric,
    PsiQAnalytic,
    Entropy,
    /// `E1 − E0`.
    Gap,
    /// `(E2 − E1)/ω_n`.
    ExcitationGap,
    /// `|⟨b⟩|` on the symmetry-broken branch.
    Coherence,
    GroundEnergy,
    #[serde(rename = "Omega_over_omega_n")]
    OmegaOverOmegaN,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::PsiQNumeric,
        Quantity::PsiQAnalytic,
        Quantity::Entropy,
        Quantity::Gap,
        Quantity::ExcitationGap,
        Quantity::Coherence,
        Quantity::GroundEnergy,
        Quantity::OmegaOverOmegaN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::PsiQNumeric => "psi_q_numeric",
            Quantity::PsiQAnalytic => "psi_q_analytic",
            Quantity::Entropy => "entropy",
            Quantity::Gap => "gap",
            Quantity::ExcitationGap => "excitation_gap",
            Quantity::Coherence => "coherence",
            Quantity::GroundEnergy => "ground_energy",
            Quantity::OmegaOverOmegaN => "Omega_over_omega_n",
        }
    }

    fn needs_solution(self) -> bool {
        !matches!(self, Quantity::PsiQAnalytic | Quantity::OmegaOverOmegaN)
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .iter()
            .copied()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::InvalidRequest(format!("unknown quantity `{s}`")))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub axis1: SweepAxis,
    pub axis2: Option<SweepAxis>,
    pub n_values: Vec<u32>,
    pub fock_dim: FockDim,
    pub quantities: Vec<Quantity>,
    pub tol: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for axis in std::iter::once(&self.axis1).chain(self.axis2.iter()) {
            if axis.values.is_empty() {
                return Err(Error::InvalidRequest(format!("axis `{}` has no values", axis.param)));
            }
            if axis.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidRequest(format!("axis `{}` has a non-finite value", axis.param)));
            }
        }
        if let Some(a2) = &self.axis2 {
            if a2.param == self.axis1.param {
                return Err(Error::InvalidRequest("both sweep axes set the same parameter".into()));
            }
        }
        if self.n_values.is_empty() {
            return Err(Error::InvalidRequest("no ancilla photon numbers given".into()));
        }
        if self.quantities.is_empty() {
            return Err(Error::InvalidRequest("no quantities requested".into()));
        }
        if let FockDim::Fixed(n) = self.fock_dim {
            if n < 2 {
                return Err(Error::InvalidFockDim(n));
            }
        }
        Ok(())
    }

    pub fn point_count(&self) -> usize {
        self.axis1.values.len() * self.axis2.as_ref().map_or(1, |a| a.values.len()) * self.n_values.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    Ok,
    /// The squeezed frame does not exist at this point; value is null.
    FrameUndefined,
    /// Parameters outside their valid range; value is null.
    InvalidParameter,
    /// The ground state reaches the top Fock levels; value is suspect.
    Truncation,
    NoConvergence,
    Error,
}

impl RowFlag {
    pub fn name(self) -> &'static str {
        match self {
            RowFlag::Ok => "ok",
            RowFlag::FrameUndefined => "frame_undefined",
            RowFlag::InvalidParameter => "invalid_parameter",
            RowFlag::Truncation => "truncation",
            RowFlag::NoConvergence => "no_convergence",
            RowFlag::Error => "error",
        }
    }

    /// Whether the row signals a failure rather than an expected gap.
    pub fn is_hard(self) -> bool {
        !matches!(self, RowFlag::Ok | RowFlag::FrameUndefined)
    }

    fn of_error(e: &Error) -> Self {
        match e {
            Error::FrameUndefined { .. } => RowFlag::FrameUndefined,
            Error::InvalidParameter { .. } => RowFlag::InvalidParameter,
            Error::Truncation { .. } => RowFlag::Truncation,
            Error::NoConvergence { .. } => RowFlag::NoConvergence,
            _ => RowFlag::Error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis1: f64,
    pub axis2: Option<f64>,
    pub n: u32,
    pub quantity: Quantity,
    pub value: Option<f64>,
    pub flag: RowFlag,
    /// Error message for flagged rows.
    pub detail: Option<String>,
    pub fock_dim: Option<usize>,
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub axis1: AxisParam,
    pub axis2: Option<AxisParam>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn hard_failures(&self) -> usize {
        self.rows.iter().filter(|r| r.flag.is_hard()).count()
    }
}

struct GridPoint {
    a1: f64,
    a2: Option<f64>,
    n: u32,
}

fn evaluate_point(spec: &SweepSpec, gp: &GridPoint) -> Vec<SweepRow> {
    let row = |q: Quantity, value: Option<f64>, flag: RowFlag, detail: Option<String>, sol: Option<&PointSolution>| SweepRow {
        axis1: gp.a1,
        axis2: gp.a2,
        n: gp.n,
        quantity: q,
        value,
        flag,
        detail,
        fock_dim: sol.map(|s| s.fock_dim),
        max_residual: sol.map(|s| s.max_residual()),
    };
    let failed = |e: &Error| -> Vec<SweepRow> {
        spec.quantities
            .iter()
            .map(|&q| row(q, None, RowFlag::of_error(e), Some(e.to_string()), None))
            .collect()
    };

    let mut p = spec.base.with_n(gp.n);
    spec.axis1.param.apply(&mut p, gp.a1);
    if let (Some(axis), Some(v)) = (&spec.axis2, gp.a2) {
        axis.param.apply(&mut p, v);
    }
    if let Err(e) = p.validate() {
        return failed(&e);
    }
    let frame = match derive_frame(&p) {
        Ok(f) => f,
        Err(e) => return failed(&e),
    };
    let solution = if spec.quantities.iter().any(|q| q.needs_solution()) {
        match solve_point(&p, spec.fock_dim, spec.tol) {
            Ok(s) => Some(s),
            Err(e) => return failed(&e),
        }
    } else {
        None
    };
    let sol = solution.as_ref();
    let numeric_flag = match sol {
        Some(s) if !s.truncation_adequate() => RowFlag::Truncation,
        _ => RowFlag::Ok,
    };

    spec.quantities
        .iter()
        .map(|&q| {
            let value: Result<f64> = match q {
                Quantity::PsiQAnalytic => psi_q_analytic(&p),
                Quantity::OmegaOverOmegaN => Ok(p.big_omega / frame.omega_n),
                Quantity::PsiQNumeric => Ok(sol.expect("solved").psi_q()),
                Quantity::Entropy => sol.expect("solved").entropy(),
                Quantity::Gap => Ok(sol.expect("solved").gap()),
                Quantity::ExcitationGap => Ok(sol.expect("solved").excitation_gap()),
                Quantity::Coherence => sol.expect("solved").branch_coherence(),
                Quantity::GroundEnergy => Ok(sol.expect("solved").ground_energy()),
            };
            let flag = if q.needs_solution() { numeric_flag } else { RowFlag::Ok };
            match value {
                Ok(v) => {
                    let detail = (flag == RowFlag::Truncation)
                        .then(|| format!("edge weight {:.3e}", sol.map_or(0.0, |s| s.edge_weight())));
                    row(q, Some(v), flag, detail, sol)
                }
                Err(e) => row(q, None, RowFlag::of_error(&e), Some(e.to_string()), sol),
            }
        })
        .collect()
}

/// Runs every grid point; per-point failures become flagged rows.
///
/// Rows are ordered by axis1 index, then axis2 index, then `n`, then the
/// order of `quantities`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let a2_values: Vec<Option<f64>> = match &spec.axis2 {
        Some(a) => a.values.iter().map(|v| Some(*v)).collect(),
        None => vec![None],
    };
    let mut points = Vec::with_capacity(spec.point_count());
    for &a1 in &spec.axis1.values {
        for &a2 in &a2_values {
            for &n in &spec.n_values {
                points.push(GridPoint { a1, a2, n });
            }
        }
    }
    let rows: Vec<Vec<SweepRow>> = points.par_iter().map(|gp| evaluate_point(spec, gp)).collect();
    Ok(SweepResult {
        axis1: spec.axis1.param,
        axis2: spec.axis2.as_ref().map(|a| a.param),
        rows: rows.into_iter().flatten().collect(),
    })
}
