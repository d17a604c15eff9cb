use num_complex::Complex64;
use rabi_qpt::eigensolver::DEFAULT_TOL;
use rabi_qpt::experiments::{run_sweep, solve_point, AxisParam, FockDim, PointSolution, Quantity, SweepAxis, SweepSpec};
use rabi_qpt::fock::{HilbertConfig, TRUNCATION_THRESHOLD};
use rabi_qpt::model::{
    approx_ground_n0, approx_ground_n1, classify_phase, critical_point, derive_frame, ground_state_np, psi_q_analytic, recommended_fock_dim,
    spin_down_pm, squeezed_cat, CatParity, ModelParams, Phase, SuperradiantSide,
};
use rabi_qpt::observables::{coherence, fidelity, project_qubit, reduce_to_field, wigner, DensityMatrix, GridAxis, GridSpec};
use serde_json::{json, Value};

use crate::args::{PointArgs, SweepArgs, ValidateArgs, WignerArgs};
use crate::config::{Format, Settings};
use crate::output::{open, sig12, wigner_json, write_json, write_records_csv, write_sweep_csv, write_wigner_csv};

/// Result of a command that ran to completion.
pub enum Outcome {
    Success,
    /// Output was written but some rows or checks failed; carries the
    /// machine-readable summary for stderr.
    Failed(Value),
}

type CmdResult = Result<Outcome, String>;

fn err(e: rabi_qpt::Error) -> String {
    e.to_string()
}

fn side_name(side: SuperradiantSide) -> &'static str {
    match side {
        SuperradiantSide::Above => "chi > chi_c",
        SuperradiantSide::Below => "chi < chi_c",
    }
}

fn phase_name(phase: Phase) -> &'static str {
    match phase {
        Phase::Normal => "normal",
        Phase::Superradiant => "superradiant",
        Phase::Critical => "critical",
    }
}

pub fn critical_point_cmd(args: &PointArgs) -> CmdResult {
    let mut s = Settings::load(&args.common, &["n"])?;
    s.set("n", args.n.map(Value::from));
    let p = s.params(s.u32_or("n", 0)?)?;
    let (chi_c, side) = critical_point(&p).map_err(err)?;
    let at_critical = derive_frame(&p.with_chi(chi_c).map_err(err)?).map_err(err)?;
    let normal_side = match side {
        SuperradiantSide::Above => SuperradiantSide::Below,
        SuperradiantSide::Below => SuperradiantSide::Above,
    };
    let mut pairs: Vec<(String, Value)> = vec![
        ("chi_c".into(), json!(chi_c)),
        ("r_n_at_chi_c".into(), json!(at_critical.r_n)),
        ("exp_minus_2r_n_at_chi_c".into(), json!((-2.0 * at_critical.r_n).exp())),
        ("superradiant_side".into(), json!(side_name(side))),
        ("normal_side".into(), json!(side_name(normal_side))),
    ];
    if s.string("chi").is_some() {
        pairs.push(("chi".into(), json!(p.chi)));
        match derive_frame(&p) {
            Ok(f) => {
                pairs.push(("r_n".into(), json!(f.r_n)));
                pairs.push(("exp_minus_2r_n".into(), json!((-2.0 * f.r_n).exp())));
                pairs.push(("chi_n".into(), json!(f.chi_n)));
                pairs.push(("phase".into(), json!(phase_name(classify_phase(&p).map_err(err)?))));
            }
            Err(e) => pairs.push(("phase".into(), json!(format!("frame undefined: {e}")))),
        }
    }
    let mut out = open(&s)?;
    match s.format()? {
        Format::Json => write_json(&mut *out, Value::Object(pairs.into_iter().collect()), s.timestamp())?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = pairs
                .into_iter()
                .map(|(k, v)| {
                    let v = match v {
                        Value::Number(x) => sig12(x.as_f64().unwrap_or(f64::NAN)),
                        Value::String(t) => t,
                        other => other.to_string(),
                    };
                    vec![k, v]
                })
                .collect();
            write_records_csv(&mut *out, &["key", "value"], &rows, s.timestamp())?
        }
    }
    Ok(Outcome::Success)
}

/// `name:start:stop:points`.
fn parse_axis(text: &str) -> Result<SweepAxis, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [name, start, stop, points] = parts.as_slice() else {
        return Err(format!("axis `{text}`: expected name:start:stop:points"));
    };
    let param: AxisParam = name.parse().map_err(err)?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("axis `{text}`: bad number `{t}`"));
    let points: usize = points.trim().parse().map_err(|_| format!("axis `{text}`: bad point count `{points}`"))?;
    SweepAxis::linspace(param, num(start)?, num(stop)?, points).map_err(err)
}

pub fn sweep_cmd(args: &SweepArgs) -> CmdResult {
    let mut s = Settings::load(&args.common, &["axis", "axis2", "n", "quantities"])?;
    s.set("axis", args.axis.clone().map(Value::from));
    s.set("axis2", args.axis2.clone().map(Value::from));
    s.set("n", args.n.clone().map(Value::from));
    s.set("quantities", args.quantities.clone().map(Value::from));

    let axis1 = parse_axis(&s.string("axis").ok_or("sweep needs --axis name:start:stop:points")?)?;
    let axis2 = s.string("axis2").map(|a| parse_axis(&a)).transpose()?;
    let n_values = s
        .list("n")
        .unwrap_or_else(|| vec!["0".into()])
        .iter()
        .map(|t| t.parse::<u32>().map_err(|_| format!("bad ancilla number `{t}`")))
        .collect::<Result<Vec<_>, _>>()?;
    let quantities = s
        .list("quantities")
        .unwrap_or_else(|| vec!["psi_q_numeric".into(), "psi_q_analytic".into()])
        .iter()
        .map(|t| t.parse::<Quantity>().map_err(err))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = SweepSpec {
        base: s.params(n_values.first().copied().unwrap_or(0))?,
        axis1,
        axis2,
        n_values,
        fock_dim: s.fock_dim()?,
        quantities,
        tol: DEFAULT_TOL,
    };
    let result = run_sweep(&spec).map_err(err)?;

    let mut out = open(&s)?;
    match s.format()? {
        Format::Csv => write_sweep_csv(&mut *out, &result, s.timestamp())?,
        Format::Json => {
            let value = json!({ "spec": spec, "axis1": result.axis1, "axis2": result.axis2, "rows": result.rows });
            write_json(&mut *out, value, s.timestamp())?
        }
    }
    let hard: Vec<Value> = result
        .rows
        .iter()
        .filter(|r| r.flag.is_hard())
        .map(|r| json!({ "axis1": r.axis1, "axis2": r.axis2, "n": r.n, "quantity": r.quantity, "flag": r.flag, "detail": r.detail }))
        .collect();
    if hard.is_empty() {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::Failed(json!({ "hard_errors": hard.len(), "rows": hard })))
    }
}

fn config_for(p: &ModelParams, fock: FockDim, fallback: usize) -> Result<HilbertConfig, String> {
    let dim = match fock {
        FockDim::Fixed(n) => n,
        FockDim::Auto if fallback > 0 => fallback,
        FockDim::Auto => recommended_fock_dim(p).map_err(err)?,
    };
    HilbertConfig::new(dim).map_err(err)
}

fn solved(p: &ModelParams, fock: FockDim) -> Result<PointSolution, String> {
    let sol = solve_point(p, fock, DEFAULT_TOL).map_err(err)?;
    if !sol.truncation_adequate() {
        return Err(format!(
            "ground state reaches the top Fock levels (edge weight {:.3e} at fock_dim {}); raise --fock-dim",
            sol.edge_weight(),
            sol.fock_dim
        ));
    }
    Ok(sol)
}

/// Spin state `(|↓⟩₊ + |↓⟩₋)`, normalized.
fn cat_measurement_spin(p: &ModelParams) -> Result<[Complex64; 2], String> {
    let (plus, minus) = spin_down_pm(&derive_frame(p).map_err(err)?).map_err(err)?;
    let raw = [plus[0] + minus[0], plus[1] + minus[1]];
    let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
    Ok([raw[0] / norm, raw[1] / norm])
}

fn parse_range(text: &str, points: usize) -> Result<GridAxis, String> {
    let (lo, hi) = text.split_once(':').ok_or_else(|| format!("range `{text}`: expected min:max"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("range `{text}`: bad number `{t}`"));
    GridAxis::new(num(lo)?, num(hi)?, points).map_err(err)
}

pub fn wigner_cmd(args: &WignerArgs) -> CmdResult {
    let mut s = Settings::load(&args.common, &["n", "state", "grid-points", "x-range", "y-range"])?;
    s.set("n", args.n.map(Value::from));
    s.set("state", args.state.clone().map(Value::from));
    s.set("grid-points", args.grid_points.map(Value::from));
    s.set("x-range", args.x_range.clone().map(Value::from));
    s.set("y-range", args.y_range.clone().map(Value::from));

    let p = s.params(s.u32_or("n", 1)?)?;
    let fock = s.fock_dim()?;
    let state = s.string("state").unwrap_or_else(|| "numeric_ground".into());
    let rho = match state.as_str() {
        "numeric_ground" => reduce_to_field(&solved(&p, fock)?.ground),
        "G0" => reduce_to_field(&approx_ground_n0(config_for(&p, fock, 40)?)),
        "G1" => reduce_to_field(&approx_ground_n1(&p, config_for(&p, fock, 0)?).map_err(err)?),
        "cat_plus" | "cat_minus" => {
            let parity = if state == "cat_plus" { CatParity::Even } else { CatParity::Odd };
            DensityMatrix::pure(&squeezed_cat(&p, parity, config_for(&p, fock, 0)?).map_err(err)?).map_err(err)?
        }
        "projected" => {
            let sol = solved(&p, fock)?;
            let (field, _) = project_qubit(&sol.ground, cat_measurement_spin(&p)?).map_err(err)?;
            DensityMatrix::pure(&field).map_err(err)?
        }
        other => return Err(format!("unknown state `{other}` (numeric_ground, G0, G1, cat_plus, cat_minus, projected)")),
    };
    let points = s.u32_or("grid-points", 201)? as usize;
    let spec = match (s.string("x-range"), s.string("y-range")) {
        (Some(x), Some(y)) => GridSpec::Fixed {
            x: parse_range(&x, points)?,
            y: parse_range(&y, points)?,
        },
        (None, None) => GridSpec::Auto { points },
        _ => return Err("give both --x-range and --y-range, or neither".into()),
    };
    let grid = wigner(&rho, &spec).map_err(err)?;
    let mut out = open(&s)?;
    match s.format()? {
        Format::Csv => write_wigner_csv(&mut *out, &grid, s.timestamp())?,
        Format::Json => write_json(&mut *out, wigner_json(&grid), s.timestamp())?,
    }
    Ok(Outcome::Success)
}

struct Check {
    name: &'static str,
    /// `None` when the check does not apply at this point.
    pass: Option<bool>,
    value: f64,
    threshold: f64,
}

/// Closed forms are asymptotic; within this distance of `χ_n = 1` they are skipped.
const CRITICAL_MARGIN: f64 = 0.1;

pub fn validate_cmd(args: &ValidateArgs) -> CmdResult {
    let mut s = Settings::load(&args.common, &["n", "psi-tol", "fidelity-min"])?;
    s.set("n", args.n.map(Value::from));
    s.set("psi-tol", args.psi_tol.map(Value::from));
    s.set("fidelity-min", args.fidelity_min.map(Value::from));
    let p = s.params(s.u32_or("n", 0)?)?;
    let psi_tol = s.f64_or("psi-tol", 0.05)?;
    let fidelity_min = s.f64_or("fidelity-min", 0.99)?;

    let frame = derive_frame(&p).map_err(err)?;
    let sol = solve_point(&p, s.fock_dim()?, DEFAULT_TOL).map_err(err)?;
    let near_critical = (frame.chi_n - 1.0).abs() < CRITICAL_MARGIN;
    let applies = |pass: bool| if near_critical { None } else { Some(pass) };

    let mut checks = vec![
        Check {
            name: "eigen_residual",
            pass: Some(sol.max_residual() <= 1e-9),
            value: sol.max_residual(),
            threshold: 1e-9,
        },
        Check {
            name: "truncation_edge_weight",
            pass: Some(sol.truncation_adequate()),
            value: sol.edge_weight(),
            threshold: TRUNCATION_THRESHOLD,
        },
    ];
    let b = coherence(&sol.ground).norm().max(coherence(&sol.odd_ground).norm());
    checks.push(Check {
        name: "parity_definite_coherence",
        pass: Some(b <= 1e-8),
        value: b,
        threshold: 1e-8,
    });

    let analytic = psi_q_analytic(&p).map_err(err)?;
    let cfg = sol.ground.config();
    let (psi_err, reference) = if frame.chi_n > 1.0 {
        ((sol.psi_q() - analytic).abs() / analytic, approx_ground_n1(&p, cfg))
    } else {
        (sol.psi_q(), ground_state_np(&p, cfg))
    };
    checks.push(Check {
        name: if frame.chi_n > 1.0 { "psi_q_relative_error" } else { "psi_q_normal_phase" },
        pass: applies(psi_err <= psi_tol),
        value: psi_err,
        threshold: psi_tol,
    });
    let fid = match reference {
        Ok(r) => fidelity(&sol.ground, &r).map_err(err)?,
        Err(_) if near_critical => f64::NAN,
        Err(e) => return Err(err(e)),
    };
    checks.push(Check {
        name: "analytic_ground_fidelity",
        pass: applies(fid >= fidelity_min),
        value: fid,
        threshold: fidelity_min,
    });

    let status = |c: &Check| match c.pass {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "skip",
    };
    let failed: Vec<&str> = checks.iter().filter(|c| c.pass == Some(false)).map(|c| c.name).collect();
    let mut out = open(&s)?;
    match s.format()? {
        Format::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| vec![c.name.to_string(), status(c).to_string(), sig12(c.value), sig12(c.threshold)])
                .collect();
            write_records_csv(&mut *out, &["check", "status", "value", "threshold"], &rows, s.timestamp())?
        }
        Format::Json => {
            let list: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "check": c.name, "status": status(c), "value": c.value, "threshold": c.threshold }))
                .collect();
            let value = json!({ "params": p, "fock_dim": sol.fock_dim, "chi_n": frame.chi_n, "checks": list, "passed": failed.is_empty() });
            write_json(&mut *out, value, s.timestamp())?
        }
    }
    if failed.is_empty() {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::Failed(json!({ "validation_failures": failed.len(), "checks": failed })))
    }
}
