use rabi_qpt::eigensolver::DEFAULT_TOL;
use rabi_qpt::experiments::{
    convergence_study, run_sweep, solve_point, AxisParam, FockDim, Quantity, RowFlag, SweepAxis, SweepSpec,
};
use rabi_qpt::model::{psi_q_analytic, ModelParams};

fn spec(base: ModelParams, axis1: SweepAxis, n_values: Vec<u32>, quantities: Vec<Quantity>, fock: usize) -> SweepSpec {
    SweepSpec {
        base,
        axis1,
        axis2: None,
        n_values,
        fock_dim: FockDim::Fixed(fock),
        quantities,
        tol: DEFAULT_TOL,
    }
}

fn values(rows: &[rabi_qpt::experiments::SweepRow], n: u32) -> Vec<(f64, f64)> {
    rows.iter().filter(|r| r.n == n).map(|r| (r.axis1, r.value.unwrap())).collect()
}

#[test]
fn order_parameter_onset_depends_on_the_photon() {
    let base = ModelParams::from_ratios(50.0, 0.0, 0.0, 0.245, 0).unwrap();
    let axis = SweepAxis::linspace(AxisParam::Chi, 0.0, 0.6, 13).unwrap();
    let mut s = spec(base, axis, vec![0, 1], vec![Quantity::PsiQNumeric], 2);
    s.fock_dim = FockDim::Auto;
    let result = run_sweep(&s).unwrap();
    assert_eq!(result.rows.len(), 13 * 2);
    assert_eq!(result.hard_failures(), 0);
    for (chi, psi) in values(&result.rows, 0) {
        assert!(psi < 0.05, "n=0 chi={chi}: {psi}");
    }
    for (chi, psi) in values(&result.rows, 1) {
        if chi < 0.1 {
            assert!(psi < 0.05, "n=1 chi={chi}: {psi}");
        }
        if chi > 0.2 {
            assert!(psi > 0.1, "n=1 chi={chi}: {psi}");
        }
    }
}

#[test]
fn reversed_transition_with_strong_quadratic_term() {
    let base = ModelParams::from_ratios(50.0, 0.0, 1.5, 0.26, 1).unwrap();
    let axis = SweepAxis { param: AxisParam::Chi, values: vec![0.4, 0.35, 0.3, 0.25, 0.2, 0.17] };
    let mut s = spec(base, axis, vec![1], vec![Quantity::PsiQNumeric, Quantity::PsiQAnalytic], 2);
    s.fock_dim = FockDim::Auto;
    let result = run_sweep(&s).unwrap();
    assert_eq!(result.hard_failures(), 0);
    let psi: Vec<(f64, f64)> = result
        .rows
        .iter()
        .filter(|r| r.quantity == Quantity::PsiQNumeric)
        .map(|r| (r.axis1, r.value.unwrap()))
        .collect();
    for (chi, v) in psi {
        if chi > 0.3 {
            assert!(v < 0.05, "chi={chi}: {v}");
        } else if chi < 0.25 {
            assert!(v > 0.1, "chi={chi}: {v}");
        }
    }
}

#[test]
fn undefined_frames_become_null_rows() {
    // Beyond g0/omega = 0.25 the n = 1 frame ceases to exist at alpha = 0.
    let base = ModelParams::from_ratios(10.0, 0.3, 0.0, 0.0, 1).unwrap();
    let axis = SweepAxis { param: AxisParam::G0OverOmega, values: vec![0.2, 0.26] };
    let result = run_sweep(&spec(base, axis, vec![0, 1], vec![Quantity::GroundEnergy, Quantity::OmegaOverOmegaN], 200)).unwrap();
    assert_eq!(result.rows.len(), 2 * 2 * 2);
    let bad: Vec<_> = result.rows.iter().filter(|r| r.axis1 == 0.26 && r.n == 1).collect();
    assert_eq!(bad.len(), 2);
    for r in bad {
        assert_eq!(r.flag, RowFlag::FrameUndefined);
        assert!(r.value.is_none());
        assert!(r.detail.is_some());
    }
    assert_eq!(result.hard_failures(), 0);
    assert!(result.rows.iter().filter(|r| !(r.axis1 == 0.26 && r.n == 1)).all(|r| r.flag == RowFlag::Ok));
}

#[test]
fn rows_follow_grid_order() {
    let base = ModelParams::from_ratios(5.0, 0.1, 0.0, 0.1, 0).unwrap();
    let mut s = spec(
        base,
        SweepAxis { param: AxisParam::Chi, values: vec![0.1, 0.2] },
        vec![1, 0],
        vec![Quantity::Gap, Quantity::GroundEnergy],
        60,
    );
    s.axis2 = Some(SweepAxis { param: AxisParam::OmegaOverOmega, values: vec![5.0, 7.0, 9.0] });
    let rows = run_sweep(&s).unwrap().rows;
    assert_eq!(rows.len(), 2 * 3 * 2 * 2);
    let keys: Vec<(f64, f64, u32, Quantity)> = rows.iter().map(|r| (r.axis1, r.axis2.unwrap(), r.n, r.quantity)).collect();
    let mut expected = Vec::new();
    for a1 in [0.1, 0.2] {
        for a2 in [5.0, 7.0, 9.0] {
            for n in [1, 0] {
                for q in [Quantity::Gap, Quantity::GroundEnergy] {
                    expected.push((a1, a2, n, q));
                }
            }
        }
    }
    assert_eq!(keys, expected);
}

#[test]
fn single_point_sweep_equals_direct_calls_and_repeats_exactly() {
    let base = ModelParams::from_ratios(20.0, 0.0, 0.0, 0.245, 1).unwrap();
    let quantities = Quantity::ALL.to_vec();
    let s = spec(base, SweepAxis { param: AxisParam::Chi, values: vec![0.3] }, vec![1], quantities.clone(), 300);
    let first = run_sweep(&s).unwrap();
    let second = run_sweep(&s).unwrap();
    assert_eq!(first.rows, second.rows);

    let p = base.with_chi(0.3).unwrap();
    let sol = solve_point(&p, FockDim::Fixed(300), DEFAULT_TOL).unwrap();
    let direct = [
        sol.psi_q(),
        psi_q_analytic(&p).unwrap(),
        sol.entropy().unwrap(),
        sol.gap(),
        sol.excitation_gap(),
        sol.branch_coherence().unwrap(),
        sol.ground_energy(),
        p.big_omega / sol.frame.omega_n,
    ];
    for (row, want) in first.rows.iter().zip(direct) {
        assert_eq!(row.value.unwrap().to_bits(), want.to_bits(), "{}", row.quantity);
    }
}

#[test]
fn truncated_points_are_flagged() {
    let base = ModelParams::from_ratios(100.0, 0.3, 0.0, 0.245, 1).unwrap();
    let result = run_sweep(&spec(base, SweepAxis { param: AxisParam::Chi, values: vec![0.3] }, vec![1], vec![Quantity::PsiQNumeric], 100)).unwrap();
    assert_eq!(result.rows[0].flag, RowFlag::Truncation);
    assert!(result.rows[0].flag.is_hard());
}

#[test]
fn invalid_specs_are_rejected() {
    let base = ModelParams::from_ratios(5.0, 0.1, 0.0, 0.1, 0).unwrap();
    let axis = SweepAxis { param: AxisParam::Chi, values: vec![0.1] };
    let mut s = spec(base, axis.clone(), vec![0], vec![], 20);
    assert!(run_sweep(&s).is_err());
    s.quantities = vec![Quantity::Gap];
    s.axis1.values = vec![f64::NAN];
    assert!(run_sweep(&s).is_err());
    s.axis1 = axis.clone();
    s.axis2 = Some(axis);
    assert!(run_sweep(&s).is_err());
}

#[test]
fn quantity_names_round_trip() {
    for q in Quantity::ALL {
        assert_eq!(q.name().parse::<Quantity>().unwrap(), q);
    }
    assert!("psi".parse::<Quantity>().is_err());
}

#[test]
fn truncation_study_converges_monotonically() {
    let p = ModelParams::from_ratios(10.0, 0.3, 0.0, 0.245, 1).unwrap();
    let report = convergence_study(&p, &[60, 100, 150, 200, 300]).unwrap();
    assert_eq!(report.rows.len(), 5);
    assert!(report.monotone);
    let last = report.rows.last().unwrap();
    assert!(last.delta_energy.unwrap().abs() < 1e-9);
    assert!(last.edge_weight < 1e-12);
}

#[test]
fn default_dimension_covers_the_acceptance_sets_at_low_ratio() {
    // At Omega/omega = 10 a truncation of 300 already converges in the squeezed frame.
    for (alpha, g0, chi) in [(0.0, 0.245, 0.3), (1.5, 0.26, 0.2)] {
        for n in [0, 1] {
            let p = ModelParams::from_ratios(10.0, chi, alpha, g0, n).unwrap();
            let report = convergence_study(&p, &[200, 300]).unwrap();
            assert!(report.rows[1].delta_energy.unwrap().abs() < 1e-9);
            assert!(report.rows[1].delta_psi_q.unwrap().abs() < 1e-9);
        }
    }
}
