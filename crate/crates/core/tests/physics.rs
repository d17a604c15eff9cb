use num_complex::Complex64;
use rabi_qpt::eigensolver::{to_complex, DEFAULT_TOL};
use rabi_qpt::experiments::{solve_point, solve_point_dense, solve_point_dense_squeezed, FockDim};
use rabi_qpt::fock::{FockFrame, HilbertConfig, QuantumState};
use rabi_qpt::model::{
    analytic_sp, classify_phase, derive_frame, ground_state_np, ground_states_sp, psi_q_analytic, recommended_fock_dim, ModelParams, Phase,
};
use rabi_qpt::observables::{coherence, fidelity, order_parameter};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn three_constructions_share_the_low_spectrum() {
    for p in [
        ModelParams::from_ratios(2.0, 0.4, 0.5, 0.1, 1).unwrap(),
        ModelParams::from_ratios(3.0, 0.25, 1.5, 0.22, 1).unwrap(),
        ModelParams::from_ratios(4.0, 0.6, 0.0, 0.0, 0).unwrap(),
    ] {
        let cfg = HilbertConfig::new(150).unwrap();
        let original = solve_point_dense(&p, cfg, 4).unwrap();
        let squeezed = solve_point_dense_squeezed(&p, cfg, 4).unwrap();
        let sectors = solve_point(&p, FockDim::Fixed(150), DEFAULT_TOL).unwrap();
        for i in 0..4 {
            assert!(rel(original.values[i], squeezed.values[i]) < 1e-8, "{p:?} level {i}");
            assert!(rel(sectors.spectrum[i].0, squeezed.values[i]) < 1e-10);
        }
    }
}

#[test]
fn squeezed_ground_state_maps_onto_the_lab_ground_state() {
    let p = ModelParams::from_ratios(2.0, 0.4, 0.5, 0.1, 1).unwrap();
    let cfg = HilbertConfig::new(120).unwrap();
    let lab = solve_point_dense(&p, cfg, 1).unwrap();
    let lab_state = QuantumState::new(to_complex(&lab.vector(0)), FockFrame::LAB).unwrap();
    let sol = solve_point(&p, FockDim::Fixed(120), DEFAULT_TOL).unwrap();
    assert!((fidelity(&lab_state, &sol.ground).unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn analytic_order_parameter_at_root_two() {
    // alpha = 1.5, g0/omega = 0.26, n = 1, chi = 0.2 gives chi_n = sqrt 2.
    let p = ModelParams::from_ratios(1000.0, 0.2, 1.5, 0.26, 1).unwrap();
    let f = derive_frame(&p).unwrap();
    assert!((f.chi_n - 2f64.sqrt()).abs() < 1e-9);
    assert!((psi_q_analytic(&p).unwrap() - 0.375).abs() < 1e-9);
    let cfg = HilbertConfig::new(recommended_fock_dim(&p).unwrap()).unwrap();
    let (gp, _) = ground_states_sp(&p, cfg).unwrap();
    let psi = order_parameter(&gp, &f, &p);
    assert!(rel(psi, 0.375) < 0.02, "psi_q {psi}");
}

#[test]
fn analytic_normal_phase_order_parameter_is_suppressed() {
    for ratio in [10.0, 100.0, 1000.0] {
        let p = ModelParams::from_ratios(ratio, 0.3, 0.0, 0.245, 0).unwrap();
        assert_eq!(classify_phase(&p).unwrap(), Phase::Normal);
        let f = derive_frame(&p).unwrap();
        let g = ground_state_np(&p, HilbertConfig::new(80).unwrap()).unwrap();
        assert!(order_parameter(&g, &f, &p) <= 1.0 / ratio);
    }
}

#[test]
fn superradiant_branches_are_displaced_oppositely() {
    let p = ModelParams::from_ratios(50.0, 0.3, 0.0, 0.245, 1).unwrap();
    let f = derive_frame(&p).unwrap();
    let sp = analytic_sp(&p).unwrap();
    let cfg = HilbertConfig::new(recommended_fock_dim(&p).unwrap()).unwrap();
    let (gp, gm) = ground_states_sp(&p, cfg).unwrap();
    let want = Complex64::new(f.r_n.exp() * sp.beta, 0.0);
    assert!((coherence(&gp) - want).norm() < 1e-8 * want.norm());
    assert!((coherence(&gm) + want).norm() < 1e-8 * want.norm());
}

#[test]
fn numeric_order_parameter_tracks_the_closed_form() {
    let mut last = f64::INFINITY;
    for ratio in [10.0, 30.0, 100.0] {
        let p = ModelParams::from_ratios(ratio, 0.3, 0.0, 0.245, 1).unwrap();
        let sol = solve_point(&p, FockDim::Auto, DEFAULT_TOL).unwrap();
        assert!(sol.truncation_adequate());
        let err = rel(sol.psi_q(), psi_q_analytic(&p).unwrap());
        assert!(err < last);
        last = err;
    }
    assert!(last < 0.01);
}

#[test]
fn doublet_collapses_in_the_superradiant_phase() {
    let p = ModelParams::from_ratios(100.0, 0.3, 0.0, 0.245, 1).unwrap();
    let sol = solve_point(&p, FockDim::Auto, DEFAULT_TOL).unwrap();
    assert_eq!(sol.spectrum[0].1 * sol.spectrum[1].1, -1);
    assert!(sol.gap() < 1e-6 * sol.frame.omega_n);
    // Near-degenerate parity partners give a macroscopic branch coherence.
    let sp = analytic_sp(&p).unwrap();
    let expected = sol.frame.r_n.exp() * sp.beta;
    assert!(rel(sol.branch_coherence().unwrap(), expected) < 0.02);
}
