mod common;

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use proptest::prelude::*;
use rabi_qpt::eigensolver::{hermitian_eigenvalues, lowest_eigenpairs_real, DEFAULT_TOL};
use rabi_qpt::fock::{parity, FieldState, FockFrame, HilbertConfig, QuantumState};
use rabi_qpt::model::{derive_frame, hamiltonian_original, hamiltonian_squeezed, parity_sectors, ModelParams};
use rabi_qpt::observables::{
    coherence, entropy, entropy_of_spectrum, order_parameter, parity_resolve, project_qubit, reduce_to_field, reduce_to_qubit, wigner, DensityMatrix,
    GridAxis, GridSpec,
};

fn params() -> impl Strategy<Value = ModelParams> {
    (1.0f64..50.0, 0.0f64..0.8, 0.0f64..2.5, 0.0f64..0.24, 0u32..3)
        .prop_filter_map("valid frame", |(ratio, chi, alpha, g0, n)| {
            let p = ModelParams::from_ratios(ratio, chi, alpha, g0, n).ok()?;
            derive_frame(&p).ok()?;
            Some(p)
        })
}

fn amplitudes(len: usize) -> impl Strategy<Value = Array1<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_filter_map("non-zero", |v| {
        let a = Array1::from_iter(v.into_iter().map(|(re, im)| Complex64::new(re, im)));
        let n = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        (n > 1e-3).then(|| a.mapv(|z| z / n))
    })
}

fn joint_state(fock_dim: usize) -> impl Strategy<Value = QuantumState> {
    (amplitudes(2 * fock_dim), -0.5f64..0.5).prop_map(|(a, r)| QuantumState::new(a, FockFrame::squeezed(r)).unwrap())
}

/// Keeps only the components of one parity, `(−1)^{m+s} = sign`.
fn parity_projected(s: &QuantumState, sign: i32) -> Option<QuantumState> {
    let amps = Array1::from_shape_fn(s.amplitudes().len(), |i| {
        let (m, spin) = (i / 2, i % 2);
        if ((m + spin) % 2 == 0) == (sign > 0) {
            s.amplitudes()[i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    QuantumState::new(amps, s.frame()).unwrap().normalized().ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frame_coupling_rescales_back_to_chi(p in params()) {
        let f = derive_frame(&p).unwrap();
        prop_assert!((f.chi_n * (-2.0 * f.r_n).exp() - p.chi).abs() <= 1e-12 * p.chi.max(1.0));
    }

    #[test]
    fn both_hamiltonians_commute_with_parity(p in params(), dim in 4usize..40) {
        let cfg = HilbertConfig::new(dim).unwrap();
        let pi = parity(cfg);
        let h_sq = hamiltonian_squeezed(&p, cfg).unwrap();
        let h_or = hamiltonian_original(&p, cfg).unwrap();
        prop_assert!(h_sq.commutator_norm(pi.entries()) <= 1e-10);
        prop_assert!(h_or.commutator_norm(pi.entries()) <= 1e-10 * h_or.entries().iter().map(|z| z.norm()).fold(1.0, f64::max));
    }

    #[test]
    fn sector_spectra_union_is_full_spectrum(p in params(), dim in 4usize..30) {
        let cfg = HilbertConfig::new(dim).unwrap();
        let full = hermitian_eigenvalues(hamiltonian_squeezed(&p, cfg).unwrap().entries()).unwrap();
        let [even, odd] = parity_sectors(&p, cfg).unwrap();
        let k = dim;
        let mut merged: Vec<f64> = even.matrix.lowest(k, DEFAULT_TOL).unwrap().values;
        merged.extend(odd.matrix.lowest(k, DEFAULT_TOL).unwrap().values);
        merged.sort_by(f64::total_cmp);
        let scale = full.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for (a, b) in full.iter().zip(merged.iter()) {
            prop_assert!((a - b).abs() <= 1e-9 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn eigenvalues_invariant_under_permutation(seed in any::<u64>(), n in 3usize..25) {
        let mut rng = common::rng(seed);
        let a = common::random_symmetric(&mut rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(seed as usize % n);
        perm.swap(0, n - 1);
        let b = Array2::from_shape_fn((n, n), |(i, j)| a[[perm[i], perm[j]]]);
        let ea = lowest_eigenpairs_real(&a, n, DEFAULT_TOL).unwrap();
        let eb = lowest_eigenpairs_real(&b, n, DEFAULT_TOL).unwrap();
        for (x, y) in ea.values.iter().zip(eb.values.iter()) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn wigner_is_linear_in_the_state(a in amplitudes(8), b in amplitudes(8), w in 0.0f64..1.0) {
        let ra = DensityMatrix::pure(&FieldState::new(a, FockFrame::LAB).unwrap()).unwrap();
        let rb = DensityMatrix::pure(&FieldState::new(b, FockFrame::LAB).unwrap()).unwrap();
        let mix = DensityMatrix::mixture(w, &ra, &rb).unwrap();
        let axis = GridAxis::symmetric(4.0, 21).unwrap();
        let spec = GridSpec::Fixed { x: axis, y: axis };
        let (wa, wb, wm) = (wigner(&ra, &spec).unwrap(), wigner(&rb, &spec).unwrap(), wigner(&mix, &spec).unwrap());
        for ((x, y), z) in wa.values.iter().zip(wb.values.iter()).zip(wm.values.iter()) {
            prop_assert!((w * x + (1.0 - w) * y - z).abs() <= 1e-10);
        }
    }

    #[test]
    fn schmidt_symmetry_of_entropies(s in joint_state(12)) {
        let field = entropy(&reduce_to_field(&s)).unwrap();
        let qubit = entropy_of_spectrum(&hermitian_eigenvalues(&reduce_to_qubit(&s)).unwrap());
        prop_assert!((field - qubit).abs() <= 1e-10, "{field} vs {qubit}");
        prop_assert!((0.0..=1.0 + 1e-12).contains(&field));
    }

    #[test]
    fn order_parameter_ignores_global_phase(s in joint_state(10), phase in 0.0f64..std::f64::consts::TAU, p in params()) {
        let f = derive_frame(&p).unwrap();
        let rotated = s.scaled(Complex64::from_polar(1.0, phase));
        let (a, b) = (order_parameter(&s, &f, &p), order_parameter(&rotated, &f, &p));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn parity_definite_states_have_no_coherence(s in joint_state(10), sign in prop::sample::select(vec![1, -1])) {
        if let Some(t) = parity_projected(&s, sign) {
            prop_assert!(coherence(&t).norm() <= 1e-10);
        }
    }

    #[test]
    fn parity_resolve_returns_an_orthonormal_basis_of_the_doublet(s in joint_state(8), theta in 0.0f64..std::f64::consts::PI) {
        let (Some(e), Some(o)) = (parity_projected(&s, 1), parity_projected(&s, -1)) else { return Ok(()) };
        let (c, sn) = (Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0));
        let a = e.scaled(c).add(&o.scaled(sn)).unwrap();
        let b = e.scaled(-sn).add(&o.scaled(c)).unwrap();
        let (re, ro) = parity_resolve(&a, &b, &parity(s.config())).unwrap();
        prop_assert!((re.norm_sqr() - 1.0).abs() <= 1e-10);
        prop_assert!((ro.norm_sqr() - 1.0).abs() <= 1e-10);
        prop_assert!(re.inner(&ro).unwrap().norm() <= 1e-10);
        // Projector distance between span{a, b} and span{re, ro}.
        let proj = |u: &QuantumState, v: &QuantumState| {
            let (u, v) = (u.amplitudes(), v.amplitudes());
            Array2::from_shape_fn((u.len(), u.len()), |(i, j)| u[i] * u[j].conj() + v[i] * v[j].conj())
        };
        let d = (proj(&a, &b) - proj(&re, &ro)).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(d <= 1e-8);
    }

    #[test]
    fn projection_probabilities_sum_to_one(s in joint_state(10), theta in 0.1f64..3.0, phi in 0.0f64..6.0) {
        let up = [Complex64::new((theta / 2.0).cos(), 0.0), Complex64::from_polar((theta / 2.0).sin(), phi)];
        let down = [-up[1].conj(), up[0].conj()];
        let total: f64 = [up, down].iter().filter_map(|v| project_qubit(&s, *v).ok()).map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
    }
}
