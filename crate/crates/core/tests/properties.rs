//! Property tests for the spec-level invariants.

use chain_lambda::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn rabi() -> impl Strategy<Value = f64> {
    0.01f64..3.0
}

proptest! {
    // Hamiltonian structure: exactly tridiagonal and symmetric for all valid
    // configs; diagonal depends on detunings only, off-diagonal on Rabi
    // frequencies only.
    #[test]
    fn hamiltonian_tridiagonal_symmetric(
        n_ground in 2usize..6,
        p in rabi(),
        c in rabi(),
        dp in -2.0f64..2.0,
        dc in -2.0f64..2.0,
    ) {
        let cfg = ChainConfig::equal_couplings(n_ground, p, c, 1.0).unwrap();
        let h = build_hamiltonian(&cfg, &Detunings::new(dp, dc));
        let d = h.dim();
        prop_assert_eq!(d, 2 * n_ground - 1);
        for i in 0..d {
            for j in 0..d {
                prop_assert_eq!(h.get(i, j), h.get(j, i));
                if i.abs_diff(j) > 1 {
                    prop_assert_eq!(h.get(i, j), 0.0);
                }
            }
        }
        for (i, x) in h.offdiag().iter().enumerate() {
            prop_assert_eq!(*x, if i % 2 == 0 { p } else { c });
        }
    }

    // Dark-state existence: at resonance the spectrum contains an eigenvalue
    // of magnitude below 1e-12 max(P, C) for every chain length.
    #[test]
    fn dark_eigenvalue_at_resonance(n_ground in 2usize..7, p in rabi(), c in rabi()) {
        let cfg = ChainConfig::equal_couplings(n_ground, p, c, 1.0).unwrap();
        let h = build_hamiltonian(&cfg, &Detunings::resonant());
        let (lambda, _) = nearest_zero_eigenpair(&h);
        prop_assert!(lambda.abs() < 1e-12 * p.max(c));
    }

    // Resonant chain spectrum pairs as +-lambda with one exact zero.
    #[test]
    fn resonant_spectrum_symmetric(n_ground in 2usize..6, p in rabi(), c in rabi()) {
        let cfg = ChainConfig::equal_couplings(n_ground, p, c, 1.0).unwrap();
        let h = build_hamiltonian(&cfg, &Detunings::resonant());
        let pairs = eig_symmetric_tridiagonal(&h);
        let d = pairs.len();
        let scale = p.max(c);
        for k in 0..d / 2 {
            prop_assert!(
                (pairs[k].0 + pairs[d - 1 - k].0).abs() < 1e-12 * scale,
                "eigenvalues {} and {} do not pair", pairs[k].0, pairs[d - 1 - k].0
            );
        }
        prop_assert!(pairs[d / 2].0.abs() < 1e-12 * scale);
    }

    // Eigen residuals and trace identity on random symmetric tridiagonals.
    #[test]
    fn eigen_residual_and_trace(
        diag in proptest::collection::vec(-5.0f64..5.0, 1..10),
        seed in 0u64..1000,
    ) {
        let n = diag.len();
        let offdiag: Vec<f64> = (0..n.saturating_sub(1))
            .map(|i| ((seed as f64 + 1.3 * i as f64).sin()) * 3.0)
            .collect();
        let m = SymmetricTridiagonal::new(diag.clone(), offdiag).unwrap();
        let pairs = eig_symmetric_tridiagonal(&m);
        prop_assert_eq!(pairs.len(), n);
        let norm = m.norm_inf().max(1e-3);
        let sum: f64 = pairs.iter().map(|(l, _)| l).sum();
        let trace: f64 = diag.iter().sum();
        prop_assert!((sum - trace).abs() <= 1e-10 * norm);
        for (lambda, v) in &pairs {
            let unit: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((unit - 1.0).abs() < 1e-12);
            let mv = m.mul_vec(v);
            let resid: f64 = mv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - lambda * b).powi(2))
                .sum::<f64>()
                .sqrt();
            prop_assert!(resid <= 1e-10 * norm, "residual {} for lambda {}", resid, lambda);
        }
    }

    // Solve-then-multiply round-trips the right-hand side on diagonally
    // dominant (hence well-conditioned) complex systems.
    #[test]
    fn complex_solve_round_trip(
        n in 1usize..8,
        seed in 0u64..1000,
    ) {
        let f = |i: usize, j: usize, s: u64| {
            let x = ((i * 31 + j * 17 + s as usize * 7) % 97) as f64 / 97.0 - 0.5;
            let y = ((i * 13 + j * 41 + s as usize * 3) % 89) as f64 / 89.0 - 0.5;
            Complex64::new(x, y)
        };
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            let base = f(i, j, seed);
            if i == j { base + Complex64::new(4.0, 0.0) } else { base }
        });
        let b: Vec<Complex64> = (0..n).map(|i| f(i, i + 1, seed.wrapping_add(5))).collect();
        let x = solve_complex_linear(&a, &b).unwrap();
        let ax = a.mul_vec(&x);
        let xnorm: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let bnorm: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let resid: f64 = ax.iter().zip(&b).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(resid <= 1e-10 * (a.norm_inf() * xnorm + bnorm));
    }

    // Ground-state amplitudes of the dark state are geometric with ratio
    // -P/C; normalization preserves direction.
    #[test]
    fn dark_ground_pattern_geometric(n_ground in 2usize..5, p in rabi(), c in rabi()) {
        let s = dark_state_analytic(n_ground, p, c, 0.0).unwrap();
        for j in 1..n_ground {
            let ratio = s.ground_component(j + 1) / s.ground_component(j);
            prop_assert!((ratio + p / c).abs() < 1e-10 * (p / c).abs().max(1.0));
        }
        let n = normalize(&s).unwrap();
        prop_assert!((n.norm() - 1.0).abs() < 1e-12);
        // direction preserved
        let scale = n.alpha()[0] / s.alpha()[0];
        for (a, b) in s.alpha().iter().zip(n.alpha()) {
            prop_assert!((a * scale - b).abs() < 1e-12);
        }
    }

    // Closed-form dispersion is degree -2 homogeneous: R(kP, kC) = R(P, C)/k^2.
    #[test]
    fn dispersion_scale_invariance(
        n_ground in 2usize..5,
        p in rabi(),
        c in rabi(),
        k in 0.1f64..10.0,
    ) {
        let r1 = dispersion_analytic(n_ground, p, c).unwrap().r;
        let r2 = dispersion_analytic(n_ground, k * p, k * c).unwrap().r;
        prop_assert!((r2 - r1 / (k * k)).abs() <= 1e-12 * r1.abs().max(1e-30));
    }

    // Susceptibility from the decay-free dark state is exactly real, and
    // vanishes at zero probe detuning.
    #[test]
    fn susceptibility_real_from_dark_state(n_ground in 2usize..5, p in rabi(), c in rabi()) {
        let cfg = ChainConfig::equal_couplings(n_ground, p, c, 1.0).unwrap();
        let h = build_hamiltonian(&cfg, &Detunings::resonant());
        let s = dark_state_numeric(&h);
        let chi = susceptibility_from_state(&cfg, &s).unwrap();
        prop_assert_eq!(chi.value.im, 0.0);
        let scale = kappa(&cfg) * cfg.dipole_moments()[0].powi(2) / cfg.gamma();
        prop_assert!(chi.value.re.abs() < 1e-12 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Generator preserves Hermiticity and trace on random Hermitian matrices.
    #[test]
    fn generator_preserves_hermiticity_and_trace(
        p in rabi(),
        c in rabi(),
        dp in -1.0f64..1.0,
        entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 25),
    ) {
        let cfg = ChainConfig::equal_couplings(3, p, c, 1.0)
            .unwrap()
            .with_dephasing(vec![0.03, 0.01, 0.02])
            .unwrap();
        let l = build_liouvillian(&cfg, &Detunings::probe_only(dp), LindbladMode::CanonicalLindblad)
            .unwrap();
        let d = 5;
        let mut rho = vec![Complex64::new(0.0, 0.0); d * d];
        for a in 0..d {
            for b in 0..=a {
                let (re, im) = entries[a * d + b];
                let z = if a == b { Complex64::new(re, 0.0) } else { Complex64::new(re, im) };
                rho[a * d + b] = z;
                rho[b * d + a] = z.conj();
            }
        }
        let rhodot = l.apply(&rho);
        let mut tr = Complex64::new(0.0, 0.0);
        for a in 0..d {
            tr += rhodot[a * d + a];
        }
        prop_assert!(tr.norm() < 1e-12);
        for a in 0..d {
            for b in 0..d {
                prop_assert!((rhodot[a * d + b] - rhodot[b * d + a].conj()).norm() < 1e-12);
            }
        }
    }

    // Steady states are Hermitian, trace-one and positive semidefinite over
    // random detuning/probe samples.
    #[test]
    fn steady_state_is_physical(p in 0.05f64..1.5, dp in -2.0f64..2.0) {
        let cfg = ChainConfig::equal_couplings(3, p, 0.25, 1.0).unwrap();
        let l = build_liouvillian(&cfg, &Detunings::probe_only(dp), LindbladMode::CanonicalLindblad)
            .unwrap();
        let rho = steady_state(&l).unwrap();
        prop_assert!(rho.hermiticity_residual() < 1e-10);
        prop_assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        prop_assert!(rho.min_eigenvalue().unwrap() >= -1e-9);
    }
}
