use multiphoton_rabi::fock::displaced_fock;
use multiphoton_rabi::model::{build_displaced_branch, build_full, displaced_energy};
use multiphoton_rabi::rwa::{
    coupling_element, dressed_pair, low_manifold_states, rabi_frequency, resonant_omega0, spectrum,
    DEFAULT_DETUNING_WINDOW,
};
use multiphoton_rabi::{Complex64 as C64, DisplacementAmplitude, FockSpace, ModelParams, ResonanceSpec, Spin};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn signed(omega0: f64, lg: f64, le: f64, leg: f64) -> ModelParams {
    ModelParams { omega: 1.0, omega0, lambda_g: lg, lambda_e: le, lambda_eg: leg }
}

/// `exp(β(a† - a))|k⟩` on `big` levels, straight from the generator.
fn expm_state(beta: f64, k: usize, big: usize) -> DVector<f64> {
    let mut g = DMatrix::<f64>::zeros(big, big);
    for m in 1..big {
        let s = (m as f64).sqrt() * beta;
        g[(m, m - 1)] = s;
        g[(m - 1, m)] = -s;
    }
    g.exp().column(k).into_owned()
}

/// `λ_eg ⟨↓,N^{(λ_g)}|(a† + a)|↑,(N-n)^{(λ_e)}⟩` by brute force.
fn coupling_brute(p: &ModelParams, big_n: usize, n: usize) -> f64 {
    let big = 90;
    let down = expm_state(p.lambda_g / p.omega, big_n, big);
    let up = expm_state(-p.lambda_e / p.omega, big_n - n, big);
    let mut x = DMatrix::<f64>::zeros(big, big);
    for m in 1..big {
        x[(m, m - 1)] = (m as f64).sqrt();
        x[(m - 1, m)] = (m as f64).sqrt();
    }
    p.lambda_eg * down.dot(&(&x * &up))
}

#[test]
fn coupling_matches_brute_force() {
    let mut seed = 0x1234_5678_u64;
    let mut uni = move || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let lg = 0.8 * uni() - 0.4;
        let le = 0.8 * uni() - 0.4;
        let leg = 0.01 + 0.09 * uni();
        let n = 1 + (uni() * 4.0) as usize;
        let big_n = n + (uni() * 20.0) as usize;
        let p = signed(2.0, lg, le, leg);
        let got = coupling_element(&p, big_n, n).unwrap();
        let want = coupling_brute(&p, big_n, n);
        let err = (got - want).abs() / want.abs().max(1e-12 * leg);
        worst = worst.max(err);
    }
    assert!(worst < 1e-9, "worst relative coupling error {worst:e}");
}

#[test]
fn coupling_near_singular_sum_uses_direct_route() {
    // λ_g + λ_e below the switch-over threshold
    let p = signed(2.0, 0.1 - 1e-8, -0.1, 0.05);
    for n in 1..4 {
        let got = coupling_element(&p, n + 3, n).unwrap();
        let want = coupling_brute(&p, n + 3, n);
        assert!((got - want).abs() < 1e-9 * 0.05, "n = {n}: {got} vs {want}");
    }
    // opposite literal signs cancel the relative displacement: only n = 1 couples
    let literal = signed(2.0, -0.1, 0.1, 0.02);
    assert!(coupling_element(&literal, 5, 3).unwrap().abs() < 1e-12);
}

#[test]
fn branch_eigenvectors_are_displaced_fock_states() {
    let p = signed(2.01, 0.15, 0.1, 0.02);
    let space = FockSpace::new(120).unwrap();
    for (branch, beta) in [(Spin::Down, p.lambda_g), (Spin::Up, -p.lambda_e)] {
        let (values, vectors) = build_displaced_branch(&p, branch, space).eigen();
        for (n, value) in values.iter().take(20).enumerate() {
            assert!((value - displaced_energy(&p, branch, n)).abs() < 1e-9);
            let want = displaced_fock(n, DisplacementAmplitude::new(beta).unwrap(), space).unwrap();
            let overlap: C64 = want.iter().zip(vectors.column(n).iter()).map(|(a, b)| a.conj() * b).sum();
            assert!(overlap.norm_sqr() > 1.0 - 1e-6);
        }
    }
}

#[test]
fn dressed_energies_track_dense_spectrum() {
    let leg = 0.02;
    let p = ModelParams::new(1.0, resonant_omega0(1.0, 0.0, 0.1, 2), 0.0, 0.1, leg).unwrap();
    let spec = ResonanceSpec::for_params(&p, 2).unwrap();
    let exact = build_full(&p, FockSpace::new(120).unwrap()).eigenvalues();
    let nearest = |e: f64| exact.iter().map(|x| (x - e).abs()).fold(f64::INFINITY, f64::min);
    for big_n in 2..15 {
        let pair = dressed_pair(&p, &spec, big_n).unwrap();
        for s in [pair.plus, pair.minus] {
            // the secular pair omits shifts of order λ_eg²/ω from off-resonant levels
            assert!(nearest(s.energy) < 5.0 * leg * leg, "N = {big_n}: {}", nearest(s.energy));
        }
        // the splitting itself is reproduced far more closely than the shift
        let lo = exact.iter().copied().filter(|x| (x - pair.minus.energy).abs() < 0.05).fold(f64::INFINITY, f64::min);
        let hi = exact.iter().copied().filter(|x| (x - pair.plus.energy).abs() < 0.05).fold(f64::NEG_INFINITY, f64::max);
        let split = hi - lo;
        assert!((split - pair.rabi_frequency()).abs() < 0.05 * pair.rabi_frequency() + 1e-3);
    }
    for u in low_manifold_states(&p, &spec, FockSpace::new(40).unwrap()).unwrap() {
        assert!(nearest(u.energy) < 5.0 * leg * leg);
    }
}

#[test]
fn selection_rule_without_permanent_dipoles() {
    let p = ModelParams::new(1.0, 2.0, 0.0, 0.0, 0.05).unwrap();
    for n in 2..=6 {
        for big_n in n..=20 {
            assert!(coupling_element(&p, big_n, n).unwrap().abs() < 1e-12);
        }
    }
    for big_n in 1..=20 {
        let v = coupling_element(&p, big_n, 1).unwrap().abs();
        assert!((v - 0.05 * (big_n as f64).sqrt()).abs() < 1e-10 * v);
    }
}

#[test]
fn spectrum_records_are_consistent() {
    let p = ModelParams::new(1.0, resonant_omega0(1.0, 0.1, 0.1, 3), 0.1, 0.1, 0.02).unwrap();
    let spec = ResonanceSpec::detect(&p, DEFAULT_DETUNING_WINDOW).unwrap();
    assert_eq!(spec.n(), 3);
    let s = spectrum(&p, &spec, 3..10, DEFAULT_DETUNING_WINDOW).unwrap();
    assert_eq!(s.manifolds.len(), 7);
    assert_eq!(s.unmixed.len(), 3);
    for r in &s.manifolds {
        assert!((r.Omega - rabi_frequency(&p, r.n_manifold, 3).unwrap()).abs() < 1e-15);
        assert!(r.E_plus > r.E_minus);
    }
}

fn permuted_eigenvalues(p: &ModelParams, n_max: usize, perm: &[usize]) -> Vec<f64> {
    let h = build_full(p, FockSpace::new(n_max).unwrap());
    let m = h.matrix();
    let d = perm.len();
    let q = DMatrix::from_fn(d, d, |i, j| m[(perm[i], perm[j])].re);
    let mut ev: Vec<f64> = q.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonian_is_hermitian_and_banded(
        omega0 in 0.5f64..4.0, lg in 0.0f64..0.5, le in 0.0f64..0.5, leg in 0.0f64..0.5, n_max in 2usize..40,
    ) {
        let h = build_full(&ModelParams::new(1.0, omega0, lg, le, leg).unwrap(), FockSpace::new(n_max).unwrap());
        prop_assert_eq!(h.hermiticity_defect(), 0.0);
        prop_assert!(h.photon_bandwidth() <= 1);
    }

    #[test]
    fn spectrum_invariant_under_basis_reordering(
        lg in 0.0f64..0.3, le in 0.0f64..0.3, leg in 0.0f64..0.2, shuffle in any::<u64>(),
    ) {
        let p = ModelParams::new(1.0, 2.0, lg, le, leg).unwrap();
        let d = 24;
        let identity: Vec<usize> = (0..d).collect();
        let mut perm = identity.clone();
        let mut s = shuffle | 1;
        for i in (1..d).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = permuted_eigenvalues(&p, 12, &identity);
        let b = permuted_eigenvalues(&p, 12, &perm);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn dressed_pair_is_orthonormal(lg in 0.0f64..0.3, le in 0.01f64..0.3, leg in 0.001f64..0.05, big_n in 2usize..30) {
        let p = ModelParams::new(1.0, resonant_omega0(1.0, lg, le, 2), lg, le, leg).unwrap();
        let spec = ResonanceSpec::for_params(&p, 2).unwrap();
        let pair = dressed_pair(&p, &spec, big_n).unwrap();
        let (a, b) = (pair.plus, pair.minus);
        prop_assert!((a.c_down.hypot(a.c_up) - 1.0).abs() < 1e-12);
        prop_assert!((a.c_down * b.c_down + a.c_up * b.c_up).abs() < 1e-12);
        prop_assert!(a.c_down >= 0.0 && b.c_down >= 0.0);
        prop_assert!((a.energy - b.energy - pair.rabi_frequency()).abs() < 1e-12);
    }
}
