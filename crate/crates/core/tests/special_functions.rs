//! Oracles for the Laguerre machinery: exact rational sums and matrix
//! exponentials of the displacement generator.

use multiphoton_rabi::fock::{
    displaced_fock, displacement_element, displacement_matrix, laguerre_poly, laguerre_transition,
};
use multiphoton_rabi::{Complex64 as C64, DisplacementAmplitude, FockSpace};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `Σ_k (-1)^k C(n+l, n-k) x^k / k!` in exact arithmetic, plus the sum of
/// absolute terms as a conditioning scale.
fn laguerre_exact(n: usize, l: i64, x: &BigRational) -> (f64, f64) {
    let n = n as i64;
    let mut sum = BigRational::zero();
    let mut abs_sum = BigRational::zero();
    let mut power = BigRational::one();
    let mut fact = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            power *= x;
            fact *= BigInt::from(k);
        }
        let term = BigRational::from_integer(binomial(n + l, n - k)) * &power / BigRational::from_integer(fact.clone());
        abs_sum += term.abs();
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    (sum.to_f64().unwrap(), abs_sum.to_f64().unwrap())
}

#[test]
fn laguerre_matches_exact_rational_sum() {
    let xs: Vec<BigRational> = (-40..=40).map(|k| BigRational::new(BigInt::from(k), BigInt::from(2))).collect();
    let mut worst = 0.0_f64;
    for n in 0..=30usize {
        for l in -(n as i64).min(4)..=12 {
            for x in &xs {
                let xf = x.to_f64().unwrap();
                let got = laguerre_poly(n, l, xf).unwrap();
                let (exact, scale) = laguerre_exact(n, l, x);
                // relative error against the value, except where cancellation
                // makes the value itself tiny compared with its terms
                let err = (got - exact).abs() / exact.abs().max(1e-4 * scale);
                worst = worst.max(err);
            }
        }
    }
    assert!(worst < 1e-12, "worst relative Laguerre error {worst:e}");
}

#[test]
fn laguerre_rejects_superscript_below_minus_n() {
    assert!(laguerre_poly(3, -4, 1.0).is_err());
    assert!(laguerre_poly(3, -3, 1.0).is_ok());
    assert!(laguerre_poly(3, 0, f64::NAN).is_err());
    assert!(laguerre_transition(2, 1, -0.5).is_err());
}

/// `exp(β(a† - a))` on `big` levels; the top-left `keep × keep` block is
/// accurate when `big` is well beyond `keep + β²`.
fn expm_displacement(beta: f64, big: usize) -> DMatrix<C64> {
    let mut g = DMatrix::<C64>::zeros(big, big);
    for m in 1..big {
        let s = (m as f64).sqrt() * beta;
        g[(m, m - 1)] = C64::from(s);
        g[(m - 1, m)] = C64::from(-s);
    }
    g.exp()
}

#[test]
fn displacement_matrix_matches_matrix_exponential() {
    let mut rng = Lcg(0x5eed);
    let keep = 16;
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let beta = 4.0 * rng.next() - 2.0;
        let reference = expm_displacement(beta, 90);
        let ours = displacement_matrix(DisplacementAmplitude::new(beta).unwrap(), FockSpace::new(keep).unwrap());
        for m in 0..keep {
            for k in 0..keep {
                worst = worst.max((ours[(m, k)] - reference[(m, k)]).norm());
            }
        }
    }
    assert!(worst < 1e-9, "max deviation from expm {worst:e}");
}

#[test]
fn transition_rows_are_normalized() {
    for &alpha in &[0.0, 0.01, 0.25, 1.0, 4.0, 20.0] {
        for n in [0usize, 1, 5, 20, 40] {
            let total: f64 = (0..400).map(|m| laguerre_transition(n, m, alpha).unwrap().powi(2)).sum();
            assert!((total - 1.0).abs() < 1e-10, "n = {n}, α = {alpha}: Σ = {total}");
        }
    }
}

#[test]
fn displaced_states_are_orthonormal() {
    let space = FockSpace::new(120).unwrap();
    for beta in [-1.3, -0.1, 0.4, 2.0] {
        let amp = DisplacementAmplitude::new(beta).unwrap();
        let states: Vec<_> = (0..15).map(|n| displaced_fock(n, amp, space).unwrap()).collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let dot = a.dotc(b);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - C64::from(want)).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn large_indices_stay_finite() {
    for (s, sp) in [(150, 0), (0, 150), (180, 175)] {
        let v = laguerre_transition(s, sp, 30.0).unwrap();
        assert!(v.is_finite() && v.abs() <= 1.0);
    }
}

/// Small deterministic generator for reproducible sweeps.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

proptest! {
    #[test]
    fn transition_antisymmetry(s in 0usize..60, sp in 0usize..60, alpha in 0.0f64..25.0) {
        let a = laguerre_transition(s, sp, alpha).unwrap();
        let b = laguerre_transition(sp, s, alpha).unwrap();
        let sign = if (s + sp) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn transition_unitarity(n in 0usize..50, alpha in 0.0f64..30.0) {
        let total: f64 = (0..500).map(|m| laguerre_transition(n, m, alpha).unwrap().powi(2)).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn displacement_inverse(beta in -2.0f64..2.0, m in 0usize..20, k in 0usize..20) {
        // Σ_j <m|D(β)|j><j|D(-β)|k> = δ_mk over a basis large enough to hold both
        let b = DisplacementAmplitude::new(beta).unwrap();
        let acc: f64 = (0..120).map(|j| displacement_element(m, j, b) * displacement_element(j, k, -b)).sum();
        let want = if m == k { 1.0 } else { 0.0 };
        prop_assert!((acc - want).abs() < 1e-10);
    }
}
