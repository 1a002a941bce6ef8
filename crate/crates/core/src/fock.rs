//! Special-function kernels for displaced oscillators.
//!
//! Everything here is built on the overlap amplitudes between Fock states of
//! two oscillators whose equilibria are shifted relative to one another:
//!
//! ```text
//! I_{s,s'}(α) = sqrt(s'!/s!) e^{-α/2} α^{(s-s')/2} L_{s'}^{(s-s')}(α)
//! ```
//!
//! with `L_n^{(l)}` the generalized Laguerre polynomial. For real `β`, the
//! Fock-basis elements of the displacement operator `D(β) = exp(β(a† - a))`
//! are
//!
//! ```text
//! <m|D(β)|k> = I_{m,k}(β²)   for β >= 0
//!            = I_{k,m}(β²)   for β <  0
//! ```
//!
//! so that `D(β)|k>` is the displaced Fock state returned by
//! [`displaced_fock`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Default tolerance used when checking truncation-induced loss of norm.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-10;

/// Two-level label.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    pub fn sign(self) -> f64 {
        match self {
            Spin::Down => -1.0,
            Spin::Up => 1.0,
        }
    }
}

/// Truncated oscillator space together with the layout of the
/// `{↓, ↑} ⊗ Fock` product basis.
///
/// Product index of `(spin, N)` is `N` for `↓` and `n_max + N` for `↑`: the
/// spin-down block comes first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FockSpace {
    n_max: usize,
}

impl FockSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::Domain(format!("n_max must be at least 2, got {n_max}")));
        }
        Ok(Self { n_max })
    }

    /// Number of retained oscillator levels (states `0..n_max`).
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Dimension of the product space, `2 * n_max`.
    pub fn dim(&self) -> usize {
        2 * self.n_max
    }

    pub fn index(&self, spin: Spin, n: usize) -> usize {
        debug_assert!(n < self.n_max);
        match spin {
            Spin::Down => n,
            Spin::Up => self.n_max + n,
        }
    }

    /// Inverse of [`FockSpace::index`].
    pub fn label(&self, index: usize) -> (Spin, usize) {
        if index < self.n_max {
            (Spin::Down, index)
        } else {
            (Spin::Up, index - self.n_max)
        }
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        if n >= self.n_max {
            Err(Error::IndexOutOfRange { index: n, n_max: self.n_max })
        } else {
            Ok(())
        }
    }
}

/// Dimensionless real displacement `β` (a coupling divided by `ω`).
///
/// The sign is meaningful: `D(β)` and `D(-β)` shift the oscillator in
/// opposite directions.
#[derive(Copy, Clone, Debug, PartialEq, PartialOrd)]
pub struct DisplacementAmplitude(f64);

impl DisplacementAmplitude {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::Domain(format!("displacement must be finite, got {beta}")));
        }
        Ok(Self(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `β²`, the argument of the Laguerre transition functions and the mean
    /// photon number of the displaced vacuum.
    pub fn alpha(self) -> f64 {
        self.0 * self.0
    }
}

impl std::ops::Neg for DisplacementAmplitude {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Generalized Laguerre polynomial `L_n^{(l)}(x)`.
///
/// Evaluated by the forward three-term recurrence
/// `(k+1) L_{k+1} = (2k + 1 + l - x) L_k - (k + l) L_{k-1}`, which holds for
/// any integer `l`, including the negative superscripts `l >= -n`.
pub fn laguerre_poly(n: usize, l: i64, x: f64) -> Result<f64> {
    if l < -(n as i64) {
        return Err(Error::Domain(format!("Laguerre superscript {l} below -n = -{n}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("Laguerre argument must be finite, got {x}")));
    }
    Ok(laguerre_unchecked(n, l as f64, x))
}

pub(crate) fn laguerre_unchecked(n: usize, l: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + l - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + l - x) * cur - (kf + l) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Laguerre transition function `I_{s,s'}(α)`.
///
/// For `s < s'` the value is obtained from `(-1)^{s-s'} I_{s',s}(α)` so the
/// Laguerre superscript is never negative; both orderings share
/// [`transition_ordered`]. Factorial ratios are formed from log-gamma.
pub fn laguerre_transition(s: usize, s_prime: usize, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("transition argument must be finite and >= 0, got {alpha}")));
    }
    Ok(transition_unchecked(s, s_prime, alpha))
}

pub(crate) fn transition_unchecked(s: usize, s_prime: usize, alpha: f64) -> f64 {
    if s >= s_prime {
        transition_ordered(s, s_prime, alpha)
    } else {
        let value = transition_ordered(s_prime, s, alpha);
        if (s_prime - s) % 2 == 1 {
            -value
        } else {
            value
        }
    }
}

/// `I_{hi,lo}(α)` with `hi >= lo`.
fn transition_ordered(hi: usize, lo: usize, alpha: f64) -> f64 {
    debug_assert!(hi >= lo);
    let diff = hi - lo;
    if alpha == 0.0 {
        return if diff == 0 { 1.0 } else { 0.0 };
    }
    let ln_prefactor = 0.5 * (ln_factorial(lo) - ln_factorial(hi)) - 0.5 * alpha
        + 0.5 * diff as f64 * alpha.ln();
    laguerre_unchecked(lo, diff as f64, alpha) * ln_prefactor.exp()
}

/// Fock-basis element `<m|D(β)|k>` of the displacement operator.
pub fn displacement_element(m: usize, k: usize, beta: DisplacementAmplitude) -> f64 {
    let alpha = beta.alpha();
    if beta.value() >= 0.0 {
        transition_unchecked(m, k, alpha)
    } else {
        transition_unchecked(k, m, alpha)
    }
}

/// `n_max × n_max` matrix of `D(β)` in the truncated Fock basis.
///
/// Entries are exact matrix elements of the untruncated operator, so the
/// matrix is unitary only up to the weight that leaks past `n_max`.
pub fn displacement_matrix(beta: DisplacementAmplitude, space: FockSpace) -> DMatrix<C64> {
    let n = space.n_max();
    DMatrix::from_fn(n, n, |m, k| C64::from(displacement_element(m, k, beta)))
}

/// Displaced Fock state `D(β)|n>` as amplitudes over `|0>..|n_max-1>`.
///
/// Components are `I_{M,n}(β²)` for `β >= 0` and `I_{n,M}(β²)` for `β < 0`.
pub fn displaced_fock(n: usize, beta: DisplacementAmplitude, space: FockSpace) -> Result<DVector<C64>> {
    space.check(n)?;
    Ok(DVector::from_fn(space.n_max(), |m, _| C64::from(displacement_element(m, n, beta))))
}

/// Norm lost to truncation by `D(β)|n>`: `1 - Σ_M |<M|D(β)|n>|²`.
pub fn truncation_loss(n: usize, beta: DisplacementAmplitude, space: FockSpace) -> f64 {
    let kept: f64 = (0..space.n_max())
        .map(|m| displacement_element(m, n, beta).powi(2))
        .sum();
    1.0 - kept
}

/// Whether `D(β)|n>` fits in `space` to within `tol`.
pub fn fits_in(n: usize, beta: DisplacementAmplitude, space: FockSpace, tol: f64) -> bool {
    n < space.n_max() && truncation_loss(n, beta, space).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn amp(b: f64) -> DisplacementAmplitude {
        DisplacementAmplitude::new(b).unwrap()
    }

    #[test]
    fn laguerre_low_orders() {
        for l in [0, 2, 7] {
            assert_eq!(laguerre_poly(0, l, 4.2).unwrap(), 1.0);
        }
        assert!(laguerre_poly(0, -1, 4.2).is_err());
        assert_eq!(laguerre_poly(1, 0, 0.0).unwrap(), 1.0);
        // L_3^{(2)}(x) = 10 - 10x + 5x²/2 - x³/6, exactly 1/16 at 3/2
        assert_relative_eq!(laguerre_poly(3, 2, 1.5).unwrap(), 1.0 / 16.0, max_relative = 1e-13);
        // negative superscript: L_2^{(-2)}(x) = x²/2
        assert_relative_eq!(laguerre_poly(2, -2, 0.3).unwrap(), 0.045, max_relative = 1e-13);
    }

    #[test]
    fn laguerre_rejects_bad_superscript() {
        assert!(matches!(laguerre_poly(2, -3, 1.0), Err(Error::Domain(_))));
        assert!(laguerre_poly(2, 0, f64::NAN).is_err());
    }

    #[test]
    fn transition_values() {
        assert_eq!(laguerre_transition(0, 0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(laguerre_transition(1, 0, 1.0).unwrap(), (-0.5f64).exp(), max_relative = 1e-14);
        let fwd = laguerre_transition(2, 5, 0.3).unwrap();
        let back = laguerre_transition(5, 2, 0.3).unwrap();
        assert_eq!(fwd, -back);
        assert!(matches!(laguerre_transition(1, 1, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn transition_large_indices_finite() {
        for &(s, sp) in &[(500, 3), (3, 500), (499, 500), (250, 250)] {
            let v = laguerre_transition(s, sp, 2.0).unwrap();
            assert!(v.is_finite(), "I_{s},{sp} = {v}");
            assert!(v.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn zero_displacement_is_identity() {
        let space = FockSpace::new(12).unwrap();
        let d = displacement_matrix(amp(0.0), space);
        assert_eq!(d, DMatrix::identity(12, 12));
        let v = displaced_fock(0, amp(0.0), space).unwrap();
        assert_eq!(v[0], C64::from(1.0));
        assert!(v.iter().skip(1).all(|z| *z == C64::from(0.0)));
    }

    #[test]
    fn inverse_displacement() {
        let space = FockSpace::new(60).unwrap();
        let d = displacement_matrix(amp(0.7), space);
        let dinv = displacement_matrix(amp(-0.7), space);
        let prod = &d * &dinv;
        for i in 0..20 {
            for j in 0..20 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn coherent_state_is_poisson() {
        let space = FockSpace::new(80).unwrap();
        let b = 1.7f64;
        let v = displaced_fock(0, amp(b), space).unwrap();
        let mean = b * b;
        let mut poisson = (-mean).exp();
        for (m, z) in v.iter().enumerate() {
            if m > 0 {
                poisson *= mean / m as f64;
            }
            assert!((z.norm_sqr() - poisson).abs() < 1e-14);
        }
        let n_avg: f64 = v.iter().enumerate().map(|(m, z)| m as f64 * z.norm_sqr()).sum();
        assert_relative_eq!(n_avg, mean, max_relative = 1e-12);
    }

    #[test]
    fn index_out_of_range() {
        let space = FockSpace::new(4).unwrap();
        assert!(matches!(
            displaced_fock(4, amp(0.1), space),
            Err(Error::IndexOutOfRange { index: 4, n_max: 4 })
        ));
        assert!(FockSpace::new(1).is_err());
    }

    #[test]
    fn layout_round_trip() {
        let space = FockSpace::new(7).unwrap();
        for i in 0..space.dim() {
            let (s, n) = space.label(i);
            assert_eq!(space.index(s, n), i);
        }
        assert_eq!(space.index(Spin::Up, 0), 7);
    }

    #[test]
    fn truncation_loss_small_for_wide_space() {
        let space = FockSpace::new(80).unwrap();
        assert!(fits_in(3, amp(1.2), space, DEFAULT_TRUNCATION_TOL));
        let narrow = FockSpace::new(5).unwrap();
        assert!(!fits_in(3, amp(1.2), narrow, DEFAULT_TRUNCATION_TOL));
    }
}
