//! Multiphoton rotating-wave treatment.
//!
//! The spin-up and spin-down oscillators are displaced in opposite
//! directions, `|↑, K⟩ → D(-λ_e/ω)|K⟩` and `|↓, N⟩ → D(+λ_g/ω)|N⟩`, which
//! shifts the bare transition to
//!
//! ```text
//! ω_eg = ω₀ + λ_g²/ω - λ_e²/ω.
//! ```
//!
//! Near `ω_eg ≈ nω` the ladders cross: `|↓, N⟩` is almost degenerate with
//! `|↑, N - n⟩`, and the coupling `λ_eg σ_x (a† + a)` splits each crossing
//! into a symmetric/antisymmetric pair with splitting `2|V_N(n)|`.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{displaced_fock, displacement_element, DisplacementAmplitude, FockSpace, Spin};
use crate::model::{displaced_energy, ModelParams};
use crate::validity::Warning;

/// Below this `|λ_e + λ_g|/ω` the closed form for `V_N(n)` is replaced by the
/// direct matrix element.
pub const SINGULAR_THRESHOLD: f64 = 1e-6;

/// Default `|δ_n|/ω` window for treating a crossing as resonant.
pub const DEFAULT_DETUNING_WINDOW: f64 = 0.1;

/// `|V_N(n)|/ω` at or above which the weak-coupling condition is flagged.
pub const STRONG_COUPLING_LIMIT: f64 = 0.1;

/// Shifted transition frequency `ω_eg`.
pub fn omega_eg(params: &ModelParams) -> f64 {
    params.omega0 + (params.lambda_g.powi(2) - params.lambda_e.powi(2)) / params.omega
}

/// The `ω₀` that puts the system exactly on the `n`-photon resonance,
/// `ω_eg = nω`.
pub fn resonant_omega0(omega: f64, lambda_g: f64, lambda_e: f64, n: usize) -> f64 {
    n as f64 * omega - (lambda_g.powi(2) - lambda_e.powi(2)) / omega
}

/// An `n`-photon resonance and the detuning `δ_n = ω_eg - nω` from it.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSpec {
    n: usize,
    delta_n: f64,
}

impl ResonanceSpec {
    pub fn for_params(params: &ModelParams, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("resonance order n must be >= 1".into()));
        }
        Ok(Self { n, delta_n: omega_eg(params) - n as f64 * params.omega })
    }

    /// Nearest resonance, provided it lies within `window · ω`.
    pub fn detect(params: &ModelParams, window: f64) -> Result<Self> {
        let ratio = omega_eg(params) / params.omega;
        let n = ratio.round();
        if n < 1.0 {
            return Err(Error::Domain(format!("omega_eg/omega = {ratio:.4} is below the one-photon resonance")));
        }
        let spec = Self::for_params(params, n as usize)?;
        if spec.delta_n.abs() >= window * params.omega {
            return Err(Error::Domain(format!(
                "omega_eg/omega = {ratio:.4} is not within {window} of any resonance"
            )));
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta_n(&self) -> f64 {
        self.delta_n
    }

    pub fn warnings(&self, params: &ModelParams, window: f64) -> Vec<Warning> {
        if self.delta_n.abs() >= window * params.omega {
            vec![Warning::LargeDetuning { n: self.n, delta_n: self.delta_n, window: window * params.omega }]
        } else {
            Vec::new()
        }
    }
}

fn check_manifold(n_manifold: usize, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("resonance order n must be >= 1".into()));
    }
    if n_manifold < n {
        return Err(Error::Domain(format!("manifold N = {n_manifold} below resonance order n = {n}")));
    }
    Ok(())
}

/// Coupling `V_N(n) = ⟨↓, N^{(λ_g)}| λ_eg σ_x (a† + a) |↑, (N-n)^{(λ_e)}⟩`.
pub fn coupling_element(params: &ModelParams, n_manifold: usize, n: usize) -> Result<f64> {
    coupling_element_with(params, n_manifold, n, SINGULAR_THRESHOLD)
}

/// [`coupling_element`] with an explicit switch-over threshold on
/// `|λ_e + λ_g|/ω`.
pub fn coupling_element_with(params: &ModelParams, n_manifold: usize, n: usize, threshold: f64) -> Result<f64> {
    check_manifold(n_manifold, n)?;
    let c = params.beta_g() + params.beta_e();
    if c.abs() < threshold {
        return Ok(coupling_direct(params, n_manifold, n));
    }
    // ⟨N|D(-c)|N-n⟩ is I_{N-n,N}(c²) for c > 0
    let overlap = displacement_element(n_manifold, n_manifold - n, DisplacementAmplitude::new(-c)?);
    let bracket = params.beta_g() - params.beta_e() - n as f64 / c;
    Ok(params.lambda_eg * bracket * overlap)
}

/// Matrix element from explicit displaced-state vectors.
fn coupling_direct(params: &ModelParams, n_manifold: usize, n: usize) -> f64 {
    let bg = params.beta_g();
    let be = params.beta_e();
    let spread = bg.abs().max(be.abs());
    let n_max = n_manifold + 60 + (20.0 * spread * spread).ceil() as usize;
    let space = FockSpace::new(n_max).expect("n_max >= 60");
    let down = displaced_fock(n_manifold, DisplacementAmplitude::new(bg).expect("finite"), space).expect("in range");
    let up = displaced_fock(n_manifold - n, DisplacementAmplitude::new(-be).expect("finite"), space).expect("in range");
    // ⟨down|(a† + a)|up⟩
    let mut acc = 0.0;
    for m in 0..n_max {
        let u = up[m].re;
        if m + 1 < n_max {
            acc += down[m + 1].re * ((m + 1) as f64).sqrt() * u;
        }
        if m > 0 {
            acc += down[m - 1].re * (m as f64).sqrt() * u;
        }
    }
    params.lambda_eg * acc
}

/// Multiphoton vacuum Rabi frequency `Ω_N(n) = 2|V_N(n)|`.
pub fn rabi_frequency(params: &ModelParams, n_manifold: usize, n: usize) -> Result<f64> {
    Ok(2.0 * coupling_element(params, n_manifold, n)?.abs())
}

/// Sign label of a dressed state; `Plus` is the upper level of the pair.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alpha {
    Plus,
    Minus,
}

impl Alpha {
    pub fn sign(self) -> f64 {
        match self {
            Alpha::Plus => 1.0,
            Alpha::Minus => -1.0,
        }
    }
}

/// One member of a resonant manifold,
/// `c_down |↓, N^{(λ_g)}⟩ + c_up |↑, (N-n)^{(λ_e)}⟩`.
///
/// Coefficients are real with `c_down >= 0` (or `c_up > 0` when `c_down`
/// vanishes).
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DressedState {
    pub n_manifold: usize,
    pub n: usize,
    pub alpha: Alpha,
    pub energy: f64,
    pub c_down: f64,
    pub c_up: f64,
}

impl DressedState {
    /// Amplitudes of this state over the product basis of `space`.
    pub fn vector(&self, params: &ModelParams, space: FockSpace) -> Result<DVector<C64>> {
        let mut out = DVector::zeros(space.dim());
        let down = displaced_fock(self.n_manifold, DisplacementAmplitude::new(params.beta_g())?, space)?;
        let up = displaced_fock(self.n_manifold - self.n, DisplacementAmplitude::new(-params.beta_e())?, space)?;
        let n_max = space.n_max();
        out.rows_mut(0, n_max).copy_from(&(down * C64::from(self.c_down)));
        out.rows_mut(n_max, n_max).copy_from(&(up * C64::from(self.c_up)));
        Ok(out)
    }
}

/// Both dressed states of manifold `N` of an `n`-photon resonance.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DressedPair {
    pub plus: DressedState,
    pub minus: DressedState,
    /// `V_N(n)`.
    pub coupling: f64,
    /// `E_{e,N-n} - E_{g,N}`, equal to `δ_n`.
    pub detuning: f64,
    /// `V_N(n) = δ_n = 0`: the unmixed states are returned.
    pub degenerate: bool,
}

impl DressedPair {
    pub fn rabi_frequency(&self) -> f64 {
        2.0 * self.coupling.abs()
    }

    pub fn get(&self, alpha: Alpha) -> &DressedState {
        match alpha {
            Alpha::Plus => &self.plus,
            Alpha::Minus => &self.minus,
        }
    }
}

/// Secular diagonalization of the two-level manifold `{|↓, N⟩, |↑, N-n⟩}`.
pub fn dressed_pair(params: &ModelParams, spec: &ResonanceSpec, n_manifold: usize) -> Result<DressedPair> {
    let n = spec.n();
    check_manifold(n_manifold, n)?;
    let v = coupling_element(params, n_manifold, n)?;
    let e_g = displaced_energy(params, Spin::Down, n_manifold);
    let e_e = displaced_energy(params, Spin::Up, n_manifold - n);
    let mean = 0.5 * (e_g + e_e);
    let detuning = e_e - e_g;
    let half_split = (0.25 * detuning * detuning + v * v).sqrt();

    let degenerate = half_split == 0.0;
    let make = |alpha: Alpha| -> DressedState {
        let energy = mean + alpha.sign() * half_split;
        let (c_down, c_up) = if degenerate {
            match alpha {
                Alpha::Plus => (1.0, 0.0),
                Alpha::Minus => (0.0, 1.0),
            }
        } else {
            // two equivalent null vectors of the 2×2 secular matrix; take
            // the better-conditioned one
            // offsets from the bare energies, formed without cancellation
            let above_g = 0.5 * detuning + alpha.sign() * half_split;
            let above_e = -0.5 * detuning + alpha.sign() * half_split;
            let a = (v, above_g);
            let b = (above_e, v);
            let (x, y) = if a.0.hypot(a.1) >= b.0.hypot(b.1) { a } else { b };
            let norm = x.hypot(y);
            let (x, y) = (x / norm, y / norm);
            if x < 0.0 || (x == 0.0 && y < 0.0) {
                (-x, -y)
            } else {
                (x, y)
            }
        };
        DressedState { n_manifold, n, alpha, energy, c_down, c_up }
    };
    Ok(DressedPair { plus: make(Alpha::Plus), minus: make(Alpha::Minus), coupling: v, detuning, degenerate })
}

/// Unmixed eigenstate `|↓, N^{(λ_g)}⟩`, `N < n`, lying below the first
/// resonant crossing.
#[derive(Clone, Debug, PartialEq)]
pub struct UnmixedState {
    pub n_manifold: usize,
    pub energy: f64,
    pub vector: DVector<C64>,
}

/// The `n` low-lying states `|↓, N^{(λ_g)}⟩`, `N = 0..n`, with energies
/// `E_{g,N}`.
pub fn low_manifold_states(params: &ModelParams, spec: &ResonanceSpec, space: FockSpace) -> Result<Vec<UnmixedState>> {
    let beta = DisplacementAmplitude::new(params.beta_g())?;
    (0..spec.n())
        .map(|nm| {
            let osc = displaced_fock(nm, beta, space)?;
            let mut vector = DVector::zeros(space.dim());
            vector.rows_mut(0, space.n_max()).copy_from(&osc);
            Ok(UnmixedState { n_manifold: nm, energy: displaced_energy(params, Spin::Down, nm), vector })
        })
        .collect()
}

/// Weak-coupling and detuning diagnostics over manifolds `range`.
pub fn validity_warnings(
    params: &ModelParams,
    spec: &ResonanceSpec,
    range: std::ops::Range<usize>,
    window: f64,
) -> Result<Vec<Warning>> {
    let mut out = spec.warnings(params, window);
    for nm in range.start.max(spec.n())..range.end {
        let v = coupling_element(params, nm, spec.n())?;
        if v.abs() >= STRONG_COUPLING_LIMIT * params.omega {
            out.push(Warning::StrongCoupling { n_manifold: nm, n: spec.n(), coupling: v });
        }
    }
    Ok(out)
}

/// Exported record of one resonant manifold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct ManifoldRecord {
    pub n_manifold: usize,
    pub n: usize,
    pub delta_n: f64,
    pub V: f64,
    pub Omega: f64,
    pub E_plus: f64,
    pub E_minus: f64,
    /// `[plus, minus]`.
    pub c_down: [f64; 2],
    /// `[plus, minus]`.
    pub c_up: [f64; 2],
}

impl From<&DressedPair> for ManifoldRecord {
    fn from(p: &DressedPair) -> Self {
        Self {
            n_manifold: p.plus.n_manifold,
            n: p.plus.n,
            delta_n: p.detuning,
            V: p.coupling,
            Omega: p.rabi_frequency(),
            E_plus: p.plus.energy,
            E_minus: p.minus.energy,
            c_down: [p.plus.c_down, p.minus.c_down],
            c_up: [p.plus.c_up, p.minus.c_up],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnmixedRecord {
    pub n_manifold: usize,
    pub energy: f64,
}

/// Dressed spectrum of one resonance: unmixed low states plus a range of
/// resonant manifolds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub params: ModelParams,
    pub n: usize,
    pub delta_n: f64,
    pub omega_eg: f64,
    pub unmixed: Vec<UnmixedRecord>,
    pub manifolds: Vec<ManifoldRecord>,
    pub warnings: Vec<Warning>,
}

/// Spectrum over manifolds `range` (clamped below at `n`).
pub fn spectrum(params: &ModelParams, spec: &ResonanceSpec, range: std::ops::Range<usize>, window: f64) -> Result<Spectrum> {
    let unmixed = (0..spec.n())
        .map(|nm| UnmixedRecord { n_manifold: nm, energy: displaced_energy(params, Spin::Down, nm) })
        .collect();
    let manifolds = (range.start.max(spec.n())..range.end)
        .map(|nm| dressed_pair(params, spec, nm).map(|p| ManifoldRecord::from(&p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        params: *params,
        n: spec.n(),
        delta_n: spec.delta_n(),
        omega_eg: omega_eg(params),
        unmixed,
        manifolds,
        warnings: validity_warnings(params, spec, range, window)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(omega0: f64, lg: f64, le: f64, leg: f64) -> ModelParams {
        ModelParams::new(1.0, omega0, lg, le, leg).unwrap()
    }

    #[test]
    fn shifted_frequency() {
        assert_eq!(omega_eg(&params(1.7, 0.0, 0.0, 0.1)), 1.7);
        assert_eq!(omega_eg(&params(1.7, 0.2, 0.2, 0.1)), 1.7);
        assert_relative_eq!(omega_eg(&params(2.0, 0.0, 0.1, 0.02)), 1.99, max_relative = 1e-15);
    }

    #[test]
    fn resonant_omega0_round_trip() {
        assert_eq!(resonant_omega0(1.0, 0.0, 0.0, 1), 1.0);
        assert_relative_eq!(resonant_omega0(1.0, 0.0, 0.1, 2), 2.01, max_relative = 1e-15);
        for (lg, le, n) in [(0.3, 0.1, 3), (0.0, 0.25, 5), (0.12, 0.0, 1)] {
            let w0 = resonant_omega0(1.3, lg, le, n);
            let p = ModelParams::new(1.3, w0, lg, le, 0.01).unwrap();
            assert!(ResonanceSpec::for_params(&p, n).unwrap().delta_n().abs() < 1e-12);
        }
    }

    #[test]
    fn detect_resonance() {
        let p = params(3.04, 0.1, 0.1, 0.02);
        let spec = ResonanceSpec::detect(&p, DEFAULT_DETUNING_WINDOW).unwrap();
        assert_eq!(spec.n(), 3);
        assert_relative_eq!(spec.delta_n(), 0.04, max_relative = 1e-12);
        assert!(ResonanceSpec::detect(&params(2.5, 0.0, 0.0, 0.02), DEFAULT_DETUNING_WINDOW).is_err());
        let far = ResonanceSpec::for_params(&params(2.5, 0.0, 0.0, 0.02), 2).unwrap();
        assert_eq!(far.warnings(&params(2.5, 0.0, 0.0, 0.02), 0.1).len(), 1);
    }

    #[test]
    fn jc_limit_selection_rule() {
        let p = params(1.0, 0.0, 0.0, 0.05);
        for nm in 2..10 {
            assert!(coupling_element(&p, nm, 2).unwrap().abs() < 1e-14);
        }
        for nm in 1..10 {
            let v = coupling_element(&p, nm, 1).unwrap();
            assert_relative_eq!(v.abs(), 0.05 * (nm as f64).sqrt(), max_relative = 1e-12);
        }
        assert_relative_eq!(rabi_frequency(&p, 1, 1).unwrap(), 0.1, max_relative = 1e-12);
    }

    #[test]
    fn manifold_below_order_rejected() {
        let p = params(2.01, 0.0, 0.1, 0.02);
        assert!(matches!(coupling_element(&p, 1, 2), Err(Error::Domain(_))));
        assert!(coupling_element(&p, 3, 0).is_err());
    }

    #[test]
    fn no_transition_coupling_means_no_rabi() {
        let p = params(2.01, 0.05, 0.1, 0.0);
        assert_eq!(rabi_frequency(&p, 4, 2).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_agrees_with_direct_path() {
        let p = params(2.01, 0.07, 0.11, 0.02);
        for n in 1..5 {
            for nm in n..n + 12 {
                let closed = coupling_element(&p, nm, n).unwrap();
                let direct = coupling_direct(&p, nm, n);
                assert_relative_eq!(closed, direct, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn resonant_pair_is_symmetric() {
        let w0 = resonant_omega0(1.0, 0.0, 0.1, 2);
        let p = params(w0, 0.0, 0.1, 0.02);
        let spec = ResonanceSpec::for_params(&p, 2).unwrap();
        let pair = dressed_pair(&p, &spec, 5).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sgn = pair.coupling.signum();
        assert_relative_eq!(pair.plus.c_down, s, max_relative = 1e-12);
        assert_relative_eq!(pair.plus.c_up, sgn * s, max_relative = 1e-12);
        assert_relative_eq!(pair.minus.c_up, -sgn * s, max_relative = 1e-12);
        let e_g = displaced_energy(&p, Spin::Down, 5);
        assert_relative_eq!(pair.plus.energy, e_g + pair.coupling.abs(), max_relative = 1e-12);
        assert_relative_eq!(pair.minus.energy, e_g - pair.coupling.abs(), max_relative = 1e-12);
        assert!(!pair.degenerate);
    }

    #[test]
    fn far_detuned_pair_decouples() {
        let p = params(2.3, 0.0, 0.1, 0.002);
        let spec = ResonanceSpec::for_params(&p, 2).unwrap();
        let pair = dressed_pair(&p, &spec, 3).unwrap();
        // δ > 0: upper state is mostly spin-up
        assert!(pair.plus.c_up.abs() > 0.999_99);
        assert!(pair.minus.c_down > 0.999_99);
        assert_relative_eq!(pair.plus.energy, displaced_energy(&p, Spin::Up, 1), max_relative = 1e-6);
        assert_relative_eq!(pair.minus.energy, displaced_energy(&p, Spin::Down, 3), max_relative = 1e-6);
    }

    #[test]
    fn degenerate_pair_is_flagged() {
        let p = params(2.0, 0.0, 0.0, 0.02);
        let spec = ResonanceSpec::for_params(&p, 2).unwrap();
        let pair = dressed_pair(&p, &spec, 4).unwrap();
        assert!(pair.degenerate);
        assert_eq!((pair.plus.c_down, pair.plus.c_up), (1.0, 0.0));
        assert_eq!((pair.minus.c_down, pair.minus.c_up), (0.0, 1.0));
        assert_eq!(pair.plus.energy, pair.minus.energy);
    }

    #[test]
    fn low_manifold() {
        let p = params(resonant_omega0(1.0, 0.2, 0.1, 3), 0.2, 0.1, 0.02);
        let spec = ResonanceSpec::for_params(&p, 3).unwrap();
        let space = FockSpace::new(40).unwrap();
        let low = low_manifold_states(&p, &spec, space).unwrap();
        assert_eq!(low.len(), 3);
        assert_eq!(low[1].energy - low[0].energy, 1.0);
        assert_eq!(low[2].energy - low[1].energy, 1.0);
        // ground-state field is coherent with mean (λ_g/ω)²
        let mean = 0.04f64;
        let mut poisson = (-mean).exp();
        for m in 0..space.n_max() {
            if m > 0 {
                poisson *= mean / m as f64;
            }
            assert!((low[0].vector[m].norm_sqr() - poisson).abs() < 1e-15);
        }
        let one = low_manifold_states(&p, &ResonanceSpec::for_params(&p, 1).unwrap(), space).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].energy, displaced_energy(&p, Spin::Down, 0));
    }

    #[test]
    fn strong_coupling_flagged() {
        let p = params(resonant_omega0(1.0, 0.0, 0.0, 1), 0.0, 0.0, 0.06);
        let spec = ResonanceSpec::for_params(&p, 1).unwrap();
        let w = validity_warnings(&p, &spec, 1..6, DEFAULT_DETUNING_WINDOW).unwrap();
        // 2·0.06·√N/2 = 0.06√N ≥ 0.1 from N = 3
        assert_eq!(w.len(), 3);
    }

    #[test]
    fn empty_spectrum_range() {
        let p = params(2.01, 0.0, 0.1, 0.02);
        let spec = ResonanceSpec::for_params(&p, 2).unwrap();
        let s = spectrum(&p, &spec, 5..5, DEFAULT_DETUNING_WINDOW).unwrap();
        assert!(s.manifolds.is_empty());
        assert_eq!(s.unmixed.len(), 2);
    }
}
