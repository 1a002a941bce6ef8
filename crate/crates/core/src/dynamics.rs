//! Time evolution by two independent routes.
//!
//! [`evolve_numeric`] integrates `i dψ/dt = Hψ` for the full Hamiltonian
//! with the classic fourth-order Runge–Kutta scheme. [`evolve_rwa`] expands
//! the initial state over the dressed basis of [`crate::rwa`] and attaches
//! phases analytically. [`inversion_fock`] and [`inversion_coherent`] are the
//! closed-form inversions at exact resonance for the two standard initial
//! states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{displaced_fock, displacement_matrix, transition_unchecked, DisplacementAmplitude, FockSpace, Spin};
use crate::model::{build_full, displaced_energy, HamiltonianMatrix, ModelParams, SparseOperator};
use crate::rwa::{dressed_pair, rabi_frequency, ResonanceSpec};
use crate::validity::Warning;

/// Oscillator levels kept by default.
pub const DEFAULT_N_MAX: usize = 200;
/// Default RK4 steps per oscillator period.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 1000;
/// Default bound on `|‖ψ‖² - 1|` before a run is aborted.
pub const DEFAULT_NORM_BOUND: f64 = 1e-6;
/// Population allowed in the top [`TRUNCATION_LEVELS`] photon levels.
pub const TRUNCATION_BOUND: f64 = 1e-8;
pub const TRUNCATION_LEVELS: usize = 5;
/// Required fraction of the initial norm captured by the dressed basis.
pub const PROJECTION_TOLERANCE: f64 = 1e-6;

const SERIES_WEIGHT_TOL: f64 = 1e-10;
const SERIES_MAX_TERMS: usize = 100_000;

/// Amplitudes over the product basis of a [`FockSpace`] at a given time.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    pub amplitudes: DVector<C64>,
    pub time: f64,
    space: FockSpace,
}

impl QuantumState {
    pub fn new(space: FockSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::Domain(format!(
                "state has {} amplitudes, space needs {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        Ok(Self { amplitudes, time: 0.0, space })
    }

    /// Bare product state `|spin, n⟩`.
    pub fn basis(space: FockSpace, spin: Spin, n: usize) -> Result<Self> {
        space.check(n)?;
        let mut amplitudes = DVector::zeros(space.dim());
        amplitudes[space.index(spin, n)] = C64::from(1.0);
        Self::new(space, amplitudes)
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    fn block(&self, spin: Spin) -> DVector<C64> {
        let n = self.space.n_max();
        self.amplitudes.rows(self.space.index(spin, 0), n).into_owned()
    }
}

/// How to prepare the initial state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialStateSpec {
    /// `|↑⟩ ⊗ |n_photons⟩`.
    ExcitedFock { n_photons: usize },
    /// `|↓⟩ ⊗` coherent state with mean photon number `mean_photons`.
    GroundCoherent { mean_photons: f64 },
    /// Explicit amplitudes, normalized on preparation.
    CustomVector { amplitudes: Vec<[f64; 2]> },
}

/// Builds the initial state.
///
/// The coherent state is the displaced vacuum `D(-√N̄)|0⟩`, i.e. the vacuum
/// of an oscillator displaced the same way as the spin-up ladder by
/// `λ'/ω = √N̄`. Its overlaps with `|↓, N^{(λ_g)}⟩` are then
/// `I_{N,0}((√N̄ + λ_g/ω)²)` up to sign, which is what
/// [`inversion_coherent`] sums.
pub fn prepare_initial(spec: &InitialStateSpec, _params: &ModelParams, space: FockSpace) -> Result<QuantumState> {
    match spec {
        InitialStateSpec::ExcitedFock { n_photons } => QuantumState::basis(space, Spin::Up, *n_photons),
        InitialStateSpec::GroundCoherent { mean_photons } => {
            let nbar = *mean_photons;
            if !(nbar >= 0.0) || !nbar.is_finite() {
                return Err(Error::Domain(format!("mean photon number must be >= 0, got {nbar}")));
            }
            if nbar + 5.0 * nbar.sqrt() > space.n_max() as f64 {
                return Err(Error::Truncation(format!(
                    "coherent state with mean {nbar} needs n_max > {:.1}, have {}",
                    nbar + 5.0 * nbar.sqrt(),
                    space.n_max()
                )));
            }
            let osc = displaced_fock(0, DisplacementAmplitude::new(-nbar.sqrt())?, space)?;
            let mut amplitudes = DVector::zeros(space.dim());
            amplitudes.rows_mut(0, space.n_max()).copy_from(&osc);
            let norm = amplitudes.norm();
            QuantumState::new(space, amplitudes / C64::from(norm))
        }
        InitialStateSpec::CustomVector { amplitudes } => {
            let v = DVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|[re, im]| C64::new(*re, *im)));
            let norm = v.norm();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(Error::Domain("custom initial vector has zero or non-finite norm".into()));
            }
            QuantumState::new(space, v / C64::from(norm))
        }
    }
}

/// Inversion `W = Σ_N (|ψ_↑N|² - |ψ_↓N|²)` and photon distribution
/// `P_N = |ψ_↑N|² + |ψ_↓N|²`.
pub fn observables(psi: &QuantumState) -> (f64, Vec<f64>) {
    observables_of(psi.amplitudes.as_slice(), psi.space.n_max())
}

fn observables_of(amps: &[C64], n_max: usize) -> (f64, Vec<f64>) {
    let (down, up) = amps.split_at(n_max);
    let mut w = 0.0;
    let p = down
        .iter()
        .zip(up)
        .map(|(d, u)| {
            let (pd, pu) = (d.norm_sqr(), u.norm_sqr());
            w += pu - pd;
            pd + pu
        })
        .collect();
    (w, p)
}

/// Sampled observables along a run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Oscillator period `2π/ω`, the unit of [`Trajectory::times_in_periods`].
    pub period: f64,
    /// Sample times in the model's time units.
    pub times: Vec<f64>,
    pub inversion: Vec<f64>,
    /// One row of `P_N` per sample.
    pub photon_dist: Vec<Vec<f64>>,
    pub norm: Vec<f64>,
    pub energy: Vec<f64>,
    /// Largest population seen in the top [`TRUNCATION_LEVELS`] levels.
    pub max_top_population: f64,
    pub warnings: Vec<Warning>,
}

impl Trajectory {
    fn new(period: f64) -> Self {
        Self { period, ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times_in_periods(&self) -> Vec<f64> {
        self.times.iter().map(|t| t / self.period).collect()
    }

    /// Largest `|‖ψ‖² - 1|` over the samples.
    pub fn max_norm_drift(&self) -> f64 {
        self.norm.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn truncation_ok(&self) -> bool {
        self.max_top_population < TRUNCATION_BOUND
    }

    /// Time series of a single photon-number probability.
    pub fn photon_series(&self, n: usize) -> Vec<f64> {
        self.photon_dist.iter().map(|row| row[n]).collect()
    }

    fn push(&mut self, t: f64, amps: &[C64], n_max: usize, h: &SparseOperator) {
        let (w, p) = observables_of(amps, n_max);
        let top: f64 = p[n_max.saturating_sub(TRUNCATION_LEVELS)..].iter().sum();
        self.max_top_population = self.max_top_population.max(top);
        self.times.push(t);
        self.inversion.push(w);
        self.norm.push(amps.iter().map(|z| z.norm_sqr()).sum());
        self.energy.push(h.expectation(amps));
        self.photon_dist.push(p);
    }

    fn finish(&mut self) {
        if !self.truncation_ok() {
            self.warnings.push(Warning::Truncation {
                top_population: self.max_top_population,
                bound: TRUNCATION_BOUND,
            });
        }
    }
}

/// Zero of energy used while integrating.
///
/// Observables do not depend on a constant energy offset, but the RK4 phase
/// and amplitude errors scale with `(E - E_ref)·dt`, so integrating relative to
/// the mean energy of the initial state keeps them small.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyFrame {
    /// `E_ref = ⟨ψ₀|H|ψ₀⟩`.
    InitialExpectation,
    Fixed(f64),
    /// `E_ref = 0`.
    Lab,
}

/// Settings for [`evolve_numeric`]. Times are in the model's units.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorOptions {
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: usize,
    pub norm_bound: f64,
    pub frame: EnergyFrame,
}

impl IntegratorOptions {
    pub fn new(t_end: f64, dt: f64) -> Self {
        Self { t_end, dt, sample_every: 1, norm_bound: DEFAULT_NORM_BOUND, frame: EnergyFrame::InitialExpectation }
    }

    pub fn sample_every(mut self, k: usize) -> Self {
        self.sample_every = k.max(1);
        self
    }

    pub fn norm_bound(mut self, bound: f64) -> Self {
        self.norm_bound = bound;
        self
    }

    pub fn frame(mut self, frame: EnergyFrame) -> Self {
        self.frame = frame;
        self
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

struct Rk4 {
    h: SparseOperator,
    shift: f64,
    k: [Vec<C64>; 4],
    tmp: Vec<C64>,
}

impl Rk4 {
    fn new(h: SparseOperator, shift: f64) -> Self {
        let d = h.dim();
        let z = vec![C64::from(0.0); d];
        Self { h, shift, k: [z.clone(), z.clone(), z.clone(), z.clone()], tmp: z }
    }

    /// `out = -i (H - shift) x`
    fn rhs(h: &SparseOperator, shift: f64, x: &[C64], out: &mut [C64]) {
        h.apply_shifted(x, shift, out);
        for o in out.iter_mut() {
            *o = C64::new(o.im, -o.re);
        }
    }

    fn step(&mut self, psi: &mut [C64], dt: f64) {
        let Self { h, shift, k, tmp } = self;
        let [k1, k2, k3, k4] = k;
        Self::rhs(h, *shift, psi, k1);
        for ((t, p), a) in tmp.iter_mut().zip(psi.iter()).zip(k1.iter()) {
            *t = p + a * (0.5 * dt);
        }
        Self::rhs(h, *shift, tmp, k2);
        for ((t, p), a) in tmp.iter_mut().zip(psi.iter()).zip(k2.iter()) {
            *t = p + a * (0.5 * dt);
        }
        Self::rhs(h, *shift, tmp, k3);
        for ((t, p), a) in tmp.iter_mut().zip(psi.iter()).zip(k3.iter()) {
            *t = p + a * dt;
        }
        Self::rhs(h, *shift, tmp, k4);
        let c = dt / 6.0;
        for (i, p) in psi.iter_mut().enumerate() {
            *p += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * c;
        }
    }
}

/// Integrates `i dψ/dt = Hψ` with classic RK4 from `psi0.time` for
/// `opts.t_end`.
///
/// The state is never renormalized; the run aborts with
/// [`Error::NormDrift`] once `|‖ψ‖² - 1|` exceeds `opts.norm_bound` at a
/// sample.
pub fn evolve_numeric(h: &HamiltonianMatrix, psi0: &QuantumState, opts: &IntegratorOptions) -> Result<Trajectory> {
    evolve_numeric_with_state(h, psi0, opts).map(|(traj, _)| traj)
}

/// [`evolve_numeric`] that also returns the final state.
pub fn evolve_numeric_with_state(
    h: &HamiltonianMatrix,
    psi0: &QuantumState,
    opts: &IntegratorOptions,
) -> Result<(Trajectory, QuantumState)> {
    if !(opts.dt > 0.0) || !(opts.t_end >= 0.0) {
        return Err(Error::Domain(format!("need dt > 0 and t_end >= 0, got dt = {}, t_end = {}", opts.dt, opts.t_end)));
    }
    if h.dim() != psi0.space.dim() {
        return Err(Error::Domain("Hamiltonian and state dimensions differ".into()));
    }
    let space = psi0.space;
    let n_max = space.n_max();
    let sparse = h.to_sparse();
    let shift = match opts.frame {
        EnergyFrame::InitialExpectation => sparse.expectation(psi0.amplitudes.as_slice()) / psi0.norm_sqr(),
        EnergyFrame::Fixed(e) => e,
        EnergyFrame::Lab => 0.0,
    };
    let period = std::f64::consts::TAU / omega_of(h);
    let mut traj = Trajectory::new(period);
    let recommended = 0.05 / sparse.spectral_radius_bound(shift);
    if opts.dt > recommended {
        log::debug!("dt = {:.3e} above recommended {:.3e}", opts.dt, recommended);
        traj.warnings.push(Warning::LargeTimeStep { dt: opts.dt, recommended });
    }

    let mut psi: Vec<C64> = psi0.amplitudes.iter().copied().collect();
    let norm0 = psi0.norm_sqr();
    let mut rk = Rk4::new(sparse, shift);
    let steps = opts.steps();
    let every = opts.sample_every.max(1);
    traj.push(psi0.time, &psi, n_max, &rk.h);
    for step in 1..=steps {
        rk.step(&mut psi, opts.dt);
        if step % every == 0 || step == steps {
            let t = psi0.time + step as f64 * opts.dt;
            if step % every == 0 {
                traj.push(t, &psi, n_max, &rk.h);
            }
            let drift = (psi.iter().map(|z| z.norm_sqr()).sum::<f64>() - norm0).abs();
            if drift > opts.norm_bound {
                return Err(Error::NormDrift { time: t, drift, bound: opts.norm_bound, suggested_dt: opts.dt / 2.0 });
            }
        }
    }
    traj.finish();
    let mut end = QuantumState::new(space, DVector::from_vec(psi))?;
    end.time = psi0.time + steps as f64 * opts.dt;
    Ok((traj, end))
}

/// Recovers `ω` from the diagonal spacing of the spin-down block.
fn omega_of(h: &HamiltonianMatrix) -> f64 {
    let m = h.matrix();
    (m[(1, 1)] - m[(0, 0)]).re
}

/// Analytic evolution over the dressed basis.
///
/// `ψ₀` is projected onto `|↓, N^{(λ_g)}⟩` for `N < n` and onto the pairs
/// `|±, N⟩` for `n <= N < n_max`; each component picks up `e^{-iEt}` and the
/// state is rebuilt in the bare basis at every time in `t_grid`.
pub fn evolve_rwa(params: &ModelParams, spec: &ResonanceSpec, psi0: &QuantumState, t_grid: &[f64]) -> Result<Trajectory> {
    let space = psi0.space;
    let n_max = space.n_max();
    let n = spec.n();
    let dg = displacement_matrix(DisplacementAmplitude::new(params.beta_g())?, space);
    let de = displacement_matrix(DisplacementAmplitude::new(-params.beta_e())?, space);
    let d = dg.adjoint() * psi0.block(Spin::Down);
    let u = de.adjoint() * psi0.block(Spin::Up);

    // (energy, weight on |↓,N⟩ coefficient, weight on |↑,K⟩ coefficient, N)
    struct Mode {
        energy: f64,
        amp: C64,
        c_down: f64,
        c_up: f64,
        n_manifold: usize,
    }
    let mut modes = Vec::with_capacity(2 * n_max);
    for nm in 0..n.min(n_max) {
        modes.push(Mode {
            energy: displaced_energy(params, Spin::Down, nm),
            amp: d[nm],
            c_down: 1.0,
            c_up: 0.0,
            n_manifold: nm,
        });
    }
    for nm in n..n_max {
        let pair = dressed_pair(params, spec, nm)?;
        for s in [pair.plus, pair.minus] {
            modes.push(Mode {
                energy: s.energy,
                amp: d[nm] * s.c_down + u[nm - n] * s.c_up,
                c_down: s.c_down,
                c_up: s.c_up,
                n_manifold: nm,
            });
        }
    }
    let captured: f64 = modes.iter().map(|m| m.amp.norm_sqr()).sum::<f64>() / psi0.norm_sqr();
    if captured < 1.0 - PROJECTION_TOLERANCE {
        return Err(Error::IncompleteProjection { captured });
    }

    let sparse = build_full(params, space).to_sparse();
    let mut traj = Trajectory::new(params.period());
    let mut down = DVector::<C64>::zeros(n_max);
    let mut up = DVector::<C64>::zeros(n_max);
    let mut amps = vec![C64::from(0.0); space.dim()];
    for &t in t_grid {
        down.fill(C64::from(0.0));
        up.fill(C64::from(0.0));
        for m in &modes {
            let z = m.amp * C64::from_polar(1.0, -m.energy * t);
            down[m.n_manifold] += z * m.c_down;
            if m.c_up != 0.0 {
                up[m.n_manifold - n] += z * m.c_up;
            }
        }
        let bare_down = &dg * &down;
        let bare_up = &de * &up;
        amps[..n_max].copy_from_slice(bare_down.as_slice());
        amps[n_max..].copy_from_slice(bare_up.as_slice());
        traj.push(t, &amps, n_max, &sparse);
    }
    traj.finish();
    Ok(traj)
}

/// Closed-form inversion `W(t) = offset + Σ_k a_k cos(Ω_k t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InversionSeries {
    pub offset: f64,
    pub amplitudes: Vec<f64>,
    pub frequencies: Vec<f64>,
}

impl InversionSeries {
    /// Exact `n`-photon resonance, initial state `|↑, 0⟩`:
    /// `W(t) = Σ_N I_{N,0}²(λ_e²/ω²) cos(Ω_{N+n}(n) t)`.
    pub fn fock(params: &ModelParams, n: usize) -> Result<Self> {
        let alpha = params.beta_e().powi(2);
        let mut amplitudes = Vec::new();
        let mut frequencies = Vec::new();
        let mut total = 0.0;
        for nm in 0..SERIES_MAX_TERMS {
            let w = transition_unchecked(nm, 0, alpha).powi(2);
            amplitudes.push(w);
            frequencies.push(rabi_frequency(params, nm + n, n)?);
            total += w;
            if total > 1.0 - SERIES_WEIGHT_TOL {
                break;
            }
        }
        Ok(Self { offset: 0.0, amplitudes, frequencies })
    }

    /// Exact `n`-photon resonance, initial state `|↓⟩ ⊗` coherent with mean
    /// `N̄`:
    /// `W(t) = -1 + 2 Σ_{N>=n} I_{N,0}²(ρ) sin²(Ω_N(n) t/2)`,
    /// `ρ = (√N̄ + λ_g/ω)²`.
    pub fn coherent(params: &ModelParams, n: usize, mean_photons: f64) -> Result<Self> {
        if !(mean_photons >= 0.0) {
            return Err(Error::Domain(format!("mean photon number must be >= 0, got {mean_photons}")));
        }
        let rho = coherent_overlap_argument(params, mean_photons);
        let mut offset = -1.0;
        let mut amplitudes = Vec::new();
        let mut frequencies = Vec::new();
        let mut total = 0.0;
        for nm in 0..SERIES_MAX_TERMS {
            let w = transition_unchecked(nm, 0, rho).powi(2);
            total += w;
            if nm >= n && w > 0.0 {
                // 2 w sin²(Ωt/2) = w - w cos(Ωt)
                offset += w;
                amplitudes.push(-w);
                frequencies.push(rabi_frequency(params, nm, n)?);
            }
            if total > 1.0 - SERIES_WEIGHT_TOL && (nm as f64) > rho {
                break;
            }
        }
        Ok(Self { offset, amplitudes, frequencies })
    }

    pub fn at(&self, t: f64) -> f64 {
        self.offset
            + self
                .amplitudes
                .iter()
                .zip(&self.frequencies)
                .map(|(a, w)| a * (w * t).cos())
                .sum::<f64>()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

/// `ρ = (√N̄ + λ_g/ω)²`, the argument of the overlaps between the coherent
/// initial field and the spin-down displaced ladder.
pub fn coherent_overlap_argument(params: &ModelParams, mean_photons: f64) -> f64 {
    (mean_photons.sqrt() + params.beta_g()).powi(2)
}

/// Inversion at time `t` for initial `|↑, 0⟩`; see [`InversionSeries::fock`].
pub fn inversion_fock(params: &ModelParams, n: usize, t: f64) -> Result<f64> {
    Ok(InversionSeries::fock(params, n)?.at(t))
}

/// Inversion at time `t` for a ground-state emitter and coherent field; see
/// [`InversionSeries::coherent`].
pub fn inversion_coherent(params: &ModelParams, n: usize, mean_photons: f64, t: f64) -> Result<f64> {
    Ok(InversionSeries::coherent(params, n, mean_photons)?.at(t))
}

/// Overlap probabilities `|⟨↓, N^{(λ_g)}|ψ⟩|²` for `N < n_max`.
pub fn down_ladder_weights(params: &ModelParams, psi: &QuantumState) -> Result<Vec<f64>> {
    let space = psi.space;
    let dg = displacement_matrix(DisplacementAmplitude::new(params.beta_g())?, space);
    let d: DVector<C64> = dg.adjoint() * psi.block(Spin::Down);
    Ok(d.iter().map(|z| z.norm_sqr()).collect())
}

/// Dense real eigen-decomposition propagator, for cross-checks only.
#[doc(hidden)]
pub fn exact_propagate(h: &HamiltonianMatrix, psi0: &QuantumState, t: f64) -> DVector<C64> {
    let (values, vectors) = h.eigen();
    let vc: DMatrix<C64> = vectors.map(C64::from);
    let mut c = vc.adjoint() * &psi0.amplitudes;
    for (k, e) in values.iter().enumerate() {
        c[k] *= C64::from_polar(1.0, -e * t);
    }
    vc * c
}
