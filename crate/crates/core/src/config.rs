//! Scenario configuration files.
//!
//! A scenario is a flat TOML document. Keys, defaults and meaning:
//!
//! | key             | default            | meaning                                              |
//! |-----------------|--------------------|------------------------------------------------------|
//! | `n`             | none               | resonance order; sets `omega0` to exact resonance    |
//! | `omega0`        | none               | explicit transition frequency (excludes `n`)         |
//! | `omega`         | `1.0`              | oscillator frequency, the unit of all couplings      |
//! | `lambda_g`      | `0.0`              | ground-state diagonal coupling                       |
//! | `lambda_e`      | required           | excited-state diagonal coupling                      |
//! | `lambda_eg`     | required           | transition coupling                                  |
//! | `signed_couplings` | `false`         | accept negative `lambda_g` / `lambda_e` literally    |
//! | `detuning_window` | `0.1`            | resonance window in units of `omega`                 |
//! | `initial`       | `"excited-fock"`   | `excited-fock`, `ground-coherent` or `custom-vector` |
//! | `n_photons`     | `0`                | Fock number for `excited-fock`                       |
//! | `mean_photons`  | none               | mean photon number for `ground-coherent`             |
//! | `amplitudes`    | none               | `[[re, im], ...]` for `custom-vector`                |
//! | `t_end`         | 3 Rabi periods     | duration, in oscillator periods `2π/ω`               |
//! | `dt`            | `0.001`            | RK4 step, in oscillator periods                      |
//! | `sample_every`  | `100`              | steps between samples                                |
//! | `n_max`         | `200`              | oscillator levels kept                               |
//! | `norm_bound`    | `1e-6`             | abort when `|‖ψ‖² − 1|` exceeds this                 |
//! | `propagators`   | `["numeric"]`      | any of `numeric`, `rwa`                              |
//! | `csv`           | `"trajectory.csv"` | time-series output                                   |
//! | `json`          | `"manifest.json"`  | run manifest                                         |
//! | `spectrum`      | `"spectrum.json"`  | dressed-spectrum output of the `spectrum` command    |
//! | `observables`   | all                | CSV columns among `W`, `norm`, `energy`, `P`         |
//! | `manifolds`     | `[n, n + 20]`      | half-open manifold range for the spectrum            |
//!
//! "3 Rabi periods" means three periods of `Ω_n(n)`, the vacuum Rabi
//! frequency of the lowest resonant manifold.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dynamics::{InitialStateSpec, DEFAULT_N_MAX, DEFAULT_NORM_BOUND, DEFAULT_STEPS_PER_PERIOD};
use crate::error::{Error, Result};
use crate::model::{ModelParams, SignPolicy};
use crate::rwa::{omega_eg, rabi_frequency, resonant_omega0, DEFAULT_DETUNING_WINDOW};

/// Raw document as written by the user.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: Option<i64>,
    omega0: Option<f64>,
    omega: Option<f64>,
    lambda_g: Option<f64>,
    lambda_e: Option<f64>,
    lambda_eg: Option<f64>,
    signed_couplings: Option<bool>,
    detuning_window: Option<f64>,
    initial: Option<String>,
    n_photons: Option<i64>,
    mean_photons: Option<f64>,
    amplitudes: Option<Vec<[f64; 2]>>,
    t_end: Option<f64>,
    dt: Option<f64>,
    sample_every: Option<i64>,
    n_max: Option<i64>,
    norm_bound: Option<f64>,
    propagators: Option<Vec<String>>,
    csv: Option<PathBuf>,
    json: Option<PathBuf>,
    spectrum: Option<PathBuf>,
    observables: Option<Vec<String>>,
    manifolds: Option<[i64; 2]>,
}

/// Command-line overrides applied before validation.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub dt: Option<f64>,
    pub n_max: Option<usize>,
    pub t_end: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Propagator {
    Numeric,
    Rwa,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observable {
    W,
    #[serde(rename = "norm")]
    Norm,
    #[serde(rename = "energy")]
    Energy,
    P,
}

impl Observable {
    pub const ALL: [Observable; 4] = [Observable::W, Observable::Norm, Observable::Energy, Observable::P];

    fn parse(s: &str) -> Option<Self> {
        match s {
            "W" => Some(Self::W),
            "norm" => Some(Self::Norm),
            "energy" => Some(Self::Energy),
            "P" => Some(Self::P),
            _ => None,
        }
    }
}

/// How `omega0` was specified.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResonanceChoice {
    /// Exact `n`-photon resonance.
    Order(usize),
    /// Explicit `omega0`; the nearest resonance is used for the dressed basis.
    Omega0(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    /// Duration in oscillator periods.
    pub t_end: f64,
    /// Step in oscillator periods.
    pub dt: f64,
    pub sample_every: usize,
    pub n_max: usize,
    pub norm_bound: f64,
    pub propagators: Vec<Propagator>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputSettings {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub spectrum: PathBuf,
    pub observables: Vec<Observable>,
}

/// Fully resolved scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub params: ModelParams,
    pub sign_policy: SignPolicy,
    pub resonance: ResonanceChoice,
    /// Resonance order used for the dressed basis and derived quantities.
    pub n: usize,
    pub detuning_window: f64,
    pub initial: InitialStateSpec,
    pub run: RunSettings,
    pub outputs: OutputSettings,
    /// Half-open range of manifolds for spectrum export.
    pub manifolds: [usize; 2],
}

impl ScenarioConfig {
    /// Output paths resolved against `dir` when relative.
    pub fn with_output_dir(mut self, dir: &std::path::Path) -> Self {
        for p in [&mut self.outputs.csv, &mut self.outputs.json, &mut self.outputs.spectrum] {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        self
    }
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    parse_config_with(text, &Overrides::default())
}

/// [`parse_config`] with command-line overrides applied on top of the document.
pub fn parse_config_with(text: &str, overrides: &Overrides) -> Result<ScenarioConfig> {
    let mut raw: RawConfig = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
    if let Some(dt) = overrides.dt {
        raw.dt = Some(dt);
    }
    if let Some(n) = overrides.n_max {
        raw.n_max = Some(n as i64);
    }
    if let Some(t) = overrides.t_end {
        raw.t_end = Some(t);
    }
    resolve(raw)
}

fn positive(errors: &mut Vec<String>, key: &str, v: Option<f64>, default: f64) -> f64 {
    let v = v.unwrap_or(default);
    if !(v > 0.0) || !v.is_finite() {
        errors.push(format!("{key} must be positive and finite, got {v}"));
    }
    v
}

fn resolve(raw: RawConfig) -> Result<ScenarioConfig> {
    let mut errors = Vec::new();

    if raw.n.is_none() && raw.omega0.is_none() {
        errors.push("missing required key: n or omega0".to_string());
    }
    if raw.n.is_some() && raw.omega0.is_some() {
        errors.push("n and omega0 are mutually exclusive".to_string());
    }
    if raw.lambda_e.is_none() {
        errors.push("missing required key: lambda_e".to_string());
    }
    if raw.lambda_eg.is_none() {
        errors.push("missing required key: lambda_eg".to_string());
    }

    let omega = raw.omega.unwrap_or(1.0);
    let lambda_g = raw.lambda_g.unwrap_or(0.0);
    let lambda_e = raw.lambda_e.unwrap_or(0.0);
    let lambda_eg = raw.lambda_eg.unwrap_or(0.0);
    let sign_policy = if raw.signed_couplings.unwrap_or(false) { SignPolicy::Signed } else { SignPolicy::NonNegative };

    let order = match raw.n {
        Some(n) if n < 1 => {
            errors.push(format!("n must be >= 1, got {n}"));
            None
        }
        Some(n) => Some(n as usize),
        None => None,
    };
    let (resonance, omega0) = match (order, raw.omega0) {
        (Some(n), None) => (ResonanceChoice::Order(n), resonant_omega0(omega, lambda_g, lambda_e, n)),
        (None, Some(w0)) => (ResonanceChoice::Omega0(w0), w0),
        _ => (ResonanceChoice::Order(1), resonant_omega0(omega, lambda_g, lambda_e, 1)),
    };
    let params = ModelParams { omega, omega0, lambda_g, lambda_e, lambda_eg };
    errors.extend(params.violations(sign_policy));

    let detuning_window = positive(&mut errors, "detuning_window", raw.detuning_window, DEFAULT_DETUNING_WINDOW);
    let n = match resonance {
        ResonanceChoice::Order(n) => n,
        ResonanceChoice::Omega0(_) => {
            let r = (omega_eg(&params) / omega).round();
            if r.is_finite() && r >= 1.0 {
                r as usize
            } else {
                1
            }
        }
    };

    let initial = match raw.initial.as_deref().unwrap_or("excited-fock") {
        "excited-fock" => {
            let k = raw.n_photons.unwrap_or(0);
            if k < 0 {
                errors.push(format!("n_photons must be >= 0, got {k}"));
            }
            InitialStateSpec::ExcitedFock { n_photons: k.max(0) as usize }
        }
        "ground-coherent" => match raw.mean_photons {
            Some(m) if m >= 0.0 && m.is_finite() => InitialStateSpec::GroundCoherent { mean_photons: m },
            Some(m) => {
                errors.push(format!("mean_photons must be >= 0, got {m}"));
                InitialStateSpec::GroundCoherent { mean_photons: 0.0 }
            }
            None => {
                errors.push("initial = \"ground-coherent\" requires mean_photons".to_string());
                InitialStateSpec::GroundCoherent { mean_photons: 0.0 }
            }
        },
        "custom-vector" => match raw.amplitudes.clone() {
            Some(a) => InitialStateSpec::CustomVector { amplitudes: a },
            None => {
                errors.push("initial = \"custom-vector\" requires amplitudes".to_string());
                InitialStateSpec::CustomVector { amplitudes: Vec::new() }
            }
        },
        other => {
            errors.push(format!("unknown initial state kind {other:?}"));
            InitialStateSpec::ExcitedFock { n_photons: 0 }
        }
    };

    let n_max = match raw.n_max {
        Some(k) if k < 2 => {
            errors.push(format!("n_max must be >= 2, got {k}"));
            2
        }
        Some(k) => k as usize,
        None => DEFAULT_N_MAX,
    };
    match &initial {
        InitialStateSpec::ExcitedFock { n_photons } if *n_photons >= n_max => {
            errors.push(format!("n_photons = {n_photons} must be below n_max = {n_max}"));
        }
        InitialStateSpec::GroundCoherent { mean_photons } if mean_photons + 5.0 * mean_photons.sqrt() > n_max as f64 => {
            errors.push(format!(
                "mean_photons = {mean_photons} needs n_max > {:.1}, have {n_max}",
                mean_photons + 5.0 * mean_photons.sqrt()
            ));
        }
        InitialStateSpec::CustomVector { amplitudes } if !amplitudes.is_empty() && amplitudes.len() != 2 * n_max => {
            errors.push(format!("amplitudes has {} entries, need 2 * n_max = {}", amplitudes.len(), 2 * n_max));
        }
        _ => {}
    }

    let dt = positive(&mut errors, "dt", raw.dt, 1.0 / DEFAULT_STEPS_PER_PERIOD as f64);
    let t_end = match raw.t_end {
        Some(t) => positive(&mut errors, "t_end", Some(t), 1.0),
        None => {
            let default = rabi_frequency(&params, n, n)
                .ok()
                .filter(|w| *w > 0.0)
                .map(|w| 3.0 * omega / w);
            match default {
                Some(t) if t.is_finite() => t,
                _ => {
                    errors.push("t_end not given and the vacuum Rabi frequency is zero".to_string());
                    1.0
                }
            }
        }
    };
    let sample_every = match raw.sample_every {
        Some(k) if k < 1 => {
            errors.push(format!("sample_every must be >= 1, got {k}"));
            1
        }
        Some(k) => k as usize,
        None => 100,
    };
    let norm_bound = positive(&mut errors, "norm_bound", raw.norm_bound, DEFAULT_NORM_BOUND);

    let mut propagators = Vec::new();
    for p in raw.propagators.unwrap_or_else(|| vec!["numeric".into()]) {
        match p.as_str() {
            "numeric" => propagators.push(Propagator::Numeric),
            "rwa" => propagators.push(Propagator::Rwa),
            other => errors.push(format!("unknown propagator {other:?}")),
        }
    }
    propagators.dedup();
    if propagators.is_empty() {
        errors.push("propagators must not be empty".to_string());
    }
    if propagators.contains(&Propagator::Rwa) {
        let delta = omega_eg(&params) - n as f64 * omega;
        if delta.abs() >= detuning_window * omega {
            errors.push(format!(
                "rwa propagator needs a resonance: omega_eg is {delta:.4} away from {n} omega"
            ));
        }
    }

    let mut observables = Vec::new();
    match raw.observables {
        None => observables.extend(Observable::ALL),
        Some(list) => {
            for o in list {
                match Observable::parse(&o) {
                    Some(x) => observables.push(x),
                    None => errors.push(format!("unknown observable {o:?}; expected W, norm, energy or P")),
                }
            }
            // fixed column order
            observables.sort_by_key(|o| Observable::ALL.iter().position(|a| a == o));
            observables.dedup();
        }
    }

    let manifolds = match raw.manifolds {
        Some([a, b]) if a < 0 || b < a => {
            errors.push(format!("manifolds must satisfy 0 <= start <= end, got [{a}, {b}]"));
            [0, 0]
        }
        Some([a, b]) => [a as usize, b as usize],
        None => [n, n + 20],
    };

    if !errors.is_empty() {
        return Err(Error::ConfigInvalid(errors));
    }
    Ok(ScenarioConfig {
        params,
        sign_policy,
        resonance,
        n,
        detuning_window,
        initial,
        run: RunSettings { t_end, dt, sample_every, n_max, norm_bound, propagators },
        outputs: OutputSettings {
            csv: raw.csv.unwrap_or_else(|| "trajectory.csv".into()),
            json: raw.json.unwrap_or_else(|| "manifest.json".into()),
            spectrum: raw.spectrum.unwrap_or_else(|| "spectrum.json".into()),
            observables,
        },
        manifolds,
    })
}
