//! Orchestration of a configured run and its manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{Propagator, ScenarioConfig};
use crate::dynamics::{evolve_numeric, evolve_rwa, prepare_initial, IntegratorOptions, Trajectory, TRUNCATION_BOUND};
use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::model::build_full;
use crate::output::{check_writable, emit_csv_columns, emit_spectrum, write_json};
use crate::rwa::{coupling_element, omega_eg, validity_warnings, ResonanceSpec};
use crate::validity::Warning;

/// Quantities derived from the resolved parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct Derived {
    pub omega_eg: f64,
    pub n: usize,
    pub delta_n: f64,
    /// `V_n(n)`, the lowest resonant manifold.
    pub V: f64,
    /// `Ω_n(n) = 2|V_n(n)|`.
    pub Omega: f64,
    pub oscillator_period: f64,
    /// `2π/Ω_n(n)` in oscillator periods; `null` when `Ω` vanishes.
    pub rabi_period_in_periods: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidityFlags {
    pub norm_ok: bool,
    pub max_norm_drift: f64,
    pub truncation_ok: bool,
    pub max_top_population: f64,
    pub warnings: Vec<Warning>,
}

impl ValidityFlags {
    pub fn valid(&self) -> bool {
        self.norm_ok && self.truncation_ok
    }
}

/// Everything needed to reconstruct a run from its outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub code_version: String,
    pub config: ScenarioConfig,
    pub derived: Derived,
    pub wall_clock_seconds: f64,
    pub flags: ValidityFlags,
    /// Data files this manifest describes.
    pub outputs: Vec<PathBuf>,
    /// `"ok"`, `"invalid"` or the error message of a failed run.
    pub status: String,
}

#[derive(Clone, Debug)]
pub struct ScenarioOutcome {
    pub numeric: Option<Trajectory>,
    pub rwa: Option<Trajectory>,
    pub manifest: RunManifest,
}

pub fn derived_quantities(config: &ScenarioConfig) -> Result<Derived> {
    let p = &config.params;
    let spec = ResonanceSpec::for_params(p, config.n)?;
    let v = coupling_element(p, config.n, config.n)?;
    let omega = 2.0 * v.abs();
    Ok(Derived {
        omega_eg: omega_eg(p),
        n: config.n,
        delta_n: spec.delta_n(),
        V: v,
        Omega: omega,
        oscillator_period: p.period(),
        rabi_period_in_periods: (omega > 0.0).then(|| p.omega / omega),
    })
}

fn rwa_csv_path(csv: &Path, both: bool) -> PathBuf {
    if !both {
        return csv.to_path_buf();
    }
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("trajectory");
    let name = match csv.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}_rwa.{ext}"),
        None => format!("{stem}_rwa"),
    };
    csv.with_file_name(name)
}

/// Runs the configured propagators and writes CSV data plus a JSON manifest.
///
/// Output locations are checked before any computation. A norm failure
/// writes a manifest recording the error and is then returned as the error.
/// Truncation problems do not abort; they mark the manifest invalid.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutcome> {
    let started = Instant::now();
    let outputs = &config.outputs;
    let both = config.run.propagators.len() > 1;
    let mut data_files = Vec::new();
    if config.run.propagators.contains(&Propagator::Numeric) {
        data_files.push(outputs.csv.clone());
    }
    if config.run.propagators.contains(&Propagator::Rwa) {
        data_files.push(rwa_csv_path(&outputs.csv, both));
    }
    for f in data_files.iter().chain([&outputs.json]) {
        check_writable(f)?;
    }

    let params = config.params;
    params.validate(config.sign_policy)?;
    let derived = derived_quantities(config)?;
    let spec = ResonanceSpec::for_params(&params, config.n)?;
    let space = FockSpace::new(config.run.n_max)?;
    let psi0 = prepare_initial(&config.initial, &params, space)?;

    let mut flags = ValidityFlags { norm_ok: true, truncation_ok: true, ..Default::default() };
    let range = config.manifolds[0]..config.manifolds[1];
    flags.warnings.extend(validity_warnings(&params, &spec, range, config.detuning_window)?);

    let mut manifest = RunManifest {
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        derived,
        wall_clock_seconds: 0.0,
        flags,
        outputs: Vec::new(),
        status: "ok".into(),
    };

    let period = params.period();
    let opts = IntegratorOptions::new(config.run.t_end * period, config.run.dt * period)
        .sample_every(config.run.sample_every)
        .norm_bound(config.run.norm_bound);

    let mut numeric = None;
    if config.run.propagators.contains(&Propagator::Numeric) {
        let h = build_full(&params, space);
        match evolve_numeric(&h, &psi0, &opts) {
            Ok(t) => numeric = Some(t),
            Err(e) => {
                if let Error::NormDrift { drift, .. } = &e {
                    manifest.flags.norm_ok = false;
                    manifest.flags.max_norm_drift = *drift;
                }
                manifest.status = e.to_string();
                manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
                write_json(&manifest, &outputs.json)?;
                return Err(e);
            }
        }
    }
    let mut rwa = None;
    if config.run.propagators.contains(&Propagator::Rwa) {
        let grid: Vec<f64> = (0..=opts.steps() / opts.sample_every)
            .map(|k| (k * opts.sample_every) as f64 * opts.dt)
            .collect();
        rwa = Some(evolve_rwa(&params, &spec, &psi0, &grid)?);
    }

    for (traj, path) in [(&numeric, &outputs.csv), (&rwa, &rwa_csv_path(&outputs.csv, both))] {
        if let Some(t) = traj {
            let f = &mut manifest.flags;
            f.max_norm_drift = f.max_norm_drift.max(t.max_norm_drift());
            f.max_top_population = f.max_top_population.max(t.max_top_population);
            f.warnings.extend(t.warnings.iter().cloned());
            emit_csv_columns(t, path, &outputs.observables)?;
            manifest.outputs.push(path.clone());
        }
    }
    manifest.flags.truncation_ok = manifest.flags.max_top_population < TRUNCATION_BOUND;
    if !manifest.flags.valid() {
        manifest.status = "invalid".into();
    }
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    write_json(&manifest, &outputs.json)?;
    Ok(ScenarioOutcome { numeric, rwa, manifest })
}

/// Writes the dressed spectrum of the configured resonance.
pub fn run_spectrum(config: &ScenarioConfig) -> Result<PathBuf> {
    check_writable(&config.outputs.spectrum)?;
    let spec = ResonanceSpec::for_params(&config.params, config.n)?;
    emit_spectrum(
        &config.params,
        &spec,
        config.manifolds[0]..config.manifolds[1],
        config.detuning_window,
        &config.outputs.spectrum,
    )?;
    Ok(config.outputs.spectrum.clone())
}
