//! File output. Every file is written to a temporary sibling and renamed into
//! place, so an interrupted run never leaves a partial file behind.
//!
//! Time-series CSV: header row, then one row per sample with columns
//! `t_periods, W, norm, energy, P0 .. P{n_max-1}` (a subset when fewer
//! observables are selected, always in that order). Floats use 17
//! significant digits, so parsing a file back yields the exact values.
//! Lines end in `\n`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::Observable;
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::rwa::{spectrum, ResonanceSpec};

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Fails unless a file can be created next to `path`.
pub fn check_writable(path: &Path) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    tempfile::NamedTempFile::new_in(dir).map(drop).map_err(|e| Error::io(dir, e))
}

fn num(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").expect("write to String");
}

/// CSV rendering of a trajectory.
pub fn trajectory_csv(traj: &Trajectory, observables: &[Observable]) -> String {
    let n_max = traj.photon_dist.first().map_or(0, Vec::len);
    let mut out = String::from("t_periods");
    for o in observables {
        match o {
            Observable::W => out.push_str(",W"),
            Observable::Norm => out.push_str(",norm"),
            Observable::Energy => out.push_str(",energy"),
            Observable::P => {
                for k in 0..n_max {
                    write!(out, ",P{k}").unwrap();
                }
            }
        }
    }
    out.push('\n');
    for i in 0..traj.len() {
        num(&mut out, traj.times[i] / traj.period);
        for o in observables {
            match o {
                Observable::W => {
                    out.push(',');
                    num(&mut out, traj.inversion[i]);
                }
                Observable::Norm => {
                    out.push(',');
                    num(&mut out, traj.norm[i]);
                }
                Observable::Energy => {
                    out.push(',');
                    num(&mut out, traj.energy[i]);
                }
                Observable::P => {
                    for p in &traj.photon_dist[i] {
                        out.push(',');
                        num(&mut out, *p);
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Writes all observables of `traj` to `path` as CSV.
pub fn emit_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    emit_csv_columns(traj, path, &Observable::ALL)
}

pub fn emit_csv_columns(traj: &Trajectory, path: &Path, observables: &[Observable]) -> Result<()> {
    write_atomic(path, trajectory_csv(traj, observables).as_bytes())
}

/// Pretty JSON, newline-terminated.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Writes the dressed spectrum for manifolds `range` as a JSON document with
/// `unmixed` and `manifolds` lists.
pub fn emit_spectrum(
    params: &ModelParams,
    spec: &ResonanceSpec,
    range: std::ops::Range<usize>,
    window: f64,
    path: &Path,
) -> Result<()> {
    write_json(&spectrum(params, spec, range, window)?, path)
}
