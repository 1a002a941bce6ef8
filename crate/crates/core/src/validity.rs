//! Non-fatal validity diagnostics collected during a computation.

use serde::{Deserialize, Serialize};

/// A condition under which results remain usable but should be read with care.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Warning {
    /// `|δ_n|` is not small compared with `ω`.
    LargeDetuning { n: usize, delta_n: f64, window: f64 },
    /// `|V_N(n)|` is not small compared with `ω`.
    StrongCoupling { n_manifold: usize, n: usize, coupling: f64 },
    /// Time step above the recommended `0.05 / spectral radius`.
    LargeTimeStep { dt: f64, recommended: f64 },
    /// Population near the top of the truncated oscillator.
    Truncation { top_population: f64, bound: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::LargeDetuning { n, delta_n, window } => write!(
                f,
                "detuning {delta_n:.3e} from the {n}-photon resonance exceeds window {window:.3e}"
            ),
            Warning::StrongCoupling { n_manifold, n, coupling } => write!(
                f,
                "|V_{n_manifold}({n})| = {:.3e} is not small compared with omega",
                coupling.abs()
            ),
            Warning::LargeTimeStep { dt, recommended } => {
                write!(f, "dt = {dt:.3e} above recommended {recommended:.3e}")
            }
            Warning::Truncation { top_population, bound } => write!(
                f,
                "population {top_population:.3e} in the top photon levels exceeds {bound:.1e}"
            ),
        }
    }
}
