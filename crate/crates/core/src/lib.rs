//! Dressed states and multiphoton Rabi dynamics of a two-level system with
//! permanent dipole moments coupled to a quantized harmonic oscillator.
//!
//! The diagonal (permanent-dipole) couplings displace the oscillator
//! differently for the two spin states. Near `ω_eg ≈ nω` the two displaced
//! ladders cross, and the transition coupling opens `n`-photon avoided
//! crossings whose splittings set multiphoton vacuum Rabi frequencies.
//!
//! * [`fock`]: Laguerre polynomials, transition functions, displacement
//!   operators and displaced Fock states.
//! * [`model`]: the full Hamiltonian and its displaced-oscillator blocks.
//! * [`rwa`]: shifted transition frequency, coupling elements, dressed pairs.
//! * [`dynamics`]: RK4 and dressed-basis propagators, closed-form inversions.
//! * [`config`], [`output`], [`scenario`]: declarative runs and file output.
//!
//! ħ = 1 throughout; every energy is an angular frequency.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod analysis;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod model;
pub mod output;
pub mod rwa;
pub mod scenario;
pub mod validity;

pub use error::{Error, Result};
pub use fock::{DisplacementAmplitude, FockSpace, Spin};
pub use model::{HamiltonianMatrix, ModelParams, SignPolicy};
pub use num_complex::Complex64;
pub use rwa::{DressedPair, DressedState, ResonanceSpec};
pub use dynamics::{InitialStateSpec, IntegratorOptions, QuantumState, Trajectory};
