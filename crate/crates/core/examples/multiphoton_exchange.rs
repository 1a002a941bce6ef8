//! Vacuum multiphoton Rabi exchange from `|↑, 0⟩`.
//!
//! Usage: `cargo run --release --example multiphoton_exchange -- [n] [lambda_g]`
//!
//! Integrates the full Hamiltonian with RK4 for three Rabi periods, prints
//! the photon-number probabilities at a few times and the measured period
//! of `P_n`.

use std::f64::consts::TAU;

use multiphoton_rabi::analysis::oscillation_period;
use multiphoton_rabi::dynamics::evolve_numeric;
use multiphoton_rabi::model::build_full;
use multiphoton_rabi::rwa::{rabi_frequency, resonant_omega0};
use multiphoton_rabi::{FockSpace, IntegratorOptions, ModelParams, QuantumState, Spin};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(2), |s| s.parse())?;
    let lambda_g: f64 = args.next().map_or(Ok(if n == 2 { 0.0 } else { 0.1 }), |s| s.parse())?;
    let (lambda_e, lambda_eg) = (0.1, 0.02);

    let p = ModelParams::new(1.0, resonant_omega0(1.0, lambda_g, lambda_e, n), lambda_g, lambda_e, lambda_eg)?;
    let space = FockSpace::new(40)?;
    let t_rabi = TAU / rabi_frequency(&p, n, n)?;
    let opts = IntegratorOptions::new(3.0 * t_rabi, p.period() / 1000.0).sample_every(200);
    let traj = evolve_numeric(&build_full(&p, space), &QuantumState::basis(space, Spin::Up, 0)?, &opts)?;

    println!("{n}-photon resonance, λ_g = {lambda_g}: 2π/Ω_{n}({n}) = {:.1} T", t_rabi / p.period());
    print!("{:>10}", "t / T");
    for k in 0..=n + 1 {
        print!("{:>10}", format!("P{k}"));
    }
    println!();
    let stride = traj.len() / 24;
    for i in (0..traj.len()).step_by(stride.max(1)) {
        print!("{:>10.1}", traj.times[i] / p.period());
        for k in 0..=n + 1 {
            print!("{:>10.4}", traj.photon_dist[i][k]);
        }
        println!();
    }
    if let Some(t) = oscillation_period(&traj.times, &traj.photon_series(n), 25) {
        println!("measured P{n} period {:.1} T, ratio to 2π/Ω {:.4}", t / p.period(), t / t_rabi);
    }
    println!("norm drift {:.1e}", traj.max_norm_drift());
    Ok(())
}
