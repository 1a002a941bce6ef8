//! Collapse and revival of multiphoton Rabi oscillations for a coherent field.
//!
//! Usage: `cargo run --release --example collapse_revival -- [n] [mean_photons] [lambda_g] [periods]`
//!
//! Evaluates the closed-form inversion series and reports its envelope.

use multiphoton_rabi::analysis::CollapseRevival;
use multiphoton_rabi::dynamics::InversionSeries;
use multiphoton_rabi::rwa::{rabi_frequency, resonant_omega0};
use multiphoton_rabi::ModelParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).map_or(Ok(default), |s| s.parse::<f64>());
    let n = arg(0, 2.0)? as usize;
    let nbar = arg(1, 20.0)?;
    let lambda_g = arg(2, 0.0)?;
    let periods = arg(3, 320.0)?;

    let (lambda_e, lambda_eg) = (0.1, 0.02);
    let params = ModelParams::new(1.0, resonant_omega0(1.0, lambda_g, lambda_e, n), lambda_g, lambda_e, lambda_eg)?;
    let series = InversionSeries::coherent(&params, n, nbar)?;

    // one Rabi period at the mean photon number sets the envelope window
    let big_n = (nbar.round() as usize).max(n);
    let t_rabi = std::f64::consts::TAU / rabi_frequency(&params, big_n, n)?;
    let samples_per_rabi = 64;
    let dt = t_rabi / samples_per_rabi as f64;
    let steps = (periods * params.period() / dt).ceil() as usize;
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    let w: Vec<f64> = times.iter().map(|&t| series.at(t)).collect();

    println!("n = {n}, N̄ = {nbar}, λ_g = {lambda_g}, {} series terms", series.len());
    println!("Rabi period at N = {big_n}: {:.2} oscillator periods", t_rabi / params.period());
    match CollapseRevival::detect(&times, &w, samples_per_rabi) {
        Some(cr) => {
            let tp = |t: f64| t / params.period();
            println!("initial envelope   {:.3}", cr.initial_amplitude);
            println!("half-amplitude at  {:.1} periods", tp(cr.collapse_time));
            println!("collapsed to       {:.3} at {:.1} periods", cr.min_amplitude, tp(cr.min_time));
            println!("revives to         {:.3} at {:.1} periods", cr.revival_amplitude, tp(cr.revival_time));
        }
        None => println!("no collapse within {periods} periods"),
    }
    Ok(())
}
