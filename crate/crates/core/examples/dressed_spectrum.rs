//! Dressed-state spectrum around the n-photon resonance, written as JSON.
//!
//! Usage: `cargo run --example dressed_spectrum -- [n] [out.json]`

use multiphoton_rabi::output::emit_spectrum;
use multiphoton_rabi::rwa::{dressed_pair, resonant_omega0, DEFAULT_DETUNING_WINDOW};
use multiphoton_rabi::{ModelParams, ResonanceSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(2), |s| s.parse())?;
    let out = args.next().unwrap_or_else(|| "spectrum.json".into());

    let p = ModelParams::new(1.0, resonant_omega0(1.0, 0.0, 0.1, n), 0.0, 0.1, 0.02)?;
    let spec = ResonanceSpec::detect(&p, DEFAULT_DETUNING_WINDOW)?;
    println!("detected order n = {}, Δ = {:.2e}", spec.n(), spec.delta_n());
    println!("{:>4} {:>14} {:>14} {:>12} {:>9} {:>9}", "N", "E-", "E+", "Ω_N", "c↓(+)", "c↑(+)");
    for big_n in n..n + 10 {
        let d = dressed_pair(&p, &spec, big_n)?;
        println!(
            "{big_n:>4} {:>14.9} {:>14.9} {:>12.4e} {:>9.5} {:>9.5}",
            d.minus.energy,
            d.plus.energy,
            d.rabi_frequency(),
            d.plus.c_down,
            d.plus.c_up
        );
    }
    emit_spectrum(&p, &spec, n..n + 40, DEFAULT_DETUNING_WINDOW, std::path::Path::new(&out))?;
    println!("wrote {out}");
    Ok(())
}
