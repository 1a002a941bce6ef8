//! Runs a scenario file through the library, as the `run` command does.
//!
//! Usage: `cargo run --release --example scenario_from_config -- scenarios/two_photon_vacuum.toml [out_dir]`

use std::path::PathBuf;

use multiphoton_rabi::config::parse_config;
use multiphoton_rabi::scenario::run_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().ok_or("expected a scenario file")?;
    let out = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&out)?;

    let config = parse_config(&std::fs::read_to_string(&path)?)?.with_output_dir(&out);
    let outcome = run_scenario(&config)?;
    let m = &outcome.manifest;
    println!("{}", serde_json::to_string_pretty(&m.derived)?);
    println!("status {}, max norm drift {:.1e}, {:.1} s", m.status, m.flags.max_norm_drift, m.wall_clock_seconds);
    for f in &m.outputs {
        println!("wrote {}", f.display());
    }
    Ok(())
}
