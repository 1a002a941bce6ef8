//! Uncoupled spectrum: with `λ_eg = 0` each spin state carries a displaced
//! oscillator ladder. Compares dense diagonalization with the closed form.

use multiphoton_rabi::model::{build_full, displaced_energy};
use multiphoton_rabi::{FockSpace, ModelParams, Spin};

fn main() -> multiphoton_rabi::Result<()> {
    let p = ModelParams::new(1.0, 2.01, 0.0, 0.1, 0.0)?;
    let numeric = build_full(&p, FockSpace::new(120)?).eigenvalues();

    let mut closed: Vec<(f64, &str, usize)> = (0..20)
        .flat_map(|k| [(displaced_energy(&p, Spin::Down, k), "↓", k), (displaced_energy(&p, Spin::Up, k), "↑", k)])
        .collect();
    closed.sort_by(|a, b| a.0.total_cmp(&b.0));

    println!("{:>3} {:>6} {:>20} {:>20} {:>10}", "#", "level", "dense", "closed form", "rel err");
    for (i, ((e, spin, k), x)) in closed.iter().zip(&numeric).take(20).enumerate() {
        println!("{i:>3} {:>6} {x:>20.15} {e:>20.15} {:>10.2e}", format!("{spin}{k}"), ((x - e) / e).abs());
    }
    Ok(())
}
