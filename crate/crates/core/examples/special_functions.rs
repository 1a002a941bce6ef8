//! Laguerre transition functions and displaced Fock states.

use multiphoton_rabi::fock::{displaced_fock, laguerre_poly, laguerre_transition, truncation_loss};
use multiphoton_rabi::{DisplacementAmplitude, FockSpace};

fn main() -> multiphoton_rabi::Result<()> {
    println!("L_n^(l)(2.5):");
    for n in 0..6 {
        let row: Vec<String> = (-(n as i64)..=2).map(|l| format!("{:>9.4}", laguerre_poly(n, l, 2.5).unwrap())).collect();
        println!("  n = {n}: {}", row.join(" "));
    }

    let alpha = 4.0;
    println!("\nI_(s,s')({alpha}) for s, s' < 6:");
    for s in 0..6 {
        let row: Vec<String> = (0..6).map(|sp| format!("{:>9.4}", laguerre_transition(s, sp, alpha).unwrap())).collect();
        println!("  {}", row.join(" "));
    }
    let total: f64 = (0..200).map(|m| laguerre_transition(3, m, alpha).unwrap().powi(2)).sum();
    println!("Σ_M I_(3,M)² = {total:.15}");

    let space = FockSpace::new(30)?;
    let beta = DisplacementAmplitude::new(-2.0)?;
    let v = displaced_fock(0, beta, space)?;
    let mean: f64 = v.iter().enumerate().map(|(k, z)| k as f64 * z.norm_sqr()).sum();
    println!("\nD(-2)|0⟩ on 30 levels: ⟨N⟩ = {mean:.10}, truncated weight {:.2e}", truncation_loss(0, beta, space));
    Ok(())
}
