//! Multiphoton couplings `V_N(n)` with and without permanent dipoles.
//!
//! Without permanent dipoles only the one-photon coupling survives; a
//! nonzero `λ_e` opens every order.

use multiphoton_rabi::rwa::coupling_element;
use multiphoton_rabi::ModelParams;

fn main() -> multiphoton_rabi::Result<()> {
    let cases = [("λ_e = 0", 0.0), ("λ_e = 0.1", 0.1), ("λ_e = 0.3", 0.3)];
    let big_n = 6;
    println!("V_{big_n}(n) for λ_eg = 0.02, λ_g = 0");
    print!("{:>10}", "n");
    for (label, _) in &cases {
        print!("{label:>16}");
    }
    println!();
    for n in 1..=6 {
        print!("{n:>10}");
        for (_, le) in &cases {
            let p = ModelParams::new(1.0, n as f64, 0.0, *le, 0.02)?;
            print!("{:>16.3e}", coupling_element(&p, big_n, n)?);
        }
        println!();
    }
    Ok(())
}
