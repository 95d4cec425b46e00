//! Morse, Pöschl-Teller and oscillator: levels and normalized bound states.
//!
//! cargo run --example solvable_potentials

use darboux_lab::potentials::{make_morse, make_oscillator, make_pt, PotentialSpec};
use darboux_lab::quad::adaptive_simpson;

fn report(name: &str, spec: &PotentialSpec, count: usize) -> darboux_lab::Result<()> {
    let (lo, hi) = spec.window();
    println!("{name}: window [{lo}, {hi}], even = {}", spec.is_even());
    for n in 0..count {
        let phi = spec.eigenfunction(n)?;
        let norm = adaptive_simpson(|x| phi.eval(x).0.powi(2), lo, hi, 1e-12);
        println!("  E_{n} = {:+.12}   ∫φ² = {norm:.12}", spec.energy(n)?);
    }
    Ok(())
}

fn main() -> darboux_lab::Result<()> {
    let morse = make_morse(1.0, 0.4, 4)?;
    println!("Morse depth {:?}, {} bound states", morse.depth(), morse.n_bound().unwrap_or(0));
    report("Morse (gamma 1, delta 0.4, N 4)", &morse, 4)?;
    report("Poschl-Teller (U0 1, r 3)", &make_pt(1.0, 3.0)?, 3)?;
    report("oscillator", &make_oscillator(), 4)?;
    Ok(())
}
