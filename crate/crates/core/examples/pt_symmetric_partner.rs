//! Pöschl-Teller partners with I0 = 0 (PT-symmetric) and I0 != 0
//! (not PT-symmetric, spectrum still real).
//!
//! cargo run --release --example pt_symmetric_partner

use darboux_lab::cli::{Case, Overrides, RunConfig};
use darboux_lab::darboux::{complex_potential, pt_symmetry_check};

fn main() -> darboux_lab::Result<()> {
    let j = std::f64::consts::PI / 4.0;
    let settings = [
        format!("family=pt\nr=3\nepsilon=0.25\nlambda={}\nbigj={j}\ni0=0", j.sqrt()),
        format!("family=pt\nr=4\nepsilon=0.25\nlambda={}\nbigj={j}\ni0=0", j.sqrt()),
        format!("family=pt\nr=3\nepsilon=8.075\nlambda={}\nbigj=1.34\ni0=-2.13", 1.34f64.sqrt()),
    ];
    for text in &settings {
        let case = Case::build(RunConfig::resolve(&Overrides::parse(text)?)?)?;
        let grid = case.grid(1201)?;
        let v = complex_potential(&case.alpha, &grid)?;
        println!("{}", text.replace('\n', " "));
        println!("  max|V(x) - conj V(-x)| = {:.2e}", pt_symmetry_check(&v)?);
        let report = case.spectrum(1200)?;
        for level in &report.levels {
            println!("  {:>6}: {:+.6} -> {:+.6}{:+.1e}i", level.label, level.predicted, level.computed.re, level.computed.im);
        }
    }
    Ok(())
}
