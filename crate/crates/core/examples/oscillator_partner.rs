//! Harmonic oscillator partner built from numerically integrated seeds.
//!
//! cargo run --release --example oscillator_partner

use darboux_lab::cli::{verify, Case, Overrides, RunConfig};

fn main() -> darboux_lab::Result<()> {
    let o = Overrides::parse("family=oscillator\nepsilon=0.2\nlambda=1\nbigj=1\ni0=0.5")?;
    let case = Case::build(RunConfig::resolve(&o)?)?;
    println!("seed backend {:?}, omega0 {:+.6e}", case.pair.backend, case.pair.omega0);
    let report = verify(&case)?;
    for c in &report.checks {
        println!("  {:<24} {:>10.3e}  {}", c.name, c.value, if c.pass { "pass" } else { "FAIL" });
    }
    if let Some(s) = &report.spectrum {
        for l in &s.levels {
            println!("  {:>6}: {:+.6} -> {:+.6}", l.label, l.predicted, l.computed.re);
        }
    }
    println!("overall: {}", if report.pass { "pass" } else { "fail" });
    Ok(())
}
