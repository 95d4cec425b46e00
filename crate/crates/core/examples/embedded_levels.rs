//! Factorization energies above the ground state of a Morse well: ε between
//! levels and ε on a level, where the new level is degenerate.
//!
//! cargo run --release --example embedded_levels

use darboux_lab::cli::case::summarize_states;
use darboux_lab::cli::{Case, Overrides, RunConfig};

fn main() -> darboux_lab::Result<()> {
    for eps in [4.55, 6.45] {
        let text = format!("family=morse\nnmax=2\nepsilon={eps}\nlambda=1\nbigj=1\ni0=1");
        let case = Case::build(RunConfig::resolve(&Overrides::parse(&text)?)?)?;
        let pred = case.prediction();
        println!("eps = {eps}");
        for l in &pred.levels {
            println!("  predicted {:>6} {:+.6} (multiplicity {})", l.label, l.energy, l.multiplicity);
        }
        let grid = case.grid(2001)?;
        println!("  min Q margin {:.3e}", case.alpha.min_q_margin(&grid)?.1);
        let report = case.spectrum(1200)?;
        for l in &report.levels {
            println!("  computed  {:>6} {:+.8}{:+.1e}i ok={}", l.label, l.computed.re, l.computed.im, l.ok);
        }
        let states = case.states(&grid)?;
        for s in summarize_states(&case, &grid, &states)? {
            println!("  {:>7}: zero bi-norm {} (ratio {:.1e}), residual {:.1e}", s.label, s.zero_binorm, s.binorm_ratio, s.residual);
        }
    }
    Ok(())
}
