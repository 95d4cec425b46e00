//! Complex Darboux partner of a Morse well: the potential, its spectrum from
//! finite differences and the bi-normalized eigenstates.
//!
//! cargo run --release --example morse_complex_partner

use darboux_lab::cli::case::summarize_states;
use darboux_lab::cli::{Case, Overrides, RunConfig};
use darboux_lab::darboux::zero_total_area;

fn main() -> darboux_lab::Result<()> {
    for nmax in [2, 4] {
        let o = Overrides::parse(&format!("family=morse\nnmax={nmax}\nepsilon=0\nlambda=1\nbigj=1\ni0=1"))?;
        let case = Case::build(RunConfig::resolve(&o)?)?;
        let grid = case.grid(1200)?;
        let table = case.potential(&grid)?;
        let peak_im = table.im_v.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let (lo, hi) = case.pair.window();
        let (area, _) = zero_total_area(&case.alpha, lo, hi)?;
        println!("Morse N={nmax}: max|Im V| = {peak_im:.4}, ∫Im V = {area:.1e}");

        let report = case.spectrum(1200)?;
        for level in &report.levels {
            println!(
                "  {:>6}: predicted {:+.6}  computed {:+.8}{:+.1e}i  |dE| {:.1e}",
                level.label, level.predicted, level.computed.re, level.computed.im, level.abs_error
            );
        }
        println!("  spectrum matched: {}", report.pass);

        let states = case.states(&grid)?;
        for s in summarize_states(&case, &grid, &states)? {
            println!(
                "  {:>7}: E={:+.4}  |∫ψ²|/∫|ψ|² = {:.3}  residual {:.1e}  interlacing {}",
                s.label, s.energy, s.binorm_ratio, s.residual, s.interlacing.holds
            );
        }
    }
    Ok(())
}
