//! Closed-form and numerically integrated seed pairs at a factorization
//! energy: Wronskian constancy and Schrödinger residuals.
//!
//! cargo run --example seed_pairs

use darboux_lab::grid::Grid;
use darboux_lab::potentials::{make_morse, make_pt, PotentialSpec};
use darboux_lab::seeds::{analytic_pair, build_pair, BackendChoice};

fn show(name: &str, spec: &PotentialSpec, eps: f64) -> darboux_lab::Result<()> {
    let (lo, hi) = spec.window();
    let grid = Grid::closed(lo + 0.05, hi - 0.05, 801)?;
    let analytic = analytic_pair(spec, eps, spec.window())?;
    let numeric = build_pair(spec, eps, BackendChoice::Numeric, spec.window())?;
    for (tag, pair) in [("analytic", &analytic), ("numeric", &numeric)] {
        let (ru, rv) = pair.member_residuals(&grid)?;
        println!(
            "{name} eps={eps} {tag:8}: omega0 {:+.6e}, Wronskian drift {:.1e}, residual u {ru:.1e} v {rv:.1e}",
            pair.omega0,
            pair.wronskian_deviation(&grid)?
        );
    }
    let x = 0.5 * (lo + hi);
    let s = analytic.eval(x)?;
    println!("  at x={x}: u_p={:+.6e} v={:+.6e}", s.up, s.v);
    Ok(())
}

fn main() -> darboux_lab::Result<()> {
    show("Morse", &make_morse(1.0, 0.4, 2)?, 0.5)?;
    show("Morse", &make_morse(1.0, 0.4, 4)?, 0.5)?;
    show("PT", &make_pt(1.0, 3.0)?, 0.25)?;
    show("PT", &make_pt(1.0, 3.0)?, 8.075)?;
    Ok(())
}
