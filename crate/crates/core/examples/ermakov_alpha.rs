//! The Ermakov function α = √Q: positivity, the Ermakov equation and
//! conservation of the invariant J.
//!
//! cargo run --example ermakov_alpha

use darboux_lab::ermakov::{make_alpha, make_coeffs};
use darboux_lab::potentials::make_morse;
use darboux_lab::seeds::analytic_pair;

fn main() -> darboux_lab::Result<()> {
    let spec = make_morse(1.0, 0.4, 2)?;
    let pair = analytic_pair(&spec, 0.5, spec.window())?;
    let grid = spec.sampling_grid(1201)?;
    println!("   lambda      J     I0 | identity  min margin   Ermakov   J-scan");
    for (lambda, j, i0) in [(1.0, 1.0, 0.0), (1.0, 1.0, 1.0), (0.3, 2.0, -1.5), (2.0, 0.5, 0.7)] {
        let coeffs = make_coeffs(lambda, j, i0, pair.omega0)?;
        let alpha = make_alpha(pair.clone(), coeffs)?;
        let (_, margin) = alpha.min_q_margin(&grid)?;
        println!(
            "{lambda:9.3} {j:6.2} {i0:6.2} | {:.1e}   {margin:.3e}   {:.1e}   {:.1e}",
            coeffs.identity_residual(),
            alpha.ermakov_residual(&grid)?,
            alpha.invariant_j_scan(&grid)?
        );
    }
    let alpha = make_alpha(pair.clone(), make_coeffs(1.0, 1.0, 0.0, pair.omega0)?)?;
    for x in [-2.0, 0.0, 3.0, 10.0] {
        let (a, da, d2a) = alpha.eval(x)?;
        println!("alpha({x:5}) = {a:.6e}  alpha' = {da:+.6e}  alpha'' = {d2a:+.6e}");
    }
    Ok(())
}
