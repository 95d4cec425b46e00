//! λ = 0: the partner is real and coincides with the Mielnik one-parameter
//! family with γ_M = |I0/J|. Below the ground state it is regular, above it
//! α has zeros and the potential is singular.
//!
//! cargo run --release --example mielnik_real_family

use darboux_lab::cli::{Case, Overrides, RunConfig};

fn main() -> darboux_lab::Result<()> {
    let settings = [
        "family=pt\nr=3\nepsilon=5.26\nlambda=0\nbigj=2.74\ni0=3.701",
        "family=pt\nr=3\nepsilon=5.26\nlambda=0\nbigj=5\ni0=3.701",
        "family=morse\nnmax=2\nepsilon=4.55\nlambda=0\nbigj=1\ni0=1",
        "family=morse\nnmax=2\nepsilon=6.45\nlambda=0\nbigj=1\ni0=1",
    ];
    for text in settings {
        let case = Case::build(RunConfig::resolve(&Overrides::parse(text)?)?)?;
        let grid = case.grid(2001)?;
        let singular = case.singularities(&grid)?;
        println!("{}", text.replace('\n', " "));
        println!(
            "  gamma_M = {:.4}, sign {:+}, singularities expected: {}, found at {:?}",
            case.coeffs.gamma_m(),
            case.sign(),
            case.expect_singular(),
            singular.iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>()
        );
        if singular.is_empty() {
            let report = case.spectrum(1200)?;
            let levels: Vec<String> = report.levels.iter().map(|l| format!("{:.5}", l.computed.re)).collect();
            println!("  spectrum {} (matched: {})", levels.join(", "), report.pass);
        }
    }
    Ok(())
}
