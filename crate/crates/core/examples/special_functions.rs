//! Confluent and Gauss hypergeometric functions against closed forms.
//!
//! cargo run --example special_functions

use darboux_lab::specfun::{gamma, gauss_2f1, kummer_1f1, laguerre, log_gamma};

fn binom(n: usize, k: f64) -> f64 {
    gamma(n as f64 + k + 1.0) / (gamma(n as f64 + 1.0) * gamma(k + 1.0))
}

fn main() -> darboux_lab::Result<()> {
    println!("Gamma(5.5) = {:.15}  ln Gamma(100) = {:.12}", gamma(5.5), log_gamma(100.0)?);

    println!("\nL_n^(c-1)(z) = C(n+c-1, n) 1F1(-n, c, z)");
    for (n, c, z) in [(3usize, 2.5, 1.7), (6, 4.0, 7.3), (10, 1.5, 9.9)] {
        let lhs = laguerre(n, c - 1.0, z);
        let rhs = binom(n, c - 1.0) * kummer_1f1(-(n as f64), c, z).value_or_err("1F1", z)?;
        println!("  n={n:2} c={c} z={z}: {lhs:+.15e} vs {rhs:+.15e}  rel {:.1e}", ((lhs - rhs) / lhs).abs());
    }

    println!("\n1F1(a, a, z) = e^z, including the asymptotic range");
    for z in [0.5, 20.0, 80.0] {
        let k = kummer_1f1(1.3, 1.3, z).value_or_err("1F1", z)?;
        println!("  z={z:5}: rel {:.1e}", (k / z.exp() - 1.0).abs());
    }

    println!("\n2F1(1, 1, 2, z) = -ln(1-z)/z, up to z = 0.999");
    for z in [-3.0, 0.3, 0.9, 0.999] {
        let f = gauss_2f1(1.0, 1.0, 2.0, z).value_or_err("2F1", z)?;
        let exact = -(1.0 - z).ln() / z;
        println!("  z={z:6}: {f:.15} rel {:.1e}", ((f - exact) / exact).abs());
    }
    Ok(())
}
