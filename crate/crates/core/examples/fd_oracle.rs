//! The finite-difference oracle on its own: a box, a harmonic well, and the
//! eigensolver cross-checked against characteristic-polynomial roots.
//!
//! cargo run --release --example fd_oracle

use darboux_lab::oracle::eig::matched_distance;
use darboux_lab::oracle::{build_fd_walls, charpoly_roots, eig_dense, eig_tridiagonal, fd_spectra, richardson};
use num_complex::Complex64;

fn main() -> darboux_lab::Result<()> {
    let pi = std::f64::consts::PI;
    let fd = build_fd_walls(0.0, 1.0, 400, |_| Ok(Complex64::new(0.0, 0.0)))?;
    let mut box_levels = eig_tridiagonal(&fd.tri)?;
    box_levels.sort_by(|a, b| a.re.total_cmp(&b.re));
    println!("box [0,1]:");
    for (k, e) in box_levels.iter().take(4).enumerate() {
        let exact = ((k + 1) as f64 * pi).powi(2);
        println!("  {:.8} vs {:.8}  rel {:.1e}", e.re, exact, (e.re / exact - 1.0).abs());
    }

    let (coarse, fine) = fd_spectra(-10.0, 10.0, 800, |x| Ok(Complex64::new(x * x, 0.0)))?;
    println!("oscillator -d2 + x^2 (Richardson from two grids):");
    for k in 0..4 {
        let e = richardson(coarse[k], fine[k]);
        println!("  {:.10} vs {}", e.re, 2 * k + 1);
    }

    let small = build_fd_walls(-1.0, 1.0, 50, |x| Ok(Complex64::new(x, 0.3 * x * x)))?;
    let a = eig_dense(&small.tri.to_dense())?;
    let b = charpoly_roots(&small.tri)?;
    let worst = matched_distance(&a, &b);
    println!("complex 50x50: QR vs Aberth, max difference {worst:.1e}");
    Ok(())
}
