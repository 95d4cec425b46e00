//! Three-point finite-difference Hamiltonians with Dirichlet walls.

use num_complex::Complex64;
use rayon::prelude::*;

use super::eig::{eig_dense, eig_tridiagonal_robust, Tridiagonal};
use crate::error::{domain, Result};
use crate::grid::{ComplexField, Grid};

/// Smallest grid accepted by [`build_fd`].
pub const MIN_FD_POINTS: usize = 50;

/// `-d²/dx² + V` on a uniform grid, walls one step beyond each end.
#[derive(Debug, Clone)]
pub struct FdHamiltonian {
    pub grid: Grid,
    pub h: f64,
    pub tri: Tridiagonal,
}

/// Matrix from potential samples on a uniform grid.
pub fn build_fd(potential: &ComplexField) -> Result<FdHamiltonian> {
    let grid = &potential.grid;
    if grid.len() < MIN_FD_POINTS {
        return domain(format!("finite-difference grid needs at least {MIN_FD_POINTS} points"));
    }
    let Some(h) = grid.uniform_step() else {
        return domain("finite-difference grid must be uniform");
    };
    let n = grid.len();
    let k = 1.0 / (h * h);
    let diag = potential.values.iter().map(|v| v + 2.0 * k).collect();
    let off = vec![Complex64::new(-k, 0.0); n - 1];
    Ok(FdHamiltonian { grid: grid.clone(), h, tri: Tridiagonal::new(diag, off.clone(), off)? })
}

/// Matrix for `n` interior points between walls at `lo` and `hi`, sampling
/// `v` in parallel.
pub fn build_fd_walls<F>(lo: f64, hi: f64, n: usize, v: F) -> Result<FdHamiltonian>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let grid = Grid::interior(lo, hi, n)?;
    let values = grid.points().par_iter().map(|&x| v(x)).collect::<Result<Vec<_>>>()?;
    build_fd(&ComplexField::new(grid, values, "fd potential")?)
}

impl FdHamiltonian {
    pub fn dim(&self) -> usize {
        self.tri.dim()
    }

    /// All eigenvalues sorted by real part (tridiagonal fast path).
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        let mut e = eig_tridiagonal_robust(&self.tri)?;
        e.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(e)
    }

    /// All eigenvalues through the dense Hessenberg/QR path.
    pub fn eigenvalues_dense(&self) -> Result<Vec<Complex64>> {
        let mut e = eig_dense(&self.tri.to_dense())?;
        e.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(e)
    }
}

/// Eigenvalues on `n` and `2n + 1` interior points (step `h` and `h/2`).
pub fn fd_spectra<F>(lo: f64, hi: f64, n: usize, v: F) -> Result<(Vec<Complex64>, Vec<Complex64>)>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let coarse = build_fd_walls(lo, hi, n, &v)?.eigenvalues()?;
    let fine = build_fd_walls(lo, hi, 2 * n + 1, &v)?.eigenvalues()?;
    Ok((coarse, fine))
}

/// One Richardson step for a second-order scheme.
pub fn richardson(coarse: Complex64, fine: Complex64) -> Complex64 {
    (4.0 * fine - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::super::eig::matched_distance;
    use super::*;
    use crate::potentials::make_morse;
    use std::f64::consts::PI;

    fn zero(_: f64) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }

    #[test]
    fn particle_in_a_box() {
        let fd = build_fd_walls(0.0, PI, 2000, zero).unwrap();
        let e = fd.eigenvalues().unwrap();
        for (k, want) in [1.0, 4.0, 9.0].iter().enumerate() {
            assert!((e[k].re - want).abs() < 1e-2);
            assert!(e[k].im.abs() < 1e-12);
        }
    }

    #[test]
    fn richardson_improves_the_box() {
        let (c, f) = fd_spectra(0.0, PI, 200, zero).unwrap();
        for k in 0..3 {
            let want = ((k + 1) * (k + 1)) as f64;
            let r = richardson(c[k], f[k]);
            assert!((r.re - want).abs() < 0.05 * (f[k].re - want).abs());
        }
    }

    #[test]
    fn morse_hermitian_levels_and_second_order_convergence() {
        let m = make_morse(1.0, 0.4, 2).unwrap();
        let (lo, hi) = m.fd_walls();
        let v = |x: f64| Ok(Complex64::new(m.v0(x), 0.0));
        let coarse = build_fd_walls(lo, hi, 600, v).unwrap().eigenvalues().unwrap();
        let fine = build_fd_walls(lo, hi, 1201, v).unwrap().eigenvalues().unwrap();
        for (k, want) in [2.65, 6.45, 8.25].iter().enumerate() {
            assert!((fine[k].re - want).abs() < 1e-2);
            assert!(fine[k].im.abs() < 1e-12);
            let ratio = (coarse[k].re - want).abs() / (fine[k].re - want).abs();
            assert!((3.0..5.0).contains(&ratio), "level {k}: ratio {ratio}");
        }
    }

    #[test]
    fn dense_path_agrees_with_fast_path() {
        let m = make_morse(1.0, 0.4, 2).unwrap();
        let (lo, hi) = m.fd_walls();
        let v = |x: f64| Ok(Complex64::new(m.v0(x), 0.3 * (-x * x).exp()));
        let fd = build_fd_walls(lo, hi, 200, v).unwrap();
        let a = fd.eigenvalues().unwrap();
        let b = fd.eigenvalues_dense().unwrap();
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(matched_distance(&a, &b) < 1e-9 * scale);
    }

    #[test]
    fn rejects_bad_grids() {
        let g = Grid::new((0..60).map(|i| (i * i) as f64).collect()).unwrap();
        let f = ComplexField::new(g, vec![Complex64::default(); 60], "v").unwrap();
        assert!(build_fd(&f).is_err());
        let g = Grid::closed(0.0, 1.0, 20).unwrap();
        let f = ComplexField::new(g, vec![Complex64::default(); 20], "v").unwrap();
        assert!(build_fd(&f).is_err());
    }
}
