//! Sample grids and the real/complex fields stored on them.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};

/// Strictly increasing abscissas.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return domain("grid must contain at least one point");
        }
        if points.iter().any(|x| !x.is_finite()) {
            return domain("grid abscissas must be finite");
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return domain("grid abscissas must be strictly increasing");
        }
        Ok(Self { points })
    }

    /// `n` equally spaced points covering `[lo, hi]` including both ends.
    pub fn closed(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return domain(format!("closed grid needs n >= 2 and lo < hi (got n={n}, [{lo}, {hi}])"));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| lo + i as f64 * h).collect();
        points[n - 1] = hi;
        mirror_if_symmetric(&mut points, lo, hi);
        Self::new(points)
    }

    /// `n` interior points of `[lo, hi]` with spacing `(hi - lo) / (n + 1)`;
    /// the ends themselves are excluded (Dirichlet walls sit there).
    pub fn interior(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 1 || !(hi > lo) {
            return domain(format!("interior grid needs n >= 1 and lo < hi (got n={n}, [{lo}, {hi}])"));
        }
        let h = (hi - lo) / (n + 1) as f64;
        let mut points: Vec<f64> = (1..=n).map(|i| lo + i as f64 * h).collect();
        mirror_if_symmetric(&mut points, lo, hi);
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Spacing if the grid is uniform to within `1e-9` relative.
    pub fn uniform_step(&self) -> Option<f64> {
        if self.points.len() < 2 {
            return None;
        }
        let h = (self.last() - self.first()) / (self.points.len() - 1) as f64;
        let tol = 1e-9 * h.abs().max(self.first().abs().max(self.last().abs()) * 1e-7);
        self.points
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= tol.max(1e-9 * h))
            .then_some(h)
    }

    /// True when `x_i == -x_{n-1-i}` for every sample.
    pub fn is_symmetric(&self) -> bool {
        let n = self.points.len();
        let scale = self.last().abs().max(self.first().abs()).max(1.0);
        (0..n).all(|i| (self.points[i] + self.points[n - 1 - i]).abs() <= 1e-12 * scale)
    }
}

/// On `[-L, L]` make the right half the exact negation of the left so
/// parity checks compare bitwise-mirrored abscissas.
fn mirror_if_symmetric(points: &mut [f64], lo: f64, hi: f64) {
    if lo != -hi {
        return;
    }
    let n = points.len();
    for i in 0..n / 2 {
        points[n - 1 - i] = -points[i];
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
}

/// Real samples on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct RealField {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub meta: String,
}

/// Complex samples on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub meta: String,
}

impl RealField {
    pub fn new(grid: Grid, values: Vec<f64>, meta: impl Into<String>) -> Result<Self> {
        if grid.len() != values.len() {
            return domain("grid and values differ in length");
        }
        Ok(Self { grid, values, meta: meta.into() })
    }

    /// Number of strict sign changes between consecutive samples, ignoring
    /// samples with magnitude below `floor`.
    pub fn sign_changes(&self, floor: f64) -> usize {
        let mut last = 0.0_f64;
        let mut count = 0;
        for &v in &self.values {
            if v.abs() <= floor {
                continue;
            }
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
        count
    }
}

impl ComplexField {
    pub fn new(grid: Grid, values: Vec<Complex64>, meta: impl Into<String>) -> Result<Self> {
        if grid.len() != values.len() {
            return domain("grid and values differ in length");
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return domain(format!("{}: non-finite sample", meta.into()));
        }
        Ok(Self { grid, values, meta: meta.into() })
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Composite Simpson rule on uniformly spaced samples. An even number of
/// samples closes with the 3/8 rule on the last three intervals.
pub fn simpson_uniform<T>(values: &[T], h: f64) -> T
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let n = values.len();
    match n {
        0 | 1 => T::default(),
        2 => (values[0] + values[1]) * (0.5 * h),
        3 => (values[0] + values[1] * 4.0 + values[2]) * (h / 3.0),
        _ => {
            let (simpson_end, tail) = if n % 2 == 1 { (n - 1, false) } else { (n - 4, true) };
            let mut acc = values[0] + values[simpson_end];
            for (i, v) in values.iter().enumerate().take(simpson_end).skip(1) {
                acc = acc + *v * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let mut total = acc * (h / 3.0);
            if tail {
                let k = simpson_end;
                let t = (values[k] + values[k + 1] * 3.0 + values[k + 2] * 3.0 + values[k + 3]) * (3.0 * h / 8.0);
                total = total + t;
            }
            total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_grid_excludes_walls() {
        let g = Grid::interior(0.0, 1.0, 9).unwrap();
        assert_eq!(g.len(), 9);
        assert!((g.first() - 0.1).abs() < 1e-15);
        assert!((g.last() - 0.9).abs() < 1e-15);
        assert!((g.uniform_step().unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn symmetric_windows_mirror_exactly() {
        for g in [Grid::closed(-8.0, 8.0, 1201).unwrap(), Grid::interior(-1.3, 1.3, 1200).unwrap()] {
            let p = g.points();
            let n = p.len();
            assert!((0..n).all(|i| p[i] == -p[n - 1 - i]));
            assert!(g.uniform_step().is_some());
        }
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(Grid::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(Grid::closed(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        for n in [5usize, 6, 7, 10] {
            let g = Grid::closed(0.0, 2.0, n).unwrap();
            let h = g.uniform_step().unwrap();
            let vals: Vec<f64> = g.points().iter().map(|x| x * x * x - x + 1.0).collect();
            let exact = 4.0 - 2.0 + 2.0;
            assert!((simpson_uniform(&vals, h) - exact).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn symmetric_detection() {
        assert!(Grid::closed(-1.0, 1.0, 11).unwrap().is_symmetric());
        assert!(!Grid::closed(-1.0, 2.0, 11).unwrap().is_symmetric());
    }
}
