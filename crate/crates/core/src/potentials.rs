//! Exactly solvable Hermitian potentials: Morse, trigonometric Pöschl-Teller
//! and the harmonic oscillator `x²`, with closed-form spectra and
//! normalized bound states.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::grid::{Grid, RealField};
use crate::quad::adaptive_simpson;
use crate::specfun::{gauss_2f1, gauss_2f1_deriv, laguerre, laguerre_deriv, log_gamma};

/// Default Morse truncation window in units of `1/γ`.
pub const MORSE_WINDOW: (f64, f64) = (-4.0, 16.0);
/// Default oscillator truncation window.
pub const OSCILLATOR_WINDOW: (f64, f64) = (-8.0, 8.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `Γ₀(1 - e^{-γx})²` with `Γ₀ = γ²(N + δ + 1/2)²`.
    Morse { gamma: f64, delta: f64, n_max: usize },
    /// `U₀² r(r-1) / cos²(U₀x)` on `(-π/2U₀, π/2U₀)`.
    TrigPoschlTeller { u0: f64, r: f64 },
    /// `x²`.
    Oscillator,
}

/// An immutable solvable potential together with its sampling window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialSpec {
    pub family: Family,
    window: (f64, f64),
}

pub fn make_morse(gamma: f64, delta: f64, n_max: usize) -> Result<PotentialSpec> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return domain(format!("Morse gamma must be positive, got {gamma}"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("Morse delta must lie in (0, 1), got {delta}"));
    }
    let family = Family::Morse { gamma, delta, n_max };
    Ok(PotentialSpec { family, window: (MORSE_WINDOW.0 / gamma, MORSE_WINDOW.1 / gamma) })
}

pub fn make_pt(u0: f64, r: f64) -> Result<PotentialSpec> {
    if !(u0 > 0.0) || !u0.is_finite() {
        return domain(format!("Pöschl-Teller U0 must be positive, got {u0}"));
    }
    if !(r > 1.0) || !r.is_finite() {
        return domain(format!("Pöschl-Teller r must exceed 1, got {r}"));
    }
    let half = PI / (2.0 * u0);
    Ok(PotentialSpec { family: Family::TrigPoschlTeller { u0, r }, window: (-half, half) })
}

pub fn make_oscillator() -> PotentialSpec {
    PotentialSpec { family: Family::Oscillator, window: OSCILLATOR_WINDOW }
}

impl PotentialSpec {
    /// Restrict the sampling window. For Pöschl-Teller the window must lie
    /// inside the open domain.
    pub fn with_window(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return domain(format!("invalid window [{lo}, {hi}]"));
        }
        let (dlo, dhi) = self.domain();
        if lo < dlo || hi > dhi {
            return domain(format!("window [{lo}, {hi}] leaves the domain ({dlo}, {dhi})"));
        }
        self.window = (lo, hi);
        Ok(self)
    }

    pub fn domain(&self) -> (f64, f64) {
        match self.family {
            Family::TrigPoschlTeller { u0, .. } => (-PI / (2.0 * u0), PI / (2.0 * u0)),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// The truncation window (Morse, oscillator) or the configured subwindow
    /// of the Pöschl-Teller well.
    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    /// Dirichlet walls for the finite-difference oracle: the truncation
    /// window on the line, the true walls for Pöschl-Teller.
    pub fn fd_walls(&self) -> (f64, f64) {
        match self.family {
            Family::TrigPoschlTeller { .. } => self.domain(),
            _ => self.window,
        }
    }

    /// `n` sampling points. Pöschl-Teller samples stay one step inside the walls.
    pub fn sampling_grid(&self, n: usize) -> Result<Grid> {
        let (lo, hi) = self.window;
        match self.family {
            Family::TrigPoschlTeller { .. } if (lo, hi) == self.domain() => Grid::interior(lo, hi, n),
            _ => Grid::closed(lo, hi, n),
        }
    }

    pub fn is_even(&self) -> bool {
        !matches!(self.family, Family::Morse { .. })
    }

    /// Number of discrete levels, `None` when denumerable.
    pub fn n_bound(&self) -> Option<usize> {
        match self.family {
            Family::Morse { n_max, .. } => Some(n_max + 1),
            _ => None,
        }
    }

    /// Morse `d = N + δ + 1/2`.
    pub fn morse_d(&self) -> Option<f64> {
        match self.family {
            Family::Morse { delta, n_max, .. } => Some(n_max as f64 + delta + 0.5),
            _ => None,
        }
    }

    /// Morse depth `Γ₀`.
    pub fn depth(&self) -> Option<f64> {
        match self.family {
            Family::Morse { gamma, .. } => self.morse_d().map(|d| gamma * gamma * d * d),
            _ => None,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        x > lo && x < hi && x.is_finite()
    }

    /// `V₀(x)` without domain checks.
    pub fn v0(&self, x: f64) -> f64 {
        match self.family {
            Family::Morse { gamma, .. } => {
                let g0 = self.depth().unwrap_or_default();
                let t = 1.0 - (-gamma * x).exp();
                g0 * t * t
            }
            Family::TrigPoschlTeller { u0, r } => {
                let c = (u0 * x).cos();
                u0 * u0 * r * (r - 1.0) / (c * c)
            }
            Family::Oscillator => x * x,
        }
    }

    /// `V₀'(x)` without domain checks.
    pub fn dv0(&self, x: f64) -> f64 {
        match self.family {
            Family::Morse { gamma, .. } => {
                let g0 = self.depth().unwrap_or_default();
                let e = (-gamma * x).exp();
                2.0 * g0 * gamma * e * (1.0 - e)
            }
            Family::TrigPoschlTeller { u0, r } => {
                let (s, c) = (u0 * x).sin_cos();
                2.0 * u0 * u0 * u0 * r * (r - 1.0) * s / (c * c * c)
            }
            Family::Oscillator => 2.0 * x,
        }
    }

    pub fn eval_v0(&self, x: f64) -> Result<f64> {
        if !self.contains(x) {
            return domain(format!("x = {x} lies outside the domain {:?}", self.domain()));
        }
        Ok(self.v0(x))
    }

    /// Closed-form discrete energy `E_n`.
    pub fn energy(&self, n: usize) -> Result<f64> {
        match self.family {
            Family::Morse { gamma, n_max, .. } => {
                if n > n_max {
                    return domain(format!("Morse level {n} exceeds N = {n_max}"));
                }
                let d = self.morse_d().unwrap_or_default();
                let nf = n as f64;
                Ok(gamma * gamma * ((2.0 * nf + 1.0) * d - (nf + 0.5).powi(2)))
            }
            Family::TrigPoschlTeller { u0, r } => Ok(u0 * u0 * (n as f64 + r).powi(2)),
            Family::Oscillator => Ok(2.0 * n as f64 + 1.0),
        }
    }

    /// The lowest `count` energies, truncated to the number of bound levels.
    pub fn energies(&self, count: usize) -> Vec<f64> {
        let count = self.n_bound().map_or(count, |nb| count.min(nb));
        (0..count).filter_map(|n| self.energy(n).ok()).collect()
    }

    /// Normalized eigenfunction evaluator for level `n`.
    pub fn eigenfunction(&self, n: usize) -> Result<BoundState> {
        self.energy(n)?;
        let kind = match self.family {
            Family::Morse { gamma, .. } => {
                let d = self.morse_d().unwrap_or_default();
                let nf = n as f64;
                let alpha_n = d - 0.5 - nf;
                let log_c2 = (gamma * (2.0 * d - 1.0 - 2.0 * nf)).ln() + log_gamma(nf + 1.0)?
                    - log_gamma(2.0 * d - nf)?;
                BoundKind::Morse { gamma, d, alpha_n, norm: (0.5 * log_c2).exp() }
            }
            Family::TrigPoschlTeller { u0, r } => {
                let mut kind = BoundKind::PoschlTeller { u0, r, n, norm: 1.0 };
                let (lo, hi) = self.domain();
                let probe = BoundState { n, kind: kind.clone() };
                let norm2 = adaptive_simpson(|x| probe.eval(x).0.powi(2), lo, hi, 1e-13);
                if let BoundKind::PoschlTeller { norm, .. } = &mut kind {
                    *norm = 1.0 / norm2.sqrt();
                }
                kind
            }
            Family::Oscillator => BoundKind::Oscillator,
        };
        Ok(BoundState { n, kind })
    }

    /// Normalized bound state `φ_n` sampled on `grid`.
    pub fn bound_state(&self, n: usize, grid: &Grid) -> Result<RealField> {
        if !self.contains(grid.first()) || !self.contains(grid.last()) {
            return domain("bound-state grid leaves the domain");
        }
        let phi = self.eigenfunction(n)?;
        let values = grid.points().iter().map(|&x| phi.eval(x).0).collect();
        RealField::new(grid.clone(), values, format!("phi_{n}"))
    }
}

#[derive(Debug, Clone)]
enum BoundKind {
    Morse { gamma: f64, d: f64, alpha_n: f64, norm: f64 },
    PoschlTeller { u0: f64, r: f64, n: usize, norm: f64 },
    Oscillator,
}

/// Evaluator for a normalized bound state and its derivative.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub n: usize,
    kind: BoundKind,
}

impl BoundState {
    /// `(φ_n(x), φ_n'(x))`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match &self.kind {
            BoundKind::Morse { gamma, d, alpha_n, norm } => {
                let y = 2.0 * d * (-gamma * x).exp();
                let a2 = 2.0 * alpha_n;
                let l = laguerre(self.n, a2, y);
                let dl = laguerre_deriv(self.n, a2, y);
                // Combine the envelope in log space to survive large y.
                let env = norm * (-0.5 * y + alpha_n * y.ln()).exp();
                let phi = env * l;
                let dphi = -gamma * env * ((alpha_n - 0.5 * y) * l + y * dl);
                (phi, dphi)
            }
            BoundKind::PoschlTeller { u0, r, n, norm } => {
                let (s, c) = (u0 * x).sin_cos();
                let z = s * s;
                let k = (n / 2) as f64;
                let cr1 = c.powf(r - 1.0);
                if n % 2 == 0 {
                    let f = gauss_2f1(-k, r + k, 0.5, z).value;
                    let df = gauss_2f1_deriv(-k, r + k, 0.5, z).value;
                    let phi = norm * cr1 * c * f;
                    let dphi = norm * u0 * cr1 * s * (-r * f + 2.0 * c * c * df);
                    (phi, dphi)
                } else {
                    let f = gauss_2f1(-k, r + k + 1.0, 1.5, z).value;
                    let df = gauss_2f1_deriv(-k, r + k + 1.0, 1.5, z).value;
                    let phi = norm * cr1 * c * s * f;
                    let dphi = norm * u0 * cr1 * ((c * c - r * z) * f + 2.0 * z * c * c * df);
                    (phi, dphi)
                }
            }
            BoundKind::Oscillator => {
                let (prev, cur, next) = hermite_functions(self.n, x);
                let nf = self.n as f64;
                (cur, (nf / 2.0).sqrt() * prev - ((nf + 1.0) / 2.0).sqrt() * next)
            }
        }
    }
}

/// Normalized Hermite functions `(ψ_{n-1}, ψ_n, ψ_{n+1})` at `x`.
fn hermite_functions(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..=n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        if k == n {
            return (prev, cur, next);
        }
        prev = cur;
        cur = next;
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn morse_depth_and_levels() {
        let m = make_morse(1.0, 0.4, 2).unwrap();
        assert!((m.depth().unwrap() - 8.41).abs() < 1e-12);
        assert_eq!(m.n_bound(), Some(3));
        let m4 = make_morse(1.0, 0.4, 4).unwrap();
        assert!((m4.depth().unwrap() - 24.01).abs() < 1e-12);
        assert!(make_morse(1.0, 1.5, 2).is_err());
        assert!(make_morse(0.0, 0.4, 2).is_err());
    }

    #[test]
    fn pt_domain_and_constraints() {
        let p = make_pt(1.0, 3.0).unwrap();
        let (lo, hi) = p.domain();
        assert!((lo + PI / 2.0).abs() < 1e-15 && (hi - PI / 2.0).abs() < 1e-15);
        assert_eq!(make_pt(1.0, 4.0).unwrap().domain(), p.domain());
        assert!(make_pt(1.0, 1.0).is_err());
        assert!(make_pt(0.0, 3.0).is_err());
    }

    #[test]
    fn v0_values() {
        assert_eq!(make_morse(1.0, 0.4, 2).unwrap().eval_v0(0.0).unwrap(), 0.0);
        assert!((make_pt(1.0, 3.0).unwrap().eval_v0(0.0).unwrap() - 6.0).abs() < 1e-15);
        assert_eq!(make_oscillator().eval_v0(2.0).unwrap(), 4.0);
        assert!(make_pt(1.0, 3.0).unwrap().eval_v0(2.0).is_err());
    }

    #[test]
    fn dv0_matches_finite_difference() {
        for spec in [make_morse(1.3, 0.4, 2).unwrap(), make_pt(1.2, 3.5).unwrap(), make_oscillator()] {
            for x in [-0.9, -0.2, 0.4, 1.1] {
                let h = 1e-5;
                let fd = (spec.v0(x + h) - spec.v0(x - h)) / (2.0 * h);
                assert!((fd - spec.dv0(x)).abs() < 1e-6 * fd.abs().max(1.0));
            }
        }
    }

    #[test]
    fn energies_closed_form() {
        let m = make_morse(1.0, 0.4, 2).unwrap();
        let e: Vec<f64> = (0..3).map(|n| m.energy(n).unwrap()).collect();
        for (got, want) in e.iter().zip([2.65, 6.45, 8.25]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(m.energy(3).is_err());
        let m4 = make_morse(1.0, 0.4, 4).unwrap();
        assert!((m4.energy(4).unwrap() - 23.85).abs() < 1e-12);
        let p = make_pt(1.0, 3.0).unwrap();
        for (n, want) in [(0, 9.0), (1, 16.0), (2, 25.0)] {
            assert_eq!(p.energy(n).unwrap(), want);
        }
        assert_eq!(make_oscillator().energy(3).unwrap(), 7.0);
    }

    fn check_normalized(spec: &PotentialSpec, n: usize, lo: f64, hi: f64) {
        let phi = spec.eigenfunction(n).unwrap();
        let norm = adaptive_simpson(|x| phi.eval(x).0.powi(2), lo, hi, 1e-12);
        assert!((norm - 1.0).abs() < 1e-8, "n = {n}: norm {norm}");
    }

    #[test]
    fn bound_states_are_normalized() {
        let m = make_morse(1.0, 0.4, 2).unwrap();
        for n in 0..3 {
            check_normalized(&m, n, -4.0, 70.0);
        }
        let m4 = make_morse(1.0, 0.4, 4).unwrap();
        for n in 0..5 {
            check_normalized(&m4, n, -4.0, 120.0);
        }
        let p = make_pt(1.0, 3.0).unwrap();
        for n in 0..5 {
            check_normalized(&p, n, -PI / 2.0, PI / 2.0);
        }
        let o = make_oscillator();
        for n in 0..5 {
            check_normalized(&o, n, -12.0, 12.0);
        }
    }

    #[test]
    fn node_counts_and_parity() {
        let m = make_morse(1.0, 0.4, 4).unwrap();
        let g = m.sampling_grid(4001).unwrap();
        for n in 0..5 {
            let f = m.bound_state(n, &g).unwrap();
            assert_eq!(f.sign_changes(1e-12), n, "Morse n = {n}");
        }
        let ground = m.bound_state(0, &g).unwrap();
        assert!(ground.values.iter().all(|&v| v >= 0.0));

        let p = make_pt(1.0, 3.0).unwrap();
        let gp = p.sampling_grid(2001).unwrap();
        for n in 0..5 {
            assert_eq!(p.bound_state(n, &gp).unwrap().sign_changes(1e-12), n, "PT n = {n}");
        }
        let phi1 = p.eigenfunction(1).unwrap();
        assert!(phi1.eval(0.0).0.abs() < 1e-15);
        for x in [0.2, 0.7, 1.3] {
            assert!((phi1.eval(x).0 + phi1.eval(-x).0).abs() < 1e-13);
        }

        let o = make_oscillator();
        let go = o.sampling_grid(2001).unwrap();
        for n in 0..5 {
            assert_eq!(o.bound_state(n, &go).unwrap().sign_changes(1e-12), n);
        }
    }

    #[test]
    fn eigenfunctions_solve_the_schrodinger_equation() {
        // Second derivative by central differences of the analytic φ'.
        let cases = [
            (make_morse(1.0, 0.4, 2).unwrap(), vec![-1.5, 0.0, 1.0, 3.0]),
            (make_pt(1.0, 3.0).unwrap(), vec![-1.2, -0.3, 0.5, 1.4]),
            (make_oscillator(), vec![-2.0, 0.1, 1.7]),
        ];
        for (spec, xs) in cases {
            for n in 0..3 {
                let phi = spec.eigenfunction(n).unwrap();
                let e = spec.energy(n).unwrap();
                for &x in &xs {
                    let h = 1e-5;
                    let d2 = (phi.eval(x + h).1 - phi.eval(x - h).1) / (2.0 * h);
                    let res = -d2 + (spec.v0(x) - e) * phi.eval(x).0;
                    assert!(res.abs() < 1e-6, "{:?} n={n} x={x}: {res}", spec.family);
                }
            }
        }
    }
}
