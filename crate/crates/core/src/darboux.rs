//! The complex Darboux partner: `β_λ`, `V_λ = V₀ + 2β_λ'`, transformed
//! eigenstates `ψ = φ' + βφ`, the missing state at `ε`, the real `λ = 0`
//! family and the structural checks on `V_λ`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::ermakov::AlphaFunction;
use crate::grid::{ComplexField, Grid, RealField};
use crate::potentials::{BoundState, PotentialSpec};
use crate::quad::{adaptive_simpson, adaptive_simpson_complex};
use crate::seeds::SeedPair;

/// States with `|∫ψ²| ≤ ZERO_BINORM·∫|ψ|²` are kept unnormalized and flagged.
pub const ZERO_BINORM: f64 = 1e-10;
/// Relative accuracy of the bi-norm quadrature.
const NORM_RTOL: f64 = 1e-13;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `(β, β')` with `β = -α'/α + iλ/α²`.
pub fn beta_lambda(alpha: &AlphaFunction, x: f64) -> Result<(Complex64, Complex64)> {
    let s = alpha.q_sample(x)?;
    let beta = Complex64::new(-s.dlog_alpha(), s.lambda_over_q);
    let dbeta = Complex64::new(-s.d2log_alpha(), -s.lambda_over_q * s.dlog_q);
    Ok((beta, dbeta))
}

/// Max of `|-β' + β² - (V₀ - ε)|` relative to `max(1, |β|², |V₀ - ε|)`.
pub fn riccati_residual(alpha: &AlphaFunction, grid: &Grid) -> Result<f64> {
    let worst = grid
        .points()
        .par_iter()
        .map(|&x| {
            let (b, db) = beta_lambda(alpha, x)?;
            let qv = alpha.pair.q(x);
            let scale = 1f64.max(b.norm_sqr()).max(qv.abs());
            Ok((-db + b * b - qv).norm() / scale)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

/// `V_λ(x)` at one point.
pub fn potential_at(alpha: &AlphaFunction, x: f64) -> Result<Complex64> {
    let (_, db) = beta_lambda(alpha, x)?;
    Ok(alpha.pair.spec().v0(x) + 2.0 * db)
}

/// `V_λ` sampled on `grid`.
pub fn complex_potential(alpha: &AlphaFunction, grid: &Grid) -> Result<ComplexField> {
    let values = grid
        .points()
        .par_iter()
        .map(|&x| potential_at(alpha, x))
        .collect::<Result<Vec<_>>>()?;
    ComplexField::new(grid.clone(), values, format!("V_lambda (lambda = {})", alpha.lambda()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Image of the bound state `φ_n` of `V₀`.
    Transformed(usize),
    /// The state at the factorization energy.
    Missing,
}

/// A sampled eigenfunction of `V_λ`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenState {
    pub field: ComplexField,
    pub energy: f64,
    /// `∫ψ²` before normalization.
    pub binorm: Complex64,
    /// `|∫ψ²| / ∫|ψ|²`, scale free.
    pub binorm_ratio: f64,
    pub zero_binorm: bool,
    pub provenance: Provenance,
}

impl EigenState {
    pub fn label(&self) -> String {
        match self.provenance {
            Provenance::Transformed(n) => format!("psi_{}", n + 1),
            Provenance::Missing => "psi_eps".to_string(),
        }
    }
}

/// Unnormalized eigenfunction of `V_λ` evaluated pointwise.
#[derive(Debug, Clone)]
pub struct StateFunction<'a> {
    alpha: &'a AlphaFunction,
    provenance: Provenance,
    phi: Option<BoundState>,
    energy: f64,
}

impl<'a> StateFunction<'a> {
    pub fn new(alpha: &'a AlphaFunction, provenance: Provenance) -> Result<Self> {
        match provenance {
            Provenance::Transformed(n) => {
                let spec = alpha.pair.spec();
                Ok(Self { alpha, provenance, phi: Some(spec.eigenfunction(n)?), energy: spec.energy(n)? })
            }
            Provenance::Missing => {
                let k = alpha.coeffs;
                if k.lambda == 0.0 || k.c == 0.0 {
                    return domain("the missing state needs lambda != 0");
                }
                Ok(Self { alpha, provenance, phi: None, energy: alpha.epsilon() })
            }
        }
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `ψ(x)` before normalization.
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        match &self.phi {
            Some(phi) => {
                let (f, df) = phi.eval(x);
                let (b, _) = beta_lambda(self.alpha, x)?;
                Ok(df + b * f)
            }
            None => missing_state_eval(self.alpha, x).map(|p| p.0),
        }
    }

    /// `(∫ψ², ∫|ψ|²)` over `[lo, hi]` by adaptive quadrature.
    pub fn norms(&self, lo: f64, hi: f64) -> Result<(Complex64, f64)> {
        let sq = |x: f64| self.eval(x).map_or(Complex64::new(f64::NAN, f64::NAN), |p| p * p);
        // Coarse pass fixes the scale for the absolute tolerances.
        let rough = adaptive_simpson(|x| sq(x).norm(), lo, hi, 1e-3);
        if !rough.is_finite() {
            return Err(Error::Numerical(format!("{} is not square integrable on [{lo}, {hi}]", self.label())));
        }
        let tol = NORM_RTOL * rough.max(f64::MIN_POSITIVE);
        let l2 = adaptive_simpson(|x| sq(x).norm(), lo, hi, tol);
        let bi = adaptive_simpson_complex(sq, lo, hi, tol);
        if !bi.re.is_finite() || !bi.im.is_finite() {
            return Err(Error::Numerical(format!("bi-norm of {} is not finite", self.label())));
        }
        Ok((bi, l2))
    }

    fn label(&self) -> String {
        match self.provenance {
            Provenance::Transformed(n) => format!("psi_{}", n + 1),
            Provenance::Missing => "psi_eps".to_string(),
        }
    }

    /// Sample on `grid` and bi-normalize with the quadrature over the grid
    /// span. The sign is fixed so the first sample above `1e-6` of the peak
    /// has positive real part.
    pub fn sample(&self, grid: &Grid) -> Result<EigenState> {
        let mut values = grid.points().par_iter().map(|&x| self.eval(x)).collect::<Result<Vec<Complex64>>>()?;
        let (raw, l2) = self.norms(grid.first(), grid.last())?;
        let zero = raw.norm() <= ZERO_BINORM * l2;
        if !zero {
            let root = raw.sqrt();
            values.iter_mut().for_each(|v| *v /= root);
            let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if values.iter().find(|v| v.norm() > 1e-6 * peak).is_some_and(|lead| lead.re < 0.0) {
                values.iter_mut().for_each(|v| *v = -*v);
            }
        }
        Ok(EigenState {
            field: ComplexField::new(grid.clone(), values, self.label())?,
            energy: self.energy,
            binorm: raw,
            binorm_ratio: raw.norm() / l2,
            zero_binorm: zero,
            provenance: self.provenance,
        })
    }
}

/// `ψ = φ_n' + β φ_n`, bi-normalized, at energy `E_n`.
pub fn transform_bound_state(alpha: &AlphaFunction, n: usize, grid: &Grid) -> Result<EigenState> {
    StateFunction::new(alpha, Provenance::Transformed(n))?.sample(grid)
}

/// Unnormalized missing state `(1/α²)[(1/c)(λ/ω₀ - ib/2) v - i u_p]` and
/// its derivative at `x`.
pub fn missing_state_eval(alpha: &AlphaFunction, x: f64) -> Result<(Complex64, Complex64)> {
    let k = alpha.coeffs;
    if k.lambda == 0.0 || k.c == 0.0 {
        return domain("the missing state needs lambda != 0");
    }
    let s = alpha.q_sample(x)?;
    let coef = Complex64::new(k.lambda / k.omega0, -0.5 * k.b) / k.c;
    // Work with seeds divided by the sample scale; 1/Q carries 1/scale².
    let sc = s.scale;
    let num = coef * (s.seed.v / sc) - I * (s.seed.up / sc);
    let dnum = coef * (s.seed.dv / sc) - I * (s.seed.dup / sc);
    let inv_q = 1.0 / (s.q_scaled * sc);
    let psi = num * inv_q;
    let dpsi = (dnum - num * s.dlog_q) * inv_q;
    Ok((psi, dpsi))
}

/// The state at energy `ε`, bi-normalized unless its bi-norm vanishes.
pub fn missing_state(alpha: &AlphaFunction, grid: &Grid) -> Result<EigenState> {
    StateFunction::new(alpha, Provenance::Missing)?.sample(grid)
}

/// Max of `|ψ_ε'/ψ_ε - β|` (relative to `max(1, |β|)`) over grid points
/// where `|ψ_ε|` exceeds `floor` times its peak.
pub fn missing_state_log_derivative_check(alpha: &AlphaFunction, grid: &Grid, floor: f64) -> Result<f64> {
    let samples = grid
        .points()
        .iter()
        .map(|&x| Ok((missing_state_eval(alpha, x)?, beta_lambda(alpha, x)?.0)))
        .collect::<Result<Vec<_>>>()?;
    let peak = samples.iter().map(|((p, _), _)| p.norm()).fold(0.0, f64::max);
    Ok(samples
        .iter()
        .filter(|((p, _), _)| p.norm() > floor * peak)
        .map(|((p, dp), b)| (dp / p - b).norm() / b.norm().max(1.0))
        .fold(0.0, f64::max))
}

/// Real potential from the `λ = 0` linear superposition and the points
/// where it blows up.
#[derive(Debug, Clone, Serialize)]
pub struct RealFamily {
    pub potential: RealField,
    pub singularities: Vec<f64>,
    pub gamma_m: f64,
    pub sign: f64,
}

/// `(L, L')` with `L = v/ω₀ + sign·γ_M·u_p`; `L ∝ u_p(q ± γ_M)` when `q` is
/// measured from the zero of `v`.
pub fn linear_alpha(pair: &SeedPair, gamma_m: f64, sign: f64, x: f64) -> Result<(f64, f64)> {
    let s = pair.eval(x)?;
    let g = sign * gamma_m;
    Ok((s.v / pair.omega0 + g * s.up, s.dv / pair.omega0 + g * s.dup))
}

/// `V = V₀ - 2(ln L)'' = 2ε - V₀ + 2(L'/L)²` on `grid`; zeros of `L` inside
/// the grid span are located by bisection and returned as singularities.
pub fn real_family_lambda0(pair: &SeedPair, gamma_m: f64, sign: f64, grid: &Grid) -> Result<RealFamily> {
    if !(gamma_m >= 0.0) || sign.abs() != 1.0 {
        return domain("gamma_M must be nonnegative and sign must be +1 or -1");
    }
    let spec = pair.spec();
    let samples = grid
        .points()
        .par_iter()
        .map(|&x| linear_alpha(pair, gamma_m, sign, x))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = grid
        .points()
        .iter()
        .zip(&samples)
        .map(|(&x, &(l, dl))| {
            let r = dl / l;
            2.0 * pair.epsilon - spec.v0(x) + 2.0 * r * r
        })
        .collect();
    let mut singularities = Vec::new();
    let pts = grid.points();
    for i in 0..pts.len().saturating_sub(1) {
        let (l0, l1) = (samples[i].0, samples[i + 1].0);
        if l0 == 0.0 {
            singularities.push(pts[i]);
        } else if l0.signum() != l1.signum() && l1 != 0.0 {
            let (mut a, mut b, mut fa) = (pts[i], pts[i + 1], l0);
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                let fm = linear_alpha(pair, gamma_m, sign, m)?.0;
                if fm == 0.0 || b - a <= 4.0 * f64::EPSILON * m.abs().max(1.0) {
                    a = m;
                    b = m;
                    break;
                }
                if fa.signum() == fm.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            singularities.push(0.5 * (a + b));
        }
    }
    if samples.last().is_some_and(|s| s.0 == 0.0) {
        singularities.push(grid.last());
    }
    Ok(RealFamily {
        potential: RealField::new(grid.clone(), values, format!("V_gammaM (gamma_M = {gamma_m}, sign = {sign})"))?,
        singularities,
        gamma_m,
        sign,
    })
}

/// `(∫ Im V_λ dx, [2λ/α²]_{lo}^{hi})` over `[lo, hi]`; both vanish for a
/// balanced gain/loss profile.
pub fn zero_total_area(alpha: &AlphaFunction, lo: f64, hi: f64) -> Result<(f64, f64)> {
    if alpha.lambda() == 0.0 {
        return Ok((0.0, 0.0));
    }
    if !(hi > lo) {
        return domain(format!("invalid window [{lo}, {hi}]"));
    }
    let integral = adaptive_simpson(|x| potential_at(alpha, x).map_or(f64::NAN, |v| v.im), lo, hi, 1e-10);
    if !integral.is_finite() {
        return Err(Error::Numerical(format!("Im V_lambda is not integrable on [{lo}, {hi}]")));
    }
    let edge = |x: f64| -> Result<f64> {
        let s = alpha.q_sample(x)?;
        Ok(2.0 * s.lambda_over_q)
    };
    Ok((integral, edge(hi)? - edge(lo)?))
}

/// Max over a symmetric grid of `|V(x) - conj(V(-x))|`.
pub fn pt_symmetry_check(field: &ComplexField) -> Result<f64> {
    if !field.grid.is_symmetric() {
        return domain("PT-symmetry check needs a grid symmetric about 0");
    }
    let v = &field.values;
    let n = v.len();
    Ok((0..n).map(|i| (v[i] - v[n - 1 - i].conj()).norm()).fold(0.0, f64::max))
}

/// Max of `|V(x) - conj(V(-x))| / max(1, |V(x)|)`, for potentials whose
/// magnitude makes the absolute figure a rounding measure.
pub fn pt_symmetry_relative(field: &ComplexField) -> Result<f64> {
    if !field.grid.is_symmetric() {
        return domain("PT-symmetry check needs a grid symmetric about 0");
    }
    let v = &field.values;
    let n = v.len();
    Ok((0..n)
        .map(|i| (v[i] - v[n - 1 - i].conj()).norm() / v[i].norm().max(1.0))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictedLevel {
    pub energy: f64,
    pub label: String,
    /// 2 when `ε` coincides with a level of `V₀`.
    pub multiplicity: usize,
}

/// `{ε} ∪ {E_n}` in increasing order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumPrediction {
    pub levels: Vec<PredictedLevel>,
    pub embedded: bool,
}

impl SpectrumPrediction {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// Same labels, every energy moved by `delta` (sanity checks).
    pub fn shifted(&self, delta: f64) -> Self {
        let mut s = self.clone();
        for l in s.levels.iter_mut() {
            l.energy += delta;
        }
        s
    }
}

/// Levels of the partner: `ε` plus the first `count` levels of `V₀`
/// (capped at the number of bound levels).
pub fn predict_spectrum(spec: &PotentialSpec, epsilon: f64, count: usize) -> SpectrumPrediction {
    let mut levels: Vec<PredictedLevel> = spec
        .energies(count)
        .into_iter()
        .enumerate()
        .map(|(n, e)| PredictedLevel { energy: e, label: format!("E_{n}"), multiplicity: 1 })
        .collect();
    let tol = 1e-9 * epsilon.abs().max(1.0);
    let embedded;
    if let Some(l) = levels.iter_mut().find(|l| (l.energy - epsilon).abs() <= tol) {
        l.multiplicity = 2;
        l.label = format!("{} = eps", l.label);
        embedded = true;
    } else {
        let pos = levels.partition_point(|l| l.energy < epsilon);
        levels.insert(pos, PredictedLevel { energy: epsilon, label: "eps".into(), multiplicity: 1 });
        embedded = pos > 0;
    }
    SpectrumPrediction { levels, embedded }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::binorm;
    use crate::ermakov::{make_alpha, make_coeffs};
    use crate::potentials::{make_morse, make_pt};
    use crate::seeds::{build_pair, BackendChoice};
    use std::f64::consts::PI;

    fn alpha_for(spec: &PotentialSpec, eps: f64, l: f64, j: f64, i0: f64) -> AlphaFunction {
        let pair = build_pair(spec, eps, BackendChoice::Auto, spec.window()).unwrap();
        let k = make_coeffs(l, j, i0, pair.omega0).unwrap();
        make_alpha(pair, k).unwrap()
    }

    fn fig3() -> AlphaFunction {
        alpha_for(&make_morse(1.0, 0.4, 2).unwrap(), 0.0, 1.0, 1.0, 1.0)
    }

    fn fig7() -> AlphaFunction {
        let l = (PI / 4.0).sqrt();
        alpha_for(&make_pt(1.0, 3.0).unwrap(), 0.25, l, PI / 4.0, 0.0)
    }

    fn fig9() -> AlphaFunction {
        alpha_for(&make_pt(1.0, 3.0).unwrap(), 8.075, 1.34f64.sqrt(), 1.34, -2.13)
    }

    #[test]
    fn beta_basic_properties() {
        let al = fig3();
        for x in [-2.0, 0.0, 3.0] {
            let (b, _) = beta_lambda(&al, x).unwrap();
            assert!(b.im > 0.0);
            let (a, _, _) = al.eval(x).unwrap();
            assert!((b.im - 1.0 / (a * a)).abs() < 1e-12 * b.im);
        }
        let z = alpha_for(&make_morse(1.0, 0.4, 2).unwrap(), 0.0, 0.0, 1.0, 1.0);
        assert_eq!(beta_lambda(&z, 0.4).unwrap().0.im, 0.0);
    }

    #[test]
    fn riccati_residual_small() {
        for al in [fig3(), fig7(), fig9()] {
            let g = al.pair.spec().sampling_grid(1200).unwrap();
            let r = riccati_residual(&al, &g).unwrap();
            assert!(r < 1e-7, "{r}");
        }
    }

    #[test]
    fn riccati_by_finite_differences() {
        let al = fig3();
        let h = 1e-4;
        for x in [-1.5, 0.2, 2.0] {
            let b = |t: f64| beta_lambda(&al, t).unwrap().0;
            let db = (b(x + h) - b(x - h)) / (2.0 * h);
            let res = -db + b(x) * b(x) - al.pair.q(x);
            assert!(res.norm() < 1e-6 * b(x).norm_sqr().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn morse_partner_approaches_v0_at_the_edges() {
        let al = fig3();
        let spec = al.pair.spec().clone();
        let right = potential_at(&al, 16.0).unwrap();
        assert!((right.re - spec.v0(16.0)).abs() < 1e-3);
        assert!(right.im.abs() < 1e-3);
        // On the left V₀ grows like e^{2γ|x|}; the deviation is a small
        // fraction of it but not small in absolute terms.
        let left = potential_at(&al, -4.0).unwrap();
        let v0 = spec.v0(-4.0);
        assert!(((left.re - v0) / v0).abs() < 2e-2);
        assert!(left.im.abs() < 1e-3);
    }

    #[test]
    fn pt_symmetric_case() {
        let al = fig7();
        let g = al.pair.spec().sampling_grid(1200).unwrap();
        let v = complex_potential(&al, &g).unwrap();
        assert!(pt_symmetry_check(&v).unwrap() < 1e-10);
        assert!(pt_symmetry_relative(&v).unwrap() <= pt_symmetry_check(&v).unwrap());
        let v9 = complex_potential(&fig9(), &g).unwrap();
        assert!(pt_symmetry_check(&v9).unwrap() > 0.1);
        // V₀ itself.
        let spec = al.pair.spec();
        let re: Vec<Complex64> = g.points().iter().map(|&x| Complex64::new(spec.v0(x), 0.0)).collect();
        let f = ComplexField::new(g.clone(), re, "v0").unwrap();
        assert!(pt_symmetry_check(&f).unwrap() < 1e-14);
        let skew = ComplexField::new(Grid::closed(-1.0, 2.0, 5).unwrap(), vec![Complex64::default(); 5], "x").unwrap();
        assert!(pt_symmetry_check(&skew).is_err());
    }

    #[test]
    fn zero_total_area_cases() {
        let al = fig3();
        let (lo, hi) = al.pair.spec().window();
        let (int, edge) = zero_total_area(&al, lo, hi).unwrap();
        assert!(int.abs() < 1e-6 && (int - edge).abs() < 1e-8, "{int} {edge}");
        let al = fig7();
        let g = al.pair.spec().sampling_grid(1200).unwrap();
        let (int, _) = zero_total_area(&al, g.first(), g.last()).unwrap();
        assert!(int.abs() < 1e-10, "{int}");
        let z = alpha_for(&make_morse(1.0, 0.4, 2).unwrap(), 0.0, 0.0, 1.0, 1.0);
        assert_eq!(zero_total_area(&z, lo, hi).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn lambda_zero_potential_is_real_and_matches_linear_family() {
        let spec = make_morse(1.0, 0.4, 2).unwrap();
        let z = alpha_for(&spec, 0.0, 0.0, 1.0, 1.0);
        let g = spec.sampling_grid(400).unwrap();
        let v = complex_potential(&z, &g).unwrap();
        assert!(v.im().iter().all(|&t| t == 0.0));
        let fam = real_family_lambda0(&z.pair, 1.0, 1.0, &g).unwrap();
        assert!(fam.singularities.is_empty());
        for (a, b) in v.re().iter().zip(&fam.potential.values) {
            assert!((a - b).abs() < 1e-8 * b.abs().max(1.0));
        }
    }

    #[test]
    fn transformed_states_are_binormalized() {
        for al in [fig3(), fig7()] {
            let g = al.pair.spec().sampling_grid(2001).unwrap();
            for n in 0..3 {
                let st = transform_bound_state(&al, n, &g).unwrap();
                assert!(!st.zero_binorm);
                let b = binorm(&g, &st.field.values).unwrap();
                assert!((b - 1.0).norm() < 1e-8);
                assert!(st.binorm.im.abs() < 1e-8 * st.binorm.norm(), "binorm should be real: {}", st.binorm);
            }
        }
    }

    #[test]
    fn missing_state_log_derivative_and_decay() {
        let al = fig3();
        let g = al.pair.spec().sampling_grid(2001).unwrap();
        assert!(missing_state_log_derivative_check(&al, &g, 1e-6).unwrap() < 1e-7);
        let st = missing_state(&al, &g).unwrap();
        assert_eq!(st.energy, 0.0);
        let v = &st.field.values;
        assert!(v[0].norm() < 1e-4 && v[v.len() - 1].norm() < 1e-4);
        // Independent check of the derivative by finite differences.
        let h = 1e-5;
        for x in [-1.0, 0.5, 3.0] {
            let f = |t: f64| missing_state_eval(&al, t).unwrap().0;
            let fd = (f(x + h) - f(x - h)) / (2.0 * h);
            let d = missing_state_eval(&al, x).unwrap().1;
            assert!((fd - d).norm() < 1e-6 * d.norm().max(1e-8));
        }
        let z = alpha_for(&make_morse(1.0, 0.4, 2).unwrap(), 0.0, 0.0, 1.0, 1.0);
        assert!(missing_state(&z, &g).is_err());
    }

    #[test]
    fn real_family_examples() {
        let pt = make_pt(1.0, 3.0).unwrap();
        let pair = build_pair(&pt, 5.26, BackendChoice::Auto, pt.window()).unwrap();
        let g = pt.sampling_grid(1200).unwrap();
        for gm in [1.35, 0.7402] {
            let fam = real_family_lambda0(&pair, gm, 1.0, &g).unwrap();
            assert!(fam.singularities.is_empty(), "gamma_M = {gm}: {:?}", fam.singularities);
            assert!(fam.potential.values.iter().all(|v| v.is_finite()));
        }
        let a = real_family_lambda0(&pair, 1.35, 1.0, &g).unwrap();
        let b = real_family_lambda0(&pair, 0.7402, 1.0, &g).unwrap();
        let diff = a.potential.values.iter().zip(&b.potential.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff > 0.1);
        // Between E₀ and E₁ of Morse the seed has one node and the real
        // family is singular twice for the parameters J = I₀ = 1.
        let m = make_morse(1.0, 0.4, 2).unwrap();
        let mg = m.sampling_grid(2001).unwrap();
        let pair = build_pair(&m, 4.55, BackendChoice::Auto, m.window()).unwrap();
        let fam = real_family_lambda0(&pair, 1.0, 1.0, &mg).unwrap();
        assert_eq!(fam.singularities.len(), 2, "{:?}", fam.singularities);
        for &x in &fam.singularities {
            assert!(linear_alpha(&pair, 1.0, 1.0, x).unwrap().0.abs() < 1e-8);
        }
    }

    #[test]
    fn prediction_ordering_and_embedding() {
        let m = make_morse(1.0, 0.4, 2).unwrap();
        let p = predict_spectrum(&m, 0.0, 10);
        let e = p.energies();
        assert!((e[1] - 2.65).abs() < 1e-12 && (e[3] - 8.25).abs() < 1e-12 && e.len() == 4);
        assert!(e.windows(2).all(|w| w[1] > w[0]));
        assert!(!p.embedded);
        let p = predict_spectrum(&m, 4.55, 10);
        assert!(p.embedded && p.levels.len() == 4 && (p.levels[1].energy - 4.55).abs() < 1e-15);
        let p = predict_spectrum(&m, 6.45, 10);
        assert_eq!(p.levels.len(), 3);
        assert_eq!(p.levels[1].multiplicity, 2);
        let pt = make_pt(1.0, 3.0).unwrap();
        assert_eq!(predict_spectrum(&pt, 0.25, 3).energies(), vec![0.25, 9.0, 16.0, 25.0]);
    }

    #[test]
    fn lambda_continuity() {
        let spec = make_morse(1.0, 0.4, 2).unwrap();
        let g = Grid::closed(-3.0, 10.0, 300).unwrap();
        let base = alpha_for(&spec, 0.0, 0.0, 1.0, 1.0);
        let v0 = complex_potential(&base, &g).unwrap();
        let mut ratios = Vec::new();
        for l in [1e-1, 1e-2, 1e-3] {
            let v = complex_potential(&alpha_for(&spec, 0.0, l, 1.0, 1.0), &g).unwrap();
            let im = v.im().iter().map(|t| t.abs()).fold(0.0, f64::max);
            ratios.push(im / l);
            if l == 1e-3 {
                let d = v.re().iter().zip(v0.re()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(d < 1e-3, "{d}");
            }
        }
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0_f64), |(a, b), &r| (a.min(r), b.max(r)));
        assert!(hi / lo < 2.0, "{ratios:?}");
    }
}
