//! Independent checks: finite-difference spectra, Schrödinger residuals,
//! zero interlacing and bi-norms.

pub mod eig;
pub mod fd;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::darboux::{EigenState, SpectrumPrediction};
use crate::error::{domain, Result};
use crate::grid::{simpson_uniform, ComplexField, Grid};

pub use eig::{charpoly_newton, charpoly_roots, eig_dense, eig_tridiagonal, eig_tridiagonal_robust, refine_eigenvalue, DenseMatrix, Tridiagonal};
pub use fd::{build_fd, build_fd_walls, fd_spectra, richardson, FdHamiltonian};

/// `∫ψ² dx` without conjugation (composite Simpson on a uniform grid).
pub fn binorm(grid: &Grid, values: &[Complex64]) -> Result<Complex64> {
    bilinear(grid, values, values)
}

/// `∫ψφ dx` without conjugation, the bi-orthogonality pairing.
pub fn bilinear(grid: &Grid, psi: &[Complex64], phi: &[Complex64]) -> Result<Complex64> {
    if grid.len() != psi.len() || grid.len() != phi.len() {
        return domain("bilinear form: grid and samples differ in length");
    }
    let Some(h) = grid.uniform_step() else {
        return domain("bilinear form needs a uniform grid");
    };
    let prod: Vec<Complex64> = psi.iter().zip(phi).map(|(a, b)| a * b).collect();
    Ok(simpson_uniform(&prod, h))
}

/// Samples dropped at each end by [`schrodinger_residual`].
pub const RESIDUAL_EDGE: usize = 3;

/// `max |-ψ'' + Vψ - Eψ| / max(1, max|ψ|·max(1, |E|))` with a five-point
/// second derivative, skipping three samples at each end.
pub fn schrodinger_residual(state: &EigenState, potential: &ComplexField) -> Result<f64> {
    let grid = &state.field.grid;
    if grid != &potential.grid {
        return domain("state and potential are sampled on different grids");
    }
    let Some(h) = grid.uniform_step() else {
        return domain("residual needs a uniform grid");
    };
    let n = grid.len();
    if n < 2 * RESIDUAL_EDGE + 5 {
        return domain("grid too short for the residual stencil");
    }
    let psi = &state.field.values;
    let v = &potential.values;
    let e = state.energy;
    let mut worst = 0.0_f64;
    for i in RESIDUAL_EDGE.max(2)..n - RESIDUAL_EDGE.max(2) {
        let d2 = (-psi[i - 2] + 16.0 * psi[i - 1] - 30.0 * psi[i] + 16.0 * psi[i + 1] - psi[i + 2]) / (12.0 * h * h);
        worst = worst.max((-d2 + (v[i] - e) * psi[i]).norm());
    }
    let peak = state.field.max_abs();
    Ok(worst / 1f64.max(peak * 1f64.max(e.abs())))
}

/// Default step scale for [`pointwise_residual`].
pub const LOCAL_H_SCALE: f64 = 0.004;

/// Residual of `-ψ'' + Vψ = Eψ` at each of `points` using a five-point
/// stencil centred there with step `h_scale/√(1 + |V - E|)`, shrunk near
/// the ends of `[lo, hi]`. Normalized as in [`schrodinger_residual`] with
/// the peak of `|ψ|` over `points`.
pub fn pointwise_residual<F, G>(psi: F, v: G, energy: f64, points: &[f64], (lo, hi): (f64, f64), h_scale: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
    G: Fn(f64) -> Result<Complex64> + Sync,
{
    if !(h_scale > 0.0) || points.iter().any(|&x| !(x > lo && x < hi)) {
        return domain("pointwise residual: points must lie strictly inside the window");
    }
    let rows = points
        .par_iter()
        .map(|&x| {
            let vx = v(x)?;
            let p0 = psi(x)?;
            let h = (h_scale / (1.0 + (vx - energy).norm()).sqrt()).min((x - lo) / 2.5).min((hi - x) / 2.5);
            let d2 = (-psi(x - 2.0 * h)? + 16.0 * psi(x - h)? - 30.0 * p0 + 16.0 * psi(x + h)? - psi(x + 2.0 * h)?) / (12.0 * h * h);
            Ok(((-d2 + (vx - energy) * p0).norm(), p0.norm()))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let peak = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(worst / 1f64.max(peak * 1f64.max(energy.abs())))
}

#[derive(Debug, Clone, Serialize)]
pub struct InterlacingReport {
    pub holds: bool,
    pub re_zeros: Vec<f64>,
    pub im_zeros: Vec<f64>,
    pub note: Option<String>,
}

/// Sign changes of `f` between neighbouring samples that both lie in the
/// support set, located by linear interpolation.
fn zeros_in_support(x: &[f64], f: &[f64], support: &[bool]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..x.len().saturating_sub(1) {
        if !(support[i] && support[i + 1]) {
            continue;
        }
        let (a, b) = (f[i], f[i + 1]);
        if a == 0.0 {
            if i == 0 || f[i - 1] * b < 0.0 {
                out.push(x[i]);
            }
        } else if a * b < 0.0 {
            out.push(x[i] + (x[i + 1] - x[i]) * a / (a - b));
        }
    }
    out
}

/// Whether every open interval between consecutive zeros of `Re ψ`
/// contains a zero of `Im ψ`, looking only where `|ψ|` exceeds
/// `support_threshold` times its peak.
pub fn interlacing_check(state: &EigenState, support_threshold: f64) -> InterlacingReport {
    let x = state.field.grid.points();
    let peak = state.field.max_abs();
    let support: Vec<bool> = state.field.values.iter().map(|v| v.norm() > support_threshold * peak).collect();
    let re_zeros = zeros_in_support(x, &state.field.re(), &support);
    let im_zeros = zeros_in_support(x, &state.field.im(), &support);
    if state.field.values.iter().all(|v| v.im == 0.0) {
        return InterlacingReport { holds: true, re_zeros, im_zeros, note: Some("real state: Im psi vanishes identically".into()) };
    }
    if re_zeros.len() < 2 {
        return InterlacingReport { holds: true, re_zeros, im_zeros, note: Some("fewer than two zeros of Re psi".into()) };
    }
    let holds = re_zeros.windows(2).all(|w| im_zeros.iter().any(|&z| z > w[0] && z < w[1]));
    InterlacingReport { holds, re_zeros, im_zeros, note: None }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchedLevel {
    pub label: String,
    pub predicted: f64,
    pub multiplicity: usize,
    /// Eigenvalue on the coarse grid, if a Richardson pair was used.
    pub coarse: Option<Complex64>,
    pub computed: Complex64,
    pub abs_error: f64,
    pub imag: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub predicted: Vec<f64>,
    pub computed: Vec<Complex64>,
    pub abs_errors: Vec<f64>,
    pub max_imag: f64,
    pub levels: Vec<MatchedLevel>,
    pub unmatched_spurious_below_cutoff: Vec<Complex64>,
    pub cutoff: f64,
    pub tol_abs: f64,
    pub tol_imag: f64,
    pub pass: bool,
}

/// Injective nearest-value assignment of `targets` into `pool`, restricted
/// to pool entries with real part below `cutoff`. Returns the pool index
/// for each target.
fn assign(targets: &[f64], pool: &[Complex64], cutoff: f64) -> Vec<Option<usize>> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &t) in targets.iter().enumerate() {
        for (j, z) in pool.iter().enumerate() {
            if z.re < cutoff {
                pairs.push(((z - t).norm(), i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = vec![None; targets.len()];
    let mut used = vec![false; pool.len()];
    for (_, i, j) in pairs {
        if out[i].is_none() && !used[j] {
            out[i] = Some(j);
            used[j] = true;
        }
    }
    out
}

fn report(
    prediction: &SpectrumPrediction,
    matched: Vec<(Option<Complex64>, Option<Complex64>)>,
    spurious: Vec<Complex64>,
    cutoff: f64,
    tol_abs: f64,
    tol_imag: f64,
) -> SpectrumReport {
    let mut levels = Vec::new();
    for (lvl, (coarse, value)) in prediction.levels.iter().zip(matched) {
        let computed = value.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let abs_error = (computed.re - lvl.energy).abs();
        let imag = computed.im.abs();
        let ok = value.is_some() && abs_error <= tol_abs && imag <= tol_imag * 1f64.max(computed.re.abs());
        levels.push(MatchedLevel {
            label: lvl.label.clone(),
            predicted: lvl.energy,
            multiplicity: lvl.multiplicity,
            coarse,
            computed,
            abs_error,
            imag,
            ok,
        });
    }
    let pass = !levels.is_empty() && levels.iter().all(|l| l.ok);
    SpectrumReport {
        predicted: levels.iter().map(|l| l.predicted).collect(),
        computed: levels.iter().map(|l| l.computed).collect(),
        abs_errors: levels.iter().map(|l| l.abs_error).collect(),
        max_imag: levels.iter().map(|l| l.imag).fold(0.0, f64::max),
        levels,
        unmatched_spurious_below_cutoff: spurious,
        cutoff,
        tol_abs,
        tol_imag,
        pass,
    }
}

/// Targets repeated by multiplicity, with the owning level of each.
fn expanded(prediction: &SpectrumPrediction) -> (Vec<f64>, Vec<usize>) {
    let mut t = Vec::new();
    let mut owner = Vec::new();
    for (k, l) in prediction.levels.iter().enumerate() {
        for _ in 0..l.multiplicity.max(1) {
            t.push(l.energy);
            owner.push(k);
        }
    }
    (t, owner)
}

/// Per-level mean of the matched pool entries; `None` unless every copy of
/// the level found a partner. A defective double level splits by `O(h)`
/// under discretization while the mean of the pair keeps the `O(h²)` error.
fn level_means(pool: &[Complex64], idx: &[Option<usize>], owner: &[usize], levels: usize) -> Vec<Option<Complex64>> {
    let mut sum = vec![Complex64::default(); levels];
    let mut count = vec![0usize; levels];
    let mut missing = vec![false; levels];
    for (j, &k) in idx.iter().zip(owner) {
        match j {
            Some(j) => {
                sum[k] += pool[*j];
                count[k] += 1;
            }
            None => missing[k] = true,
        }
    }
    (0..levels)
        .map(|k| (!missing[k] && count[k] > 0).then(|| sum[k] / count[k] as f64))
        .collect()
}

/// Match predicted levels to computed eigenvalues below `cutoff`; pass iff
/// every level has a partner within `tol_abs` whose imaginary part is at
/// most `tol_imag·max(1, |Re E|)`. A level of multiplicity `m` takes `m` partners and is
/// judged on their mean.
pub fn spectrum_match(
    prediction: &SpectrumPrediction,
    computed: &[Complex64],
    tol_abs: f64,
    tol_imag: f64,
    cutoff: f64,
) -> SpectrumReport {
    let (targets, owner) = expanded(prediction);
    let idx = assign(&targets, computed, cutoff);
    let spurious = unmatched(computed, &idx, cutoff);
    let means = level_means(computed, &idx, &owner, prediction.levels.len());
    let matched = means.into_iter().map(|m| (None, m)).collect();
    report(prediction, matched, spurious, cutoff, tol_abs, tol_imag)
}

/// As [`spectrum_match`], extrapolating each level from its coarse (`h`)
/// and fine (`h/2`) partners before the tolerance test.
pub fn spectrum_match_richardson(
    prediction: &SpectrumPrediction,
    coarse: &[Complex64],
    fine: &[Complex64],
    tol_abs: f64,
    tol_imag: f64,
    cutoff: f64,
) -> SpectrumReport {
    let (targets, owner) = expanded(prediction);
    let n = prediction.levels.len();
    let ic = assign(&targets, coarse, cutoff);
    let iff = assign(&targets, fine, cutoff);
    let spurious = unmatched(fine, &iff, cutoff);
    let mc = level_means(coarse, &ic, &owner, n);
    let mf = level_means(fine, &iff, &owner, n);
    let matched = mc
        .into_iter()
        .zip(mf)
        .map(|(c, f)| match (c, f) {
            (Some(c), Some(f)) => (Some(c), Some(richardson(c, f))),
            (None, f) => (None, f),
            (Some(_), None) => (None, None),
        })
        .collect();
    report(prediction, matched, spurious, cutoff, tol_abs, tol_imag)
}

fn unmatched(pool: &[Complex64], idx: &[Option<usize>], cutoff: f64) -> Vec<Complex64> {
    let used: Vec<usize> = idx.iter().flatten().copied().collect();
    pool.iter()
        .enumerate()
        .filter(|(j, z)| z.re < cutoff && !used.contains(j))
        .map(|(_, z)| *z)
        .collect()
}
