//! The Ermakov α-function `α = √Q`, `Q = a v² + b v u_p + c u_p²`, built
//! from a seed pair and the invariant `J`, plus the `J = 0` complex branch
//! kept for verification.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::grid::Grid;
use crate::quad::adaptive_simpson_complex;
use crate::seeds::{SeedPair, SeedSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErmakovCoeffs {
    pub lambda: f64,
    pub big_j: f64,
    pub i0: f64,
    pub omega0: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `a = J/ω₀²`, `b = 2I₀/ω₀`, `c = (λ² + I₀²)/J`. Only `J > 0` (real α) is
/// supported.
pub fn make_coeffs(lambda: f64, big_j: f64, i0: f64, omega0: f64) -> Result<ErmakovCoeffs> {
    if ![lambda, big_j, i0, omega0].iter().all(|v| v.is_finite()) {
        return domain("Ermakov coefficients must be finite");
    }
    if !(big_j > 0.0) {
        return domain(format!("the invariant J must be positive, got {big_j}"));
    }
    if omega0 == 0.0 {
        return domain("the seed Wronskian omega0 must be nonzero");
    }
    Ok(ErmakovCoeffs {
        lambda,
        big_j,
        i0,
        omega0,
        a: big_j / (omega0 * omega0),
        b: 2.0 * i0 / omega0,
        c: (lambda * lambda + i0 * i0) / big_j,
    })
}

impl ErmakovCoeffs {
    /// `|4ac - b² - 4(λ/ω₀)²| / max(1, 4ac)`.
    pub fn identity_residual(&self) -> f64 {
        let four_ac = 4.0 * self.a * self.c;
        let lo = self.lambda / self.omega0;
        (four_ac - self.b * self.b - 4.0 * lo * lo).abs() / four_ac.max(1.0)
    }

    /// `γ_M = |I₀/J|`, the real-family parameter reached at `λ = 0`.
    pub fn gamma_m(&self) -> f64 {
        (self.i0 / self.big_j).abs()
    }
}

/// `Q` and the quantities the Darboux formulas need, all divided by a
/// common power of `s = max(|u_p|, |v|)` so they stay finite where the seeds
/// are huge. `q_scaled = Q/s²`; the ratios are scale free.
#[derive(Debug, Clone, Copy)]
pub struct QSample {
    pub seed: SeedSample,
    pub scale: f64,
    pub q_scaled: f64,
    /// `Q'/Q`.
    pub dlog_q: f64,
    /// `K/Q` with `K = a v'² + b u_p'v' + c u_p'²`.
    pub k_over_q: f64,
    /// `λ/Q`.
    pub lambda_over_q: f64,
    /// `V₀ - ε` at the sample.
    pub qv: f64,
}

impl QSample {
    /// `α`; overflows to infinity only if `s` itself does.
    pub fn alpha(&self) -> f64 {
        self.scale * self.q_scaled.sqrt()
    }

    /// `(ln α)' = Q'/(2Q)`.
    pub fn dlog_alpha(&self) -> f64 {
        0.5 * self.dlog_q
    }

    /// `(ln α)'' = K/Q + (V₀ - ε) - (Q'/Q)²/2`, using `Q'' = 2K + 2(V₀-ε)Q`.
    pub fn d2log_alpha(&self) -> f64 {
        self.k_over_q + self.qv - 0.5 * self.dlog_q * self.dlog_q
    }
}

/// `α = +√Q` over a seed pair.
#[derive(Debug, Clone)]
pub struct AlphaFunction {
    pub pair: SeedPair,
    pub coeffs: ErmakovCoeffs,
}

pub fn make_alpha(pair: SeedPair, coeffs: ErmakovCoeffs) -> Result<AlphaFunction> {
    if (coeffs.omega0 - pair.omega0).abs() > 1e-12 * pair.omega0.abs() {
        return domain(format!(
            "coefficients built for omega0 = {} but the pair has {}",
            coeffs.omega0, pair.omega0
        ));
    }
    Ok(AlphaFunction { pair, coeffs })
}

impl AlphaFunction {
    pub fn lambda(&self) -> f64 {
        self.coeffs.lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.pair.epsilon
    }

    /// Scaled `Q` and its log-derivatives at `x`; `Q ≤ 0` is reported as a
    /// singularity.
    pub fn q_sample(&self, x: f64) -> Result<QSample> {
        let seed = self.pair.eval(x)?;
        let ErmakovCoeffs { a, lambda, big_j, i0, omega0, .. } = self.coeffs;
        let s = seed.up.abs().max(seed.v.abs());
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Numerical(format!("seed pair not representable at x = {x}")));
        }
        let (u, du, v, dv) = (seed.up / s, seed.dup / s, seed.v / s, seed.dv / s);
        // completed square Q = a L² + m u², L = v + βu: no cancellation
        // between large terms when α is small next to the seeds
        let beta = i0 * omega0 / big_j;
        let m = lambda * lambda / big_j;
        let (l, dl) = (v + beta * u, dv + beta * du);
        let q = a * l * l + m * u * u;
        if !(q > 0.0) {
            return Err(Error::Singular { x, what: "alpha vanishes (Q <= 0)".into() });
        }
        let dq = 2.0 * (a * l * dl + m * u * du);
        let k = a * dl * dl + m * du * du;
        Ok(QSample {
            seed,
            scale: s,
            q_scaled: q,
            dlog_q: dq / q,
            k_over_q: k / q,
            lambda_over_q: lambda / s / s / q,
            qv: self.pair.q(x),
        })
    }

    /// `(α, α', α'')`, derivatives assembled through `Q`.
    pub fn eval(&self, x: f64) -> Result<(f64, f64, f64)> {
        let s = self.q_sample(x)?;
        let al = s.alpha();
        let d1 = s.dlog_alpha();
        Ok((al, al * d1, al * (s.d2log_alpha() + d1 * d1)))
    }

    /// `Q/(a v² + |b v u_p| + c u_p²)`, a scale-free positivity margin.
    pub fn q_margin(&self, x: f64) -> Result<f64> {
        let s = self.pair.eval(x)?;
        let ErmakovCoeffs { a, b, c, .. } = self.coeffs;
        let m = s.up.abs().max(s.v.abs());
        let (u, v) = (s.up / m, s.v / m);
        let (t1, t2, t3) = (a * v * v, b * v * u, c * u * u);
        Ok((t1 + t2 + t3) / (t1 + t2.abs() + t3))
    }

    /// Smallest `q_margin` on the grid and where it occurs.
    pub fn min_q_margin(&self, grid: &Grid) -> Result<(f64, f64)> {
        let mut best = (f64::NAN, f64::INFINITY);
        for &x in grid.points() {
            let m = self.q_margin(x)?;
            if m < best.1 {
                best = (x, m);
            }
        }
        Ok(best)
    }

    /// Max of `|α'' - (V₀-ε)α - λ²/α³| / max(1, |α''|)`.
    ///
    /// Evaluated in units of `α`: `α''/α - (V₀-ε) - λ²/α⁴` compared with
    /// `max(1/α, |α''/α|)`.
    pub fn ermakov_residual(&self, grid: &Grid) -> Result<f64> {
        let mut worst = 0.0_f64;
        for &x in grid.points() {
            let s = self.q_sample(x)?;
            let d1 = s.dlog_alpha();
            let ratio = s.d2log_alpha() + d1 * d1; // α''/α
            let lq = s.lambda_over_q; // λ/Q = λ/α²
            let res = ratio - s.qv - lq * lq;
            let denom = (1.0 / s.alpha()).max(ratio.abs());
            worst = worst.max(res.abs() / denom);
        }
        Ok(worst)
    }

    /// Max over the grid of `|W²(u_p, α) + (λu_p/α)² - J| / (J + √ε·w²)`,
    /// where `w = |u_p α'| + |u_p' α|` bounds the products forming `W` and `ε`
    /// is machine epsilon. This is the relative deviation unless `W` is the
    /// small difference of products beyond `10⁴√J`, where rounding alone
    /// would swamp a plain relative measure.
    pub fn invariant_j_scan(&self, grid: &Grid) -> Result<f64> {
        let j = self.coeffs.big_j;
        let lambda = self.coeffs.lambda;
        let mut worst = 0.0_f64;
        for &x in grid.points() {
            let s = self.q_sample(x)?;
            let al = s.alpha();
            let (u, du) = (s.seed.up, s.seed.dup);
            let da = al * s.dlog_alpha();
            let w = u * da - du * al;
            let wscale = (u * da).abs() + (du * al).abs();
            let lu = lambda * u / al;
            let dev = (w * w + lu * lu - j).abs() / (j + f64::EPSILON.sqrt() * wscale * wscale);
            worst = worst.max(dev);
        }
        Ok(worst)
    }
}

/// The `J = 0` branch `α₀² = s·i(2λ/ω₀) v u_p + c_α u_p²`, `s = ±1`.
#[derive(Debug, Clone)]
pub struct JZeroBranch {
    pub pair: SeedPair,
    pub lambda: f64,
    pub c_alpha: Complex64,
    pub sign: f64,
}

pub fn j_zero_branch(pair: SeedPair, lambda: f64, c_alpha: Complex64, sign: f64) -> Result<JZeroBranch> {
    if lambda == 0.0 {
        return domain("the J = 0 branch needs lambda != 0");
    }
    if sign.abs() != 1.0 {
        return domain("sign must be +1 or -1");
    }
    Ok(JZeroBranch { pair, lambda, c_alpha, sign })
}

impl JZeroBranch {
    /// `(α₀², (α₀²)')`.
    pub fn alpha0_sq(&self, x: f64) -> Result<(Complex64, Complex64)> {
        let s = self.pair.eval(x)?;
        let coef = Complex64::new(0.0, self.sign * 2.0 * self.lambda / self.pair.omega0);
        let val = coef * s.v * s.up + self.c_alpha * s.up * s.up;
        let der = coef * (s.dv * s.up + s.v * s.dup) + self.c_alpha * 2.0 * s.up * s.dup;
        Ok((val, der))
    }

    /// Pointwise `|W(u_p, α₀) - s·iλu_p/α₀|` relative to `|W| + |λu_p/α₀|`.
    pub fn wronskian_relation_residual(&self, x: f64) -> Result<f64> {
        let s = self.pair.eval(x)?;
        let (a2, da2) = self.alpha0_sq(x)?;
        let a0 = a2.sqrt();
        let da0 = da2 / (2.0 * a0);
        let w = s.up * da0 - s.dup * a0;
        let rhs = Complex64::new(0.0, self.sign * self.lambda) * s.up / a0;
        Ok((w - rhs).norm() / (w.norm() + rhs.norm()).max(f64::MIN_POSITIVE))
    }

    /// `u_p / (α₀ exp[-s·iλ ∫_{x_ref}^x α₀⁻²])` at each point, with `α₀`
    /// continued along the points so the square-root branch does not jump.
    pub fn phase_ratios(&self, x_ref: f64, points: &[f64]) -> Result<Vec<Complex64>> {
        let mut prev: Option<Complex64> = None;
        let mut out = Vec::with_capacity(points.len());
        let mut last_x = x_ref;
        let mut integral = Complex64::new(0.0, 0.0);
        for &x in points {
            let inv_sq = |t: f64| self.alpha0_sq(t).map(|(a2, _)| a2.inv()).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            integral += adaptive_simpson_complex(inv_sq, last_x, x, 1e-12);
            last_x = x;
            let mut a0 = self.alpha0_sq(x)?.0.sqrt();
            if let Some(p) = prev {
                if (a0 - p).norm() > (a0 + p).norm() {
                    a0 = -a0;
                }
            }
            prev = Some(a0);
            let phase = (Complex64::new(0.0, -self.sign * self.lambda) * integral).exp();
            out.push(self.pair.eval(x)?.up / (a0 * phase));
        }
        if out.iter().any(|z| !z.is_finite()) {
            return Err(Error::Numerical("J = 0 phase integral is not finite".into()));
        }
        Ok(out)
    }
}
