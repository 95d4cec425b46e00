//! Real special functions used by the analytic seed and bound-state
//! evaluators: log-gamma, Kummer's ₁F₁, Gauss ₂F₁ and associated Laguerre
//! polynomials.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Hard cap on summed series terms.
pub const MAX_TERMS: usize = 500;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Outcome of a truncated power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl SeriesResult {
    /// The value, or an error if the series was cut off.
    pub fn value_or_err(self, function: &'static str, z: f64) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(crate::Error::SeriesNotConverged { function, terms: self.terms_used, z })
        }
    }
}

fn lanczos_sum(x: f64) -> f64 {
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// `ln Γ(x)` for `x > 0` (Lanczos approximation, g = 7).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma requires x > 0, got {x}"));
    }
    Ok(log_gamma_pos(x))
}

fn log_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx), sin(πx) > 0 on (0, 1/2).
        return (PI / (PI * x).sin()).ln() - log_gamma_pos(1.0 - x);
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Real Γ(x); `±inf` at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else if x > 171.0 {
        f64::INFINITY
    } else {
        log_gamma_pos(x).exp()
    }
}

/// 1/Γ(x), exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        (PI * x).sin() * gamma(1.0 - x) / PI
    } else {
        (-log_gamma_pos(x)).exp()
    }
}

/// Order of the terminating polynomial if `a` is a nonpositive integer.
fn termination_order(a: f64) -> Option<usize> {
    (is_nonpositive_integer(a) && a > -(MAX_TERMS as f64)).then(|| (-a) as usize)
}

/// Kummer's confluent hypergeometric function ₁F₁(a; c; z).
///
/// Terminates exactly when `a` is a nonpositive integer. For negative `z`
/// the non-terminating case goes through Kummer's transformation
/// `₁F₁(a; c; z) = eᶻ ₁F₁(c - a; c; -z)` so every summed term has one sign
/// once past the first few.
pub fn kummer_1f1(a: f64, c: f64, z: f64) -> SeriesResult {
    if z == 0.0 || a == 0.0 {
        return SeriesResult { value: 1.0, terms_used: 1, converged: true };
    }
    if z < 0.0 && termination_order(a).is_none() {
        let inner = kummer_1f1(c - a, c, -z);
        return SeriesResult { value: z.exp() * inner.value, ..inner };
    }
    if z > ASYMPTOTIC_Z && termination_order(a).is_none() {
        let asym = kummer_asymptotic(a, c, z);
        if asym.converged {
            return asym;
        }
    }
    hyper_series(&[a], &[c], z)
}

/// Above this argument a non-terminating ₁F₁ is tried through its
/// large-argument expansion before the power series.
pub const ASYMPTOTIC_Z: f64 = 60.0;

/// Large positive `z`: `₁F₁ ~ Γ(c)/Γ(a) eᶻ z^{a-c} Σ (1-a)ₛ(c-a)ₛ / s! z^{-s}`.
/// The recessive companion is smaller by `e^{-z}` and is dropped, which is
/// safe because terminating cases never reach this branch. The sum is cut at
/// its smallest term and reported unconverged if that term is not negligible.
fn kummer_asymptotic(a: f64, c: f64, z: f64) -> SeriesResult {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut terms = 1;
    let mut converged = false;
    for s in 0..MAX_TERMS {
        let sf = s as f64;
        let next = term * (1.0 - a + sf) * (c - a + sf) / ((sf + 1.0) * z);
        if next.abs() > term.abs() && s > 0 {
            break;
        }
        term = next;
        sum += term;
        terms += 1;
        if term.abs() <= 1e-17 * sum.abs() {
            converged = true;
            break;
        }
    }
    let ga = gamma(a);
    let gc = gamma(c);
    let value = if ga.is_finite() && gc.is_finite() {
        let sign = (gc / ga).signum();
        sign * (z + (a - c) * z.ln() + gc.abs().ln() - ga.abs().ln()).exp() * sum
    } else {
        f64::NAN
    };
    SeriesResult { value, terms_used: terms, converged: converged && value.is_finite() }
}

/// Sum `Σ Π(aᵢ)ₖ / Π(cⱼ)ₖ zᵏ/k!`, terminating on a nonpositive integer
/// numerator parameter.
fn hyper_series(num: &[f64], den: &[f64], z: f64) -> SeriesResult {
    let stop = num.iter().filter_map(|&a| termination_order(a)).min();
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut terms = 1;
    for k in 0..MAX_TERMS {
        if let Some(order) = stop {
            if k >= order {
                return SeriesResult { value: sum, terms_used: terms, converged: true };
            }
        }
        let kf = k as f64;
        let mut ratio = z / (kf + 1.0);
        for &a in num {
            ratio *= a + kf;
        }
        for &c in den {
            let d = c + kf;
            if d == 0.0 {
                return SeriesResult { value: f64::NAN, terms_used: terms, converged: false };
            }
            ratio /= d;
        }
        term *= ratio;
        sum += term;
        terms += 1;
        if stop.is_none() {
            // Geometric bound on the tail from the next term ratio (or its
            // limit |z| for ₂F₁, whichever is larger).
            let kn = kf + 1.0;
            let mut next = (z / (kn + 1.0)).abs();
            for &a in num {
                next *= (a + kn).abs();
            }
            for &c in den {
                next /= (c + kn).abs();
            }
            if num.len() > den.len() {
                next = next.max(z.abs());
            }
            if next < 1.0 && term.abs() * next / (1.0 - next) <= 1e-16 * sum.abs() {
                return SeriesResult { value: sum, terms_used: terms, converged: true };
            }
            if !sum.is_finite() {
                break;
            }
        }
    }
    let converged = stop.is_some_and(|o| o < MAX_TERMS);
    SeriesResult { value: sum, terms_used: terms, converged }
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for `z < 1`.
///
/// Terminating polynomials are always summed directly, for any `z`. Negative
/// `z` is mapped into `(0, 1)` by the Pfaff transformation. Otherwise the power
/// series is used for `z ≤ 1/2` and the `1 - z` connection formula above
/// that; if `c - a - b` is an integer the connection formula degenerates
/// and its logarithmic limit is summed instead.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> SeriesResult {
    gauss_2f1_split(a, b, c, z, 1.0 - z)
}

/// As [`gauss_2f1`] with `w = 1 - z` supplied by the caller. Near `z = 1`
/// the subtraction loses digits that the `w^s` factor of the connection
/// formula then amplifies, so callers who know `w` exactly (e.g. `cos²`)
/// should pass it.
pub fn gauss_2f1_split(a: f64, b: f64, c: f64, z: f64, w: f64) -> SeriesResult {
    let terminating = termination_order(a).is_some() || termination_order(b).is_some();
    if terminating && z.is_finite() {
        return hyper_series(&[a, b], &[c], z);
    }
    if z < 0.0 && z.is_finite() && w > 0.0 {
        // ₂F₁(a,b;c;z) = w^{-a} ₂F₁(a, c-b; c; -z/w)
        let inner = gauss_2f1_split(a, c - b, c, -z / w, 1.0 / w);
        return SeriesResult { value: w.powf(-a) * inner.value, ..inner };
    }
    if !(0.0..1.0).contains(&z) {
        return SeriesResult { value: f64::NAN, terms_used: 0, converged: false };
    }
    if z == 0.0 {
        return SeriesResult { value: 1.0, terms_used: 1, converged: true };
    }
    if z <= 0.5 {
        return hyper_series(&[a, b], &[c], z);
    }
    let s = c - a - b;
    if (s - s.round()).abs() > 1e-9 {
        let f1 = hyper_series(&[a, b], &[a + b - c + 1.0], w);
        let f2 = hyper_series(&[c - a, c - b], &[s + 1.0], w);
        let g_c = gamma(c);
        let a1 = g_c * gamma(s) * rgamma(c - a) * rgamma(c - b);
        let a2 = g_c * gamma(-s) * rgamma(a) * rgamma(b);
        let mut value = 0.0;
        if a1 != 0.0 {
            value += a1 * f1.value;
        }
        if a2 != 0.0 {
            value += a2 * w.powf(s) * f2.value;
        }
        let converged = (a1 == 0.0 || f1.converged) && (a2 == 0.0 || f2.converged);
        return SeriesResult { value, terms_used: f1.terms_used + f2.terms_used, converged };
    }
    let m = s.round();
    if m >= 0.0 {
        gauss_log_case(a, b, m as usize, w)
    } else {
        // Euler: ₂F₁(a,b;c;z) = w^s ₂F₁(c-a, c-b; c; z), whose c-a-b is -s
        let r = gauss_log_case(c - a, c - b, (-m) as usize, w);
        SeriesResult { value: w.powf(m) * r.value, ..r }
    }
}

/// ₂F₁(a, b; a+b+m; 1-w) for integer `m ≥ 0` and `0 < w ≤ 1/2`, where the
/// connection formula has a logarithm:
/// `Γ(m)Γ(c)/(Γ(a+m)Γ(b+m)) Σ_{n<m} (a)ₙ(b)ₙ/(n!(1-m)ₙ) wⁿ
///  - (-w)^m Γ(c)/(Γ(a)Γ(b)) Σ (a+m)ₙ(b+m)ₙ/(n!(n+m)!) wⁿ
///    [ln w - ψ(n+1) - ψ(n+m+1) + ψ(a+n+m) + ψ(b+n+m)]`.
fn gauss_log_case(a: f64, b: f64, m: usize, w: f64) -> SeriesResult {
    let mf = m as f64;
    let c = a + b + mf;
    let g_c = gamma(c);
    let mut finite = 0.0;
    if m > 0 {
        let pre = gamma(mf) * g_c * rgamma(a + mf) * rgamma(b + mf);
        let mut term = 1.0;
        for n in 0..m {
            let nf = n as f64;
            finite += term;
            term *= (a + nf) * (b + nf) * w / ((nf + 1.0) * (1.0 - mf + nf));
        }
        finite *= pre;
    }
    let pre = -(-w).powi(m as i32) * g_c * rgamma(a) * rgamma(b);
    if pre == 0.0 {
        return SeriesResult { value: finite, terms_used: m, converged: finite.is_finite() };
    }
    let lw = w.ln();
    // t = (a+m)ₙ(b+m)ₙ wⁿ / (n!(n+m)!)
    let mut t = 1.0 / gamma(mf + 1.0);
    let (mut p1, mut p2) = (digamma(1.0), digamma(mf + 1.0));
    let (mut pa, mut pb) = (digamma(a + mf), digamma(b + mf));
    let mut sum = 0.0;
    let mut mag = 0.0;
    for n in 0..MAX_TERMS {
        let term = t * (lw - p1 - p2 + pa + pb);
        sum += term;
        mag += term.abs();
        let nf = n as f64;
        let (an, bn) = (a + mf + nf, b + mf + nf);
        let ratio = (an * bn / ((nf + 1.0) * (nf + mf + 1.0)) * w).abs();
        if ratio < 1.0 && term.abs() * ratio / (1.0 - ratio) <= 1e-17 * mag && n > 0 {
            let value = finite + pre * sum;
            return SeriesResult { value, terms_used: m + n + 1, converged: value.is_finite() };
        }
        t *= an * bn * w / ((nf + 1.0) * (nf + mf + 1.0));
        p1 += 1.0 / (nf + 1.0);
        p2 += 1.0 / (nf + mf + 1.0);
        pa += 1.0 / an;
        pb += 1.0 / bn;
    }
    SeriesResult { value: finite + pre * sum, terms_used: m + MAX_TERMS, converged: false }
}

/// Digamma ψ(x); NaN at the poles `x = 0, -1, -2, …`.
pub fn digamma(x: f64) -> f64 {
    if !x.is_finite() || (x <= 0.0 && x == x.round()) {
        return f64::NAN;
    }
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return digamma(1.0 - x) - pi / (pi * x).tan();
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 12.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    let tail = x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 / 132.0))));
    acc + x.ln() - 0.5 / x - tail
}

/// d/dz ₂F₁(a, b; c; z) = (ab/c) ₂F₁(a+1, b+1; c+1; z).
pub fn gauss_2f1_deriv(a: f64, b: f64, c: f64, z: f64) -> SeriesResult {
    gauss_2f1_deriv_split(a, b, c, z, 1.0 - z)
}

/// Derivative counterpart of [`gauss_2f1_split`].
pub fn gauss_2f1_deriv_split(a: f64, b: f64, c: f64, z: f64, w: f64) -> SeriesResult {
    if a == 0.0 || b == 0.0 {
        return SeriesResult { value: 0.0, terms_used: 1, converged: true };
    }
    let inner = gauss_2f1_split(a + 1.0, b + 1.0, c + 1.0, z, w);
    SeriesResult { value: a * b / c * inner.value, ..inner }
}

/// d/dz ₁F₁(a; c; z) = (a/c) ₁F₁(a+1; c+1; z).
pub fn kummer_1f1_deriv(a: f64, c: f64, z: f64) -> SeriesResult {
    if a == 0.0 {
        return SeriesResult { value: 0.0, terms_used: 1, converged: true };
    }
    let inner = kummer_1f1(a + 1.0, c + 1.0, z);
    SeriesResult { value: a / c * inner.value, ..inner }
}

/// Associated Laguerre polynomial L_n^{(α)}(y) by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, y: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - y;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - y) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// d/dy L_n^{(α)}(y) = -L_{n-1}^{(α+1)}(y).
pub fn laguerre_deriv(n: usize, alpha: f64, y: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        -laguerre(n - 1, alpha + 1.0, y)
    }
}
