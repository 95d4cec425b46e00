//! Complex eigenvalue solvers: dense Hessenberg + shifted QR, a tridiagonal
//! QL fast path, inverse-iteration refinement, and a characteristic
//! polynomial root finder used as an independent check at small sizes.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

const EPS: f64 = f64::EPSILON;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default size cap of the dense path.
pub const DENSE_CAP: usize = 1500;

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return domain("matrix rows must all have length n");
        }
        Ok(Self { n, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    fn at(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// General tridiagonal matrix: `sub[i] = T[i+1][i]`, `sup[i] = T[i][i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<Complex64>,
    pub sub: Vec<Complex64>,
    pub sup: Vec<Complex64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<Complex64>, sub: Vec<Complex64>, sup: Vec<Complex64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n {
            return domain("tridiagonal bands have inconsistent lengths");
        }
        Ok(Self { diag, sub, sup })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, self.diag[i]);
            if i + 1 < n {
                m.set(i + 1, i, self.sub[i]);
                m.set(i, i + 1, self.sup[i]);
            }
        }
        m
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].norm();
                if i > 0 {
                    s += self.sub[i - 1].norm();
                }
                if i + 1 < n {
                    s += self.sup[i].norm();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// `T x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.sup[i] * x[i + 1];
                }
                s
            })
            .collect()
    }
}

/// All eigenvalues of a dense matrix: Householder reduction to Hessenberg
/// form, then single-shift complex QR with Wilkinson shifts and deflation.
pub fn eig_dense(m: &DenseMatrix) -> Result<Vec<Complex64>> {
    let n = m.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > DENSE_CAP {
        return domain(format!("dense eigensolver capped at n = {DENSE_CAP} (got {n})"));
    }
    let mut h = m.clone();
    hessenberg(&mut h);
    hessenberg_qr(h)
}

fn hessenberg(a: &mut DenseMatrix) {
    let n = a.dim();
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let xnorm = (k + 1..n).map(|i| a.get(i, k).norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = a.get(k + 1, k);
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        for i in k + 1..n {
            v[i] = a.get(i, k);
        }
        v[k + 1] -= alpha;
        let vnorm = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in v.iter_mut().take(n).skip(k + 1) {
            *vi /= vnorm;
        }
        // A ← (I - 2vv*) A
        for j in k..n {
            let s: Complex64 = (k + 1..n).map(|i| v[i].conj() * a.get(i, j)).sum();
            for i in k + 1..n {
                let vi = v[i];
                *a.at(i, j) -= 2.0 * vi * s;
            }
        }
        // A ← A (I - 2vv*)
        for i in 0..n {
            let s: Complex64 = (k + 1..n).map(|j| a.get(i, j) * v[j]).sum();
            for j in k + 1..n {
                let vj = v[j];
                *a.at(i, j) -= 2.0 * s * vj.conj();
            }
        }
        for i in k + 2..n {
            a.set(i, k, ZERO);
        }
    }
}

/// `(c, s)` with real `c` such that `[[c, s], [-s̄, c]] [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn hessenberg_qr(mut h: DenseMatrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let mut eig = vec![ZERO; n];
    let max_iter = 30 * n.max(1);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            eig[0] = h.get(0, 0);
            break;
        }
        // Locate the active unreduced block [l, hi].
        let mut l = hi;
        while l > 0 {
            let sub = h.get(l, l - 1).norm();
            let mut diag = h.get(l - 1, l - 1).norm() + h.get(l, l).norm();
            if diag == 0.0 {
                diag = 1.0;
            }
            if sub <= EPS * diag {
                h.set(l, l - 1, ZERO);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h.get(hi, hi);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iter {
            let partial = eig[hi + 1..].to_vec();
            return Err(Error::EigenNotConverged { partial });
        }
        let a = h.get(hi - 1, hi - 1);
        let b = h.get(hi - 1, hi);
        let c = h.get(hi, hi - 1);
        let d = h.get(hi, hi);
        let mut mu = if since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            d + 0.75 * h.get(hi, hi - 1).norm() * Complex64::new(1.0, 0.5)
        } else {
            let half = 0.5 * (a - d);
            let disc = (half * half + b * c).sqrt();
            let m1 = 0.5 * (a + d) + disc;
            let m2 = 0.5 * (a + d) - disc;
            if (m1 - d).norm() < (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        if !mu.is_finite() {
            mu = d;
        }
        for i in l..=hi {
            *h.at(i, i) -= mu;
        }
        rots.clear();
        for k in l..hi {
            let (cs, sn) = givens(h.get(k, k), h.get(k + 1, k));
            for j in k..=hi {
                let (x, y) = (h.get(k, j), h.get(k + 1, j));
                h.set(k, j, cs * x + sn * y);
                h.set(k + 1, j, -sn.conj() * x + cs * y);
            }
            h.set(k + 1, k, ZERO);
            rots.push((cs, sn));
        }
        for (idx, &(cs, sn)) in rots.iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1).min(hi) {
                let (x, y) = (h.get(i, k), h.get(i, k + 1));
                h.set(i, k, x * cs + y * sn.conj());
                h.set(i, k + 1, -x * sn + y * cs);
            }
        }
        for i in l..=hi {
            *h.at(i, i) += mu;
        }
    }
    Ok(eig)
}

/// Eigenvalues of a tridiagonal matrix by implicit QL on its complex
/// symmetric form (off-diagonals `√(sub·sup)`). Fails with
/// [`Error::Numerical`] if a complex rotation degenerates; callers fall back
/// to [`eig_dense`].
pub fn eig_tridiagonal(t: &Tridiagonal) -> Result<Vec<Complex64>> {
    let n = t.dim();
    let mut d = t.diag.clone();
    let mut e: Vec<Complex64> = t.sub.iter().zip(&t.sup).map(|(a, b)| (a * b).sqrt()).collect();
    e.push(ZERO);
    let max_iter = 30 * n;
    let mut total = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].norm() + d[m + 1].norm();
                if e[m].norm() <= EPS * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            total += 1;
            if total > max_iter {
                return Err(Error::EigenNotConverged { partial: d[..l].to_vec() });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + ONE).sqrt();
            if (g - r).norm() > (g + r).norm() {
                r = -r;
            }
            g = d[m] - d[l] + e[l] / (g + r);
            let (mut s, mut c, mut p) = (ONE, ONE, ZERO);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                let scale = f.norm() + g.norm();
                e[i + 1] = r;
                if r.norm() == 0.0 || scale == 0.0 {
                    d[i + 1] -= p;
                    e[m] = ZERO;
                    underflow = true;
                    break;
                }
                if r.norm() < 1e-8 * scale {
                    return Err(Error::Numerical("complex-symmetric QL rotation degenerated".into()));
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = ZERO;
        }
    }
    if d.iter().any(|z| !z.is_finite()) {
        return Err(Error::Numerical("tridiagonal QL produced non-finite values".into()));
    }
    Ok(d)
}

/// Tridiagonal eigenvalues, fast path first and dense QR on failure.
pub fn eig_tridiagonal_robust(t: &Tridiagonal) -> Result<Vec<Complex64>> {
    match eig_tridiagonal(t) {
        Ok(v) => Ok(v),
        Err(_) => eig_dense(&t.to_dense()),
    }
}

/// Solve `(T - μI) x = b` by Gaussian elimination with partial pivoting
/// (the pivoted factor gains one extra superdiagonal).
fn solve_shifted(t: &Tridiagonal, mu: Complex64, b: &[Complex64]) -> Vec<Complex64> {
    let n = t.dim();
    let mut dl: Vec<Complex64> = t.sub.clone();
    let mut d: Vec<Complex64> = t.diag.iter().map(|&z| z - mu).collect();
    let mut du: Vec<Complex64> = t.sup.clone();
    let mut du2 = vec![ZERO; n.saturating_sub(2)];
    let mut x = b.to_vec();
    let tiny = EPS * t.norm_inf().max(f64::MIN_POSITIVE);
    for i in 0..n.saturating_sub(1) {
        if d[i].norm() >= dl[i].norm() {
            let piv = if d[i].norm() == 0.0 { Complex64::new(tiny, 0.0) } else { d[i] };
            d[i] = piv;
            let f = dl[i] / piv;
            dl[i] = f;
            d[i + 1] -= f * du[i];
            x[i + 1] = x[i + 1] - f * x[i];
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = f;
            let tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - f * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du[i + 1];
            }
            x.swap(i, i + 1);
            x[i + 1] = x[i + 1] - f * x[i];
        }
    }
    if d[n - 1].norm() == 0.0 {
        d[n - 1] = Complex64::new(tiny, 0.0);
    }
    x[n - 1] /= d[n - 1];
    if n >= 2 {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    x
}

/// Inverse iteration with a complex-symmetric Rayleigh quotient
/// `xᵀTx / xᵀx`. Returns the refined eigenvalue and `‖Tx - μx‖ / ‖T‖`.
pub fn refine_eigenvalue(t: &Tridiagonal, guess: Complex64, iterations: usize) -> (Complex64, f64) {
    let n = t.dim();
    let norm = t.norm_inf().max(f64::MIN_POSITIVE);
    let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + (i % 7) as f64 * 0.1, 0.0)).collect();
    let mut mu = guess;
    let mut best = (guess, f64::INFINITY);
    for _ in 0..iterations.max(1) {
        let y = solve_shifted(t, mu, &x);
        let s = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(s > 0.0) || !s.is_finite() {
            break;
        }
        x = y.into_iter().map(|z| z / s).collect();
        let tx = t.apply(&x);
        let num: Complex64 = x.iter().zip(&tx).map(|(a, b)| a * b).sum();
        let den: Complex64 = x.iter().map(|a| a * a).sum();
        let cand = if den.norm() > 1e-12 { num / den } else { mu };
        let res = tx.iter().zip(&x).map(|(a, b)| (a - cand * b).norm_sqr()).sum::<f64>().sqrt() / norm;
        if res < best.1 {
            best = (cand, res);
        }
        if res < 1e-13 {
            break;
        }
        mu = cand;
    }
    best
}

/// `(p(z), p'(z))` for `p(z) = det(T - zI)` by the three-term recurrence.
pub fn charpoly(t: &Tridiagonal, z: Complex64) -> (Complex64, Complex64) {
    let (mut p0, mut dp0) = (ONE, ZERO);
    let (mut p1, mut dp1) = (t.diag[0] - z, -ONE);
    for k in 1..t.dim() {
        let w = t.sub[k - 1] * t.sup[k - 1];
        let dk = t.diag[k] - z;
        let p2 = dk * p1 - w * p0;
        let dp2 = -p1 + dk * dp1 - w * dp0;
        (p0, dp0, p1, dp1) = (p1, dp1, p2, dp2);
    }
    (p1, dp1)
}

/// Newton correction `p(z)/p'(z)` from the ratios `p_k/p_{k-1}` and the
/// log-derivatives, which stay finite where `p` itself overflows.
pub fn charpoly_newton(t: &Tridiagonal, z: Complex64) -> Complex64 {
    // f = p_k/p_{k-1}, g = p_k'/p_k
    let tiny = Complex64::new(f64::MIN_POSITIVE.sqrt(), 0.0);
    let nudge = |f: Complex64| if f.norm() == 0.0 { tiny } else { f };
    let mut f = nudge(t.diag[0] - z);
    let mut g = -f.inv();
    let mut g_prev = ZERO;
    for k in 1..t.dim() {
        let w = t.sub[k - 1] * t.sup[k - 1];
        let dk = t.diag[k] - z;
        let f_new = nudge(dk - w / f);
        let g_new = (-ONE + dk * g - w * g_prev / f) / f_new;
        (f, g_prev, g) = (f_new, g, g_new);
    }
    g.inv()
}

/// Roots of the characteristic polynomial by Aberth-Ehrlich iteration,
/// independent of any matrix factorization. Intended for `n ≤ 50`.
pub fn charpoly_roots(t: &Tridiagonal) -> Result<Vec<Complex64>> {
    let n = t.dim();
    let radius = t.norm_inf().max(1e-3);
    let centre: Complex64 = t.diag.iter().sum::<Complex64>() / n as f64;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            centre + radius * Complex64::new(th.cos(), th.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0_f64;
        for k in 0..n {
            let w = charpoly_newton(t, z[k]);
            if w.norm() == 0.0 {
                continue;
            }
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = w / (ONE - w * s);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / radius);
            } else {
                moved = f64::INFINITY;
            }
        }
        // steps stall at rounding, ~1e-14 of the spectral radius
        if moved < 1e-13 {
            return Ok(z);
        }
    }
    Err(Error::Numerical("Aberth iteration did not converge".into()))
}

/// Largest distance from an element of `a` to its partner in `b` under a
/// greedy nearest matching (both lists the same length).
pub fn matched_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst = 0.0_f64;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut done = vec![false; a.len()];
    for (dist, i, j) in pairs {
        if !done[i] && !used[j] {
            done[i] = true;
            used[j] = true;
            worst = worst.max(dist);
        }
    }
    if done.iter().any(|d| !d) {
        return f64::INFINITY;
    }
    worst
}
