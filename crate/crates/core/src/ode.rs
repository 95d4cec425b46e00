//! Adaptive Dormand-Prince 5(4) integration of a pair of solutions of
//! `u'' = q(x) u`, with quintic Hermite dense output.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 2_000_000;

/// State `[u, u', v, v']`.
pub type PairState = [f64; 4];

#[derive(Debug, Clone, Copy)]
struct Node {
    x: f64,
    y: PairState,
    // u'', v'' and u''', v'''
    d2: [f64; 2],
    d3: [f64; 2],
}

/// Integration result: step nodes sorted by abscissa, plus the range that
/// was actually reached (shorter than requested if the step size underflowed).
#[derive(Debug, Clone)]
pub struct DenseTable {
    nodes: Vec<Node>,
    pub truncated: bool,
}

fn rhs<Q: Fn(f64) -> f64>(q: &Q, x: f64, y: &PairState) -> PairState {
    let qx = q(x);
    [y[1], qx * y[0], y[3], qx * y[2]]
}

fn make_node<Q, D>(q: &Q, dq: &D, x: f64, y: PairState) -> Node
where
    Q: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (qx, dqx) = (q(x), dq(x));
    Node {
        x,
        y,
        d2: [qx * y[0], qx * y[2]],
        d3: [dqx * y[0] + qx * y[1], dqx * y[2] + qx * y[3]],
    }
}

/// Per-component error scale; a solution's value and slope share one scale
/// through the local wave number so zero crossings do not stall the stepper.
fn scales(q: f64, y0: &PairState, y1: &PairState, rtol: f64) -> PairState {
    let k = q.abs().sqrt().max(1.0);
    let mut s = [0.0; 4];
    for j in [0, 2] {
        let mag = (y0[j].abs() + y0[j + 1].abs() / k).max(y1[j].abs() + y1[j + 1].abs() / k);
        s[j] = rtol * mag.max(f64::MIN_POSITIVE);
        s[j + 1] = rtol * (mag * k).max(f64::MIN_POSITIVE);
    }
    s
}

/// Integrate from `x0` outward to `lo` and `hi`.
pub fn integrate_pair<Q, D>(q: Q, dq: D, x0: f64, y0: PairState, lo: f64, hi: f64, rtol: f64) -> Result<DenseTable>
where
    Q: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(lo <= x0 && x0 <= hi) {
        return Err(Error::Domain(format!("x0 = {x0} outside [{lo}, {hi}]")));
    }
    let (mut left, left_trunc) = sweep(&q, &dq, x0, y0, lo, rtol)?;
    let (right, right_trunc) = sweep(&q, &dq, x0, y0, hi, rtol)?;
    left.reverse();
    left.pop(); // x0 appears in both sweeps
    left.extend(right);
    Ok(DenseTable { nodes: left, truncated: left_trunc || right_trunc })
}

fn sweep<Q, D>(q: &Q, dq: &D, x0: f64, y0: PairState, target: f64, rtol: f64) -> Result<(Vec<Node>, bool)>
where
    Q: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut nodes = vec![make_node(q, dq, x0, y0)];
    if target == x0 {
        return Ok((nodes, false));
    }
    let dir = (target - x0).signum();
    let span = (target - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut h = dir * (span * 1e-3).min(1e-2 / q(x0).abs().sqrt().max(1.0));
    let mut k = [[0.0; 4]; 7];
    k[0] = rhs(q, x, &y);
    for _ in 0..MAX_STEPS {
        if (target - x) * dir <= 0.0 {
            return Ok((nodes, false));
        }
        if (x + h - target) * dir > 0.0 {
            h = target - x;
        }
        if h.abs() < 1e-13 * x.abs().max(1.0) {
            return Ok((nodes, true));
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..4 {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = rhs(q, x + C[s] * h, &ys);
        }
        let mut ynew = y;
        let mut err = [0.0; 4];
        for s in 0..7 {
            for i in 0..4 {
                ynew[i] += h * B[s] * k[s][i];
                err[i] += h * E[s] * k[s][i];
            }
        }
        if ynew.iter().any(|v| !v.is_finite()) {
            h *= 0.25;
            continue;
        }
        let sc = scales(q(x + h), &y, &ynew, rtol);
        let norm = (err.iter().zip(sc.iter()).map(|(e, s)| (e / s).powi(2)).sum::<f64>() / 4.0).sqrt();
        if norm <= 1.0 {
            x += h;
            y = ynew;
            nodes.push(make_node(q, dq, x, y));
            k[0] = k[6];
            let grow = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
            h *= grow;
        } else {
            h *= (0.9 * norm.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    Err(Error::Numerical(format!("ODE integration exceeded {MAX_STEPS} steps")))
}

#[allow(clippy::too_many_arguments)]
fn quintic(t: f64, h: f64, f0: f64, d0: f64, s0: f64, f1: f64, d1: f64, s1: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    let h3 = 0.5 * (t3 - 2.0 * t4 + t5);
    let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    f0 * h0 + h * d0 * h1 + h * h * s0 * h2 + h * h * s1 * h3 + h * d1 * h4 + f1 * h5
}

impl DenseTable {
    pub fn range(&self) -> (f64, f64) {
        (self.nodes[0].x, self.nodes[self.nodes.len() - 1].x)
    }

    pub fn steps(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    /// Interpolated `[u, u', v, v']` at `x`.
    pub fn eval(&self, x: f64) -> Result<PairState> {
        let (lo, hi) = self.range();
        if !(x >= lo && x <= hi) {
            return Err(Error::Domain(format!("x = {x} outside integrated range [{lo}, {hi}]")));
        }
        let idx = self.nodes.partition_point(|n| n.x <= x);
        let i = idx.clamp(1, self.nodes.len() - 1) - 1;
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let h = b.x - a.x;
        let t = if h == 0.0 { 0.0 } else { (x - a.x) / h };
        let mut out = [0.0; 4];
        for (s, j) in [(0usize, 0usize), (1, 2)] {
            out[j] = quintic(t, h, a.y[j], a.y[j + 1], a.d2[s], b.y[j], b.y[j + 1], b.d2[s]);
            out[j + 1] = quintic(t, h, a.y[j + 1], a.d2[s], a.d3[s], b.y[j + 1], b.d2[s], b.d3[s]);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_solutions_cos_sin() {
        // u'' = -u: u = cos, v = sin
        let t = integrate_pair(|_| -1.0, |_| 0.0, 0.0, [1.0, 0.0, 0.0, 1.0], -10.0, 10.0, 1e-12).unwrap();
        assert!(!t.truncated);
        for x in [-9.7, -3.3, 0.0, 0.123, 4.56, 10.0] {
            let s = t.eval(x).unwrap();
            assert!((s[0] - f64::cos(x)).abs() < 1e-9, "x = {x}");
            assert!((s[1] + f64::sin(x)).abs() < 1e-9);
            assert!((s[2] - f64::sin(x)).abs() < 1e-9);
            assert!((s[3] - f64::cos(x)).abs() < 1e-9);
        }
        assert!(t.eval(10.5).is_err());
    }

    #[test]
    fn growing_solutions_keep_relative_accuracy() {
        // u'' = 4u: cosh(2x), sinh(2x)/2 * 2
        let t = integrate_pair(|_| 4.0, |_| 0.0, 0.0, [1.0, 0.0, 0.0, 2.0], -15.0, 15.0, 1e-13).unwrap();
        for x in [-14.2, -1.0, 7.7, 15.0] {
            let s = t.eval(x).unwrap();
            let c = f64::cosh(2.0 * x);
            let sh = f64::sinh(2.0 * x);
            assert!(((s[0] - c) / c).abs() < 1e-10);
            assert!(((s[2] - sh) / sh).abs() < 1e-10);
        }
    }
}
