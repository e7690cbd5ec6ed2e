//! Small numeric helpers shared across modules.

/// Neumaier-compensated running sum. Accumulation order is fixed by the
/// caller, which keeps parallel reductions bit-reproducible when partial
/// sums are combined in index order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_total(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Trapezoid quadrature weight (in units of the step) for sample k of n.
pub fn trapezoid_weight(k: usize, n: usize) -> f64 {
    if k == 0 || k == n - 1 {
        0.5
    } else {
        1.0
    }
}

/// Mean of the piecewise-linear interpolant of (ts, vs) over [a, b].
/// Partial cells at the interval ends are integrated exactly.
pub fn interval_mean(ts: &[f64], vs: &[f64], a: f64, b: f64) -> f64 {
    assert_eq!(ts.len(), vs.len());
    assert!(b > a);
    let mut integral = 0.0;
    for k in 0..ts.len() - 1 {
        let (t0, t1) = (ts[k], ts[k + 1]);
        let lo = t0.max(a);
        let hi = t1.min(b);
        if hi <= lo {
            continue;
        }
        let slope = (vs[k + 1] - vs[k]) / (t1 - t0);
        let mid = 0.5 * (lo + hi);
        let v_mid = vs[k] + slope * (mid - t0);
        integral += v_mid * (hi - lo);
    }
    integral / (b - a)
}

/// C1 ramp equal to 1 for s <= 0 and 0 for s >= 1.
pub fn smoothstep_down(s: f64) -> f64 {
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        1.0 - s * s * (3.0 - 2.0 * s)
    }
}

/// Solves a tridiagonal system in place via the Thomas algorithm.
/// `lower[k]` couples row k to k-1, `upper[k]` couples row k to k+1.
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Vec<f64> {
    let n = diag.len();
    assert!(n > 0);
    assert_eq!(lower.len(), n);
    assert_eq!(upper.len(), n);
    assert_eq!(rhs.len(), n);
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for k in 1..n {
        let denom = diag[k] - lower[k] * c[k - 1];
        c[k] = upper[k] / denom;
        d[k] = (rhs[k] - lower[k] * d[k - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for k in (0..n - 1).rev() {
        x[k] = d[k] - c[k] * x[k + 1];
    }
    x
}

/// Quadratic extrapolation of samples at positions 1, 2, 3 (in units of the
/// step away from the target) back to position 0.
pub fn extrapolate_quadratic(v1: f64, v2: f64, v3: f64) -> f64 {
    3.0 * v1 - 3.0 * v2 + v3
}
