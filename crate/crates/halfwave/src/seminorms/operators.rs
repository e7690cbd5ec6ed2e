//! Pointwise structural operators: the weighted boundary term, affine
//! cut-offs, and the symmetric / zero extensions of half-line samples.

use crate::error::{HalfwaveError, Result};
use crate::grid::{Grid1D, SampledFunction1D};
use crate::util::{interval_mean, CompensatedSum};

/// Weighted boundary integral `int u(t)^2 / t dt` over a half-line grid.
///
/// Nodes from t = dt on use the trapezoid rule; the first cell (0, dt) is
/// integrated by the midpoint rule at t = dt/2, which keeps the value finite
/// at any fixed resolution. A function with u(0) != 0 therefore shows its
/// logarithmic divergence as growth under dt-refinement (about ln 2 per
/// halving), not as an infinity in a single evaluation — divergence is a
/// verdict about a refinement sweep, never about one number.
pub fn hardy_term(u: &SampledFunction1D) -> Result<f64> {
    let g = u.grid();
    if !g.starts_at_zero() {
        return Err(HalfwaveError::InvalidGrid(
            "the boundary-weighted term requires a grid starting at t = 0".into(),
        ));
    }
    let v = u.values();
    let n = v.len();
    let dt = g.dt();
    let mut acc = CompensatedSum::new();
    // Midpoint rule on (0, dt): dt * u(dt/2)^2 / (dt/2).
    let u_mid = 0.5 * (v[0] + v[1]);
    acc.add(2.0 * u_mid * u_mid);
    for (k, &vk) in v.iter().enumerate().skip(1) {
        let w = if k == 1 || k == n - 1 { 0.5 } else { 1.0 };
        acc.add(w * dt * vk * vk / g.t(k));
    }
    Ok(acc.value())
}

/// Affine cut-off at scale n: multiplies `u - mean` by the plateau profile
/// that is one on (-n, n), zero outside (-2n, 2n), and affine in between,
/// where the mean is taken over I_n = (-2n, 2n).
pub fn cutoff(u: &SampledFunction1D, n_scale: f64) -> Result<SampledFunction1D> {
    if !(n_scale.is_finite() && n_scale > 0.0) {
        return Err(HalfwaveError::InvalidParameter(format!(
            "cut-off scale must be positive, got {n_scale}"
        )));
    }
    let g = u.grid();
    if g.t_min() > -2.0 * n_scale || g.t_max() < 2.0 * n_scale {
        return Err(HalfwaveError::ScaleTooLarge {
            scale: n_scale,
            t_min: g.t_min(),
            t_max: g.t_max(),
        });
    }
    let ts: Vec<f64> = (0..g.n()).map(|k| g.t(k)).collect();
    let mean = interval_mean(&ts, u.values(), -2.0 * n_scale, 2.0 * n_scale);
    let values = ts
        .iter()
        .zip(u.values())
        .map(|(&t, &v)| (2.0 - t.abs() / n_scale).clamp(0.0, 1.0) * (v - mean))
        .collect();
    SampledFunction1D::new(g, values)
}

/// Even reflection `u(|t|)` of half-line samples onto `[-t_max, t_max]`.
pub fn extend_symmetric(u: &SampledFunction1D) -> Result<SampledFunction1D> {
    let g = half_line_grid(u, "symmetric extension")?;
    let n = g.n();
    let full = Grid1D::new(-g.t_max(), g.t_max(), 2 * n - 1)?;
    let v = u.values();
    let values = (0..2 * n - 1)
        .map(|j| v[(j as isize - (n as isize - 1)).unsigned_abs()])
        .collect();
    SampledFunction1D::new(full, values)
}

/// Extension by zero: zero for t < 0, the given samples for t >= 0.
pub fn extend_zero(u: &SampledFunction1D) -> Result<SampledFunction1D> {
    let g = half_line_grid(u, "zero extension")?;
    let n = g.n();
    let full = Grid1D::new(-g.t_max(), g.t_max(), 2 * n - 1)?;
    let v = u.values();
    let values = (0..2 * n - 1)
        .map(|j| if j < n - 1 { 0.0 } else { v[j - (n - 1)] })
        .collect();
    SampledFunction1D::new(full, values)
}

fn half_line_grid(u: &SampledFunction1D, what: &str) -> Result<Grid1D> {
    let g = u.grid();
    if !g.starts_at_zero() {
        return Err(HalfwaveError::InvalidGrid(format!(
            "{what} requires a half-line grid starting at t = 0"
        )));
    }
    Ok(g)
}
