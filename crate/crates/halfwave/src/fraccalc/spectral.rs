//! Spectral backend: DFT multipliers applied in conjugate-symmetric form
//! so that real input yields real output.
//!
//! The grid is treated as one period of length n * dt; callers must supply
//! input that has decayed at both grid ends, which is checked up front.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::{Direction, FracOrder};
use crate::error::{HalfwaveError, Result};
use crate::grid::SampledFunction1D;

/// Default bound on |u(edge)| / max|u| accepted by the spectral operators.
pub const DEFAULT_DECAY_TOL: f64 = 1e-6;

fn check_decay(u: &SampledFunction1D, tol: f64) -> Result<()> {
    let vals = u.values();
    let max = u.max_abs();
    if max == 0.0 {
        return Ok(());
    }
    let edge = vals[0].abs().max(vals[vals.len() - 1].abs());
    let observed = edge / max;
    if observed > tol {
        return Err(HalfwaveError::DecayViolation {
            observed,
            tolerance: tol,
        });
    }
    Ok(())
}

/// Applies `mult(xi)` on non-negative frequencies; negative frequencies get
/// the conjugate value and the Nyquist bin (even n) keeps only the real
/// part, so the inverse transform of real data stays real.
fn apply_multiplier(
    u: &SampledFunction1D,
    mult: impl Fn(f64) -> Complex<f64>,
) -> SampledFunction1D {
    let grid = u.grid();
    let n = grid.n();
    let period = n as f64 * grid.dt();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    let mut buf: Vec<Complex<f64>> = u.values().iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft.process(&mut buf);

    // Pair the bins explicitly: bin n - k always receives the conjugate of
    // the bin-k factor, and the self-paired Nyquist bin keeps only the real
    // part of its factor.
    buf[0] *= mult(0.0);
    for k in 1..n.div_ceil(2) {
        let m = mult(k as f64 / period);
        buf[k] *= m;
        buf[n - k] *= m.conj();
    }
    if n.is_multiple_of(2) {
        let m = mult((n / 2) as f64 / period);
        buf[n / 2] *= Complex::new(m.re, 0.0);
    }

    ifft.process(&mut buf);
    let inv_n = 1.0 / n as f64;
    let out: Vec<f64> = buf.iter().map(|c| c.re * inv_n).collect();
    SampledFunction1D::new(grid, out).expect("finite by construction")
}

/// Fractional derivative through the multiplier
/// |2 pi xi|^alpha exp(+-i pi alpha / 2 sgn xi); the zero mode maps to 0.
pub fn spectral_derivative(u: &SampledFunction1D, ord: FracOrder) -> Result<SampledFunction1D> {
    spectral_derivative_with(u, ord, DEFAULT_DECAY_TOL)
}

pub fn spectral_derivative_with(
    u: &SampledFunction1D,
    ord: FracOrder,
    decay_tol: f64,
) -> Result<SampledFunction1D> {
    check_decay(u, decay_tol)?;
    let alpha = ord.alpha();
    let sigma = match ord.direction() {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let phase = sigma * std::f64::consts::FRAC_PI_2 * alpha;
    Ok(apply_multiplier(u, |xi| {
        if xi == 0.0 {
            Complex::new(0.0, 0.0)
        } else {
            let magnitude = (2.0 * std::f64::consts::PI * xi.abs()).powf(alpha);
            let arg = phase * xi.signum();
            Complex::from_polar(magnitude, arg)
        }
    }))
}

/// Hilbert transform through the multiplier -i sgn xi; the zero mode (and
/// the sign-ambiguous Nyquist bin) map to 0.
pub fn hilbert_transform(u: &SampledFunction1D) -> Result<SampledFunction1D> {
    hilbert_transform_with(u, DEFAULT_DECAY_TOL)
}

pub fn hilbert_transform_with(u: &SampledFunction1D, decay_tol: f64) -> Result<SampledFunction1D> {
    check_decay(u, decay_tol)?;
    // f64::signum treats 0.0 as positive, so the zero mode needs its own arm.
    Ok(apply_multiplier(u, |xi| {
        if xi == 0.0 {
            Complex::new(0.0, 0.0)
        } else {
            Complex::new(0.0, -xi.signum())
        }
    }))
}

/// The rotation cos(pi alpha) Id + sin(pi alpha) H for alpha in [0, 1].
pub fn h_alpha(u: &SampledFunction1D, alpha: f64) -> Result<SampledFunction1D> {
    h_alpha_with(u, alpha, DEFAULT_DECAY_TOL)
}

pub fn h_alpha_with(
    u: &SampledFunction1D,
    alpha: f64,
    decay_tol: f64,
) -> Result<SampledFunction1D> {
    if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
        return Err(HalfwaveError::InvalidOrder(alpha));
    }
    let h = hilbert_transform_with(u, decay_tol)?;
    let (c, s) = ((std::f64::consts::PI * alpha).cos(), (std::f64::consts::PI * alpha).sin());
    let vals: Vec<f64> = u
        .values()
        .iter()
        .zip(h.values())
        .map(|(&a, &b)| c * a + s * b)
        .collect();
    SampledFunction1D::new(u.grid(), vals)
}
