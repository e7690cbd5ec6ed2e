//! Lateral-boundary operators: the anisotropic smoothing multiplier and the
//! wall traces of the quadratic theory.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{HalfwaveError, Result};
use crate::flux::StructuralFlux;
use crate::fraccalc::DEFAULT_DECAY_TOL;
use crate::grid::{SampledField2D, SampledFunction1D};
use crate::util::{extrapolate_quadratic, trapezoid_weight, CompensatedSum};

use super::x_norm_upper;

/// Applies the anisotropic multiplier (1 + i 2 pi tau + 4 pi^2 xi^2)^(-s)
/// on the space-time frequency side.
///
/// The field is extended by zero outside its space interval, both axes are
/// zero-padded to at least twice their length, and the multiplier acts on
/// the 2-D DFT. The symbol is analytic in the lower time-frequency
/// half-plane, so its kernel is supported in forward time: output before
/// the input's support onset is wrap-around residue only, exponentially
/// small in the padded period. Since the symbol's modulus never exceeds
/// one, the plain l2 norm of the samples cannot grow.
///
/// `s` must lie in [0, 1]; s = 0 returns the input unchanged. The input
/// must have decayed at both time edges of the grid, as wrap-around would
/// otherwise alias it; violations are reported, never smoothed over.
pub fn lateral_trace_multiplier(u: &SampledField2D, s: f64) -> Result<SampledField2D> {
    if !(s.is_finite() && (0.0..=1.0).contains(&s)) {
        return Err(HalfwaveError::InvalidParameter(format!(
            "multiplier order must lie in [0, 1], got {s}"
        )));
    }
    let grid = u.grid();
    let (m, n) = (grid.m(), grid.n());
    let max = u.max_abs();
    if max == 0.0 || s == 0.0 {
        return Ok(u.clone());
    }
    let edge = u
        .time_slice(0)
        .iter()
        .chain(u.time_slice(n - 1).iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let observed = edge / max;
    if observed > DEFAULT_DECAY_TOL {
        return Err(HalfwaveError::DecayViolation {
            observed,
            tolerance: DEFAULT_DECAY_TOL,
        });
    }

    let m_pad = (2 * m).next_power_of_two();
    let n_pad = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fft_t = planner.plan_fft_forward(n_pad);
    let ifft_t = planner.plan_fft_inverse(n_pad);
    let fft_x = planner.plan_fft_forward(m_pad);
    let ifft_x = planner.plan_fft_inverse(m_pad);

    let mut data = vec![Complex::new(0.0, 0.0); m_pad * n_pad];
    for i in 0..m {
        for j in 0..n {
            data[i * n_pad + j].re = u.at(i, j);
        }
    }
    for i in 0..m {
        fft_t.process(&mut data[i * n_pad..(i + 1) * n_pad]);
    }
    let mut col = vec![Complex::new(0.0, 0.0); m_pad];
    for b in 0..n_pad {
        for (a, c) in col.iter_mut().enumerate() {
            *c = data[a * n_pad + b];
        }
        fft_x.process(&mut col);
        for (a, c) in col.iter().enumerate() {
            data[a * n_pad + b] = *c;
        }
    }

    // The symbol depends on xi only through its square, so it is even
    // across the space-frequency axis by construction; time bins are paired
    // explicitly with conjugate factors, and the self-paired bins keep only
    // the real part, so real input stays real.
    let period_t = n_pad as f64 * grid.dt();
    let period_x = m_pad as f64 * grid.dx();
    for b in 0..=n_pad / 2 {
        let tau = b as f64 / period_t;
        let partner = (n_pad - b) % n_pad;
        for a in 0..m_pad {
            let xi = a.min(m_pad - a) as f64 / period_x;
            let z = Complex::new(1.0 + 4.0 * PI * PI * xi * xi, 2.0 * PI * tau);
            let mut factor = z.powf(-s);
            if b == 0 || b == n_pad / 2 {
                factor = Complex::new(factor.re, 0.0);
            }
            data[a * n_pad + b] *= factor;
            if partner != b {
                data[a * n_pad + partner] *= factor.conj();
            }
        }
    }

    for b in 0..n_pad {
        for (a, c) in col.iter_mut().enumerate() {
            *c = data[a * n_pad + b];
        }
        ifft_x.process(&mut col);
        for (a, c) in col.iter().enumerate() {
            data[a * n_pad + b] = *c;
        }
    }
    for i in 0..m {
        ifft_t.process(&mut data[i * n_pad..(i + 1) * n_pad]);
    }

    let scale = 1.0 / (m_pad * n_pad) as f64;
    let mut out = SampledField2D::zeros(grid);
    for i in 0..m {
        for j in 0..n {
            out.set(i, j, data[i * n_pad + j].re * scale);
        }
    }
    Ok(out)
}

/// Wall signals of a field under the quadratic flux, one per lateral face,
/// each with its quarter-order Gagliardo energy in time.
#[derive(Debug, Clone)]
pub struct LateralTrace {
    pub left: SampledFunction1D,
    pub right: SampledFunction1D,
    pub left_seminorm_sq: f64,
    pub right_seminorm_sq: f64,
}

/// Quarter-order Gagliardo energy of a time signal: the double trapezoid
/// sum of (f(s) - f(t))^2 |s - t|^(-3/2) off the diagonal.
fn quarter_seminorm_sq(f: &SampledFunction1D) -> f64 {
    let g = f.grid();
    let (n, dt) = (g.n(), g.dt());
    let v = f.values();
    let cell = dt * dt;
    let mut acc = CompensatedSum::new();
    for j in 0..n {
        let wj = trapezoid_weight(j, n);
        for k in j + 1..n {
            let d = v[j] - v[k];
            let gap = g.t(k) - g.t(j);
            let w = 2.0 * wj * trapezoid_weight(k, n) * cell;
            acc.add(w * d * d / (gap * gap.sqrt()));
        }
    }
    acc.value()
}

/// Wall values of a field, defined through its decomposition: the vanishing
/// part is extrapolated to the wall from its three nearest interior
/// samples, and the continuous part contributes its own wall samples.
///
/// For fields produced by the quadratic solver the sum recovers the lateral
/// datum: the extension-related cut-off contributions of the two parts
/// cancel at the wall. Supported for the quadratic flux only — for other
/// exponents the wall signal is not assembled by this crate.
pub fn lateral_trace_p2(u: &SampledField2D, flux: &StructuralFlux) -> Result<LateralTrace> {
    if flux.p() != 2.0 {
        return Err(HalfwaveError::Unsupported(format!(
            "the lateral trace is assembled only for p = 2, got p = {}",
            flux.p()
        )));
    }
    let grid = u.grid();
    let m = grid.m();
    if m < 5 {
        return Err(HalfwaveError::InvalidGrid(
            "wall extrapolation needs at least five space nodes".into(),
        ));
    }
    let d = x_norm_upper(u, flux)?;
    let n = grid.n();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for j in 0..n {
        left.push(
            extrapolate_quadratic(d.u1.at(1, j), d.u1.at(2, j), d.u1.at(3, j)) + d.u2.at(0, j),
        );
        right.push(
            extrapolate_quadratic(d.u1.at(m - 2, j), d.u1.at(m - 3, j), d.u1.at(m - 4, j))
                + d.u2.at(m - 1, j),
        );
    }
    let time = grid.time_grid();
    let left = SampledFunction1D::new(time, left)?;
    let right = SampledFunction1D::new(time, right)?;
    let left_seminorm_sq = quarter_seminorm_sq(&left);
    let right_seminorm_sq = quarter_seminorm_sq(&right);
    Ok(LateralTrace {
        left,
        right,
        left_seminorm_sq,
        right_seminorm_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::p_laplacian_flux;
    use crate::grid::SpaceTimeGrid;

    fn bump(r: f64) -> f64 {
        if r.abs() >= 1.0 {
            0.0
        } else {
            let s = 1.0 - r * r;
            s * s * s * s
        }
    }

    fn localized_field(grid: SpaceTimeGrid) -> SampledField2D {
        SampledField2D::from_fn(grid, |x, t| bump((x - 0.5) / 0.25) * bump((t - 4.0) / 1.0))
    }

    fn plain_l2(u: &SampledField2D) -> f64 {
        u.values().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    #[test]
    fn zero_order_multiplier_is_the_identity() {
        let grid = SpaceTimeGrid::new(0.0, 1.0, 17, 16.0, 129).unwrap();
        let u = localized_field(grid);
        let out = lateral_trace_multiplier(&u, 0.0).unwrap();
        assert_eq!(out.values(), u.values());
    }

    #[test]
    fn multiplier_preserves_forward_support() {
        let grid = SpaceTimeGrid::new(0.0, 1.0, 33, 16.0, 513).unwrap();
        let u = localized_field(grid);
        for &s in &[0.25, 0.5, 1.0] {
            let out = lateral_trace_multiplier(&u, s).unwrap();
            let mut early = 0.0;
            let mut total = 0.0;
            for i in 0..grid.m() {
                for j in 0..grid.n() {
                    let mass = out.at(i, j).abs();
                    total += mass;
                    if grid.t(j) < 3.0 {
                        early += mass;
                    }
                }
            }
            assert!(
                early <= 1e-6 * total,
                "s = {s}: leaked fraction {:.3e}",
                early / total
            );
        }
    }

    #[test]
    fn multiplier_contracts_the_sample_l2_norm() {
        let grid = SpaceTimeGrid::new(0.0, 1.0, 33, 16.0, 257).unwrap();
        let fields = [
            localized_field(grid),
            SampledField2D::from_fn(grid, |x, t| {
                x * (1.0 - x) * bump((t - 8.0) / 5.0) * (3.0 * t).sin()
            }),
        ];
        for u in &fields {
            let before = plain_l2(u);
            for &s in &[0.25, 0.5, 1.0] {
                let after = plain_l2(&lateral_trace_multiplier(u, s).unwrap());
                assert!(
                    after <= before * (1.0 + 1e-12),
                    "s = {s}: {after:.6e} > {before:.6e}"
                );
            }
        }
    }

    #[test]
    fn multiplier_rejects_fields_without_time_decay() {
        let grid = SpaceTimeGrid::new(0.0, 1.0, 17, 1.0, 65).unwrap();
        let u = SampledField2D::from_fn(grid, |x, _| (std::f64::consts::PI * x).sin());
        assert!(matches!(
            lateral_trace_multiplier(&u, 0.5),
            Err(HalfwaveError::DecayViolation { .. })
        ));
    }

    #[test]
    fn multiplier_rejects_orders_outside_the_unit_interval() {
        let grid = SpaceTimeGrid::new(0.0, 1.0, 9, 16.0, 65).unwrap();
        let u = localized_field(grid);
        for s in [-0.1, 1.5, f64::NAN] {
            assert!(matches!(
                lateral_trace_multiplier(&u, s),
                Err(HalfwaveError::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn wall_signals_recover_a_separable_profile() {
        // u = x phi(t) has trace phi on the right wall and zero on the left;
        // the cut-off contributions of the two parts cancel at the wall.
        let grid = SpaceTimeGrid::new(0.0, 1.0, 33, 8.0, 257).unwrap();
        let phi = |t: f64| (1.0 + t) * (-t).exp();
        let u = SampledField2D::from_fn(grid, |x, t| x * phi(t));
        let flux = p_laplacian_flux(2.0).unwrap();
        let trace = lateral_trace_p2(&u, &flux).unwrap();
        let mut right_err: f64 = 0.0;
        let mut left_err: f64 = 0.0;
        for j in 0..grid.n() {
            right_err = right_err.max((trace.right.values()[j] - phi(grid.t(j))).abs());
            left_err = left_err.max(trace.left.values()[j].abs());
        }
        assert!(right_err <= 2e-2, "right wall error {right_err:.3e}");
        assert!(left_err <= 2e-2, "left wall error {left_err:.3e}");
        assert!(trace.right_seminorm_sq.is_finite() && trace.right_seminorm_sq > 0.0);

        // The reported wall energy is stable under dt-halving.
        let coarse_grid = SpaceTimeGrid::new(0.0, 1.0, 33, 8.0, 129).unwrap();
        let coarse = SampledField2D::from_fn(coarse_grid, |x, t| x * phi(t));
        let coarse_trace = lateral_trace_p2(&coarse, &flux).unwrap();
        let rel = (coarse_trace.right_seminorm_sq - trace.right_seminorm_sq).abs()
            / trace.right_seminorm_sq;
        assert!(rel <= 5e-2, "wall energy moved by {rel:.3e} under halving");
    }

    #[test]
    fn fields_vanishing_near_the_walls_have_vanishing_signals() {
        let grid = SpaceTimeGrid::new(0.0, 1.0, 33, 8.0, 257).unwrap();
        let u = SampledField2D::from_fn(grid, |x, t| {
            bump((x - 0.5) / 0.3) * (1.0 + t) * (-t).exp()
        });
        let flux = p_laplacian_flux(2.0).unwrap();
        let trace = lateral_trace_p2(&u, &flux).unwrap();
        let scale = u.max_abs();
        assert!(trace.left.max_abs() <= 2e-2 * scale);
        assert!(trace.right.max_abs() <= 2e-2 * scale);
    }

    #[test]
    fn lateral_trace_requires_the_quadratic_flux() {
        let grid = SpaceTimeGrid::new(0.0, 1.0, 17, 1.0, 33).unwrap();
        let u = SampledField2D::zeros(grid);
        let flux = p_laplacian_flux(3.0).unwrap();
        assert!(matches!(
            lateral_trace_p2(&u, &flux),
            Err(HalfwaveError::Unsupported(_))
        ));
    }

    #[test]
    fn lateral_trace_rejects_narrow_grids() {
        let grid = SpaceTimeGrid::new(0.0, 1.0, 4, 1.0, 33).unwrap();
        let u = SampledField2D::zeros(grid);
        let flux = p_laplacian_flux(2.0).unwrap();
        assert!(matches!(
            lateral_trace_p2(&u, &flux),
            Err(HalfwaveError::InvalidGrid(_))
        ));
    }
}
