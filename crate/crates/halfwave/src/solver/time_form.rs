//! The discrete time pairing shared by the weak formulation and its tests.

use crate::error::{HalfwaveError, Result};
use crate::fraccalc::{gl_derivative, FracOrder};
use crate::grid::{SampledField2D, SampledFunction1D, SpaceTimeGrid};
use crate::util::{compensated_total, CompensatedSum};

/// Applicator for the discrete time pairing
/// `B(u, v) = dx * sum_x dt * sum_t (D₊^{1/2} u)(x, t) (D₋^{1/2} v)(x, t)`.
///
/// On the causal Grünwald–Letnikov discretization the backward
/// half-derivative is the exact transpose of the forward one and the forward
/// weights compose exactly, so the pairing equals the first-order form
/// `dx * sum_x sum_t v (u_t - u_{t-1})` to rounding — the discrete
/// fractional integration by parts carries no discretization error.
#[derive(Debug, Clone, Copy)]
pub struct TimeForm {
    grid: SpaceTimeGrid,
}

/// Builds the time pairing applicator for a grid.
pub fn assemble_time_form(grid: SpaceTimeGrid) -> TimeForm {
    TimeForm { grid }
}

impl TimeForm {
    pub fn grid(&self) -> SpaceTimeGrid {
        self.grid
    }

    fn check(&self, u: &SampledField2D, v: &SampledField2D) -> Result<()> {
        if u.grid() != self.grid || v.grid() != self.grid {
            return Err(HalfwaveError::InvalidGrid(
                "time form arguments live on a different grid".into(),
            ));
        }
        Ok(())
    }

    /// The pairing through the first-order causal difference. The 1/dt of
    /// the derivative cancels the dt of the time quadrature algebraically,
    /// so a unit impulse pairs with itself to exactly dx.
    pub fn apply_first(&self, u: &SampledField2D, v: &SampledField2D) -> Result<f64> {
        self.check(u, v)?;
        let m = self.grid.m();
        let rows = (0..m).map(|i| {
            let ur = u.row(i);
            let vr = v.row(i);
            let mut acc = CompensatedSum::new();
            let mut prev = 0.0;
            for (uj, vj) in ur.iter().zip(vr) {
                acc.add(vj * (uj - prev));
                prev = *uj;
            }
            acc.value()
        });
        Ok(self.grid.dx() * compensated_total(rows))
    }

    /// The same pairing computed through the two half-derivatives.
    pub fn apply_half(&self, u: &SampledField2D, v: &SampledField2D) -> Result<f64> {
        self.check(u, v)?;
        let m = self.grid.m();
        let dt = self.grid.dt();
        let tg = self.grid.time_grid();
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let ur = SampledFunction1D::new(tg, u.row(i).to_vec())?;
            let vr = SampledFunction1D::new(tg, v.row(i).to_vec())?;
            let du = gl_derivative(&ur, FracOrder::forward(0.5)?)?;
            let dv = gl_derivative(&vr, FracOrder::backward(0.5)?)?;
            let mut acc = CompensatedSum::new();
            for (a, b) in du.values().iter().zip(dv.values()) {
                acc.add(a * b);
            }
            rows.push(dt * acc.value());
        }
        Ok(self.grid.dx() * compensated_total(rows))
    }

    /// The quadratic form `B(u, u)`, nonnegative because the symmetric part
    /// of the causal difference matrix is positive definite.
    pub fn quadratic(&self, u: &SampledField2D) -> Result<f64> {
        self.apply_first(u, u)
    }
}
