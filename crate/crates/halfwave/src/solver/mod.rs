//! Discretized variational solvers for the p-parabolic model problems.
//!
//! Two solvers live here. [`model_operator_solve`] inverts the
//! one-dimensional model operator `T(u) = du/dt + |u|^{p-2} u` on a time
//! grid with a damped, preconditioned Picard iteration and a Newton finish.
//! [`solve_homogeneous`] / [`solve_nonhomogeneous`] handle the full
//! space-time problem `du/dt - d/dx A(x, t, du/dx) = f` on a half-cylinder
//! with pinned lateral and initial data, marching level by level in time and
//! attacking each level with the same damped-Picard-then-Newton strategy.
//!
//! Time derivatives are causal Grünwald–Letnikov differences with zero
//! extension before the first sample, so the half-order integration by parts
//! identity holds to rounding; [`assemble_time_form`] exposes that pairing
//! in both its half/half and first-order forms.

mod model;
mod pde;
mod time_form;

pub use model::model_operator_solve;
pub use pde::{
    solve_homogeneous, solve_homogeneous_with_start, solve_nonhomogeneous, uniqueness_probe,
};
pub use time_form::{assemble_time_form, TimeForm};

use rayon::prelude::*;

use crate::error::{HalfwaveError, Result};
use crate::flux::StructuralFlux;
use crate::fraccalc::{gl_derivative, FracOrder};
use crate::grid::{SampledField2D, SampledFunction1D, SpaceTimeGrid};

/// Right-hand side split by functional role: a half-derivative component
/// (L² role), divergence components (one per space dimension, conjugate-L^p
/// role), and an optional pointwise term.
///
/// The represented functional is
/// `xi = D₊^{1/2} u0 + d(u1)/dx + f_pt`,
/// evaluated nodally: the half-derivative through the causal
/// Grünwald–Letnikov weights on each space row, the divergence through
/// centered differences of cell averages.
#[derive(Debug, Clone)]
pub struct SourceData {
    pub u0: SampledField2D,
    pub ui: Vec<SampledField2D>,
    pub f_pt: Option<SampledField2D>,
}

impl SourceData {
    /// No forcing at all.
    pub fn zero(grid: SpaceTimeGrid) -> Self {
        SourceData {
            u0: SampledField2D::zeros(grid),
            ui: Vec::new(),
            f_pt: None,
        }
    }

    /// Purely pointwise forcing.
    pub fn pointwise(f: SampledField2D) -> Self {
        SourceData {
            u0: SampledField2D::zeros(f.grid()),
            ui: Vec::new(),
            f_pt: Some(f),
        }
    }

    /// Full structural form; all components must share one grid.
    pub fn new(
        u0: SampledField2D,
        ui: Vec<SampledField2D>,
        f_pt: Option<SampledField2D>,
    ) -> Result<Self> {
        let grid = u0.grid();
        let source = SourceData { u0, ui, f_pt };
        source.validate(grid)?;
        Ok(source)
    }

    fn validate(&self, grid: SpaceTimeGrid) -> Result<()> {
        if self.u0.grid() != grid {
            return Err(HalfwaveError::InvalidGrid(
                "source component u0 lives on a different grid".into(),
            ));
        }
        if self.ui.len() > 1 {
            return Err(HalfwaveError::Unsupported(format!(
                "one space dimension supports at most one divergence component, got {}",
                self.ui.len()
            )));
        }
        for u in &self.ui {
            if u.grid() != grid {
                return Err(HalfwaveError::InvalidGrid(
                    "source divergence component lives on a different grid".into(),
                ));
            }
        }
        if let Some(f) = &self.f_pt {
            if f.grid() != grid {
                return Err(HalfwaveError::InvalidGrid(
                    "pointwise source lives on a different grid".into(),
                ));
            }
        }
        let finite = self.u0.values().iter().all(|v| v.is_finite())
            && self
                .ui
                .iter()
                .all(|u| u.values().iter().all(|v| v.is_finite()))
            && self
                .f_pt
                .iter()
                .all(|f| f.values().iter().all(|v| v.is_finite()));
        if !finite {
            return Err(HalfwaveError::InvalidParameter(
                "source data contains non-finite values".into(),
            ));
        }
        Ok(())
    }

    /// Collapses the structural components into nodal values of the
    /// functional, row-major over the grid.
    pub(crate) fn effective(&self, grid: SpaceTimeGrid) -> Result<Vec<f64>> {
        self.validate(grid)?;
        let (m, n, dx) = (grid.m(), grid.n(), grid.dx());
        let mut f = vec![0.0; m * n];
        if self.u0.max_abs() > 0.0 {
            let tg = grid.time_grid();
            let rows = (0..m)
                .into_par_iter()
                .map(|i| {
                    let row = SampledFunction1D::new(tg, self.u0.row(i).to_vec())?;
                    Ok(gl_derivative(&row, FracOrder::forward(0.5)?)?.into_values())
                })
                .collect::<Result<Vec<Vec<f64>>>>()?;
            for (i, row) in rows.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    f[i * n + j] += v;
                }
            }
        }
        if let Some(u1) = self.ui.first() {
            for i in 1..m - 1 {
                for j in 0..n {
                    f[i * n + j] += (u1.at(i + 1, j) - u1.at(i - 1, j)) / (2.0 * dx);
                }
            }
        }
        if let Some(fp) = &self.f_pt {
            for (a, b) in f.iter_mut().zip(fp.values()) {
                *a += b;
            }
        }
        Ok(f)
    }
}

/// A fully specified weak problem on a space-time half-cylinder.
///
/// `boundary_datum` supplies the values of the solution on the discrete
/// parabolic boundary (both lateral walls and the initial slice) and acts as
/// the offset of the solution space; `tol` bounds the dual-norm residual of
/// the returned solution; `max_iter` caps the nonlinear iteration count of a
/// single time level.
#[derive(Debug, Clone)]
pub struct WeakProblem {
    pub grid: SpaceTimeGrid,
    pub flux: StructuralFlux,
    pub source: SourceData,
    pub boundary_datum: SampledField2D,
    pub tol: f64,
    pub max_iter: usize,
}

impl WeakProblem {
    /// Builds a problem with the default tolerance 1e-8 and a per-level
    /// iteration cap of 200.
    pub fn new(
        grid: SpaceTimeGrid,
        flux: StructuralFlux,
        source: SourceData,
        boundary_datum: SampledField2D,
    ) -> Result<Self> {
        let prob = WeakProblem {
            grid,
            flux,
            source,
            boundary_datum,
            tol: 1e-8,
            max_iter: 200,
        };
        prob.validate()?;
        Ok(prob)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.grid.m() < 3 {
            return Err(HalfwaveError::InvalidGrid(
                "the solver needs at least one interior space node (m >= 3)".into(),
            ));
        }
        if self.grid.n() < 2 {
            return Err(HalfwaveError::InvalidGrid(
                "the solver needs at least one time level past the initial slice".into(),
            ));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(HalfwaveError::InvalidParameter(format!(
                "tolerance must be positive and finite, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(HalfwaveError::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        if self.boundary_datum.grid() != self.grid {
            return Err(HalfwaveError::InvalidGrid(
                "boundary datum lives on a different grid".into(),
            ));
        }
        if !self.boundary_datum.values().iter().all(|v| v.is_finite()) {
            return Err(HalfwaveError::InvalidParameter(
                "boundary datum contains non-finite values".into(),
            ));
        }
        self.source.validate(self.grid)
    }
}

/// Outcome of a space-time solve.
///
/// `residual_dual_norm` is the discrete dual norm of the weak residual of the
/// returned field, measured with the unregularized flux;
/// `regularized_residual` repeats the measurement with the
/// epsilon-regularized kernel the iteration used (the two coincide whenever
/// no regularization applies). `energy_trace` records the dual-norm residual
/// before the first time sweep and after each completed sweep; the damped
/// iteration only ever accepts merit-decreasing steps, so the trace is
/// non-increasing.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub u: SampledField2D,
    pub iterations: usize,
    pub residual_dual_norm: f64,
    pub regularized_residual: f64,
    pub energy_trace: Vec<f64>,
}
