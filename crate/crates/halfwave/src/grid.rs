//! Uniform sampling grids for functions of one variable and for
//! space-time fields on a cylinder.

use crate::error::{HalfwaveError, Result};

/// Uniform one-dimensional grid with endpoint-inclusive samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    t_min: f64,
    t_max: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(t_min: f64, t_max: f64, n: usize) -> Result<Self> {
        if !t_min.is_finite() || !t_max.is_finite() {
            return Err(HalfwaveError::InvalidGrid("non-finite bounds".into()));
        }
        if n < 2 {
            return Err(HalfwaveError::InvalidGrid(format!(
                "need at least 2 samples, got {n}"
            )));
        }
        if t_max <= t_min {
            return Err(HalfwaveError::InvalidGrid(format!(
                "t_max {t_max} must exceed t_min {t_min}"
            )));
        }
        Ok(Self { t_min, t_max, n })
    }

    /// Grid on (0, t_max] starting at t = 0.
    pub fn half_line(t_max: f64, n: usize) -> Result<Self> {
        Self::new(0.0, t_max, n)
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n - 1) as f64
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t_min + k as f64 * self.dt()
    }

    pub fn starts_at_zero(&self) -> bool {
        self.t_min == 0.0
    }

    pub fn sample(&self, mut f: impl FnMut(f64) -> f64) -> SampledFunction1D {
        let values = (0..self.n).map(|k| f(self.t(k))).collect();
        SampledFunction1D {
            grid: *self,
            values,
        }
    }
}

/// Samples of a real function on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction1D {
    grid: Grid1D,
    values: Vec<f64>,
}

impl SampledFunction1D {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(HalfwaveError::InvalidGrid(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.n()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(HalfwaveError::InvalidParameter(
                "samples must be finite".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.n()],
        }
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Trapezoid-rule L2 norm over the grid extent.
    pub fn l2_norm(&self) -> f64 {
        let dt = self.grid.dt();
        let n = self.values.len();
        let mut s = 0.0;
        for (k, v) in self.values.iter().enumerate() {
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            s += w * v * v;
        }
        (s * dt).sqrt()
    }
}

/// Uniform grid on a space-time cylinder (x_min, x_max) x (t_min, t_max).
///
/// Solver-facing constructors pin t_min = 0; `with_time_range` exists for
/// operators that act on two-sided time windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeGrid {
    x_min: f64,
    x_max: f64,
    m: usize,
    t_min: f64,
    t_max: f64,
    n: usize,
}

impl SpaceTimeGrid {
    pub fn new(x_min: f64, x_max: f64, m: usize, t_max: f64, n: usize) -> Result<Self> {
        Self::with_time_range(x_min, x_max, m, 0.0, t_max, n)
    }

    pub fn with_time_range(
        x_min: f64,
        x_max: f64,
        m: usize,
        t_min: f64,
        t_max: f64,
        n: usize,
    ) -> Result<Self> {
        if m < 3 || n < 3 {
            return Err(HalfwaveError::InvalidGrid(format!(
                "need at least 3 samples per axis, got {m} x {n}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite() && t_min.is_finite() && t_max.is_finite()) {
            return Err(HalfwaveError::InvalidGrid("non-finite bounds".into()));
        }
        if x_max <= x_min || t_max <= t_min {
            return Err(HalfwaveError::InvalidGrid(
                "grid extents must be positive".into(),
            ));
        }
        Ok(Self {
            x_min,
            x_max,
            m,
            t_min,
            t_max,
            n,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.m - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn t(&self, j: usize) -> f64 {
        self.t_min + j as f64 * self.dt()
    }

    pub fn time_grid(&self) -> Grid1D {
        Grid1D::new(self.t_min, self.t_max, self.n).expect("valid by construction")
    }

    pub fn space_grid(&self) -> Grid1D {
        Grid1D::new(self.x_min, self.x_max, self.m).expect("valid by construction")
    }
}

/// Samples of a real field on a [`SpaceTimeGrid`].
///
/// Storage is row-major with the time index contiguous: entry (i, j) sits at
/// `i * n + j`, so a fixed-x "space row" is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField2D {
    grid: SpaceTimeGrid,
    values: Vec<f64>,
}

impl SampledField2D {
    pub fn new(grid: SpaceTimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.m() * grid.n() {
            return Err(HalfwaveError::InvalidGrid(format!(
                "value count {} does not match grid {} x {}",
                values.len(),
                grid.m(),
                grid.n()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(HalfwaveError::InvalidParameter(
                "samples must be finite".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: SpaceTimeGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.m() * grid.n()],
        }
    }

    pub fn from_fn(grid: SpaceTimeGrid, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.m() * grid.n());
        for i in 0..grid.m() {
            let x = grid.x(i);
            for j in 0..grid.n() {
                values.push(f(x, grid.t(j)));
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> SpaceTimeGrid {
        self.grid
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.grid.n() + j] = v;
    }

    /// Contiguous time samples at fixed space index i.
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.grid.n();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let n = self.grid.n();
        &mut self.values[i * n..(i + 1) * n]
    }

    /// Space samples at fixed time index j (strided gather).
    pub fn time_slice(&self, j: usize) -> Vec<f64> {
        (0..self.grid.m()).map(|i| self.at(i, j)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Trapezoid-weighted L2 norm over the cylinder.
    pub fn l2_norm(&self) -> f64 {
        let (m, n) = (self.grid.m(), self.grid.n());
        let mut s = 0.0;
        for i in 0..m {
            let wi = if i == 0 || i == m - 1 { 0.5 } else { 1.0 };
            let row = self.row(i);
            for (j, v) in row.iter().enumerate() {
                let wj = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                s += wi * wj * v * v;
            }
        }
        (s * self.grid.dx() * self.grid.dt()).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid1d_spacing_is_endpoint_inclusive() {
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.dt(), 0.5);
        assert_eq!(g.t(0), -1.0);
        assert_eq!(g.t(4), 1.0);
    }

    #[test]
    fn grid1d_rejects_degenerate_input() {
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
        assert!(Grid1D::new(1.0, 1.0, 4).is_err());
        assert!(Grid1D::new(f64::NAN, 1.0, 4).is_err());
    }

    #[test]
    fn sampled_function_checks_length_and_finiteness() {
        let g = Grid1D::new(0.0, 1.0, 3).unwrap();
        assert!(SampledFunction1D::new(g, vec![0.0; 2]).is_err());
        assert!(SampledFunction1D::new(g, vec![0.0, f64::NAN, 1.0]).is_err());
        assert!(SampledFunction1D::new(g, vec![0.0; 3]).is_ok());
    }

    #[test]
    fn field_layout_keeps_time_contiguous() {
        let g = SpaceTimeGrid::new(0.0, 1.0, 3, 2.0, 4).unwrap();
        let u = SampledField2D::from_fn(g, |x, t| 10.0 * x + t);
        assert_eq!(u.at(2, 3), 10.0 + 2.0);
        assert_eq!(u.row(1).len(), 4);
        assert_eq!(u.time_slice(0), vec![0.0, 5.0, 10.0]);
    }

    #[test]
    fn l2_norm_of_constant_matches_measure() {
        let g = Grid1D::new(0.0, 2.0, 101).unwrap();
        let u = g.sample(|_| 3.0);
        assert!((u.l2_norm() - 3.0 * 2.0_f64.sqrt()).abs() < 1e-12);
    }
}
