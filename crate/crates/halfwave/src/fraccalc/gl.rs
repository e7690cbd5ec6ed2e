//! Grünwald–Letnikov backend: causal convolution against the signed
//! binomial weight table, with samples left of the grid treated as zero.

use super::{Direction, FracOrder, GLWeights};
use crate::error::Result;
use crate::grid::SampledFunction1D;

/// Fractional derivative by the one-sided difference quotient
/// v_j = dt^(-alpha) sum_{k} w_k u_{j -+ k}.
///
/// Forward reaches back towards smaller indices (zero-extended), backward
/// reaches ahead towards larger ones; the two matrices are exact
/// transposes of each other.
pub fn gl_derivative(u: &SampledFunction1D, ord: FracOrder) -> Result<SampledFunction1D> {
    let grid = u.grid();
    let n = grid.n();
    let table = GLWeights::new(ord.alpha(), n, grid.dt())?;
    let w = table.weights();
    let scale = table.scale();
    let vals = u.values();
    let mut out = vec![0.0; n];
    match ord.direction() {
        Direction::Forward => {
            for (j, slot) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for k in 0..=j {
                    acc += w[k] * vals[j - k];
                }
                *slot = scale * acc;
            }
        }
        Direction::Backward => {
            for (j, slot) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for k in 0..n - j {
                    acc += w[k] * vals[j + k];
                }
                *slot = scale * acc;
            }
        }
    }
    SampledFunction1D::new(grid, out)
}

/// Dense n x n matrix of the operator on a unit-step grid.
pub fn gl_matrix(ord: FracOrder, n: usize) -> Result<Vec<Vec<f64>>> {
    let table = GLWeights::new(ord.alpha(), n, 1.0)?;
    let w = table.weights();
    let mut m = vec![vec![0.0; n]; n];
    for j in 0..n {
        for k in 0..n {
            match ord.direction() {
                Direction::Forward => {
                    if j >= k {
                        m[j][k] = w[j - k];
                    }
                }
                Direction::Backward => {
                    if k >= j {
                        m[j][k] = w[k - j];
                    }
                }
            }
        }
    }
    Ok(m)
}

/// max |M_backward - M_forward^T| over all entries, for the same order.
pub fn adjointness_defect(ord: FracOrder, n: usize) -> Result<f64> {
    let fwd = gl_matrix(FracOrder::forward(ord.alpha())?, n)?;
    let bwd = gl_matrix(FracOrder::backward(ord.alpha())?, n)?;
    let mut defect = 0.0_f64;
    for j in 0..n {
        for k in 0..n {
            defect = defect.max((bwd[j][k] - fwd[k][j]).abs());
        }
    }
    Ok(defect)
}
