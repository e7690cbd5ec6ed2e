//! Fractional derivatives of order alpha in (0, 1] on uniform grids.
//!
//! Two backends are provided. The Grünwald–Letnikov backend is a causal
//! (lower-triangular Toeplitz) convolution suited to half-line problems and
//! exact operator algebra: composing two half-order applications reproduces
//! the first-order difference exactly, and the backward operator is the
//! exact matrix transpose of the forward one. The spectral backend applies
//! the DFT multiplier |2 pi xi|^alpha exp(+-i pi alpha/2 sgn xi) and expects
//! input that decays at both grid ends. A Hilbert-transform bridge maps the
//! forward operator onto the backward one.

mod gl;
mod spectral;

pub use gl::{adjointness_defect, gl_derivative, gl_matrix};
pub use spectral::{
    h_alpha, h_alpha_with, hilbert_transform, hilbert_transform_with, spectral_derivative,
    spectral_derivative_with, DEFAULT_DECAY_TOL,
};

use crate::error::{HalfwaveError, Result};

/// Direction of the one-sided fractional derivative.
///
/// `Forward` is causal: the value at a sample depends on earlier samples
/// only. `Backward` is its adjoint and looks at later samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// A fractional order alpha in (0, 1] together with a direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: f64,
    direction: Direction,
}

impl FracOrder {
    pub fn new(alpha: f64, direction: Direction) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(HalfwaveError::InvalidOrder(alpha));
        }
        Ok(Self { alpha, direction })
    }

    pub fn forward(alpha: f64) -> Result<Self> {
        Self::new(alpha, Direction::Forward)
    }

    pub fn backward(alpha: f64) -> Result<Self> {
        Self::new(alpha, Direction::Backward)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

/// Grünwald–Letnikov weight table w_k = (-1)^k binom(alpha, k) together
/// with the grid scale dt^(-alpha).
///
/// The table is immutable once built and can be shared across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct GLWeights {
    alpha: f64,
    scale: f64,
    weights: Vec<f64>,
}

impl GLWeights {
    pub fn new(alpha: f64, len: usize, dt: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(HalfwaveError::InvalidOrder(alpha));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(HalfwaveError::InvalidParameter(format!(
                "step must be positive, got {dt}"
            )));
        }
        if len == 0 {
            return Err(HalfwaveError::InvalidParameter(
                "weight table needs at least one entry".into(),
            ));
        }
        let mut weights = Vec::with_capacity(len);
        weights.push(1.0);
        for k in 1..len {
            let kf = k as f64;
            let prev = weights[k - 1];
            weights.push(prev * ((kf - 1.0 - alpha) / kf));
        }
        Ok(Self {
            alpha,
            scale: dt.powf(-alpha),
            weights,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// dt^(-alpha), the factor turning the weight convolution into a
    /// difference quotient.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}
