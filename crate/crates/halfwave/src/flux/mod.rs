//! Nonlinear flux functions under structural control.
//!
//! A [`StructuralFlux`] carries an evaluation map `(x, t, xi) -> vector`
//! together with the constants and coefficient bounds of the structural
//! conditions it claims to satisfy: strict monotonicity in `xi`, coercivity
//! `A(x,t,xi) . xi >= lambda |xi|^p - h(x,t)`, and growth
//! `|A(x,t,xi)| <= Lambda |xi|^{p-1} + H(x,t)`. The claims are checked by
//! randomized audits ([`audit_flux`]) rather than trusted; every flux this
//! crate ships passes its own audit, and a deliberately anti-monotone flux
//! is provided so failure paths stay honest.

mod audit;

use std::fmt;
use std::sync::Arc;

use crate::error::{HalfwaveError, Result};

pub use audit::{audit_flux, continuity_defects, FluxAuditReport};

type CoeffFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type ShiftFn = Arc<dyn Fn(f64, f64) -> Vec<f64> + Send + Sync>;
type EvalFn = Arc<dyn Fn(f64, f64, &[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
enum FluxKind {
    /// `|xi|^{p-2} xi`, the model flux.
    PLaplacian,
    /// `M xi` for a symmetric positive-definite matrix, p = 2.
    Linear { matrix: Vec<Vec<f64>> },
    /// `-xi`: anti-monotone by design, for exercising audit failures.
    Negated,
    /// `base(x, t, xi + g(x, t))` for a fixed shift field g.
    Shifted { base: Box<StructuralFlux>, shift: ShiftFn },
    /// Arbitrary user map.
    Custom(EvalFn),
}

/// A flux `A(x, t, xi)` bundled with its structural constants.
#[derive(Clone)]
pub struct StructuralFlux {
    p: f64,
    lambda: f64,
    big_lambda: f64,
    dim: usize,
    kind: FluxKind,
    h_bound: CoeffFn,
    big_h_bound: CoeffFn,
}

impl fmt::Debug for StructuralFlux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            FluxKind::PLaplacian => "p-laplacian",
            FluxKind::Linear { .. } => "linear",
            FluxKind::Negated => "negated",
            FluxKind::Shifted { .. } => "shifted",
            FluxKind::Custom(_) => "custom",
        };
        f.debug_struct("StructuralFlux")
            .field("kind", &kind)
            .field("p", &self.p)
            .field("lambda", &self.lambda)
            .field("big_lambda", &self.big_lambda)
            .field("dim", &self.dim)
            .finish()
    }
}

fn validate_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.0) {
        return Err(HalfwaveError::InvalidParameter(format!(
            "flux exponent p must lie in (1, inf), got {p}"
        )));
    }
    Ok(())
}

fn zero_coeff() -> CoeffFn {
    Arc::new(|_, _| 0.0)
}

/// The model flux `A(xi) = |xi|^{p-2} xi` with `lambda = Lambda = 1` and no
/// coefficient slack. At `xi = 0` the value is the zero vector for every p:
/// for p < 2 this is the continuous extension of the formula across its
/// removable singularity.
pub fn p_laplacian_flux(p: f64) -> Result<StructuralFlux> {
    validate_p(p)?;
    Ok(StructuralFlux {
        p,
        lambda: 1.0,
        big_lambda: 1.0,
        dim: 2,
        kind: FluxKind::PLaplacian,
        h_bound: zero_coeff(),
        big_h_bound: zero_coeff(),
    })
}

impl StructuralFlux {
    /// Linear flux `A(xi) = M xi` for symmetric positive-definite `M`, with
    /// p = 2 and `lambda`/`Lambda` the extreme eigenvalues of `M`.
    pub fn linear(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let d = matrix.len();
        if d == 0 || matrix.iter().any(|row| row.len() != d) {
            return Err(HalfwaveError::InvalidParameter(
                "linear flux needs a square matrix".into(),
            ));
        }
        let scale = matrix
            .iter()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        if !scale.is_finite() {
            return Err(HalfwaveError::InvalidParameter(
                "matrix entries must be finite".into(),
            ));
        }
        for (i, row) in matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate().take(i) {
                if (v - matrix[j][i]).abs() > 1e-12 * (scale + 1.0) {
                    return Err(HalfwaveError::InvalidParameter(
                        "linear flux matrix must be symmetric".into(),
                    ));
                }
            }
        }
        let (lo, hi) = symmetric_eigen_bounds(&matrix);
        if lo <= 0.0 {
            return Err(HalfwaveError::InvalidParameter(format!(
                "linear flux matrix must be positive definite (min eigenvalue {lo})"
            )));
        }
        Ok(Self {
            p: 2.0,
            lambda: lo,
            big_lambda: hi,
            dim: d,
            kind: FluxKind::Linear { matrix },
            h_bound: zero_coeff(),
            big_h_bound: zero_coeff(),
        })
    }

    /// The designed-broken flux `A(xi) = -xi`: carries the constants of the
    /// identity flux but is anti-monotone, so audits must flag it.
    pub fn negated() -> Self {
        Self {
            p: 2.0,
            lambda: 1.0,
            big_lambda: 1.0,
            dim: 2,
            kind: FluxKind::Negated,
            h_bound: zero_coeff(),
            big_h_bound: zero_coeff(),
        }
    }

    /// Flux from an arbitrary evaluation map and claimed constants. The
    /// claims are not verified here; run [`audit_flux`].
    pub fn custom(
        p: f64,
        lambda: f64,
        big_lambda: f64,
        dim: usize,
        h_bound: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        big_h_bound: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        eval: impl Fn(f64, f64, &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        validate_p(p)?;
        if !(lambda.is_finite() && lambda > 0.0 && big_lambda.is_finite() && big_lambda >= lambda)
        {
            return Err(HalfwaveError::InvalidParameter(format!(
                "need Lambda >= lambda > 0, got lambda {lambda}, Lambda {big_lambda}"
            )));
        }
        if dim == 0 {
            return Err(HalfwaveError::InvalidParameter(
                "flux dimension must be at least 1".into(),
            ));
        }
        Ok(Self {
            p,
            lambda,
            big_lambda,
            dim,
            kind: FluxKind::Custom(Arc::new(eval)),
            h_bound: Arc::new(h_bound),
            big_h_bound: Arc::new(big_h_bound),
        })
    }

    /// The perturbed flux `xi -> A(x, t, xi + g(x, t))`.
    ///
    /// Monotonicity survives a common shift unchanged. The other two
    /// conditions hold with adjusted constants, derived from the base bounds
    /// by convexity (`|xi + g|^p >= 2^{1-p}|xi|^p - |g|^p`) and the Young
    /// inequality `ab <= eps a^{p/(p-1)} + eps^{1-p} b^p` with `eps = lambda/2`:
    ///   lambda' = 2^{-p} lambda,
    ///   h'      = h + H |g| + (lambda/2 + (lambda/2)^{1-p} Lambda^p) |g|^p,
    ///   Lambda' = c Lambda with c = max(1, 2^{p-2}),
    ///   H'      = H + c Lambda |g|^{p-1}.
    pub fn shifted(&self, shift: impl Fn(f64, f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        let p = self.p;
        let lambda = self.lambda;
        let big_lambda = self.big_lambda;
        let growth_c = if p >= 2.0 { 2.0_f64.powf(p - 2.0) } else { 1.0 };
        let shift: ShiftFn = Arc::new(shift);
        let base_h = Arc::clone(&self.h_bound);
        let base_big_h = Arc::clone(&self.big_h_bound);
        let coercivity_c = lambda / 2.0 + (lambda / 2.0).powf(1.0 - p) * big_lambda.powf(p);

        let shift_for_h = Arc::clone(&shift);
        let big_h_for_h = Arc::clone(&base_big_h);
        let h_bound: CoeffFn = Arc::new(move |x, t| {
            let g = norm(&shift_for_h(x, t));
            base_h(x, t) + big_h_for_h(x, t) * g + coercivity_c * g.powf(p)
        });
        let shift_for_big_h = Arc::clone(&shift);
        let big_h_bound: CoeffFn = Arc::new(move |x, t| {
            let g = norm(&shift_for_big_h(x, t));
            base_big_h(x, t) + growth_c * big_lambda * g.powf(p - 1.0)
        });

        Self {
            p,
            lambda: 2.0_f64.powf(-p) * lambda,
            big_lambda: growth_c * big_lambda,
            dim: self.dim,
            kind: FluxKind::Shifted {
                base: Box::new(self.clone()),
                shift,
            },
            h_bound,
            big_h_bound,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// The exponent when this is exactly the model power flux; the solver
    /// exploits it for closed-form secants and derivatives.
    pub(crate) fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            FluxKind::PLaplacian => Some(self.p),
            _ => None,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn big_lambda(&self) -> f64 {
        self.big_lambda
    }

    /// Dimension audits sample in. The p-Laplacian and negated fluxes accept
    /// any vector length; linear and shifted fluxes are pinned to their data.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h_bound(&self, x: f64, t: f64) -> f64 {
        (self.h_bound)(x, t)
    }

    pub fn big_h_bound(&self, x: f64, t: f64) -> f64 {
        (self.big_h_bound)(x, t)
    }

    /// Evaluates `A(x, t, xi)` into `out`.
    pub fn eval(&self, x: f64, t: f64, xi: &[f64], out: &mut [f64]) {
        assert_eq!(xi.len(), out.len(), "flux output length mismatch");
        match &self.kind {
            FluxKind::PLaplacian => {
                let r = norm(xi);
                if r == 0.0 {
                    out.fill(0.0);
                    return;
                }
                let factor = r.powf(self.p - 2.0);
                for (o, &c) in out.iter_mut().zip(xi) {
                    *o = factor * c;
                }
            }
            FluxKind::Linear { matrix } => {
                assert_eq!(xi.len(), matrix.len(), "flux input length mismatch");
                for (o, row) in out.iter_mut().zip(matrix) {
                    *o = row.iter().zip(xi).map(|(a, b)| a * b).sum();
                }
            }
            FluxKind::Negated => {
                for (o, &c) in out.iter_mut().zip(xi) {
                    *o = -c;
                }
            }
            FluxKind::Shifted { base, shift } => {
                let g = shift(x, t);
                assert_eq!(g.len(), xi.len(), "shift length mismatch");
                let moved: Vec<f64> = xi.iter().zip(&g).map(|(a, b)| a + b).collect();
                base.eval(x, t, &moved, out);
            }
            FluxKind::Custom(f) => {
                let v = f(x, t, xi);
                assert_eq!(v.len(), xi.len(), "custom flux length mismatch");
                out.copy_from_slice(&v);
            }
        }
    }

    pub fn eval_vec(&self, x: f64, t: f64, xi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; xi.len()];
        self.eval(x, t, xi, &mut out);
        out
    }

    /// Scalar fast path for one space dimension.
    pub fn eval_1d(&self, x: f64, t: f64, xi: f64) -> f64 {
        match &self.kind {
            FluxKind::PLaplacian => {
                if xi == 0.0 {
                    0.0
                } else {
                    xi.abs().powf(self.p - 2.0) * xi
                }
            }
            FluxKind::Negated => -xi,
            _ => {
                let mut out = [0.0];
                self.eval(x, t, &[xi], &mut out);
                out[0]
            }
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Extreme eigenvalues of a small symmetric matrix by cyclic Jacobi
/// rotations.
fn symmetric_eigen_bounds(m: &[Vec<f64>]) -> (f64, f64) {
    let d = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _ in 0..200 {
        let mut off = 0.0_f64;
        let (mut pi, mut pj) = (0, 1.min(d - 1));
        for (i, row) in a.iter().enumerate() {
            for (j, v) in row.iter().enumerate().skip(i + 1) {
                if v.abs() > off {
                    off = v.abs();
                    (pi, pj) = (i, j);
                }
            }
        }
        let scale = (0..d).fold(0.0_f64, |s, i| s.max(a[i][i].abs()));
        if off <= 1e-14 * (scale + 1.0) {
            break;
        }
        let (i, j) = (pi, pj);
        let theta = 0.5 * (2.0 * a[i][j]).atan2(a[i][i] - a[j][j]);
        let (s, c) = theta.sin_cos();
        let (head, tail) = a.split_at_mut(j);
        for (x, y) in head[i].iter_mut().zip(tail[0].iter_mut()) {
            let (aik, ajk) = (*x, *y);
            *x = c * aik + s * ajk;
            *y = -s * aik + c * ajk;
        }
        for row in a.iter_mut() {
            let (aki, akj) = (row[i], row[j]);
            row[i] = c * aki + s * akj;
            row[j] = -s * aki + c * akj;
        }
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, row) in a.iter().enumerate() {
        lo = lo.min(row[i]);
        hi = hi.max(row[i]);
    }
    (lo, hi)
}
