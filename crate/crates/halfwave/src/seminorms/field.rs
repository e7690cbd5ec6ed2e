//! Norm components for sampled space-time fields: per-fiber time energies
//! integrated over space, plus the Lp and gradient pieces.

use rayon::prelude::*;

use crate::error::{HalfwaveError, Result};
use crate::grid::{SampledField2D, SampledFunction1D};
use crate::util::{compensated_total, trapezoid_weight, CompensatedSum};

use super::{gagliardo_seminorm_sq, hardy_term, Domain};

/// Which component set a norm report carries.
///
/// `BDotZero` is the vanishing-initial-data space: its norm carries the
/// boundary-weighted term. `BDotDot` is the plain anisotropic space with no
/// boundary weight. `BIPartial` tags reports for the initial-data space; the
/// components computable from samples alone coincide with `BDotDot` (the
/// continuity-in-time and dual-derivative terms of that space are assembled
/// by the trace layer, which owns the required solves).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpace {
    BDotZero,
    BDotDot,
    BIPartial,
}

/// Components of an anisotropic space-time norm. `hardy_sq` is present only
/// for spaces whose norm weights the initial boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub lp_norm: f64,
    pub gagliardo_sq: f64,
    pub hardy_sq: Option<f64>,
    pub grad_lp: f64,
    pub p: f64,
}

/// Time-direction Gagliardo energy of a field: the trapezoid-in-x weighted
/// sum of per-fiber seminorms times dx. Fibers on a cylinder starting at
/// t = 0 use the half-line domain; two-sided time windows use the full line.
pub fn field_gagliardo_sq(u: &SampledField2D) -> f64 {
    let g = u.grid();
    let domain = if g.t_min() == 0.0 {
        Domain::HalfLine
    } else {
        Domain::FullLine
    };
    let time = g.time_grid();
    let m = g.m();
    let rows: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| {
            let row = SampledFunction1D::new(time, u.row(i).to_vec())
                .expect("row length matches its grid");
            trapezoid_weight(i, m) * gagliardo_seminorm_sq(&row, domain)
        })
        .collect();
    g.dx() * compensated_total(rows)
}

/// Norm components of a field for the requested space.
///
/// `lp_norm` is the space-time Lp norm, `grad_lp` the Lp norm of the space
/// gradient (centered differences inside, one-sided at the walls),
/// `gagliardo_sq` the time-direction energy, and `hardy_sq` the
/// space-integrated boundary term (present for `BDotZero` only, and
/// meaningful only on cylinders starting at t = 0).
pub fn field_norm_report(u: &SampledField2D, p: f64, space: FieldSpace) -> Result<NormReport> {
    if !(p.is_finite() && p > 1.0) {
        return Err(HalfwaveError::InvalidParameter(format!(
            "p must lie in (1, inf), got {p}"
        )));
    }
    let g = u.grid();
    let (m, n) = (g.m(), g.n());
    let (dx, dt) = (g.dx(), g.dt());
    let cell = dx * dt;
    let mut lp = CompensatedSum::new();
    let mut grad = CompensatedSum::new();
    for i in 0..m {
        let wi = trapezoid_weight(i, m);
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(m - 1);
        let denom = (hi - lo) as f64 * dx;
        for j in 0..n {
            let w = wi * trapezoid_weight(j, n) * cell;
            lp.add(w * u.at(i, j).abs().powf(p));
            let d = (u.at(hi, j) - u.at(lo, j)) / denom;
            grad.add(w * d.abs().powf(p));
        }
    }
    let hardy_sq = match space {
        FieldSpace::BDotZero => {
            let time = g.time_grid();
            let mut acc = CompensatedSum::new();
            for i in 0..m {
                let row = SampledFunction1D::new(time, u.row(i).to_vec())?;
                acc.add(trapezoid_weight(i, m) * hardy_term(&row)?);
            }
            Some(dx * acc.value())
        }
        FieldSpace::BDotDot | FieldSpace::BIPartial => None,
    };
    Ok(NormReport {
        lp_norm: lp.value().powf(1.0 / p),
        gagliardo_sq: field_gagliardo_sq(u),
        hardy_sq,
        grad_lp: grad.value().powf(1.0 / p),
        p,
    })
}
