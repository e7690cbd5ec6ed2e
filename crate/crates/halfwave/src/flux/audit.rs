//! Randomized audits of the structural conditions a flux claims.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{HalfwaveError, Result};

use super::StructuralFlux;

/// Tallies from a structural audit. `marginal_monotonicity` counts pairs
/// whose monotonicity product was positive but below the strictness floor
/// `1e-14 |xi - eta|^2`; those are logged, not treated as violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FluxAuditReport {
    pub monotonicity_violations: usize,
    pub coercivity_violations: usize,
    pub boundedness_violations: usize,
    pub marginal_monotonicity: usize,
    pub samples: usize,
}

impl FluxAuditReport {
    pub fn is_clean(&self) -> bool {
        self.monotonicity_violations == 0
            && self.coercivity_violations == 0
            && self.boundedness_violations == 0
    }

    fn absorb(&mut self, other: &FluxAuditReport) {
        self.monotonicity_violations += other.monotonicity_violations;
        self.coercivity_violations += other.coercivity_violations;
        self.boundedness_violations += other.boundedness_violations;
        self.marginal_monotonicity += other.marginal_monotonicity;
        self.samples += other.samples;
    }
}

const BATCH: usize = 4096;

/// Draws `samples` tuples `(x, t, xi, eta)` across six decades of magnitude
/// and counts violations of monotonicity, coercivity, and growth.
///
/// Work is split into fixed batches, each with its own counter-derived
/// generator, so the tallies are identical for any thread count. Every 500th
/// tuple pins `xi` to the origin to probe the removable singularity of
/// degenerate fluxes. Coercivity and growth comparisons allow `1e-10`
/// relative slack so that fluxes attaining the bounds with equality (the
/// model flux does) cannot register rounding noise as violations.
pub fn audit_flux(flux: &StructuralFlux, seed: u64, samples: usize) -> Result<FluxAuditReport> {
    if samples == 0 {
        return Err(HalfwaveError::InvalidParameter(
            "audit needs at least one sample".into(),
        ));
    }
    let batches = samples.div_ceil(BATCH);
    let partials: Vec<FluxAuditReport> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (b as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let lo = b * BATCH;
            let hi = samples.min(lo + BATCH);
            audit_batch(flux, &mut rng, lo, hi)
        })
        .collect();
    let mut report = FluxAuditReport::default();
    for partial in &partials {
        report.absorb(partial);
    }
    Ok(report)
}

fn audit_batch(
    flux: &StructuralFlux,
    rng: &mut ChaCha8Rng,
    lo: usize,
    hi: usize,
) -> FluxAuditReport {
    let mut report = FluxAuditReport::default();
    let d = flux.dim();
    let p = flux.p();
    for s in lo..hi {
        let x = rng.gen_range(-1.0..1.0);
        let t = rng.gen_range(0.0..1.0);
        let scale = 10.0_f64.powf(rng.gen_range(-3.0..3.0));
        let mut xi: Vec<f64> = (0..d).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        let eta: Vec<f64> = (0..d).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        if s % 500 == 499 {
            xi.iter_mut().for_each(|c| *c = 0.0);
        }

        let a_xi = flux.eval_vec(x, t, &xi);
        let a_eta = flux.eval_vec(x, t, &eta);

        let gap_sq: f64 = xi
            .iter()
            .zip(&eta)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if gap_sq > 0.0 {
            let product: f64 = a_xi
                .iter()
                .zip(&a_eta)
                .zip(xi.iter().zip(&eta))
                .map(|((fa, fb), (va, vb))| (fa - fb) * (va - vb))
                .sum();
            if product <= 0.0 {
                report.monotonicity_violations += 1;
            } else if product <= 1e-14 * gap_sq {
                report.marginal_monotonicity += 1;
            }
        }

        let xi_norm = xi.iter().map(|c| c * c).sum::<f64>().sqrt();
        let pairing: f64 = a_xi.iter().zip(&xi).map(|(a, b)| a * b).sum();
        let coercive_floor = flux.lambda() * xi_norm.powf(p) - flux.h_bound(x, t);
        let slack = 1e-10 * (pairing.abs() + coercive_floor.abs());
        if pairing + slack < coercive_floor {
            report.coercivity_violations += 1;
        }

        let a_norm = a_xi.iter().map(|c| c * c).sum::<f64>().sqrt();
        let growth_cap = flux.big_lambda() * xi_norm.powf(p - 1.0) + flux.big_h_bound(x, t);
        let slack = 1e-10 * (a_norm + growth_cap);
        if a_norm > growth_cap + slack {
            report.boundedness_violations += 1;
        }

        report.samples += 1;
    }
    report
}

/// Finite-difference continuity probe: at `points` random states, compares
/// `A(x, t, xi + h e)` against `A(x, t, xi)` for a small random direction
/// and counts jumps larger than `1e-2 * (1 + |A(xi)|)`. A heuristic witness,
/// not a certificate: degenerate-but-continuous fluxes (the p < 2 model at
/// the origin) pass because the value gap, not the slope, is measured.
pub fn continuity_defects(flux: &StructuralFlux, seed: u64, points: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = flux.dim();
    let mut defects = 0;
    for k in 0..points {
        let x = rng.gen_range(-1.0..1.0);
        let t = rng.gen_range(0.0..1.0);
        let scale = 10.0_f64.powf(rng.gen_range(-2.0..2.0));
        let mut xi: Vec<f64> = (0..d).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        if k % 16 == 15 {
            xi.iter_mut().for_each(|c| *c = 0.0);
        }
        let step = 1e-6 * (1.0 + norm(&xi));
        let dir: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0_f64..1.0)).collect();
        let dir_norm = norm(&dir).max(1e-12);
        let moved: Vec<f64> = xi
            .iter()
            .zip(&dir)
            .map(|(c, e)| c + step * e / dir_norm)
            .collect();
        let base = flux.eval_vec(x, t, &xi);
        let probe = flux.eval_vec(x, t, &moved);
        let jump: f64 = base
            .iter()
            .zip(&probe)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if jump > 1e-2 * (1.0 + norm(&base)) {
            defects += 1;
        }
    }
    defects
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}
