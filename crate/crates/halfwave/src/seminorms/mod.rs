//! Norms, seminorms, and structural operators for the anisotropic function
//! spaces behind the parabolic theory.
//!
//! The central object is the order-1/2 Gagliardo double integral
//! `int int |u(s) - u(t)|^2 / (s - t)^2 ds dt`, which equals `2 pi` times the
//! squared L2 norm of the backward half-derivative for decaying functions.
//! Around it sit the weighted boundary (Hardy) term that encodes vanishing
//! data at t = 0, the mean-oscillation comparison, affine cut-offs, the
//! symmetric and zero extensions that move between half-line and full-line
//! pictures, and the field-level norm reports that integrate the per-fiber
//! quantities over space.

mod field;
mod gagliardo;
mod operators;

pub use field::{field_gagliardo_sq, field_norm_report, FieldSpace, NormReport};
pub use gagliardo::{gagliardo_seminorm_sq, vmo_defect, Domain};
pub use operators::{cutoff, extend_symmetric, extend_zero, hardy_term};
