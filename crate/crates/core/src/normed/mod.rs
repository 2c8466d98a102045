//! Norm oracles, Auerbach bases and separated unit vectors.
//!
//! Real `ℓ1`, `ℓ∞` and polytope norms are evaluated in exact rational
//! arithmetic, so "norm equals 1" and "distance exceeds 1" are decided
//! exactly. Other `ℓp` norms and every complex norm use `f64` with the
//! tolerances from [`Budgets`](crate::Budgets).

mod auerbach;
mod linalg;
mod norm;
mod pipeline;
mod simplex;
mod spec;
mod value;

/// Exact rational scalar.
pub type Q = num_rational::BigRational;

pub use auerbach::{
    auerbach_basis, auerbach_basis_seeded, coefficient_map, verify_auerbach, AuerbachBasis, AuerbachMethod,
    AuerbachReport,
};
pub use norm::{dual_norm_eval, norm_eval, Norm};
pub use pipeline::{
    as_complex_points, complex_separated_points, enumerate_unit_gaussian, enumerate_unit_ternary,
    plus_separated_points, plus_separated_points_with_basis, separated_points, separated_points_with_basis,
    verify_separation, SeparatedFamily, SeparationMode, SeparationReport, Tolerances, UnitTernarySet,
};
pub use spec::{Field, NormKind, NormSpec, PValue};
pub use value::{format_rational, parse_rational, Scalar, Vector};

#[doc(hidden)]
pub mod lp {
    //! Simplex-backed evaluation, exposed for cross-checks.
    use super::{Norm, Q};
    use crate::error::Result;

    pub fn norm_by_lp(norm: &Norm, v: &[Q]) -> Result<Q> {
        norm.eval_by_lp(v)
    }

    pub fn dual_by_lp(norm: &Norm, phi: &[Q]) -> Result<Q> {
        norm.dual_by_lp(phi)
    }
}
