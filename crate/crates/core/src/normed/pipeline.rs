//! Separated unit vectors from free subsets of the unit ternary combinations.
//!
//! With an Auerbach basis `x_k`, the coefficient map is a norm-one operator
//! into `ℓ∞`, so a combination `z` with `‖z‖ <= 1` has coefficients in
//! `[-1, 1]`. If `z = z_a - z_b` for cube coefficient vectors `a ≠ b`, then
//! `‖z‖ <= 1` forces `a - b` into the unit combinations. A difference-free
//! subset therefore gives points at mutual distance strictly above 1; the sum
//! and Gaussian variants work the same way.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::auerbach::{auerbach_basis, verify_auerbach, AuerbachBasis};
use super::norm::Norm;
use super::spec::{Field, NormSpec};
use super::value::{Scalar, Vector};
use super::Q;
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::freeset::{find_difference_free, find_sum_free};
use crate::gaussian_bridge::{find_gaussian_difference_free, gaussian_cube};
use crate::ternary::{cube_vectors, GaussianSet, GaussianVector, SymmetricCubeSet, TernaryVector};

/// Coefficient vectors whose basis combination has norm one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitTernarySet {
    pub dim: usize,
    pub members: Vec<TernaryVector>,
    pub exact: bool,
    /// Membership tolerance for float norms.
    pub tau: Option<f64>,
}

impl UnitTernarySet {
    pub fn to_cube_set(&self) -> Result<SymmetricCubeSet> {
        SymmetricCubeSet::new(self.dim, self.members.iter().cloned())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationMode {
    /// `‖z_k - z_l‖ > 1`, `n + 1` points.
    Difference,
    /// `‖z_k + z_l‖ > 1`, `n` points.
    Sum,
    /// `‖z_k - z_l‖ > 1` over the complex field, `2n + 2` points.
    Complex,
}

impl SeparationMode {
    pub fn sign(self) -> i8 {
        match self {
            SeparationMode::Sum => 1,
            _ => -1,
        }
    }

    /// The family size the construction guarantees in dimension `n`.
    pub fn expected_size(self, n: usize) -> usize {
        match self {
            SeparationMode::Difference => n + 1,
            SeparationMode::Sum => n,
            SeparationMode::Complex => 2 * n + 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SeparationMode::Difference => "diff",
            SeparationMode::Sum => "sum",
            SeparationMode::Complex => "complex",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tau: f64,
    pub mu_min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatedFamily {
    pub mode: SeparationMode,
    pub spec: NormSpec,
    pub basis: AuerbachBasis,
    /// Number of unit coefficient vectors the free subset was drawn from.
    pub unit_combinations: usize,
    /// Coefficient witness in cube notation.
    pub coefficients: Vec<String>,
    pub points: Vec<Vector>,
    /// `‖z_k ∓ z_l‖` for all `k, l`.
    pub pairwise: Vec<Vec<Scalar>>,
    /// `min_{k<l} ‖z_k ∓ z_l‖ - 1`, absent for fewer than two points.
    pub margin: Option<Scalar>,
    pub tolerances: Option<Tolerances>,
}

impl SeparatedFamily {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub exact: bool,
    pub size: usize,
    pub expected_size: usize,
    /// `max |‖z_k‖ - 1|`.
    pub unit_residual: Scalar,
    pub margin: Option<Scalar>,
    pub units_ok: bool,
    pub margin_ok: bool,
    pub passed: bool,
}

fn pairwise_table(norm: &Norm, points: &[Vector], sign: i8) -> Result<Vec<Vec<Scalar>>> {
    points.iter().map(|a| points.iter().map(|b| norm.eval(&a.combine(b, sign))).collect()).collect()
}

fn min_off_diagonal(table: &[Vec<Scalar>]) -> Option<Scalar> {
    let mut best: Option<Scalar> = None;
    for (k, row) in table.iter().enumerate() {
        for v in &row[k + 1..] {
            if best.as_ref().is_none_or(|b| v.compare(b).is_lt()) {
                best = Some(v.clone());
            }
        }
    }
    best.map(|b| b.minus_one())
}

/// Recomputes unit norms and pairwise norms from the points alone.
pub fn verify_separation(family: &SeparatedFamily, norm: &Norm, budgets: &Budgets) -> Result<SeparationReport> {
    let exact = norm.is_exact();
    let sign = family.mode.sign();
    let mut unit = Scalar::Exact(Q::zero());
    for z in &family.points {
        if z.dim() != norm.dim() {
            return Err(Error::DimensionMismatch { expected: norm.dim(), found: z.dim() });
        }
        let r = norm.eval(z)?.minus_one().abs();
        if r.compare(&unit).is_gt() || !r.is_exact() && unit.is_exact() {
            unit = r;
        }
    }
    let mut margin: Option<Scalar> = None;
    for (k, a) in family.points.iter().enumerate() {
        for b in &family.points[k + 1..] {
            let v = norm.eval(&a.combine(b, sign))?.minus_one();
            if margin.as_ref().is_none_or(|m| v.compare(m).is_lt()) {
                margin = Some(v);
            }
        }
    }
    let units_ok = match &unit {
        Scalar::Exact(q) => exact && q.is_zero(),
        Scalar::Float { value, .. } => !exact && *value <= budgets.tau,
    };
    let margin_ok = match &margin {
        None => true,
        Some(Scalar::Exact(q)) => exact && q.is_positive(),
        Some(Scalar::Float { value, .. }) => !exact && *value >= budgets.mu_min,
    };
    Ok(SeparationReport {
        exact,
        size: family.points.len(),
        expected_size: family.mode.expected_size(norm.dim()),
        unit_residual: unit,
        margin,
        units_ok,
        margin_ok,
        passed: units_ok && margin_ok,
    })
}

fn is_unit(norm: &Norm, s: &Scalar) -> bool {
    match s {
        Scalar::Exact(q) => q.is_one(),
        Scalar::Float { value, .. } => (value - 1.0).abs() <= norm.tau(),
    }
}

fn require_real(norm: &Norm) -> Result<()> {
    if norm.spec().field() != Field::Real {
        return Err(Error::InvalidParameter("this pipeline needs a real norm".into()));
    }
    Ok(())
}

fn require_verified(basis: &AuerbachBasis, norm: &Norm) -> Result<()> {
    let report = verify_auerbach(basis, norm)?;
    if !report.passed {
        return Err(Error::VerificationFailed(format!("not an Auerbach basis: {report:?}")));
    }
    Ok(())
}

/// All `a ∈ C_N \ {0}` with `‖Σ a_k x_k‖ = 1`.
pub fn enumerate_unit_ternary(basis: &AuerbachBasis, norm: &Norm, budgets: &Budgets) -> Result<UnitTernarySet> {
    require_real(norm)?;
    let n = norm.dim();
    if n > budgets.unit_ternary_max_dim {
        return Err(Error::BudgetExceeded {
            what: "unit ternary enumeration dimension",
            required: n as u128,
            budget: budgets.unit_ternary_max_dim as u128,
        });
    }
    if basis.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: basis.dim() });
    }
    let mut members: Vec<TernaryVector> = cube_vectors(n)
        .par_bridge()
        .filter(|a| !a.is_zero())
        .map(|a| {
            let s = norm.eval(&basis.combine_real(&a.coords()))?;
            Ok(is_unit(norm, &s).then_some(a))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    members.sort();
    Ok(UnitTernarySet { dim: n, members, exact: norm.is_exact(), tau: (!norm.is_exact()).then_some(norm.tau()) })
}

/// All nonzero `a ∈ V_n` with `‖Σ a_k x_k‖ = 1` within `τ`.
pub fn enumerate_unit_gaussian(basis: &AuerbachBasis, norm: &Norm, budgets: &Budgets) -> Result<Vec<GaussianVector>> {
    let n = norm.dim();
    if n > budgets.gaussian_coeff_max_dim {
        return Err(Error::BudgetExceeded {
            what: "Gaussian coefficient enumeration dimension",
            required: n as u128,
            budget: budgets.gaussian_coeff_max_dim as u128,
        });
    }
    let mut members: Vec<GaussianVector> = gaussian_cube(n)?
        .into_par_iter()
        .filter(|a| !a.is_zero())
        .map(|a| {
            let s = norm.eval(&basis.combine_complex(&a.parts()))?;
            Ok(is_unit(norm, &s).then_some(a))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    members.sort();
    Ok(members)
}

fn assemble(
    norm: &Norm,
    mode: SeparationMode,
    basis: AuerbachBasis,
    unit_combinations: usize,
    coefficients: Vec<String>,
    points: Vec<Vector>,
    budgets: &Budgets,
) -> Result<SeparatedFamily> {
    let pairwise = pairwise_table(norm, &points, mode.sign())?;
    let margin = min_off_diagonal(&pairwise);
    let tolerances = (!norm.is_exact()).then_some(Tolerances { tau: budgets.tau, mu_min: budgets.mu_min });
    let family = SeparatedFamily {
        mode,
        spec: norm.spec().clone(),
        basis,
        unit_combinations,
        coefficients,
        points,
        pairwise,
        margin,
        tolerances,
    };
    let report = verify_separation(&family, norm, budgets).map_err(Error::at("verify"))?;
    if !report.passed {
        return Err(Error::at("verify")(Error::VerificationFailed(format!("{report:?}"))));
    }
    Ok(family)
}

fn real_family(norm: &Norm, basis: AuerbachBasis, mode: SeparationMode, budgets: &Budgets) -> Result<SeparatedFamily> {
    let units = enumerate_unit_ternary(&basis, norm, budgets).map_err(Error::at("unit combinations"))?;
    let n = norm.dim();
    let mut members = units.members.clone();
    let cert = match mode {
        SeparationMode::Difference => {
            let a = SymmetricCubeSet::new(n, members).map_err(Error::at("unit combinations"))?;
            find_difference_free(&a, budgets).map_err(Error::at("free subset"))?
        }
        _ => {
            // zero joins the ground set so that antipodal pairs, whose sum has norm 0, conflict
            members.push(TernaryVector::zero(n)?);
            let a = SymmetricCubeSet::new(n, members).map_err(Error::at("unit combinations"))?;
            find_sum_free(&a, budgets).map_err(Error::at("free subset"))?
        }
    };
    let points = cert.witness.iter().map(|a| basis.combine_real(&a.coords())).collect();
    let coefficients = cert.witness.iter().map(|a| a.to_string()).collect();
    assemble(norm, mode, basis, units.members.len(), coefficients, points, budgets)
}

/// `n + 1` unit vectors with pairwise distances above 1.
pub fn separated_points(norm: &Norm, budgets: &Budgets) -> Result<SeparatedFamily> {
    require_real(norm)?;
    let basis = auerbach_basis(norm, budgets).map_err(Error::at("auerbach"))?;
    real_family(norm, basis, SeparationMode::Difference, budgets)
}

/// As [`separated_points`], starting from a caller-supplied Auerbach basis.
pub fn separated_points_with_basis(norm: &Norm, basis: AuerbachBasis, budgets: &Budgets) -> Result<SeparatedFamily> {
    require_real(norm)?;
    require_verified(&basis, norm).map_err(Error::at("auerbach"))?;
    real_family(norm, basis, SeparationMode::Difference, budgets)
}

/// `n` unit vectors with pairwise sums of norm above 1.
pub fn plus_separated_points(norm: &Norm, budgets: &Budgets) -> Result<SeparatedFamily> {
    require_real(norm)?;
    let basis = auerbach_basis(norm, budgets).map_err(Error::at("auerbach"))?;
    real_family(norm, basis, SeparationMode::Sum, budgets)
}

pub fn plus_separated_points_with_basis(
    norm: &Norm,
    basis: AuerbachBasis,
    budgets: &Budgets,
) -> Result<SeparatedFamily> {
    require_real(norm)?;
    require_verified(&basis, norm).map_err(Error::at("auerbach"))?;
    real_family(norm, basis, SeparationMode::Sum, budgets)
}

/// `2n + 2` unit vectors with pairwise distances above 1 in a complex space.
pub fn complex_separated_points(norm: &Norm, budgets: &Budgets) -> Result<SeparatedFamily> {
    if norm.spec().field() != Field::Complex {
        return Err(Error::InvalidParameter("this pipeline needs a complex norm".into()));
    }
    let basis = auerbach_basis(norm, budgets).map_err(Error::at("auerbach"))?;
    let units = enumerate_unit_gaussian(&basis, norm, budgets).map_err(Error::at("unit combinations"))?;
    let count = units.len();
    let a = GaussianSet::new(norm.dim(), units).map_err(Error::at("unit combinations"))?;
    let cert = find_gaussian_difference_free(&a, budgets).map_err(Error::at("free subset"))?;
    let points = cert.witness.iter().map(|g| basis.combine_complex(&g.parts())).collect();
    let coefficients = cert.witness.iter().map(|g| g.to_string()).collect();
    assemble(norm, SeparationMode::Complex, basis, count, coefficients, points, budgets)
}

/// Points of a complex family as plain complex numbers, for display.
pub fn as_complex_points(family: &SeparatedFamily) -> Vec<Vec<Complex64>> {
    family.points.iter().map(Vector::to_complex).collect()
}

#[cfg(test)]
mod tests {
    use super::super::spec::PValue;
    use super::*;

    fn norm(spec: NormSpec) -> Norm {
        Norm::new(spec, &Budgets::default()).unwrap()
    }

    fn one() -> Scalar {
        Scalar::Exact(Q::one())
    }

    #[test]
    fn unit_ternary_examples() {
        let b = Budgets::default();
        let nm = norm(NormSpec::linf(2).unwrap());
        let id = AuerbachBasis::identity(&nm).unwrap();
        assert_eq!(enumerate_unit_ternary(&id, &nm, &b).unwrap().members.len(), 8);
        let nm = norm(NormSpec::l1(3).unwrap());
        let id = AuerbachBasis::identity(&nm).unwrap();
        let e = enumerate_unit_ternary(&id, &nm, &b).unwrap();
        assert_eq!(e.to_cube_set().unwrap().to_strings(), ["+00", "-00", "0+0", "0-0", "00+", "00-"]);
        let nm = norm(NormSpec::l2(2).unwrap());
        let id = AuerbachBasis::identity(&nm).unwrap();
        let e = enumerate_unit_ternary(&id, &nm, &b).unwrap();
        assert_eq!(e.members.len(), 4);
        assert_eq!(e.tau, Some(1e-9));
    }

    #[test]
    fn l1_difference_family() {
        let b = Budgets::default();
        let nm = norm(NormSpec::l1(3).unwrap());
        let f = separated_points(&nm, &b).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.margin, Some(one()));
        let expected: Vec<Vector> =
            [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]].iter().map(|v| Vector::exact_from_i64(v)).collect();
        assert_eq!(f.points, expected);
        assert!(verify_separation(&f, &nm, &b).unwrap().passed);
    }

    #[test]
    fn sup_norm_families() {
        let b = Budgets::default();
        let nm = norm(NormSpec::linf(2).unwrap());
        let id = AuerbachBasis::identity(&nm).unwrap();
        let f = separated_points_with_basis(&nm, id, &b).unwrap();
        let expected: Vec<Vector> = [[1, 1], [1, -1], [-1, 1]].iter().map(|v| Vector::exact_from_i64(v)).collect();
        assert_eq!(f.points, expected);
        assert_eq!(f.margin, Some(one()));
        let f = plus_separated_points(&nm, &b).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.margin.unwrap().compare(&Scalar::Exact(Q::zero())).is_gt());
        let nm = norm(NormSpec::l1(2).unwrap());
        let f = plus_separated_points(&nm, &b).unwrap();
        assert_eq!(f.points, vec![Vector::exact_from_i64(&[1, 0]), Vector::exact_from_i64(&[0, 1])]);
    }

    #[test]
    fn tampered_duplicate_fails() {
        let b = Budgets::default();
        let nm = norm(NormSpec::l1(3).unwrap());
        let mut f = separated_points(&nm, &b).unwrap();
        f.points[1] = f.points[0].clone();
        let r = verify_separation(&f, &nm, &b).unwrap();
        assert!(!r.passed);
        assert_eq!(r.margin, Some(Scalar::Exact(-Q::one())));
    }

    #[test]
    fn complex_sup_norm() {
        let b = Budgets::default();
        let nm = norm(NormSpec::complex_lp(1, PValue::Infinity).unwrap());
        let f = complex_separated_points(&nm, &b).unwrap();
        assert_eq!(f.len(), 4);
        assert!((f.margin.as_ref().unwrap().approx() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        let nm = norm(NormSpec::complex_lp(2, PValue::Infinity).unwrap());
        assert_eq!(complex_separated_points(&nm, &b).unwrap().len(), 6);
    }

    #[test]
    fn complex_family_beats_the_underlying_real_space() {
        let b = Budgets::default();
        let complex = complex_separated_points(&norm(NormSpec::complex_lp(2, PValue::Infinity).unwrap()), &b).unwrap();
        let real = separated_points(&norm(NormSpec::realified_lp(4, PValue::Infinity).unwrap()), &b).unwrap();
        assert_eq!((complex.len(), real.len()), (6, 5));
    }

    #[test]
    fn euclidean_margin_is_reported() {
        let b = Budgets::default();
        let nm = norm(NormSpec::l2(3).unwrap());
        let f = separated_points(&nm, &b).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.margin.unwrap().approx() >= b.mu_min);
        assert!(f.tolerances.is_some());
    }
}
