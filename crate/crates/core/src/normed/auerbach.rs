//! Auerbach bases by determinant maximization.
//!
//! If `x_1, ..., x_n` maximize `|det|` over unit vectors, the functionals
//! `x*_k` (rows of the inverse of the column matrix) have dual norm 1:
//! replacing `x_k` by any unit `y` scales the determinant by `x*_k(y)`. The
//! same identity drives the ascent: whenever `‖x*_k‖_* > 1`, the unit vector
//! attaining it strictly increases `|det|`.

use std::cmp::Ordering;

use itertools::Itertools;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linalg::{determinant, dot, from_columns, inverse};
use super::norm::Norm;
use super::spec::Field;
use super::value::{q_from_i64, q_to_f64, Scalar, Vector};
use super::Q;
use crate::config::Budgets;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuerbachMethod {
    /// Exhaustive search over tuples of ball vertices.
    Enumeration,
    /// Cyclic determinant ascent with restarts.
    Ascent,
    /// Vectors given by the caller.
    Supplied,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuerbachBasis {
    pub vectors: Vec<Vector>,
    pub functionals: Vec<Vector>,
    pub method: AuerbachMethod,
    /// `|det(x_1 ... x_n)|`.
    pub abs_det: Scalar,
}

/// Residuals of the Auerbach conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuerbachReport {
    pub exact: bool,
    /// `max |x*_a(x_b) - δ_ab|`.
    pub biorthogonality: Scalar,
    /// `max |‖x_k‖ - 1|`.
    pub vector_norms: Scalar,
    /// `max |‖x*_k‖_* - 1|`.
    pub functional_norms: Scalar,
    pub passed: bool,
}

fn same_kind(vs: &[Vector]) -> bool {
    vs.windows(2).all(|w| std::mem::discriminant(&w[0]) == std::mem::discriminant(&w[1]))
}

/// Rows of the inverse of the matrix with the given columns.
fn dual_rows(vectors: &[Vector]) -> Option<Vec<Vector>> {
    match vectors.first()? {
        Vector::Exact(_) => {
            let cols: Vec<Vec<Q>> = vectors.iter().map(|v| v.as_exact().unwrap().to_vec()).collect();
            Some(inverse(&from_columns(&cols))?.into_iter().map(Vector::Exact).collect())
        }
        Vector::Float(_) => {
            let cols: Vec<Vec<f64>> = vectors.iter().map(|v| v.to_f64().unwrap()).collect();
            Some(inverse(&from_columns(&cols))?.into_iter().map(Vector::Float).collect())
        }
        Vector::Complex(_) => {
            let cols: Vec<Vec<Complex64>> = vectors.iter().map(|v| v.to_complex()).collect();
            Some(inverse(&from_columns(&cols))?.into_iter().map(Vector::Complex).collect())
        }
    }
}

fn abs_det(vectors: &[Vector]) -> Scalar {
    match &vectors[0] {
        Vector::Exact(_) => {
            let cols: Vec<Vec<Q>> = vectors.iter().map(|v| v.as_exact().unwrap().to_vec()).collect();
            Scalar::Exact(determinant(&from_columns(&cols)).abs())
        }
        Vector::Float(_) => {
            let cols: Vec<Vec<f64>> = vectors.iter().map(|v| v.to_f64().unwrap()).collect();
            Scalar::Float { value: determinant(&from_columns(&cols)).abs(), tol: 0.0 }
        }
        Vector::Complex(_) => {
            let cols: Vec<Vec<Complex64>> = vectors.iter().map(|v| v.to_complex()).collect();
            Scalar::Float { value: determinant(&from_columns(&cols)).norm(), tol: 0.0 }
        }
    }
}

/// Bilinear pairing `φ(x) = Σ φ_j x_j`.
fn pair(phi: &Vector, x: &Vector) -> Pairing {
    match (phi, x) {
        (Vector::Exact(a), Vector::Exact(b)) => Pairing::Exact(dot(a, b)),
        (Vector::Complex(_), _) | (_, Vector::Complex(_)) => {
            Pairing::Complex(phi.to_complex().iter().zip(x.to_complex()).map(|(a, b)| a * b).sum())
        }
        _ => Pairing::Complex(Complex64::new(
            phi.to_f64().unwrap().iter().zip(x.to_f64().unwrap()).map(|(a, b)| a * b).sum(),
            0.0,
        )),
    }
}

enum Pairing {
    Exact(Q),
    Complex(Complex64),
}

impl AuerbachBasis {
    /// Builds the biorthogonal system for caller-supplied vectors. The result
    /// is an Auerbach basis only if [`verify_auerbach`] says so.
    pub fn from_vectors(vectors: Vec<Vector>) -> Result<Self> {
        Self::with_method(vectors, AuerbachMethod::Supplied)
    }

    fn with_method(vectors: Vec<Vector>, method: AuerbachMethod) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::InvalidParameter("a basis needs at least one vector".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
        }
        if !same_kind(&vectors) {
            return Err(Error::InvalidParameter("basis vectors mix exact and float entries".into()));
        }
        let functionals = dual_rows(&vectors)
            .ok_or_else(|| Error::InvalidParameter("basis vectors are linearly dependent".into()))?;
        let abs_det = abs_det(&vectors);
        Ok(Self { vectors, functionals, method, abs_det })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// The standard basis in the arithmetic `norm` uses.
    pub fn identity(norm: &Norm) -> Result<Self> {
        let n = norm.dim();
        let vectors = (0..n).map(|k| unit_coordinate(norm, k)).collect();
        Self::from_vectors(vectors)
    }

    /// `Σ a_k x_k` for small integer coefficients in the basis arithmetic.
    pub fn combine_real(&self, coeffs: &[i8]) -> Vector {
        let mut acc = zero_like(&self.vectors[0]);
        for (c, x) in coeffs.iter().zip(&self.vectors) {
            for _ in 0..c.unsigned_abs() {
                acc = acc.combine(x, c.signum());
            }
        }
        acc
    }

    /// `Σ (a_k + i b_k) x_k`.
    pub fn combine_complex(&self, coeffs: &[(i8, i8)]) -> Vector {
        let n = self.dim();
        let mut acc = vec![Complex64::new(0.0, 0.0); n];
        for (&(a, b), x) in coeffs.iter().zip(&self.vectors) {
            let c = Complex64::new(f64::from(a), f64::from(b));
            for (s, xi) in acc.iter_mut().zip(x.to_complex()) {
                *s += c * xi;
            }
        }
        Vector::Complex(acc)
    }
}

fn zero_like(v: &Vector) -> Vector {
    match v {
        Vector::Exact(x) => Vector::Exact(vec![Q::zero(); x.len()]),
        Vector::Float(x) => Vector::Float(vec![0.0; x.len()]),
        Vector::Complex(x) => Vector::Complex(vec![Complex64::new(0.0, 0.0); x.len()]),
    }
}

fn unit_coordinate(norm: &Norm, k: usize) -> Vector {
    let n = norm.dim();
    if norm.spec().field() == Field::Complex {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[k] = Complex64::new(1.0, 0.0);
        return normalize(norm, Vector::Complex(v)).expect("nonzero");
    }
    if norm.is_exact() {
        let v = (0..n).map(|j| if j == k { Q::one() } else { Q::zero() }).collect();
        return normalize(norm, Vector::Exact(v)).expect("nonzero");
    }
    let mut v = vec![0.0; n];
    v[k] = 1.0;
    normalize(norm, Vector::Float(v)).expect("nonzero")
}

fn normalize(norm: &Norm, v: Vector) -> Option<Vector> {
    let s = norm.eval(&v).ok()?;
    match (s, v) {
        (Scalar::Exact(q), Vector::Exact(x)) if !q.is_zero() => Some(Vector::Exact(x.iter().map(|a| a / &q).collect())),
        (Scalar::Float { value, .. }, Vector::Float(x)) if value > 0.0 => {
            Some(Vector::Float(x.iter().map(|a| a / value).collect()))
        }
        (Scalar::Float { value, .. }, Vector::Complex(x)) if value > 0.0 => {
            Some(Vector::Complex(x.iter().map(|a| a / value).collect()))
        }
        _ => None,
    }
}

/// Checks biorthogonality and the unit norms of vectors and functionals.
/// Exact norms must give residuals of exactly zero; float norms pass within `τ`.
pub fn verify_auerbach(basis: &AuerbachBasis, norm: &Norm) -> Result<AuerbachReport> {
    let n = norm.dim();
    if basis.vectors.len() != n || basis.functionals.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: basis.vectors.len() });
    }
    let exact = norm.is_exact();
    let tau = norm.tau();
    let mut bio_q = Q::zero();
    let mut bio_f: f64 = 0.0;
    for (a, phi) in basis.functionals.iter().enumerate() {
        for (b, x) in basis.vectors.iter().enumerate() {
            match pair(phi, x) {
                Pairing::Exact(v) => {
                    let r = if a == b { v - Q::one() } else { v }.abs();
                    bio_f = bio_f.max(q_to_f64(&r));
                    bio_q = bio_q.max(r);
                }
                Pairing::Complex(v) => {
                    let d = if a == b { v - 1.0 } else { v };
                    bio_f = bio_f.max(d.norm());
                    bio_q = bio_q.max(Q::one()); // inexact data never counts as an exact pass
                }
            }
        }
    }
    let worst = |values: Vec<Scalar>| -> Scalar {
        values.into_iter().map(|s| s.minus_one().abs()).max_by(|a, b| a.compare(b)).unwrap_or(Scalar::Exact(Q::zero()))
    };
    let vector_norms = worst(basis.vectors.iter().map(|x| norm.eval(x)).collect::<Result<_>>()?);
    let functional_norms = worst(basis.functionals.iter().map(|f| norm.dual(f)).collect::<Result<_>>()?);
    let (biorthogonality, passed) = if exact {
        let ok = bio_q.is_zero()
            && vector_norms.as_exact().is_some_and(Zero::is_zero)
            && functional_norms.as_exact().is_some_and(Zero::is_zero);
        (Scalar::Exact(bio_q), ok)
    } else {
        let ok = bio_f <= tau && vector_norms.approx() <= tau && functional_norms.approx() <= tau;
        (Scalar::Float { value: bio_f, tol: tau }, ok)
    };
    Ok(AuerbachReport { exact, biorthogonality, vector_norms, functional_norms, passed })
}

/// The coefficient map `x ↦ (x*_k(x))_k`.
pub fn coefficient_map(basis: &AuerbachBasis, x: &Vector) -> Result<Vector> {
    if x.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: x.dim() });
    }
    let pairs: Vec<Pairing> = basis.functionals.iter().map(|phi| pair(phi, x)).collect();
    Ok(match (&basis.functionals[0], x) {
        (Vector::Exact(_), Vector::Exact(_)) => Vector::Exact(
            pairs.into_iter().map(|p| if let Pairing::Exact(q) = p { q } else { unreachable!() }).collect(),
        ),
        (Vector::Complex(_), _) | (_, Vector::Complex(_)) => Vector::Complex(
            pairs.into_iter().map(|p| if let Pairing::Complex(z) = p { z } else { unreachable!() }).collect(),
        ),
        _ => Vector::Float(
            pairs.into_iter().map(|p| if let Pairing::Complex(z) = p { z.re } else { unreachable!() }).collect(),
        ),
    })
}

/// An Auerbach basis for `norm` with the default seed.
pub fn auerbach_basis(norm: &Norm, budgets: &Budgets) -> Result<AuerbachBasis> {
    auerbach_basis_seeded(norm, budgets, 0)
}

pub fn auerbach_basis_seeded(norm: &Norm, budgets: &Budgets, seed: u64) -> Result<AuerbachBasis> {
    if let Some(b) = by_enumeration(norm, budgets)? {
        return Ok(b);
    }
    by_ascent(norm, budgets, seed)
}

/// Sort key for candidate vertices: per coordinate, positive before negative
/// before zero, larger magnitude first.
fn vertex_key(v: &[Q]) -> Vec<(u8, Q)> {
    v.iter()
        .map(|x| {
            let class = if x.is_positive() {
                0
            } else if x.is_negative() {
                1
            } else {
                2
            };
            (class, -x.abs())
        })
        .collect()
}

fn by_enumeration(norm: &Norm, budgets: &Budgets) -> Result<Option<AuerbachBasis>> {
    let n = norm.dim();
    let cap = budgets.auerbach_enumeration_max;
    // n-th root bound on the vertex count so the list is never built when too large
    let max_count = (1u64..).take_while(|c| c.checked_pow(n as u32).is_some_and(|p| p <= cap)).last().unwrap_or(0);
    let Some(all) = norm.ball_vertices(max_count) else { return Ok(None) };
    // one representative per antipodal pair: the last nonzero coordinate positive
    let mut half: Vec<Vec<Q>> =
        all.into_iter().filter(|v| v.iter().rev().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())).collect();
    half.sort_by_key(|v| vertex_key(v));
    half.dedup();
    let mut best: Option<(Q, Vec<usize>)> = None;
    for combo in (0..half.len()).combinations(n) {
        let cols: Vec<Vec<Q>> = combo.iter().map(|&i| half[i].clone()).collect();
        let d = determinant(&from_columns(&cols)).abs();
        if best.as_ref().map_or(!d.is_zero(), |(b, _)| d > *b) {
            best = Some((d, combo));
        }
    }
    let Some((_, combo)) = best else { return Ok(None) };
    let mut cols: Vec<Vec<Q>> = combo.iter().map(|&i| half[i].clone()).collect();
    if determinant(&from_columns(&cols)).is_negative() {
        let last = cols.last_mut().unwrap();
        *last = last.iter().map(|x| -x).collect();
    }
    let basis = AuerbachBasis::with_method(cols.into_iter().map(Vector::Exact).collect(), AuerbachMethod::Enumeration)?;
    let report = verify_auerbach(&basis, norm)?;
    if !report.passed {
        return Err(Error::Defect(format!("vertex enumeration produced a non-Auerbach basis: {report:?}")));
    }
    Ok(Some(basis))
}

const MAX_SWEEPS: usize = 500;
const MIN_GAIN: f64 = 1e-12;

fn random_start(norm: &Norm, rng: &mut ChaCha8Rng) -> Option<Vec<Vector>> {
    let n = norm.dim();
    let vs: Vec<Vector> = (0..n)
        .map(|_| {
            if norm.spec().field() == Field::Complex {
                Vector::Complex(
                    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
                )
            } else if norm.is_exact() {
                Vector::Exact((0..n).map(|_| q_from_i64(rng.gen_range(-3..=3))).collect())
            } else {
                Vector::Float((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            }
        })
        .collect();
    let vs: Vec<Vector> = vs.into_iter().map(|v| normalize(norm, v)).collect::<Option<_>>()?;
    dual_rows(&vs).map(|_| vs)
}

/// Runs the ascent from `start`; returns the final vectors.
fn ascend(norm: &Norm, mut xs: Vec<Vector>) -> Result<Vec<Vector>> {
    for _ in 0..MAX_SWEEPS {
        let mut improved = false;
        for k in 0..xs.len() {
            let Some(rows) = dual_rows(&xs) else {
                return Err(Error::Defect("ascent reached a singular frame".into()));
            };
            let (d, y) = norm.dual_argmax(&rows[k])?;
            let gain = match &d {
                Scalar::Exact(q) => *q > Q::one(),
                Scalar::Float { value, .. } => *value > 1.0 + MIN_GAIN,
            };
            if gain {
                xs[k] = y;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    Ok(xs)
}

fn flat_key(vs: &[Vector]) -> Vec<f64> {
    vs.iter()
        .flat_map(|v| match v {
            Vector::Complex(z) => z.iter().flat_map(|c| [c.re, c.im]).collect::<Vec<_>>(),
            other => other.to_f64().unwrap(),
        })
        .collect()
}

fn better(a: &AuerbachBasis, b: &AuerbachBasis) -> bool {
    let ord = match (&a.abs_det, &b.abs_det) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x.cmp(y),
        (x, y) => {
            let (x, y) = (x.approx(), y.approx());
            if (x - y).abs() <= 1e-9 * x.max(y) {
                Ordering::Equal
            } else {
                x.total_cmp(&y)
            }
        }
    };
    match ord {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            let (ka, kb) = (flat_key(&a.vectors), flat_key(&b.vectors));
            ka.iter().zip(&kb).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()) == Some(Ordering::Greater)
        }
    }
}

fn by_ascent(norm: &Norm, budgets: &Budgets, seed: u64) -> Result<AuerbachBasis> {
    let restarts = budgets.auerbach_restarts.max(1);
    let results: Vec<Result<Option<(AuerbachBasis, AuerbachReport)>>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                AuerbachBasis::identity(norm)?.vectors
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
                match random_start(norm, &mut rng) {
                    Some(s) => s,
                    None => return Ok(None),
                }
            };
            let xs = ascend(norm, start)?;
            let basis = AuerbachBasis::with_method(xs, AuerbachMethod::Ascent)?;
            let report = verify_auerbach(&basis, norm)?;
            Ok(Some((basis, report)))
        })
        .collect();
    let mut best: Option<AuerbachBasis> = None;
    let mut closest: Option<AuerbachReport> = None;
    for r in results {
        let Some((basis, report)) = r? else { continue };
        if report.passed {
            if best.as_ref().is_none_or(|b| better(&basis, b)) {
                best = Some(basis);
            }
        } else {
            closest = Some(report);
        }
    }
    best.ok_or_else(|| {
        Error::VerificationFailed(format!("no restart produced an Auerbach basis; last residuals: {closest:?}"))
    })
}
