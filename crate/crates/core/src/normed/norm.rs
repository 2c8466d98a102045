//! Norm and dual-norm evaluation.
//!
//! Polytope norms keep both descriptions when they are cheap to obtain: the
//! facet functionals give the norm as `max |<f, v>|`, the ball vertices give
//! the dual norm as `max |<φ, x>|`. The missing description is computed once
//! by enumerating vertices of the polar; when that exceeds the budget the
//! exact simplex answers each query instead.

use itertools::Itertools;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::linalg::{dot, inverse};
use super::simplex::support;
use super::spec::{Field, NormKind, NormSpec, PValue};
use super::value::{Scalar, Vector};
use super::Q;
use crate::config::Budgets;
use crate::error::{Error, Result};

/// Sign-normalizes a nonzero vector so that its first nonzero entry is positive.
fn canonical_sign(v: Vec<Q>) -> Vec<Q> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Vertices of `{y : |<r, y>| <= 1 for all rows r}`, one per antipodal pair,
/// or `None` when more than `max_solves` candidate points would be needed.
pub(crate) fn polar_vertices(rows: &[Vec<Q>], dim: usize, max_solves: u64) -> Option<Vec<Vec<Q>>> {
    let mut rows: Vec<Vec<Q>> =
        rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().map(canonical_sign).collect();
    rows.sort();
    rows.dedup();
    let subsets = binomial(rows.len() as u64, dim as u64)?;
    let solves = subsets.checked_mul(1u64.checked_shl(dim as u32 - 1)?)?;
    if solves > max_solves {
        return None;
    }
    let mut out = Vec::new();
    for subset in (0..rows.len()).combinations(dim) {
        let m: Vec<Vec<Q>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let Some(inv) = inverse(&m) else { continue };
        for signs in 0u64..1 << (dim - 1) {
            // the first sign stays +1; the antipodal point is the same vertex pair
            let s: Vec<Q> =
                (0..dim).map(|j| if j > 0 && signs >> (j - 1) & 1 == 1 { -Q::one() } else { Q::one() }).collect();
            let y: Vec<Q> = inv.iter().map(|row| dot(row, &s)).collect();
            if rows.iter().all(|r| dot(r, &y).abs() <= Q::one()) {
                out.push(canonical_sign(y));
            }
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let mut acc: u64 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

#[derive(Clone, Debug)]
struct Polytope {
    /// Functionals `f` with norm `max |<f, v>|`, when known.
    facets: Option<Vec<Vec<Q>>>,
    /// Unit-norm points whose symmetric hull is the ball, when known.
    vertices: Option<Vec<Vec<Q>>>,
    /// Rows of the original description, for the simplex fallback.
    source: Vec<Vec<Q>>,
}

/// A norm ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct Norm {
    spec: NormSpec,
    tau: f64,
    poly: Option<Polytope>,
}

impl Norm {
    pub fn new(spec: NormSpec, budgets: &Budgets) -> Result<Self> {
        let n = spec.dim();
        let poly = match spec.kind() {
            NormKind::Lp(_) | NormKind::RealifiedLp(_) => None,
            NormKind::PolytopeFacets(rows) => Some(Polytope {
                facets: Some(rows.clone()),
                vertices: polar_vertices(rows, n, budgets.polar_enumeration_max),
                source: rows.clone(),
            }),
            NormKind::PolytopeVertices(points) => {
                let facets = polar_vertices(points, n, budgets.polar_enumeration_max);
                let mut p = Polytope { facets, vertices: None, source: points.clone() };
                // points strictly inside the ball are not unit vectors; drop them
                let mut unit = Vec::new();
                for x in points {
                    if gauge(&p, x)?.is_one() {
                        unit.push(canonical_sign(x.clone()));
                    }
                }
                unit.sort();
                unit.dedup();
                p.vertices = Some(unit);
                Some(p)
            }
        };
        Ok(Self { spec, tau: budgets.tau, poly })
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn is_exact(&self) -> bool {
        self.spec.is_exact()
    }

    fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.dim() });
        }
        Ok(())
    }

    fn exact_input<'a>(&self, v: &'a Vector) -> Result<&'a [Q]> {
        v.as_exact()
            .ok_or_else(|| Error::InvalidParameter("this norm is evaluated exactly and needs rational input".into()))
    }

    fn float(&self, value: f64) -> Scalar {
        Scalar::Float { value, tol: self.tau }
    }

    fn p(&self) -> Option<&PValue> {
        match self.spec.kind() {
            NormKind::Lp(p) | NormKind::RealifiedLp(p) => Some(p),
            _ => None,
        }
    }

    pub fn eval(&self, v: &Vector) -> Result<Scalar> {
        self.check_dim(v)?;
        if self.spec.field() == Field::Complex {
            let z = v.to_complex();
            return Ok(self.float(lp_moduli(&z.iter().map(|c| c.norm()).collect::<Vec<_>>(), self.p().unwrap())));
        }
        match self.spec.kind() {
            NormKind::Lp(p) if self.spec.is_exact() => {
                let v = self.exact_input(v)?;
                Ok(Scalar::Exact(if p.is_one() { l1_q(v) } else { linf_q(v) }))
            }
            NormKind::Lp(p) => {
                let x = v.to_f64().expect("real input");
                Ok(self.float(lp_moduli(&x.iter().map(|a| a.abs()).collect::<Vec<_>>(), p)))
            }
            NormKind::RealifiedLp(p) => {
                let x = v.to_f64().expect("real input");
                Ok(self.float(lp_moduli(&x.chunks(2).map(|c| c[0].hypot(c[1])).collect::<Vec<_>>(), p)))
            }
            _ => {
                let v = self.exact_input(v)?;
                gauge(self.poly.as_ref().expect("polytope"), v).map(Scalar::Exact)
            }
        }
    }

    /// Norm of a polytope spec through the simplex, bypassing precomputed data.
    pub(crate) fn eval_by_lp(&self, v: &[Q]) -> Result<Q> {
        let poly = self.poly.as_ref().ok_or_else(|| Error::Unsupported("not a polytope norm".into()))?;
        match self.spec.kind() {
            NormKind::PolytopeFacets(rows) => Ok(rows.iter().map(|f| dot(f, v).abs()).max().unwrap_or_else(Q::zero)),
            _ => Ok(support(&poly.source, v)?.0),
        }
    }

    /// Dual norm of a polytope spec through the simplex, bypassing precomputed data.
    pub(crate) fn dual_by_lp(&self, phi: &[Q]) -> Result<Q> {
        let poly = self.poly.as_ref().ok_or_else(|| Error::Unsupported("not a polytope norm".into()))?;
        match self.spec.kind() {
            NormKind::PolytopeFacets(rows) => Ok(support(rows, phi)?.0),
            _ => Ok(poly.source.iter().map(|p| dot(p, phi).abs()).max().unwrap_or_else(Q::zero)),
        }
    }

    pub fn dual(&self, phi: &Vector) -> Result<Scalar> {
        Ok(self.dual_argmax(phi)?.0)
    }

    /// The dual norm of `φ` and a unit vector `y` with `φ(y)` equal to it.
    pub fn dual_argmax(&self, phi: &Vector) -> Result<(Scalar, Vector)> {
        self.check_dim(phi)?;
        let n = self.dim();
        if self.spec.field() == Field::Complex {
            let f = phi.to_complex();
            let (value, y) = complex_dual_argmax(&f, self.p().unwrap());
            return Ok((self.float(value), Vector::Complex(y)));
        }
        match self.spec.kind() {
            NormKind::Lp(p) if self.spec.is_exact() => {
                let f = self.exact_input(phi)?;
                if p.is_one() {
                    // dual is the max norm; attained at ±e_j
                    let (j, _) =
                        f.iter().enumerate().max_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(b.0.cmp(&a.0))).unwrap();
                    let mut y = vec![Q::zero(); n];
                    y[j] = if f[j].is_negative() { -Q::one() } else { Q::one() };
                    Ok((Scalar::Exact(f[j].abs()), Vector::Exact(y)))
                } else {
                    let y: Vec<Q> = f.iter().map(|x| if x.is_negative() { -Q::one() } else { Q::one() }).collect();
                    Ok((Scalar::Exact(l1_q(f)), Vector::Exact(y)))
                }
            }
            NormKind::Lp(p) => {
                let f = phi.to_f64().expect("real input");
                let (value, y) = real_dual_argmax(&f, p);
                Ok((self.float(value), Vector::Float(y)))
            }
            NormKind::RealifiedLp(p) => {
                // the block (a, b) pairs with (x, y) as Re((a - ib)(x + iy))
                let f = phi.to_f64().expect("real input");
                let z: Vec<Complex64> = f.chunks(2).map(|c| Complex64::new(c[0], -c[1])).collect();
                let (value, y) = complex_dual_argmax(&z, p);
                Ok((self.float(value), Vector::Float(y.iter().flat_map(|w| [w.re, w.im]).collect())))
            }
            _ => {
                let f = self.exact_input(phi)?;
                let poly = self.poly.as_ref().expect("polytope");
                match &poly.vertices {
                    Some(vs) => {
                        let mut best: Option<(Q, Vec<Q>)> = None;
                        for x in vs {
                            let d = dot(x, f);
                            if best.as_ref().is_none_or(|(b, _)| d.abs() > *b) {
                                let y = if d.is_negative() { x.iter().map(|a| -a).collect() } else { x.clone() };
                                best = Some((d.abs(), y));
                            }
                        }
                        let (v, y) = best.ok_or_else(|| Error::DegenerateNorm("no unit vertices".into()))?;
                        Ok((Scalar::Exact(v), Vector::Exact(y)))
                    }
                    None => {
                        let (v, y) = support(&poly.source, f)?;
                        Ok((Scalar::Exact(v), Vector::Exact(y)))
                    }
                }
            }
        }
    }

    /// All unit-ball vertices, both signs, when the norm is polyhedral and
    /// there are at most `max` of them.
    pub fn ball_vertices(&self, max: u64) -> Option<Vec<Vec<Q>>> {
        if !self.spec.is_exact() {
            return None;
        }
        let n = self.dim();
        let half: Vec<Vec<Q>> = match self.spec.kind() {
            NormKind::Lp(p) if p.is_one() => {
                if 2 * n as u64 > max {
                    return None;
                }
                (0..n).map(|k| (0..n).map(|j| if j == k { Q::one() } else { Q::zero() }).collect()).collect()
            }
            NormKind::Lp(_) => {
                if n >= 63 || 1u64 << n > max {
                    return None;
                }
                (0u64..1 << (n - 1))
                    .map(|m| {
                        (0..n).map(|j| if j > 0 && m >> (j - 1) & 1 == 1 { -Q::one() } else { Q::one() }).collect()
                    })
                    .collect()
            }
            _ => {
                let vs = self.poly.as_ref()?.vertices.clone()?;
                if 2 * vs.len() as u64 > max {
                    return None;
                }
                vs
            }
        };
        let mut all = Vec::with_capacity(2 * half.len());
        for v in half {
            all.push(v.iter().map(|x| -x).collect());
            all.push(v);
        }
        Some(all)
    }
}

fn gauge(p: &Polytope, v: &[Q]) -> Result<Q> {
    match &p.facets {
        Some(fs) => Ok(fs.iter().map(|f| dot(f, v).abs()).max().unwrap_or_else(Q::zero)),
        None => Ok(support(&p.source, v)?.0),
    }
}

fn l1_q(v: &[Q]) -> Q {
    v.iter().fold(Q::zero(), |acc, x| acc + x.abs())
}

fn linf_q(v: &[Q]) -> Q {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}

fn lp_moduli(m: &[f64], p: &PValue) -> f64 {
    match p {
        PValue::Infinity => m.iter().cloned().fold(0.0, f64::max),
        _ if p.is_one() => m.iter().sum(),
        _ if p.is_two() => m.iter().map(|x| x * x).sum::<f64>().sqrt(),
        _ => {
            let pf = p.as_f64();
            let scale = m.iter().cloned().fold(0.0, f64::max);
            if scale == 0.0 {
                return 0.0;
            }
            scale * m.iter().map(|x| (x / scale).powf(pf)).sum::<f64>().powf(1.0 / pf)
        }
    }
}

/// Hölder argmax for real `ℓp`, `1 < p < ∞`.
fn real_dual_argmax(f: &[f64], p: &PValue) -> (f64, Vec<f64>) {
    let q = p.conjugate();
    let m: Vec<f64> = f.iter().map(|x| x.abs()).collect();
    let value = lp_moduli(&m, &q);
    if value == 0.0 {
        let mut y = vec![0.0; f.len()];
        y[0] = 1.0;
        return (0.0, y);
    }
    let qf = q.as_f64();
    let y = f.iter().map(|x| x.signum() * (x.abs() / value).powf(qf - 1.0)).collect();
    (value, y)
}

fn complex_dual_argmax(f: &[Complex64], p: &PValue) -> (f64, Vec<Complex64>) {
    let n = f.len();
    let m: Vec<f64> = f.iter().map(|z| z.norm()).collect();
    let phase = |z: &Complex64| if z.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { z.conj() / z.norm() };
    match p {
        PValue::Infinity => (m.iter().sum(), f.iter().map(phase).collect()),
        _ if p.is_one() => {
            let (j, _) = m.iter().enumerate().fold((0, -1.0), |b, (i, &x)| if x > b.1 { (i, x) } else { b });
            let mut y = vec![Complex64::new(0.0, 0.0); n];
            y[j] = phase(&f[j]);
            (m[j], y)
        }
        _ => {
            let q = p.conjugate();
            let value = lp_moduli(&m, &q);
            if value == 0.0 {
                let mut y = vec![Complex64::new(0.0, 0.0); n];
                y[0] = Complex64::new(1.0, 0.0);
                return (0.0, y);
            }
            let qf = q.as_f64();
            (value, f.iter().zip(&m).map(|(z, &a)| phase(z) * (a / value).powf(qf - 1.0)).collect())
        }
    }
}

/// One-shot norm evaluation with default budgets.
pub fn norm_eval(spec: &NormSpec, v: &Vector) -> Result<Scalar> {
    Norm::new(spec.clone(), &Budgets::default())?.eval(v)
}

/// One-shot dual-norm evaluation with default budgets.
pub fn dual_norm_eval(spec: &NormSpec, phi: &Vector) -> Result<Scalar> {
    Norm::new(spec.clone(), &Budgets::default())?.dual(phi)
}

#[cfg(test)]
mod tests {
    use super::super::value::q_from_i64;
    use super::*;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q_from_i64(x)).collect()
    }

    #[test]
    fn documented_values() {
        let v = Vector::exact_from_i64(&[1, -1, 0]);
        assert_eq!(norm_eval(&NormSpec::linf(3).unwrap(), &v).unwrap(), Scalar::Exact(q_from_i64(1)));
        assert_eq!(norm_eval(&NormSpec::l1(3).unwrap(), &v).unwrap(), Scalar::Exact(q_from_i64(2)));
        let facets = NormSpec::facets(2, vec![qv(&[1, 0]), qv(&[0, 1]), qv(&[1, 1])]).unwrap();
        assert_eq!(norm_eval(&facets, &Vector::exact_from_i64(&[1, -1])).unwrap(), Scalar::Exact(q_from_i64(1)));

        let phi = Vector::exact_from_i64(&[1, 1]);
        assert_eq!(dual_norm_eval(&NormSpec::linf(2).unwrap(), &phi).unwrap(), Scalar::Exact(q_from_i64(2)));
        let d = dual_norm_eval(&NormSpec::l2(2).unwrap(), &Vector::Float(vec![3.0, 4.0])).unwrap();
        assert!((d.approx() - 5.0).abs() < 1e-12);
        let diamond = NormSpec::vertices(2, vec![qv(&[1, 0]), qv(&[0, 1])]).unwrap();
        assert_eq!(dual_norm_eval(&diamond, &Vector::exact_from_i64(&[1, -1])).unwrap(), Scalar::Exact(q_from_i64(1)));
    }

    #[test]
    fn polar_of_the_square_is_the_diamond() {
        let v = polar_vertices(&[qv(&[1, 0]), qv(&[0, 1])], 2, 1000).unwrap();
        assert_eq!(v, vec![qv(&[1, -1]), qv(&[1, 1])]);
        let v = polar_vertices(&[qv(&[1, 0]), qv(&[0, 1]), qv(&[1, 1])], 2, 1000).unwrap();
        assert_eq!(v.len(), 3);
        assert!(polar_vertices(&[qv(&[1, 0]), qv(&[0, 1])], 2, 1).is_none());
    }

    #[test]
    fn vertex_gauge_agrees_with_lp() {
        let third = Q::new(2.into(), 3.into());
        let pts = vec![qv(&[1, 0, 0]), qv(&[0, 1, 0]), qv(&[0, 0, 1]), vec![third.clone(), third.clone(), third]];
        let norm = Norm::new(NormSpec::vertices(3, pts).unwrap(), &Budgets::default()).unwrap();
        for v in [[1, 1, 1], [1, -1, 0], [2, 0, -1], [1, 1, 0]] {
            let exact = norm.eval(&Vector::exact_from_i64(&v)).unwrap();
            assert_eq!(exact.as_exact().unwrap(), &norm.eval_by_lp(&qv(&v)).unwrap());
        }
        assert_eq!(norm.eval(&Vector::exact_from_i64(&[1, 1, 1])).unwrap(), Scalar::Exact(Q::new(3.into(), 2.into())));
    }

    #[test]
    fn realified_matches_complex() {
        let r = Norm::new(NormSpec::realified_lp(4, PValue::Infinity).unwrap(), &Budgets::default()).unwrap();
        let v = Vector::Float(vec![1.0, -1.0, 0.0, 0.5]);
        assert!((r.eval(&v).unwrap().approx() - 2f64.sqrt()).abs() < 1e-12);
        let (d, y) = r.dual_argmax(&Vector::Float(vec![3.0, 4.0, 0.0, 1.0])).unwrap();
        assert!((d.approx() - 6.0).abs() < 1e-12);
        assert!((r.eval(&y).unwrap().approx() - 1.0).abs() < 1e-12);
        let y = y.to_f64().unwrap();
        assert!((3.0 * y[0] + 4.0 * y[1] + y[3] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn complex_values() {
        let s = NormSpec::complex_lp(2, PValue::Infinity).unwrap();
        let v = Vector::Complex(vec![Complex64::new(1.0, -1.0), Complex64::new(0.0, 0.5)]);
        assert!((norm_eval(&s, &v).unwrap().approx() - 2f64.sqrt()).abs() < 1e-12);
        let norm = Norm::new(s, &Budgets::default()).unwrap();
        let (d, y) = norm.dual_argmax(&v).unwrap();
        let Vector::Complex(y) = y else { panic!() };
        let pairing: Complex64 =
            y.iter().zip([Complex64::new(1.0, -1.0), Complex64::new(0.0, 0.5)]).map(|(a, b)| a * b).sum();
        assert!((pairing.re - d.approx()).abs() < 1e-12 && pairing.im.abs() < 1e-12);
    }
}
