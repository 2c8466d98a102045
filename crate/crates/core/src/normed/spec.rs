//! Norm specifications and their JSON file format.
//!
//! ```json
//! {"dim": 2, "field": "real", "norm": {"type": "polytope_facets", "functionals": [["1","0"],["1/2","1/2"]]}}
//! ```
//!
//! Rationals are `"p/q"` strings (plain numbers are accepted too); `p` may be
//! `"inf"`. Complex entries are written as `["re", "im"]` pairs.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg::rank;
use super::value::{format_rational, parse_rational, q_from_i64};
use super::Q;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PValue {
    Finite(Q),
    Infinity,
}

impl PValue {
    pub fn is_one(&self) -> bool {
        matches!(self, PValue::Finite(p) if p.is_one())
    }

    pub fn is_two(&self) -> bool {
        matches!(self, PValue::Finite(p) if *p == q_from_i64(2))
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            PValue::Finite(p) => super::value::q_to_f64(p),
            PValue::Infinity => f64::INFINITY,
        }
    }

    /// Hölder conjugate.
    pub fn conjugate(&self) -> PValue {
        match self {
            PValue::Infinity => PValue::Finite(Q::one()),
            PValue::Finite(p) if p.is_one() => PValue::Infinity,
            PValue::Finite(p) => PValue::Finite(p / (p - Q::one())),
        }
    }

    fn label(&self) -> String {
        match self {
            PValue::Infinity => "inf".into(),
            PValue::Finite(p) => format_rational(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormKind {
    Lp(PValue),
    /// Unit ball `{x : |<f, x>| <= 1 for every f}`.
    PolytopeFacets(Vec<Vec<Q>>),
    /// Unit ball `conv(±p)`.
    PolytopeVertices(Vec<Vec<Q>>),
    /// The complex `ℓp` norm on `C^(dim/2)` viewed as a real space:
    /// coordinates `(x_1, y_1, x_2, y_2, ...)` stand for `x_k + i y_k`.
    RealifiedLp(PValue),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormSpec {
    dim: usize,
    field: Field,
    kind: NormKind,
}

impl NormSpec {
    pub fn new(dim: usize, field: Field, kind: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        match &kind {
            NormKind::Lp(PValue::Finite(p)) if *p < Q::one() => {
                return Err(Error::InvalidParameter(format!("p = {p} is below 1")));
            }
            NormKind::Lp(_) => {}
            NormKind::RealifiedLp(p) => {
                if matches!(p, PValue::Finite(p) if *p < Q::one()) {
                    return Err(Error::InvalidParameter(format!("p = {} is below 1", p.label())));
                }
                if field == Field::Complex || !dim.is_multiple_of(2) {
                    return Err(Error::InvalidParameter("a realified norm needs an even real dimension".into()));
                }
            }
            NormKind::PolytopeFacets(rows) | NormKind::PolytopeVertices(rows) => {
                if field == Field::Complex {
                    return Err(Error::Unsupported("polytope norms are only supported over the reals".into()));
                }
                if let Some(r) = rows.iter().find(|r| r.len() != dim) {
                    return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
                }
                if rank(rows) < dim {
                    return Err(Error::DegenerateNorm("the polytope rows do not span the space".into()));
                }
            }
        }
        Ok(Self { dim, field, kind })
    }

    pub fn lp(dim: usize, p: PValue) -> Result<Self> {
        Self::new(dim, Field::Real, NormKind::Lp(p))
    }

    pub fn l1(dim: usize) -> Result<Self> {
        Self::lp(dim, PValue::Finite(Q::one()))
    }

    pub fn l2(dim: usize) -> Result<Self> {
        Self::lp(dim, PValue::Finite(q_from_i64(2)))
    }

    pub fn linf(dim: usize) -> Result<Self> {
        Self::lp(dim, PValue::Infinity)
    }

    pub fn complex_lp(dim: usize, p: PValue) -> Result<Self> {
        Self::new(dim, Field::Complex, NormKind::Lp(p))
    }

    pub fn realified_lp(dim: usize, p: PValue) -> Result<Self> {
        Self::new(dim, Field::Real, NormKind::RealifiedLp(p))
    }

    pub fn facets(dim: usize, functionals: Vec<Vec<Q>>) -> Result<Self> {
        Self::new(dim, Field::Real, NormKind::PolytopeFacets(functionals))
    }

    pub fn vertices(dim: usize, points: Vec<Vec<Q>>) -> Result<Self> {
        Self::new(dim, Field::Real, NormKind::PolytopeVertices(points))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    /// Whether norm values are decided exactly: real ℓ1, ℓ∞ and polytopes.
    pub fn is_exact(&self) -> bool {
        self.field == Field::Real
            && match &self.kind {
                NormKind::Lp(p) => p.is_one() || *p == PValue::Infinity,
                NormKind::RealifiedLp(_) => false,
                _ => true,
            }
    }

    /// Short label such as `l1`, `linf`, `l3/2`, `facets(5)`, with a `c` prefix over the complex field.
    pub fn label(&self) -> String {
        let base = match &self.kind {
            NormKind::Lp(p) => format!("l{}", p.label()),
            NormKind::RealifiedLp(p) => format!("rl{}", p.label()),
            NormKind::PolytopeFacets(r) => format!("facets({})", r.len()),
            NormKind::PolytopeVertices(r) => format!("vertices({})", r.len()),
        };
        match self.field {
            Field::Real => base,
            Field::Complex => format!("c{base}"),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("norm spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumText {
    Text(String),
    Int(i64),
    Float(f64),
}

impl NumText {
    fn to_q(&self) -> Result<Q> {
        match self {
            NumText::Text(s) => parse_rational(s),
            NumText::Int(i) => Ok(q_from_i64(*i)),
            NumText::Float(f) => Q::from_float(*f).ok_or_else(|| Error::Parse(format!("not a finite number: {f}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryWire {
    Real(NumText),
    Complex([NumText; 2]),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum NormWire {
    Lp { p: NumText },
    RealifiedLp { p: NumText },
    PolytopeFacets { functionals: Vec<Vec<EntryWire>> },
    PolytopeVertices { points: Vec<Vec<EntryWire>> },
}

fn real_field() -> Field {
    Field::Real
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecWire {
    dim: usize,
    #[serde(default = "real_field")]
    field: Field,
    norm: NormWire,
}

fn rows_from_wire(rows: &[Vec<EntryWire>]) -> Result<Vec<Vec<Q>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|e| match e {
                    EntryWire::Real(x) => x.to_q(),
                    EntryWire::Complex([re, im]) => {
                        if im.to_q()?.is_zero() {
                            re.to_q()
                        } else {
                            Err(Error::Unsupported("complex polytope entries are not supported".into()))
                        }
                    }
                })
                .collect()
        })
        .collect()
}

fn rows_to_wire(rows: &[Vec<Q>]) -> Vec<Vec<EntryWire>> {
    rows.iter().map(|r| r.iter().map(|q| EntryWire::Real(NumText::Text(format_rational(q)))).collect()).collect()
}

fn p_from_wire(p: &NumText) -> Result<PValue> {
    Ok(match p {
        NumText::Text(s) if matches!(s.trim(), "inf" | "infinity" | "Infinity" | "∞") => PValue::Infinity,
        NumText::Float(f) if f.is_infinite() && f.is_positive() => PValue::Infinity,
        other => PValue::Finite(other.to_q()?),
    })
}

impl TryFrom<SpecWire> for NormSpec {
    type Error = Error;

    fn try_from(w: SpecWire) -> Result<Self> {
        let kind = match w.norm {
            NormWire::Lp { p } => NormKind::Lp(p_from_wire(&p)?),
            NormWire::RealifiedLp { p } => NormKind::RealifiedLp(p_from_wire(&p)?),
            NormWire::PolytopeFacets { functionals } => NormKind::PolytopeFacets(rows_from_wire(&functionals)?),
            NormWire::PolytopeVertices { points } => NormKind::PolytopeVertices(rows_from_wire(&points)?),
        };
        NormSpec::new(w.dim, w.field, kind)
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let norm = match &self.kind {
            NormKind::Lp(p) => NormWire::Lp { p: NumText::Text(p.label()) },
            NormKind::RealifiedLp(p) => NormWire::RealifiedLp { p: NumText::Text(p.label()) },
            NormKind::PolytopeFacets(r) => NormWire::PolytopeFacets { functionals: rows_to_wire(r) },
            NormKind::PolytopeVertices(r) => NormWire::PolytopeVertices { points: rows_to_wire(r) },
        };
        SpecWire { dim: self.dim, field: self.field, norm }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let w = SpecWire::deserialize(deserializer)?;
        NormSpec::try_from(w).map_err(serde::de::Error::custom)
    }
}
