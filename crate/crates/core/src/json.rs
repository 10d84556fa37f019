//! JSON forms of Fermat reals and space points.
//!
//! Exact scalars are strings (`"3"`, `"-1/2"`), float scalars are numbers,
//! exponents are always rational strings:
//!
//! ```json
//! {"std": "3", "terms": [{"exp": "1/2", "coeff": "2"}]}
//! {"chart": null, "coords": [{"std": "1/2 + theta", "terms": []}]}
//! ```
//!
//! A point's `chart` is `null`, a branch or label string, a chart index, or
//! `{"left": .., "right": .., "split": n}` for product points.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ring::{FermatReal, Term};
use crate::scalar::{Backend, Rational, Scalar};
use crate::space::{Chart, SpaceCoord, SpacePoint};
use crate::syntax::parse_theta_expr;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarJson {
    Text(String),
    Number(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct TermJson {
    exp: String,
    coeff: ScalarJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct FermatJson {
    std: ScalarJson,
    terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ChartJson {
    Unit(()),
    Index(usize),
    Name(String),
    Pair {
        left: Box<ChartJson>,
        right: Box<ChartJson>,
        split: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct PointJson {
    chart: ChartJson,
    coords: Vec<FermatJson>,
}

fn scalar_json(s: &Scalar) -> ScalarJson {
    match s {
        Scalar::Exact(r) => ScalarJson::Text(r.to_string()),
        Scalar::Float(f) => ScalarJson::Number(*f),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::parse(0, msg)
}

fn scalar_from(s: &ScalarJson) -> Result<Scalar> {
    match s {
        ScalarJson::Text(t) => t
            .trim()
            .parse::<Rational>()
            .map(Scalar::Exact)
            .map_err(|_| bad(format!("invalid rational `{t}`"))),
        ScalarJson::Number(f) => Ok(Scalar::Float(*f)),
    }
}

fn terms_json(x: &FermatReal) -> Vec<TermJson> {
    x.terms()
        .iter()
        .map(|t| TermJson {
            exp: t.exp.to_string(),
            coeff: scalar_json(&t.coeff),
        })
        .collect()
}

impl From<&FermatReal> for FermatJson {
    fn from(x: &FermatReal) -> Self {
        FermatJson {
            std: scalar_json(x.std()),
            terms: terms_json(x),
        }
    }
}

fn terms_from(terms: &[TermJson]) -> Result<Vec<Term>> {
    terms
        .iter()
        .map(|t| {
            let exp = t
                .exp
                .trim()
                .parse::<Rational>()
                .map_err(|_| bad(format!("invalid exponent `{}`", t.exp)))?;
            Ok(Term::new(exp, scalar_from(&t.coeff)?))
        })
        .collect()
}

impl TryFrom<&FermatJson> for FermatReal {
    type Error = Error;

    fn try_from(j: &FermatJson) -> Result<Self> {
        FermatReal::normalize(scalar_from(&j.std)?, terms_from(&j.terms)?)
    }
}

impl Serialize for FermatReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FermatJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FermatReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FermatJson::deserialize(d)?;
        FermatReal::try_from(&j).map_err(D::Error::custom)
    }
}

fn chart_json(c: &Chart) -> ChartJson {
    match c {
        Chart::Unit => ChartJson::Unit(()),
        Chart::Name(n) => ChartJson::Name(n.clone()),
        Chart::Index(i) => ChartJson::Index(*i),
        Chart::Pair { left, right, split } => ChartJson::Pair {
            left: Box::new(chart_json(left)),
            right: Box::new(chart_json(right)),
            split: *split,
        },
    }
}

fn chart_from(c: &ChartJson) -> Chart {
    match c {
        ChartJson::Unit(()) => Chart::Unit,
        ChartJson::Name(n) => Chart::Name(n.clone()),
        ChartJson::Index(i) => Chart::Index(*i),
        ChartJson::Pair { left, right, split } => Chart::Pair {
            left: Box::new(chart_from(left)),
            right: Box::new(chart_from(right)),
            split: *split,
        },
    }
}

fn coord_json(c: &SpaceCoord) -> FermatJson {
    let std = match c.standard_combo() {
        Some(combo) if !c.theta.is_zero() => ScalarJson::Text(combo.to_string()),
        _ => scalar_json(c.value.std()),
    };
    FermatJson {
        std,
        terms: terms_json(&c.value),
    }
}

fn coord_from(j: &FermatJson) -> Result<SpaceCoord> {
    let (std, theta) = match &j.std {
        ScalarJson::Text(text) => {
            let v = parse_theta_expr(text, Backend::Exact)?;
            if !v.value.is_standard() {
                return Err(bad(format!("standard part `{text}` has infinitesimal terms")));
            }
            (v.value.std().clone(), v.theta)
        }
        ScalarJson::Number(f) => (Scalar::Float(*f), Rational::zero()),
    };
    let value = FermatReal::normalize(std, terms_from(&j.terms)?)?;
    Ok(SpaceCoord::with_theta(value, theta))
}

impl Serialize for SpacePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointJson {
            chart: chart_json(&self.chart),
            coords: self.coords.iter().map(coord_json).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpacePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PointJson::deserialize(d)?;
        let coords = j
            .coords
            .iter()
            .map(coord_from)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(SpacePoint::new(chart_from(&j.chart), coords))
    }
}

pub fn fermat_to_json(x: &FermatReal) -> serde_json::Value {
    serde_json::to_value(x).expect("finite values serialize")
}

pub fn fermat_from_json(v: &serde_json::Value) -> Result<FermatReal> {
    let j = FermatJson::deserialize(v).map_err(|e| bad(e.to_string()))?;
    FermatReal::try_from(&j)
}

pub fn point_to_json(p: &SpacePoint) -> serde_json::Value {
    serde_json::to_value(p).expect("finite values serialize")
}

pub fn point_from_json(v: &serde_json::Value) -> Result<SpacePoint> {
    SpacePoint::deserialize(v).map_err(|e| bad(e.to_string()))
}
