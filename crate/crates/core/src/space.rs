//! Finitely presented Fermat spaces with decidable point equality, and the
//! adding/deleting infinitesimal functors evaluated pointwise.
//!
//! Each presentation class carries its own equality decider:
//!
//! | presentation              | `p ~ q` iff                                        |
//! |---------------------------|----------------------------------------------------|
//! | lattice quotient `•R/L`   | `°p - °q ∈ L` and `δp = δq`                        |
//! | wedge of two `•R`         | same branch and equal, or both exactly `0`         |
//! | atlas                     | equal after moving to the lowest reachable chart   |
//! | product                   | componentwise                                      |
//! | direct limit `•R^(∞)`     | componentwise on the union of supports             |
//! | discrete                  | same label                                         |
//! | `•R` modulo real shifts   | `δp = δq`                                          |
//! | quotient ring `•R/A`      | `p - q ∈ A`                                        |

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ring::{FermatPoint, FermatReal, IdealSpec};
use crate::scalar::{integer_theta_lattice, Backend, Rational, Scalar, ThetaCombo, ThetaLattice};
use crate::syntax::{parse_theta_expr, ThetaValue};
use crate::topology::{AffineMap, Bound, OpenSetDesc};

/// Identifies which chart, branch, or label a point lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chart {
    Unit,
    Name(String),
    Index(usize),
    Pair {
        left: Box<Chart>,
        right: Box<Chart>,
        /// Number of coordinates belonging to the left factor.
        split: usize,
    },
}

/// A coordinate `value + theta * θ`; `theta` is nonzero only on lattice
/// quotients, where it shifts the standard part.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceCoord {
    pub value: FermatReal,
    pub theta: Rational,
}

impl SpaceCoord {
    pub fn new(value: FermatReal) -> Self {
        SpaceCoord {
            value,
            theta: Rational::zero(),
        }
    }

    pub fn with_theta(value: FermatReal, theta: Rational) -> Self {
        SpaceCoord { value, theta }
    }

    /// The standard part in `Q + Qθ`, when it is exact.
    pub fn standard_combo(&self) -> Option<ThetaCombo> {
        self.value
            .std()
            .as_exact()
            .map(|a| ThetaCombo::new(a.clone(), self.theta.clone()))
    }

    pub fn infinitesimal_part(&self) -> FermatReal {
        self.value.infinitesimal_part()
    }

    pub fn is_standard(&self) -> bool {
        self.value.is_standard()
    }

    pub fn standard_part(&self) -> SpaceCoord {
        SpaceCoord {
            value: FermatReal::standard(self.value.standard_part()),
            theta: self.theta.clone(),
        }
    }
}

impl From<FermatReal> for SpaceCoord {
    fn from(value: FermatReal) -> Self {
        SpaceCoord::new(value)
    }
}

impl From<ThetaValue> for SpaceCoord {
    fn from(v: ThetaValue) -> Self {
        SpaceCoord::with_theta(v.value, v.theta)
    }
}

impl fmt::Display for SpaceCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let combo = match self.standard_combo() {
            Some(c) if !self.theta.is_zero() => c,
            _ => return write!(f, "{}", self.value),
        };
        write!(f, "{combo}")?;
        let delta = self.infinitesimal_part();
        if !delta.is_zero() {
            let text = delta.to_string();
            match text.strip_prefix('-') {
                Some(rest) => write!(f, " - {rest}")?,
                None => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

/// A point of a presented space: a chart tag plus Fermat coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacePoint {
    pub chart: Chart,
    pub coords: Vec<SpaceCoord>,
}

impl SpacePoint {
    pub fn new(chart: Chart, coords: Vec<SpaceCoord>) -> Self {
        SpacePoint { chart, coords }
    }

    /// A point on a single-chart space.
    pub fn unit(coords: Vec<SpaceCoord>) -> Self {
        SpacePoint::new(Chart::Unit, coords)
    }

    pub fn scalar(x: FermatReal) -> Self {
        SpacePoint::unit(vec![SpaceCoord::new(x)])
    }

    pub fn branch(name: &str, x: FermatReal) -> Self {
        SpacePoint::new(Chart::Name(name.to_string()), vec![SpaceCoord::new(x)])
    }

    pub fn label(name: &str) -> Self {
        SpacePoint::new(Chart::Name(name.to_string()), Vec::new())
    }

    pub fn in_chart(index: usize, coords: Vec<FermatReal>) -> Self {
        SpacePoint::new(
            Chart::Index(index),
            coords.into_iter().map(SpaceCoord::new).collect(),
        )
    }

    pub fn is_standard(&self) -> bool {
        self.coords.iter().all(SpaceCoord::is_standard)
    }

    fn fermat_point(&self) -> FermatPoint {
        FermatPoint::new(self.coords.iter().map(|c| c.value.clone()).collect())
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = |f: &mut fmt::Formatter<'_>, cs: &[SpaceCoord]| -> fmt::Result {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            Ok(())
        };
        match &self.chart {
            Chart::Unit => coords(f, &self.coords),
            Chart::Name(n) if self.coords.is_empty() => write!(f, "{n}"),
            Chart::Name(n) => {
                write!(f, "{n}: ")?;
                coords(f, &self.coords)
            }
            Chart::Index(i) => {
                write!(f, "{i}: ")?;
                coords(f, &self.coords)
            }
            Chart::Pair { .. } => {
                let (l, r) = split_pair(self).map_err(|_| fmt::Error)?;
                write!(f, "[{l}; {r}]")
            }
        }
    }
}

fn split_pair(p: &SpacePoint) -> Result<(SpacePoint, SpacePoint)> {
    match &p.chart {
        Chart::Pair { left, right, split } if *split <= p.coords.len() => Ok((
            SpacePoint::new((**left).clone(), p.coords[..*split].to_vec()),
            SpacePoint::new((**right).clone(), p.coords[*split..].to_vec()),
        )),
        _ => Err(Error::InvalidPoint(format!("{p:?} is not a product point"))),
    }
}

/// An affine change of coordinates from chart `from` to chart `to`, valid on
/// `overlap` (given in `from` coordinates).
#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub overlap: OpenSetDesc,
    pub map: AffineMap,
}

/// A smooth atlas with affine transitions.
#[derive(Clone, Debug, PartialEq)]
pub struct Atlas {
    charts: Vec<OpenSetDesc>,
    transitions: Vec<Transition>,
}

impl Atlas {
    /// Checks on a rational sample grid that every transition lands in its
    /// target chart and is undone by a transition back.
    pub fn new(charts: Vec<OpenSetDesc>, transitions: Vec<Transition>) -> Result<Self> {
        let dim = charts
            .first()
            .map(OpenSetDesc::dim)
            .ok_or_else(|| Error::InvalidPresentation("atlas without charts".into()))?;
        if charts.iter().any(|c| c.dim() != dim) {
            return Err(Error::InvalidPresentation("charts of different dimensions".into()));
        }
        let atlas = Atlas {
            charts,
            transitions,
        };
        for tr in &atlas.transitions {
            if tr.from >= atlas.charts.len() || tr.to >= atlas.charts.len() {
                return Err(Error::InvalidPresentation("transition chart out of range".into()));
            }
            if tr.overlap.dim() != dim || tr.map.dim() != dim {
                return Err(Error::InvalidPresentation("transition dimension mismatch".into()));
            }
            for sample in grid_samples(&tr.overlap) {
                let x = FermatPoint::standard(&sample);
                if !atlas.charts[tr.from].fermat_contains(&x)? {
                    return Err(Error::InvalidPresentation(format!(
                        "overlap of {}->{} leaves chart {}",
                        tr.from, tr.to, tr.from
                    )));
                }
                let y = tr.map.apply_fermat(&x)?;
                if !atlas.charts[tr.to].fermat_contains(&y)? {
                    return Err(Error::InvalidPresentation(format!(
                        "transition {}->{} leaves chart {}",
                        tr.from, tr.to, tr.to
                    )));
                }
                let back = atlas.transitions.iter().any(|r| {
                    r.from == tr.to
                        && r.to == tr.from
                        && r.overlap.fermat_contains(&y).unwrap_or(false)
                        && r.map.apply_fermat(&y).map(|z| z == x).unwrap_or(false)
                });
                if !back {
                    return Err(Error::InvalidPresentation(format!(
                        "transition {}->{} has no inverse on its overlap",
                        tr.from, tr.to
                    )));
                }
            }
        }
        Ok(atlas)
    }

    /// The circle `R/Z` with charts `(0,1)` and `(-1/2,1/2)`.
    pub fn circle() -> Self {
        let q = |p: i64, d: i64| Rational::new(p, d).expect("nonzero denominator");
        let set = |s: &str| s.parse::<OpenSetDesc>().expect("valid set");
        let shift = |c: Rational| AffineMap::translation(vec![c]);
        let transitions = vec![
            Transition { from: 0, to: 1, overlap: set("(0,1/2)"), map: shift(q(0, 1)) },
            Transition { from: 0, to: 1, overlap: set("(1/2,1)"), map: shift(q(-1, 1)) },
            Transition { from: 1, to: 0, overlap: set("(0,1/2)"), map: shift(q(0, 1)) },
            Transition { from: 1, to: 0, overlap: set("(-1/2,0)"), map: shift(q(1, 1)) },
        ];
        Atlas::new(vec![set("(0,1)"), set("(-1/2,1/2)")], transitions).expect("valid circle atlas")
    }

    pub fn charts(&self) -> &[OpenSetDesc] {
        &self.charts
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn dim(&self) -> usize {
        self.charts[0].dim()
    }

    /// Moves a point to the lowest-index chart reachable through transitions
    /// whose overlaps contain it.
    pub fn normalize(&self, chart: usize, x: &FermatPoint) -> Result<(usize, FermatPoint)> {
        let mut best = (chart, x.clone());
        let mut seen = vec![false; self.charts.len()];
        seen[chart] = true;
        let mut queue = VecDeque::from([(chart, x.clone())]);
        while let Some((c, p)) = queue.pop_front() {
            if c < best.0 {
                best = (c, p.clone());
            }
            for tr in self.transitions.iter().filter(|t| t.from == c) {
                if !seen[tr.to] && tr.overlap.fermat_contains(&p)? {
                    seen[tr.to] = true;
                    queue.push_back((tr.to, tr.map.apply_fermat(&p)?));
                }
            }
        }
        Ok(best)
    }

    /// Every (chart, coordinates) representation reachable from a point.
    pub fn representations(&self, chart: usize, x: &FermatPoint) -> Result<Vec<(usize, FermatPoint)>> {
        let mut out = vec![(chart, x.clone())];
        let mut seen = vec![false; self.charts.len()];
        seen[chart] = true;
        let mut i = 0;
        while i < out.len() {
            let (c, p) = out[i].clone();
            for tr in self.transitions.iter().filter(|t| t.from == c) {
                if !seen[tr.to] && tr.overlap.fermat_contains(&p)? {
                    seen[tr.to] = true;
                    out.push((tr.to, tr.map.apply_fermat(&p)?));
                }
            }
            i += 1;
        }
        Ok(out)
    }
}

/// Rational points spread through every box of an open set.
fn grid_samples(set: &OpenSetDesc) -> Vec<Vec<Scalar>> {
    let fractions = [1, 2, 3, 4, 5, 6].map(|k| Rational::new(k, 7).expect("nonzero"));
    let mut out = Vec::new();
    for b in set.boxes() {
        let axes: Vec<Vec<Rational>> = b
            .0
            .iter()
            .map(|i| match (&i.lo, &i.hi) {
                (Bound::Finite(a), Bound::Finite(c)) => {
                    fractions.iter().map(|f| a + &(&(c - a) * f)).collect()
                }
                (Bound::Finite(a), _) => (1..=4).map(|k| a + &Rational::new(k, 3).expect("nonzero")).collect(),
                (_, Bound::Finite(c)) => (1..=4).map(|k| c - &Rational::new(k, 3).expect("nonzero")).collect(),
                _ => (-2..=2).map(Rational::from).collect(),
            })
            .collect();
        let mut points: Vec<Vec<Rational>> = vec![Vec::new()];
        for axis in &axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        out.extend(points.into_iter().map(|p| p.into_iter().map(Scalar::Exact).collect()));
    }
    out
}

/// A finitely presented Fermat space.
#[derive(Clone, Debug, PartialEq)]
pub enum SpacePresentation {
    /// `•R / L` for the integer span `L` of the generators.
    LatticeQuotient(Vec<ThetaCombo>),
    /// Two copies of `•R` (branches `A` and `B`) glued at `0`.
    PushoutWedge,
    Atlas(Atlas),
    Product(Box<SpacePresentation>, Box<SpacePresentation>),
    /// The fine vector space `R^(∞)`: finite-support sequences.
    DirectLimit,
    Discrete(Vec<String>),
    /// `•R` modulo translations by standard reals.
    RealTranslationQuotient,
    QuotientRing(IdealSpec),
}

impl SpacePresentation {
    pub fn lattice(generators: Vec<ThetaCombo>) -> Result<Self> {
        if generators.is_empty() || generators.iter().any(ThetaCombo::is_zero) {
            return Err(Error::InvalidPresentation(
                "lattice generators must be nonzero".into(),
            ));
        }
        Ok(SpacePresentation::LatticeQuotient(generators))
    }

    /// The irrational torus `•R/(Z + θZ)`.
    pub fn torus() -> Self {
        SpacePresentation::LatticeQuotient(integer_theta_lattice())
    }

    /// The circle as the lattice quotient `•R/Z`.
    pub fn circle() -> Self {
        SpacePresentation::LatticeQuotient(vec![ThetaCombo::one()])
    }

    pub fn product(left: SpacePresentation, right: SpacePresentation) -> Self {
        SpacePresentation::Product(Box::new(left), Box::new(right))
    }

    pub fn discrete<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::InvalidPresentation("duplicate discrete labels".into()));
        }
        Ok(SpacePresentation::Discrete(labels))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpacePresentation::LatticeQuotient(_) => "lattice-quotient",
            SpacePresentation::PushoutWedge => "wedge",
            SpacePresentation::Atlas(_) => "atlas",
            SpacePresentation::Product(..) => "product",
            SpacePresentation::DirectLimit => "direct-limit",
            SpacePresentation::Discrete(_) => "discrete",
            SpacePresentation::RealTranslationQuotient => "real-translation-quotient",
            SpacePresentation::QuotientRing(_) => "quotient-ring",
        }
    }

    fn invalid(&self, p: &SpacePoint, why: &str) -> Error {
        Error::InvalidPoint(format!("{p} on {}: {why}", self.kind()))
    }

    pub fn validate(&self, p: &SpacePoint) -> Result<()> {
        let plain = || p.coords.iter().all(|c| c.theta.is_zero());
        let one_unit = || p.chart == Chart::Unit && p.coords.len() == 1;
        match self {
            SpacePresentation::LatticeQuotient(_) => {
                if !one_unit() {
                    return Err(self.invalid(p, "expected one coordinate"));
                }
                if p.coords[0].value.backend() != Backend::Exact {
                    return Err(self.invalid(p, "lattice decisions need exact coordinates"));
                }
            }
            SpacePresentation::PushoutWedge => {
                let branch_ok = matches!(&p.chart, Chart::Name(n) if n == "A" || n == "B");
                if !branch_ok || p.coords.len() != 1 || !plain() {
                    return Err(self.invalid(p, "expected `A: x` or `B: x`"));
                }
            }
            SpacePresentation::Atlas(atlas) => {
                let idx = match p.chart {
                    Chart::Index(i) if i < atlas.charts.len() => i,
                    _ => return Err(self.invalid(p, "unknown chart")),
                };
                if p.coords.len() != atlas.dim() || !plain() {
                    return Err(self.invalid(p, "wrong number of coordinates"));
                }
                if !atlas.charts[idx].fermat_contains(&p.fermat_point())? {
                    return Err(self.invalid(p, "standard part outside its chart"));
                }
            }
            SpacePresentation::Product(l, r) => {
                let (a, b) = split_pair(p)?;
                l.validate(&a)?;
                r.validate(&b)?;
            }
            SpacePresentation::DirectLimit => {
                if p.chart != Chart::Unit || !plain() {
                    return Err(self.invalid(p, "expected a finite sequence"));
                }
                FermatPoint::new(p.coords.iter().map(|c| c.value.clone()).collect()).backend()?;
            }
            SpacePresentation::Discrete(labels) => {
                let ok = matches!(&p.chart, Chart::Name(n) if labels.contains(n));
                if !ok || !p.coords.is_empty() {
                    return Err(self.invalid(p, "unknown label"));
                }
            }
            SpacePresentation::RealTranslationQuotient | SpacePresentation::QuotientRing(_) => {
                if !one_unit() || !plain() {
                    return Err(self.invalid(p, "expected one coordinate"));
                }
            }
        }
        Ok(())
    }

    pub fn point_equal(&self, p: &SpacePoint, q: &SpacePoint) -> Result<bool> {
        self.validate(p)?;
        self.validate(q)?;
        Ok(match self {
            SpacePresentation::LatticeQuotient(gens) => {
                let (a, b) = (&p.coords[0], &q.coords[0]);
                let diff = &a.standard_combo().expect("validated") - &b.standard_combo().expect("validated");
                ThetaLattice::new(gens).contains(&diff)
                    && a.infinitesimal_part() == b.infinitesimal_part()
            }
            SpacePresentation::PushoutWedge => {
                let (a, b) = (&p.coords[0].value, &q.coords[0].value);
                (p.chart == q.chart && a.same_value(b)) || (a.is_zero() && b.is_zero())
            }
            SpacePresentation::Atlas(atlas) => {
                let (Chart::Index(i), Chart::Index(j)) = (&p.chart, &q.chart) else {
                    unreachable!("validated")
                };
                let (ci, xi) = atlas.normalize(*i, &p.fermat_point())?;
                let (cj, xj) = atlas.normalize(*j, &q.fermat_point())?;
                ci == cj && xi.coords().iter().zip(xj.coords()).all(|(a, b)| a.same_value(b))
            }
            SpacePresentation::Product(l, r) => {
                let ((pa, pb), (qa, qb)) = (split_pair(p)?, split_pair(q)?);
                l.point_equal(&pa, &qa)? && r.point_equal(&pb, &qb)?
            }
            SpacePresentation::DirectLimit => {
                let n = p.coords.len().max(q.coords.len());
                let zero = FermatReal::default();
                (0..n).all(|k| {
                    let a = p.coords.get(k).map(|c| &c.value).unwrap_or(&zero);
                    let b = q.coords.get(k).map(|c| &c.value).unwrap_or(&zero);
                    a.same_value(b)
                })
            }
            SpacePresentation::Discrete(_) => p.chart == q.chart,
            SpacePresentation::RealTranslationQuotient => p.coords[0]
                .infinitesimal_part()
                .same_value(&q.coords[0].infinitesimal_part()),
            SpacePresentation::QuotientRing(ideal) => {
                let diff = p.coords[0].value.checked_sub(&q.coords[0].value)?;
                diff.ideal_member(ideal)
            }
        })
    }

    /// The deleting functor on points: every coordinate replaced by its
    /// standard part, chart unchanged.
    pub fn delete_point(&self, p: &SpacePoint) -> Result<SpacePoint> {
        self.validate(p)?;
        Ok(SpacePoint::new(
            p.chart.clone(),
            p.coords.iter().map(SpaceCoord::standard_part).collect(),
        ))
    }

    /// The embedding of the underlying space: identity on standard points.
    pub fn lift_point(&self, p: &SpacePoint) -> Result<SpacePoint> {
        self.validate(p)?;
        if !p.is_standard() {
            return Err(Error::NotStandard(p.to_string()));
        }
        Ok(p.clone())
    }

    /// Equality in the underlying diffeological space, for standard points.
    pub fn underlying_equal(&self, p: &SpacePoint, q: &SpacePoint) -> Result<bool> {
        if !p.is_standard() || !q.is_standard() {
            return Err(Error::NotStandard(format!("{p} / {q}")));
        }
        self.validate(p)?;
        self.validate(q)?;
        Ok(match self {
            // the underlying space of •R/A is R and of •R mod real shifts is a point
            SpacePresentation::QuotientRing(_) => p.coords[0].value.same_value(&q.coords[0].value),
            SpacePresentation::RealTranslationQuotient => true,
            SpacePresentation::Product(l, r) => {
                let ((pa, pb), (qa, qb)) = (split_pair(p)?, split_pair(q)?);
                l.underlying_equal(&pa, &qa)? && r.underlying_equal(&pb, &qb)?
            }
            _ => self.point_equal(p, q)?,
        })
    }

    /// `•(X × Y) -> •X × •Y`.
    pub fn split_point(&self, p: &SpacePoint) -> Result<(SpacePoint, SpacePoint)> {
        match self {
            SpacePresentation::Product(..) => {
                self.validate(p)?;
                split_pair(p)
            }
            _ => Err(Error::UnsupportedPresentation(format!(
                "{} is not a product",
                self.kind()
            ))),
        }
    }

    /// `•X × •Y -> •(X × Y)`.
    pub fn pair_points(&self, a: &SpacePoint, b: &SpacePoint) -> Result<SpacePoint> {
        let SpacePresentation::Product(l, r) = self else {
            return Err(Error::UnsupportedPresentation(format!(
                "{} is not a product",
                self.kind()
            )));
        };
        l.validate(a)?;
        r.validate(b)?;
        let chart = Chart::Pair {
            left: Box::new(a.chart.clone()),
            right: Box::new(b.chart.clone()),
            split: a.coords.len(),
        };
        Ok(SpacePoint::new(
            chart,
            a.coords.iter().chain(&b.coords).cloned().collect(),
        ))
    }

    /// Partitions samples into classes and reports what the class structure
    /// shows about the space.
    pub fn cardinality_witness(&self, samples: &[SpacePoint]) -> Result<CardinalityWitness> {
        let owned;
        let samples = match self {
            SpacePresentation::Discrete(labels) => {
                owned = labels.iter().map(|l| SpacePoint::label(l)).collect::<Vec<_>>();
                &owned[..]
            }
            SpacePresentation::RealTranslationQuotient | SpacePresentation::LatticeQuotient(_) => samples,
            _ => {
                return Err(Error::UnsupportedPresentation(format!(
                    "no cardinality witness for {}",
                    self.kind()
                )))
            }
        };
        let mut reps: Vec<SpacePoint> = Vec::new();
        let mut class_of = Vec::with_capacity(samples.len());
        for s in samples {
            let mut found = None;
            for (k, r) in reps.iter().enumerate() {
                if self.point_equal(s, r)? {
                    found = Some(k);
                    break;
                }
            }
            class_of.push(found.unwrap_or_else(|| {
                reps.push(s.clone());
                reps.len() - 1
            }));
        }
        let delta = |p: &SpacePoint| p.coords.first().map(SpaceCoord::infinitesimal_part);
        let nonzero_delta_class = reps.iter().any(|r| delta(r).is_some_and(|d| !d.is_zero()));
        let delta_bijection = match self {
            SpacePresentation::RealTranslationQuotient => {
                let mut ok = true;
                for (i, a) in samples.iter().enumerate() {
                    for (j, b) in samples.iter().enumerate().skip(i + 1) {
                        let same_delta = delta(a)
                            .zip(delta(b))
                            .is_some_and(|(x, y)| x.same_value(&y));
                        ok &= same_delta == (class_of[i] == class_of[j]);
                    }
                }
                Some(ok)
            }
            _ => None,
        };
        let label_count = match self {
            SpacePresentation::Discrete(labels) => Some(labels.len()),
            _ => None,
        };
        Ok(CardinalityWitness {
            kind: self.kind(),
            samples: samples.len(),
            classes: reps.len(),
            representatives: reps,
            nonzero_delta_class,
            delta_bijection,
            label_count,
        })
    }

    /// Parses a point in the text syntax for this presentation.
    pub fn parse_point(&self, text: &str, backend: Backend) -> Result<SpacePoint> {
        let text = text.trim();
        let coord_list = |s: &str| -> Result<Vec<SpaceCoord>> {
            if s.trim().is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|c| parse_theta_expr(c, backend).map(SpaceCoord::from))
                .collect()
        };
        let point = match self {
            SpacePresentation::Product(..) => {
                let inner = text
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .unwrap_or(text);
                let (a, b) = split_top_level(inner, ';')
                    .ok_or_else(|| Error::parse(0, "product points are written `[p; q]`"))?;
                let SpacePresentation::Product(l, r) = self else { unreachable!() };
                let (a, b) = (l.parse_point(a, backend)?, r.parse_point(b, backend)?);
                return self.pair_points(&a, &b);
            }
            SpacePresentation::Discrete(_) => SpacePoint::label(text),
            SpacePresentation::PushoutWedge | SpacePresentation::Atlas(_) => {
                let (chart, rest) = text
                    .split_once(':')
                    .ok_or_else(|| Error::parse(0, "expected `chart: coordinates`"))?;
                let chart = chart.trim();
                let chart = match chart.parse::<usize>() {
                    Ok(i) if matches!(self, SpacePresentation::Atlas(_)) => Chart::Index(i),
                    _ => Chart::Name(chart.to_string()),
                };
                SpacePoint::new(chart, coord_list(rest)?)
            }
            _ => SpacePoint::unit(coord_list(text)?),
        };
        self.validate(&point)?;
        Ok(point)
    }

    /// Built-in sample points for witnesses.
    pub fn default_samples(&self) -> Vec<SpacePoint> {
        let tp = |p: i64, d: i64| FermatReal::t_pow(Rational::new(p, d).expect("nonzero")).expect("positive");
        match self {
            SpacePresentation::RealTranslationQuotient => vec![
                FermatReal::from_int(0),
                FermatReal::t(),
                tp(1, 2),
                FermatReal::from_int(3) + FermatReal::t(),
            ]
            .into_iter()
            .map(SpacePoint::scalar)
            .collect(),
            SpacePresentation::LatticeQuotient(_) => vec![
                FermatReal::from_int(0),
                FermatReal::from_rational(Rational::new(1, 2).expect("nonzero")),
                tp(1, 2),
            ]
            .into_iter()
            .map(SpacePoint::scalar)
            .collect(),
            _ => Vec::new(),
        }
    }
}

fn split_top_level(s: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

impl fmt::Display for SpacePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpacePresentation::LatticeQuotient(g) if *g == integer_theta_lattice() => write!(f, "torus(theta)"),
            SpacePresentation::LatticeQuotient(g) if *g == vec![ThetaCombo::one()] => write!(f, "circle"),
            SpacePresentation::LatticeQuotient(g) => {
                let gens: Vec<String> = g.iter().map(ToString::to_string).collect();
                write!(f, "lattice({})", gens.join(", "))
            }
            SpacePresentation::PushoutWedge => write!(f, "wedge"),
            SpacePresentation::Atlas(a) if *a == Atlas::circle() => write!(f, "atlas-circle"),
            SpacePresentation::Atlas(_) => write!(f, "atlas"),
            SpacePresentation::Product(l, r) => write!(f, "prod({l},{r})"),
            SpacePresentation::DirectLimit => write!(f, "dlim"),
            SpacePresentation::Discrete(labels) => write!(f, "discrete({})", labels.join(",")),
            SpacePresentation::RealTranslationQuotient => write!(f, "rquot"),
            SpacePresentation::QuotientRing(a) => write!(f, "qring({a})"),
        }
    }
}

impl FromStr for SpacePresentation {
    type Err = Error;

    /// `torus(theta)`, `circle`, `wedge`, `rquot`, `qring(D:a)`, `qring(I:b)`,
    /// `prod(S1,S2)`, `discrete(n)` or `discrete(a,b,...)`, `atlas-circle`,
    /// `dlim`, `lattice(g1, g2, ...)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            _ => (s, None),
        };
        let bad = || Error::parse(0, format!("unknown space `{s}`"));
        match (head.trim(), arg) {
            ("torus", None) | ("torus", Some("theta")) => Ok(SpacePresentation::torus()),
            ("circle", None) => Ok(SpacePresentation::circle()),
            ("wedge", None) => Ok(SpacePresentation::PushoutWedge),
            ("rquot", None) => Ok(SpacePresentation::RealTranslationQuotient),
            ("dlim", None) => Ok(SpacePresentation::DirectLimit),
            ("atlas-circle", None) => Ok(SpacePresentation::Atlas(Atlas::circle())),
            ("qring", Some(ideal)) => Ok(SpacePresentation::QuotientRing(ideal.parse()?)),
            ("prod", Some(inner)) => {
                let (a, b) = split_top_level(inner, ',').ok_or_else(bad)?;
                Ok(SpacePresentation::product(a.parse()?, b.parse()?))
            }
            ("discrete", Some(inner)) => match inner.trim().parse::<usize>() {
                Ok(n) => SpacePresentation::discrete((0..n).map(|i| i.to_string())),
                Err(_) => SpacePresentation::discrete(inner.split(',').map(|l| l.trim().to_string())),
            },
            ("lattice", Some(inner)) => {
                let gens = inner
                    .split(',')
                    .map(|g| {
                        let v = parse_theta_expr(g, Backend::Exact)?;
                        match (v.value.is_standard(), v.value.std()) {
                            (true, Scalar::Exact(a)) => Ok(ThetaCombo::new(a.clone(), v.theta)),
                            _ => Err(Error::parse(0, format!("generator `{g}` is not in Q + Q*theta"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                SpacePresentation::lattice(gens)
            }
            _ => Err(bad()),
        }
    }
}

/// What the sampled class structure shows.
#[derive(Clone, Debug, PartialEq)]
pub struct CardinalityWitness {
    pub kind: &'static str,
    pub samples: usize,
    pub classes: usize,
    pub representatives: Vec<SpacePoint>,
    /// Some class has a representative with nonzero infinitesimal part.
    pub nonzero_delta_class: bool,
    /// Real-translation quotient: classes correspond exactly to
    /// infinitesimal parts on the samples.
    pub delta_bijection: Option<bool>,
    pub label_count: Option<usize>,
}

impl CardinalityWitness {
    /// The space has more than one point on the samples.
    pub fn nontrivial(&self) -> bool {
        self.classes >= 2
    }
}
