//! Finite unions of open rational boxes and the Fermat topology
//! `•U = {x : °x ∈ U}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ring::{FermatPoint, FermatReal};
use crate::scalar::{Rational, Scalar};
use crate::smooth::{Expr, SmoothExpr};

/// An interval endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Bound {
    fn rank(&self) -> u8 {
        match self {
            Bound::NegInf => 0,
            Bound::Finite(_) => 1,
            Bound::PosInf => 2,
        }
    }

    /// Strictly below a scalar value.
    fn below(&self, x: &Scalar) -> bool {
        match self {
            Bound::NegInf => true,
            Bound::PosInf => false,
            Bound::Finite(r) => match x {
                Scalar::Exact(v) => r < v,
                Scalar::Float(v) => r.to_f64() < *v,
            },
        }
    }

    /// Strictly above a scalar value.
    fn above(&self, x: &Scalar) -> bool {
        match self {
            Bound::NegInf => false,
            Bound::PosInf => true,
            Bound::Finite(r) => match x {
                Scalar::Exact(v) => r > v,
                Scalar::Float(v) => r.to_f64() > *v,
            },
        }
    }

    fn affine(&self, scale: &Rational, shift: &Rational) -> Bound {
        match self {
            Bound::Finite(r) => Bound::Finite(&(r * scale) + shift),
            Bound::NegInf if scale.is_positive() => Bound::NegInf,
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf if scale.is_positive() => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::PosInf => write!(f, "inf"),
            Bound::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for Bound {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" => Ok(Bound::NegInf),
            "inf" | "+inf" => Ok(Bound::PosInf),
            other => Ok(Bound::Finite(other.parse()?)),
        }
    }
}

/// An open interval `(lo, hi)`; constructed only when nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    /// `None` when the interval is empty.
    pub fn new(lo: Bound, hi: Bound) -> Option<Interval> {
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn finite(lo: Rational, hi: Rational) -> Option<Interval> {
        Interval::new(Bound::Finite(lo), Bound::Finite(hi))
    }

    pub fn real_line() -> Interval {
        Interval {
            lo: Bound::NegInf,
            hi: Bound::PosInf,
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.lo.below(x) && self.hi.above(x)
    }

    /// Membership in the closure `[lo, hi]`.
    pub fn closure_contains(&self, x: &Scalar) -> bool {
        !self.lo.above(x) && !self.hi.below(x)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
        )
    }

    fn affine(&self, scale: &Rational, shift: &Rational) -> Interval {
        let (a, b) = (self.lo.affine(scale, shift), self.hi.affine(scale, shift));
        if scale.is_positive() {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// A product of open intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenBox(pub Vec<Interval>);

impl OpenBox {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.0.iter().zip(x).all(|(i, v)| i.contains(v))
    }

    pub fn intersect(&self, other: &OpenBox) -> Option<OpenBox> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(OpenBox)
    }
}

impl fmt::Display for OpenBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "x")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// A finite union of open boxes in `R^dim`. One-dimensional sets are kept in
/// canonical form (sorted, disjoint, maximal), so structural equality is set
/// equality there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenSetDesc {
    dim: usize,
    boxes: Vec<OpenBox>,
}

impl OpenSetDesc {
    pub fn new(dim: usize, boxes: Vec<OpenBox>) -> Result<Self> {
        if let Some(b) = boxes.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
        let mut set = OpenSetDesc { dim, boxes };
        set.canonicalize();
        Ok(set)
    }

    pub fn empty(dim: usize) -> Self {
        OpenSetDesc {
            dim,
            boxes: Vec::new(),
        }
    }

    pub fn whole(dim: usize) -> Self {
        OpenSetDesc {
            dim,
            boxes: vec![OpenBox(vec![Interval::real_line(); dim])],
        }
    }

    pub fn from_intervals(intervals: Vec<Interval>) -> Self {
        let boxes = intervals.into_iter().map(|i| OpenBox(vec![i])).collect();
        OpenSetDesc::new(1, boxes).expect("one-dimensional boxes")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[OpenBox] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    fn canonicalize(&mut self) {
        if self.dim != 1 {
            return;
        }
        let mut intervals: Vec<Interval> = self.boxes.drain(..).map(|b| b.0[0].clone()).collect();
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::new();
        for i in intervals {
            match merged.last_mut() {
                // overlapping opens merge; touching ones keep the shared endpoint out
                Some(last) if i.lo < last.hi => {
                    if i.hi > last.hi {
                        last.hi = i.hi;
                    }
                }
                _ => merged.push(i),
            }
        }
        self.boxes = merged.into_iter().map(|i| OpenBox(vec![i])).collect();
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }

    pub fn contains_standard(&self, x: &[Scalar]) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(self.boxes.iter().any(|b| b.contains(x)))
    }

    /// `x ∈ •U` iff `°x ∈ U`.
    pub fn fermat_contains(&self, x: &FermatPoint) -> Result<bool> {
        self.contains_standard(&x.standard_parts())
    }

    pub fn intersect(&self, other: &OpenSetDesc) -> Result<OpenSetDesc> {
        self.check_dim(other.dim)?;
        let boxes = self
            .boxes
            .iter()
            .flat_map(|a| other.boxes.iter().filter_map(move |b| a.intersect(b)))
            .collect();
        OpenSetDesc::new(self.dim, boxes)
    }

    pub fn union(&self, other: &OpenSetDesc) -> Result<OpenSetDesc> {
        self.check_dim(other.dim)?;
        let boxes = self.boxes.iter().chain(&other.boxes).cloned().collect();
        OpenSetDesc::new(self.dim, boxes)
    }

    /// Membership in the closure of a one-dimensional set.
    pub fn closure_contains(&self, x: &Scalar) -> Result<bool> {
        if self.dim != 1 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        Ok(self.boxes.iter().any(|b| b.0[0].closure_contains(x)))
    }

    /// `int(R \ U)`: the open gaps between the closures of the components.
    pub fn interior_complement(&self) -> Result<OpenSetDesc> {
        if self.dim != 1 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        let mut gaps = Vec::new();
        let mut cursor = Bound::NegInf;
        for b in &self.boxes {
            let i = &b.0[0];
            if let Some(gap) = Interval::new(cursor.clone(), i.lo.clone()) {
                gaps.push(gap);
            }
            cursor = i.hi.clone();
        }
        if let Some(gap) = Interval::new(cursor, Bound::PosInf) {
            gaps.push(gap);
        }
        Ok(OpenSetDesc::from_intervals(gaps))
    }

    pub fn affine_image(&self, map: &AffineMap) -> Result<OpenSetDesc> {
        self.check_dim(map.dim())?;
        map.check_regular()?;
        let boxes = self
            .boxes
            .iter()
            .map(|b| {
                OpenBox(
                    b.0.iter()
                        .zip(map.scale.iter().zip(&map.shift))
                        .map(|(i, (s, c))| i.affine(s, c))
                        .collect(),
                )
            })
            .collect();
        OpenSetDesc::new(self.dim, boxes)
    }

    pub fn affine_preimage(&self, map: &AffineMap) -> Result<OpenSetDesc> {
        self.affine_image(&map.inverse()?)
    }
}

impl fmt::Display for OpenSetDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return write!(f, "empty");
        }
        for (k, b) in self.boxes.iter().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for OpenSetDesc {
    type Err = Error;

    /// `(a,b)x(c,d) | (e,f)x(g,h)`; `empty` is the empty subset of `R`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "empty" {
            return Ok(OpenSetDesc::empty(1));
        }
        let mut boxes = Vec::new();
        let mut dim = None;
        for part in s.split('|') {
            let mut intervals = Vec::new();
            let mut empty = false;
            for factor in part.split('x') {
                let factor = factor.trim();
                let inner = factor
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::parse(0, format!("expected `(a,b)`, got `{factor}`")))?;
                let (lo, hi) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::parse(0, format!("expected `(a,b)`, got `{factor}`")))?;
                match Interval::new(lo.parse()?, hi.parse()?) {
                    Some(i) => intervals.push(i),
                    None => {
                        empty = true;
                        intervals.push(Interval::real_line());
                    }
                }
            }
            match dim {
                None => dim = Some(intervals.len()),
                Some(d) if d != intervals.len() => {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: intervals.len(),
                    })
                }
                _ => {}
            }
            if !empty {
                boxes.push(OpenBox(intervals));
            }
        }
        OpenSetDesc::new(dim.unwrap_or(1), boxes)
    }
}

/// `x ↦ scale * x + shift`, componentwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub scale: Vec<Rational>,
    pub shift: Vec<Rational>,
}

impl AffineMap {
    pub fn new(scale: Vec<Rational>, shift: Vec<Rational>) -> Result<Self> {
        if scale.len() != shift.len() {
            return Err(Error::DimensionMismatch {
                expected: scale.len(),
                found: shift.len(),
            });
        }
        Ok(AffineMap { scale, shift })
    }

    pub fn identity(dim: usize) -> Self {
        AffineMap {
            scale: vec![Rational::one(); dim],
            shift: vec![Rational::zero(); dim],
        }
    }

    pub fn translation(shift: Vec<Rational>) -> Self {
        AffineMap {
            scale: vec![Rational::one(); shift.len()],
            shift,
        }
    }

    pub fn dim(&self) -> usize {
        self.scale.len()
    }

    fn check_regular(&self) -> Result<()> {
        if self.scale.iter().any(Rational::is_zero) {
            Err(Error::SingularMap)
        } else {
            Ok(())
        }
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        self.check_regular()?;
        let scale: Vec<Rational> = self.scale.iter().map(|s| s.recip()).collect::<Result<_>>()?;
        let shift = self
            .shift
            .iter()
            .zip(&scale)
            .map(|(c, inv)| -(c * inv))
            .collect();
        Ok(AffineMap { scale, shift })
    }

    /// The components as smooth expressions in `x0, x1, ...`.
    pub fn as_smooth(&self) -> Vec<SmoothExpr> {
        let vars: Vec<String> = (0..self.dim()).map(|i| format!("x{i}")).collect();
        self.scale
            .iter()
            .zip(&self.shift)
            .enumerate()
            .map(|(i, (s, c))| {
                let body = Expr::add(
                    Expr::mul(Expr::constant(s.clone()), Expr::var(vars[i].clone())),
                    Expr::constant(c.clone()),
                );
                SmoothExpr::new(vars.clone(), body).expect("declared variables")
            })
            .collect()
    }

    /// `•m(x)`, computed directly on Fermat coordinates.
    pub fn apply_fermat(&self, x: &FermatPoint) -> Result<FermatPoint> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let coords = x
            .coords()
            .iter()
            .zip(self.scale.iter().zip(&self.shift))
            .map(|(v, (s, c))| {
                let backend = v.backend();
                let s = Scalar::Exact(s.clone()).to_backend(backend)?;
                let c = FermatReal::standard(Scalar::Exact(c.clone()).to_backend(backend)?);
                v.scale(&s)?.checked_add(&c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FermatPoint::new(coords))
    }
}
