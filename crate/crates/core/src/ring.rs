//! The ring of Fermat reals in canonical decomposition, its order, ideals and
//! quotient rings.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::scalar::{Backend, Rational, Scalar};

/// One nilpotent term `coeff * t^exp`, with `0 < exp <= 1` once normalized.
#[derive(Clone, PartialEq, Debug)]
pub struct Term {
    pub exp: Rational,
    pub coeff: Scalar,
}

impl Term {
    pub fn new(exp: Rational, coeff: Scalar) -> Self {
        Term { exp, coeff }
    }
}

/// A Fermat real `std + sum coeff_i * t^exp_i` in its unique decomposition:
/// exponents strictly increasing in `(0, 1]`, coefficients nonzero, every
/// scalar on the same backend.
#[derive(Clone, PartialEq)]
pub struct FermatReal {
    std: Scalar,
    terms: Vec<Term>,
}

impl FermatReal {
    /// Builds the canonical decomposition of `std + sum c t^e`: terms with
    /// `e > 1` vanish, equal exponents merge, zero coefficients drop.
    pub fn normalize(std: Scalar, raw_terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        let backend = std.backend();
        let mut terms: Vec<Term> = Vec::new();
        for term in raw_terms {
            if !term.exp.is_positive() {
                return Err(Error::NonPositiveExponent(term.exp.to_string()));
            }
            if term.coeff.backend() != backend {
                return Err(Error::BackendMismatch);
            }
            if term.exp > Rational::one() {
                continue;
            }
            terms.push(term);
        }
        terms.sort_by(|a, b| a.exp.cmp(&b.exp));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) if last.exp == term.exp => last.coeff = &last.coeff + &term.coeff,
                _ => merged.push(term),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        Ok(FermatReal { std, terms: merged })
    }

    /// Assumes the terms are already canonical for this backend.
    fn from_canonical(std: Scalar, terms: Vec<Term>) -> Self {
        FermatReal { std, terms }
    }

    pub fn standard(std: Scalar) -> Self {
        FermatReal {
            std,
            terms: Vec::new(),
        }
    }

    pub fn zero(backend: Backend) -> Self {
        FermatReal::standard(Scalar::zero(backend))
    }

    pub fn one(backend: Backend) -> Self {
        FermatReal::standard(Scalar::one(backend))
    }

    pub fn from_rational(r: Rational) -> Self {
        FermatReal::standard(Scalar::Exact(r))
    }

    pub fn from_int(n: i64) -> Self {
        FermatReal::from_rational(Rational::from(n))
    }

    /// `coeff * t^exp` on the coefficient's backend.
    pub fn monomial(coeff: Scalar, exp: Rational) -> Result<Self> {
        let zero = Scalar::zero(coeff.backend());
        FermatReal::normalize(zero, [Term::new(exp, coeff)])
    }

    /// `t^exp` in the exact backend.
    pub fn t_pow(exp: Rational) -> Result<Self> {
        FermatReal::monomial(Scalar::int(1), exp)
    }

    /// The first-order infinitesimal `t`.
    pub fn t() -> Self {
        FermatReal::t_pow(Rational::one()).expect("positive exponent")
    }

    pub fn std(&self) -> &Scalar {
        &self.std
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn backend(&self) -> Backend {
        self.std.backend()
    }

    pub fn is_zero(&self) -> bool {
        self.std.is_zero() && self.terms.is_empty()
    }

    pub fn is_standard(&self) -> bool {
        self.terms.is_empty()
    }

    /// False when a float coefficient overflowed or became NaN.
    pub fn is_finite(&self) -> bool {
        let finite = |s: &Scalar| s.to_f64().is_finite() || s.backend() == Backend::Exact;
        finite(&self.std) && self.terms.iter().all(|t| finite(&t.coeff))
    }

    pub fn standard_part(&self) -> Scalar {
        self.std.clone()
    }

    pub fn infinitesimal_part(&self) -> FermatReal {
        FermatReal::from_canonical(Scalar::zero(self.backend()), self.terms.clone())
    }

    /// Explicit coercion of every scalar to `backend`.
    pub fn to_backend(&self, backend: Backend) -> Result<FermatReal> {
        let std = self.std.to_backend(backend)?;
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(Term::new(t.exp.clone(), t.coeff.to_backend(backend)?)))
            .collect::<Result<Vec<_>>>()?;
        FermatReal::normalize(std, terms)
    }

    fn check_backend(&self, other: &FermatReal) -> Result<()> {
        if self.backend() == other.backend() {
            Ok(())
        } else {
            Err(Error::BackendMismatch)
        }
    }

    pub fn checked_add(&self, other: &FermatReal) -> Result<FermatReal> {
        self.check_backend(other)?;
        let terms = self.terms.iter().chain(other.terms.iter()).cloned();
        FermatReal::normalize(&self.std + &other.std, terms)
    }

    pub fn checked_sub(&self, other: &FermatReal) -> Result<FermatReal> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &FermatReal) -> Result<FermatReal> {
        self.check_backend(other)?;
        let mut raw = Vec::with_capacity((self.terms.len() + 1) * (other.terms.len() + 1));
        for t in &other.terms {
            raw.push(Term::new(t.exp.clone(), &self.std * &t.coeff));
        }
        for s in &self.terms {
            raw.push(Term::new(s.exp.clone(), &s.coeff * &other.std));
            for t in &other.terms {
                let exp = &s.exp + &t.exp;
                if exp <= Rational::one() {
                    raw.push(Term::new(exp, &s.coeff * &t.coeff));
                }
            }
        }
        FermatReal::normalize(&self.std * &other.std, raw)
    }

    /// Multiplication by a scalar of the same backend.
    pub fn scale(&self, k: &Scalar) -> Result<FermatReal> {
        if k.backend() != self.backend() {
            return Err(Error::BackendMismatch);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.exp.clone(), &t.coeff * k));
        FermatReal::normalize(&self.std * k, terms)
    }

    /// `self^k` by repeated multiplication.
    pub fn pow(&self, k: u32) -> FermatReal {
        let mut acc = FermatReal::one(self.backend());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse, defined exactly when the standard part is
    /// nonzero: `(1/s) * sum_{k<m} (-dx/s)^k` with `m` the nilpotency index.
    pub fn inv(&self) -> Result<FermatReal> {
        if self.std.is_zero() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let backend = self.backend();
        let inv_std = Scalar::one(backend).checked_div(&self.std)?;
        let ratio = self.infinitesimal_part().scale(&-&inv_std)?;
        let mut sum = FermatReal::one(backend);
        let mut power = FermatReal::one(backend);
        for _ in 1..self.nilpotency_index() {
            power = &power * &ratio;
            sum = &sum + &power;
        }
        sum.scale(&inv_std)
    }

    pub fn checked_div(&self, other: &FermatReal) -> Result<FermatReal> {
        self.check_backend(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// `omega = 1/b_1` for the least exponent of the infinitesimal part, and
    /// `0` for standard reals.
    pub fn order(&self) -> Rational {
        match self.terms.first() {
            Some(first) => first.exp.recip().expect("exponents are positive"),
            None => Rational::zero(),
        }
    }

    /// Least `m >= 1` with `(dx)^m = 0`.
    pub fn nilpotency_index(&self) -> u32 {
        if self.terms.is_empty() {
            return 1;
        }
        let floor = self.order().floor();
        floor.to_u32().expect("order fits in u32") + 1
    }

    /// The dictionary order on quasi-decompositions over the union of both
    /// exponent sets.
    pub fn compare(&self, other: &FermatReal) -> Result<Ordering> {
        self.check_backend(other)?;
        let first = self.std.cmp_tol(&other.std);
        if first != Ordering::Equal {
            return Ok(first);
        }
        let zero = Scalar::zero(self.backend());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let (a, b) = match (self.terms.get(i), other.terms.get(j)) {
                (Some(x), Some(y)) => match x.exp.cmp(&y.exp) {
                    Ordering::Less => {
                        i += 1;
                        (&x.coeff, &zero)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (&zero, &y.coeff)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (&x.coeff, &y.coeff)
                    }
                },
                (Some(x), None) => {
                    i += 1;
                    (&x.coeff, &zero)
                }
                (None, Some(y)) => {
                    j += 1;
                    (&zero, &y.coeff)
                }
                (None, None) => unreachable!(),
            };
            let ord = a.cmp_tol(b);
            if ord != Ordering::Equal {
                return Ok(ord);
            }
        }
        Ok(Ordering::Equal)
    }

    /// Value equality: exact on the exact backend, toleranced on floats
    /// (after an explicit coercion when the backends differ).
    pub fn same_value(&self, other: &FermatReal) -> bool {
        match (self.backend(), other.backend()) {
            (Backend::Exact, Backend::Exact) => self == other,
            _ => {
                let a = self.to_backend(Backend::Float).expect("coercion to float");
                let b = other.to_backend(Backend::Float).expect("coercion to float");
                a.compare(&b) == Ok(Ordering::Equal)
            }
        }
    }

    /// Approximate equality with a caller-chosen relative tolerance.
    pub fn approx_eq_tol(&self, other: &FermatReal, rel: f64) -> bool {
        let diff = match (self.to_backend(Backend::Float), other.to_backend(Backend::Float)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return false,
        };
        let (a, b) = diff;
        if !a.std.approx_eq_tol(&b.std, rel) {
            return false;
        }
        let zero = Scalar::Float(0.0);
        let coeff_at = |x: &FermatReal, e: &Rational| {
            x.terms
                .iter()
                .find(|t| &t.exp == e)
                .map(|t| t.coeff.clone())
                .unwrap_or_else(|| zero.clone())
        };
        a.terms
            .iter()
            .chain(b.terms.iter())
            .all(|t| coeff_at(&a, &t.exp).approx_eq_tol(&coeff_at(&b, &t.exp), rel))
    }

    pub fn ideal_member(&self, ideal: &IdealSpec) -> bool {
        if matches!(ideal, IdealSpec::Zero) {
            return self.is_zero();
        }
        if !self.std.is_zero() {
            return false;
        }
        match ideal {
            IdealSpec::Zero => unreachable!(),
            IdealSpec::Dinf | IdealSpec::D(DParam::Infinite) => true,
            IdealSpec::D(DParam::Finite(a)) => self.order() < a + &Rational::one(),
            IdealSpec::I(b) => self.order() <= *b,
        }
    }

    /// Canonical coset representative of `self + A`.
    pub fn quotient_normal_form(&self, ideal: &IdealSpec) -> FermatReal {
        let keep: Box<dyn Fn(&Rational) -> bool> = match ideal {
            IdealSpec::Zero => return self.clone(),
            IdealSpec::Dinf | IdealSpec::D(DParam::Infinite) => Box::new(|_| false),
            IdealSpec::D(DParam::Finite(a)) => {
                let bound = (a + &Rational::one()).recip().expect("a > 0");
                Box::new(move |e| *e <= bound)
            }
            IdealSpec::I(b) => {
                let bound = b.recip().expect("b >= 1");
                Box::new(move |e| *e < bound)
            }
        };
        let terms = self.terms.iter().filter(|t| keep(&t.exp)).cloned().collect();
        FermatReal::from_canonical(self.std.clone(), terms)
    }
}

impl Default for FermatReal {
    fn default() -> Self {
        FermatReal::zero(Backend::Exact)
    }
}

fn unwrap_same_backend(r: Result<FermatReal>) -> FermatReal {
    r.expect("Fermat arithmetic mixed backends; use the checked_* methods")
}

macro_rules! fermat_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FermatReal> for &FermatReal {
            type Output = FermatReal;
            fn $method(self, rhs: &FermatReal) -> FermatReal {
                unwrap_same_backend(self.$checked(rhs))
            }
        }
        impl $tr<FermatReal> for FermatReal {
            type Output = FermatReal;
            fn $method(self, rhs: FermatReal) -> FermatReal {
                unwrap_same_backend(self.$checked(&rhs))
            }
        }
    };
}

fermat_binop!(Add, add, checked_add);
fermat_binop!(Sub, sub, checked_sub);
fermat_binop!(Mul, mul, checked_mul);

impl Neg for &FermatReal {
    type Output = FermatReal;
    fn neg(self) -> FermatReal {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.exp.clone(), -&t.coeff))
            .collect();
        FermatReal::from_canonical(-&self.std, terms)
    }
}

impl Neg for FermatReal {
    type Output = FermatReal;
    fn neg(self) -> FermatReal {
        -&self
    }
}

/// Text form `3 + 2*t^(1/2) + 5*t^(1)`.
impl fmt::Display for FermatReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.std.is_zero() || self.terms.is_empty() {
            write!(f, "{}", self.std)?;
            wrote = true;
        }
        for term in &self.terms {
            let negative = term.coeff.is_negative();
            let magnitude = term.coeff.abs();
            match (wrote, negative) {
                (false, false) => {}
                (false, true) => write!(f, "-")?,
                (true, false) => write!(f, " + ")?,
                (true, true) => write!(f, " - ")?,
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude}*")?;
            }
            write!(f, "t^({})", term.exp)?;
            wrote = true;
        }
        Ok(())
    }
}

impl fmt::Debug for FermatReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FermatReal({self})")
    }
}

/// A point of `•R^n`, one Fermat real per coordinate.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct FermatPoint(pub Vec<FermatReal>);

impl FermatPoint {
    pub fn new(coords: Vec<FermatReal>) -> Self {
        FermatPoint(coords)
    }

    pub fn standard(values: &[Scalar]) -> Self {
        FermatPoint(values.iter().cloned().map(FermatReal::standard).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[FermatReal] {
        &self.0
    }

    pub fn standard_parts(&self) -> Vec<Scalar> {
        self.0.iter().map(FermatReal::standard_part).collect()
    }

    pub fn standard_point(&self) -> FermatPoint {
        FermatPoint::standard(&self.standard_parts())
    }

    pub fn is_standard(&self) -> bool {
        self.0.iter().all(FermatReal::is_standard)
    }

    pub fn concat(&self, other: &FermatPoint) -> FermatPoint {
        FermatPoint(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    /// Common backend of all coordinates, `None` for the empty point.
    pub fn backend(&self) -> Result<Option<Backend>> {
        let mut found = None;
        for c in &self.0 {
            match found {
                None => found = Some(c.backend()),
                Some(b) if b != c.backend() => return Err(Error::BackendMismatch),
                _ => {}
            }
        }
        Ok(found)
    }
}

impl From<Vec<FermatReal>> for FermatPoint {
    fn from(v: Vec<FermatReal>) -> Self {
        FermatPoint(v)
    }
}

/// Parameter of the ideals `D_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DParam {
    Finite(Rational),
    Infinite,
}

/// The ideals of `•R`: `{0}`, `D_a` (`omega < a + 1`), `I_b` (`omega <= b`)
/// and `D_inf` (all infinitesimals).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealSpec {
    Zero,
    D(DParam),
    I(Rational),
    Dinf,
}

impl IdealSpec {
    /// `D = D_1`, the first-order infinitesimals.
    pub fn first_order() -> Self {
        IdealSpec::D(DParam::Finite(Rational::one()))
    }

    pub fn d(a: Rational) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidIdeal(format!("D_a needs a > 0, got {a}")));
        }
        Ok(IdealSpec::D(DParam::Finite(a)))
    }

    pub fn i(b: Rational) -> Result<Self> {
        if b < Rational::one() {
            return Err(Error::InvalidIdeal(format!("I_b needs b >= 1, got {b}")));
        }
        Ok(IdealSpec::I(b))
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealSpec::Zero => write!(f, "0"),
            IdealSpec::Dinf => write!(f, "Dinf"),
            IdealSpec::D(DParam::Infinite) => write!(f, "D:inf"),
            IdealSpec::D(DParam::Finite(a)) => write!(f, "D:{a}"),
            IdealSpec::I(b) => write!(f, "I:{b}"),
        }
    }
}

impl FromStr for IdealSpec {
    type Err = Error;

    /// `0`, `Dinf`, `D:a`, `D:inf` or `I:b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "0" => return Ok(IdealSpec::Zero),
            "Dinf" | "D_inf" => return Ok(IdealSpec::Dinf),
            _ => {}
        }
        let (kind, param) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(0, format!("invalid ideal `{s}`")))?;
        let param = param.trim();
        match kind.trim() {
            "D" if param == "inf" => Ok(IdealSpec::D(DParam::Infinite)),
            "D" => IdealSpec::d(param.parse()?),
            "I" => IdealSpec::i(param.parse()?),
            other => Err(Error::parse(0, format!("unknown ideal kind `{other}`"))),
        }
    }
}
