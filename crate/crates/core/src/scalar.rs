//! Scalar foundations: exact rationals, the tagged exact/float scalar, and
//! rational combinations `a + b*theta` over a formal irrational `theta`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Relative tolerance for float-backend equality.
pub const FLOAT_REL_TOL: f64 = 1e-12;
/// Absolute tolerance for float-backend equality near zero.
pub const FLOAT_ABS_TOL: f64 = 1e-15;

/// An arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational> {
        Rational::one().checked_div(self)
    }

    pub fn to_f64(&self) -> f64 {
        // Ratio::to_f64 handles numerators and denominators beyond f64 range.
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! rational_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `p/q` and plain decimals such as `-0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse(0, format!("invalid rational `{s}`"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            return Rational::new(p, q);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.trim_start().starts_with('-');
            let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
                "" => BigInt::zero(),
                digits => digits.parse().map_err(|_| bad())?,
            };
            let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let magnitude = Rational::new(int_part * &scale + frac_part, scale)?;
            return Ok(if negative { -magnitude } else { magnitude });
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

/// Which arithmetic a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            _ => Err(Error::parse(0, format!("unknown backend `{s}`"))),
        }
    }
}

/// A coefficient: either an exact rational or a double.
///
/// The arithmetic operators panic when the two operands use different
/// backends; converting is always explicit through [`Scalar::to_backend`].
#[derive(Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(Rational::zero()),
            Backend::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(Rational::one()),
            Backend::Float => Scalar::Float(1.0),
        }
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(Rational::from(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Exact(Rational::new(p, q).expect("nonzero denominator"))
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_one(),
            Scalar::Float(x) => *x == 1.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    /// Explicit coercion. Float to exact is not supported; it returns
    /// `BackendMismatch`.
    pub fn to_backend(&self, backend: Backend) -> Result<Scalar> {
        match (self, backend) {
            (Scalar::Exact(_), Backend::Exact) | (Scalar::Float(_), Backend::Float) => {
                Ok(self.clone())
            }
            (Scalar::Exact(r), Backend::Float) => Ok(Scalar::Float(r.to_f64())),
            (Scalar::Float(_), Backend::Exact) => Err(Error::BackendMismatch),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.checked_div(b).map(Scalar::Exact),
            (Scalar::Float(a), Scalar::Float(b)) => {
                if *b == 0.0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Float(a / b))
                }
            }
            _ => Err(Error::BackendMismatch),
        }
    }

    /// Rational exponent scaling of an exact scalar by an integer (used for
    /// Taylor coefficients).
    pub fn scale_int(&self, k: i64) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r * &Rational::from(k)),
            Scalar::Float(x) => Scalar::Float(x * k as f64),
        }
    }

    /// Equality with the float tolerance; exact scalars compare exactly.
    pub fn approx_eq(&self, other: &Scalar) -> bool {
        self.approx_eq_tol(other, FLOAT_REL_TOL)
    }

    pub fn approx_eq_tol(&self, other: &Scalar, rel: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let scale = a.abs().max(b.abs());
                (a - b).abs() <= FLOAT_ABS_TOL.max(rel * scale)
            }
        }
    }

    /// Ordering that treats float values within tolerance as equal.
    pub fn cmp_tol(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                if self.approx_eq(other) {
                    Ordering::Equal
                } else {
                    self.to_f64().total_cmp(&other.to_f64())
                }
            }
        }
    }
}

fn mixed() -> ! {
    panic!("scalar arithmetic mixed exact and float backends; coerce explicitly first")
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a $op b),
                    _ => mixed(),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `a + b*theta`, where `theta` is a formal irrational with no rational
/// relations. Equality is componentwise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ThetaCombo {
    pub a: Rational,
    pub b: Rational,
}

impl ThetaCombo {
    pub fn new(a: Rational, b: Rational) -> Self {
        ThetaCombo { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        ThetaCombo {
            a,
            b: Rational::zero(),
        }
    }

    pub fn one() -> Self {
        ThetaCombo::rational(Rational::one())
    }

    pub fn theta() -> Self {
        ThetaCombo::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> ThetaCombo {
        ThetaCombo::new(&self.a * k, &self.b * k)
    }
}

impl Add<&ThetaCombo> for &ThetaCombo {
    type Output = ThetaCombo;
    fn add(self, rhs: &ThetaCombo) -> ThetaCombo {
        ThetaCombo::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub<&ThetaCombo> for &ThetaCombo {
    type Output = ThetaCombo;
    fn sub(self, rhs: &ThetaCombo) -> ThetaCombo {
        ThetaCombo::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Neg for &ThetaCombo {
    type Output = ThetaCombo;
    fn neg(self) -> ThetaCombo {
        ThetaCombo::new(-&self.a, -&self.b)
    }
}

impl fmt::Display for ThetaCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let coeff = |f: &mut fmt::Formatter<'_>, b: &Rational| {
            if b.is_one() {
                write!(f, "theta")
            } else {
                write!(f, "{b}*theta")
            }
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-")?;
            }
            return coeff(f, &self.b.abs());
        }
        write!(f, "{} {} ", self.a, if self.b.is_negative() { '-' } else { '+' })?;
        coeff(f, &self.b.abs())
    }
}

impl fmt::Debug for ThetaCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The standard lattice `Z + theta*Z`.
pub fn integer_theta_lattice() -> Vec<ThetaCombo> {
    vec![ThetaCombo::one(), ThetaCombo::theta()]
}

/// The subgroup of `Q + Q*theta` spanned over the integers by a finite
/// generating set, kept in Hermite normal form after clearing denominators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaLattice {
    scale: BigInt,
    /// First row `(lead, tail)`; `lead == 0` means the lattice lies on the
    /// theta axis.
    lead: BigInt,
    tail: BigInt,
    /// Generator of the remaining `(0, second)` row.
    second: BigInt,
}

impl ThetaLattice {
    pub fn new(generators: &[ThetaCombo]) -> Self {
        let scale = generators.iter().fold(BigInt::one(), |acc, g| {
            acc.lcm(g.a.denom()).lcm(g.b.denom())
        });
        let to_int = |r: &Rational| r.numer() * (&scale / r.denom());
        let mut rows: Vec<(BigInt, BigInt)> = generators
            .iter()
            .map(|g| (to_int(&g.a), to_int(&g.b)))
            .collect();

        // Unimodular row reduction of the first column into rows[0].
        let mut pivot = (BigInt::zero(), BigInt::zero());
        let mut rest = Vec::new();
        for row in rows.drain(..) {
            if pivot.0.is_zero() && row.0.is_zero() {
                rest.push(row);
                continue;
            }
            if pivot.0.is_zero() {
                rest.push(pivot);
                pivot = row;
                continue;
            }
            let egcd = pivot.0.extended_gcd(&row.0);
            let (g, s, t) = (egcd.gcd, egcd.x, egcd.y);
            let new_pivot = (
                &s * &pivot.0 + &t * &row.0,
                &s * &pivot.1 + &t * &row.1,
            );
            let c = &row.0 / &g;
            let a = &pivot.0 / &g;
            let eliminated = &c * &pivot.1 - &a * &row.1;
            rest.push((BigInt::zero(), eliminated));
            pivot = new_pivot;
        }
        let second = rest
            .iter()
            .fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
        let (mut lead, mut tail) = pivot;
        if lead.is_negative() {
            lead = -lead;
            tail = -tail;
        }
        if !second.is_zero() {
            tail = tail.mod_floor(&second);
        }
        ThetaLattice {
            scale,
            lead,
            tail,
            second,
        }
    }

    pub fn contains(&self, x: &ThetaCombo) -> bool {
        let u = &x.a * &Rational::from_integer(self.scale.clone());
        let v = &x.b * &Rational::from_integer(self.scale.clone());
        if !u.is_integer() || !v.is_integer() {
            return false;
        }
        let (u, v) = (u.numer().clone(), v.numer().clone());
        let residual = if self.lead.is_zero() {
            if !u.is_zero() {
                return false;
            }
            v
        } else {
            if !u.is_multiple_of(&self.lead) {
                return false;
            }
            let n = &u / &self.lead;
            v - n * &self.tail
        };
        if self.second.is_zero() {
            residual.is_zero()
        } else {
            residual.is_multiple_of(&self.second)
        }
    }
}

/// True iff `x` is an integer combination of `lattice`.
pub fn theta_lattice_member(x: &ThetaCombo, lattice: &[ThetaCombo]) -> bool {
    ThetaLattice::new(lattice).contains(x)
}
