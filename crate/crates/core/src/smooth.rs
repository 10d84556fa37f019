//! Smooth expressions, symbolic partial derivatives, and Fermat extensions
//! of smooth maps together with the quasi-standard smooth maps built on
//! them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{FermatPoint, FermatReal};
use crate::scalar::{Backend, Rational, Scalar};
use crate::topology::OpenSetDesc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prim {
    Exp,
    Log,
    Sin,
    Cos,
}

impl Prim {
    pub fn name(self) -> &'static str {
        match self {
            Prim::Exp => "exp",
            Prim::Log => "log",
            Prim::Sin => "sin",
            Prim::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Prim> {
        match name {
            "exp" => Some(Prim::Exp),
            "log" => Some(Prim::Log),
            "sin" => Some(Prim::Sin),
            "cos" => Some(Prim::Cos),
            _ => None,
        }
    }

    /// `f^(k)(c) / k!` for `k = 0..count`.
    pub fn taylor_coefficients(self, c: &Scalar, count: usize) -> Result<Vec<Scalar>> {
        let derivs = self.derivatives(c, count)?;
        let mut coeffs = Vec::with_capacity(count);
        let mut factorial = Scalar::one(c.backend());
        for (k, d) in derivs.into_iter().enumerate() {
            if k > 0 {
                factorial = factorial.scale_int(k as i64);
            }
            coeffs.push(d.checked_div(&factorial)?);
        }
        Ok(coeffs)
    }

    /// `f(c), f'(c), ..., f^(count-1)(c)`.
    fn derivatives(self, c: &Scalar, count: usize) -> Result<Vec<Scalar>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        let positive = match c {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        };
        if self == Prim::Log && !positive {
            return Err(Error::DomainError(format!("log of non-positive value {c}")));
        }
        match c {
            Scalar::Float(x) => {
                let x = *x;
                let out = (0..count).map(|k| match self {
                    Prim::Exp => x.exp(),
                    Prim::Sin => [x.sin(), x.cos(), -x.sin(), -x.cos()][k % 4],
                    Prim::Cos => [x.cos(), -x.sin(), -x.cos(), x.sin()][k % 4],
                    Prim::Log if k == 0 => x.ln(),
                    // (-1)^(k+1) (k-1)! / x^k
                    Prim::Log => {
                        let fact: f64 = (1..k).map(|j| j as f64).product();
                        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                        sign * fact / x.powi(k as i32)
                    }
                });
                Ok(out.map(Scalar::Float).collect())
            }
            Scalar::Exact(r) => {
                let inexact = || Error::InexactPrimitive(format!("{}({r})", self.name()));
                let cycle = |vals: [i64; 4]| -> Vec<Scalar> {
                    (0..count).map(|k| Scalar::int(vals[k % 4])).collect()
                };
                match self {
                    Prim::Exp if r.is_zero() => Ok(vec![Scalar::int(1); count]),
                    Prim::Sin if r.is_zero() => Ok(cycle([0, 1, 0, -1])),
                    Prim::Cos if r.is_zero() => Ok(cycle([1, 0, -1, 0])),
                    Prim::Log => {
                        if !r.is_one() {
                            return Err(inexact());
                        }
                        // at c = 1: (-1)^(k+1) (k-1)!
                        let mut out = vec![Scalar::int(0)];
                        let mut fact = Rational::one();
                        for k in 1..count {
                            if k > 1 {
                                fact = &fact * &Rational::from((k - 1) as i64);
                            }
                            let term = fact.clone();
                            out.push(Scalar::Exact(if k % 2 == 1 { term } else { -term }));
                        }
                        Ok(out)
                    }
                    _ => Err(inexact()),
                }
            }
        }
    }

    fn eval_scalar(self, x: &Scalar) -> Result<Scalar> {
        let mut v = self.derivatives(x, 1)?;
        Ok(v.remove(0))
    }
}

/// Expression tree over named variables.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Scalar),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    IntPow(Box<Expr>, u32),
    Prim(Prim, Box<Expr>),
}

// Smart constructors that fold the exact constants symbolic
// differentiation produces.
impl Expr {
    pub fn constant(c: impl Into<Scalar>) -> Expr {
        Expr::Const(c.into())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(Scalar::int(n))
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    fn const_value(&self) -> Option<&Scalar> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    fn is_const_zero(&self) -> bool {
        self.const_value().is_some_and(Scalar::is_zero)
    }

    fn is_const_one(&self) -> bool {
        self.const_value().is_some_and(Scalar::is_one)
    }

    fn both_consts(a: &Expr, b: &Expr) -> Option<(Scalar, Scalar)> {
        match (a.const_value(), b.const_value()) {
            (Some(x), Some(y)) if x.backend() == y.backend() => Some((x.clone(), y.clone())),
            _ => None,
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        if let Some((x, y)) = Expr::both_consts(&a, &b) {
            return Expr::Const(&x + &y);
        }
        if a.is_const_zero() {
            return b;
        }
        if b.is_const_zero() {
            return a;
        }
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        if let Some((x, y)) = Expr::both_consts(&a, &b) {
            return Expr::Const(&x - &y);
        }
        if b.is_const_zero() {
            return a;
        }
        if a.is_const_zero() {
            return Expr::neg(b);
        }
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        if let Some((x, y)) = Expr::both_consts(&a, &b) {
            return Expr::Const(&x * &y);
        }
        if a.is_const_zero() || b.is_const_zero() {
            return Expr::int(0);
        }
        if a.is_const_one() {
            return b;
        }
        if b.is_const_one() {
            return a;
        }
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if a.is_const_zero() && !b.is_const_zero() {
            return Expr::int(0);
        }
        if b.is_const_one() {
            return a;
        }
        Expr::Div(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn powi(a: Expr, k: u32) -> Expr {
        match k {
            0 => Expr::int(1),
            1 => a,
            _ if a.is_const_zero() => Expr::int(0),
            _ => Expr::IntPow(Box::new(a), k),
        }
    }

    pub fn prim(p: Prim, a: Expr) -> Expr {
        Expr::Prim(p, Box::new(a))
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::prim(Prim::Exp, a)
    }

    pub fn log(a: Expr) -> Expr {
        Expr::prim(Prim::Log, a)
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::prim(Prim::Sin, a)
    }

    pub fn cos(a: Expr) -> Expr {
        Expr::prim(Prim::Cos, a)
    }

    /// Variable names in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = Vec::new();
        self.collect_vars(&mut seen);
        seen
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a) | Expr::IntPow(a, _) | Expr::Prim(_, a) => a.collect_vars(out),
        }
    }

    /// Simultaneous substitution of variables.
    pub fn substitute(&self, map: &HashMap<String, Expr>) -> Expr {
        let rec = |e: &Expr| Box::new(e.substitute(map));
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Expr::Add(a, b) => Expr::Add(rec(a), rec(b)),
            Expr::Sub(a, b) => Expr::Sub(rec(a), rec(b)),
            Expr::Mul(a, b) => Expr::Mul(rec(a), rec(b)),
            Expr::Div(a, b) => Expr::Div(rec(a), rec(b)),
            Expr::Neg(a) => Expr::Neg(rec(a)),
            Expr::IntPow(a, k) => Expr::IntPow(rec(a), *k),
            Expr::Prim(p, a) => Expr::Prim(*p, rec(a)),
        }
    }

    /// Whether the tree uses ring operations and integer powers only.
    pub fn is_polynomial(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.is_polynomial() && b.is_polynomial()
            }
            Expr::Neg(a) | Expr::IntPow(a, _) => a.is_polynomial(),
            Expr::Div(..) | Expr::Prim(..) => false,
        }
    }

    /// Symbolic partial derivative (no declaration check).
    pub fn derivative(&self, var: &str) -> Expr {
        match self {
            Expr::Const(_) => Expr::int(0),
            Expr::Var(v) => Expr::int(if v == var { 1 } else { 0 }),
            Expr::Add(a, b) => Expr::add(a.derivative(var), b.derivative(var)),
            Expr::Sub(a, b) => Expr::sub(a.derivative(var), b.derivative(var)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.derivative(var), (**b).clone()),
                Expr::mul((**a).clone(), b.derivative(var)),
            ),
            Expr::Div(a, b) => {
                let (da, db) = (a.derivative(var), b.derivative(var));
                if db.is_const_zero() {
                    return Expr::div(da, (**b).clone());
                }
                Expr::div(
                    Expr::sub(
                        Expr::mul(da, (**b).clone()),
                        Expr::mul((**a).clone(), db),
                    ),
                    Expr::powi((**b).clone(), 2),
                )
            }
            Expr::Neg(a) => Expr::neg(a.derivative(var)),
            Expr::IntPow(a, k) => {
                if *k == 0 {
                    return Expr::int(0);
                }
                Expr::mul(
                    Expr::mul(Expr::int(*k as i64), Expr::powi((**a).clone(), k - 1)),
                    a.derivative(var),
                )
            }
            Expr::Prim(p, a) => {
                let da = a.derivative(var);
                if da.is_const_zero() {
                    return Expr::int(0);
                }
                let inner = (**a).clone();
                match p {
                    Prim::Exp => Expr::mul(Expr::exp(inner), da),
                    Prim::Log => Expr::div(da, inner),
                    Prim::Sin => Expr::mul(Expr::cos(inner), da),
                    Prim::Cos => Expr::neg(Expr::mul(Expr::sin(inner), da)),
                }
            }
        }
    }

    /// Evaluation over any value domain, with variables bound positionally.
    fn eval_in<V: EvalDomain>(&self, vars: &[String], values: &[V], backend: Backend) -> Result<V> {
        let rec = |e: &Expr| e.eval_in(vars, values, backend);
        match self {
            Expr::Const(c) => V::constant(&c.to_backend(backend)?),
            Expr::Var(name) => {
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::UndeclaredVariable(name.clone()))?;
                Ok(values[idx].clone())
            }
            Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
            Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
            Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
            Expr::Div(a, b) => rec(a)?.div(&rec(b)?),
            Expr::Neg(a) => Ok(rec(a)?.neg()),
            Expr::IntPow(a, k) => {
                let base = rec(a)?;
                let mut acc = V::constant(&Scalar::one(backend))?;
                for _ in 0..*k {
                    acc = acc.mul(&base)?;
                }
                Ok(acc)
            }
            Expr::Prim(p, a) => rec(a)?.prim(*p),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if c.is_negative() || matches!(c, Scalar::Exact(r) if !r.is_integer()) {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/({b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::IntPow(a, k) => write!(f, "({a})^{k}"),
            Expr::Prim(p, a) => write!(f, "{}({a})", p.name()),
        }
    }
}

/// Values expressions can be evaluated over.
trait EvalDomain: Clone + Sized {
    fn constant(c: &Scalar) -> Result<Self>;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn div(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn prim(&self, p: Prim) -> Result<Self>;
}

fn same_backend(a: &Scalar, b: &Scalar) -> Result<()> {
    if a.backend() == b.backend() {
        Ok(())
    } else {
        Err(Error::BackendMismatch)
    }
}

impl EvalDomain for Scalar {
    fn constant(c: &Scalar) -> Result<Self> {
        Ok(c.clone())
    }
    fn add(&self, other: &Self) -> Result<Self> {
        same_backend(self, other)?;
        Ok(self + other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        same_backend(self, other)?;
        Ok(self - other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        same_backend(self, other)?;
        Ok(self * other)
    }
    fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DomainError(format!("division of {self} by zero")));
        }
        self.checked_div(other)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn prim(&self, p: Prim) -> Result<Self> {
        p.eval_scalar(self)
    }
}

impl EvalDomain for FermatReal {
    fn constant(c: &Scalar) -> Result<Self> {
        Ok(FermatReal::standard(c.clone()))
    }
    fn add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        self.checked_sub(other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
    }
    fn div(&self, other: &Self) -> Result<Self> {
        self.checked_div(other)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn prim(&self, p: Prim) -> Result<Self> {
        prim_extend(p, self)
    }
}

/// Fermat extension of a primitive: its Taylor series at the standard part,
/// truncated at the nilpotency index of the argument.
pub fn prim_extend(p: Prim, x: &FermatReal) -> Result<FermatReal> {
    let order = x.nilpotency_index() as usize;
    let coeffs = p.taylor_coefficients(x.std(), order)?;
    let delta = x.infinitesimal_part();
    let backend = x.backend();
    let mut sum = FermatReal::zero(backend);
    let mut power = FermatReal::one(backend);
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            power = &power * &delta;
        }
        sum = &sum + &power.scale(c)?;
    }
    Ok(sum)
}

/// A smooth real-valued expression with its declared variable list.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothExpr {
    vars: Vec<String>,
    body: Expr,
}

impl SmoothExpr {
    pub fn new(vars: Vec<String>, body: Expr) -> Result<Self> {
        if let Some(v) = body.variables().into_iter().find(|v| !vars.contains(v)) {
            return Err(Error::UndeclaredVariable(v));
        }
        Ok(SmoothExpr { vars, body })
    }

    /// Declares the variables in order of first appearance.
    pub fn from_body(body: Expr) -> Self {
        SmoothExpr {
            vars: body.variables(),
            body,
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn body(&self) -> &Expr {
        &self.body
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn differentiate(&self, var: &str) -> Result<SmoothExpr> {
        if !self.vars.iter().any(|v| v == var) {
            return Err(Error::UndeclaredVariable(var.to_string()));
        }
        Ok(SmoothExpr {
            vars: self.vars.clone(),
            body: self.body.derivative(var),
        })
    }

    fn check_arity(&self, found: usize) -> Result<()> {
        if found != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                found,
            });
        }
        Ok(())
    }

    pub fn eval_real(&self, point: &[Scalar]) -> Result<Scalar> {
        self.check_arity(point.len())?;
        let backend = common_backend(point.iter().map(Scalar::backend))?;
        self.body.eval_in(&self.vars, point, backend)
    }

    /// `•f(x)` by evaluating the tree over Fermat arithmetic.
    pub fn fermat_extend(&self, x: &FermatPoint) -> Result<FermatReal> {
        self.check_arity(x.dim())?;
        let backend = x.backend()?.unwrap_or(Backend::Exact);
        self.body.eval_in(&self.vars, x.coords(), backend)
    }

    /// `•f(x)` as the multivariate Taylor sum
    /// `sum_{|i|<=m} d^i f(°x) (dx)^i / i!`, where `(dx_j)^(m+1) = 0` for
    /// every coordinate.
    pub fn fermat_extend_taylor(&self, x: &FermatPoint) -> Result<FermatReal> {
        self.check_arity(x.dim())?;
        let backend = x.backend()?.unwrap_or(Backend::Exact);
        let n = self.vars.len();
        let base = x.standard_parts();
        let deltas: Vec<FermatReal> = x.coords().iter().map(FermatReal::infinitesimal_part).collect();
        let m = x
            .coords()
            .iter()
            .map(|c| c.nilpotency_index() - 1)
            .max()
            .unwrap_or(0);

        let mut derivs: HashMap<Vec<u32>, Expr> = HashMap::new();
        derivs.insert(vec![0; n], self.body.clone());
        let mut sum = FermatReal::zero(backend);
        for index in multi_indices(n, m) {
            let partial = derivative_at(&mut derivs, &self.vars, &index);
            let coeff = partial.eval_in(&self.vars, &base, backend)?;
            if coeff.is_zero() {
                continue;
            }
            let mut factorial = Scalar::one(backend);
            let mut monomial = FermatReal::one(backend);
            for (j, &k) in index.iter().enumerate() {
                for step in 1..=k {
                    factorial = factorial.scale_int(step as i64);
                }
                monomial = &monomial * &deltas[j].pow(k);
            }
            sum = &sum + &monomial.scale(&coeff.checked_div(&factorial)?)?;
        }
        Ok(sum)
    }
}

fn common_backend(mut it: impl Iterator<Item = Backend>) -> Result<Backend> {
    let first = match it.next() {
        Some(b) => b,
        None => return Ok(Backend::Exact),
    };
    if it.all(|b| b == first) {
        Ok(first)
    } else {
        Err(Error::BackendMismatch)
    }
}

/// All multi-indices in `n` variables with total degree at most `m`,
/// grouped by increasing degree.
fn multi_indices(n: usize, m: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; n]];
    let mut frontier: BTreeSet<Vec<u32>> = BTreeSet::new();
    frontier.insert(vec![0; n]);
    for _ in 0..m {
        let mut next = BTreeSet::new();
        for idx in &frontier {
            for j in 0..n {
                let mut bumped = idx.clone();
                bumped[j] += 1;
                next.insert(bumped);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn derivative_at<'a>(
    memo: &'a mut HashMap<Vec<u32>, Expr>,
    vars: &[String],
    index: &[u32],
) -> &'a Expr {
    if !memo.contains_key(index) {
        let j = index.iter().position(|&k| k > 0).expect("nonzero index");
        let mut lower = index.to_vec();
        lower[j] -= 1;
        let below = derivative_at(memo, vars, &lower).derivative(&vars[j]);
        memo.insert(index.to_vec(), below);
    }
    &memo[index]
}

/// `x ↦ •α(p, x)`: a smooth body evaluated with the parameter slots fixed to
/// a Fermat point.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiStandardMap {
    param_vars: Vec<String>,
    input_vars: Vec<String>,
    body: Vec<Expr>,
    param_point: FermatPoint,
    domain: Option<OpenSetDesc>,
}

impl QuasiStandardMap {
    pub fn new(
        param_vars: Vec<String>,
        input_vars: Vec<String>,
        body: Vec<Expr>,
        param_point: FermatPoint,
    ) -> Result<Self> {
        if param_point.dim() != param_vars.len() {
            return Err(Error::ArityMismatch {
                expected: param_vars.len(),
                found: param_point.dim(),
            });
        }
        param_point.backend()?;
        for e in &body {
            if let Some(v) = e
                .variables()
                .into_iter()
                .find(|v| !param_vars.contains(v) && !input_vars.contains(v))
            {
                return Err(Error::UndeclaredVariable(v));
            }
        }
        Ok(QuasiStandardMap {
            param_vars,
            input_vars,
            body,
            param_point,
            domain: None,
        })
    }

    /// The Fermat extension `•g` of a parameter-free smooth map.
    pub fn standard(input_vars: Vec<String>, body: Vec<Expr>) -> Result<Self> {
        QuasiStandardMap::new(Vec::new(), input_vars, body, FermatPoint::default())
    }

    /// Restricts the map to the Fermat open `•U`.
    pub fn with_domain(mut self, domain: OpenSetDesc) -> Result<Self> {
        if domain.dim() != self.input_vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.input_vars.len(),
                found: domain.dim(),
            });
        }
        self.domain = Some(domain);
        Ok(self)
    }

    pub fn param_vars(&self) -> &[String] {
        &self.param_vars
    }

    pub fn input_vars(&self) -> &[String] {
        &self.input_vars
    }

    pub fn body(&self) -> &[Expr] {
        &self.body
    }

    pub fn param_point(&self) -> &FermatPoint {
        &self.param_point
    }

    pub fn domain(&self) -> Option<&OpenSetDesc> {
        self.domain.as_ref()
    }

    pub fn arity(&self) -> usize {
        self.input_vars.len()
    }

    pub fn codim(&self) -> usize {
        self.body.len()
    }

    fn all_vars(&self) -> Vec<String> {
        self.param_vars
            .iter()
            .chain(self.input_vars.iter())
            .cloned()
            .collect()
    }

    /// Component `i` as a smooth expression in `(params, inputs)`.
    pub fn component(&self, i: usize) -> SmoothExpr {
        SmoothExpr {
            vars: self.all_vars(),
            body: self.body[i].clone(),
        }
    }

    pub fn apply(&self, x: &FermatPoint) -> Result<FermatPoint> {
        if x.dim() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: x.dim(),
            });
        }
        if let Some(domain) = &self.domain {
            if !domain.fermat_contains(x)? {
                return Err(Error::DomainError(format!(
                    "standard part of the input lies outside {domain}"
                )));
            }
        }
        let full = self.param_point.concat(x);
        let backend = full.backend()?.unwrap_or(Backend::Exact);
        let vars = self.all_vars();
        let coords = self
            .body
            .iter()
            .map(|e| e.eval_in(&vars, full.coords(), backend))
            .collect::<Result<Vec<_>>>()?;
        Ok(FermatPoint::new(coords))
    }

    /// `g ∘ f`: the body of `g` with its inputs replaced by `f`'s body; the
    /// parameter point is `(g.p, f.p)`.
    pub fn compose(g: &QuasiStandardMap, f: &QuasiStandardMap) -> Result<QuasiStandardMap> {
        if f.codim() != g.arity() {
            return Err(Error::ArityMismatch {
                expected: g.arity(),
                found: f.codim(),
            });
        }
        let fresh = |i: usize| format!("p#{i}");
        let offset = g.param_vars.len();
        let f_rename: HashMap<String, Expr> = f
            .param_vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), Expr::var(fresh(offset + i))))
            .collect();
        let f_body: Vec<Expr> = f.body.iter().map(|e| e.substitute(&f_rename)).collect();
        let mut g_subst: HashMap<String, Expr> = g
            .param_vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), Expr::var(fresh(i))))
            .collect();
        for (v, e) in g.input_vars.iter().zip(f_body) {
            g_subst.insert(v.clone(), e);
        }
        let body = g.body.iter().map(|e| e.substitute(&g_subst)).collect();
        let param_vars = (0..offset + f.param_vars.len()).map(fresh).collect();
        let composite = QuasiStandardMap::new(
            param_vars,
            f.input_vars.clone(),
            body,
            g.param_point.concat(&f.param_point),
        )?;
        // FIXME: the composite only inherits f's domain; g's domain would need
        // a preimage under f's body, which is unavailable for nonlinear bodies.
        Ok(QuasiStandardMap {
            domain: f.domain.clone(),
            ..composite
        })
    }

    /// The deleting functor on maps: `u ↦ °(f(u))`, realized by replacing the
    /// parameter point with its standard part.
    pub fn delete(&self) -> QuasiStandardMap {
        QuasiStandardMap {
            param_point: self.param_point.standard_point(),
            ..self.clone()
        }
    }

    /// Evaluates the deleted map on a standard point.
    pub fn apply_standard(&self, u: &[Scalar]) -> Result<Vec<Scalar>> {
        let image = self.delete().apply(&FermatPoint::standard(u))?;
        Ok(image.standard_parts())
    }

    pub fn is_standard_valued(&self, samples: &[FermatPoint]) -> Result<bool> {
        for s in samples {
            if !self.apply(s)?.is_standard() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
