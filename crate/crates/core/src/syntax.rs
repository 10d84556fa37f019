//! The shared infix grammar used by the CLI for Fermat literals, smooth
//! function bodies and space coordinates.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' exponent)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `t` is the Fermat literal and accepts positive rational exponents
//! (`t^(1/2)`); any other base takes a non-negative integer exponent.
//! `theta` is only meaningful for lattice-quotient coordinates.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ring::FermatReal;
use crate::scalar::{Backend, Rational, Scalar};
use crate::smooth::{prim_extend, Expr, Prim};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let mantissa_end = i;
                let mut exponent = 0i64;
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    let digits_start = j;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j > digits_start {
                        exponent = text[i + 1..j]
                            .parse()
                            .map_err(|_| Error::parse(i, "invalid number exponent"))?;
                        i = j;
                    }
                }
                let mantissa: Rational = text[start..mantissa_end]
                    .parse()
                    .map_err(|_| Error::parse(start, format!("invalid number `{}`", &text[start..i])))?;
                let scale = Rational::from_integer(num_traits::pow(
                    BigInt::from(10),
                    exponent.unsigned_abs() as usize,
                ));
                let value = if exponent >= 0 {
                    &mantissa * &scale
                } else {
                    mantissa.checked_div(&scale)?
                };
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::parse(start, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
enum Ast {
    Num(Rational),
    Ident(String),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, Rational),
    Call(String, Box<Node>),
}

#[derive(Clone, Debug, PartialEq)]
struct Node {
    ast: Ast,
    pos: usize,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            len: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            _ => Err(Error::parse(pos, format!("expected {what}"))),
        }
    }

    fn parse_all(mut self) -> Result<Node> {
        if self.toks.is_empty() {
            return Err(Error::parse(0, "empty expression"));
        }
        let node = self.expr()?;
        if self.at < self.toks.len() {
            return Err(Error::parse(self.pos(), "unexpected trailing input"));
        }
        Ok(node)
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(op) = match self.peek() {
            Some(Tok::Plus) => Some(BinOp::Add),
            Some(Tok::Minus) => Some(BinOp::Sub),
            _ => None,
        } {
            let pos = self.pos();
            self.bump();
            let rhs = self.term()?;
            lhs = Node {
                ast: Ast::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(op) = match self.peek() {
            Some(Tok::Star) => Some(BinOp::Mul),
            Some(Tok::Slash) => Some(BinOp::Div),
            _ => None,
        } {
            let pos = self.pos();
            self.bump();
            let rhs = self.unary()?;
            lhs = Node {
                ast: Ast::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                let inner = self.unary()?;
                Ok(Node {
                    ast: Ast::Neg(Box::new(inner)),
                    pos,
                })
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        let exp = self.exponent()?;
        Ok(Node {
            ast: Ast::Pow(Box::new(base), exp),
            pos,
        })
    }

    /// `n`, `(n)`, `(p/q)` or `(-p/q)`.
    fn exponent(&mut self) -> Result<Rational> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(n),
            Some(Tok::LParen) => {
                let negative = if self.peek() == Some(&Tok::Minus) {
                    self.bump();
                    true
                } else {
                    false
                };
                let p = match self.bump() {
                    Some(Tok::Num(n)) => n,
                    _ => return Err(Error::parse(pos, "expected a rational exponent")),
                };
                let value = if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let qpos = self.pos();
                    match self.bump() {
                        Some(Tok::Num(q)) => p
                            .checked_div(&q)
                            .map_err(|_| Error::parse(qpos, "zero denominator in exponent"))?,
                        _ => return Err(Error::parse(qpos, "expected exponent denominator")),
                    }
                } else {
                    p
                };
                self.expect(Tok::RParen, "`)` after exponent")?;
                Ok(if negative { -value } else { value })
            }
            _ => Err(Error::parse(pos, "expected an exponent")),
        }
    }

    fn atom(&mut self) -> Result<Node> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Node {
                ast: Ast::Num(n),
                pos,
            }),
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)` after function argument")?;
                    Ok(Node {
                        ast: Ast::Call(name, Box::new(arg)),
                        pos,
                    })
                } else {
                    Ok(Node {
                        ast: Ast::Ident(name),
                        pos,
                    })
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(Error::parse(pos, "expected a number, identifier or `(`")),
        }
    }
}

fn integer_exponent(exp: &Rational, pos: usize) -> Result<u32> {
    if !exp.is_integer() || exp.is_negative() {
        return Err(Error::parse(
            pos,
            format!("exponent {exp} must be a non-negative integer here; only t takes rational exponents"),
        ));
    }
    exp.numer()
        .to_u32()
        .ok_or_else(|| Error::parse(pos, "exponent too large"))
}

fn prim_named(name: &str, pos: usize) -> Result<Prim> {
    Prim::from_name(name).ok_or_else(|| Error::parse(pos, format!("unknown function `{name}`")))
}

fn lift_scalar(r: &Rational, backend: Backend) -> Scalar {
    Scalar::Exact(r.clone())
        .to_backend(backend)
        .expect("exact to any backend")
}

/// `value + theta_coeff * theta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaValue {
    pub value: FermatReal,
    pub theta: Rational,
}

struct Lowering {
    backend: Backend,
    allow_theta: bool,
}

impl Lowering {
    fn fermat(&self, node: &Node) -> Result<ThetaValue> {
        let plain = |value: FermatReal| ThetaValue {
            value,
            theta: Rational::zero(),
        };
        match &node.ast {
            Ast::Num(r) => Ok(plain(FermatReal::standard(lift_scalar(r, self.backend)))),
            Ast::Ident(name) => match name.as_str() {
                "t" => Ok(plain(FermatReal::monomial(
                    Scalar::one(self.backend),
                    Rational::one(),
                )?)),
                "theta" if self.allow_theta => Ok(ThetaValue {
                    value: FermatReal::zero(self.backend),
                    theta: Rational::one(),
                }),
                "theta" => Err(Error::parse(node.pos, "theta is only allowed in space coordinates")),
                other => Err(Error::parse(node.pos, format!("unknown identifier `{other}`"))),
            },
            Ast::Neg(inner) => {
                let v = self.fermat(inner)?;
                Ok(ThetaValue {
                    value: -v.value,
                    theta: -v.theta,
                })
            }
            Ast::Bin(op, a, b) => {
                let (x, y) = (self.fermat(a)?, self.fermat(b)?);
                match op {
                    BinOp::Add => Ok(ThetaValue {
                        value: x.value.checked_add(&y.value)?,
                        theta: x.theta + y.theta,
                    }),
                    BinOp::Sub => Ok(ThetaValue {
                        value: x.value.checked_sub(&y.value)?,
                        theta: x.theta - y.theta,
                    }),
                    BinOp::Mul => {
                        if !x.theta.is_zero() && !y.theta.is_zero() {
                            return Err(Error::parse(node.pos, "theta may only appear linearly"));
                        }
                        let theta = if x.theta.is_zero() {
                            scale_theta(&y.theta, &x.value, node.pos)?
                        } else {
                            scale_theta(&x.theta, &y.value, node.pos)?
                        };
                        Ok(ThetaValue {
                            value: x.value.checked_mul(&y.value)?,
                            theta,
                        })
                    }
                    BinOp::Div => {
                        if !y.theta.is_zero() {
                            return Err(Error::parse(node.pos, "cannot divide by theta"));
                        }
                        let theta = if x.theta.is_zero() {
                            Rational::zero()
                        } else {
                            let inv = y.value.inv()?;
                            scale_theta(&x.theta, &inv, node.pos)?
                        };
                        Ok(ThetaValue {
                            value: x.value.checked_div(&y.value)?,
                            theta,
                        })
                    }
                }
            }
            Ast::Pow(base, exp) => {
                if let Ast::Ident(name) = &base.ast {
                    if name == "t" {
                        if !exp.is_positive() {
                            return Err(Error::parse(
                                node.pos,
                                format!("exponent of t must be positive, got {exp}"),
                            ));
                        }
                        return Ok(plain(FermatReal::monomial(
                            Scalar::one(self.backend),
                            exp.clone(),
                        )?));
                    }
                }
                let k = integer_exponent(exp, node.pos)?;
                let b = self.fermat(base)?;
                if !b.theta.is_zero() && k != 1 {
                    return Err(Error::parse(node.pos, "theta may only appear linearly"));
                }
                Ok(ThetaValue {
                    value: b.value.pow(k),
                    theta: if k == 1 { b.theta } else { Rational::zero() },
                })
            }
            Ast::Call(name, arg) => {
                let p = prim_named(name, node.pos)?;
                let v = self.fermat(arg)?;
                if !v.theta.is_zero() {
                    return Err(Error::parse(node.pos, "functions cannot take theta arguments"));
                }
                Ok(plain(prim_extend(p, &v.value)?))
            }
        }
    }

    fn expr(&self, node: &Node) -> Result<Expr> {
        match &node.ast {
            Ast::Num(r) => Ok(Expr::Const(lift_scalar(r, self.backend))),
            Ast::Ident(name) if name == "t" || name == "theta" => Err(Error::parse(
                node.pos,
                format!("`{name}` is reserved and cannot be a function variable"),
            )),
            Ast::Ident(name) => Ok(Expr::Var(name.clone())),
            Ast::Neg(inner) => Ok(Expr::Neg(Box::new(self.expr(inner)?))),
            Ast::Bin(op, a, b) => {
                let (a, b) = (Box::new(self.expr(a)?), Box::new(self.expr(b)?));
                Ok(match op {
                    BinOp::Add => Expr::Add(a, b),
                    BinOp::Sub => Expr::Sub(a, b),
                    BinOp::Mul => Expr::Mul(a, b),
                    BinOp::Div => Expr::Div(a, b),
                })
            }
            Ast::Pow(base, exp) => {
                let k = integer_exponent(exp, node.pos)?;
                Ok(Expr::IntPow(Box::new(self.expr(base)?), k))
            }
            Ast::Call(name, arg) => {
                let p = prim_named(name, node.pos)?;
                Ok(Expr::Prim(p, Box::new(self.expr(arg)?)))
            }
        }
    }
}

/// The theta coefficient of `theta_coeff * factor`; `factor` must be an
/// exact standard real.
fn scale_theta(theta_coeff: &Rational, factor: &FermatReal, pos: usize) -> Result<Rational> {
    if theta_coeff.is_zero() {
        return Ok(Rational::zero());
    }
    match (factor.is_standard(), factor.std()) {
        (true, Scalar::Exact(r)) => Ok(theta_coeff * r),
        _ => Err(Error::parse(pos, "theta may only be scaled by exact rationals")),
    }
}

/// Parses and normalizes a Fermat real in the exact backend.
pub fn parse_fermat_expr(text: &str) -> Result<FermatReal> {
    parse_fermat_expr_in(text, Backend::Exact)
}

pub fn parse_fermat_expr_in(text: &str, backend: Backend) -> Result<FermatReal> {
    let node = Parser::new(text)?.parse_all()?;
    let lowering = Lowering {
        backend,
        allow_theta: false,
    };
    Ok(lowering.fermat(&node)?.value)
}

/// Parses a coordinate that may contain `theta` linearly.
pub fn parse_theta_expr(text: &str, backend: Backend) -> Result<ThetaValue> {
    let node = Parser::new(text)?.parse_all()?;
    let lowering = Lowering {
        backend,
        allow_theta: true,
    };
    lowering.fermat(&node)
}

/// Parses a smooth function body; variables are any identifiers other than
/// `t` and `theta`.
pub fn parse_smooth_expr(text: &str, backend: Backend) -> Result<Expr> {
    let node = Parser::new(text)?.parse_all()?;
    Lowering {
        backend,
        allow_theta: false,
    }
    .expr(&node)
}

/// Parses an exact rational written in the grammar (e.g. `-3/4`).
pub fn parse_rational_expr(text: &str) -> Result<Rational> {
    let x = parse_fermat_expr(text)?;
    match (x.is_standard(), x.std()) {
        (true, Scalar::Exact(r)) => Ok(r.clone()),
        _ => Err(Error::parse(0, format!("`{text}` is not a rational number"))),
    }
}
