//! Numeric ground truth: evaluate representatives at small `t` and test
//! `x(t) - y(t) = o(t)` on a finite schedule.
//!
//! The oracle is a falsifier, not a prover. It only ever uses `f64`
//! evaluation of the canonical representatives, never the ring arithmetic.

use crate::error::{Error, Result};
use crate::ring::{FermatPoint, FermatReal, Term};
use crate::scalar::Scalar;
use crate::smooth::{Expr, Prim, SmoothExpr};

/// Rounding slack per evaluated magnitude, in units of machine epsilon.
const ROUNDING_ULPS: f64 = 64.0;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSchedule {
    t_values: Vec<f64>,
    pub ratio_threshold: f64,
    pub monotonic_decrease_required: bool,
}

impl Default for OracleSchedule {
    fn default() -> Self {
        OracleSchedule {
            t_values: vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            ratio_threshold: 1e-3,
            monotonic_decrease_required: true,
        }
    }
}

impl OracleSchedule {
    pub fn new(t_values: Vec<f64>, ratio_threshold: f64, monotonic: bool) -> Result<Self> {
        if t_values.is_empty() {
            return Err(Error::DomainError("empty oracle schedule".into()));
        }
        if let Some(t) = t_values.iter().find(|t| !(**t > 0.0)) {
            return Err(Error::NonPositiveT(*t));
        }
        if t_values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::DomainError(
                "oracle t values must be strictly decreasing".into(),
            ));
        }
        if !(ratio_threshold > 0.0) {
            return Err(Error::DomainError("ratio threshold must be positive".into()));
        }
        Ok(OracleSchedule {
            t_values,
            ratio_threshold,
            monotonic_decrease_required: monotonic,
        })
    }

    /// Parses a comma separated list such as `1e-2,1e-3,1e-4`.
    pub fn parse_t_values(text: &str) -> Result<Vec<f64>> {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::parse(0, format!("invalid t value `{s}`")))
            })
            .collect()
    }

    pub fn t_values(&self) -> &[f64] {
        &self.t_values
    }
}

/// One row of the ratio table.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioSample {
    pub t: f64,
    pub ratio: f64,
    /// Rounding bound on `ratio`.
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub samples: Vec<RatioSample>,
    pub o_equal: bool,
}

/// `x(t)` on the canonical representative.
pub fn eval_at(x: &FermatReal, t: f64) -> Result<f64> {
    Ok(eval_with_magnitude(x.std(), x.terms(), t)?.0)
}

/// Evaluates `std + sum c t^e` for an arbitrary (not necessarily
/// normalized) term list.
pub fn eval_raw(std: &Scalar, terms: &[Term], t: f64) -> Result<f64> {
    Ok(eval_with_magnitude(std, terms, t)?.0)
}

/// Value together with the sum of absolute values of its summands.
fn eval_with_magnitude(std: &Scalar, terms: &[Term], t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveT(t));
    }
    let s = std.to_f64();
    let mut value = s;
    let mut magnitude = s.abs();
    for term in terms {
        let v = term.coeff.to_f64() * t.powf(term.exp.to_f64());
        value += v;
        magnitude += v.abs();
    }
    Ok((value, magnitude))
}

fn judge(samples: Vec<RatioSample>, sched: &OracleSchedule) -> OracleReport {
    let monotone = !sched.monotonic_decrease_required
        || samples
            .windows(2)
            .all(|w| w[1].ratio <= w[0].ratio + w[1].slack + w[0].slack);
    let last = samples.last().expect("nonempty schedule");
    let o_equal = monotone && last.ratio < sched.ratio_threshold;
    OracleReport { samples, o_equal }
}

fn ratio_table(
    sched: &OracleSchedule,
    mut eval: impl FnMut(f64) -> Result<((f64, f64), (f64, f64))>,
) -> Result<OracleReport> {
    let samples = sched
        .t_values
        .iter()
        .map(|&t| {
            let ((a, ma), (b, mb)) = eval(t)?;
            Ok(RatioSample {
                t,
                ratio: (a - b).abs() / t,
                slack: ROUNDING_ULPS * f64::EPSILON * (ma + mb) / t,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(judge(samples, sched))
}

/// Ratio table of `|x(t) - y(t)| / t`.
pub fn o_equal_report(x: &FermatReal, y: &FermatReal, sched: &OracleSchedule) -> Result<OracleReport> {
    raw_o_equal_report((x.std(), x.terms()), (y.std(), y.terms()), sched)
}

/// Same as [`o_equal_report`] on raw representatives `std + sum c t^e`.
pub fn raw_o_equal_report(
    x: (&Scalar, &[Term]),
    y: (&Scalar, &[Term]),
    sched: &OracleSchedule,
) -> Result<OracleReport> {
    ratio_table(sched, |t| {
        Ok((
            eval_with_magnitude(x.0, x.1, t)?,
            eval_with_magnitude(y.0, y.1, t)?,
        ))
    })
}

pub fn o_equal(x: &FermatReal, y: &FermatReal, sched: &OracleSchedule) -> bool {
    o_equal_report(x, y, sched).is_ok_and(|r| r.o_equal)
}

/// Checks `•f(x) = f ∘ x` numerically: `|f(x(t)) - (•f(x))(t)| / t`.
pub fn fn_extension_report(
    f: &SmoothExpr,
    x: &FermatPoint,
    candidate: &FermatReal,
    sched: &OracleSchedule,
) -> Result<OracleReport> {
    let base: Vec<Scalar> = x
        .standard_parts()
        .iter()
        .map(|s| Scalar::Float(s.to_f64()))
        .collect();
    f.eval_real(&base)?;
    ratio_table(sched, |t| {
        let path = x
            .coords()
            .iter()
            .map(|c| eval_with_magnitude(c.std(), c.terms(), t))
            .collect::<Result<Vec<_>>>()?;
        let args: Vec<Scalar> = path.iter().map(|(v, _)| Scalar::Float(*v)).collect();
        let direct = f.eval_real(&args)?.to_f64();
        let inputs: Vec<(f64, f64)> = path.iter().map(|&(v, m)| (v, m.max(v.abs()))).collect();
        let err = running_error(f.body(), f.vars(), &inputs);
        let ext = eval_with_magnitude(candidate.std(), candidate.terms(), t)?;
        Ok(((direct, err.max(direct.abs())), ext))
    })
}

/// First-order bound on the rounding error of evaluating `e` in doubles,
/// in units of machine epsilon. `inputs` carries each variable's value and
/// its own error bound.
fn running_error(e: &Expr, vars: &[String], inputs: &[(f64, f64)]) -> f64 {
    fn go(e: &Expr, vars: &[String], inputs: &[(f64, f64)]) -> (f64, f64) {
        let (v, err) = match e {
            Expr::Const(c) => {
                let v = c.to_f64();
                return (v, v.abs());
            }
            Expr::Var(name) => {
                return vars.iter().position(|n| n == name).map_or((0.0, 0.0), |i| inputs[i]);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let ((x, ex), (y, ey)) = (go(a, vars, inputs), go(b, vars, inputs));
                (if matches!(e, Expr::Add(..)) { x + y } else { x - y }, ex + ey)
            }
            Expr::Mul(a, b) => {
                let ((x, ex), (y, ey)) = (go(a, vars, inputs), go(b, vars, inputs));
                (x * y, x.abs() * ey + y.abs() * ex)
            }
            Expr::Div(a, b) => {
                let ((x, ex), (y, ey)) = (go(a, vars, inputs), go(b, vars, inputs));
                let v = x / y;
                (v, (ex + v.abs() * ey) / y.abs())
            }
            Expr::Neg(a) => {
                let (x, ex) = go(a, vars, inputs);
                (-x, ex)
            }
            Expr::IntPow(a, k) => {
                let (x, ex) = go(a, vars, inputs);
                let k = *k as i32;
                let v = x.powi(k);
                (v, k as f64 * x.abs().powi(k - 1) * ex + (k - 1).max(0) as f64 * v.abs())
            }
            Expr::Prim(p, a) => {
                let (x, ex) = go(a, vars, inputs);
                match p {
                    Prim::Exp => (x.exp(), x.exp() * ex),
                    Prim::Log => (x.ln(), ex / x.abs()),
                    Prim::Sin => (x.sin(), x.cos().abs() * ex + x.abs()),
                    Prim::Cos => (x.cos(), x.sin().abs() * ex + x.abs()),
                }
            }
        };
        (v, err + v.abs())
    }
    go(e, vars, inputs).1
}

/// `fn_extension_report` against the library's own `•f(x)`.
pub fn fn_extension_check(f: &SmoothExpr, x: &FermatPoint, sched: &OracleSchedule) -> Result<bool> {
    let candidate = f.fermat_extend(x)?;
    Ok(fn_extension_report(f, x, &candidate, sched)?.o_equal)
}
