#![allow(dead_code)]

use fermat::oracle::eval_raw;
use fermat::{
    AffineMap, Bound, Expr, FermatPoint, FermatReal, Interval, OpenSetDesc, Rational,
    Scalar, SpacePresentation, Term, ThetaCombo,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p, d).unwrap()
}

pub fn tp(p: i64, d: i64) -> FermatReal {
    FermatReal::t_pow(q(p, d)).unwrap()
}

/// Seeded value generator shared by the property and acceptance suites.
pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs.choose(&mut self.rng).unwrap().clone()
    }

    /// `p/d` with `|p| <= 9`, `d <= 4`.
    pub fn rational(&mut self) -> Rational {
        q(self.rng.gen_range(-9..=9), self.rng.gen_range(1..=4))
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// Exponent in `(0, 1]` with denominator at most 6.
    pub fn exponent(&mut self) -> Rational {
        let d = self.rng.gen_range(1..=6);
        q(self.rng.gen_range(1..=d), d)
    }

    pub fn fermat_with(&mut self, std: Rational, max_terms: usize) -> FermatReal {
        let n = self.rng.gen_range(0..=max_terms);
        let terms: Vec<Term> = (0..n)
            .map(|_| Term::new(self.exponent(), Scalar::Exact(self.nonzero_rational())))
            .collect();
        FermatReal::normalize(Scalar::Exact(std), terms).unwrap()
    }

    pub fn fermat(&mut self) -> FermatReal {
        let std = if self.rng.gen_bool(0.25) {
            Rational::zero()
        } else {
            self.rational()
        };
        self.fermat_with(std, 3)
    }

    /// Nonzero infinitesimal.
    pub fn infinitesimal(&mut self) -> FermatReal {
        loop {
            let x = self.fermat_with(Rational::zero(), 3);
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn invertible(&mut self) -> FermatReal {
        let std = self.nonzero_rational();
        self.fermat_with(std, 3)
    }

    /// Raw representative: terms may repeat exponents, cancel, or exceed 1
    /// (those above 1 are at least 7/4 so the oracle sees them vanish).
    pub fn raw_terms(&mut self) -> Vec<Term> {
        let n = self.rng.gen_range(0..=4);
        (0..n)
            .map(|_| {
                let exp = if self.rng.gen_bool(0.25) {
                    q(self.rng.gen_range(7..=12), 4)
                } else {
                    self.exponent()
                };
                Term::new(exp, Scalar::Exact(self.rational()))
            })
            .collect()
    }

    /// `c + a t^(1/2)` with `|c| <= 1`, `|a| <= 1/16`. A single small
    /// monomial keeps the neglected terms of `f(x(t))` ordered by size across
    /// the default oracle schedule.
    pub fn oracle_point(&mut self) -> FermatReal {
        let a = q(self.rng.gen_range(-2..=2), 32);
        self.point_with(a, Rational::zero())
    }

    /// `c + a t^(1/2) + b t` with `|a|, |b| <= 1/2`.
    pub fn wide_point(&mut self) -> FermatReal {
        let a = q(self.rng.gen_range(-2..=2), 4);
        let b = q(self.rng.gen_range(-2..=2), 4);
        self.point_with(a, b)
    }

    fn point_with(&mut self, a: Rational, b: Rational) -> FermatReal {
        let c = q(self.rng.gen_range(-4..=4), 4);
        let terms = [Term::new(q(1, 2), Scalar::Exact(a)), Term::new(q(1, 1), Scalar::Exact(b))];
        FermatReal::normalize(Scalar::Exact(c), terms).unwrap()
    }

    /// Polynomial in the given variables with small integer constants.
    pub fn poly(&mut self, vars: &[&str], depth: u32) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return if self.coin() {
                Expr::var(self.pick(vars))
            } else {
                Expr::constant(Scalar::Exact(q(self.rng.gen_range(-3..=3), self.rng.gen_range(1..=2))))
            };
        }
        match self.rng.gen_range(0..5) {
            0 => Expr::add(self.poly(vars, depth - 1), self.poly(vars, depth - 1)),
            1 => Expr::sub(self.poly(vars, depth - 1), self.poly(vars, depth - 1)),
            2 | 3 => Expr::mul(self.poly(vars, depth - 1), self.poly(vars, depth - 1)),
            _ => Expr::powi(self.poly(vars, depth - 1), self.rng.gen_range(2..=3)),
        }
    }

    /// Smooth body mixing polynomials and primitives, defined everywhere.
    pub fn smooth(&mut self, vars: &[&str], depth: u32) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return self.poly(vars, 1);
        }
        match self.rng.gen_range(0..7) {
            0 => Expr::add(self.smooth(vars, depth - 1), self.smooth(vars, depth - 1)),
            1 => Expr::mul(self.smooth(vars, depth - 1), self.smooth(vars, depth - 1)),
            2 => {
                let inner = self.smooth(vars, depth - 1);
                Expr::exp(Expr::div(inner.clone(), Expr::add(Expr::int(2), Expr::powi(inner, 2))))
            }
            3 => Expr::sin(self.smooth(vars, depth - 1)),
            4 => Expr::cos(self.smooth(vars, depth - 1)),
            5 => {
                let inner = self.smooth(vars, depth - 1);
                Expr::log(Expr::add(Expr::int(1), Expr::powi(inner, 2)))
            }
            _ => {
                let inner = self.smooth(vars, depth - 1);
                Expr::div(self.smooth(vars, depth - 1), Expr::add(Expr::int(2), Expr::powi(inner, 2)))
            }
        }
    }

    pub fn bound(&mut self) -> Rational {
        q(self.rng.gen_range(-12..=12), self.rng.gen_range(1..=2))
    }

    pub fn interval(&mut self) -> Interval {
        loop {
            let lo = if self.rng.gen_bool(0.15) {
                Bound::NegInf
            } else {
                Bound::Finite(self.bound())
            };
            let hi = if self.rng.gen_bool(0.15) {
                Bound::PosInf
            } else {
                Bound::Finite(self.bound())
            };
            if let Some(i) = Interval::new(lo, hi) {
                return i;
            }
        }
    }

    pub fn open_set_1d(&mut self) -> OpenSetDesc {
        let n = self.rng.gen_range(0..=3);
        OpenSetDesc::from_intervals((0..n).map(|_| self.interval()).collect())
    }

    pub fn open_set(&mut self, dim: usize) -> OpenSetDesc {
        let n = self.rng.gen_range(0..=3);
        let boxes = (0..n)
            .map(|_| fermat::topology::OpenBox((0..dim).map(|_| self.interval()).collect()))
            .collect();
        OpenSetDesc::new(dim, boxes).unwrap()
    }

    /// Point whose standard part often lands on interval endpoints.
    pub fn point_near(&mut self, dim: usize) -> FermatPoint {
        FermatPoint::new(
            (0..dim)
                .map(|_| {
                    let std = if self.coin() { self.bound() } else { q(self.rng.gen_range(-50..=50), 8) };
                    self.fermat_with(std, 2)
                })
                .collect(),
        )
    }

    pub fn affine(&mut self, dim: usize) -> AffineMap {
        let scale = (0..dim)
            .map(|_| q(self.rng.gen_range(1..=3) * if self.coin() { 1 } else { -1 }, self.rng.gen_range(1..=2)))
            .collect();
        let shift = (0..dim).map(|_| self.rational()).collect();
        AffineMap::new(scale, shift).unwrap()
    }

    pub fn theta_combo(&mut self) -> ThetaCombo {
        ThetaCombo::new(self.rational(), self.rational())
    }

    pub fn small_int(&mut self) -> i64 {
        self.rng.gen_range(-5..=5)
    }
}

/// Raw terms of `x - y` with equal exponents merged in exact arithmetic and
/// zero coefficients dropped, lowest exponent first.
pub fn difference_terms(x: &FermatReal, y: &FermatReal) -> Vec<Term> {
    let mut merged: Vec<(Rational, Rational)> = Vec::new();
    let negated = y.terms().iter().map(|t| (t, -Rational::one()));
    for (t, sign) in x.terms().iter().map(|t| (t, Rational::one())).chain(negated) {
        let c = t.coeff.as_exact().unwrap() * &sign;
        match merged.iter_mut().find(|(e, _)| *e == t.exp) {
            Some(entry) => entry.1 = &entry.1 + &c,
            None => merged.push((t.exp.clone(), c)),
        }
    }
    merged.retain(|(_, c)| !c.is_zero());
    merged.sort_by(|a, b| a.0.to_f64().partial_cmp(&b.0.to_f64()).unwrap());
    merged.into_iter().map(|(e, c)| Term::new(e, Scalar::Exact(c))).collect()
}

/// Sign of `x - y` read off the representatives at tiny `t`, computed with
/// exact standard parts and float terms only.
pub fn oracle_sign(x: &FermatReal, y: &FermatReal) -> Ordering {
    let (sx, sy) = (x.std().as_exact().unwrap(), y.std().as_exact().unwrap());
    let d = sx - sy;
    if !d.is_zero() {
        return if d.is_positive() { Ordering::Greater } else { Ordering::Less };
    }
    let terms = difference_terms(x, y);
    let signs: Vec<Ordering> = [1e-100, 1e-200, 1e-300]
        .iter()
        .map(|&t| eval_raw(&Scalar::Exact(Rational::zero()), &terms, t).unwrap().partial_cmp(&0.0).unwrap())
        .collect();
    assert!(signs.windows(2).all(|w| w[0] == w[1]), "unstable oracle sign {signs:?} for {x} vs {y}");
    signs[0]
}

/// The presentations exercised by the space suites.
pub fn presentations() -> Vec<SpacePresentation> {
    [
        "torus(theta)",
        "circle",
        "wedge",
        "atlas-circle",
        "rquot",
        "qring(D:1)",
        "qring(I:2)",
        "qring(Dinf)",
        "dlim",
        "discrete(3)",
        "prod(torus(theta),wedge)",
        "prod(atlas-circle,qring(D:2))",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

/// A random point of a presentation; `standard` forces standard coordinates.
pub fn space_point(g: &mut Gen, space: &SpacePresentation, standard: bool) -> fermat::SpacePoint {
    use fermat::{SpaceCoord, SpacePoint};
    let value = |g: &mut Gen, std: Rational| {
        if standard {
            FermatReal::from_rational(std)
        } else {
            g.fermat_with(std, 2)
        }
    };
    match space {
        SpacePresentation::LatticeQuotient(_) => {
            let std = g.rational();
            let theta = if g.coin() { g.rational() } else { Rational::zero() };
            SpacePoint::unit(vec![SpaceCoord::with_theta(value(g, std), theta)])
        }
        SpacePresentation::PushoutWedge => {
            let std = g.rational();
            let branch = if g.coin() { "A" } else { "B" };
            SpacePoint::branch(branch, value(g, std))
        }
        SpacePresentation::Atlas(atlas) => {
            let chart = g.rng.gen_range(0..atlas.charts().len());
            let lo = if chart == 0 { 0 } else { -6 };
            let std = q(g.rng.gen_range(lo + 1..lo + 12), 12);
            SpacePoint::in_chart(chart, vec![value(g, std)])
        }
        SpacePresentation::Product(l, r) => {
            let a = space_point(g, l, standard);
            let b = space_point(g, r, standard);
            space.pair_points(&a, &b).unwrap()
        }
        SpacePresentation::DirectLimit => {
            let n = g.rng.gen_range(0..=3);
            let coords = (0..n)
                .map(|_| {
                    let s = g.rational();
                    SpaceCoord::new(value(g, s))
                })
                .collect();
            SpacePoint::unit(coords)
        }
        SpacePresentation::Discrete(labels) => SpacePoint::label(&g.pick(labels)),
        SpacePresentation::RealTranslationQuotient | SpacePresentation::QuotientRing(_) => {
            let std = g.rational();
            SpacePoint::scalar(value(g, std))
        }
    }
}
