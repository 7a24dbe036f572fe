use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{QuadExt, Rational};
use crate::error::{Error, Result};

/// An exponent in `(1/2)Z`, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct HalfExp(pub i64);

impl HalfExp {
    pub const ZERO: HalfExp = HalfExp(0);

    pub fn int(k: i64) -> Self {
        HalfExp(2 * k)
    }

    /// `k/2`.
    pub fn halves(k: i64) -> Self {
        HalfExp(k)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn as_int(self) -> Option<i64> {
        (self.0 % 2 == 0).then_some(self.0 / 2)
    }
}

impl Add for HalfExp {
    type Output = HalfExp;
    fn add(self, o: HalfExp) -> HalfExp {
        HalfExp(self.0 + o.0)
    }
}

impl Sub for HalfExp {
    type Output = HalfExp;
    fn sub(self, o: HalfExp) -> HalfExp {
        HalfExp(self.0 - o.0)
    }
}

impl Neg for HalfExp {
    type Output = HalfExp;
    fn neg(self) -> HalfExp {
        HalfExp(-self.0)
    }
}

impl fmt::Display for HalfExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_int() {
            Some(k) => write!(f, "{k}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

fn fmt_power(var: &str, e: HalfExp) -> Option<String> {
    match e.0 {
        0 => None,
        2 => Some(var.to_string()),
        d if d > 0 && d % 2 == 0 => Some(format!("{var}^{}", d / 2)),
        _ => Some(format!("{var}^({e})")),
    }
}

/// Appends one signed term to a canonical sum.
fn push_term(out: &mut String, coef: &Rational, vars: &[(&str, HalfExp)]) {
    let body: Vec<String> = vars.iter().filter_map(|&(v, e)| fmt_power(v, e)).collect();
    let neg = coef.is_negative();
    let mag = coef.abs();
    let text = if body.is_empty() {
        super::format_rational(&mag)
    } else if mag.is_one() {
        body.join("*")
    } else {
        format!("{}*{}", super::format_rational(&mag), body.join("*"))
    };
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    out.push_str(&text);
}

/// Laurent polynomial in `Y^(1/2)` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfExpLaurent {
    terms: BTreeMap<HalfExp, Rational>,
}

impl HalfExpLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, HalfExp::ZERO)
    }

    pub fn monomial(c: Rational, e: HalfExp) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (HalfExp, Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (HalfExp, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: HalfExp) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_exp(&self) -> Option<HalfExp> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<HalfExp> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, e: HalfExp, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// `self += c * Y^shift * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational, shift: HalfExp) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.add_term(*e + shift, v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    /// Multiplication by `Y^e`.
    pub fn shift(&self, e: HalfExp) -> Self {
        Self { terms: self.terms.iter().map(|(k, v)| (*k + e, v.clone())).collect() }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&HalfExp::ZERO).cloned(),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(HalfExp, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    /// Evaluation at `Y = sqrt(q)`; needs integral Y-exponents.
    pub fn eval_sqrt(&self, q: u64) -> Result<QuadExt> {
        let mut acc = QuadExt::zero();
        for (e, c) in &self.terms {
            let k = e.as_int().ok_or_else(|| Error::invalid(format!("Y-exponent {e} has no value in Q(sqrt({q}))")))?;
            let term = QuadExt::sqrt(q).pow(k)?.scale(c);
            acc = acc.checked_add(&term).expect("same radicand");
        }
        Ok(acc)
    }

    fn fmt_with(&self, var: &str) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            push_term(&mut out, c, &[(var, *e)]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for HalfExpLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with("Y"))
    }
}

impl<'a> Add<&'a HalfExpLaurent> for &HalfExpLaurent {
    type Output = HalfExpLaurent;
    fn add(self, rhs: &'a HalfExpLaurent) -> HalfExpLaurent {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one(), HalfExp::ZERO);
        out
    }
}

impl<'a> Sub<&'a HalfExpLaurent> for &HalfExpLaurent {
    type Output = HalfExpLaurent;
    fn sub(self, rhs: &'a HalfExpLaurent) -> HalfExpLaurent {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one(), HalfExp::ZERO);
        out
    }
}

impl<'a> Mul<&'a HalfExpLaurent> for &HalfExpLaurent {
    type Output = HalfExpLaurent;
    fn mul(self, rhs: &'a HalfExpLaurent) -> HalfExpLaurent {
        let mut out = HalfExpLaurent::zero();
        for (e, c) in &self.terms {
            out.add_scaled(rhs, c, *e);
        }
        out
    }
}

impl Neg for &HalfExpLaurent {
    type Output = HalfExpLaurent;
    fn neg(self) -> HalfExpLaurent {
        self.scale(&-Rational::one())
    }
}

/// Rewrites of the X variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// `X -> Y*X`
    YTimesX,
    /// `X -> Y*X^(-1)`
    YOverX,
    /// `X -> X^(-1)`
    Inverse,
}

/// Laurent polynomial in `X^(1/2)` with coefficients in `Q[Y^(1/2), Y^(-1/2)]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BivariateLaurent {
    terms: BTreeMap<HalfExp, HalfExpLaurent>,
}

impl BivariateLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, HalfExp::ZERO, HalfExp::ZERO)
    }

    /// `c * Y^y * X^x`.
    pub fn monomial(c: Rational, y: HalfExp, x: HalfExp) -> Self {
        Self::x_term(HalfExpLaurent::monomial(c, y), x)
    }

    /// `p(Y) * X^x`.
    pub fn x_term(p: HalfExpLaurent, x: HalfExp) -> Self {
        let mut out = Self::zero();
        out.add_x_term(x, &p);
        out
    }

    /// Builds from the coefficient list `a_0(Y), a_1(Y), ...` of `X^0, X^1, ...`.
    pub fn from_coeffs(coeffs: &[HalfExpLaurent]) -> Self {
        let mut out = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            out.add_x_term(HalfExp::int(i as i64), c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (HalfExp, &HalfExpLaurent)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, x: HalfExp) -> HalfExpLaurent {
        self.terms.get(&x).cloned().unwrap_or_default()
    }

    pub fn min_x(&self) -> Option<HalfExp> {
        self.terms.keys().next().copied()
    }

    pub fn max_x(&self) -> Option<HalfExp> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_x_term(&mut self, x: HalfExp, p: &HalfExpLaurent) {
        self.add_x_scaled(x, p, &Rational::one(), HalfExp::ZERO);
    }

    /// `self += c * Y^y * X^x * p`.
    fn add_x_scaled(&mut self, x: HalfExp, p: &HalfExpLaurent, c: &Rational, y: HalfExp) {
        if p.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_default();
        slot.add_scaled(p, c, y);
        if slot.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, p)| (*e, p.scale(c))).collect() }
    }

    /// Multiplication by a polynomial in Y alone.
    pub fn scale_y(&self, p: &HalfExpLaurent) -> Self {
        let mut out = Self::zero();
        for (x, c) in &self.terms {
            out.add_x_term(*x, &(c * p));
        }
        out
    }

    /// Multiplication by `X^x`.
    pub fn shift_x(&self, x: HalfExp) -> Self {
        Self { terms: self.terms.iter().map(|(e, p)| (*e + x, p.clone())).collect() }
    }

    pub fn substitute(&self, rule: Substitution) -> Self {
        let mut out = Self::zero();
        for (b, p) in &self.terms {
            match rule {
                Substitution::YTimesX => out.add_x_term(*b, &p.shift(*b)),
                Substitution::YOverX => out.add_x_term(-*b, &p.shift(*b)),
                Substitution::Inverse => out.add_x_term(-*b, p),
            }
        }
        out
    }

    /// Drops all terms with X-exponent above `order`.
    pub fn truncate(&self, order: HalfExp) -> Self {
        Self { terms: self.terms.range(..=order).map(|(e, p)| (*e, p.clone())).collect() }
    }

    /// Formal expansion of `numer / denom` in ascending powers of X, keeping
    /// exponents up to `order`. The lowest X-coefficient of `denom` must be a
    /// monomial in Y.
    pub fn series_expand_quotient(numer: &Self, denom: &Self, order: HalfExp) -> Result<Self> {
        let (d0, lead) = denom.terms.iter().next().ok_or(Error::NonInvertible)?;
        let (ly, lc) = lead.as_monomial().ok_or(Error::NonInvertible)?;
        let inv_c = lc.recip();
        let cutoff = order + *d0;
        let mut rem = numer.truncate(cutoff);
        let mut out = Self::zero();
        while let Some((&e, p)) = rem.terms.iter().next() {
            let t = p.scale(&inv_c).shift(-ly);
            let qx = e - *d0;
            for (dx, dp) in &denom.terms {
                let x = qx + *dx;
                if x > cutoff {
                    break;
                }
                let prod = &t * dp;
                rem.add_x_scaled(x, &prod, &-Rational::one(), HalfExp::ZERO);
            }
            out.add_x_term(qx, &t);
        }
        Ok(out)
    }
}

impl fmt::Display for BivariateLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (x, p) in &self.terms {
            for (y, c) in p.terms() {
                push_term(&mut out, c, &[("Y", y), ("X", *x)]);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl<'a> Add<&'a BivariateLaurent> for &BivariateLaurent {
    type Output = BivariateLaurent;
    fn add(self, rhs: &'a BivariateLaurent) -> BivariateLaurent {
        let mut out = self.clone();
        for (x, p) in &rhs.terms {
            out.add_x_term(*x, p);
        }
        out
    }
}

impl<'a> Sub<&'a BivariateLaurent> for &BivariateLaurent {
    type Output = BivariateLaurent;
    fn sub(self, rhs: &'a BivariateLaurent) -> BivariateLaurent {
        let mut out = self.clone();
        let m1 = -Rational::one();
        for (x, p) in &rhs.terms {
            out.add_x_scaled(*x, p, &m1, HalfExp::ZERO);
        }
        out
    }
}

impl<'a> Mul<&'a BivariateLaurent> for &BivariateLaurent {
    type Output = BivariateLaurent;
    fn mul(self, rhs: &'a BivariateLaurent) -> BivariateLaurent {
        let mut out = BivariateLaurent::zero();
        for (x1, p1) in &self.terms {
            for (x2, p2) in &rhs.terms {
                out.add_x_term(*x1 + *x2, &(p1 * p2));
            }
        }
        out
    }
}

impl Neg for &BivariateLaurent {
    type Output = BivariateLaurent;
    fn neg(self) -> BivariateLaurent {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

forward_owned!(HalfExpLaurent);
forward_owned!(BivariateLaurent);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn x(e: i64) -> BivariateLaurent {
        BivariateLaurent::monomial(int(1), HalfExp::ZERO, HalfExp::halves(e))
    }

    fn y(e: i64) -> BivariateLaurent {
        BivariateLaurent::monomial(int(1), HalfExp::halves(e), HalfExp::ZERO)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&x(1) * &x(1), x(2));
        let p = &x(-1) + &x(1);
        assert_eq!(&p + &BivariateLaurent::zero(), p);
        let sq = &p * &p;
        assert_eq!(sq.to_string(), "X^(-1) + 2 + X");
        assert!((&sq - &sq).is_zero());
        assert_eq!((-&x(2)).to_string(), "-X");
    }

    #[test]
    fn substitutions() {
        assert_eq!(x(1).substitute(Substitution::Inverse), x(-1));
        assert_eq!(x(2).substitute(Substitution::YTimesX), &y(2) * &x(2));
        assert_eq!((&y(2) * &x(-2)).substitute(Substitution::YOverX), x(2));
    }

    #[test]
    fn quotients() {
        let one = BivariateLaurent::one();
        let d = &one - &x(2);
        let g = BivariateLaurent::series_expand_quotient(&one, &d, HalfExp::int(3)).unwrap();
        assert_eq!(g.to_string(), "1 + X + X^2 + X^3");
        let n = &one - &x(4);
        let q = BivariateLaurent::series_expand_quotient(&n, &d, HalfExp::int(5)).unwrap();
        assert_eq!(q.to_string(), "1 + X");
        let e0 = &one - &x(2).scale(&int(0));
        let q = BivariateLaurent::series_expand_quotient(&one, &e0, HalfExp::int(4)).unwrap();
        assert_eq!(q, one);
        let bad = &y(2) + &y(0);
        assert_eq!(BivariateLaurent::series_expand_quotient(&one, &bad, HalfExp::int(2)), Err(Error::NonInvertible));
    }

    #[test]
    fn canonical_text() {
        let p = &(&y(1) * &x(-1)).scale(&crate::algebra::rat(3, 2)) + &(&y(-2) * &x(1));
        assert_eq!(p.to_string(), "3/2*Y^(1/2)*X^(-1/2) + Y^(-1)*X^(1/2)");
        assert_eq!(BivariateLaurent::zero().to_string(), "0");
        assert_eq!(HalfExpLaurent::monomial(int(-2), HalfExp::int(3)).to_string(), "-2*Y^3");
    }

    #[test]
    fn y_evaluation() {
        let p = HalfExpLaurent::from_terms([
            (HalfExp::int(-1), int(1)),
            (HalfExp::ZERO, int(1)),
            (HalfExp::int(1), int(1)),
        ]);
        let v = p.eval_sqrt(3).unwrap();
        assert_eq!(v, QuadExt::new(int(1), crate::algebra::rat(4, 3), 3));
        assert!(HalfExpLaurent::monomial(int(1), HalfExp::halves(1)).eval_sqrt(3).is_err());
    }
}
