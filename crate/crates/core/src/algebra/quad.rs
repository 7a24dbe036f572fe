use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::decimal::{estimate_log10, render_scaled};
use super::{format_rational, Rational};
use crate::error::{Error, Result};

/// Splits `n = s * f^2` with `s` squarefree.
fn square_part(mut n: u64) -> (u64, u64) {
    let mut s = 1;
    let mut f = 1;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p * p) {
            n /= p * p;
            f *= p;
        }
        if n.is_multiple_of(p) {
            n /= p;
            s *= p;
        }
        p += 1;
    }
    (s * n, f)
}

/// `u + v*sqrt(d)` with `d` squarefree; `d = 1` exactly when `v = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    d: u64,
    u: Rational,
    v: Rational,
}

impl QuadExt {
    pub fn new(u: Rational, v: Rational, d: u64) -> Self {
        assert!(d > 0, "radicand must be positive");
        let (s, f) = square_part(d);
        let v = v * Rational::from_integer(BigInt::from(f));
        if s == 1 {
            Self { d: 1, u: u + v, v: Rational::zero() }
        } else if v.is_zero() {
            Self { d: 1, u, v }
        } else {
            Self { d: s, u, v }
        }
    }

    pub fn rational(u: Rational) -> Self {
        Self { d: 1, u, v: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn sqrt(n: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), n)
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn rational_part(&self) -> &Rational {
        &self.u
    }

    pub fn radical_part(&self) -> &Rational {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.v.is_zero().then_some(&self.u)
    }

    fn common(&self, o: &Self) -> Option<u64> {
        if self.v.is_zero() {
            Some(o.d)
        } else if o.v.is_zero() || self.d == o.d {
            Some(self.d)
        } else {
            None
        }
    }

    fn build(d: u64, u: Rational, v: Rational) -> Self {
        if v.is_zero() {
            Self::rational(u)
        } else {
            Self { d, u, v }
        }
    }

    /// Sum; `None` when both operands carry different radicals.
    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        let d = self.common(o)?;
        Some(Self::build(d, &self.u + &o.u, &self.v + &o.v))
    }

    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        let d = self.common(o)?;
        let dd = Rational::from_integer(BigInt::from(d));
        let u = &self.u * &o.u + &self.v * &o.v * dd;
        let v = &self.u * &o.v + &self.v * &o.u;
        Some(Self::build(d, u, v))
    }

    pub fn neg(&self) -> Self {
        Self { d: self.d, u: -&self.u, v: -&self.v }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::build(self.d, &self.u * c, &self.v * c)
    }

    pub fn conj(&self) -> Self {
        Self { d: self.d, u: self.u.clone(), v: -&self.v }
    }

    /// `u^2 - d v^2`.
    pub fn norm(&self) -> Rational {
        &self.u * &self.u - &self.v * &self.v * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::invalid("division by zero in Q(sqrt d)"));
        }
        let n = self.norm();
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&sq).expect("same radicand");
            }
            k >>= 1;
            if k > 0 {
                sq = sq.checked_mul(&sq).expect("same radicand");
            }
        }
        Ok(acc)
    }

    /// Exact sign of the real number.
    pub fn signum(&self) -> i8 {
        let su = sign_of(&self.u);
        let sv = sign_of(&self.v);
        if sv == 0 || su == sv {
            return if su == 0 { sv } else { su };
        }
        if su == 0 {
            return sv;
        }
        let u2 = &self.u * &self.u;
        let dv2 = &self.v * &self.v * Rational::from_integer(BigInt::from(self.d));
        if u2 > dv2 {
            su
        } else {
            sv
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact comparison of real values (radicands may differ).
    pub fn cmp_value(&self, o: &Self) -> Ordering {
        match self.checked_sub(o) {
            Some(diff) => diff.signum().cmp(&0),
            None => MultiQuad::from(self).sub(&MultiQuad::from(o)).signum().cmp(&0),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.u.to_f64().unwrap_or(f64::NAN) + self.v.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        if self.v.is_zero() {
            return super::render_rational(&self.u, sig);
        }
        let mag = estimate_log10(&self.u).max(estimate_log10(&self.v) + (self.d as f64).log10() / 2.0);
        let mut guard = 20i64;
        loop {
            let scale = sig as i64 + guard - mag.floor() as i64;
            let t = scaled_floor(&self.u, &self.v, self.d, scale);
            let digits = t.abs().to_string().len() as i64;
            if t.is_zero() || digits < sig as i64 + 5 {
                if guard > 400 {
                    return render_scaled(&t, -scale, sig);
                }
                guard *= 2;
                continue;
            }
            return render_scaled(&t, -scale, sig);
        }
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// `floor((u + v sqrt d) * 10^s)` up to one unit.
fn scaled_floor(u: &Rational, v: &Rational, d: u64, s: i64) -> BigInt {
    let ten = BigInt::from(10);
    let (num_mul, den_mul) = if s >= 0 {
        (num_traits::pow(ten, s as usize), BigInt::one())
    } else {
        (BigInt::one(), num_traits::pow(ten, (-s) as usize))
    };
    let a = (u.numer() * &num_mul).div_floor(&(u.denom() * &den_mul));
    let vn = v.numer() * v.numer() * BigInt::from(d) * &num_mul * &num_mul;
    let vd = v.denom() * v.denom() * &den_mul * &den_mul;
    let b = (vn / vd).sqrt();
    if v.is_negative() {
        a - b
    } else {
        a + b
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        MultiQuad::from(self).fmt(f)
    }
}

/// Finite sum `sum_r c_r sqrt(r)` over squarefree `r`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiQuad {
    terms: BTreeMap<u64, Rational>,
}

impl MultiQuad {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational(c: Rational) -> Self {
        let mut m = Self::zero();
        m.add_term(1, c);
        m
    }

    /// `c * sqrt(r)` for any positive `r`.
    pub fn sqrt_term(c: Rational, r: u64) -> Self {
        let (s, f) = square_part(r);
        let mut m = Self::zero();
        m.add_term(s, c * Rational::from_integer(BigInt::from(f)));
        m
    }

    fn add_term(&mut self, r: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(r).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&r);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(r, c)| (*r, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (r, c) in &o.terms {
            out.add_term(*r, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (r, c) in &o.terms {
            out.add_term(*r, -c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (r, a) in &self.terms {
            for (s, b) in &o.terms {
                let g = r.gcd(s);
                let key = (r / g).checked_mul(s / g).expect("radicand overflow");
                out.add_term(key, a * b * Rational::from_integer(BigInt::from(g)));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (r, a) in &self.terms {
            out.add_term(*r, a * c);
        }
        out
    }

    /// Exact sign via repeated conjugate elimination of one prime at a time.
    pub fn signum(&self) -> i8 {
        let terms: Vec<(u64, Rational)> = self.terms.iter().map(|(r, c)| (*r, c.clone())).collect();
        sign_sum(&terms)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(r, c)| c.to_f64().unwrap_or(f64::NAN) * (*r as f64).sqrt()).sum()
    }
}

fn largest_prime_factor(mut n: u64) -> u64 {
    let mut best = 1;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            best = p;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        n
    } else {
        best
    }
}

/// Sign of `sum c_r sqrt(r)`: split on a prime `p` as `A + sqrt(p) B` with
/// `A`, `B` free of `p`, then compare `A^2` with `p B^2` recursively.
fn sign_sum(terms: &[(u64, Rational)]) -> i8 {
    let terms: Vec<_> = terms.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
    if terms.is_empty() {
        return 0;
    }
    let p = terms.iter().map(|(r, _)| largest_prime_factor(*r)).max().unwrap();
    if p == 1 {
        return sign_of(&terms.iter().map(|(_, c)| c.clone()).sum());
    }
    let (with_p, without): (Vec<_>, Vec<_>) = terms.into_iter().partition(|(r, _)| r % p == 0);
    let a = MultiQuad { terms: without.into_iter().collect() };
    let b = MultiQuad { terms: with_p.into_iter().map(|(r, c)| (r / p, c)).collect() };
    let sa = a.signum();
    let sb = b.signum();
    if sb == 0 || sa == sb {
        return if sa == 0 { sb } else { sa };
    }
    if sa == 0 {
        return sb;
    }
    let lhs = a.mul(&a);
    let rhs = b.mul(&b).scale(&Rational::from_integer(BigInt::from(p)));
    match lhs.sub(&rhs).signum() {
        1 => sa,
        -1 => sb,
        _ => 0,
    }
}

impl From<&QuadExt> for MultiQuad {
    fn from(q: &QuadExt) -> Self {
        let mut m = Self::zero();
        m.add_term(1, q.u.clone());
        m.add_term(q.d, q.v.clone());
        m
    }
}

impl fmt::Display for MultiQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (r, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            let body = match (*r, mag.is_one()) {
                (1, _) => format_rational(&mag),
                (r, true) => format!("sqrt({r})"),
                (r, false) => format!("{}*sqrt({r})", format_rational(&mag)),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn mq(terms: &[(u64, i64)]) -> MultiQuad {
        terms.iter().fold(MultiQuad::zero(), |acc, &(r, c)| acc.add(&MultiQuad::sqrt_term(int(c), r)))
    }

    #[test]
    fn multiquad_products() {
        assert_eq!(mq(&[(2, 1)]).mul(&mq(&[(2, 1)])), MultiQuad::rational(int(2)));
        assert_eq!(mq(&[(2, 1)]).mul(&mq(&[(3, 1)])), mq(&[(6, 1)]));
        assert_eq!(mq(&[(1, 1), (2, 1)]).mul(&mq(&[(1, 1), (2, -1)])), MultiQuad::rational(int(-1)));
        assert_eq!(MultiQuad::sqrt_term(int(1), 12), mq(&[(3, 2)]));
        assert_eq!(mq(&[(1, 1), (6, -3)]).to_string(), "1 - 3*sqrt(6)");
    }

    #[test]
    fn quad_arithmetic() {
        let s3 = QuadExt::sqrt(3);
        let x = s3.inv().unwrap().checked_add(&QuadExt::one()).unwrap().checked_add(&s3).unwrap();
        assert_eq!(x, QuadExt::new(int(1), rat(4, 3), 3));
        assert_eq!(x.to_string(), "1 + 4/3*sqrt(3)");
        assert_eq!(QuadExt::sqrt(4), QuadExt::rational(int(2)));
        assert_eq!(QuadExt::sqrt(2).pow(-3).unwrap(), QuadExt::new(int(0), rat(1, 4), 2));
        assert_eq!(QuadExt::sqrt(8), QuadExt::new(int(0), int(2), 2));
        assert!(QuadExt::sqrt(2).checked_add(&QuadExt::sqrt(3)).is_none());
    }

    #[test]
    fn exact_signs() {
        assert_eq!(QuadExt::new(int(3), int(-2), 2).signum(), 1);
        assert_eq!(QuadExt::new(int(2), int(-2), 2).signum(), -1);
        assert_eq!(QuadExt::new(int(-7), int(5), 2).signum(), 1);
        assert_eq!(mq(&[(2, 1), (3, 1), (5, -3)]).signum(), -1);
        assert_eq!(mq(&[(2, 1), (3, 1), (6, 1), (1, -5)]).signum(), 1);
        assert_eq!(mq(&[(2, 1), (3, 1), (6, 1), (1, -6)]).signum(), -1);
        let a = QuadExt::sqrt(2);
        assert_eq!(a.cmp_value(&QuadExt::sqrt(3)), Ordering::Less);
        assert_eq!(a.cmp_value(&QuadExt::rational(rat(141, 100))), Ordering::Greater);
    }

    #[test]
    fn decimals() {
        assert_eq!(QuadExt::sqrt(2).to_decimal(10), "1.414213562e0");
        let tiny = QuadExt::new(rat(-1414213562, 1000000000), int(1), 2);
        assert_eq!(tiny.to_decimal(5), "3.7310e-10");
    }
}
