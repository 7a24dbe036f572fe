//! Naive EGK data and the Laurent polynomials `F(H; Y, X)`, `G(H; Y, X)`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{int, rat, BivariateLaurent, HalfExp, HalfExpLaurent, QuadExt, Rational, Substitution};
use crate::error::{Error, Result};
use crate::gross_keating::ei_ledger;

/// `(a_1..a_n; eps_1..eps_n)` satisfying (N1)–(N5).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NaiveEGKDatum {
    a: Vec<u32>,
    eps: Vec<i8>,
}

impl NaiveEGKDatum {
    pub fn new(a: Vec<u32>, eps: Vec<i8>) -> Result<Self> {
        if a.len() != eps.len() || a.is_empty() {
            return Err(Error::invalid("a and eps must be nonempty and of equal length"));
        }
        if let Some(&e) = eps.iter().find(|e| !(-1..=1).contains(*e)) {
            return Err(Error::invalid(format!("sign {e} is not in {{-1, 0, 1}}")));
        }
        let n = a.len();
        if let Some(i) = (1..n).find(|&i| a[i] < a[i - 1]) {
            return Err(Error::NotNaiveEgk(1, i + 1));
        }
        let partial: Vec<u32> = a
            .iter()
            .scan(0, |s, &x| {
                *s += x;
                Some(*s)
            })
            .collect();
        for i in (2..=n).step_by(2) {
            if (eps[i - 1] != 0) != partial[i - 1].is_multiple_of(2) {
                return Err(Error::NotNaiveEgk(2, i));
            }
        }
        for i in (1..=n).step_by(2) {
            if eps[i - 1] == 0 {
                return Err(Error::NotNaiveEgk(3, i));
            }
        }
        if eps[0] != 1 {
            return Err(Error::NotNaiveEgk(4, 1));
        }
        for i in (3..=n).step_by(2) {
            if partial[i - 2].is_multiple_of(2) && eps[i - 1] != forced_odd_sign(&a, &eps, i) {
                return Err(Error::NotNaiveEgk(5, i));
            }
        }
        Ok(Self { a, eps })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn eps(&self) -> &[i8] {
        &self.eps
    }

    pub fn ledger(&self) -> Vec<u32> {
        ei_ledger(&self.a)
    }

    pub fn e_n(&self) -> u32 {
        *self.ledger().last().unwrap()
    }

    /// Sign of the functional equation: `eps_n` for odd `n`, `1` for even `n`.
    pub fn zeta(&self) -> i8 {
        if self.n() % 2 == 1 {
            self.eps[self.n() - 1]
        } else {
            1
        }
    }

    pub fn truncate(&self, m: usize) -> Self {
        Self { a: self.a[..m].to_vec(), eps: self.eps[..m].to_vec() }
    }
}

impl fmt::Display for NaiveEGKDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.a.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let e = self.eps.iter().map(i8::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({a}; {e})")
    }
}

/// `eps_{i-1}^(a_i + a_{i-1}) eps_{i-2}` for 1-based odd `i >= 3`.
fn forced_odd_sign(a: &[u32], eps: &[i8], i: usize) -> i8 {
    let base = eps[i - 2];
    let pow = if (a[i - 1] + a[i - 2]).is_multiple_of(2) { 1 } else { base };
    pow * eps[i - 3]
}

/// All sign vectors compatible with (N2)–(N5) for a nondecreasing `a`,
/// in lexicographic order with `-1 < 0 < 1`.
pub fn sign_candidates(a: &[u32]) -> Vec<Vec<i8>> {
    let n = a.len();
    let mut out: Vec<Vec<i8>> = vec![vec![1]];
    let mut partial = a.first().copied().unwrap_or(0);
    for i in 2..=n {
        let prev_partial = partial;
        partial += a[i - 1];
        let mut next = Vec::new();
        for e in &out {
            let choices: Vec<i8> = if i % 2 == 0 {
                if partial % 2 == 0 {
                    vec![-1, 1]
                } else {
                    vec![0]
                }
            } else if prev_partial % 2 == 0 {
                let mut t = e.clone();
                t.push(0);
                vec![forced_odd_sign(a, &t, i)]
            } else {
                vec![-1, 1]
            };
            for c in choices {
                let mut t = e.clone();
                t.push(c);
                next.push(t);
            }
        }
        out = next;
    }
    if n == 0 {
        return Vec::new();
    }
    out.sort();
    out
}

/// `G(H; Y, X) = sum_{l=0}^{e_n} a_l(Y) X^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPoly {
    pub coeffs: Vec<HalfExpLaurent>,
    pub e_n: u32,
    pub n: usize,
    pub zeta: i8,
}

impl GPoly {
    pub fn to_g(&self) -> BivariateLaurent {
        BivariateLaurent::from_coeffs(&self.coeffs)
    }

    /// `F = X^(-e_n/2) G`.
    pub fn to_f(&self) -> BivariateLaurent {
        self.to_g().shift_x(HalfExp::halves(-(self.e_n as i64)))
    }

    /// `a_l(sqrt q)` for every `l`.
    pub fn coeffs_at_sqrt(&self, q: u64) -> Result<Vec<QuadExt>> {
        self.coeffs.iter().map(|c| c.eval_sqrt(q)).collect()
    }
}

impl fmt::Display for GPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_g().fmt(f)
    }
}

fn y_pow(k: i64) -> HalfExp {
    HalfExp::int(k)
}

/// Division-free coefficient recursion for `G(H_m)`, `m = 1..n`.
pub fn f_poly(h: &NaiveEGKDatum) -> GPoly {
    let ledger = h.ledger();
    let a1 = h.a[0] as usize;
    let mut b: Vec<HalfExpLaurent> = vec![HalfExpLaurent::one(); a1 + 1];
    for m in 2..=h.n() {
        let e = ledger[m - 1] as i64;
        let ep = ledger[m - 2] as i64;
        let get = |i: i64| -> Option<&HalfExpLaurent> {
            if (0..=ep).contains(&i) {
                Some(&b[i as usize])
            } else {
                None
            }
        };
        let one = Rational::one();
        let mut next = Vec::with_capacity(e as usize + 1);
        if m % 2 == 0 {
            let xi = Rational::from_integer(h.eps[m - 1].into());
            let mxi = -&xi;
            for l in 0..=e {
                let mut acc = HalfExpLaurent::zero();
                for i in (0..=l).rev().step_by(2) {
                    if let Some(bi) = get(i) {
                        acc.add_scaled(bi, &one, y_pow(i));
                    }
                }
                for i in (0..l).rev().step_by(2) {
                    if let Some(bi) = get(i) {
                        acc.add_scaled(bi, &mxi, y_pow(i - 1));
                    }
                }
                let mut i = e + 2 - l;
                while i <= ep {
                    if let Some(bi) = get(i) {
                        acc.add_scaled(bi, &-&one, y_pow(i));
                    }
                    i += 2;
                }
                let mut i = e + 1 - l;
                while i <= ep {
                    if let Some(bi) = get(i) {
                        acc.add_scaled(bi, &xi, y_pow(i - 1));
                    }
                    i += 2;
                }
                next.push(acc);
            }
        } else {
            let xi = h.eps[m - 2] as i64;
            let zeta = h.eps[m - 1] as i64;
            for l in 0..=e {
                let mut acc = HalfExpLaurent::zero();
                if xi == 0 {
                    if let Some(bl) = get(l) {
                        acc.add_scaled(bl, &one, y_pow(l));
                    }
                    if let Some(br) = get(e - l) {
                        acc.add_scaled(br, &int(zeta), y_pow(e - l));
                    }
                } else {
                    for k in 0..=l {
                        if let Some(bi) = get(l - k) {
                            acc.add_scaled(bi, &int(xi.pow(k as u32)), y_pow(l - k));
                        }
                    }
                    let mut k = 0;
                    while e + 1 - l + k <= ep {
                        let i = e + 1 - l + k;
                        if let Some(bi) = get(i) {
                            acc.add_scaled(bi, &int(-zeta * xi * xi.pow(k as u32)), y_pow(i));
                        }
                        k += 1;
                    }
                }
                next.push(acc);
            }
        }
        b = next;
    }
    GPoly { coeffs: b, e_n: h.e_n(), n: h.n(), zeta: h.zeta() }
}

/// `C(e, e~, xi; Y, X)` (even index) or `D(e, e~, xi; Y, X)` (odd index) as
/// numerator and denominator, with `X` optionally inverted.
fn c_i(i: usize, e: i64, et: i64, xi: &Rational, inverted: bool) -> (BivariateLaurent, BivariateLaurent) {
    let one = Rational::one();
    let yt = HalfExp::halves(et);
    let (num, den) = if i.is_multiple_of(2) {
        let x0 = HalfExp::halves(-(e - et) - 2);
        let mono = BivariateLaurent::monomial(one.clone(), yt, x0);
        let fac = &BivariateLaurent::one() - &BivariateLaurent::monomial(xi.clone(), HalfExp::int(-1), HalfExp::int(1));
        let den = &BivariateLaurent::monomial(one.clone(), HalfExp::ZERO, HalfExp::int(-1))
            - &BivariateLaurent::monomial(one, HalfExp::ZERO, HalfExp::int(1));
        (&mono * &fac, den)
    } else {
        let mono = BivariateLaurent::monomial(one, yt, HalfExp::halves(-(e - et)));
        let den = &BivariateLaurent::one() - &BivariateLaurent::monomial(xi.clone(), HalfExp::ZERO, HalfExp::int(1));
        (mono, den)
    };
    if inverted {
        (num.substitute(Substitution::Inverse), den.substitute(Substitution::Inverse))
    } else {
        (num, den)
    }
}

/// Literal evaluation of the defining recursion with formal series
/// division; cross-checks [`f_poly`].
pub fn f_poly_series(h: &NaiveEGKDatum) -> Result<GPoly> {
    let ledger = h.ledger();
    let a1 = h.a[0] as i64;
    let mut f = BivariateLaurent::zero();
    for k in 0..=a1 {
        f.add_x_term(HalfExp::halves(2 * k - a1), &HalfExpLaurent::one());
    }
    for m in 2..=h.n() {
        let e = ledger[m - 1] as i64;
        let et = ledger[m - 2] as i64;
        let (xi, zeta) = if m % 2 == 0 { (h.eps[m - 1], 1) } else { (h.eps[m - 2], h.eps[m - 1]) };
        let xi = int(xi as i64);
        let order = HalfExp::halves(e + 4);
        let (n1, d1) = c_i(m, e, et, &xi, false);
        let (n2, d2) = c_i(m, e, et, &xi, true);
        let t1 = BivariateLaurent::series_expand_quotient(&(&n1 * &f.substitute(Substitution::YTimesX)), &d1, order)?;
        let t2 = BivariateLaurent::series_expand_quotient(&(&n2 * &f.substitute(Substitution::YOverX)), &d2, order)?;
        let sum = &t1 + &t2.scale(&int(zeta as i64));
        let top = HalfExp::halves(e);
        if sum.max_x().is_some_and(|x| x > top) || sum.min_x().is_some_and(|x| x < -top) {
            return Err(Error::invariant(format!("F(H_{m}) is not a Laurent polynomial of width e_{m} = {e}")));
        }
        f = sum;
    }
    let e = h.e_n() as i64;
    let g = f.shift_x(HalfExp::halves(e));
    let coeffs = (0..=e).map(|l| g.coeff(HalfExp::int(l))).collect();
    Ok(GPoly { coeffs, e_n: h.e_n(), n: h.n(), zeta: h.zeta() })
}

/// `F(H; Y, X^(-1)) - zeta F(H; Y, X)`.
pub fn functional_eq_defect(h: &NaiveEGKDatum) -> BivariateLaurent {
    let f = f_poly(h).to_f();
    &f.substitute(Substitution::Inverse) - &f.scale(&int(h.zeta() as i64))
}

/// Evaluation point for [`specialize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    /// `X = x` with `x` in `Q(sqrt q)`.
    Explicit(QuadExt),
    /// `X + X^(-1) = t`, for symmetric `F`.
    Trace(QuadExt),
}

/// `F(sqrt q, X)` at the given point, exactly in `Q(sqrt q)`.
pub fn specialize(g: &GPoly, q: u64, point: &Point) -> Result<QuadExt> {
    let e = g.e_n as i64;
    let vals = g.coeffs_at_sqrt(q)?;
    let same_field = |x: &QuadExt| x.as_rational().is_some() || x.radicand() == QuadExt::sqrt(q).radicand();
    match point {
        Point::Explicit(x) => {
            if !same_field(x) {
                return Err(Error::invalid("evaluation point must lie in Q(sqrt q)"));
            }
            if e % 2 == 1 {
                return Err(Error::invalid("F has half-integral X-exponents; use an even e_n"));
            }
            let mut acc = QuadExt::zero();
            for (l, v) in vals.iter().enumerate() {
                let term = v.checked_mul(&x.pow(l as i64 - e / 2)?).expect("same field");
                acc = acc.checked_add(&term).expect("same field");
            }
            Ok(acc)
        }
        Point::Trace(t) => {
            if g.n % 2 == 1 {
                return Err(Error::invalid("the trace route needs a datum of even length"));
            }
            if !same_field(t) {
                return Err(Error::invalid("trace must lie in Q(sqrt q)"));
            }
            let half = (e / 2) as usize;
            for j in 1..=half {
                if vals[half + j] != vals[half - j] {
                    return Err(Error::invariant("F is not symmetric under X -> 1/X"));
                }
            }
            let mut acc = vals[half].clone();
            let mut v_prev = QuadExt::rational(int(2));
            let mut v_cur = t.clone();
            for j in 1..=half {
                acc = acc.checked_add(&vals[half + j].checked_mul(&v_cur).unwrap()).unwrap();
                let v_next = t.checked_mul(&v_cur).unwrap().checked_sub(&v_prev).unwrap();
                v_prev = v_cur;
                v_cur = v_next;
            }
            Ok(acc)
        }
    }
}

/// Outcome of the coefficient and value bounds for one datum at one `q`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BoundReport {
    pub checks: usize,
    pub violations: Vec<String>,
    /// Largest `lhs / rhs` observed per family (floating point, report-only).
    pub max_ratio_coeff: f64,
    pub max_ratio_value: f64,
    pub max_ratio_value_even: f64,
}

fn cos_rational(m: i64, k6: i64) -> Rational {
    // cos(m * k6 * pi / 6) for k6 in {0, 2, 3, 4, 6}
    match (m * k6).rem_euclid(12) {
        0 => int(1),
        2 | 10 => rat(1, 2),
        3 | 9 => int(0),
        4 | 8 => rat(-1, 2),
        6 => int(-1),
        _ => unreachable!("angle outside the sampled set"),
    }
}

/// `q^(k/2)` for an integer `k`, exactly.
fn sqrt_q_pow(q: u64, k: i64) -> QuadExt {
    QuadExt::sqrt(q).pow(k).expect("nonzero")
}

fn ratio(l: &QuadExt, r: &QuadExt) -> f64 {
    let rv = r.to_f64();
    if rv == 0.0 {
        0.0
    } else {
        l.to_f64().abs() / rv
    }
}

/// Checks the coefficient bound, the value bound on `|Re s| <= r0`, and
/// (for even `n`) its symmetric variant, all exactly. `r0` must be a
/// nonnegative multiple of `1/2`.
pub fn bound_check(h: &NaiveEGKDatum, q: u64, r0: &Rational) -> Result<BoundReport> {
    let two_r0 = r0 * int(2);
    if r0.is_negative() || !two_r0.is_integer() {
        return Err(Error::invalid("r0 must be a nonnegative multiple of 1/2"));
    }
    let r2 = two_r0.to_integer().to_i64().unwrap();
    let g = f_poly(h);
    let n = h.n();
    let ledger = h.ledger();
    let e = g.e_n as i64;
    let vals = g.coeffs_at_sqrt(q)?;
    let mut rep = BoundReport::default();

    let p_lo: i64 = ledger[..n - 1].iter().map(|&x| x as i64 + 1).product();
    let p_all: i64 = ledger.iter().map(|&x| x as i64 + 1).product();
    let e_sum: i64 = ledger[..n - 1].iter().map(|&x| x as i64).sum();
    let coeff_rhs = sqrt_q_pow(q, e_sum).scale(&int(p_lo));
    for (i, v) in vals.iter().enumerate() {
        rep.checks += 1;
        let lhs = v.abs();
        rep.max_ratio_coeff = rep.max_ratio_coeff.max(ratio(&lhs, &coeff_rhs));
        if lhs.cmp_value(&coeff_rhs) == Ordering::Greater {
            rep.violations.push(format!("coefficient bound fails at i = {i}: |{v}| > {coeff_rhs}"));
        }
    }

    // |F|^2 = sum_{j,k} c_j c_k q^{sigma (j + k)} cos((j - k) theta), exponents
    // j = l - e/2 measured in halves.
    let val_rhs_sq = sqrt_q_pow(q, e * r2 + 2 * e_sum).scale(&int(p_all * p_all));
    let even_rhs_sq =
        n.is_multiple_of(2).then(|| sqrt_q_pow(q, e * r2 + (n as i64 - 1) * e).scale(&int(p_all * p_all)));
    let prods: Vec<Vec<QuadExt>> =
        vals.iter().map(|cj| vals.iter().map(|ck| cj.checked_mul(ck).unwrap()).collect()).collect();
    let lim = r2 * e;
    let powers: Vec<QuadExt> = (-lim..=lim).map(|k| sqrt_q_pow(q, k)).collect();
    for sigma2 in [-r2, 0, r2] {
        for k6 in [0, 2, 3, 4, 6] {
            let mut acc = QuadExt::zero();
            for (j, row) in prods.iter().enumerate() {
                for (k, cjk) in row.iter().enumerate() {
                    let c = cos_rational(j as i64 - k as i64, k6);
                    if c.is_zero() || cjk.is_zero() {
                        continue;
                    }
                    // exponent of sqrt(q): 2 sigma (j + k - e) with sigma = sigma2 / 2
                    let qpow = sigma2 * (j as i64 + k as i64 - e);
                    let t = cjk.checked_mul(&powers[(qpow + lim) as usize]).unwrap().scale(&c);
                    acc = acc.checked_add(&t).unwrap();
                }
            }
            rep.checks += 1;
            rep.max_ratio_value = rep.max_ratio_value.max(ratio(&acc, &val_rhs_sq).sqrt());
            if acc.cmp_value(&val_rhs_sq) == Ordering::Greater {
                rep.violations.push(format!("value bound fails at sigma = {sigma2}/2, theta = {k6}pi/6"));
            }
            if let Some(rhs) = &even_rhs_sq {
                rep.checks += 1;
                rep.max_ratio_value_even = rep.max_ratio_value_even.max(ratio(&acc, rhs).sqrt());
                if acc.cmp_value(rhs) == Ordering::Greater {
                    rep.violations
                        .push(format!("even-length value bound fails at sigma = {sigma2}/2, theta = {k6}pi/6"));
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: &[u32], e: &[i8]) -> NaiveEGKDatum {
        NaiveEGKDatum::new(a.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(NaiveEGKDatum::new(vec![0], vec![1]).is_ok());
        assert_eq!(NaiveEGKDatum::new(vec![1, 1], vec![1, 0]), Err(Error::NotNaiveEgk(2, 2)));
        assert_eq!(NaiveEGKDatum::new(vec![0, 0, 0], vec![1, 1, -1]), Err(Error::NotNaiveEgk(5, 3)));
        assert_eq!(NaiveEGKDatum::new(vec![1, 0], vec![1, 0]), Err(Error::NotNaiveEgk(1, 2)));
        assert_eq!(NaiveEGKDatum::new(vec![0, 1, 1], vec![1, 0, 0]), Err(Error::NotNaiveEgk(3, 3)));
        assert_eq!(NaiveEGKDatum::new(vec![0], vec![-1]), Err(Error::NotNaiveEgk(4, 1)));
        assert!(NaiveEGKDatum::new(vec![0], vec![1, 1]).is_err());
    }

    #[test]
    fn candidates() {
        assert_eq!(sign_candidates(&[1]), vec![vec![1]]);
        assert_eq!(sign_candidates(&[0, 1]), vec![vec![1, 0]]);
        assert_eq!(sign_candidates(&[0, 0]), vec![vec![1, -1], vec![1, 1]]);
        for a in [vec![0, 0, 1, 1], vec![0, 1, 1, 2, 2], vec![1, 1, 1, 3, 3, 5]] {
            for e in sign_candidates(&a) {
                assert!(NaiveEGKDatum::new(a.clone(), e).is_ok());
            }
        }
    }

    #[test]
    fn base_and_small_cases() {
        let g = f_poly(&h(&[2], &[1]));
        assert_eq!(g.to_string(), "1 + X + X^2");
        assert_eq!(g.to_f().to_string(), "X^(-1) + 1 + X");
        assert_eq!(f_poly(&h(&[0, 0], &[1, 1])).to_string(), "1");
        assert_eq!(f_poly(&h(&[0, 1], &[1, 0])).to_string(), "1");
        assert_eq!(f_poly(&h(&[1], &[1])).to_f().to_string(), "X^(-1/2) + X^(1/2)");
    }

    #[test]
    fn routes_agree() {
        for (a, e) in [
            (vec![2], vec![1]),
            (vec![1, 1], vec![1, 1]),
            (vec![1, 1], vec![1, -1]),
            (vec![0, 1, 1], vec![1, 0, -1]),
            (vec![0, 0, 1], vec![1, 1, 1]),
            (vec![0, 0, 1], vec![1, -1, -1]),
            (vec![1, 2, 3, 3], vec![1, 0, 1, 0]),
            (vec![1, 1, 2, 2], vec![1, -1, -1, 1]),
            (vec![0, 2, 2, 4, 5], vec![1, 1, 1, -1, -1]),
        ] {
            let d = h(&a, &e);
            assert_eq!(f_poly(&d), f_poly_series(&d).unwrap(), "{d}");
        }
    }

    #[test]
    fn functional_equation() {
        assert!(functional_eq_defect(&h(&[2], &[1])).is_zero());
        let d = h(&[0, 0, 1], &[1, -1, -1]);
        assert_eq!(d.zeta(), -1);
        assert!(functional_eq_defect(&d).is_zero());
        assert!(functional_eq_defect(&h(&[0, 1, 1], &[1, 0, -1])).is_zero());
    }

    #[test]
    fn specialization() {
        let one = f_poly(&h(&[0, 0], &[1, 1]));
        assert_eq!(specialize(&one, 5, &Point::Trace(QuadExt::rational(int(7)))).unwrap(), QuadExt::one());
        let g = f_poly(&h(&[2], &[1]));
        assert_eq!(specialize(&g, 3, &Point::Explicit(QuadExt::one())).unwrap(), QuadExt::rational(int(3)));
        let v = specialize(&g, 3, &Point::Explicit(QuadExt::sqrt(3))).unwrap();
        assert_eq!(v, QuadExt::new(int(1), rat(4, 3), 3));
        assert!(specialize(&g, 3, &Point::Trace(QuadExt::rational(int(2)))).is_err());
        let even = f_poly(&h(&[1, 3], &[1, 1]));
        let x = QuadExt::sqrt(2);
        let t = x.checked_add(&x.inv().unwrap()).unwrap();
        assert_eq!(specialize(&even, 2, &Point::Explicit(x)).unwrap(), specialize(&even, 2, &Point::Trace(t)).unwrap());
    }

    #[test]
    fn bounds() {
        let r = bound_check(&h(&[2], &[1]), 2, &int(0)).unwrap();
        assert!(r.violations.is_empty());
        assert!((r.max_ratio_coeff - 1.0).abs() < 1e-12);
        let r = bound_check(&h(&[0, 0], &[1, 1]), 3, &rat(1, 2)).unwrap();
        assert!(r.violations.is_empty());
        assert!(bound_check(&h(&[0, 0], &[1, 1]), 3, &rat(1, 3)).is_err());
    }
}
