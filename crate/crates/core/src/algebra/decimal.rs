//! Decimal rendering of exact quantities and of products of rational powers
//! `c * prod b_i^(e_i)` with rational exponents, using integer roots only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

fn log10_int(n: &BigInt) -> f64 {
    let n = n.abs();
    let bits = n.bits();
    if bits < 1000 {
        n.to_f64().unwrap_or(0.0).log10()
    } else {
        let shift = bits - 64;
        (&n >> shift).to_f64().unwrap().log10() + shift as f64 * std::f64::consts::LOG10_2
    }
}

/// `log10 |r|`, `-inf` for zero.
pub(crate) fn estimate_log10(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    log10_int(r.numer()) - log10_int(r.denom())
}

fn pow10(k: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// Renders `mantissa * 10^exp10` rounded half-up to `sig` significant digits.
pub(crate) fn render_scaled(mantissa: &BigInt, exp10: i64, sig: usize) -> String {
    if mantissa.is_zero() {
        return "0".into();
    }
    let sig = sig.max(1);
    let neg = mantissa.is_negative();
    let mut digits: Vec<u8> = mantissa.abs().to_string().into_bytes();
    let mut point = digits.len() as i64 - 1 + exp10;
    if digits.len() > sig {
        let round_up = digits[sig] >= b'5';
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, b'1');
                    digits.truncate(sig);
                    point += 1;
                    break;
                }
                i -= 1;
                if digits[i] == b'9' {
                    digits[i] = b'0';
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    } else {
        digits.resize(sig, b'0');
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push(digits[0] as char);
    if sig > 1 {
        out.push('.');
        out.push_str(std::str::from_utf8(&digits[1..]).unwrap());
    }
    out.push_str(&format!("e{point}"));
    out
}

/// Scientific notation of a rational with `sig` significant digits.
pub fn render_rational(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let scale = sig as i64 + 5 - estimate_log10(r).floor() as i64;
    let (n, d) = if scale >= 0 {
        (r.numer() * pow10(scale as u64), r.denom().clone())
    } else {
        (r.numer().clone(), r.denom() * pow10((-scale) as u64))
    };
    let m = if n.is_negative() { -((-n).div_floor(&d)) } else { n.div_floor(&d) };
    render_scaled(&m, -scale, sig)
}

/// `coeff * prod base_i^(exp_i)` with positive rational bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealPowerProduct {
    pub coeff: Rational,
    pub factors: Vec<(Rational, Rational)>,
}

impl RealPowerProduct {
    pub fn new(coeff: Rational) -> Self {
        Self { coeff, factors: Vec::new() }
    }

    pub fn times_pow(mut self, base: Rational, exp: Rational) -> Self {
        assert!(base.is_positive(), "power base must be positive");
        if !exp.is_zero() && !base.is_one() {
            self.factors.push((base, exp));
        }
        self
    }

    pub fn log10_estimate(&self) -> f64 {
        self.factors
            .iter()
            .fold(estimate_log10(&self.coeff), |acc, (b, e)| acc + estimate_log10(b) * e.to_f64().unwrap_or(0.0))
    }

    /// Scientific notation with `sig` significant digits; each factor is
    /// evaluated to `sig + 12` digits by an integer `b`-th root.
    pub fn to_decimal(&self, sig: usize) -> String {
        if self.coeff.is_zero() {
            return "0".into();
        }
        let guard = sig as i64 + 12;
        let mut mant = BigInt::one();
        let mut exp10 = 0i64;
        let all = std::iter::once((self.coeff.abs(), Rational::one())).chain(self.factors.iter().cloned());
        for (base, e) in all {
            let l = estimate_log10(&base) * e.to_f64().unwrap_or(0.0);
            let s = guard - l.floor() as i64;
            let (a, b) = (e.numer().clone(), e.denom().to_u32().expect("root index too large"));
            let base = if a.is_negative() { base.recip() } else { base };
            let a = a.abs().to_usize().expect("exponent too large");
            let mut num = num_traits::pow(base.numer().clone(), a);
            let mut den = num_traits::pow(base.denom().clone(), a);
            let shift = pow10(s.unsigned_abs() * b as u64);
            if s >= 0 {
                num *= shift;
            } else {
                den *= shift;
            }
            mant *= (num / den).nth_root(b);
            exp10 -= s;
        }
        if self.coeff.is_negative() {
            mant = -mant;
        }
        render_scaled(&mant, exp10, sig)
    }
}
