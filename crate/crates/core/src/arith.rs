//! Integer helpers: p-adic valuations, primality, trial-division factoring,
//! Legendre symbols and modular inverses.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default trial-division bound used when factoring det(2B).
pub const DEFAULT_TRIAL_BOUND: u64 = 1 << 20;

/// `ord_p(n)`, or `None` for `n = 0`.
pub fn ord(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// Valuation of a machine integer, `None` for zero.
pub fn ord_u128(mut n: u128, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as u128;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Valuation capped at `cap` (zero counts as `cap`).
pub fn ord_capped(n: u128, p: u64, cap: u32) -> u32 {
    match ord_u128(n, p) {
        Some(v) => v.min(cap),
        None => cap,
    }
}

pub fn pow_u64(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

pub fn pow_big(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with the first 20 prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n = n.magnitude();
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let bases = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
    'witness: for a in bases {
        let a = BigUint::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factor `|n|` by trial division up to `bound`, accepting a prime cofactor.
pub fn factor(n: &BigInt, bound: u64) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::Degenerate);
    }
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    while d <= bound {
        let dd = BigInt::from(d);
        if &dd * &dd > m {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&dd);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let fits = m.to_u64();
        let bound_sq = BigInt::from(bound) * BigInt::from(bound);
        let prime = m < bound_sq || is_probable_prime(&m);
        match (prime, fits) {
            (true, Some(v)) => out.push((v, 1)),
            _ => return Err(Error::Unfactored(n.to_string())),
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Inverse of `a` modulo `m` (gcd must be 1).
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

/// Inverse modulo `m` for arbitrary-precision operands.
pub fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Squarefree kernel with sign: `n = s * f^2`, returns `(s, f)`.
pub fn squarefree_decompose(n: &BigInt, bound: u64) -> Result<(BigInt, BigInt)> {
    let mut s = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut f = BigInt::one();
    for (p, e) in factor(n, bound)? {
        f *= pow_big(p, e / 2);
        if e % 2 == 1 {
            s *= BigInt::from(p);
        }
    }
    Ok((s, f))
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime_u64(k)).collect()
}

/// Number of positive divisors.
pub fn num_divisors(n: &BigInt, bound: u64) -> Result<u64> {
    Ok(factor(n, bound)?.iter().map(|&(_, e)| e as u64 + 1).product())
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(ord(&BigInt::from(12), 2), Some(2));
        assert_eq!(ord(&BigInt::from(-108), 3), Some(3));
        assert_eq!(ord(&BigInt::zero(), 5), None);
        assert_eq!(ord_capped(0, 3, 4), 4);
        assert_eq!(ord_capped(18, 3, 4), 2);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = primes_up_to(30);
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(561));
        let big: BigInt = "170141183460469231731687303715884105727".parse().unwrap();
        assert!(is_probable_prime(&big));
        assert!(!is_probable_prime(&(&big * BigInt::from(3))));
    }

    #[test]
    fn factoring() {
        assert_eq!(factor(&BigInt::from(-360), 100).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor(&BigInt::from(2 * 1_000_003u64), 100).unwrap(), vec![(2, 1), (1_000_003, 1)]);
        let semi = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        assert!(matches!(factor(&semi, 1000), Err(Error::Unfactored(_))));
        let (s, f) = squarefree_decompose(&BigInt::from(-48), 100).unwrap();
        assert_eq!((s, f), (BigInt::from(-3), BigInt::from(4)));
    }

    #[test]
    fn residues() {
        assert_eq!(legendre(&BigInt::from(-4), 5), 1);
        assert_eq!(legendre(&BigInt::from(-1), 3), -1);
        assert_eq!(legendre(&BigInt::from(6), 3), 0);
        assert_eq!(inv_mod(3, 16), Some(11));
        assert_eq!(inv_mod(2, 16), None);
    }
}
