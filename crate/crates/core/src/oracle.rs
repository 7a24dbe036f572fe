//! Brute-force local Siegel series: character sums over `Sym_n(Q_p)/Sym_n(Z_p)`
//! and recovery of the polynomial `F_p(B, X)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::QuadExt;
use crate::arith::{self, inv_mod};
use crate::budget::Budget;
use crate::egk::GPoly;
use crate::error::{Error, Result};
use crate::quadratic::{local_invariants, HalfIntegralMatrix};

/// Character sums `S_j` for `j = 0..=m`, with the raw tallies
/// `N[j][d]` (μ-exponent `j`, additive order `p^d`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterSums {
    pub p: u64,
    pub m: u32,
    pub s: Vec<i64>,
    pub tallies: Vec<Vec<u64>>,
}

/// `F_p(B, X)` with integer coefficients, constant term 1, degree `e_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiegelPoly {
    pub p: u64,
    pub n: usize,
    pub e_b: u32,
    pub coeffs: Vec<i64>,
}

impl std::fmt::Display for SiegelPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else { "+" };
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "{a}*X")?,
                (_, 1) => write!(f, "X^{i}")?,
                _ => write!(f, "{a}*X^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `gamma_q(B, X) = num / den` as integer coefficient lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaFactor {
    pub num: Vec<i128>,
    pub den: Vec<i128>,
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn gamma_factor(n: usize, xi: i8, q: u64) -> GammaFactor {
    let mut num = vec![1i128, -1];
    for i in 1..=(n / 2) {
        num = poly_mul(&num, &[1, 0, -(q as i128).pow(2 * i as u32)]);
    }
    let den =
        if n.is_multiple_of(2) && xi != 0 { vec![1, -(xi as i128) * (q as i128).pow((n / 2) as u32)] } else { vec![1] };
    GammaFactor { num, den }
}

/// Sum of `max(m - v_i, 0)` over the elementary divisors `p^{v_i}` of a
/// square matrix over `Z/p^m` (row-major, destroyed).
fn mu_exponent(a: &mut [u64], n: usize, p: u64, m: u32, pm: u64) -> u32 {
    let mut j = 0;
    for k in 0..n {
        let mut best = (m, k, k);
        for i in k..n {
            for c in k..n {
                let v = arith::ord_capped(a[i * n + c] as u128, p, m);
                if v < best.0 {
                    best = (v, i, c);
                }
            }
        }
        let (v, bi, bc) = best;
        if v == m {
            break;
        }
        j += m - v;
        if bi != k {
            for c in 0..n {
                a.swap(k * n + c, bi * n + c);
            }
        }
        if bc != k {
            for i in 0..n {
                a.swap(i * n + k, i * n + bc);
            }
        }
        let pv = p.pow(v);
        let rest = pm / pv;
        let u = (a[k * n + k] / pv) % rest;
        let uinv = inv_mod(u, rest).expect("pivot unit") as u128;
        for i in k + 1..n {
            let f = ((a[i * n + k] / pv) as u128 * uinv % rest as u128) as u64;
            if f == 0 {
                continue;
            }
            for c in k..n {
                let sub = (f as u128 * a[k * n + c] as u128 % pm as u128) as u64;
                a[i * n + c] = (a[i * n + c] + pm - sub) % pm;
            }
        }
    }
    j
}

/// Enumerates symmetric `T mod p^m` and tallies `psi(tr(B T) / p^m)` by
/// `μ(p^{-m} T)`.
pub fn character_sums(b: &HalfIntegralMatrix, p: u64, m: u32, budget: &Budget) -> Result<CharacterSums> {
    arith::check_prime(p)?;
    let n = b.n();
    let entries = n * (n + 1) / 2;
    let pm = arith::pow_u64(p, m).ok_or_else(|| budget.exceeded_by("p^m overflow"))?;
    budget.check((pm as u128).checked_pow(entries as u32))?;
    let pmb = BigInt::from(pm);
    // weight of entry (i, j) of T in tr(B T)
    let mut pos = Vec::with_capacity(entries);
    for i in 0..n {
        for j in i..n {
            let w = if i == j { &b.two_b()[i][i] / 2 } else { b.two_b()[i][j].clone() };
            pos.push((i, j, w.mod_floor(&pmb).to_u64().unwrap()));
        }
    }
    let width = (m + 1) as usize;
    let cells = (n * m as usize + 1) * width;
    let per_first = (pm as u128).pow(entries as u32 - 1) as u64;
    let tally = (0..pm)
        .into_par_iter()
        .map(|first| {
            let mut local = vec![0u64; cells];
            let mut vals = vec![0u64; entries];
            let mut a = vec![0u64; n * n];
            vals[0] = first;
            for idx in 0..per_first {
                let mut t = idx;
                for v in vals.iter_mut().skip(1) {
                    *v = t % pm;
                    t /= pm;
                }
                let mut tr = 0u128;
                for (k, &(i, j, w)) in pos.iter().enumerate() {
                    a[i * n + j] = vals[k];
                    a[j * n + i] = vals[k];
                    tr += w as u128 * vals[k] as u128;
                }
                let tr = (tr % pm as u128) as u64;
                let d = m - arith::ord_capped(tr as u128, p, m);
                let j = mu_exponent(&mut a, n, p, m, pm);
                local[j as usize * width + d as usize] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; cells],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        );
    let tallies: Vec<Vec<u64>> = tally.chunks(width).map(<[u64]>::to_vec).collect();
    for (j, row) in tallies.iter().enumerate() {
        for d in 1..width {
            let phi = (p - 1) * p.pow(d as u32 - 1);
            if row[d] % phi != 0 {
                return Err(Error::invariant(format!("tally N[{j}][{d}] = {} not divisible by {phi}", row[d])));
            }
        }
    }
    let s: Vec<i64> = tallies[..=m as usize]
        .iter()
        .map(|row| row[0] as i64 - (row.get(1).copied().unwrap_or(0) / (p - 1)) as i64)
        .collect();
    if s[0] != 1 {
        return Err(Error::invariant(format!("S_0 = {} instead of 1", s[0])));
    }
    Ok(CharacterSums { p, m, s, tallies })
}

/// Solves `sum S_j X^j * den = num * F` for `F` of degree `e_b`; rows
/// `e_b + 1..=m` are consistency checks.
pub fn recover_f(sums: &CharacterSums, gamma: &GammaFactor, n: usize, e_b: u32) -> Result<SiegelPoly> {
    let e = e_b as usize;
    if (sums.m as usize) < e + 1 {
        return Err(Error::invalid(format!("level {} too small; need at least {}", sums.m, e + 1)));
    }
    let overflow = || Error::invariant("coefficient overflow in F recovery");
    let rows = sums.m as usize;
    let mut lhs = vec![0i128; rows + 1];
    for (k, l) in lhs.iter_mut().enumerate() {
        for (i, d) in gamma.den.iter().enumerate() {
            if i <= k {
                *l = l.checked_add(d.checked_mul(sums.s[k - i] as i128).ok_or_else(overflow)?).ok_or_else(overflow)?;
            }
        }
    }
    let num_at = |i: usize| gamma.num.get(i).copied().unwrap_or(0);
    let mut f = vec![0i128; e + 1];
    for k in 0..=rows {
        let mut rhs = 0i128;
        for i in 1..=k {
            if k - i <= e {
                rhs = rhs.checked_add(num_at(i).checked_mul(f[k - i]).ok_or_else(overflow)?).ok_or_else(overflow)?;
            }
        }
        let fk = lhs[k] - rhs;
        if k <= e {
            f[k] = fk;
        } else if fk != 0 {
            return Err(Error::invariant(format!("consistency row {k} has residual {fk}")));
        }
    }
    if f[0] != 1 {
        return Err(Error::invariant(format!("F(0) = {} instead of 1", f[0])));
    }
    if f[e] == 0 {
        return Err(Error::invariant(format!("F has degree below e_B = {e}")));
    }
    let coeffs = f.into_iter().map(|c| i64::try_from(c).map_err(|_| overflow())).collect::<Result<_>>()?;
    Ok(SiegelPoly { p: sums.p, n, e_b, coeffs })
}

/// One oracle run: sums at level `m` (default `e_B + 1`) and the recovered `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleRun {
    pub sums: CharacterSums,
    pub poly: SiegelPoly,
}

pub fn siegel_oracle(b: &HalfIntegralMatrix, p: u64, level: Option<u32>, budget: &Budget) -> Result<OracleRun> {
    let inv = local_invariants(b, p)?;
    let m = level.unwrap_or(inv.e_b + 1);
    let sums = character_sums(b, p, m, budget)?;
    let gamma = gamma_factor(b.n(), inv.xi, p);
    let poly = recover_f(&sums, &gamma, b.n(), inv.e_b)?;
    Ok(OracleRun { sums, poly })
}

/// `F_p(B, X)` coefficients from `G(H; sqrt q, X)`: `f_l = a_l(sqrt q) q^{l(n+1)/2}`.
pub fn egk_to_f(g: &GPoly, q: u64) -> Result<Vec<BigInt>> {
    let vals = g.coeffs_at_sqrt(q)?;
    let root = QuadExt::sqrt(q);
    vals.iter()
        .enumerate()
        .map(|(l, a)| {
            let v = a.checked_mul(&root.pow((l * (g.n + 1)) as i64)?).expect("same field");
            match v.as_rational() {
                Some(r) if r.is_integer() => Ok(r.to_integer()),
                _ => Err(Error::invariant(format!("coefficient {l} of F is not an integer: {v}"))),
            }
        })
        .collect()
}

/// Exact comparison of the EGK prediction with the oracle polynomial.
pub fn f_tilde_compare(g: &GPoly, oracle: &SiegelPoly) -> bool {
    if g.n != oracle.n || g.e_n != oracle.e_b {
        return false;
    }
    match egk_to_f(g, oracle.p) {
        Ok(f) => f.len() == oracle.coeffs.len() && f.iter().zip(&oracle.coeffs).all(|(x, y)| *x == BigInt::from(*y)),
        Err(_) => false,
    }
}

/// `F = sum_{i <= e} (p X)^i`, the closed form for `n = 1`.
pub fn closed_form_n1(p: u64, e: u32) -> Vec<BigInt> {
    (0..=e).map(|i| arith::pow_big(p, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egk::{f_poly, NaiveEGKDatum};

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn sums_small() {
        let b = HalfIntegralMatrix::diag(&[1]).unwrap();
        assert_eq!(character_sums(&b, 3, 1, &budget()).unwrap().s, vec![1, -1]);
        let b = HalfIntegralMatrix::diag(&[3]).unwrap();
        assert_eq!(character_sums(&b, 3, 2, &budget()).unwrap().s, vec![1, 2, -3]);
    }

    #[test]
    fn gamma() {
        assert_eq!(gamma_factor(1, 1, 3), GammaFactor { num: vec![1, -1], den: vec![1] });
        assert_eq!(gamma_factor(2, 0, 3), GammaFactor { num: vec![1, -1, -9, 9], den: vec![1] });
        assert_eq!(gamma_factor(2, 1, 3).den, vec![1, -3]);
    }

    #[test]
    fn recover() {
        let b = HalfIntegralMatrix::diag(&[1]).unwrap();
        assert_eq!(siegel_oracle(&b, 3, None, &budget()).unwrap().poly.coeffs, vec![1]);
        let b = HalfIntegralMatrix::diag(&[3]).unwrap();
        let run = siegel_oracle(&b, 3, None, &budget()).unwrap();
        assert_eq!(run.poly.coeffs, vec![1, 3]);
        assert_eq!(run.poly.to_string(), "1 + 3*X");
        let b = HalfIntegralMatrix::diag(&[1, 1]).unwrap();
        assert_eq!(siegel_oracle(&b, 5, None, &budget()).unwrap().poly.coeffs, vec![1]);
        assert!(siegel_oracle(&b, 5, Some(0), &budget()).is_err());
    }

    #[test]
    fn compare_with_egk() {
        let b = HalfIntegralMatrix::diag(&[3]).unwrap();
        let run = siegel_oracle(&b, 3, None, &budget()).unwrap();
        let g = f_poly(&NaiveEGKDatum::new(vec![1], vec![1]).unwrap());
        assert!(f_tilde_compare(&g, &run.poly));
        let b = HalfIntegralMatrix::diag(&[1, 3]).unwrap();
        let run = siegel_oracle(&b, 3, None, &budget()).unwrap();
        assert_eq!(run.poly.coeffs, vec![1]);
        let g = f_poly(&NaiveEGKDatum::new(vec![0, 1], vec![1, 0]).unwrap());
        assert!(f_tilde_compare(&g, &run.poly));
        let b = HalfIntegralMatrix::diag(&[1, 1]).unwrap();
        for level in [None, Some(2), Some(3)] {
            let run = siegel_oracle(&b, 2, level, &budget()).unwrap();
            assert!(f_tilde_compare(&g, &run.poly));
        }
    }

    #[test]
    fn smith_valuations() {
        // diag(p, p^2) mod p^3 has μ-exponent (3 - 1) + (3 - 2)
        let mut a = vec![3, 0, 0, 9];
        assert_eq!(mu_exponent(&mut a, 2, 3, 3, 27), 3);
        let mut a = vec![0, 3, 3, 0];
        assert_eq!(mu_exponent(&mut a, 2, 3, 3, 27), 4);
        let mut a = vec![2, 1, 1, 2];
        assert_eq!(mu_exponent(&mut a, 2, 3, 2, 9), 3);
    }
}
