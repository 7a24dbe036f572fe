//! Gross–Keating invariants, the e-ledger and the minor valuation bounds.

use std::collections::HashSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, ord, pow_big};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::quadratic::{local_invariants, HalfIntegralMatrix, LocalInvariants};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    Exact,
    SearchCertified,
    SearchUnverified,
}

impl Certificate {
    pub fn is_trusted(self) -> bool {
        self != Certificate::SearchUnverified
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Exact => "exact",
            Certificate::SearchCertified => "search-certified",
            Certificate::SearchUnverified => "search-unverified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GKInvariant {
    pub a: Vec<u32>,
    pub e_ledger: Vec<u32>,
    pub certificate: Certificate,
}

/// `(exponent, unit)` pairs of a diagonal Jordan form over `Z_p`, p odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanForm {
    pub p: u64,
    pub precision: u32,
    pub blocks: Vec<(u32, BigInt)>,
}

impl JordanForm {
    pub fn exponents(&self) -> Vec<u32> {
        self.blocks.iter().map(|b| b.0).collect()
    }
}

/// `e_i`: partial sums, rounded down to even at even indices.
pub fn ei_ledger(a: &[u32]) -> Vec<u32> {
    let mut s = 0;
    a.iter()
        .enumerate()
        .map(|(i, &x)| {
            s += x;
            if (i + 1) % 2 == 0 {
                s - s % 2
            } else {
                s
            }
        })
        .collect()
}

/// `a in S(B)`: `ord b_ii >= a_i` and `2 ord(2 b_ij) >= a_i + a_j`.
pub fn s_membership(b: &HalfIntegralMatrix, p: u64, a: &[u32]) -> bool {
    let m = b.two_b();
    let n = b.n();
    if a.len() != n {
        return false;
    }
    for i in 0..n {
        let bii = &m[i][i] / 2;
        if let Some(v) = ord(&bii, p) {
            if v < a[i] {
                return false;
            }
        }
        for j in i + 1..n {
            if let Some(v) = ord(&m[i][j], p) {
                if 2 * v < a[i] + a[j] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn gr_at_p(b: &HalfIntegralMatrix, p: u64, r: usize) -> Result<u32> {
    b.gr_at_p(p, r)
}

fn vcap(x: &BigInt, p: u64, cap: u32) -> u32 {
    ord(x, p).map_or(cap, |v| v.min(cap))
}

/// Symmetric elimination over `Z/p^precision` with a least-valuation pivot.
pub fn jordan_odd(b: &HalfIntegralMatrix, p: u64, precision: u32) -> Result<JordanForm> {
    arith::check_prime(p)?;
    if p == 2 {
        return Err(Error::invalid("jordan_odd needs an odd prime"));
    }
    let n = b.n();
    let q = pow_big(p, precision);
    let mut m: Vec<Vec<BigInt>> = b.two_b().iter().map(|r| r.iter().map(|x| x.mod_floor(&q)).collect()).collect();
    let mut blocks = Vec::with_capacity(n);
    for k in 0..n {
        let diag = (k..n).map(|i| (vcap(&m[i][i], p, precision), i)).min().unwrap();
        let off = (k..n).tuple_combinations().map(|(i, j)| (vcap(&m[i][j], p, precision), i, j)).min();
        let mut piv = diag.1;
        let mut best = diag.0;
        if let Some((v, i, j)) = off {
            if v < diag.0 {
                for c in 0..n {
                    let t = &m[i][c] + &m[j][c];
                    m[i][c] = t.mod_floor(&q);
                }
                for r in 0..n {
                    let t = &m[r][i] + &m[r][j];
                    m[r][i] = t.mod_floor(&q);
                }
                piv = i;
                best = vcap(&m[i][i], p, precision);
            }
        }
        if best >= precision {
            return Err(Error::Precision(format!("pivot valuation reaches working precision {precision}")));
        }
        m.swap(k, piv);
        for row in m.iter_mut() {
            row.swap(k, piv);
        }
        let pv = pow_big(p, best);
        let qk = pow_big(p, precision - best);
        let unit = (&m[k][k] / &pv).mod_floor(&qk);
        let inv = arith::inv_mod_big(&unit, &qk).expect("unit");
        for l in k + 1..n {
            let c = ((&m[l][k] / &pv) * &inv).mod_floor(&qk);
            if c.is_zero() {
                continue;
            }
            for col in 0..n {
                let t = &m[l][col] - &c * &m[k][col];
                m[l][col] = t.mod_floor(&q);
            }
            for row in 0..n {
                let t = &m[row][l] - &c * &m[row][k];
                m[row][l] = t.mod_floor(&q);
            }
        }
        let half = arith::inv_mod_big(&BigInt::from(2), &qk).expect("p odd");
        blocks.push((best, (unit * half).mod_floor(&qk)));
    }
    blocks.sort_by_key(|b| b.0);
    let total: u32 = blocks.iter().map(|b| b.0).sum();
    if Some(total) != ord(&b.det2b(), p) {
        return Err(Error::Precision(format!("working precision {precision} too small")));
    }
    Ok(JordanForm { p, precision, blocks })
}

/// Gross–Keating invariant with a correctness certificate.
pub fn gk_invariant(b: &HalfIntegralMatrix, p: u64) -> Result<GKInvariant> {
    arith::check_prime(p)?;
    let n = b.n();
    let inv = local_invariants(b, p)?;
    let (a, certificate) = if p != 2 {
        let prec = ord(&b.det2b(), p).unwrap() + 3;
        (jordan_odd(b, p, prec)?.exponents(), Certificate::Exact)
    } else if n == 1 {
        (vec![ord(&(&b.two_b()[0][0] / 2), 2).unwrap()], Certificate::Exact)
    } else if n == 2 {
        let a1 = b.gr_at_p(2, 1)?;
        let total = inv.e_b + u32::from(inv.xi == 0);
        if total < a1 {
            return Err(Error::invariant("dyadic closed form gives a decreasing sequence"));
        }
        (vec![a1, total - a1], Certificate::Exact)
    } else {
        dyadic_search(b, &inv)?
    };
    let e_ledger = ei_ledger(&a);
    if certificate.is_trusted() && e_ledger[n - 1] != inv.e_b {
        return Err(Error::invariant(format!("ledger e_n = {} differs from e_B = {}", e_ledger[n - 1], inv.e_b)));
    }
    Ok(GKInvariant { a, e_ledger, certificate })
}

/// Lexicographically greatest sequence allowed by the minor bounds:
/// nondecreasing, `c_1 = g_1`, `e_r(c) <= g_r` for `r < n`, and total
/// `e_B` or `e_B + 1` according to the splitting type.
pub fn dyadic_upper_bound(b: &HalfIntegralMatrix, inv: &LocalInvariants) -> Result<Option<Vec<u32>>> {
    let n = b.n();
    let g: Vec<u32> = (1..n).map(|r| b.gr_at_p(inv.p, r)).collect::<Result<_>>()?;
    let total = inv.e_b + u32::from(n.is_multiple_of(2) && inv.xi == 0);
    fn rec(c: &mut Vec<u32>, n: usize, g: &[u32], total: u32) -> bool {
        let k = c.len();
        let sum: u32 = c.iter().sum();
        if k == n {
            return sum == total;
        }
        let lo = c.last().copied().unwrap_or(0);
        let hi = if k == 0 { g[0] } else { total.saturating_sub(sum) };
        for v in (lo..=hi).rev() {
            if k == 0 && v != g[0] {
                continue;
            }
            let s = sum + v;
            let rem = (n - k - 1) as u32;
            if s + rem * v > total {
                continue;
            }
            if k + 1 < n {
                let e = if (k + 1).is_multiple_of(2) { s - s % 2 } else { s };
                if e > g[k] {
                    continue;
                }
            }
            c.push(v);
            if rec(c, n, g, total) {
                return true;
            }
            c.pop();
        }
        false
    }
    let mut c = Vec::with_capacity(n);
    Ok(rec(&mut c, n, &g, total).then_some(c))
}

/// State of the dyadic search: `2B` modulo `2^bits`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct DyadicState(Vec<u64>);

struct DyadicCtx {
    n: usize,
    bits: u32,
    mask: u64,
    cap: u32,
    perms: Vec<Vec<usize>>,
}

impl DyadicCtx {
    fn tz(&self, x: u64) -> u32 {
        let x = x & self.mask;
        if x == 0 {
            self.bits
        } else {
            x.trailing_zeros()
        }
    }

    /// Greedy lexicographic maximum of `S(M)` over all index orders.
    fn score(&self, s: &DyadicState) -> Vec<u32> {
        let n = self.n;
        let m = &s.0;
        let mut best: Vec<u32> = Vec::new();
        for perm in &self.perms {
            let mut a: Vec<u32> = Vec::with_capacity(n);
            for k in 0..n {
                let mut v = self.cap;
                for (ii, &i) in perm.iter().enumerate().skip(k) {
                    v = v.min(self.tz(m[i * n + i]).saturating_sub(1));
                    for &j in &perm[ii + 1..] {
                        v = v.min(self.tz(m[i * n + j]));
                    }
                    for (jj, &j) in perm[..k].iter().enumerate() {
                        v = v.min((2 * self.tz(m[i * n + j])).saturating_sub(a[jj]));
                    }
                }
                if let Some(&prev) = a.last() {
                    v = v.max(prev);
                }
                a.push(v);
            }
            if a > best {
                best = a;
            }
        }
        best
    }

    /// `e_i <- e_i + c e_j`.
    fn apply(&self, s: &DyadicState, i: usize, j: usize, c: u64) -> DyadicState {
        let n = self.n;
        let mut m = s.0.clone();
        for col in 0..n {
            m[i * n + col] = m[i * n + col].wrapping_add(c.wrapping_mul(m[j * n + col])) & self.mask;
        }
        for row in 0..n {
            m[row * n + i] = m[row * n + i].wrapping_add(c.wrapping_mul(m[row * n + j])) & self.mask;
        }
        DyadicState(m)
    }

    fn moves(&self, s: &DyadicState) -> Vec<DyadicState> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                for k in 0..self.bits.saturating_sub(1) {
                    let c = 1u64 << k;
                    out.push(self.apply(s, i, j, c));
                    out.push(self.apply(s, i, j, c.wrapping_neg() & self.mask));
                }
            }
        }
        out
    }

    fn potential(&self, s: &DyadicState) -> u32 {
        let n = self.n;
        let lim = self.cap + 2;
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| self.tz(s.0[i * n + j]).min(lim)).sum()
    }
}

fn reduce_state(m: &[Vec<BigInt>], bits: u32) -> DyadicState {
    let q = pow_big(2, bits);
    DyadicState(m.iter().flatten().map(|x| x.mod_floor(&q).to_u64().unwrap()).collect())
}

/// Block splitting into 1x1 and 2x2 pieces by integral elimination mod `2^k`.
fn dyadic_split(b: &HalfIntegralMatrix, k: u32) -> Vec<Vec<BigInt>> {
    let n = b.n();
    let q = pow_big(2, k);
    let md = |x: BigInt| x.mod_floor(&q);
    let mut m: Vec<Vec<BigInt>> = b.two_b().iter().map(|r| r.iter().map(|x| x.mod_floor(&q)).collect()).collect();
    let vb = |x: &BigInt| vcap(x, 2, k);
    let swap = |m: &mut Vec<Vec<BigInt>>, a: usize, c: usize| {
        m.swap(a, c);
        for row in m.iter_mut() {
            row.swap(a, c);
        }
    };
    // e_l <- e_l - x e_src
    let sub = |m: &mut Vec<Vec<BigInt>>, l: usize, src: usize, x: &BigInt| {
        for col in 0..n {
            let t = &m[l][col] - x * &m[src][col];
            m[l][col] = md(t);
        }
        for row in 0..n {
            let t = &m[row][l] - x * &m[row][src];
            m[row][l] = md(t);
        }
    };
    let mut s = 0;
    while s < n {
        let diag = (s..n).map(|i| (vb(&m[i][i]), i)).min().unwrap();
        let off = (s..n).tuple_combinations().map(|(i, j)| (vb(&m[i][j]), i, j)).min();
        match off {
            Some((w, i, j)) if w + 1 < diag.0 && w < k => {
                swap(&mut m, s, i);
                let j = if j == s { i } else { j };
                swap(&mut m, s + 1, j);
                let (a, bb, d) = (m[s][s].clone(), m[s][s + 1].clone(), m[s + 1][s + 1].clone());
                let delta = &a * &d - &bb * &bb;
                let dv = vb(&delta);
                if dv >= k {
                    break;
                }
                let kq = pow_big(2, k - dv);
                let unit = (&delta >> dv).mod_floor(&kq);
                let inv = arith::inv_mod_big(&unit, &kq).unwrap();
                for l in s + 2..n {
                    let (u1, u2) = (m[s][l].clone(), m[s + 1][l].clone());
                    let nx = &d * &u1 - &bb * &u2;
                    let ny = &a * &u2 - &bb * &u1;
                    let x = ((nx >> dv) * &inv).mod_floor(&kq);
                    let y = ((ny >> dv) * &inv).mod_floor(&kq);
                    sub(&mut m, l, s, &x);
                    sub(&mut m, l, s + 1, &y);
                }
                s += 2;
            }
            _ => {
                let (w, i) = diag;
                if w >= k {
                    break;
                }
                swap(&mut m, s, i);
                let kq = pow_big(2, k - w);
                let unit = (&m[s][s] >> w).mod_floor(&kq);
                let inv = arith::inv_mod_big(&unit, &kq).unwrap();
                for l in s + 1..n {
                    let x = ((&m[l][s] >> w) * &inv).mod_floor(&kq);
                    sub(&mut m, l, s, &x);
                }
                s += 1;
            }
        }
    }
    m
}

const BEAM_WIDTH: usize = 48;
const MAX_DEPTH: usize = 40;
const STALL_LIMIT: usize = 12;

fn dyadic_search(b: &HalfIntegralMatrix, inv: &LocalInvariants) -> Result<(Vec<u32>, Certificate)> {
    let n = b.n();
    let bits = inv.e_b + 3;
    if bits > 62 {
        return Err(Error::invalid(format!("2-adic discriminant exponent {} too large for the search", inv.e_b)));
    }
    let ctx =
        DyadicCtx { n, bits, mask: (1u64 << bits) - 1, cap: inv.e_b + 1, perms: (0..n).permutations(n).collect() };
    let target = dyadic_upper_bound(b, inv)?;
    let det_ord = ord(&b.det2b(), 2).unwrap();
    let split = dyadic_split(b, bits + 2 * det_ord + 4);
    let mut frontier: Vec<DyadicState> = vec![reduce_state(b.two_b(), bits), reduce_state(&split, bits)];
    frontier.sort();
    frontier.dedup();
    let mut seen: HashSet<DyadicState> = frontier.iter().cloned().collect();
    let mut best = frontier.iter().map(|s| ctx.score(s)).max().unwrap();
    let mut stall = 0;
    for _ in 0..MAX_DEPTH {
        if Some(&best) == target.as_ref() || stall >= STALL_LIMIT {
            break;
        }
        let mut cand: Vec<DyadicState> = frontier.par_iter().flat_map_iter(|s| ctx.moves(s)).collect();
        cand.sort();
        cand.dedup();
        cand.retain(|s| !seen.contains(s));
        if cand.is_empty() {
            break;
        }
        let mut scored: Vec<(Vec<u32>, u32, DyadicState)> =
            cand.into_par_iter().map(|s| (ctx.score(&s), ctx.potential(&s), s)).collect();
        scored.sort_by(|x, y| y.0.cmp(&x.0).then(y.1.cmp(&x.1)).then(x.2.cmp(&y.2)));
        scored.truncate(BEAM_WIDTH);
        if scored[0].0 > best {
            best = scored[0].0.clone();
            stall = 0;
        } else {
            stall += 1;
        }
        frontier = scored.into_iter().map(|t| t.2).collect();
        seen.extend(frontier.iter().cloned());
    }
    let cert =
        if Some(&best) == target.as_ref() { Certificate::SearchCertified } else { Certificate::SearchUnverified };
    Ok((best, cert))
}

/// `d_r`: least valuation of `2^(2[r/2]) det B[X]` over `X` in `M_{n,r}(Z_p)`,
/// clamped at `cutoff`, by enumerating `X` with an identity `r x r` row block
/// and the remaining rows modulo `p^cutoff`.
pub fn dr_enumerate(b: &HalfIntegralMatrix, p: u64, r: usize, cutoff: u32, budget: &Budget) -> Result<u32> {
    arith::check_prime(p)?;
    let n = b.n();
    if r == 0 || r > n {
        return Err(Error::invalid(format!("r = {r} out of range 1..={n}")));
    }
    if cutoff == 0 {
        return Ok(0);
    }
    let free = ((n - r) * r) as u32;
    let base = arith::pow_u64(p, cutoff).ok_or_else(|| budget.exceeded_by("p^cutoff overflow"))?;
    let per = (base as u128).checked_pow(free);
    let subsets: Vec<Vec<usize>> = (0..n).combinations(r).collect();
    let total = per.and_then(|v| v.checked_mul(subsets.len() as u128));
    budget.check(total)?;
    let extra = u32::from(p == 2 && r % 2 == 1);
    let modulus = (p as u128).pow(cutoff + extra);
    let bm = BigInt::from(modulus);
    let m: Vec<u128> = b.two_b().iter().flatten().map(|x| x.mod_floor(&bm).to_u128().unwrap()).collect();
    let per = per.unwrap();
    let chunks = base.min(per as u64).max(1);
    let work: Vec<(usize, u64)> = (0..subsets.len()).flat_map(|s| (0..chunks).map(move |c| (s, c))).collect();
    let best = work
        .par_iter()
        .map(|&(si, first)| {
            let rows = &subsets[si];
            let others: Vec<usize> = (0..n).filter(|i| !rows.contains(i)).collect();
            let mut best = cutoff;
            let inner = if free == 0 { 1 } else { per / base as u128 };
            if free == 0 && first > 0 {
                return best;
            }
            let mut x = vec![0u128; n * r];
            for (c, &row) in rows.iter().enumerate() {
                x[row * r + c] = 1;
            }
            for idx in 0..inner {
                let mut t = idx;
                let mut slot = 0usize;
                for &row in &others {
                    for c in 0..r {
                        let v = if slot == 0 {
                            first as u128
                        } else {
                            let v = t % base as u128;
                            t /= base as u128;
                            v
                        };
                        x[row * r + c] = v;
                        slot += 1;
                    }
                }
                let d = gram_det_mod(&m, &x, n, r, modulus);
                let v = arith::ord_capped(d, p, cutoff + extra).saturating_sub(extra).min(cutoff);
                if v < best {
                    best = v;
                    if best == 0 {
                        break;
                    }
                }
            }
            best
        })
        .min()
        .unwrap_or(cutoff);
    Ok(best)
}

/// `det(X^T M X) mod modulus` for small `r`.
fn gram_det_mod(m: &[u128], x: &[u128], n: usize, r: usize, modulus: u128) -> u128 {
    let mut mx = vec![0u128; n * r];
    for i in 0..n {
        for c in 0..r {
            let mut s = 0u128;
            for k in 0..n {
                s = (s + m[i * n + k] * x[k * r + c]) % modulus;
            }
            mx[i * r + c] = s;
        }
    }
    let mut g = vec![0u128; r * r];
    for a in 0..r {
        for c in 0..r {
            let mut s = 0u128;
            for k in 0..n {
                s = (s + x[k * r + a] * mx[k * r + c]) % modulus;
            }
            g[a * r + c] = s;
        }
    }
    det_mod(&g, r, modulus)
}

fn det_mod(g: &[u128], r: usize, modulus: u128) -> u128 {
    if r == 1 {
        return g[0] % modulus;
    }
    let mut acc = 0u128;
    for c in 0..r {
        let minor: Vec<u128> = (1..r)
            .flat_map(|i| (0..r).filter(move |&j| j != c).map(move |j| (i, j)))
            .map(|(i, j)| g[i * r + j])
            .collect();
        let term = g[c] * det_mod(&minor, r - 1, modulus) % modulus;
        acc = if c % 2 == 0 { (acc + term) % modulus } else { (acc + modulus - term) % modulus };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[i64]) -> HalfIntegralMatrix {
        HalfIntegralMatrix::diag(d).unwrap()
    }

    fn m(rows: &[&[i64]]) -> HalfIntegralMatrix {
        HalfIntegralMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn ledger() {
        assert_eq!(ei_ledger(&[0, 1, 2]), vec![0, 0, 3]);
        assert_eq!(ei_ledger(&[1, 1]), vec![1, 2]);
        assert_eq!(ei_ledger(&[0, 0]), vec![0, 0]);
    }

    #[test]
    fn membership() {
        assert!(s_membership(&diag(&[1, 3]), 3, &[0, 1]));
        assert!(!s_membership(&diag(&[1, 3]), 3, &[1, 1]));
        assert!(s_membership(&m(&[&[2, 1], &[1, 2]]), 2, &[0, 0]));
        assert!(s_membership(&m(&[&[2, 2], &[2, 4]]), 2, &[0, 1]));
        assert!(!s_membership(&m(&[&[2, 1], &[1, 4]]), 2, &[0, 1]));
    }

    #[test]
    fn jordan() {
        let j = jordan_odd(&diag(&[1, 3, 9]), 3, 8).unwrap();
        assert_eq!(j.exponents(), vec![0, 1, 2]);
        let j = jordan_odd(&m(&[&[2, 1], &[1, 2]]), 3, 4).unwrap();
        assert_eq!(j.exponents(), vec![0, 1]);
        let j = jordan_odd(&diag(&[2, 6, 18]), 3, 8).unwrap();
        assert_eq!(j.exponents(), vec![0, 1, 2]);
        let off = m(&[&[0, 3], &[3, 0]]);
        assert_eq!(jordan_odd(&off, 3, 5).unwrap().exponents(), vec![1, 1]);
        assert!(matches!(jordan_odd(&diag(&[1, 27]), 3, 3), Err(Error::Precision(_))));
    }

    #[test]
    fn gk_examples() {
        let g = gk_invariant(&diag(&[1, 3, 9]), 3).unwrap();
        assert_eq!((g.a.clone(), g.e_ledger.clone()), (vec![0, 1, 2], vec![0, 0, 3]));
        assert_eq!(g.certificate, Certificate::Exact);
        assert_eq!(gk_invariant(&m(&[&[2, 1], &[1, 2]]), 2).unwrap().a, vec![0, 0]);
        assert_eq!(gk_invariant(&diag(&[1, 1]), 2).unwrap().a, vec![0, 1]);
        assert_eq!(gk_invariant(&diag(&[12]), 2).unwrap().a, vec![2]);
    }

    #[test]
    fn dyadic_three() {
        let g = gk_invariant(&diag(&[1, 1, 1]), 2).unwrap();
        assert_eq!(g.a, vec![0, 1, 1]);
        assert!(g.certificate.is_trusted());
        let g = gk_invariant(&m(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 2]]), 2).unwrap();
        assert_eq!(g.a, vec![0, 0, 0]);
        assert!(g.certificate.is_trusted());
    }

    #[test]
    fn minors_and_enumeration() {
        let d = diag(&[1, 3, 9]);
        let budget = Budget::new(10_000_000);
        assert_eq!(gr_at_p(&d, 3, 2).unwrap(), 1);
        assert_eq!(dr_enumerate(&d, 3, 2, 2, &budget).unwrap(), 1);
        assert_eq!(dr_enumerate(&d, 3, 1, 1, &budget).unwrap(), 0);
        assert_eq!(dr_enumerate(&diag(&[1, 1]), 5, 1, 2, &budget).unwrap(), 0);
        let e = diag(&[1, 1, 1]);
        for r in 1..3 {
            let g = gr_at_p(&e, 2, r).unwrap();
            assert_eq!(dr_enumerate(&e, 2, r, g + 1, &budget).unwrap(), g);
        }
        assert!(matches!(dr_enumerate(&d, 3, 1, 9, &Budget::new(100)), Err(Error::Budget { .. })));
    }
}
