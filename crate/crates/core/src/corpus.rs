//! Seeded generators for matrix corpora and random naive EGK data.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::egk::{sign_candidates, NaiveEGKDatum};
use crate::error::{Error, Result};
use crate::quadratic::{local_invariants, HalfIntegralMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random unimodular matrix: a shuffled product of elementary shears.
fn unimodular(r: &mut ChaCha8Rng, n: usize, steps: usize) -> Vec<Vec<BigInt>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..steps {
        let i = r.gen_range(0..n);
        let j = r.gen_range(0..n);
        if i == j {
            continue;
        }
        let c = *[-1i64, 1].choose(r).unwrap();
        for row in u.iter_mut() {
            row[j] += c * row[i];
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    perm.iter().map(|&k| u[k].iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Block-diagonal `2B` from 1x1 blocks `2d` and 2x2 blocks `[[2a, 1], [1, 2c]]`.
fn seed_matrix(r: &mut ChaCha8Rng, n: usize, bound: i64, scaled: bool) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    let mut i = 0;
    while i < n {
        if i + 1 < n && r.gen_bool(0.35) {
            let a = r.gen_range(1..=bound);
            let c = r.gen_range(1..=bound);
            m[i][i] = 2 * a;
            m[i + 1][i + 1] = 2 * c;
            m[i][i + 1] = 1;
            m[i + 1][i] = 1;
            i += 2;
        } else {
            m[i][i] = 2 * r.gen_range(1..=bound);
            i += 1;
        }
    }
    if scaled {
        let p = *[2i64, 3].choose(r).unwrap();
        let k = r.gen_range(0..n);
        for j in 0..n {
            m[k][j] *= p;
            m[j][k] *= p;
        }
    }
    m
}

/// `count` positive definite matrices of size `n`, byte-identical for a
/// given seed. Every fifth matrix carries a block scaled by `p^2`.
pub fn gen_corpus(seed: u64, count: usize, n: usize, entry_bound: i64) -> Result<Vec<HalfIntegralMatrix>> {
    if !(1..=4).contains(&n) {
        return Err(Error::invalid(format!("corpus size n = {n} must be 1..=4")));
    }
    if entry_bound < 1 {
        return Err(Error::invalid("entry bound must be positive"));
    }
    let mut r = rng(seed);
    (0..count)
        .map(|idx| {
            let seed = seed_matrix(&mut r, n, entry_bound, idx % 5 == 0);
            let two_b = seed.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let base = HalfIntegralMatrix::new(two_b)?;
            let steps = r.gen_range(0..=n + 1);
            base.transform(&unimodular(&mut r, n, steps))
        })
        .collect()
}

/// Distinct positive definite `2 x 2` matrices with `e_B <= max_e` at `p`,
/// spread over the attainable (even) values of `e_B`.
pub fn local_corpus(seed: u64, p: u64, max_e: u32, count: usize) -> Result<Vec<HalfIntegralMatrix>> {
    let mut r = rng(seed ^ p.wrapping_mul(0x9e37_79b9));
    let pi = p as i64;
    let per = count.div_ceil(max_e as usize / 2 + 1);
    let mut seen = BTreeSet::new();
    let mut by_e = vec![Vec::new(); max_e as usize / 2 + 1];
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() + by_e.iter().map(Vec::len).sum::<usize>() < count {
        attempts += 1;
        if attempts > 200_000 {
            return Err(Error::invalid("local corpus generation did not converge"));
        }
        let ea = r.gen_range(0..=max_e);
        let ec = r.gen_range(0..=max_e);
        let a = pi.pow(ea) * r.gen_range(1..=4);
        let c = pi.pow(ec) * r.gen_range(1..=4);
        let bb = r.gen_range(-2..=2) * pi.pow(r.gen_range(0..=max_e));
        if 4 * a * c - bb * bb <= 0 || a > 400 || c > 400 {
            continue;
        }
        let b = HalfIntegralMatrix::from_i64(&[&[2 * a, bb], &[bb, 2 * c]])?;
        let e = local_invariants(&b, p)?.e_b;
        if e > max_e || !seen.insert(b.to_json()) {
            continue;
        }
        let slot = &mut by_e[e as usize / 2];
        if slot.len() < per {
            slot.push(b);
        } else if attempts > 20_000 {
            out.push(b);
        }
    }
    let mut all: Vec<HalfIntegralMatrix> = by_e.into_iter().flatten().chain(out).collect();
    all.truncate(count);
    Ok(all)
}

/// Random naive EGK datum with `n <= n_max` and `a_i <= a_max`; the sign
/// vector is uniform among the admissible ones.
pub fn random_negk(r: &mut ChaCha8Rng, n_max: usize, a_max: u32) -> NaiveEGKDatum {
    let n = r.gen_range(1..=n_max);
    let mut a: Vec<u32> = (0..n).map(|_| r.gen_range(0..=a_max)).collect();
    a.sort_unstable();
    let cands = sign_candidates(&a);
    let eps = cands.choose(r).expect("a nonempty candidate set").clone();
    NaiveEGKDatum::new(a, eps).expect("candidates are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::global_discriminant;

    #[test]
    fn deterministic_and_valid() {
        let a = gen_corpus(1, 10, 2, 6).unwrap();
        let b = gen_corpus(1, 10, 2, 6).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(HalfIntegralMatrix::is_positive_definite));
        assert!(a.iter().any(|m| global_discriminant(m).unwrap().f_b > BigInt::from(1)));
        for n in 1..=4 {
            assert_eq!(gen_corpus(7, 12, n, 5).unwrap().len(), 12);
        }
        assert!(gen_corpus(1, 1, 5, 5).is_err());
    }

    #[test]
    fn local_corpus_spread() {
        for (p, e) in [(2, 4), (3, 3), (5, 2)] {
            let c = local_corpus(11, p, e, 50).unwrap();
            assert_eq!(c.len(), 50);
            let es: BTreeSet<u32> = c.iter().map(|b| local_invariants(b, p).unwrap().e_b).collect();
            assert_eq!(es, (0..=e).step_by(2).collect());
        }
    }

    #[test]
    fn random_data() {
        let mut r = rng(3);
        let data: Vec<_> = (0..200).map(|_| random_negk(&mut r, 6, 5)).collect();
        assert!(data.iter().any(|d| d.n() % 2 == 1 && d.zeta() == -1));
        assert!(data.iter().any(|d| d.n() == 6));
    }
}
