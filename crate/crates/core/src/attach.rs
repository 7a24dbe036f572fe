//! Attaching a naive EGK datum to a matrix at a prime.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, ord, pow_big};
use crate::budget::Budget;
use crate::egk::{f_poly, sign_candidates, NaiveEGKDatum};
use crate::error::{Error, Result};
use crate::gross_keating::{gk_invariant, jordan_odd, Certificate};
use crate::oracle::{f_tilde_compare, siegel_oracle, SiegelPoly};
use crate::quadratic::HalfIntegralMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Forced,
    FastPath,
    OracleMatched,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Forced => "forced",
            Method::FastPath => "fast-path",
            Method::OracleMatched => "oracle-matched",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttachmentResult {
    pub datum: NaiveEGKDatum,
    pub method: Method,
    pub certificate: Certificate,
    pub oracle: Option<SiegelPoly>,
}

#[derive(Clone, Copy, Debug)]
pub struct AttachOptions {
    /// Run the oracle even when the datum is determined without it.
    pub verify: bool,
    pub budget: Budget,
    pub use_cache: bool,
}

impl Default for AttachOptions {
    fn default() -> Self {
        Self { verify: false, budget: Budget::default(), use_cache: true }
    }
}

pub fn enumerate_candidates(a: &[u32]) -> Vec<NaiveEGKDatum> {
    sign_candidates(a).into_iter().filter_map(|eps| NaiveEGKDatum::new(a.to_vec(), eps).ok()).collect()
}

/// Signs at even indices `i` read off the Jordan splitting at an odd prime:
/// `xi` of the leading `i x i` constituent, when index `i` ends a Jordan
/// constituent and `a_1 + ... + a_i` is even.
pub fn fast_eps_even_odd_p(b: &HalfIntegralMatrix, p: u64) -> Result<Vec<Option<i8>>> {
    arith::check_prime(p)?;
    if p == 2 {
        return Err(Error::invalid("the fast path needs an odd prime"));
    }
    let n = b.n();
    let prec = ord(&b.det2b(), p).ok_or(Error::Degenerate)? + 3;
    let jf = jordan_odd(b, p, prec)?;
    let mut out = vec![None; n];
    let mut v = 0u32;
    let mut unit = BigInt::from(1);
    for i in 1..=n {
        let (e, u) = &jf.blocks[i - 1];
        v += e;
        unit *= u;
        let boundary = i == n || jf.blocks[i].0 > *e;
        if i % 2 == 0 && v.is_multiple_of(2) && boundary {
            let d = if (i / 2) % 2 == 1 { -&unit } else { unit.clone() };
            out[i - 1] = Some(arith::legendre(&d, p));
        }
    }
    Ok(out)
}

type CacheKey = (u64, usize, Vec<BigInt>, bool);

fn cache() -> &'static RwLock<HashMap<CacheKey, AttachmentResult>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, AttachmentResult>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cache_key(b: &HalfIntegralMatrix, p: u64, verify: bool) -> Result<CacheKey> {
    let v = ord(&b.det2b(), p).ok_or(Error::Degenerate)?;
    let m = pow_big(p, v + 4);
    let flat = b.two_b().iter().flatten().map(|x| x.mod_floor(&m)).collect();
    Ok((p, b.n(), flat, verify))
}

pub fn attach(b: &HalfIntegralMatrix, p: u64, opts: &AttachOptions) -> Result<AttachmentResult> {
    let key = cache_key(b, p, opts.verify)?;
    if opts.use_cache {
        if let Some(hit) = cache().read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
    }
    let res = attach_uncached(b, p, opts)?;
    if opts.use_cache {
        cache().write().expect("cache lock").insert(key, res.clone());
    }
    Ok(res)
}

fn attach_uncached(b: &HalfIntegralMatrix, p: u64, opts: &AttachOptions) -> Result<AttachmentResult> {
    let gk = gk_invariant(b, p)?;
    if !gk.certificate.is_trusted() {
        return Err(Error::invalid(format!("GK invariant at p = {p} is not certified ({})", gk.certificate.as_str())));
    }
    let all = enumerate_candidates(&gk.a);
    let (cands, method) = if all.len() == 1 {
        (all, Method::Forced)
    } else if p != 2 {
        let fast = fast_eps_even_odd_p(b, p)?;
        let kept: Vec<_> =
            all.into_iter().filter(|d| d.eps().iter().zip(&fast).all(|(e, f)| f.is_none_or(|f| f == *e))).collect();
        (kept, Method::FastPath)
    } else {
        (all, Method::OracleMatched)
    };
    if cands.is_empty() {
        return Err(Error::invariant(format!("no EGK candidate survives for a = {:?}", gk.a)));
    }
    if cands.len() == 1 && !opts.verify {
        return Ok(AttachmentResult {
            datum: cands.into_iter().next().unwrap(),
            method,
            certificate: gk.certificate,
            oracle: None,
        });
    }
    let run = siegel_oracle(b, p, None, &opts.budget)?;
    let matches: Vec<bool> = cands.par_iter().map(|d| f_tilde_compare(&f_poly(d), &run.poly)).collect();
    let idx = matches
        .iter()
        .position(|&m| m)
        .ok_or_else(|| Error::invariant(format!("no EGK candidate reproduces the local Siegel series {}", run.poly)))?;
    let method = if cands.len() == 1 { method } else { Method::OracleMatched };
    Ok(AttachmentResult { datum: cands[idx].clone(), method, certificate: gk.certificate, oracle: Some(run.poly) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[i64]) -> HalfIntegralMatrix {
        HalfIntegralMatrix::diag(d).unwrap()
    }

    #[test]
    fn candidates() {
        assert_eq!(enumerate_candidates(&[1]).len(), 1);
        assert_eq!(enumerate_candidates(&[0, 1])[0].eps(), &[1, 0]);
        assert_eq!(enumerate_candidates(&[0, 0]).len(), 2);
    }

    #[test]
    fn fast_path() {
        assert_eq!(fast_eps_even_odd_p(&diag(&[1, 3]), 3).unwrap(), vec![None, None]);
        assert_eq!(fast_eps_even_odd_p(&diag(&[1, 1]), 5).unwrap(), vec![None, Some(1)]);
        assert_eq!(fast_eps_even_odd_p(&diag(&[1, 5]), 5).unwrap(), vec![None, None]);
        assert_eq!(fast_eps_even_odd_p(&diag(&[1, 1, 3]), 3).unwrap(), vec![None, Some(-1), None]);
        assert_eq!(fast_eps_even_odd_p(&diag(&[1, 1, 1]), 3).unwrap(), vec![None, None, None]);
    }

    #[test]
    fn spec_cases() {
        let opts = AttachOptions { verify: true, use_cache: false, ..Default::default() };
        let r = attach(&diag(&[3]), 3, &opts).unwrap();
        assert_eq!((r.datum.a(), r.datum.eps(), r.method), (&[1][..], &[1][..], Method::Forced));
        assert_eq!(r.oracle.unwrap().coeffs, vec![1, 3]);
        let r = attach(&diag(&[1, 3]), 3, &opts).unwrap();
        assert_eq!((r.datum.a(), r.datum.eps(), r.method), (&[0, 1][..], &[1, 0][..], Method::Forced));
        let r = attach(&diag(&[1, 1]), 2, &opts).unwrap();
        assert_eq!((r.datum.a(), r.datum.eps(), r.method), (&[0, 1][..], &[1, 0][..], Method::Forced));
    }

    #[test]
    fn odd_length_sign() {
        let opts = AttachOptions { verify: true, use_cache: false, ..Default::default() };
        let r = attach(&diag(&[1, 1, 3]), 3, &opts).unwrap();
        assert_eq!(r.datum.a(), &[0, 0, 1]);
        assert_eq!(r.datum.eps(), &[1, -1, -1]);
        let plain = attach(&diag(&[1, 1, 3]), 3, &AttachOptions::default()).unwrap();
        assert_eq!(plain.method, Method::FastPath);
        assert_eq!(plain.datum, r.datum);
    }

    #[test]
    fn oracle_resolves_dyadic_sign() {
        let opts = AttachOptions { use_cache: false, ..Default::default() };
        // H = [[1, 1/2], [1/2, 1]] scaled by 2 at p = 2
        let b = HalfIntegralMatrix::from_i64(&[&[4, 2], &[2, 4]]).unwrap();
        let r = attach(&b, 2, &opts).unwrap();
        assert_eq!(r.method, Method::OracleMatched);
        assert!(f_tilde_compare(&f_poly(&r.datum), r.oracle.as_ref().unwrap()));
    }
}
