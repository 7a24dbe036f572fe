//! Fourier coefficients of the lift `I_n(h)` and the explicit and asymptotic
//! bounds for them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{
    format_rational, int, parse_rational, rat, render_rational, MultiQuad, QuadExt, Rational, RealPowerProduct,
};
use crate::arith;
use crate::attach::{attach, AttachOptions};
use crate::egk::{f_poly, specialize, Point};
use crate::error::{Error, Result};
use crate::gross_keating::gk_invariant;
use crate::quadratic::{global_discriminant, local_invariants, HalfIntegralMatrix};

/// Fourier data of `h` (weight `k - n/2 + 1/2`) and of `f` (weight `2k - n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenformData {
    pub k: i64,
    pub n: usize,
    pub c_h: BTreeMap<u64, Rational>,
    pub c_f: BTreeMap<u64, Rational>,
}

fn parse_table(v: &serde_json::Value, name: &str) -> Result<BTreeMap<u64, Rational>> {
    let obj =
        v.get(name).and_then(|o| o.as_object()).ok_or_else(|| Error::invalid(format!("missing object \"{name}\"")))?;
    obj.iter()
        .map(|(key, val)| {
            let k: u64 = key
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{name} key {key:?} is not a positive integer")))?;
            let r = match val {
                serde_json::Value::String(s) => parse_rational(s)?,
                serde_json::Value::Number(num) => parse_rational(&num.to_string())?,
                _ => return Err(Error::invalid(format!("{name}[{key}] must be a string or integer"))),
            };
            Ok((k, r))
        })
        .collect()
}

impl EigenformData {
    pub fn new(k: i64, n: usize, c_h: BTreeMap<u64, Rational>, c_f: BTreeMap<u64, Rational>) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::invalid(format!("genus n = {n} must be positive and even")));
        }
        if k % 2 != 0 || k < n as i64 + 2 {
            return Err(Error::invalid(format!("weight k = {k} must be even and at least n + 2")));
        }
        let sign = if (n / 2).is_multiple_of(2) { 1 } else { -1 };
        for &m in c_h.keys() {
            let r = (sign * m as i64).rem_euclid(4);
            if m == 0 || r > 1 {
                return Err(Error::invalid(format!("c_h index {m} is outside the plus space")));
            }
        }
        for &p in c_f.keys() {
            arith::check_prime(p)?;
        }
        Ok(Self { k, n, c_h, c_f })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("eigenform JSON: {e}")))?;
        let k = v.get("k").and_then(|x| x.as_i64()).ok_or_else(|| Error::invalid("missing integer \"k\""))?;
        let n = v.get("n").and_then(|x| x.as_u64()).ok_or_else(|| Error::invalid("missing integer \"n\""))? as usize;
        Self::new(k, n, parse_table(&v, "c_h")?, parse_table(&v, "c_f")?)
    }

    pub fn to_json(&self) -> String {
        let table = |t: &BTreeMap<u64, Rational>| -> serde_json::Value {
            t.iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::String(format_rational(v))))
                .collect::<serde_json::Map<_, _>>()
                .into()
        };
        serde_json::json!({"k": self.k, "n": self.n, "c_h": table(&self.c_h), "c_f": table(&self.c_f)}).to_string()
    }

    pub fn c_h(&self, m: &BigInt) -> Result<&Rational> {
        m.to_u64().and_then(|m| self.c_h.get(&m)).ok_or_else(|| Error::MissingEntry(format!("c_h({m})")))
    }

    pub fn c_f(&self, p: u64) -> Result<&Rational> {
        self.c_f.get(&p).ok_or_else(|| Error::MissingEntry(format!("c_f({p})")))
    }
}

/// `t_p = alpha_p + alpha_p^(-1) = c_f(p) p^(-(2k-n-1)/2)` and whether
/// `|t_p| <= 2` holds.
pub fn satake_t(cf_p: &Rational, k: i64, n: usize, p: u64) -> (QuadExt, bool) {
    let w = 2 * k - n as i64 - 1;
    let t = QuadExt::sqrt(p).pow(-w).expect("nonzero").scale(cf_p);
    let ok = t.abs().cmp_value(&QuadExt::rational(int(2))) != std::cmp::Ordering::Greater;
    (t, ok)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftCoefficient {
    pub value: Rational,
    /// `p^(ord_p(f_B)(k - (n+1)/2)) F~_p(B, alpha_p)` for `p | f_B`.
    pub per_prime: BTreeMap<u64, QuadExt>,
    pub d_b: BigInt,
    pub f_b: BigInt,
    pub c_h: Rational,
    /// Primes where `|t_p| > 2`.
    pub ramanujan_flags: Vec<u64>,
}

fn prime_factors(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_one() {
        return Ok(Vec::new());
    }
    arith::factor(n, arith::DEFAULT_TRIAL_BOUND)
}

pub fn lift_coefficient(b: &HalfIntegralMatrix, data: &EigenformData, opts: &AttachOptions) -> Result<LiftCoefficient> {
    if b.n() != data.n {
        return Err(Error::invalid(format!("matrix size {} differs from genus {}", b.n(), data.n)));
    }
    let gd = global_discriminant(b)?;
    let c_h = data.c_h(&gd.d_b.abs())?.clone();
    let fac = prime_factors(&gd.f_b)?;
    let t: Vec<(u64, u32, QuadExt, bool)> = fac
        .iter()
        .map(|&(p, e)| {
            data.c_f(p).map(|c| {
                let (t, ok) = satake_t(c, data.k, data.n, p);
                (p, e, t, ok)
            })
        })
        .collect::<Result<_>>()?;
    for (p, _) in prime_factors(&b.det2b())? {
        if gd.f_b.is_multiple_of(&BigInt::from(p)) {
            continue;
        }
        if local_invariants(b, p)?.e_b != 0 {
            return Err(Error::invariant(format!("e_B at p = {p} is nonzero although p does not divide f_B")));
        }
    }
    let w = 2 * data.k - data.n as i64 - 1;
    let mut total = MultiQuad::rational(c_h.clone());
    let mut per_prime = BTreeMap::new();
    let mut flags = Vec::new();
    for (p, e, tp, ok) in t {
        if !ok {
            flags.push(p);
        }
        let r = attach(b, p, opts)?;
        let f_tilde = specialize(&f_poly(&r.datum), p, &Point::Trace(tp))?;
        let factor = QuadExt::sqrt(p).pow(e as i64 * w)?.checked_mul(&f_tilde).expect("same field");
        total = total.mul(&MultiQuad::from(&factor));
        per_prime.insert(p, factor);
    }
    let value = total
        .as_rational()
        .ok_or_else(|| Error::invariant(format!("lift coefficient keeps radical parts: {total}")))?;
    Ok(LiftCoefficient { value, per_prime, d_b: gd.d_b, f_b: gd.f_b, c_h, ramanujan_flags: flags })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaassCheck {
    pub lift: Rational,
    pub divisor_sum: Rational,
}

impl MaassCheck {
    pub fn holds(&self) -> bool {
        self.lift == self.divisor_sum
    }
}

/// `sum_{d | gcd(a, b, c)} d^(k-1) c_h(det(2B) / d^2)` against the lift, for
/// `B = [[a, b/2], [b/2, c]]`.
pub fn maass_check(b: &HalfIntegralMatrix, data: &EigenformData, opts: &AttachOptions) -> Result<MaassCheck> {
    if b.n() != 2 || data.n != 2 {
        return Err(Error::invalid("the Maass relation check needs n = 2"));
    }
    let tb = b.two_b();
    let a: BigInt = &tb[0][0] / 2;
    let c: BigInt = &tb[1][1] / 2;
    let g = a.gcd(&tb[0][1]).gcd(&c);
    let det2b = b.det2b();
    let g64 = g.to_u64().ok_or_else(|| Error::invalid("content too large"))?;
    let mut sum = Rational::zero();
    for d in (1..=g64).filter(|d| g64 % d == 0) {
        let db = BigInt::from(d);
        let idx = &det2b / (&db * &db);
        let ch = data.c_h(&idx)?;
        sum += ch * Rational::from_integer(num_traits::pow(db, (data.k - 1) as usize));
    }
    let lift = lift_coefficient(b, data, opts)?.value;
    Ok(MaassCheck { lift, divisor_sum: sum })
}

/// `alpha_n = (4(n-1) + 4[(n-1)/2] + 2/(n+2))^(-1)`.
pub fn alpha_n(n: usize) -> Rational {
    let n = n as i64;
    (int(4 * (n - 1) + 4 * ((n - 1) / 2)) + rat(2, n + 2)).recip()
}

/// One row of the bound report.
#[derive(Clone, Debug)]
pub struct BoundRow {
    pub det2b: BigInt,
    pub d_b: BigInt,
    pub f_b: BigInt,
    pub c: Rational,
    pub hecke: RealPowerProduct,
    pub bk: RealPowerProduct,
    pub asym_general: RealPowerProduct,
    pub asym_minor: RealPowerProduct,
    /// Explicit bound with the divisor-type factor; rational.
    pub explicit_divisor: Rational,
    /// Explicit bound with minor factors; `explicit_minor_sq` is its exact square.
    pub explicit_minor: RealPowerProduct,
    pub explicit_minor_sq: Rational,
    pub holds_divisor: bool,
    pub holds_minor: bool,
    /// `prod_{p | f_B} p^(e_r^(p))` for `r = 1..=n`.
    pub conductor_powers: Vec<BigInt>,
    pub ramanujan_flags: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaassStatus {
    Equal,
    Differs,
    Skipped,
}

impl MaassStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            MaassStatus::Equal => "equal",
            MaassStatus::Differs => "differs",
            MaassStatus::Skipped => "skipped",
        }
    }
}

pub fn bound_report(
    b: &HalfIntegralMatrix,
    data: &EigenformData,
    eps: &Rational,
    opts: &AttachOptions,
) -> Result<BoundRow> {
    let lc = lift_coefficient(b, data, opts)?;
    let n = data.n;
    let k = data.k;
    let ni = n as i64;
    let det2b = b.det2b();
    let det2b_r = Rational::from_integer(det2b.clone());
    let det_b = &det2b_r / Rational::from_integer(num_traits::pow(BigInt::from(2), n));
    let abs_db = Rational::from_integer(lc.d_b.abs());
    let f_r = Rational::from_integer(lc.f_b.clone());
    let g: Vec<BigInt> = (1..n).map(|r| b.g_r(r)).collect::<Result<_>>()?;
    let g_prod: BigInt = g.iter().product();
    let g_prod_r = Rational::from_integer(g_prod.clone());

    let mut ledger_prod = BigInt::one();
    let mut conductor_powers = vec![BigInt::one(); n];
    for (p, _) in prime_factors(&lc.f_b)? {
        let gk = gk_invariant(b, p)?;
        if !gk.certificate.is_trusted() {
            return Err(Error::invalid(format!("GK invariant at p = {p} is not certified")));
        }
        for (r, &e) in gk.e_ledger.iter().enumerate() {
            ledger_prod *= BigInt::from(e + 1);
            conductor_powers[r] *= arith::pow_big(p, e);
        }
    }
    let ledger_r = Rational::from_integer(ledger_prod);
    let abs_c = lc.value.abs();
    let abs_ch = lc.c_h.abs();

    let half_k = rat(k, 2);
    let hecke = RealPowerProduct::new(int(1)).times_pow(det_b.clone(), half_k.clone());
    let bk_exp = &half_k - rat(1, 2 * ni) - (int(1) - rat(1, ni)) * alpha_n(n) + eps;
    let bk = RealPowerProduct::new(int(1)).times_pow(det_b, bk_exp);
    let asym_general = RealPowerProduct::new(int(1))
        .times_pow(abs_db.clone(), rat(-ni, 4) + rat(5, 12))
        .times_pow(det2b_r.clone(), rat(k - 1, 2) + eps);
    let asym_minor = RealPowerProduct::new(int(1))
        .times_pow(abs_db, rat(1, 6))
        .times_pow(det2b_r, &half_k - rat(ni + 1, 4) + eps)
        .times_pow(g_prod_r.clone(), rat(1, 2));
    let f_pow = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(num_traits::pow(lc.f_b.clone(), e as usize))
        } else {
            Rational::from_integer(num_traits::pow(lc.f_b.clone(), (-e) as usize)).recip()
        }
    };
    let explicit_divisor = &abs_ch * f_pow(k - 1) * &ledger_r;
    let explicit_minor = RealPowerProduct::new(&abs_ch * &ledger_r)
        .times_pow(f_r, rat(2 * k - ni - 1, 2))
        .times_pow(g_prod_r.clone(), rat(1, 2));
    let explicit_minor_sq = &abs_ch * &abs_ch * f_pow(2 * k - ni - 1) * &g_prod_r * &ledger_r * &ledger_r;
    let holds_divisor = abs_c <= explicit_divisor;
    let holds_minor = &abs_c * &abs_c <= explicit_minor_sq;
    Ok(BoundRow {
        det2b,
        d_b: lc.d_b,
        f_b: lc.f_b,
        c: lc.value,
        hecke,
        bk,
        asym_general,
        asym_minor,
        explicit_divisor,
        explicit_minor,
        explicit_minor_sq,
        holds_divisor,
        holds_minor,
        conductor_powers,
        ramanujan_flags: lc.ramanujan_flags,
    })
}

pub const CSV_DIGITS: usize = 30;

pub fn csv_header() -> &'static str {
    "matrix-id,det2B,dB,fB,c,c-dec,hecke,bk,thm31,thm32,thm641,thm641-dec,thm642,maass-status"
}

impl BoundRow {
    pub fn csv_line(&self, id: &str, maass: MaassStatus) -> String {
        [
            id.to_string(),
            self.det2b.to_string(),
            self.d_b.to_string(),
            self.f_b.to_string(),
            format_rational(&self.c),
            render_rational(&self.c, CSV_DIGITS),
            self.hecke.to_decimal(CSV_DIGITS),
            self.bk.to_decimal(CSV_DIGITS),
            self.asym_general.to_decimal(CSV_DIGITS),
            self.asym_minor.to_decimal(CSV_DIGITS),
            format_rational(&self.explicit_divisor),
            render_rational(&self.explicit_divisor, CSV_DIGITS),
            self.explicit_minor.to_decimal(CSV_DIGITS),
            maass.as_str().to_string(),
        ]
        .join(",")
    }
}

/// Synthetic eigenform table with every index needed for `matrices`: `c_h`
/// at `|d_B|` and at `det(2B)/d^2`, `c_f` at primes dividing `f_B`. Values
/// are small deterministic rationals.
pub fn synthetic_table(k: i64, n: usize, matrices: &[HalfIntegralMatrix]) -> Result<EigenformData> {
    let mut c_h = BTreeMap::new();
    let mut c_f = BTreeMap::new();
    let value = |m: u64| rat(2 * (m % 5) as i64 - 5, 1 + (m % 3) as i64);
    for b in matrices {
        let gd = global_discriminant(b)?;
        let m = gd.d_b.abs().to_u64().ok_or_else(|| Error::invalid("discriminant too large"))?;
        c_h.insert(m, value(m));
        let d = b.det2b().to_u64().ok_or_else(|| Error::invalid("determinant too large"))?;
        let f = gd.f_b.to_u64().unwrap();
        for s in (1..=f).filter(|s| f % s == 0) {
            c_h.insert(d / (s * s), value(d / (s * s)));
        }
        for (p, _) in prime_factors(&gd.f_b)? {
            c_f.entry(p).or_insert_with(|| int((p * 13 % 17) as i64 - 8));
        }
    }
    EigenformData::new(k, n, c_h, c_f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(ch: &[(u64, i64)], cf: &[(u64, i64)]) -> EigenformData {
        EigenformData::new(
            10,
            2,
            ch.iter().map(|&(m, v)| (m, int(v))).collect(),
            cf.iter().map(|&(p, v)| (p, int(v))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn satake() {
        let (t, ok) = satake_t(&int(-528), 10, 2, 2);
        assert_eq!(t, QuadExt::new(int(0), rat(-33, 32), 2));
        assert!(ok);
        assert_eq!(satake_t(&int(0), 10, 2, 5).0, QuadExt::zero());
        let (t, ok) = satake_t(&int(512), 10, 2, 2);
        assert_eq!(t, QuadExt::sqrt(2));
        assert!(ok);
        let (_, ok) = satake_t(&int(1_000_000), 10, 2, 2);
        assert!(!ok);
    }

    #[test]
    fn alpha() {
        assert_eq!(alpha_n(2), rat(2, 9));
        assert_eq!(alpha_n(4), (int(12) + int(4) + rat(1, 3)).recip());
    }

    #[test]
    fn json_roundtrip() {
        let t = table(&[(3, 1), (4, -2)], &[(2, -528)]);
        assert_eq!(EigenformData::from_json(&t.to_json()).unwrap(), t);
        let parsed = EigenformData::from_json(r#"{"k":10,"n":2,"c_h":{"3":"1/2","4":7},"c_f":{"2":"-528"}}"#).unwrap();
        assert_eq!(parsed.c_h[&3], rat(1, 2));
        assert!(EigenformData::from_json(r#"{"k":10,"n":2,"c_h":{"5":"1"},"c_f":{}}"#).is_err());
        assert!(EigenformData::from_json(r#"{"k":9,"n":2,"c_h":{},"c_f":{}}"#).is_err());
    }

    #[test]
    fn trivial_conductor() {
        let b = HalfIntegralMatrix::diag(&[1, 1]).unwrap();
        let t = table(&[(4, 5)], &[]);
        let c = lift_coefficient(&b, &t, &AttachOptions::default()).unwrap();
        assert_eq!(c.value, int(5));
        assert!(c.per_prime.is_empty());
        let m = maass_check(&b, &t, &AttachOptions::default()).unwrap();
        assert!(m.holds());
        let row = bound_report(&b, &t, &rat(1, 100), &AttachOptions::default()).unwrap();
        assert_eq!(row.explicit_divisor, int(5));
        assert!(row.holds_divisor && row.holds_minor);
    }

    #[test]
    fn conductor_two_is_rational_and_linear() {
        let b = HalfIntegralMatrix::diag(&[1, 4]).unwrap();
        let t = table(&[(4, 3), (16, 1)], &[(2, -528)]);
        let c = lift_coefficient(&b, &t, &AttachOptions::default()).unwrap();
        assert_eq!(c.f_b, BigInt::from(2));
        let t2 = table(&[(4, 6), (16, 1)], &[(2, -528)]);
        assert_eq!(lift_coefficient(&b, &t2, &AttachOptions::default()).unwrap().value, int(2) * &c.value);
        let row = bound_report(&b, &t, &rat(1, 100), &AttachOptions::default()).unwrap();
        assert!(row.holds_divisor && row.holds_minor);
        assert_eq!(row.conductor_powers[1], BigInt::from(4));
    }

    #[test]
    fn maass_divisor_sum() {
        let b = HalfIntegralMatrix::diag(&[2, 2]).unwrap();
        let t = table(&[(4, 1), (16, 3)], &[(2, -528)]);
        let m = maass_check(&b, &t, &AttachOptions::default()).unwrap();
        assert_eq!(m.divisor_sum, int(3) + int(512));
    }

    #[test]
    fn missing_entries() {
        let b = HalfIntegralMatrix::diag(&[1, 4]).unwrap();
        let t = table(&[(4, 3)], &[]);
        assert!(matches!(lift_coefficient(&b, &t, &AttachOptions::default()), Err(Error::MissingEntry(_))));
    }
}
