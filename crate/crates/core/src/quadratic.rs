//! Half-integral matrices and their discriminant invariants.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::algebra::Rational;
use crate::arith::{self, ord};
use crate::error::{Error, Result};

/// Symmetric `B` with integral diagonal and half-integral off-diagonal
/// entries, stored as the even-diagonal integral matrix `2B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfIntegralMatrix {
    two_b: Vec<Vec<BigInt>>,
}

/// Fraction-free (Bareiss) determinant.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn json_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string().parse().ok(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

#[derive(Serialize)]
struct MatrixJson {
    n: usize,
    two_b: Vec<Vec<Value>>,
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

impl HalfIntegralMatrix {
    /// Validates `2B`: square, symmetric, even diagonal, nonzero determinant.
    pub fn new(two_b: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = two_b.len();
        if n == 0 {
            return Err(Error::invalid("empty matrix"));
        }
        if two_b.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("matrix is not square"));
        }
        for i in 0..n {
            for j in i + 1..n {
                if two_b[i][j] != two_b[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| two_b[i][i].is_odd()) {
            return Err(Error::NotHalfIntegral(i));
        }
        let m = Self { two_b };
        if m.det2b().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// `B = diag(d)`.
    pub fn diag(d: &[i64]) -> Result<Self> {
        let n = d.len();
        Self::new((0..n).map(|i| (0..n).map(|j| BigInt::from(if i == j { 2 * d[i] } else { 0 })).collect()).collect())
    }

    /// Parses `{"n": .., "two_b": [[..]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::invalid(format!("matrix JSON: {e}")))?;
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::invalid("matrix JSON needs a positive integer \"n\""))? as usize;
        let rows =
            v.get("two_b").and_then(Value::as_array).ok_or_else(|| Error::invalid("matrix JSON needs \"two_b\""))?;
        if rows.len() != n {
            return Err(Error::invalid(format!("\"two_b\" has {} rows, expected {n}", rows.len())));
        }
        let mut two_b = Vec::with_capacity(n);
        for row in rows {
            let row = row.as_array().ok_or_else(|| Error::invalid("\"two_b\" rows must be arrays"))?;
            if row.len() != n {
                return Err(Error::invalid("matrix is not square"));
            }
            let parsed: Option<Vec<BigInt>> = row.iter().map(json_int).collect();
            two_b.push(parsed.ok_or_else(|| Error::invalid("\"two_b\" entries must be integers"))?);
        }
        Self::new(two_b)
    }

    pub fn to_json(&self) -> String {
        let m =
            MatrixJson { n: self.n(), two_b: self.two_b.iter().map(|r| r.iter().map(int_json).collect()).collect() };
        serde_json::to_string(&m).expect("serializable")
    }

    pub fn n(&self) -> usize {
        self.two_b.len()
    }

    pub fn two_b(&self) -> &[Vec<BigInt>] {
        &self.two_b
    }

    /// `b_ij` as a rational.
    pub fn entry(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.two_b[i][j].clone(), BigInt::from(2))
    }

    pub fn det2b(&self) -> BigInt {
        det(&self.two_b)
    }

    pub fn is_positive_definite(&self) -> bool {
        (1..=self.n()).all(|k| {
            let sub: Vec<Vec<BigInt>> = self.two_b[..k].iter().map(|r| r[..k].to_vec()).collect();
            det(&sub).is_positive()
        })
    }

    /// `U^T B U` for an integral `U`.
    pub fn transform(&self, u: &[Vec<BigInt>]) -> Result<Self> {
        let n = self.n();
        let mut t = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !u[k][i].is_zero() {
                        for l in 0..n {
                            t[i][j] += &u[k][i] * &self.two_b[k][l] * &u[l][j];
                        }
                    }
                }
            }
        }
        Self::new(t)
    }

    pub fn scale(&self, c: &BigInt) -> Result<Self> {
        Self::new(self.two_b.iter().map(|r| r.iter().map(|x| x * c).collect()).collect())
    }

    /// Determinant of the `2B` submatrix on rows `i`, columns `j`.
    pub fn minor2b(&self, i: &[usize], j: &[usize]) -> BigInt {
        let sub: Vec<Vec<BigInt>> = i.iter().map(|&a| j.iter().map(|&b| self.two_b[a][b].clone()).collect()).collect();
        det(&sub)
    }

    /// `2^(2[r/2] + 1 - delta) det B(i; j)` for 0-based increasing index
    /// sequences of common length `r`.
    pub fn minor_norm(&self, i: &[usize], j: &[usize]) -> Result<BigInt> {
        let r = i.len();
        let n = self.n();
        let ok = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&x| x < n);
        if r == 0 || j.len() != r || !ok(i) || !ok(j) {
            return Err(Error::invalid("minor indices must be increasing sequences of equal length within range"));
        }
        let m = self.minor2b(i, j);
        // det B(i;j) = m / 2^r, so the 2-exponent is 2[r/2] + 1 - delta - r.
        let delta = i32::from(i == j);
        let e = 2 * (r as i32 / 2) + 1 - delta - r as i32;
        match e {
            1 => Ok(m * 2),
            0 => Ok(m),
            _ => {
                if m.is_odd() {
                    return Err(Error::invariant("minor norm is not integral"));
                }
                Ok(m / 2)
            }
        }
    }

    /// All nonzero minor norms of size `r`.
    pub fn minor_norms(&self, r: usize) -> Result<Vec<BigInt>> {
        if r == 0 || r > self.n() {
            return Err(Error::invalid(format!("minor size {r} out of range 1..={}", self.n())));
        }
        let subsets: Vec<Vec<usize>> = (0..self.n()).combinations(r).collect();
        let mut out = Vec::new();
        for i in &subsets {
            for j in &subsets {
                let v = self.minor_norm(i, j)?;
                if !v.is_zero() {
                    out.push(v);
                }
            }
        }
        Ok(out)
    }

    /// `G_r(B)`: gcd of the nonzero minor norms of size `r`.
    pub fn g_r(&self, r: usize) -> Result<BigInt> {
        let norms = self.minor_norms(r)?;
        Ok(norms.iter().fold(BigInt::zero(), |g, x| g.gcd(x)))
    }

    /// `g_r`: least p-adic valuation among the minor norms of size `r`.
    pub fn gr_at_p(&self, p: u64, r: usize) -> Result<u32> {
        let norms = self.minor_norms(r)?;
        Ok(norms.iter().filter_map(|x| ord(x, p)).min().expect("det B != 0 gives a nonzero minor"))
    }

    /// `D_B = (-4)^[n/2] det B` (an integer).
    pub fn disc(&self) -> BigInt {
        let n = self.n();
        let d = self.det2b();
        let s = if (n / 2).is_multiple_of(2) { d } else { -d };
        if n.is_multiple_of(2) {
            s
        } else {
            s / 2
        }
    }
}

/// Splitting data of `B` at `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalInvariants {
    pub p: u64,
    /// `+1` split, `-1` unramified, `0` ramified; `0` for odd `n`.
    pub xi: i8,
    pub e_b: u32,
    pub ord_db: u32,
}

/// Discriminant valuation, splitting type and conductor exponent of the
/// quadratic class `p^v u` (u a unit).
fn quadratic_class(v: u32, u: &BigInt, p: u64) -> (i8, u32) {
    if p == 2 {
        let r8 = u.mod_floor(&BigInt::from(8)).to_u64().unwrap();
        let xi = match (v % 2, r8) {
            (0, 1) => 1,
            (0, 5) => -1,
            _ => 0,
        };
        let cond = match (v % 2, r8 % 4) {
            (0, 1) => 0,
            (0, _) => 2,
            _ => 3,
        };
        (xi, cond)
    } else if v.is_multiple_of(2) {
        (arith::legendre(u, p), 0)
    } else {
        (0, 1)
    }
}

pub fn local_invariants(b: &HalfIntegralMatrix, p: u64) -> Result<LocalInvariants> {
    arith::check_prime(p)?;
    let d = b.disc();
    let v = ord(&d, p).expect("nondegenerate");
    if b.n() % 2 == 1 {
        return Ok(LocalInvariants { p, xi: 0, e_b: v, ord_db: v });
    }
    let u = &d / arith::pow_big(p, v);
    let (xi, cond) = quadratic_class(v, &u, p);
    Ok(LocalInvariants { p, xi, e_b: v - cond, ord_db: v })
}

/// Fundamental discriminant and conductor of `(-1)^(n/2) det(2B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalDiscriminant {
    pub d_b: BigInt,
    pub f_b: BigInt,
}

pub fn global_discriminant(b: &HalfIntegralMatrix) -> Result<GlobalDiscriminant> {
    global_discriminant_with(b, arith::DEFAULT_TRIAL_BOUND)
}

pub fn global_discriminant_with(b: &HalfIntegralMatrix, bound: u64) -> Result<GlobalDiscriminant> {
    if b.n() % 2 == 1 {
        return Err(Error::invalid("global discriminant needs even n"));
    }
    if !b.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let n_val = b.disc();
    let (s, f) = arith::squarefree_decompose(&n_val, bound)?;
    let four = BigInt::from(4);
    if s.mod_floor(&four).is_one() {
        return Ok(GlobalDiscriminant { d_b: s, f_b: f });
    }
    if f.is_odd() {
        return Err(Error::invariant("discriminant is not 0 or 1 mod 4"));
    }
    Ok(GlobalDiscriminant { d_b: s * four, f_b: f / 2 })
}
