//! Bernoulli numbers and polynomials, generalised Euler polynomials for the
//! uniform weight on `{0, ..., k-1}`, and the twisted Euler polynomials that
//! drive the root-of-unity summation formula.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use spin::RwLock;

use crate::error::{Error, Result};
use crate::real::{Complex, Real};
use crate::rootsofunity::RotationNumber;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolynomial(Vec<BigRational>);

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        RationalPolynomial(coeffs)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|x| int(*x)).collect())
    }

    pub fn monomial(n: usize) -> Self {
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_zero()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_real(&self, x: &Real) -> Real {
        let p = x.prec();
        let mut acc = Real::zero(p);
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + &Real::from_ratio(c, p);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = BigRational::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    /// `p(a + b x)`.
    pub fn compose_affine(&self, a: &BigRational, b: &BigRational) -> Self {
        let mut out = Self::new(vec![BigRational::zero()]);
        let lin = Self::new(vec![a.clone(), b.clone()]);
        for c in self.0.iter().rev() {
            out = out.mul(&lin).add(&Self::new(vec![c.clone()]));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut c = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// `sum |c_d|`, a bound for the maximum on `[0, 1]`.
    pub fn abs_coeff_sum(&self) -> BigRational {
        self.0.iter().fold(BigRational::zero(), |acc, c| acc + c.abs())
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() && !(self.is_zero() && d == 0) {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coef = if mag.is_one() && d > 0 { alloc::string::String::new() } else { format!("{mag}") };
            match d {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{coef}x")?,
                _ => write!(f, "{coef}x^{d}")?,
            }
        }
        Ok(())
    }
}

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

pub fn bernoulli_number(j: usize) -> BigRational {
    if let Some(b) = BERNOULLI.read().get(j) {
        return b.clone();
    }
    let mut memo = BERNOULLI.write();
    if memo.is_empty() {
        memo.push(BigRational::one());
    }
    while memo.len() <= j {
        // sum_{k<=n} C(n+1, k) B_k = 0
        let n = memo.len() as u64;
        let mut s = BigRational::zero();
        for (k, b) in memo.iter().enumerate() {
            s += BigRational::from_integer(binomial(n + 1, k as u64)) * b;
        }
        let bn = -s / int(n as i64 + 1);
        memo.push(bn);
    }
    memo[j].clone()
}

pub fn bernoulli_polynomial(j: usize) -> RationalPolynomial {
    let mut c = vec![BigRational::zero(); j + 1];
    for k in 0..=j {
        c[j - k] = BigRational::from_integer(binomial(j as u64, k as u64)) * bernoulli_number(k);
    }
    RationalPolynomial::new(c)
}

type GenEulerMemo = BTreeMap<u64, Vec<RationalPolynomial>>;
static GEN_EULER: RwLock<GenEulerMemo> = RwLock::new(BTreeMap::new());

fn power_sum(k: u64, d: u32) -> BigInt {
    (0..k).map(|j| BigInt::from(j).pow(d)).sum()
}

/// `E_{k,n}` via `E_{k,n} = x^n - (1/k) sum_{m<n} C(n,m) S_k(n-m) E_{k,m}`.
pub fn gen_euler_polynomial(k: u64, n: usize) -> Result<RationalPolynomial> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 2")));
    }
    if let Some(p) = GEN_EULER.read().get(&k).and_then(|v| v.get(n)) {
        return Ok(p.clone());
    }
    let mut memo = GEN_EULER.write();
    let row = memo.entry(k).or_default();
    let kk = int(k as i64);
    while row.len() <= n {
        let nn = row.len();
        let mut acc = RationalPolynomial::monomial(nn);
        for (m, em) in row.iter().enumerate() {
            let w = BigRational::from_integer(binomial(nn as u64, m as u64) * power_sum(k, (nn - m) as u32)) / &kk;
            acc = acc.add(&em.scale(&-w));
        }
        row.push(acc);
    }
    Ok(row[n].clone())
}

/// Classical Euler polynomials from `2 e^{xt}/(e^t + 1)`, by series inversion.
pub fn classical_euler_polynomial(n: usize) -> RationalPolynomial {
    // 2/(e^t+1) = sum e_j t^j/j!;  (e^t + 1) * sum = 2
    let mut e: Vec<BigRational> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        // sum_{i<=j} C(j,i) e_i + e_j = 2[j=0]
        let mut s = BigRational::zero();
        for (i, ei) in e.iter().enumerate() {
            s += BigRational::from_integer(binomial(j as u64, i as u64)) * ei;
        }
        let rhs = if j == 0 { int(2) } else { BigRational::zero() };
        e.push((rhs - s) / int(2));
    }
    let mut c = vec![BigRational::zero(); n + 1];
    for j in 0..=n {
        c[n - j] = BigRational::from_integer(binomial(n as u64, j as u64)) * &e[j];
    }
    RationalPolynomial::new(c)
}

fn check_primitive(k: u64, zeta: &RotationNumber) -> Result<()> {
    if zeta.is_primitive(k) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{zeta} is not a primitive {k}-th root of unity")))
    }
}

/// `Ẽ_{k,n}(x) = zeta^{-floor x} E_{k,n}(x - floor x)`.
pub fn periodic_gen_euler_eval(k: u64, zeta: &RotationNumber, n: usize, x: &Real) -> Result<Complex> {
    check_primitive(k, zeta)?;
    let p = x.prec();
    let fl = x.floor();
    let fr = x - &fl;
    let shift = fl.to_f64() as i64;
    let v = gen_euler_polynomial(k, n)?.eval_real(&fr);
    Ok(zeta.pow(-shift).to_complex(p).scale(&v))
}

pub fn sup_bound(k: u64, n: usize) -> Result<BigRational> {
    Ok(gen_euler_polynomial(k, n)?.abs_coeff_sum())
}

/// `<v_{i,j}, w_{i,j}>` as exact coefficients of powers of zeta: pairs `(e, c)`
/// meaning `sum c zeta^e`.
pub fn inner_product_terms(k: u64, i: u64, j: u64) -> Result<Vec<(u64, BigRational)>> {
    if i < 1 || i > j || j > k - 1 {
        return Err(Error::IndexOutOfRange(format!("need 1 <= i <= j <= k-1, got i={i}, j={j}, k={k}")));
    }
    let mut by_pow: BTreeMap<u64, BigRational> = BTreeMap::new();
    for a in i..=j {
        let e = (j + i - a) % k;
        let c = BigRational::new(BigInt::from(a as i64 - k as i64), BigInt::from(k));
        *by_pow.entry(e).or_insert_with(BigRational::zero) += c;
    }
    Ok(by_pow.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

pub fn inner_product(k: u64, zeta: &RotationNumber, i: u64, j: u64, p: usize) -> Result<Complex> {
    check_primitive(k, zeta)?;
    let mut acc = Complex::zero(p);
    for (e, c) in inner_product_terms(k, i, j)? {
        acc = &acc + &zeta.pow(e as i64).to_complex(p).scale(&Real::from_ratio(&c, p));
    }
    Ok(acc)
}

/// Twisted Euler numbers `h_0..=h_n` with `sum h_j t^j/j! = (1-u)/(e^t - u)`, `u = zeta^{-1}`.
pub fn twisted_euler_numbers(zeta: &RotationNumber, n: usize, p: usize) -> Result<Vec<Complex>> {
    if zeta.is_one() {
        return Err(Error::InvalidArgument(format!("twisted family needs zeta != 1")));
    }
    let u = zeta.inverse().to_complex(p);
    let c = (&Complex::one(p) - &u).recip();
    let mut h: Vec<Complex> = vec![Complex::one(p)];
    for m in 1..=n {
        let mut s = Complex::zero(p);
        for (j, hj) in h.iter().enumerate() {
            s = &s + &hj.scale(&Real::from_bigint(&binomial(m as u64, j as u64), p));
        }
        h.push(-(&s * &c));
    }
    Ok(h)
}

/// Polynomial with complex coefficients, index = degree.
#[derive(Clone, Debug)]
pub struct ComplexPolynomial(pub Vec<Complex>);

impl ComplexPolynomial {
    pub fn eval(&self, x: &Real) -> Complex {
        let p = x.prec().max(self.0.first().map(|c| c.prec()).unwrap_or(x.prec()));
        let mut acc = Complex::zero(p);
        for c in self.0.iter().rev() {
            acc = &acc.scale(x) + c;
        }
        acc
    }

    /// `p(a + b x)` for integer `a`, `b`.
    pub fn compose_affine(&self, a: i64, b: i64) -> ComplexPolynomial {
        let n = self.0.len();
        let p = self.0.first().map(|c| c.prec()).unwrap_or(crate::real::DEFAULT_PREC);
        let mut out = vec![Complex::zero(p); n];
        // (a + b x)^d = sum_e C(d,e) a^{d-e} b^e x^e
        for (d, c) in self.0.iter().enumerate() {
            for e in 0..=d {
                let w = binomial(d as u64, e as u64) * BigInt::from(a).pow((d - e) as u32) * BigInt::from(b).pow(e as u32);
                if w.is_zero() {
                    continue;
                }
                out[e] = &out[e] + &c.scale(&Real::from_bigint(&w, p));
            }
        }
        ComplexPolynomial(out)
    }

    pub fn abs_coeff_sum(&self) -> f64 {
        self.0.iter().map(|c| c.abs_f64()).sum()
    }
}

/// `H_n(x) = sum_j C(n,j) h_j x^{n-j}`.
pub fn twisted_euler_polynomial(zeta: &RotationNumber, n: usize, p: usize) -> Result<ComplexPolynomial> {
    let h = twisted_euler_numbers(zeta, n, p)?;
    let mut c = vec![Complex::zero(p); n + 1];
    for (j, hj) in h.iter().enumerate() {
        c[n - j] = hj.scale(&Real::from_bigint(&binomial(n as u64, j as u64), p));
    }
    Ok(ComplexPolynomial(c))
}

/// Quasi-periodic extension `H̃(x + j) = zeta^{-j} H(x)`.
pub fn periodic_twisted_eval(zeta: &RotationNumber, n: usize, x: &Real) -> Result<Complex> {
    let p = x.prec();
    let fl = x.floor();
    let fr = x - &fl;
    let v = twisted_euler_polynomial(zeta, n, p)?.eval(&fr);
    Ok(&zeta.pow(-(fl.to_f64() as i64)).to_complex(p) * &v)
}

pub fn twisted_sup_bound(zeta: &RotationNumber, n: usize, p: usize) -> Result<f64> {
    Ok(twisted_euler_polynomial(zeta, n, p)?.abs_coeff_sum())
}
