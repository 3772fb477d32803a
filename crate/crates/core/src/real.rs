//! Multiprecision real and complex scalars on top of `astro_float`.
//!
//! Every value carries its own precision; binary operations run at the larger
//! of the two operand precisions.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use spin::Mutex;

pub const DEFAULT_PREC: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

// A handful of constant caches so parallel callers rarely contend.
static CONSTS: [Mutex<Option<Consts>>; 8] = [const { Mutex::new(None) }; 8];

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    for slot in CONSTS.iter() {
        if let Some(mut guard) = slot.try_lock() {
            let cc = guard.get_or_insert_with(|| Consts::new().expect("constant cache"));
            return f(cc);
        }
    }
    let mut guard = CONSTS[0].lock();
    let cc = guard.get_or_insert_with(|| Consts::new().expect("constant cache"));
    f(cc)
}

#[derive(Clone)]
pub struct Real(BigFloat);

impl Real {
    pub fn from_i64(v: i64, p: usize) -> Self {
        Real(BigFloat::from_i64(v, p))
    }

    pub fn from_u64(v: u64, p: usize) -> Self {
        Real(BigFloat::from_u64(v, p))
    }

    pub fn from_f64(v: f64, p: usize) -> Self {
        Real(BigFloat::from_f64(v, p))
    }

    pub fn zero(p: usize) -> Self {
        Real(BigFloat::new(p))
    }

    pub fn one(p: usize) -> Self {
        Self::from_i64(1, p)
    }

    pub fn from_bigint(v: &BigInt, p: usize) -> Self {
        let (sign, digits) = v.to_u64_digits();
        let wp = p + 64;
        let base = BigFloat::from_u64(1, wp).mul(&BigFloat::from_u64(1 << 32, wp), wp, RM);
        let base = base.mul(&BigFloat::from_u64(1 << 32, wp), wp, RM);
        let mut acc = BigFloat::new(wp);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, wp, RM).add(&BigFloat::from_u64(*d, wp), wp, RM);
        }
        if sign == BigSign::Minus {
            acc = BigFloat::neg(&acc);
        }
        Real(acc).with_prec(p)
    }

    pub fn from_ratio(v: &BigRational, p: usize) -> Self {
        let n = Self::from_bigint(v.numer(), p + 64);
        let d = Self::from_bigint(v.denom(), p + 64);
        Real(n.0.div(&d.0, p, RM))
    }

    pub fn parse(s: &str, p: usize) -> Option<Self> {
        let v = with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, p, RM, cc));
        if v.is_nan() || v.is_inf() {
            None
        } else {
            Some(Real(v))
        }
    }

    pub fn prec(&self) -> usize {
        self.0.mantissa_max_bit_len().unwrap_or(DEFAULT_PREC)
    }

    pub fn with_prec(mut self, p: usize) -> Self {
        let _ = self.0.set_precision(p, RM);
        self
    }

    pub fn inner(&self) -> &BigFloat {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Real(self.0.reciprocal(self.prec(), RM))
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.sqrt(self.prec(), RM))
    }

    pub fn ln(&self) -> Self {
        let p = self.prec();
        Real(with_consts(|cc| self.0.ln(p, RM, cc)))
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        Real(with_consts(|cc| self.0.exp(p, RM, cc)))
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let p = self.prec();
        with_consts(|cc| (Real(self.0.sin(p, RM, cc)), Real(self.0.cos(p, RM, cc))))
    }

    pub fn atan(&self) -> Self {
        let p = self.prec();
        Real(with_consts(|cc| self.0.atan(p, RM, cc)))
    }

    pub fn pi(p: usize) -> Self {
        Real(with_consts(|cc| cc.pi(p, RM)))
    }

    pub fn ln2(p: usize) -> Self {
        Real(with_consts(|cc| cc.ln_2(p, RM)))
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec();
        let r = Real(self.0.powi(n.unsigned_abs() as usize, p + 16, RM));
        let r = if n < 0 { r.recip() } else { r };
        r.with_prec(p)
    }

    pub fn floor(&self) -> Self {
        Real(self.0.floor())
    }

    pub fn fract(&self) -> Self {
        self - &self.floor()
    }

    /// Nearest f64 (truncating beyond the second word of mantissa).
    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf() {
            return if self.0.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let Some((m, _, s, e, _)) = self.0.as_raw_parts() else {
            return 0.0;
        };
        if m.iter().all(|w| *w == 0) {
            return 0.0;
        }
        let len = m.len();
        let mut frac = m[len - 1] as f64 * ldexp(1.0, -64);
        if len > 1 {
            frac += m[len - 2] as f64 * ldexp(1.0, -128);
        }
        let v = frac * ldexp(1.0, e as i64);
        if s == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Decimal digits sufficient for the value to re-parse to the same bits.
    pub fn to_decimal(&self) -> String {
        if self.0.is_zero() {
            return String::from("0");
        }
        // the default digit count can fall a couple of digits short; widen until it re-parses exactly
        let p = self.prec();
        let mut out = String::from("NaN");
        for extra in [0usize, 16, 64, 256] {
            let wide = self.clone().with_prec(p + extra);
            match with_consts(|cc| wide.0.format(Radix::Dec, RM, cc)) {
                Ok(s) => {
                    let exact = Real::parse(&s, p).is_some_and(|back| back == *self);
                    out = s;
                    if exact {
                        break;
                    }
                }
                Err(_) => break,
            }
        }
        out
    }

    pub fn min_prec(&self, other: &Self) -> usize {
        self.prec().min(other.prec())
    }
}

/// `x * 2^e` for f64 without std.
pub fn ldexp(x: f64, e: i64) -> f64 {
    let mut v = x;
    let mut e = e;
    while e > 1000 {
        v *= f64::from_bits(((1000 + 1023) as u64) << 52);
        e -= 1000;
    }
    while e < -1000 {
        v *= f64::from_bits(((-1000i64 + 1023) as u64) << 52);
        e += 1000;
    }
    v * f64::from_bits(((e + 1023) as u64) << 52)
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(d) => write!(f, "{:.*e}", d, self.to_f64()),
            None => write!(f, "{}", self.to_decimal()),
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.prec().max(rhs.prec());
                Real(self.0.$m(&rhs.0, p, RM))
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(BigFloat::neg(&self.0))
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(BigFloat::neg(&self.0))
    }
}

#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(p: usize) -> Self {
        Complex::new(Real::zero(p), Real::zero(p))
    }

    pub fn one(p: usize) -> Self {
        Complex::from_real(Real::one(p))
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Complex::new(re, Real::zero(p))
    }

    pub fn from_i64(v: i64, p: usize) -> Self {
        Complex::from_real(Real::from_i64(v, p))
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        Complex::new(Real::from_f64(re, p), Real::from_f64(im, p))
    }

    pub fn from_ratio(v: &BigRational, p: usize) -> Self {
        Complex::from_real(Real::from_ratio(v, p))
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(self, p: usize) -> Self {
        Complex::new(self.re.with_prec(p), self.im.with_prec(p))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn abs_f64(&self) -> f64 {
        let (a, b) = (self.re.to_f64(), self.im.to_f64());
        libm::hypot(a, b)
    }

    pub fn scale(&self, k: &Real) -> Self {
        Complex::new(&self.re * k, &self.im * k)
    }

    pub fn mul_i(&self) -> Self {
        Complex::new(-&self.im, self.re.clone())
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        if self.im.is_zero() {
            return Complex::new(r, self.im.clone());
        }
        let (s, c) = self.im.sin_cos();
        Complex::new(&r * &c, &r * &s)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let modulus = self.abs().ln();
        let arg = if self.im.is_zero() {
            if self.re.is_negative() {
                Real::pi(p)
            } else {
                Real::zero(p)
            }
        } else {
            atan2(&self.im, &self.re)
        };
        Complex::new(modulus, arg)
    }

    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec();
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Complex::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `e^{2 pi i num/den}`, exact at the quarter turns.
    pub fn root_of_unity(num: i64, den: i64, p: usize) -> Self {
        let den = den.max(1);
        let num = num.rem_euclid(den);
        let (z, o) = (Real::zero(p), Real::one(p));
        if num == 0 {
            return Complex::new(o, z);
        }
        if 2 * num == den {
            return Complex::new(-o, z);
        }
        if 4 * num == den {
            return Complex::new(z, o);
        }
        if 4 * num == 3 * den {
            return Complex::new(z, -o);
        }
        let wp = p + 16;
        let ang = Real::pi(wp) * Real::from_i64(2 * num, wp) / Real::from_i64(den, wp);
        let (s, c) = ang.sin_cos();
        Complex::new(c.with_prec(p), s.with_prec(p))
    }

    /// `x^{-s}` for real `x > 0` given `ln x`.
    pub fn pow_neg_from_ln(ln_x: &Real, s: &Complex) -> Self {
        let e = Complex::new(-(&s.re * ln_x), -(&s.im * ln_x));
        e.exp()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

pub fn atan2(y: &Real, x: &Real) -> Real {
    let p = y.prec().max(x.prec());
    if x.is_zero() {
        let h = Real::pi(p) / Real::from_i64(2, p);
        return if y.is_negative() { -h } else { h };
    }
    let base = (y / x).atan();
    if !x.is_negative() {
        base
    } else if y.is_negative() {
        base - Real::pi(p)
    } else {
        base + Real::pi(p)
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(17);
        let (a, b) = self.to_f64_pair();
        if b >= 0.0 {
            write!(f, "{:.*e}+{:.*e}i", d, a, d, b)
        } else {
            write!(f, "{:.*e}-{:.*e}i", d, a, d, -b)
        }
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        if self.im.is_zero() && rhs.im.is_zero() {
            let p = self.prec().max(rhs.prec());
            return Complex::new(&self.re * &rhs.re, Real::zero(p));
        }
        Complex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        if rhs.im.is_zero() {
            return Complex::new(&self.re / &rhs.re, &self.im / &rhs.re);
        }
        self * &rhs.recip()
    }
}

macro_rules! complex_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &Complex) -> Complex {
                (&self).$m(rhs)
            }
        }
        impl $tr<Complex> for &Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                self.$m(&rhs)
            }
        }
    };
}

complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

/// Sum helper that keeps the working precision of the first operand.
pub fn sum_complex<'a>(p: usize, it: impl IntoIterator<Item = &'a Complex>) -> Complex {
    let mut acc = Complex::zero(p);
    for z in it {
        acc = &acc + z;
    }
    acc
}

/// `ln n` for `n = 1..len` built from primes: each composite costs one addition.
pub struct LogTable {
    prec: usize,
    logs: Vec<Real>,
}

impl LogTable {
    pub fn new(len: usize, prec: usize) -> Self {
        let mut t = LogTable { prec, logs: Vec::new() };
        t.extend_to(len);
        t
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// `ln n`; index 0 is unused.
    pub fn get(&self, n: usize) -> &Real {
        &self.logs[n]
    }

    pub fn len(&self) -> usize {
        self.logs.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn extend_to(&mut self, len: usize) {
        let p = self.prec;
        if self.logs.is_empty() {
            self.logs.push(Real::zero(p));
            self.logs.push(Real::zero(p));
        }
        while self.logs.len() <= len {
            let n = self.logs.len();
            let d = smallest_factor(n);
            let v = if d == n {
                // ln p = ln(p-1) + 2 atanh(1/(2p-1)), series in 1/(2p-1)^2
                let a = atanh_inv(2 * n as u64 - 1, p + 8);
                (&self.logs[n - 1] + &(&a + &a)).with_prec(p)
            } else {
                &self.logs[d] + &self.logs[n / d]
            };
            self.logs.push(v);
        }
    }
}

fn smallest_factor(n: usize) -> usize {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// atanh(1/q) for integer q >= 3.
fn atanh_inv(q: u64, p: usize) -> Real {
    let qr = Real::from_u64(q, p);
    let q2 = &qr * &qr;
    let mut pw = qr.recip();
    let mut acc = pw.clone();
    let mut k = 1u64;
    let eps_bits = p as i64 + 4;
    loop {
        pw = &pw / &q2;
        let term = &pw / &Real::from_u64(2 * k + 1, p);
        acc = &acc + &term;
        k += 1;
        let e = term.inner().exponent().unwrap_or(i32::MIN) as i64;
        let ea = acc.inner().exponent().unwrap_or(0) as i64;
        if term.is_zero() || ea - e > eps_bits {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_conversion() {
        for v in [1.0, 3.0, 0.1, -2.5e-7, 12345.678, 1e300] {
            assert_eq!(Real::from_f64(v, 128).to_f64(), v);
        }
    }

    #[test]
    fn prime_log_table() {
        let t = LogTable::new(200, 128);
        for n in [2usize, 3, 7, 97, 199, 200] {
            let direct = Real::from_u64(n as u64, 128).ln();
            let d = (&direct - t.get(n)).abs().to_f64();
            assert!(d < 1e-36, "n={n} diff={d}");
        }
    }

    #[test]
    fn quarter_turns_exact() {
        let i = Complex::root_of_unity(1, 4, 128);
        assert!(i.re.is_zero());
        assert_eq!(i.im.to_f64(), 1.0);
        let w = Complex::root_of_unity(1, 3, 128);
        let w3 = w.powi(3);
        assert!((&w3 - &Complex::one(128)).abs().to_f64() < 1e-36);
    }

    #[test]
    fn decimal_round_trip() {
        let x = Real::pi(128) / Real::from_i64(7, 128);
        let s = x.to_decimal();
        let y = Real::parse(&s, 128).unwrap();
        assert!(x == y, "{s}");
    }

    #[test]
    fn ratio_conversion() {
        let r = BigRational::new(BigInt::from(-691), BigInt::from(2730));
        let x = Real::from_ratio(&r, 128).to_f64();
        assert!((x + 691.0 / 2730.0).abs() < 1e-16);
    }
}
