//! Finite combinations of `(log t)^l t^{-m}` on `(1, inf)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::real::{Complex, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleTerm {
    pub l: u32,
    pub m: i64,
    pub coeff: Complex,
}

#[derive(Clone, Debug, Default)]
pub struct ScaleFunction {
    terms: BTreeMap<(u32, i64), Complex>,
}

/// Error order `O(n^{-m} (log n)^l)` of a truncated expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErrorOrder {
    pub m: i64,
    pub l: u32,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl ScaleFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(l: u32, m: i64, coeff: Complex) -> Self {
        let mut f = Self::zero();
        f.add_term(l, m, coeff);
        f
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ScaleTerm>) -> Self {
        let mut f = Self::zero();
        for t in terms {
            f.add_term(t.l, t.m, t.coeff);
        }
        f
    }

    /// Coefficients given as f64 pairs.
    pub fn from_f64_terms(terms: &[(u32, i64, f64)], p: usize) -> Self {
        let mut f = Self::zero();
        for &(l, m, c) in terms {
            f.add_term(l, m, Complex::from_f64(c, 0.0, p));
        }
        f
    }

    pub fn add_term(&mut self, l: u32, m: i64, coeff: Complex) {
        if coeff.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&(l, m)) {
            Some(c) => &c + &coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert((l, m), merged);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, i64, &Complex)> {
        self.terms.iter().map(|(&(l, m), c)| (l, m, c))
    }

    pub fn coeff(&self, l: u32, m: i64) -> Option<&Complex> {
        self.terms.get(&(l, m))
    }

    /// Smallest decay index present.
    pub fn min_decay(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.1).min()
    }

    pub fn max_decay(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn max_log(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn prec(&self) -> usize {
        self.terms.values().map(|c| c.prec()).max().unwrap_or(crate::real::DEFAULT_PREC)
    }

    pub fn add(&self, other: &ScaleFunction) -> ScaleFunction {
        let mut out = self.clone();
        for (l, m, c) in other.terms() {
            out.add_term(l, m, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Complex) -> ScaleFunction {
        let mut out = Self::zero();
        for (l, m, c) in self.terms() {
            out.add_term(l, m, c * k);
        }
        out
    }

    /// Multiply by `t^d`.
    pub fn mul_power(&self, d: i64) -> ScaleFunction {
        ScaleFunction { terms: self.terms.iter().map(|(&(l, m), c)| ((l, m - d), c.clone())).collect() }
    }

    pub fn with_prec(&self, p: usize) -> ScaleFunction {
        ScaleFunction { terms: self.terms.iter().map(|(k, c)| (*k, c.clone().with_prec(p))).collect() }
    }

    pub fn differentiate(&self) -> ScaleFunction {
        let mut out = Self::zero();
        for (l, m, c) in self.terms() {
            let p = c.prec();
            if l > 0 {
                out.add_term(l - 1, m + 1, c.scale(&Real::from_i64(l as i64, p)));
            }
            if m != 0 {
                out.add_term(l, m + 1, c.scale(&Real::from_i64(-m, p)));
            }
        }
        out
    }

    pub fn derivative(&self, order: usize) -> ScaleFunction {
        let mut f = self.clone();
        for _ in 0..order {
            f = f.differentiate();
        }
        f
    }

    /// Exact antiderivative with zero constant of integration.
    pub fn antiderivative(&self) -> ScaleFunction {
        let mut out = Self::zero();
        for (l, m, c) in self.terms() {
            let p = c.prec();
            if m == 1 {
                out.add_term(l + 1, 0, c.scale(&Real::from_ratio(&ratio(1, l as i64 + 1), p)));
                continue;
            }
            // t^{1-m} sum_j (-1)^j l!/(l-j)! L^{l-j} / (1-m)^{j+1}
            let mut falling = BigInt::one();
            let one_minus_m = BigInt::from(1 - m);
            let mut den = one_minus_m.clone();
            for j in 0..=l {
                let mut r = BigRational::new(falling.clone(), den.clone());
                if j % 2 == 1 {
                    r = -r;
                }
                out.add_term(l - j, m - 1, c.scale(&Real::from_ratio(&r, p)));
                falling *= BigInt::from(l - j);
                den *= &one_minus_m;
            }
        }
        out
    }

    /// Value at `t > 1`.
    pub fn evaluate(&self, t: &Real) -> Result<Complex> {
        if *t <= Real::one(t.prec()) {
            return Err(Error::InvalidArgument(alloc::format!("evaluation point {} must exceed 1", t.to_f64())));
        }
        Ok(self.value_at(t))
    }

    /// Value at `t >= 1` (the left endpoint of summation ranges).
    pub fn value_at(&self, t: &Real) -> Complex {
        let lt = t.ln();
        self.value_with_log(t, &lt)
    }

    pub fn value_with_log(&self, t: &Real, ln_t: &Real) -> Complex {
        let p = self.prec().max(t.prec());
        let mut acc = Complex::zero(p);
        let mut lpow: Vec<Real> = Vec::new();
        let mut tpow: BTreeMap<i64, Real> = BTreeMap::new();
        for (l, m, c) in self.terms() {
            while lpow.len() <= l as usize {
                let next = match lpow.last() {
                    None => Real::one(p),
                    Some(x) => x * ln_t,
                };
                lpow.push(next);
            }
            let tp = tpow.entry(m).or_insert_with(|| t.clone().with_prec(p).powi(-m)).clone();
            let k = &lpow[l as usize] * &tp;
            acc = &acc + &c.scale(&k);
        }
        acc
    }

    /// Value at a positive integer, with `ln n` supplied.
    pub fn value_at_int(&self, n: u64, ln_n: &Real) -> Complex {
        let p = self.prec().max(ln_n.prec());
        self.value_with_log(&Real::from_u64(n, p), ln_n)
    }

    /// Upper bound for `int_a^inf |f(t)| dt`; infinite when a term has `m <= 1`.
    pub fn abs_tail_bound(&self, a: f64) -> f64 {
        let mut total = 0.0;
        let la = libm::log(a);
        for (l, m, c) in self.terms() {
            if m <= 1 {
                return f64::INFINITY;
            }
            let mu = (m - 1) as f64;
            // sum_j l!/(l-j)! (log a)^{l-j} a^{1-m} / (m-1)^{j+1}
            let mut falling = 1.0;
            let mut s = 0.0;
            for j in 0..=l {
                s += falling * libm::pow(la, (l - j) as f64) / libm::pow(mu, (j + 1) as f64);
                falling *= (l - j) as f64;
            }
            total += c.abs_f64() * s * libm::pow(a, 1.0 - m as f64);
        }
        total * (1.0 + 1e-12)
    }

    /// Expansion of `f(n + t0)` in powers of `1/n` and `log n`, exact up to
    /// `O(n^{-A-1} (log n)^L)`.
    pub fn shift_expand(&self, t0: u64, a: i64) -> (ScaleFunction, ErrorOrder) {
        let err = ErrorOrder { m: a + 1, l: self.max_log() };
        if t0 == 0 {
            return (self.clone(), err);
        }
        let mut out = Self::zero();
        let t = BigInt::from(t0);
        for (l, m, c) in self.terms() {
            if m > a {
                continue;
            }
            let depth = (a - m) as usize;
            // (1 + t0 x)^{-m} up to x^depth
            let mut binom = Vec::with_capacity(depth + 1);
            let mut b = BigRational::one();
            let mut tp = BigRational::one();
            for d in 0..=depth {
                binom.push(&b * &tp);
                b = b * BigRational::new(BigInt::from(-m - d as i64), BigInt::from(d as i64 + 1));
                tp *= BigRational::from_integer(t.clone());
            }
            // lambda(x) = log(1 + t0 x)
            let mut lam = alloc::vec![BigRational::zero(); depth + 1];
            let mut tp = BigRational::one();
            for d in 1..=depth {
                tp *= BigRational::from_integer(t.clone());
                let v = &tp / BigRational::from_integer(BigInt::from(d as i64));
                lam[d] = if d % 2 == 1 { v } else { -v };
            }
            // sum_i C(l,i) L^{l-i} lambda^i (1 + t0 x)^{-m}
            let mut lam_pow = alloc::vec![BigRational::zero(); depth + 1];
            lam_pow[0] = BigRational::one();
            let mut cli = BigRational::one();
            for i in 0..=l {
                let prod = poly_mul_trunc(&lam_pow, &binom, depth);
                let p = c.prec();
                for (e, r) in prod.iter().enumerate() {
                    if r.is_zero() {
                        continue;
                    }
                    let k = &cli * r;
                    out.add_term(l - i, m + e as i64, c.scale(&Real::from_ratio(&k, p)));
                }
                lam_pow = poly_mul_trunc(&lam_pow, &lam, depth);
                cli = cli * BigRational::new(BigInt::from(l - i), BigInt::from(i + 1));
                if lam_pow.iter().all(|x| x.is_zero()) {
                    break;
                }
            }
        }
        (out, err)
    }

    /// Sum of `|coeff|` per term, as f64.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).sum()
    }
}

fn poly_mul_trunc(a: &[BigRational], b: &[BigRational], deg: usize) -> Vec<BigRational> {
    let mut out = alloc::vec![BigRational::zero(); deg + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j > deg {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

impl PartialEq for ScaleFunction {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

/// Whether two functions agree termwise up to an absolute tolerance.
pub fn approx_eq(a: &ScaleFunction, b: &ScaleFunction, tol: f64) -> bool {
    let d = a.add(&b.scale(&Complex::from_i64(-1, b.prec().max(a.prec()))));
    let ok = d.terms().all(|(_, _, c)| c.abs_f64() <= tol);
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 128;

    fn sf(t: &[(u32, i64, f64)]) -> ScaleFunction {
        ScaleFunction::from_f64_terms(t, P)
    }

    #[test]
    fn derivatives() {
        assert_eq!(sf(&[(0, 1, 1.0)]).differentiate(), sf(&[(0, 2, -1.0)]));
        assert_eq!(sf(&[(1, 0, 1.0)]).differentiate(), sf(&[(0, 1, 1.0)]));
        assert_eq!(sf(&[(2, 3, 1.0)]).differentiate(), sf(&[(1, 4, 2.0), (2, 4, -3.0)]));
        assert!(sf(&[(0, 0, 4.0)]).differentiate().is_zero());
    }

    #[test]
    fn antiderivatives() {
        assert_eq!(sf(&[(0, 1, 1.0)]).antiderivative(), sf(&[(1, 0, 1.0)]));
        assert_eq!(sf(&[(0, 2, 1.0)]).antiderivative(), sf(&[(0, 1, -1.0)]));
        assert_eq!(sf(&[(1, 2, 1.0)]).antiderivative(), sf(&[(1, 1, -1.0), (0, 1, -1.0)]));
        let f = sf(&[(3, -2, 0.5), (2, 1, 1.5), (1, 4, -2.0)]);
        assert!(approx_eq(&f.antiderivative().differentiate(), &f, 1e-35));
    }

    #[test]
    fn evaluation() {
        let e = Real::one(P).exp();
        assert_eq!(sf(&[(0, 0, 5.0)]).evaluate(&Real::from_i64(7, P)).unwrap().re.to_f64(), 5.0);
        let v = sf(&[(0, 1, 1.0)]).evaluate(&e).unwrap();
        assert!((v.re.to_f64() - (-1.0f64).exp()).abs() < 1e-16);
        let v = sf(&[(1, 1, 1.0)]).evaluate(&(&e * &e)).unwrap();
        assert!((v.re.to_f64() - 2.0 * (-2.0f64).exp()).abs() < 1e-16);
        assert!(sf(&[(0, 0, 1.0)]).evaluate(&Real::one(P)).is_err());
    }

    #[test]
    fn tail_bounds() {
        assert!((sf(&[(0, 2, 1.0)]).abs_tail_bound(10.0) - 0.1).abs() < 1e-12);
        assert!(sf(&[(0, 0, 1.0)]).abs_tail_bound(2.0).is_infinite());
        let b = sf(&[(1, 2, 1.0)]).abs_tail_bound(core::f64::consts::E);
        let exact = 2.0 / core::f64::consts::E;
        assert!(b >= exact && b <= 2.0 * exact);
    }

    #[test]
    fn shifts() {
        let (g, e) = sf(&[(0, 1, 1.0)]).shift_expand(1, 3);
        assert!(approx_eq(&g, &sf(&[(0, 1, 1.0), (0, 2, -1.0), (0, 3, 1.0)]), 1e-35));
        assert_eq!(e.m, 4);
        let (g, e) = sf(&[(1, 0, 1.0)]).shift_expand(1, 2);
        assert!(approx_eq(&g, &sf(&[(1, 0, 1.0), (0, 1, 1.0), (0, 2, -0.5)]), 1e-35));
        assert_eq!(e.m, 3);
        let f = sf(&[(2, 3, 1.0)]);
        assert_eq!(f.shift_expand(0, 5).0, f);
    }
}
