//! Euler–Maclaurin and the root-of-unity (Euler–Boole type) summation
//! formulas, and partial-sum expansions of single scale terms.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::asymptotics::{AsymptoticExpansion, Character};
use crate::error::{Error, Result};
use crate::eulerpoly::{
    bernoulli_number, bernoulli_polynomial, inner_product, twisted_euler_numbers, twisted_euler_polynomial,
    ComplexPolynomial, RationalPolynomial,
};
use crate::real::{ldexp, Complex, Real};
use crate::rootsofunity::RotationNumber;
use crate::scalefun::ScaleFunction;

#[derive(Clone, Debug)]
pub struct BoundaryTerm {
    pub label: String,
    pub value: Complex,
}

#[derive(Clone, Debug)]
pub struct SummationBreakdown {
    pub total: Complex,
    pub boundary_terms: Vec<BoundaryTerm>,
    /// The remainder block, evaluated in closed form.
    pub remainder: Complex,
    /// Bound on `|remainder|` plus a rounding allowance.
    pub remainder_estimate: f64,
    pub order_used: usize,
}

#[derive(Clone, Debug)]
pub struct TermSumResult {
    pub constant: Complex,
    /// The `n`-dependent part (no constant-sequence term).
    pub expansion: AsymptoticExpansion,
    pub precision: i64,
    /// Change of the matched constant between the two cutoffs.
    pub constant_error: f64,
}

/// Default matching tolerance `2^{-floor(0.65 p)}`.
pub fn default_tol(prec: usize) -> f64 {
    ldexp(1.0, -((prec as f64 * 0.65) as i64))
}

#[derive(Clone, Debug)]
pub struct MatchConfig {
    pub prec: usize,
    pub tol: f64,
    /// First matching cutoff.
    pub start: u64,
    /// Largest cutoff tried before giving up.
    pub max: u64,
    /// Extra expansion order used while matching.
    pub boost: i64,
    /// Extra working bits for sums that grow with the cutoff.
    pub guard: usize,
}

impl MatchConfig {
    pub fn for_prec(prec: usize) -> Self {
        MatchConfig { prec, tol: default_tol(prec), start: 1000, max: 64_000, boost: 10, guard: 0 }
    }

    pub fn work_prec(&self) -> usize {
        self.prec + 32 + self.guard
    }

    /// Copy with enough guard bits to cancel sums of size up to
    /// `N^growth (log N)^logs` at the largest cutoff `N`.
    pub fn for_growth(&self, growth: i64, logs: u32) -> Self {
        let bits = (64 - self.max.max(2).leading_zeros()) as usize;
        let guard = growth.max(0) as usize * bits + 4 * logs as usize + 16;
        MatchConfig { guard: self.guard.max(guard), ..self.clone() }
    }
}

fn label(s: &str) -> String {
    String::from(s)
}

/// Bound for `int_a^b |g(t)| dt`, `1 <= a <= b`.
pub fn abs_integral_bound(g: &ScaleFunction, a: u64, b: u64, p: usize) -> f64 {
    let ar = Real::from_u64(a, p);
    let br = Real::from_u64(b, p);
    let mut total = 0.0;
    for (l, m, c) in g.terms() {
        let mono = ScaleFunction::monomial(l, m, Complex::one(p)).antiderivative();
        let v = (&mono.value_at(&br) - &mono.value_at(&ar)).re.to_f64();
        total += c.abs_f64() * v.abs();
    }
    total
}

/// `max_{[0,1]} |P|` bounded by the coefficient sum of `P(1/2 + y/2)`.
fn centered_bound_rational(poly: &RationalPolynomial) -> f64 {
    let h = BigRational::new(BigInt::one(), BigInt::from(2));
    let q = poly.compose_affine(&h, &h);
    Real::from_ratio(&q.abs_coeff_sum(), 64).to_f64()
}

fn centered_bound_complex(poly: &ComplexPolynomial) -> f64 {
    let n = poly.0.len();
    let p = poly.0.first().map(|c| c.prec()).unwrap_or(128);
    let half = Real::from_f64(0.5, p);
    // coefficients of P(1/2 + y/2)
    let mut sum = 0.0;
    for e in 0..n {
        let mut acc = Complex::zero(p);
        for (d, c) in poly.0.iter().enumerate().skip(e) {
            let b = crate::eulerpoly::binomial(d as u64, e as u64);
            let w = &Real::from_bigint(&b, p) * &half.powi(d as i64);
            acc = &acc + &c.scale(&w);
        }
        sum += acc.abs_f64();
    }
    sum
}

fn work_prec_for(p: usize, m: usize, n: u64) -> usize {
    let lg = 64 - n.leading_zeros() as usize;
    p + 32 + (m + 1) * lg + m
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, b| a * BigInt::from(b))
}

/// `sum_{i=1}^{n-1} f(i)` via Euler–Maclaurin of order `m`, remainder in closed form.
pub fn euler_maclaurin(f: &ScaleFunction, n: u64, m: usize) -> Result<SummationBreakdown> {
    if n < 2 || m < 1 {
        return Err(Error::InvalidArgument(format!("need n >= 2 and m >= 1, got n={n}, m={m}")));
    }
    let p = f.prec();
    let wp = work_prec_for(p, m, n);
    let f = f.with_prec(wp);
    let one = Real::one(wp);
    let nr = Real::from_u64(n, wp);
    let big_f = f.antiderivative();
    let integral = &big_f.value_at(&nr) - &big_f.value_at(&one);
    let mut boundary = vec![BoundaryTerm { label: label("integral"), value: integral.clone() }];
    let mut total = integral;
    let mut d = f.clone();
    for j in 1..=m {
        let b = Real::from_ratio(&(bernoulli_number(j) / BigRational::from_integer(factorial(j))), wp);
        if !b.is_zero() {
            let v = (&d.value_at(&nr) - &d.value_at(&one)).scale(&b);
            total = &total + &v;
            boundary.push(BoundaryTerm { label: format!("B{j}/{j}! (f^({})(n) - f^({})(1))", j - 1, j - 1), value: v });
        }
        d = d.differentiate();
    }
    // d = f^{(m)}
    let bm = bernoulli_polynomial(m);
    let anti: Vec<ScaleFunction> = (0..=m).map(|e| d.mul_power(e as i64).antiderivative()).collect();
    let vals: Vec<Vec<Complex>> = (1..=n)
        .map(|t| {
            let tr = Real::from_u64(t, wp);
            let lt = tr.ln();
            anti.iter().map(|a| a.value_with_log(&tr, &lt)).collect()
        })
        .collect();
    let mut rem = Complex::zero(wp);
    for i in 1..n {
        let shifted = bm.compose_affine(&BigRational::from_integer(BigInt::from(-(i as i64))), &BigRational::one());
        for (e, c) in shifted.coeffs().iter().enumerate() {
            let diff = &vals[i as usize][e] - &vals[i as usize - 1][e];
            rem = &rem + &diff.scale(&Real::from_ratio(c, wp));
        }
    }
    let sign = if m % 2 == 1 { 1 } else { -1 };
    let w = Real::from_ratio(&BigRational::new(BigInt::from(sign), factorial(m)), wp);
    let rem = rem.scale(&w);
    total = &total + &rem;
    let bound = centered_bound_rational(&bm) / Real::from_bigint(&factorial(m), 64).to_f64()
        * abs_integral_bound(&d, 1, n, wp);
    let slack = rounding_slack(p, &total, &boundary, &rem, n);
    Ok(SummationBreakdown {
        total: total.with_prec(p),
        boundary_terms: boundary.into_iter().map(|b| BoundaryTerm { label: b.label, value: b.value.with_prec(p) }).collect(),
        remainder: rem.with_prec(p),
        remainder_estimate: bound + slack,
        order_used: m,
    })
}

fn rounding_slack(p: usize, total: &Complex, parts: &[BoundaryTerm], rem: &Complex, n: u64) -> f64 {
    let mag: f64 = 1.0 + total.abs_f64() + rem.abs_f64() + parts.iter().map(|b| b.value.abs_f64()).sum::<f64>();
    mag * (n as f64 + 16.0) * ldexp(1.0, -(p as i64))
}

/// `sum_{a=1}^{n-1} zeta^a f(a)` for a primitive `k`-th root `zeta`, order `m`.
pub fn gen_euler_boole(f: &ScaleFunction, k: u64, zeta: &RotationNumber, n: u64, m: usize) -> Result<SummationBreakdown> {
    if k < 2 || !zeta.is_primitive(k) {
        return Err(Error::InvalidArgument(format!("{zeta} is not a primitive {k}-th root of unity")));
    }
    if n < k || m < 1 {
        return Err(Error::InvalidArgument(format!("need n >= k and m >= 1, got n={n}, k={k}, m={m}")));
    }
    let p = f.prec();
    let wp = work_prec_for(p, m, n);
    let f = f.with_prec(wp);
    let zp: Vec<Complex> = (0..k).map(|e| zeta.pow(e as i64).to_complex(wp)).collect();
    let zn = &zp[(n % k) as usize];
    let fv = |t: u64| f.value_at(&Real::from_u64(t, wp));
    let kinv = Real::from_i64(k as i64, wp).recip();
    // partial geometric sums sum_{a=lo}^{hi} zeta^a
    let geo = |lo: u64, hi: u64| {
        let mut s = Complex::zero(wp);
        for a in lo..=hi {
            s = &s + &zp[(a % k) as usize];
        }
        s
    };
    let mut parts = Vec::new();

    let mut b1 = Complex::zero(wp);
    for t in 1..k {
        b1 = &b1 + &(&fv(t) * &geo(1, t));
    }
    let mut b1n = Complex::zero(wp);
    for t in 0..k - 1 {
        b1n = &b1n + &(&fv(n + t) * &geo(t + 1, k - 1));
    }
    let block1 = (&b1 + &(zn * &b1n)).scale(&kinv);
    parts.push(BoundaryTerm { label: label("(i) endpoint values"), value: block1 });

    let mut block2 = Complex::zero(wp);
    for i in 1..k.saturating_sub(1) {
        let v = inner_product(k, zeta, 1, i, wp)?;
        block2 = &block2 + &(&v * &(&fv(i + 1) - &fv(i)));
    }
    parts.push(BoundaryTerm { label: label("(ii) lower differences"), value: block2 });

    let mut block3 = Complex::zero(wp);
    for i in 2..k {
        let v = inner_product(k, zeta, i, k - 1, wp)?;
        block3 = &block3 + &(&v * &(&fv(i + n - 1) - &fv(i + n - 2)));
    }
    let block3 = zn * &block3;
    parts.push(BoundaryTerm { label: label("(iii) upper differences"), value: block3 });

    let vfull = inner_product(k, zeta, 1, k - 1, wp)?;
    let h = twisted_euler_numbers(zeta, m.max(1), wp)?;
    let lo = Real::from_u64(k - 1, wp);
    let nr = Real::from_u64(n, wp);
    let zk1 = &zp[((k - 1) % k) as usize];
    let mut block4 = Complex::zero(wp);
    let mut d = f.differentiate();
    for i in 1..m {
        let w = Real::from_bigint(&factorial(i), wp).recip();
        let hi = h[i].scale(&w);
        let diff = &(zk1 * &d.value_at(&lo)) - &(zn * &d.value_at(&nr));
        block4 = &block4 + &(&hi * &diff);
        d = d.differentiate();
    }
    let block4 = &vfull * &block4;
    parts.push(BoundaryTerm { label: label("(iv) derivative terms"), value: block4 });

    // (v): on (i, i+1), H~_{m-1}(k - x) = zeta^{i+1} H_{m-1}(i + 1 - x)
    let hm = twisted_euler_polynomial(zeta, m - 1, wp)?;
    let anti: Vec<ScaleFunction> = (0..m).map(|e| d.mul_power(e as i64).antiderivative()).collect();
    let vals: Vec<Vec<Complex>> = (k - 1..=n)
        .map(|t| {
            let tr = Real::from_u64(t, wp);
            let lt = tr.ln();
            anti.iter().map(|a| a.value_with_log(&tr, &lt)).collect()
        })
        .collect();
    let mut rem = Complex::zero(wp);
    for i in k - 1..n {
        let poly = hm.compose_affine(i as i64 + 1, -1);
        let idx = (i - (k - 1)) as usize;
        let mut piece = Complex::zero(wp);
        for (e, c) in poly.0.iter().enumerate() {
            piece = &piece + &(c * &(&vals[idx + 1][e] - &vals[idx][e]));
        }
        rem = &rem + &(&zp[((i + 1) % k) as usize] * &piece);
    }
    let fm1 = Real::from_bigint(&factorial(m - 1), wp).recip();
    let rem = (&vfull * &rem).scale(&fm1);

    let mut total = Complex::zero(wp);
    for b in &parts {
        total = &total + &b.value;
    }
    total = &total + &rem;
    let bound = vfull.abs_f64() * centered_bound_complex(&hm) / Real::from_bigint(&factorial(m - 1), 64).to_f64()
        * abs_integral_bound(&d, k - 1, n, wp);
    let slack = rounding_slack(p, &total, &parts, &rem, n);
    Ok(SummationBreakdown {
        total: total.with_prec(p),
        boundary_terms: parts.into_iter().map(|b| BoundaryTerm { label: b.label, value: b.value.with_prec(p) }).collect(),
        remainder: rem.with_prec(p),
        remainder_estimate: bound + slack,
        order_used: m,
    })
}

/// Direct `sum_{a=1}^{n-1} zeta^a f(a)`.
pub fn direct_sum(f: &ScaleFunction, zeta: &RotationNumber, n: u64) -> Complex {
    let p = f.prec();
    let k = zeta.denominator();
    let zp: Vec<Complex> = (0..k).map(|e| zeta.pow(e as i64).to_complex(p + 16)).collect();
    let f = f.with_prec(p + 16);
    let mut acc = Complex::zero(p + 16);
    for a in 1..n {
        let v = f.value_at(&Real::from_u64(a, p + 16));
        acc = &acc + &(&zp[(a % k) as usize] * &v);
    }
    acc.with_prec(p)
}

/// The `n`-dependent profile of `sum_{a<n} xi^a (log a)^l a^{-m}` up to
/// `o(n^{-w})`. For `xi = 1` it may contain a constant-sequence term coming
/// from the boundary terms; callers merge it with the matched constant.
pub fn term_profile(xi: RotationNumber, l: u32, m: i64, w: i64, p: usize) -> Result<AsymptoticExpansion> {
    let f = ScaleFunction::monomial(l, m, Complex::one(p));
    let mut out = AsymptoticExpansion::new(w);
    if xi.is_one() {
        for (l2, m2, c) in f.antiderivative().terms() {
            out.add_term(Character::ONE, l2, m2, c.clone());
        }
        let jmax = (w - m + 2).max(1) as usize;
        let mut d = f.clone();
        for j in 1..=jmax {
            let b = bernoulli_number(j);
            if b != BigRational::from_integer(BigInt::from(0)) {
                let bj = Real::from_ratio(&(b / BigRational::from_integer(factorial(j))), p);
                for (l2, m2, c) in d.terms() {
                    out.add_term(Character::ONE, l2, m2, c.scale(&bj));
                }
            }
            d = d.differentiate();
            if d.is_zero() {
                break;
            }
        }
        return Ok(out);
    }
    if m > w {
        return Ok(out);
    }
    let k = xi.denominator();
    let zp: Vec<Complex> = (0..k).map(|e| xi.pow(e as i64).to_complex(p)).collect();
    let geo = |lo: u64, hi: u64| {
        let mut s = Complex::zero(p);
        for a in lo..=hi {
            s = &s + &zp[(a % k) as usize];
        }
        s
    };
    let shifts: Vec<ScaleFunction> = (0..k).map(|t| f.shift_expand(t, w).0).collect();
    let mut prof = ScaleFunction::zero();
    let kinv = Complex::from_real(Real::from_i64(k as i64, p).recip());
    for t in 0..k - 1 {
        prof = prof.add(&shifts[t as usize].scale(&(&geo(t + 1, k - 1) * &kinv)));
    }
    for i in 2..k {
        let v = inner_product(k, &xi, i, k - 1, p)?;
        let delta = shifts[(i - 1) as usize].add(&shifts[(i - 2) as usize].scale(&Complex::from_i64(-1, p)));
        prof = prof.add(&delta.scale(&v));
    }
    let mm = (w - m + 2).max(1) as usize;
    let vfull = inner_product(k, &xi, 1, k - 1, p)?;
    let h = twisted_euler_numbers(&xi, mm, p)?;
    let mut d = f.differentiate();
    for i in 1..mm {
        let hi = h[i].scale(&Real::from_bigint(&factorial(i), p).recip());
        prof = prof.add(&d.scale(&-(&vfull * &hi)));
        d = d.differentiate();
        if d.is_zero() {
            break;
        }
    }
    let x = Character(xi);
    for (l2, m2, c) in prof.terms() {
        out.add_term(x, l2, m2, c.clone());
    }
    Ok(out)
}

/// Match `constant = S(N) - expansion(N)` with a double-cutoff stability check.
/// Returns `(constant, |c(N) - c(2N)|, N)`.
pub fn match_constant<F>(nc: &AsymptoticExpansion, mut partial: F, cfg: &MatchConfig) -> Result<(Complex, f64, u64)>
where
    F: FnMut(u64) -> Result<Complex>,
{
    let wp = cfg.work_prec();
    let c_at = |n: u64, s: Complex| -> Complex {
        let ln = Real::from_u64(n, wp).ln();
        &s - &nc.evaluate(n, &ln)
    };
    let mut n = cfg.start.max(2);
    let mut c1 = c_at(n, partial(n)?);
    loop {
        let c2 = c_at(2 * n, partial(2 * n)?);
        let diff = (&c1 - &c2).abs_f64();
        if diff <= cfg.tol {
            return Ok((c2, diff, 2 * n));
        }
        if 2 * n >= cfg.max {
            if diff <= 10.0 * cfg.tol {
                return Ok((c2, diff, 2 * n));
            }
            return Err(Error::Precision(format!(
                "matched constant unstable: |c({n}) - c({})| = {diff:.3e} > 10 tol = {:.3e}",
                2 * n,
                10.0 * cfg.tol
            )));
        }
        n *= 2;
        c1 = c2;
    }
}

/// Expansion of `sum_{a<n} xi^a (log a)^l a^{-m}`: constant plus `n`-dependent part
/// to precision `a`.
pub fn term_sum_expansion(xi: RotationNumber, l: u32, m: i64, a: i64, cfg: &MatchConfig) -> Result<TermSumResult> {
    let cfg = &cfg.for_growth(1 - m, l + 1);
    let wp = cfg.work_prec();
    let hi = term_profile(xi, l, m, a.max(m) + cfg.boost, wp)?;
    let mut nc = hi.clone();
    let profile_const = nc.remove(Character::ONE, 0, 0).unwrap_or_else(|| Complex::zero(wp));
    let k = xi.denominator();
    let zp: Vec<Complex> = (0..k).map(|e| xi.pow(e as i64).to_complex(wp)).collect();
    let mut acc = Complex::zero(wp);
    let mut next = 1u64;
    let (c, err, _) = match_constant(
        &nc,
        |n| {
            while next < n {
                let r = Real::from_u64(next, wp);
                let mut v = r.powi(-m);
                if l > 0 {
                    let lg = r.ln();
                    for _ in 0..l {
                        v = &v * &lg;
                    }
                }
                acc = &acc + &zp[(next % k) as usize].scale(&v);
                next += 1;
            }
            Ok(acc.clone())
        },
        cfg,
    )?;
    let _ = profile_const;
    let mut expansion = nc.truncate(a);
    expansion.prune(ldexp(1.0, -(wp as i64) + 24));
    Ok(TermSumResult {
        constant: c.with_prec(cfg.prec),
        expansion: expansion.with_prec(cfg.prec),
        precision: a,
        constant_error: err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 128;

    fn brute(f: &ScaleFunction, zeta: &RotationNumber, n: u64) -> Complex {
        // independent float evaluation at doubled precision
        let p = 256;
        let k = zeta.denominator();
        let mut acc = Complex::zero(p);
        for a in 1..n {
            let ar = Real::from_u64(a, p);
            let la = ar.ln();
            let mut v = Complex::zero(p);
            for (l, m, c) in f.terms() {
                let t = &la.powi(l as i64) * &ar.powi(-m);
                v = &v + &c.clone().with_prec(p).scale(&t);
            }
            acc = &acc + &(&Complex::root_of_unity((zeta.numerator() * a % k) as i64, k as i64, p) * &v);
        }
        acc
    }

    #[test]
    fn em_constant_function() {
        let f = ScaleFunction::from_f64_terms(&[(0, 0, 1.0)], P);
        for m in 1..4 {
            let r = euler_maclaurin(&f, 17, m).unwrap();
            assert!((r.total.re.to_f64() - 16.0).abs() < 1e-30);
        }
    }

    #[test]
    fn em_inverse_square() {
        let f = ScaleFunction::from_f64_terms(&[(0, 2, 1.0)], P);
        let r = euler_maclaurin(&f, 50, 4).unwrap();
        let b = brute(&f, &RotationNumber::ONE, 50);
        let d = (&r.total - &b).abs_f64();
        assert!(d < 1e-25 && d <= r.remainder_estimate, "{d}");
    }

    #[test]
    fn em_log() {
        let f = ScaleFunction::from_f64_terms(&[(1, 0, 1.0)], P);
        let r = euler_maclaurin(&f, 30, 3).unwrap();
        let b = brute(&f, &RotationNumber::ONE, 30);
        assert!((&r.total - &b).abs_f64() < 1e-25);
    }

    #[test]
    fn boole_examples() {
        let f = ScaleFunction::from_f64_terms(&[(0, 2, 1.0)], P);
        let m1 = RotationNumber::MINUS_ONE;
        let r = gen_euler_boole(&f, 2, &m1, 25, 5).unwrap();
        assert!((&r.total - &brute(&f, &m1, 25)).abs_f64() < 1e-25);
        let w = RotationNumber::new(1, 3).unwrap();
        let r = gen_euler_boole(&f, 3, &w, 25, 5).unwrap();
        assert!((&r.total - &brute(&f, &w, 25)).abs_f64() < 1e-20);
        let g = ScaleFunction::from_f64_terms(&[(1, 2, 1.0)], P);
        let i = RotationNumber::new(1, 4).unwrap();
        let r = gen_euler_boole(&g, 4, &i, 40, 6).unwrap();
        let d = (&r.total - &brute(&g, &i, 40)).abs_f64();
        assert!(d < 1e-20 && d <= r.remainder_estimate);
    }

    #[test]
    fn boole_rejects() {
        let f = ScaleFunction::from_f64_terms(&[(0, 2, 1.0)], P);
        assert!(gen_euler_boole(&f, 4, &RotationNumber::MINUS_ONE, 10, 3).is_err());
        assert!(gen_euler_boole(&f, 5, &RotationNumber::new(1, 5).unwrap(), 4, 3).is_err());
    }
}
