//! Multiple polylogarithms: truncated sums, convergent evaluation,
//! regularised values at integer points and the translation identities.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::asymptotics::{depth_expansion_report, regularised_value, DepthSpec};
use crate::error::{Error, Result};
use crate::real::{ldexp, Complex, LogTable, Real};
use crate::rootsofunity::{contains, ComplexPoint, DomainKind, RotationNumber, ZVector};
use crate::summation::MatchConfig;

/// `s (s+1) ... (s+count-1)`.
pub fn pochhammer(s: &Complex, count: usize) -> Complex {
    let p = s.prec();
    let mut acc = Complex::one(p);
    let mut x = s.clone();
    let one = Complex::one(p);
    for _ in 0..count {
        acc = &acc * &x;
        x = &x + &one;
    }
    acc
}

/// Truncated sums `t_N` (or `t_{M,N}` when `m` is set) for general `|z_i| <= 1`.
#[derive(Clone, Debug)]
pub struct PartialSumSpec {
    pub z: Vec<Complex>,
    pub s: ComplexPoint,
    pub n: u64,
    pub m: Option<u64>,
}

impl PartialSumSpec {
    pub fn from_roots(z: &ZVector, s: ComplexPoint, n: u64, m: Option<u64>, p: usize) -> Self {
        PartialSumSpec { z: z.entries().iter().map(|x| x.to_complex(p)).collect(), s, n, m }
    }
}

fn integer_exponent(s: &Complex) -> Option<i64> {
    if !s.im.is_zero() {
        return None;
    }
    let f = s.re.floor();
    if f == s.re && s.re.to_f64().abs() < 1e15 {
        Some(s.re.to_f64() as i64)
    } else {
        None
    }
}

enum Powers {
    Table(Vec<Complex>),
    Running { z: Complex, cur: Complex },
}

/// Running nested sums `U_j(N) = sum_{N > n_j > ... > n_r > 0} prod z_i^{n_i} n_i^{-s_i}`,
/// advanced one index at a time.
pub struct NestedPartialSums {
    p: usize,
    s: Vec<Complex>,
    ints: Vec<Option<i64>>,
    pows: Vec<Powers>,
    next: u64,
    levels: Vec<Complex>,
    logs: LogTable,
}

impl NestedPartialSums {
    pub fn new(z: &[Complex], s: &ComplexPoint, p: usize) -> Result<Self> {
        if z.len() != s.len() {
            return Err(Error::LengthMismatch(format!("z has {} entries, s has {}", z.len(), s.len())));
        }
        let pows = z.iter().map(|x| Powers::Running { z: x.clone().with_prec(p), cur: Complex::one(p) }).collect();
        Ok(Self::build(s, pows, p))
    }

    pub fn from_roots(z: &ZVector, s: &ComplexPoint, p: usize) -> Result<Self> {
        if z.len() != s.len() {
            return Err(Error::LengthMismatch(format!("z has {} entries, s has {}", z.len(), s.len())));
        }
        let pows = z
            .entries()
            .iter()
            .map(|x| Powers::Table((0..x.denominator()).map(|e| x.pow(e as i64).to_complex(p)).collect()))
            .collect();
        Ok(Self::build(s, pows, p))
    }

    fn build(s: &ComplexPoint, pows: Vec<Powers>, p: usize) -> Self {
        let s: Vec<Complex> = s.0.iter().map(|x| x.clone().with_prec(p)).collect();
        let ints = s.iter().map(integer_exponent).collect();
        let r = s.len();
        NestedPartialSums { p, s, ints, pows, next: 1, levels: vec![Complex::zero(p); r], logs: LogTable::new(1, p) }
    }

    /// Current cutoff: the sums cover indices `< cutoff()`.
    pub fn cutoff(&self) -> u64 {
        self.next
    }

    /// All levels, outermost first, at cutoff `n >= cutoff()`.
    pub fn advance_to(&mut self, n: u64) -> &[Complex] {
        let r = self.s.len();
        if n > self.next && self.ints.iter().any(|x| x.is_none()) {
            let want = (n as usize).max(self.logs.len() * 2).min(n as usize + 4096);
            self.logs.extend_to(want);
        }
        while self.next < n {
            let k = self.next;
            let kr = Real::from_u64(k, self.p);
            for j in 0..r {
                let inner = if j + 1 < r { self.levels[j + 1].clone() } else { Complex::one(self.p) };
                let zk = match &mut self.pows[j] {
                    Powers::Table(t) => t[(k % t.len() as u64) as usize].clone(),
                    Powers::Running { z, cur } => {
                        *cur = &*cur * &*z;
                        cur.clone()
                    }
                };
                let w = match self.ints[j] {
                    Some(a) => Complex::from_real(kr.powi(-a)),
                    None => Complex::pow_neg_from_ln(self.logs.get(k as usize), &self.s[j]),
                };
                let term = &(&zk * &w) * &inner;
                self.levels[j] = &self.levels[j] + &term;
            }
            self.next += 1;
        }
        &self.levels
    }

    pub fn total(&self) -> Complex {
        self.levels.first().cloned().unwrap_or_else(|| Complex::one(self.p))
    }
}

/// `t_N`, or `t_{M,N}` (outer index in `[N, M)`) when `m` is set.
pub fn brute_partial_sum(spec: &PartialSumSpec, p: usize) -> Result<Complex> {
    let mut sums = NestedPartialSums::new(&spec.z, &spec.s, p + 16)?;
    if spec.z.is_empty() {
        return Ok(Complex::one(p));
    }
    sums.advance_to(spec.n);
    let t_n = sums.total();
    let out = match spec.m {
        None => t_n,
        Some(m) => {
            if m < spec.n {
                return Err(Error::InvalidArgument(format!("M = {m} must be at least N = {}", spec.n)));
            }
            sums.advance_to(m);
            &sums.total() - &t_n
        }
    };
    Ok(out.with_prec(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Brute,
    Convergent,
    Regularised,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Convergent => "convergent",
            Method::Regularised => "regularised",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DomainFlags {
    pub ur: bool,
    pub urz: bool,
    pub vrz: bool,
}

impl DomainFlags {
    pub fn of(z: &ZVector, s: &ComplexPoint) -> Result<Self> {
        Ok(DomainFlags {
            ur: contains(DomainKind::Ur, z, s)?,
            urz: contains(DomainKind::Urz, z, s)?,
            vrz: contains(DomainKind::Vrz, z, s)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// Largest truncation index used.
    pub cutoff: u64,
    pub precision_bits: usize,
    /// Expansion order (regularised) or number of fitted tail terms (convergent).
    pub order: i64,
}

#[derive(Clone, Debug)]
pub struct EvalReport {
    pub value: Complex,
    pub abs_error_estimate: f64,
    pub method: Method,
    pub domain: DomainFlags,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug)]
pub struct ConvergentConfig {
    pub prec: usize,
    pub tol: f64,
    /// Largest truncation index allowed.
    pub ceiling: u64,
    /// Smallest sample cutoff (rounded up to a multiple of the period).
    pub base: u64,
    /// Cap on fitted tail terms.
    pub max_terms: usize,
}

impl ConvergentConfig {
    pub fn new(prec: usize, tol: f64) -> Self {
        ConvergentConfig { prec, tol, ceiling: 10_000_000, base: 64, max_terms: 24 }
    }
}

/// A tail term `xi^N (log N)^l N^{-gamma}` of the truncated sums.
#[derive(Clone, Debug)]
struct TailTerm {
    xi: RotationNumber,
    gamma: Complex,
    l: u32,
}

fn same_exponent(a: &Complex, b: &Complex) -> bool {
    (a - b).abs_f64() < 1e-24
}

fn push_term(out: &mut Vec<TailTerm>, t: TailTerm) {
    if !out.iter().any(|u| u.xi == t.xi && u.l == t.l && same_exponent(&u.gamma, &t.gamma)) {
        out.push(t);
    }
}

/// Superset of the tail terms of `t_N`, level by level from the innermost sum.
/// Terms that cannot reach `Re gamma <= cap` at the top level are discarded.
fn tail_terms(z: &ZVector, s: &ComplexPoint, cap: f64, p: usize) -> Vec<TailTerm> {
    let r = z.len();
    let one = Complex::one(p);
    // later (outer) levels can lower Re gamma by at most sum (1 - Re s_i)^+
    let mut slack = vec![0.0; r + 1];
    for j in 1..=r {
        slack[j] = slack[j - 1] + (1.0 - s.0[j - 1].re.to_f64()).max(0.0);
    }
    let mut cur = vec![TailTerm { xi: RotationNumber::ONE, gamma: Complex::zero(p), l: 0 }];
    for j in (1..=r).rev() {
        let bound = cap + slack[j - 1];
        let mut next = vec![TailTerm { xi: RotationNumber::ONE, gamma: Complex::zero(p), l: 0 }];
        for t in &cur {
            let xi = z.get(j).mul(&t.xi);
            let g = &t.gamma + &s.0[j - 1];
            let (start, lmax) = if xi.is_one() {
                let g1 = &g - &one;
                let resonant = g1.abs_f64() < 1e-24;
                (g1, if resonant { t.l + 1 } else { t.l })
            } else {
                (g.clone(), t.l)
            };
            let mut e = 0i64;
            loop {
                let ge = &start + &Complex::from_i64(e, p);
                if ge.re.to_f64() > bound {
                    break;
                }
                let top = if e == 0 { lmax } else { t.l };
                for l in 0..=top {
                    let zero_const = xi.is_one() && l == 0 && ge.abs_f64() < 1e-24;
                    if !zero_const {
                        push_term(&mut next, TailTerm { xi, gamma: ge.clone(), l });
                    }
                }
                e += 1;
            }
        }
        cur = next;
    }
    cur.retain(|t| !(t.xi.is_one() && t.l == 0 && t.gamma.abs_f64() < 1e-24));
    cur
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<Complex>>, mut b: Vec<Complex>) -> Option<Vec<Complex>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs_f64().partial_cmp(&a[j][c].abs_f64()).unwrap())?;
        if a[piv][c].is_zero() {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        let inv = a[c][c].recip();
        for i in c + 1..n {
            let f = &a[i][c] * &inv;
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let v = &a[i][k] - &(&f * &a[c][k]);
                a[i][k] = v;
            }
            b[i] = &b[i] - &(&f * &b[c]);
        }
    }
    let mut x = vec![Complex::zero(b[0].prec()); n];
    for c in (0..n).rev() {
        let mut acc = b[c].clone();
        for k in c + 1..n {
            acc = &acc - &(&a[c][k] * &x[k]);
        }
        x[c] = &acc / &a[c][c];
    }
    Some(x)
}

/// Value of the series on `U_r(z)`.
///
/// The truncated sums are sampled at `N_0 2^i` with `N_0` a multiple of the
/// period of `z`, so every oscillating factor equals one there; the limit is
/// then extrapolated against the tail exponents predicted level by level.
pub fn eval_convergent(z: &ZVector, s: &ComplexPoint, cfg: &ConvergentConfig) -> Result<EvalReport> {
    let flags = DomainFlags::of(z, s)?;
    if !flags.urz {
        return Err(Error::Domain(format!("s = {} is outside U_r(z) for z = {z}", fmt_point(s))));
    }
    eval_convergent_unchecked(z, s, cfg, flags)
}

fn fmt_point(s: &ComplexPoint) -> String {
    let parts: Vec<_> = s.0.iter().map(|c| format!("{c}")).collect();
    format!("({})", parts.join(", "))
}

/// As [`eval_convergent`] without the domain check; divergent inputs give
/// `NonConvergence`.
pub fn eval_convergent_unchecked(
    z: &ZVector,
    s: &ComplexPoint,
    cfg: &ConvergentConfig,
    flags: DomainFlags,
) -> Result<EvalReport> {
    if z.len() != s.len() {
        return Err(Error::LengthMismatch(format!("z has {} entries, s has {}", z.len(), s.len())));
    }
    let wp = cfg.prec + 128;
    let per = z.period();
    let n0 = cfg.base.div_ceil(per) * per;
    let mut terms = tail_terms(z, s, 48.0, wp);
    if let Some(t) = terms.iter().find(|t| t.gamma.re.to_f64() <= 1e-24) {
        return Err(Error::NonConvergence(format!(
            "truncated sums contain a non-decaying term (log N)^{} N^(-{}) with character {}",
            t.l,
            t.gamma,
            t.xi
        )));
    }
    // at the sample points the characters collapse; merge by (gamma, l)
    let mut basis: Vec<(Complex, u32)> = Vec::new();
    for t in &terms {
        if !basis.iter().any(|(g, l)| *l == t.l && same_exponent(g, &t.gamma)) {
            basis.push((t.gamma.clone(), t.l));
        }
    }
    basis.sort_by(|a, b| {
        a.0.re.to_f64().partial_cmp(&b.0.re.to_f64()).unwrap().then(b.1.cmp(&a.1))
    });
    terms.clear();
    let mut sums = NestedPartialSums::from_roots(z, s, wp)?;
    let mut samples: Vec<(u64, Complex, Real)> = Vec::new();
    let mut prev: Option<Complex> = None;
    let mut small = 0;
    let mut last_inc = f64::INFINITY;
    let max_k = basis.len().min(cfg.max_terms);
    for k in 0..=max_k {
        // k tail terms need k + 1 samples
        while samples.len() < k + 1 {
            let n = n0 << samples.len();
            if n > cfg.ceiling {
                return Err(Error::NonConvergence(format!(
                    "cutoff {n} exceeds ceiling {} (last increment {last_inc:.3e})",
                    cfg.ceiling
                )));
            }
            sums.advance_to(n);
            samples.push((n, sums.total(), Real::from_u64(n, wp).ln()));
        }
        let rows: Vec<Vec<Complex>> = samples[samples.len() - k - 1..]
            .iter()
            .map(|(_, _, ln)| {
                let mut row = vec![Complex::one(wp)];
                for (g, l) in &basis[..k] {
                    let v = &Complex::pow_neg_from_ln(ln, g) * &Complex::from_real(ln.powi(*l as i64));
                    row.push(v);
                }
                row
            })
            .collect();
        let rhs: Vec<Complex> = samples[samples.len() - k - 1..].iter().map(|x| x.1.clone()).collect();
        let est = solve(rows, rhs)
            .ok_or_else(|| Error::Precision(String::from("singular extrapolation system")))?
            .swap_remove(0);
        if let Some(pv) = &prev {
            last_inc = (&est - pv).abs_f64();
            if last_inc < cfg.tol / 2.0 {
                small += 1;
                if small >= 2 {
                    return Ok(EvalReport {
                        value: est.with_prec(cfg.prec),
                        abs_error_estimate: 4.0 * last_inc + ldexp(1.0, -(cfg.prec as i64)),
                        method: Method::Convergent,
                        domain: flags,
                        diagnostics: Diagnostics {
                            cutoff: samples.last().map(|x| x.0).unwrap_or(0),
                            precision_bits: cfg.prec,
                            order: k as i64,
                        },
                    });
                }
            } else {
                small = 0;
            }
        }
        prev = Some(est);
    }
    Err(Error::NonConvergence(format!(
        "extrapolation did not settle within {max_k} tail terms (last increment {last_inc:.3e})"
    )))
}

/// Limit of the truncated sums at an integer point of `V_r(z)`, as the
/// regularised value of their asymptotic expansion.
pub fn eval_integer_point(z: &ZVector, a: &[i64], order: i64, cfg: &MatchConfig) -> Result<EvalReport> {
    let pt = ComplexPoint::from_ints(a, cfg.prec);
    let flags = DomainFlags::of(z, &pt)?;
    if !flags.vrz {
        return Err(Error::Domain(format!("a = {a:?} is outside V_r(z) for z = {z}")));
    }
    let spec = DepthSpec::new(z.clone(), a.to_vec(), vec![0; a.len()])?;
    let rep = depth_expansion_report(&spec, order, cfg)?;
    Ok(EvalReport {
        value: regularised_value(&rep.expansion),
        abs_error_estimate: 4.0 * rep.constant_error + cfg.tol,
        method: Method::Regularised,
        domain: flags,
        diagnostics: Diagnostics { cutoff: rep.cutoff, precision_bits: cfg.prec, order },
    })
}

/// Regularised value of the log-weighted truncated sums; any integer point.
pub fn stieltjes_constant(z: &ZVector, a: &[i64], kvec: &[u32], order: i64, cfg: &MatchConfig) -> Result<Complex> {
    let spec = DepthSpec::new(z.clone(), a.to_vec(), kvec.to_vec())?;
    let rep = depth_expansion_report(&spec, order, cfg)?;
    Ok(regularised_value(&rep.expansion))
}

#[derive(Clone, Debug)]
pub struct TranslationReport {
    pub lhs: Complex,
    pub rhs: Complex,
    pub residual: f64,
    /// Number of series terms summed on the right-hand side.
    pub series_terms: usize,
}

/// Both sides of the translation identity for `t_{M,N}`, roots of unity given exactly.
pub fn verify_translation(z: &ZVector, s: &ComplexPoint, m: u64, n: u64, tol: f64, p: usize) -> Result<TranslationReport> {
    let zc: Vec<Complex> = z.entries().iter().map(|x| x.to_complex(p)).collect();
    let delta: Vec<bool> = z.entries().iter().map(|x| !x.is_one()).collect();
    translation_sides(&zc, &delta, s, m, n, tol, p)
}

/// As [`verify_translation`] for general `|z_i| <= 1`; `z_i = 1` is decided by `|z_i - 1| <= 1e-12`.
pub fn verify_translation_general(z: &[Complex], s: &ComplexPoint, m: u64, n: u64, tol: f64, p: usize) -> Result<TranslationReport> {
    let delta: Vec<bool> = z.iter().map(|x| (x - &Complex::one(x.prec())).abs_f64() > 1e-12).collect();
    translation_sides(z, &delta, s, m, n, tol, p)
}

fn translation_sides(
    z: &[Complex],
    delta: &[bool],
    s: &ComplexPoint,
    m: u64,
    n: u64,
    tol: f64,
    p: usize,
) -> Result<TranslationReport> {
    let r = z.len();
    if r == 0 || r != s.len() {
        return Err(Error::LengthMismatch(format!("z has {} entries, s has {}", r, s.len())));
    }
    if n < 2 || m <= n {
        return Err(Error::InvalidArgument(format!("need M > N >= 2, got M = {m}, N = {n}")));
    }
    let wp = p + 32;
    let one = Complex::one(wp);
    let z: Vec<Complex> = z.iter().map(|x| x.clone().with_prec(wp)).collect();
    let s: Vec<Complex> = s.0.iter().map(|x| x.clone().with_prec(wp)).collect();
    let d1 = if delta[0] { 1 } else { 0 };
    let s1d = &s[0] + &Complex::from_i64(d1 - 1, wp);
    let tail = |zs: &[Complex], ss: &[Complex], hi: u64, lo: u64| -> Result<Complex> {
        let spec = PartialSumSpec { z: zs.to_vec(), s: ComplexPoint(ss.to_vec()), n: lo, m: Some(hi) };
        brute_partial_sum(&spec, wp)
    };
    let trunc = |zs: &[Complex], ss: &[Complex], cut: u64| -> Result<Complex> {
        if zs.is_empty() {
            return Ok(Complex::one(wp));
        }
        let spec = PartialSumSpec { z: zs.to_vec(), s: ComplexPoint(ss.to_vec()), n: cut, m: None };
        brute_partial_sum(&spec, wp)
    };

    let mut lhs = Complex::zero(wp);
    if r > 1 {
        let mut zz = vec![&z[0] * &z[1]];
        zz.extend_from_slice(&z[2..]);
        let mut ss = vec![&(&s[0] + &s[1]) + &Complex::from_i64(d1 - 1, wp)];
        ss.extend_from_slice(&s[2..]);
        lhs = &lhs + &(&z[0] * &tail(&zz, &ss, m - 1, n)?);
    }
    let mut ss = vec![s1d.clone()];
    ss.extend_from_slice(&s[1..]);
    lhs = &lhs + &(&(&z[0] - &one) * &tail(&z, &ss, m, n)?);
    let pw = |base: u64, e: u64| -> Complex {
        let ln = Real::from_u64(base, wp).ln();
        &z[0].powi(e as i64) * &Complex::pow_neg_from_ln(&ln, &s1d)
    };
    lhs = &lhs + &(&pw(n - 1, n) * &trunc(&z[1..], &s[1..], n)?);
    lhs = &lhs - &(&pw(m - 1, m) * &trunc(&z[1..], &s[1..], m - 1)?);

    // RHS: sum_k (s1+d1-1)_{k+1}/(k+1)! t(s1+d1+k, s2..)_{M,N}; weights for n1 in [N, M)
    let mut inner = NestedPartialSums::new(&z[1..], &ComplexPoint(s[1..].to_vec()), wp)?;
    let mut w: Vec<Complex> = Vec::with_capacity((m - n) as usize);
    let mut inv: Vec<Real> = Vec::with_capacity((m - n) as usize);
    let s1 = &s[0] + &Complex::from_i64(d1, wp);
    for k in n..m {
        inner.advance_to(k);
        let ln = Real::from_u64(k, wp).ln();
        let v = &(&z[0].powi(k as i64) * &Complex::pow_neg_from_ln(&ln, &s1)) * &inner.total();
        w.push(v);
        inv.push(Real::from_u64(k, wp).recip());
    }
    let kmin = 2.0 * s[0].abs_f64() + 4.0;
    let mut rhs = Complex::zero(wp);
    let mut coef = one.clone();
    let mut k = 0usize;
    let mut prev = f64::INFINITY;
    let max_terms = 20_000;
    loop {
        // coef = (s1+d1-1)_{k+1}/(k+1)!
        let c = &s1d + &Complex::from_i64(k as i64, wp);
        coef = (&coef * &c).scale(&Real::from_u64(k as u64 + 1, wp).recip());
        let mut t = Complex::zero(wp);
        for x in &w {
            t = &t + x;
        }
        let term = &coef * &t;
        rhs = &rhs + &term;
        let mag = term.abs_f64();
        k += 1;
        if (k as f64) > kmin && mag < tol * 1e-2 {
            break;
        }
        if (k as f64) > kmin + 50.0 && mag > prev && mag > tol {
            return Err(Error::NonConvergence(format!("translation series terms stopped decreasing at k = {k}")));
        }
        if k >= max_terms {
            return Err(Error::NonConvergence(format!("translation series not truncated after {k} terms")));
        }
        prev = mag;
        for (x, iv) in w.iter_mut().zip(&inv) {
            *x = x.scale(iv);
        }
    }
    let residual = (&lhs - &rhs).abs_f64();
    Ok(TranslationReport { lhs: lhs.with_prec(p), rhs: rhs.with_prec(p), residual, series_terms: k })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 128;

    fn zv(s: &str) -> ZVector {
        s.parse().unwrap()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&Complex::from_i64(1, P), 3).re.to_f64(), 6.0);
        assert!(pochhammer(&Complex::from_i64(0, P), 2).is_zero());
        assert_eq!(pochhammer(&Complex::from_f64(0.5, 0.0, P), 2).re.to_f64(), 0.75);
    }

    #[test]
    fn small_partial_sums() {
        let s = PartialSumSpec::from_roots(&zv("1"), ComplexPoint::from_ints(&[2], P), 3, None, P);
        assert_eq!(brute_partial_sum(&s, P).unwrap().re.to_f64(), 1.25);
        let s = PartialSumSpec::from_roots(&zv("1,-1"), ComplexPoint::from_ints(&[2, 0], P), 4, None, P);
        assert_eq!(brute_partial_sum(&s, P).unwrap().re.to_f64(), -0.25);
        // t_N = 0 for N <= r
        let s = PartialSumSpec::from_roots(&zv("1,-1,1"), ComplexPoint::from_ints(&[1, 1, 1], P), 3, None, P);
        assert!(brute_partial_sum(&s, P).unwrap().is_zero());
    }

    #[test]
    fn double_cutoff_is_difference() {
        let z = zv("1/3,1");
        let pt = ComplexPoint::from_f64(&[1.5, 0.3], P);
        let a = brute_partial_sum(&PartialSumSpec::from_roots(&z, pt.clone(), 20, Some(50), P), P).unwrap();
        let b = brute_partial_sum(&PartialSumSpec::from_roots(&z, pt.clone(), 50, None, P), P).unwrap();
        let c = brute_partial_sum(&PartialSumSpec::from_roots(&z, pt, 20, None, P), P).unwrap();
        assert!((&a - &(&b - &c)).abs_f64() < 1e-30);
    }

    #[test]
    fn convergent_alternating() {
        let cfg = ConvergentConfig::new(P, 1e-15);
        let r = eval_convergent(&zv("-1"), &ComplexPoint::from_f64(&[0.5], P), &cfg).unwrap();
        // eta(1/2) = (1 - sqrt 2) zeta(1/2); Li_{1/2}(-1) = -eta(1/2)
        let expect = -0.6048986434216303;
        assert!((r.value.re.to_f64() - expect).abs() < 1e-13, "{}", r.value);
        let e = eval_convergent(&zv("1"), &ComplexPoint::from_f64(&[0.5], P), &cfg);
        assert!(matches!(e, Err(Error::Domain(_))));
    }

    #[test]
    fn boundary_point_does_not_converge() {
        let cfg = ConvergentConfig::new(P, 1e-12);
        let z = zv("1,-1");
        let pt = ComplexPoint::from_ints(&[1, 0], P);
        let flags = DomainFlags::of(&z, &pt).unwrap();
        let e = eval_convergent_unchecked(&z, &pt, &cfg, flags);
        assert!(matches!(e, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn translation_depth_one() {
        let s = ComplexPoint(vec![Complex::from_f64(1.5, 0.5, P)]);
        let r = verify_translation(&zv("-1"), &s, 40, 10, 1e-25, P).unwrap();
        assert!(r.residual < 1e-20, "{}", r.residual);
    }
}
