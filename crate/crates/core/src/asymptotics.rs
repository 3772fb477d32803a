//! Asymptotic expansions relative to the scale `(log n)^l n^{-m}` with
//! coefficients in the algebra spanned by `xi^n`, `xi` a root of unity.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::real::{ldexp, Complex, Real};
use crate::rootsofunity::{index_set_and_count, RotationNumber, ZVector};
use crate::summation::{default_tol, match_constant, term_profile, term_sum_expansion, MatchConfig};

/// The sequence `xi^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character(pub RotationNumber);

impl Character {
    pub const ONE: Character = Character(RotationNumber::ONE);

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl From<RotationNumber> for Character {
    fn from(r: RotationNumber) -> Self {
        Character(r)
    }
}

/// `sum c xi^n (log n)^l n^{-m} + o(n^{-precision})`.
#[derive(Clone, Debug)]
pub struct AsymptoticExpansion {
    coeffs: BTreeMap<(Character, u32, i64), Complex>,
    precision: i64,
}

impl AsymptoticExpansion {
    pub fn new(precision: i64) -> Self {
        AsymptoticExpansion { coeffs: BTreeMap::new(), precision }
    }

    pub fn constant(c: Complex, precision: i64) -> Self {
        let mut e = Self::new(precision);
        e.add_term(Character::ONE, 0, 0, c);
        e
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Smallest stored decay index; `None` stands for `+inf`.
    pub fn order(&self) -> Option<i64> {
        self.coeffs.keys().map(|k| k.2).min()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn max_log(&self) -> u32 {
        self.coeffs.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn get(&self, xi: Character, l: u32, m: i64) -> Option<&Complex> {
        self.coeffs.get(&(xi, l, m))
    }

    pub fn coeff_or_zero(&self, xi: Character, l: u32, m: i64, p: usize) -> Complex {
        self.get(xi, l, m).cloned().unwrap_or_else(|| Complex::zero(p))
    }

    pub fn terms(&self) -> impl Iterator<Item = (Character, u32, i64, &Complex)> {
        self.coeffs.iter().map(|(&(x, l, m), c)| (x, l, m, c))
    }

    pub fn add_term(&mut self, xi: Character, l: u32, m: i64, c: Complex) {
        if m > self.precision || c.is_zero() {
            return;
        }
        let key = (xi, l, m);
        let merged = match self.coeffs.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.coeffs.insert(key, merged);
        }
    }

    pub fn remove(&mut self, xi: Character, l: u32, m: i64) -> Option<Complex> {
        self.coeffs.remove(&(xi, l, m))
    }

    /// Drop terms beyond `a` and lower the precision to `a`.
    pub fn truncate(&self, a: i64) -> Self {
        let p = a.min(self.precision);
        AsymptoticExpansion {
            coeffs: self.coeffs.iter().filter(|(k, _)| k.2 <= p).map(|(k, c)| (*k, c.clone())).collect(),
            precision: p,
        }
    }

    pub fn scale(&self, k: &Complex) -> Self {
        let mut out = Self::new(self.precision);
        for (x, l, m, c) in self.terms() {
            out.add_term(x, l, m, c * k);
        }
        out
    }

    pub fn with_prec(&self, p: usize) -> Self {
        AsymptoticExpansion {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.clone().with_prec(p))).collect(),
            precision: self.precision,
        }
    }

    /// Remove coefficients below `rel` times the largest one (rounding debris
    /// from exact cancellations).
    pub fn prune(&mut self, rel: f64) {
        let big = self.coeffs.values().map(|c| c.abs_f64()).fold(1.0f64, f64::max);
        self.coeffs.retain(|_, c| c.abs_f64() > rel * big);
    }

    /// Value of the stored terms at `n` (with `ln n` supplied).
    pub fn evaluate(&self, n: u64, ln_n: &Real) -> Complex {
        let p = ln_n.prec();
        let nr = Real::from_u64(n, p);
        let mut acc = Complex::zero(p);
        let mut lpow = vec![Real::one(p)];
        let mut npow: BTreeMap<i64, Real> = BTreeMap::new();
        let mut chars: BTreeMap<Character, Complex> = BTreeMap::new();
        for (x, l, m, c) in self.terms() {
            while lpow.len() <= l as usize {
                let next = lpow.last().unwrap() * ln_n;
                lpow.push(next);
            }
            let np = npow.entry(m).or_insert_with(|| nr.powi(-m)).clone();
            let ch = chars.entry(x).or_insert_with(|| x.0.pow(n as i64).to_complex(p)).clone();
            let k = &lpow[l as usize] * &np;
            acc = &acc + &(&ch * &c.scale(&k));
        }
        acc
    }

    pub fn evaluate_at(&self, n: u64, p: usize) -> Complex {
        self.evaluate(n, &Real::from_u64(n, p).ln())
    }
}

pub fn add(e1: &AsymptoticExpansion, e2: &AsymptoticExpansion) -> AsymptoticExpansion {
    let mut out = AsymptoticExpansion::new(e1.precision.min(e2.precision));
    for (x, l, m, c) in e1.terms().chain(e2.terms()) {
        out.add_term(x, l, m, c.clone());
    }
    out
}

/// Multiply every term by `xi0^n (log n)^l0 n^{-m0}`.
pub fn multiply_monomial(e: &AsymptoticExpansion, xi0: Character, l0: u32, m0: i64) -> AsymptoticExpansion {
    let mut out = AsymptoticExpansion::new(e.precision.saturating_add(m0));
    for (x, l, m, c) in e.terms() {
        out.add_term(Character(x.0.mul(&xi0.0)), l + l0, m + m0, c.clone());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantMode {
    /// Constant = sum of the per-term regularised constants.
    PerTerm,
    /// No constant term in the result.
    Omit,
}

/// Expansion of `v_n = sum_{m<n} u_m` for `u_n` given by `e`. Precision drops by one.
pub fn partial_sum(e: &AsymptoticExpansion, mode: ConstantMode) -> Result<AsymptoticExpansion> {
    partial_sum_with(e, mode, &MatchConfig::for_prec(expansion_prec(e)))
}

fn expansion_prec(e: &AsymptoticExpansion) -> usize {
    e.terms().map(|t| t.3.prec()).max().unwrap_or(crate::real::DEFAULT_PREC)
}

pub fn partial_sum_with(e: &AsymptoticExpansion, mode: ConstantMode, cfg: &MatchConfig) -> Result<AsymptoticExpansion> {
    let out_prec = e.precision - 1;
    let p = expansion_prec(e);
    let mut out = AsymptoticExpansion::new(out_prec);
    let mut constant = Complex::zero(p);
    for (x, l, m, c) in e.terms() {
        match mode {
            ConstantMode::Omit => {
                let prof = term_profile(x.0, l, m, out_prec, p)?;
                for (y, l2, m2, c2) in prof.terms() {
                    if y.is_one() && l2 == 0 && m2 == 0 {
                        continue;
                    }
                    out.add_term(y, l2, m2, c * c2);
                }
            }
            ConstantMode::PerTerm => {
                let r = term_sum_expansion(x.0, l, m, out_prec, cfg)?;
                constant = &constant + &(c * &r.constant);
                for (y, l2, m2, c2) in r.expansion.terms() {
                    out.add_term(y, l2, m2, c * c2);
                }
            }
        }
    }
    if mode == ConstantMode::PerTerm {
        out.add_term(Character::ONE, 0, 0, constant);
    }
    out.prune(ldexp(1.0, -(p as i64) + 24));
    Ok(out)
}

/// Coefficient of the constant sequence.
pub fn regularised_value(e: &AsymptoticExpansion) -> Complex {
    let p = expansion_prec(e);
    e.coeff_or_zero(Character::ONE, 0, 0, p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthSpec {
    pub z: ZVector,
    pub a: Vec<i64>,
    pub kvec: Vec<u32>,
}

impl DepthSpec {
    pub fn new(z: ZVector, a: Vec<i64>, kvec: Vec<u32>) -> Result<Self> {
        if a.len() != z.len() || kvec.len() != z.len() {
            return Err(Error::LengthMismatch(format!(
                "z has {} entries, a has {}, k has {}",
                z.len(),
                a.len(),
                kvec.len()
            )));
        }
        Ok(DepthSpec { z, a, kvec })
    }

    pub fn depth(&self) -> usize {
        self.z.len()
    }

    /// `a_i + ... + a_j`.
    pub fn a_sum(&self, i: usize, j: usize) -> i64 {
        self.a[i - 1..j].iter().sum()
    }

    /// `Q_{[i,j]} = #{ i <= t <= j : z_{[t,j]} = 1 }`.
    pub fn q_sum(&self, i: usize, j: usize) -> usize {
        if j < i {
            return 0;
        }
        let mut acc = RotationNumber::ONE;
        let mut n = 0;
        for t in (i..=j).rev() {
            acc = acc.mul(&self.z.get(t));
            if acc.is_one() {
                n += 1;
            }
        }
        n
    }
}

/// `min(0, A_{[1,i]} - Q_{[1,i]})` over `i`.
pub fn order_lower_bound(spec: &DepthSpec) -> i64 {
    let mut b = 0i64;
    for i in 1..=spec.depth() {
        let q = index_set_and_count(&spec.z, i).map(|x| x.1).unwrap_or(0) as i64;
        b = b.min(spec.a_sum(1, i) - q);
    }
    b
}

pub const LOG_CAP: u32 = 64;

/// Result of the depth recursion with its numerical diagnostics.
#[derive(Clone, Debug)]
pub struct DepthReport {
    pub expansion: AsymptoticExpansion,
    /// Largest change of a matched constant between the two cutoffs.
    pub constant_error: f64,
    /// Cutoff used for the final matching.
    pub cutoff: u64,
    /// Working precision of each level, outermost first.
    pub level_precisions: Vec<i64>,
}

pub fn depth_expansion(spec: &DepthSpec, a: i64) -> Result<AsymptoticExpansion> {
    Ok(depth_expansion_report(spec, a, &MatchConfig::for_prec(crate::real::DEFAULT_PREC))?.expansion)
}

/// Depth recursion from the innermost sum outwards; each level's constant is
/// matched against the exact nested partial sum.
pub fn depth_expansion_report(spec: &DepthSpec, a: i64, cfg: &MatchConfig) -> Result<DepthReport> {
    let r = spec.depth();
    let growth: i64 = spec.a.iter().map(|&x| (1 - x).max(0)).sum();
    let cfg = &cfg.for_growth(growth, spec.kvec.iter().sum::<u32>() + r as u32);
    let wp = cfg.work_prec();
    let floor = cfg.boost;
    // working precision per level, outermost first
    let mut w = vec![0i64; r + 1];
    w[0] = a.max(0) + cfg.boost;
    for j in 1..=r {
        w[j] = (w[j - 1] + 1 - spec.a[j - 1]).max(floor);
    }
    let total_log: u32 = spec.kvec.iter().sum::<u32>() + r as u32;
    if total_log > LOG_CAP {
        return Err(Error::InvalidArgument(format!("log power {total_log} exceeds cap {LOG_CAP}")));
    }
    let mut sums = NestedSums::new(spec, wp);
    let mut e = AsymptoticExpansion::constant(Complex::one(wp), w[r]);
    let mut worst = 0.0f64;
    let mut cutoff = cfg.start;
    for j in (1..=r).rev() {
        let z = Character(spec.z.get(j));
        let prod = multiply_monomial(&e, z, spec.kvec[j - 1], spec.a[j - 1]);
        let ps = partial_sum_with(&prod, ConstantMode::Omit, cfg)?;
        let mut level = ps.truncate(w[j - 1]);
        let (c, err, n) = match_constant(&level, |n| Ok(sums.at(n)[j - 1].clone()), cfg)?;
        level.add_term(Character::ONE, 0, 0, c);
        worst = worst.max(err);
        cutoff = n;
        e = level;
    }
    Ok(DepthReport {
        expansion: e.truncate(a).with_prec(cfg.prec),
        constant_error: worst,
        cutoff,
        level_precisions: w[..r].to_vec(),
    })
}

/// Exact suffix sums `U_j(N) = sum_{N > n_j > ... > n_r > 0} prod_{i>=j} w_i(n_i)`
/// for every level at once, extended on demand.
struct NestedSums<'a> {
    spec: &'a DepthSpec,
    p: usize,
    next_n: u64,
    levels: Vec<Complex>,
    chars: Vec<Vec<Complex>>,
    cache: BTreeMap<u64, Vec<Complex>>,
}

impl<'a> NestedSums<'a> {
    fn new(spec: &'a DepthSpec, p: usize) -> Self {
        let chars = spec
            .z
            .entries()
            .iter()
            .map(|z| (0..z.denominator()).map(|e| z.pow(e as i64).to_complex(p)).collect())
            .collect();
        NestedSums {
            spec,
            p,
            next_n: 1,
            levels: vec![Complex::zero(p); spec.depth()],
            chars,
            cache: BTreeMap::new(),
        }
    }

    fn at(&mut self, n: u64) -> Vec<Complex> {
        if let Some(v) = self.cache.get(&n) {
            return v.clone();
        }
        let r = self.spec.depth();
        while self.next_n < n {
            let k = self.next_n;
            let kr = Real::from_u64(k, self.p);
            let lk = kr.ln();
            // outer levels first so each sees the inner sum over indices < k
            for j in 0..r {
                let inner = if j + 1 < r { self.levels[j + 1].clone() } else { Complex::one(self.p) };
                let d = self.spec.z.entries()[j].denominator();
                let ch = &self.chars[j][(k % d) as usize];
                let mut wgt = kr.powi(-self.spec.a[j]);
                for _ in 0..self.spec.kvec[j] {
                    wgt = &wgt * &lk;
                }
                let term = &(ch * &inner).scale(&wgt);
                self.levels[j] = &self.levels[j] + term;
            }
            self.next_n += 1;
        }
        self.cache.insert(n, self.levels.clone());
        self.levels.clone()
    }
}

/// Default tolerance helper re-exported for callers composing their own configs.
pub fn tolerance_for(prec: usize) -> f64 {
    default_tol(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 128;

    fn ch(s: &str) -> Character {
        Character(s.parse().unwrap())
    }

    fn c(v: f64) -> Complex {
        Complex::from_f64(v, 0.0, P)
    }

    #[test]
    fn addition() {
        let mut e = AsymptoticExpansion::new(3);
        e.add_term(Character::ONE, 0, 0, c(2.0));
        let z = AsymptoticExpansion::new(5);
        let s = add(&e, &z);
        assert_eq!(s.precision(), 3);
        assert_eq!(s.len(), 1);
        let mut neg = AsymptoticExpansion::new(3);
        neg.add_term(Character::ONE, 0, 0, c(-2.0));
        assert!(add(&e, &neg).is_empty());
        assert_eq!(add(&e, &neg).order(), None);
    }

    #[test]
    fn monomials() {
        let mut e = AsymptoticExpansion::new(4);
        e.add_term(ch("-1"), 0, 0, c(1.0));
        let id = multiply_monomial(&e, Character::ONE, 0, 0);
        assert_eq!(id.get(ch("-1"), 0, 0).unwrap().re.to_f64(), 1.0);
        let m = multiply_monomial(&e, ch("-1"), 0, 2);
        assert_eq!(m.get(Character::ONE, 0, 2).unwrap().re.to_f64(), 1.0);
        assert_eq!(m.precision(), 6);
        let mut e = AsymptoticExpansion::new(4);
        e.add_term(Character::ONE, 1, 1, c(2.0));
        let m = multiply_monomial(&e, ch("1/4"), 1, -1);
        assert_eq!(m.get(ch("1/4"), 2, 0).unwrap().re.to_f64(), 2.0);
    }

    #[test]
    fn lower_bounds() {
        let s = DepthSpec::new("1,-1".parse().unwrap(), vec![2, -2], vec![0, 0]).unwrap();
        assert_eq!(order_lower_bound(&s), 0);
        let s = DepthSpec::new("1,1,1".parse().unwrap(), vec![2, 3, 2], vec![0, 0, 0]).unwrap();
        assert_eq!(order_lower_bound(&s), 0);
        let s = DepthSpec::new("-1".parse().unwrap(), vec![-3], vec![0]).unwrap();
        assert_eq!(order_lower_bound(&s), -3);
        assert!(DepthSpec::new("-1".parse().unwrap(), vec![1, 2], vec![0]).is_err());
    }
}

