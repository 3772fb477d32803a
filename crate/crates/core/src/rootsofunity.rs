//! Exact roots of unity as elements of Q/Z and the convergence-domain
//! combinatorics built on prefix and suffix products.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::real::{Complex, Real};

/// `e^{2 pi i num/den}` with `0 <= num < den`, `gcd(num, den) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RotationNumber {
    num: u64,
    den: u64,
}

impl RotationNumber {
    pub const ONE: RotationNumber = RotationNumber { num: 0, den: 1 };
    pub const MINUS_ONE: RotationNumber = RotationNumber { num: 1, den: 2 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument(String::from("zero denominator")));
        }
        let (num, den) = if den < 0 { (-(num as i128), -(den as i128)) } else { (num as i128, den as i128) };
        let n = num.rem_euclid(den);
        let g = n.gcd(&den);
        Ok(RotationNumber { num: (n / g) as u64, den: (den / g) as u64 })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn mul(&self, other: &RotationNumber) -> RotationNumber {
        let l = self.den.lcm(&other.den);
        let n = (self.num as u128 * (l / self.den) as u128 + other.num as u128 * (l / other.den) as u128) % l as u128;
        Self::reduce(n as u64, l)
    }

    pub fn inverse(&self) -> RotationNumber {
        Self::reduce((self.den - self.num) % self.den, self.den)
    }

    pub fn pow(&self, e: i64) -> RotationNumber {
        let n = (self.num as i128 * e as i128).rem_euclid(self.den as i128);
        Self::reduce(n as u64, self.den)
    }

    /// Whether this is a primitive `k`-th root of unity.
    pub fn is_primitive(&self, k: u64) -> bool {
        self.den == k
    }

    pub fn to_complex(&self, p: usize) -> Complex {
        Complex::root_of_unity(self.num as i64, self.den as i64, p)
    }

    fn reduce(n: u64, d: u64) -> RotationNumber {
        let g = n.gcd(&d);
        RotationNumber { num: n / g, den: d / g }
    }
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for RotationNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "1" => return Ok(Self::ONE),
            "-1" => return Ok(Self::MINUS_ONE),
            _ => {}
        }
        let Some((a, b)) = t.split_once('/') else {
            return Err(Error::Parse { pos: 0, msg: format!("expected p/q, 1 or -1, got `{t}`") });
        };
        let num: i64 = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse { pos: 0, msg: format!("bad numerator `{a}`") })?;
        let den: i64 = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse { pos: a.len() + 1, msg: format!("bad denominator `{b}`") })?;
        if den <= 0 {
            return Err(Error::Parse { pos: a.len() + 1, msg: String::from("denominator must be positive") });
        }
        RotationNumber::new(num, den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZVector(Vec<RotationNumber>);

impl ZVector {
    pub fn new(entries: Vec<RotationNumber>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument(String::from("empty z vector")));
        }
        Ok(ZVector(entries))
    }

    pub fn ones(r: usize) -> Self {
        ZVector(alloc::vec![RotationNumber::ONE; r.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[RotationNumber] {
        &self.0
    }

    pub fn get(&self, i: usize) -> RotationNumber {
        self.0[i - 1]
    }

    /// Common denominator of all entries.
    pub fn period(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, z| acc.lcm(&z.den))
    }
}

impl fmt::Display for ZVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{z}")?;
        }
        Ok(())
    }
}

impl FromStr for ZVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        let mut pos = 0;
        for part in s.split(',') {
            let z = part.parse::<RotationNumber>().map_err(|e| match e {
                Error::Parse { pos: p, msg } => Error::Parse { pos: pos + p, msg },
                other => other,
            })?;
            out.push(z);
            pos += part.len() + 1;
        }
        ZVector::new(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint(pub Vec<Complex>);

impl ComplexPoint {
    pub fn new(coords: Vec<Complex>) -> Self {
        ComplexPoint(coords)
    }

    pub fn from_f64(re: &[f64], p: usize) -> Self {
        ComplexPoint(re.iter().map(|x| Complex::from_f64(*x, 0.0, p)).collect())
    }

    pub fn from_ints(a: &[i64], p: usize) -> Self {
        ComplexPoint(a.iter().map(|x| Complex::from_i64(*x, p)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Re(s_1 + ... + s_i)` for `i = 1..=r`.
    pub fn real_prefix_sums(&self) -> Vec<Real> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut acc: Option<Real> = None;
        for s in &self.0 {
            let next = match acc {
                None => s.re.clone(),
                Some(a) => &a + &s.re,
            };
            out.push(next.clone());
            acc = Some(next);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Levels {
    /// Only the value 1.
    One,
    /// Every integer `n <= j`.
    AtMost(i64),
}

/// `s_1 + ... + s_{index_sum} = n` for the admissible `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub index_sum: usize,
    pub levels: Levels,
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = if self.index_sum == 1 {
            String::from("s1")
        } else {
            format!("s1+...+s{}", self.index_sum)
        };
        match self.levels {
            Levels::One => write!(f, "{lhs} = 1"),
            Levels::AtMost(j) => write!(f, "{lhs} = n, n <= {j}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    Ur,
    Urz,
    Vrz,
}

/// `z_i ... z_j`, 1-based inclusive.
pub fn rotation_product(z: &ZVector, i: usize, j: usize) -> Result<RotationNumber> {
    if i < 1 || i > j || j > z.len() {
        return Err(Error::IndexOutOfRange(format!("[{i},{j}] with r = {}", z.len())));
    }
    Ok(z.0[i - 1..j].iter().fold(RotationNumber::ONE, |acc, x| acc.mul(x)))
}

/// Smallest `i` with `z_{[1,i]} != 1`, or `r + 1`.
pub fn first_nontrivial_prefix(z: &ZVector) -> usize {
    let mut acc = RotationNumber::ONE;
    for (i, x) in z.0.iter().enumerate() {
        acc = acc.mul(x);
        if !acc.is_one() {
            return i + 1;
        }
    }
    z.len() + 1
}

/// `(I_j, Q_j)` with `I_j = { i <= j : z_{[i,j]} = 1 }`.
pub fn index_set_and_count(z: &ZVector, j: usize) -> Result<(Vec<usize>, usize)> {
    if j < 1 || j > z.len() {
        return Err(Error::IndexOutOfRange(format!("j = {j} with r = {}", z.len())));
    }
    let mut set = Vec::new();
    let mut acc = RotationNumber::ONE;
    for i in (1..=j).rev() {
        acc = acc.mul(&z.0[i - 1]);
        if acc.is_one() {
            set.push(i);
        }
    }
    set.reverse();
    let n = set.len();
    Ok((set, n))
}

/// `Q_1, ..., Q_r`.
pub fn q_counts(z: &ZVector) -> Vec<usize> {
    (1..=z.len()).map(|j| index_set_and_count(z, j).map(|x| x.1).unwrap_or(0)).collect()
}

/// Lower bounds `b_i` so that the domain is `Re(s_1+...+s_i) > b_i`.
pub fn domain_bounds(kind: DomainKind, z: &ZVector) -> Vec<i64> {
    let r = z.len();
    match kind {
        DomainKind::Ur => (1..=r as i64).collect(),
        DomainKind::Urz => {
            let q = first_nontrivial_prefix(z);
            (1..=r).map(|i| if i < q { i as i64 } else { i as i64 - 1 }).collect()
        }
        DomainKind::Vrz => q_counts(z).into_iter().map(|x| x as i64).collect(),
    }
}

pub fn contains(kind: DomainKind, z: &ZVector, s: &ComplexPoint) -> Result<bool> {
    if z.len() != s.len() {
        return Err(Error::LengthMismatch(format!("z has {} entries, s has {}", z.len(), s.len())));
    }
    let sums = s.real_prefix_sums();
    let bounds = domain_bounds(kind, z);
    Ok(sums.iter().zip(bounds).all(|(x, b)| *x > Real::from_i64(b, x.prec())))
}

/// Candidate singular hyperplanes of the meromorphic continuation.
pub fn singular_hyperplanes(z: &ZVector) -> Vec<Hyperplane> {
    let mut idx = Vec::new();
    let mut acc = RotationNumber::ONE;
    for (i, x) in z.0.iter().enumerate() {
        acc = acc.mul(x);
        if acc.is_one() {
            idx.push(i + 1);
        }
    }
    let mut out = Vec::new();
    if idx.is_empty() {
        return out;
    }
    let case_a = idx[0] == 1;
    for (jm1, &ij) in idx.iter().enumerate() {
        let j = jm1 + 1;
        if case_a && j == 1 {
            out.push(Hyperplane { index_sum: 1, levels: Levels::One });
        } else {
            out.push(Hyperplane { index_sum: ij, levels: Levels::AtMost(j as i64) });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn zv(s: &str) -> ZVector {
        s.parse().unwrap()
    }

    #[test]
    fn products() {
        assert_eq!(rotation_product(&zv("1/2,1/2"), 1, 2).unwrap(), RotationNumber::ONE);
        assert_eq!(rotation_product(&zv("0/1,1/2"), 1, 2).unwrap(), RotationNumber::MINUS_ONE);
        assert_eq!(rotation_product(&zv("1/3,1/3,1/3"), 1, 3).unwrap(), RotationNumber::ONE);
        assert!(rotation_product(&zv("1,1"), 2, 3).is_err());
        assert!(rotation_product(&zv("1,1"), 2, 1).is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!("-1".parse::<RotationNumber>().unwrap(), RotationNumber::new(1, 2).unwrap());
        assert_eq!("3/6".parse::<RotationNumber>().unwrap(), RotationNumber::MINUS_ONE);
        assert_eq!("-1/3".parse::<RotationNumber>().unwrap(), RotationNumber::new(2, 3).unwrap());
        assert_eq!("4/4".parse::<RotationNumber>().unwrap(), RotationNumber::ONE);
        assert!(matches!("1,x/2".parse::<ZVector>(), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn prefix_index() {
        assert_eq!(first_nontrivial_prefix(&zv("-1,1")), 1);
        assert_eq!(first_nontrivial_prefix(&zv("1,1,1")), 4);
        assert_eq!(first_nontrivial_prefix(&zv("1,-1")), 2);
    }

    #[test]
    fn index_sets() {
        assert_eq!(index_set_and_count(&zv("1,-1"), 1).unwrap(), (vec![1], 1));
        assert_eq!(index_set_and_count(&zv("1,-1"), 2).unwrap(), (vec![], 0));
        assert_eq!(index_set_and_count(&zv("-1,-1"), 2).unwrap(), (vec![1], 1));
        assert!(index_set_and_count(&zv("-1,-1"), 3).is_err());
    }

    #[test]
    fn membership() {
        let p = 128;
        let s = ComplexPoint::from_f64(&[1.0, 0.0], p);
        assert!(!contains(DomainKind::Urz, &zv("-1,1"), &s).unwrap());
        let s = ComplexPoint::from_f64(&[2.0, -1.0], p);
        assert!(contains(DomainKind::Vrz, &zv("1,-1"), &s).unwrap());
        assert!(!contains(DomainKind::Urz, &zv("1,-1"), &s).unwrap());
        let s = ComplexPoint::from_f64(&[2.0, 2.0, 2.0], p);
        assert!(contains(DomainKind::Ur, &zv("1/3,1/5,1"), &s).unwrap());
        assert!(contains(DomainKind::Ur, &zv("1,1"), &ComplexPoint::from_f64(&[1.0], p)).is_err());
    }

    #[test]
    fn hyperplanes() {
        let h = singular_hyperplanes(&zv("1,1"));
        assert_eq!(
            h,
            vec![
                Hyperplane { index_sum: 1, levels: Levels::One },
                Hyperplane { index_sum: 2, levels: Levels::AtMost(2) }
            ]
        );
        assert!(singular_hyperplanes(&zv("-1,1/3")).is_empty());
        assert_eq!(singular_hyperplanes(&zv("-1,-1")), vec![Hyperplane { index_sum: 2, levels: Levels::AtMost(1) }]);
        assert_eq!(singular_hyperplanes(&zv("1/3,1/3,1/3")), vec![Hyperplane { index_sum: 3, levels: Levels::AtMost(1) }]);
    }
}
