//! Argument grammar: `p/q` roots of unity, `a`, `a+bi`, `a-bi` complex numbers.

use mplreg_core::rootsofunity::{ComplexPoint, ZVector};
use mplreg_core::{Complex, Error, Real, Result};

fn real(s: &str, offset: usize, p: usize) -> Result<Real> {
    let t = s.trim();
    let ok = !t.is_empty()
        && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'))
        && t.chars().any(|c| c.is_ascii_digit());
    if !ok {
        return Err(Error::Parse { pos: offset, msg: format!("bad real number `{t}`") });
    }
    Real::parse(t, p).ok_or_else(|| Error::Parse { pos: offset, msg: format!("bad real number `{t}`") })
}

/// One complex number; `offset` is its position in the full argument for error reports.
pub fn parse_complex(s: &str, offset: usize, p: usize) -> Result<Complex> {
    let t = s.trim();
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::from_real(real(t, offset, p)?));
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&i| {
        (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
    });
    let imag = |txt: &str, off: usize| -> Result<Real> {
        match txt {
            "" | "+" => Ok(Real::one(p)),
            "-" => Ok(-Real::one(p)),
            _ => real(txt, off, p),
        }
    };
    match split {
        Some(i) => Ok(Complex::new(real(&body[..i], offset, p)?, imag(&body[i..], offset + i)?)),
        None => Ok(Complex::new(Real::zero(p), imag(body, offset)?)),
    }
}

pub fn parse_point(s: &str, p: usize) -> Result<ComplexPoint> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in s.split(',') {
        out.push(parse_complex(part, pos, p)?);
        pos += part.len() + 1;
    }
    Ok(ComplexPoint(out))
}

pub fn parse_ints(s: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in s.split(',') {
        let v = part
            .trim()
            .parse()
            .map_err(|_| Error::Parse { pos, msg: format!("expected an integer, got `{}`", part.trim()) })?;
        out.push(v);
        pos += part.len() + 1;
    }
    Ok(out)
}

pub fn parse_orders(s: &str) -> Result<Vec<u32>> {
    parse_ints(s)?
        .into_iter()
        .map(|v| u32::try_from(v).map_err(|_| Error::Parse { pos: 0, msg: format!("log order {v} must be >= 0") }))
        .collect()
}

pub fn parse_z(s: &str) -> Result<ZVector> {
    s.parse()
}

/// The integer point of `s` if every coordinate is a (small) integer.
pub fn as_integer_point(s: &ComplexPoint) -> Option<Vec<i64>> {
    s.0.iter()
        .map(|c| {
            if !c.im.is_zero() || c.re.floor() != c.re {
                return None;
            }
            let v = c.re.to_f64();
            (v.abs() < 1e9).then_some(v as i64)
        })
        .collect()
}
