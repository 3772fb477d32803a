//! JSON / CSV / text renderings. Reals are written as exact decimal strings so
//! that re-parsing at the same precision restores the same bits.

use serde::{Deserialize, Serialize};

use mplreg_core::asymptotics::AsymptoticExpansion;
use mplreg_core::polylog::EvalReport;
use mplreg_core::{Complex, Error, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: String,
    pub im: String,
}

impl ComplexJson {
    pub fn from_complex(c: &Complex) -> Self {
        ComplexJson { re: c.re.to_decimal(), im: c.im.to_decimal() }
    }

    pub fn to_complex(&self, p: usize) -> Option<Complex> {
        Some(Complex::new(Real::parse(&self.re, p)?, Real::parse(&self.im, p)?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainJson {
    pub ur: bool,
    pub urz: bool,
    pub vrz: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsJson {
    pub cutoff: u64,
    pub precision_bits: usize,
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalJson {
    pub z: String,
    pub s: Vec<ComplexJson>,
    pub value: ComplexJson,
    pub abs_error_estimate: f64,
    pub method: String,
    pub domain: DomainJson,
    pub diagnostics: DiagnosticsJson,
}

impl EvalJson {
    pub fn new(z: &str, s: &[Complex], r: &EvalReport) -> Self {
        EvalJson {
            z: z.to_string(),
            s: s.iter().map(ComplexJson::from_complex).collect(),
            value: ComplexJson::from_complex(&r.value),
            abs_error_estimate: r.abs_error_estimate,
            method: r.method.name().to_string(),
            domain: DomainJson { ur: r.domain.ur, urz: r.domain.urz, vrz: r.domain.vrz },
            diagnostics: DiagnosticsJson {
                cutoff: r.diagnostics.cutoff,
                precision_bits: r.diagnostics.precision_bits,
                order: r.diagnostics.order,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub xi: String,
    pub l: u32,
    pub m: i64,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub terms: Vec<TermJson>,
    pub precision: i64,
}

impl ExpansionJson {
    pub fn from_expansion(e: &AsymptoticExpansion) -> Self {
        ExpansionJson {
            terms: e
                .terms()
                .map(|(x, l, m, c)| TermJson { xi: x.0.to_string(), l, m, re: c.re.to_decimal(), im: c.im.to_decimal() })
                .collect(),
            precision: e.precision(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegJson {
    pub z: String,
    pub a: Vec<i64>,
    pub k: Vec<u32>,
    pub order: i64,
    pub regularised: ComplexJson,
    pub constant_error: f64,
    pub expansion: ExpansionJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::NonConvergence(_) => "non-convergence",
        Error::Precision(_) => "precision",
        Error::Parse { .. } => "parse",
        Error::IndexOutOfRange(_) | Error::LengthMismatch(_) | Error::InvalidArgument(_) => "invalid-argument",
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => 2,
        Error::NonConvergence(_) => 3,
        Error::Precision(_) => 4,
        _ => 1,
    }
}

impl ErrorJson {
    pub fn from_error(e: &Error) -> Self {
        ErrorJson { kind: error_kind(e).to_string(), message: e.to_string(), exit_code: exit_code(e) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub z: String,
    pub a: String,
    pub k: String,
    pub method: String,
    pub re: String,
    pub im: String,
    pub abs_err: String,
    pub precision_bits: usize,
    pub order: i64,
}

pub const CSV_HEADER: [&str; 9] = ["z", "a", "k", "method", "re", "im", "abs_err", "precision_bits", "order"];

pub fn write_csv(rows: &[CsvRow]) -> String {
    let mut w = csv::WriterBuilder::new().delimiter(b';').has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

pub fn read_csv(text: &str) -> csv::Result<Vec<CsvRow>> {
    let mut r = csv::ReaderBuilder::new().delimiter(b';').from_reader(text.as_bytes());
    r.deserialize().collect()
}

pub fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
