//! Command implementations for the `mplreg` binary.

pub mod input;
pub mod output;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::json;

use mplreg_core::asymptotics::{depth_expansion_report, regularised_value, DepthSpec};
use mplreg_core::eulerpoly::{gen_euler_polynomial, inner_product};
use mplreg_core::polylog::{
    eval_convergent, eval_integer_point, verify_translation, ConvergentConfig, DomainFlags, EvalReport,
};
use mplreg_core::rootsofunity::{
    domain_bounds, first_nontrivial_prefix, q_counts, singular_hyperplanes, ComplexPoint, DomainKind, RotationNumber,
    ZVector,
};
use mplreg_core::scalefun::ScaleFunction;
use mplreg_core::summation::{direct_sum, euler_maclaurin, gen_euler_boole, MatchConfig};
use mplreg_core::{Complex, Error, Result};

use output::{exit_code, join, write_csv, CsvRow, ErrorJson, EvalJson, ExpansionJson, RegJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "mplreg", version, about = "Multiple polylogarithms at roots of unity")]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "MPLREG_PREC_BITS", default_value_t = 128)]
    pub prec: usize,
    /// Expansion order A for regularised values.
    #[arg(long, global = true, default_value_t = 6)]
    pub order: i64,
    /// Tolerance for reported values and verification residuals.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Largest truncation index for convergent evaluation.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub ceiling: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convergence domains and singular hyperplanes.
    Domain {
        #[arg(short = 'z', allow_hyphen_values = true)]
        z: String,
        #[arg(short = 's', allow_hyphen_values = true)]
        s: Option<String>,
    },
    /// Value of the series at a complex or integer point.
    Eval {
        #[arg(short = 'z', allow_hyphen_values = true)]
        z: String,
        #[arg(short = 's', allow_hyphen_values = true, conflicts_with = "a")]
        s: Option<String>,
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: Option<String>,
    },
    /// Asymptotic expansion and regularised value (Stieltjes constant).
    Reg {
        #[arg(short = 'z', allow_hyphen_values = true)]
        z: String,
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: String,
        /// Log orders, one per coordinate (default all zero).
        #[arg(short = 'k', allow_hyphen_values = true)]
        k: Option<String>,
    },
    /// Randomised identity checks; nonzero exit if any residual exceeds --tol.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep an integer grid of exponent points (inclusive corners) as CSV rows.
    Table {
        #[arg(short = 'z', allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(short = 'k', allow_hyphen_values = true)]
        k: Option<String>,
    },
    /// Print a generalised Euler polynomial E_{k,n}.
    EulerPoly {
        #[arg(short = 'k')]
        k: u64,
        #[arg(short = 'n')]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Translation,
    Summation,
    All,
}

/// Rendered output plus process exit status.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

pub fn validate(cli: &Cli) -> Result<()> {
    if cli.prec < 53 {
        return Err(Error::InvalidArgument(format!("precision {} below 53 bits", cli.prec)));
    }
    if cli.order < 1 {
        return Err(Error::InvalidArgument(format!("order {} must be at least 1", cli.order)));
    }
    if !(cli.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {} must be positive", cli.tol)));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Outcome {
    let res = validate(cli).and_then(|_| match &cli.cmd {
        Command::Domain { z, s } => cmd_domain(cli, z, s.as_deref()),
        Command::Eval { z, s, a } => cmd_eval(cli, z, s.as_deref(), a.as_deref()),
        Command::Reg { z, a, k } => cmd_reg(cli, z, a, k.as_deref()),
        Command::Verify { suite, trials, seed } => cmd_verify(cli, *suite, *trials, *seed),
        Command::Table { z, from, to, k } => cmd_table(cli, z, from, to, k.as_deref()),
        Command::EulerPoly { k, n } => cmd_euler_poly(cli, *k, *n),
    });
    match res {
        Ok(o) => o,
        Err(e) => render_error(cli.format, &e),
    }
}

pub fn render_error(format: Format, e: &Error) -> Outcome {
    let ej = ErrorJson::from_error(e);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({ "error": ej })).unwrap() + "\n",
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().delimiter(b';').from_writer(Vec::new());
            w.serialize(&ej).unwrap();
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::Text => format!("error ({}): {}\n", ej.kind, ej.message),
    };
    Outcome { text, code: exit_code(e) }
}

fn match_config(cli: &Cli) -> MatchConfig {
    let mut cfg = MatchConfig::for_prec(cli.prec);
    cfg.tol = cfg.tol.min(cli.tol);
    cfg
}

fn convergent_config(cli: &Cli) -> ConvergentConfig {
    let mut cfg = ConvergentConfig::new(cli.prec, cli.tol);
    cfg.ceiling = cli.ceiling;
    cfg
}

fn cmd_domain(cli: &Cli, z: &str, s: Option<&str>) -> Result<Outcome> {
    let zv = input::parse_z(z)?;
    let q = first_nontrivial_prefix(&zv);
    let qs = q_counts(&zv);
    let planes: Vec<String> = singular_hyperplanes(&zv).iter().map(|h| h.to_string()).collect();
    let bounds = |k| domain_bounds(k, &zv);
    let membership = match s {
        Some(s) => {
            let pt = input::parse_point(s, cli.prec)?;
            Some(DomainFlags::of(&zv, &pt)?)
        }
        None => None,
    };
    let text = match cli.format {
        Format::Json => {
            let mut v = json!({
                "z": zv.to_string(),
                "q": q,
                "Q": qs,
                "bounds": { "ur": bounds(DomainKind::Ur), "urz": bounds(DomainKind::Urz), "vrz": bounds(DomainKind::Vrz) },
                "singular_hyperplanes": planes,
            });
            if let Some(f) = membership {
                v["s"] = json!(s.unwrap());
                v["in"] = json!({ "ur": f.ur, "urz": f.urz, "vrz": f.vrz });
            }
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
        Format::Csv => {
            let mut out = String::from("z;q;Q;ur;urz;vrz\n");
            let f = |b: Option<bool>| b.map(|x| x.to_string()).unwrap_or_default();
            out += &format!(
                "{};{};{};{};{};{}\n",
                zv,
                q,
                join(&qs),
                f(membership.map(|m| m.ur)),
                f(membership.map(|m| m.urz)),
                f(membership.map(|m| m.vrz))
            );
            out
        }
        Format::Text => {
            let mut out = format!("z = {zv}\nq(z) = {q}\nQ_i(z) = {}\n", join(&qs));
            for (name, k) in [("U_r", DomainKind::Ur), ("U_r(z)", DomainKind::Urz), ("V_r(z)", DomainKind::Vrz)] {
                let b = bounds(k);
                let conds: Vec<String> =
                    b.iter().enumerate().map(|(i, x)| if i == 0 { format!("Re(s1) > {x}") } else { format!("Re(s1+..+s{}) > {x}", i + 1) }).collect();
                out += &format!("{name}: {}\n", conds.join(", "));
            }
            if let Some(m) = membership {
                out += &format!("s = {}: in U_r: {}, in U_r(z): {}, in V_r(z): {}\n", s.unwrap(), m.ur, m.urz, m.vrz);
            }
            out += "singular hyperplanes:\n";
            for p in &planes {
                out += &format!("  {p}\n");
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

/// Integer points of `V_r(z)` go through regularisation, anything else in
/// `U_r(z)` through convergent evaluation.
pub fn evaluate(cli: &Cli, zv: &ZVector, pt: &ComplexPoint) -> Result<EvalReport> {
    let flags = DomainFlags::of(zv, pt)?;
    if let Some(a) = input::as_integer_point(pt) {
        if flags.vrz {
            return eval_integer_point(zv, &a, cli.order, &match_config(cli));
        }
    }
    if flags.urz {
        return eval_convergent(zv, pt, &convergent_config(cli));
    }
    Err(Error::Domain(format!("point is outside U_r(z) and is not an integer point of V_r(z) for z = {zv}")))
}

fn render_eval(cli: &Cli, zv: &ZVector, pt: &ComplexPoint, r: &EvalReport) -> String {
    match cli.format {
        Format::Json => serde_json::to_string_pretty(&EvalJson::new(&zv.to_string(), &pt.0, r)).unwrap() + "\n",
        Format::Csv => write_csv(&[eval_row(cli, zv, &point_label(pt), &join(&vec![0; zv.len()]), r)]),
        Format::Text => format!(
            "{} {}\nabs error <= {:.3e} ({}, cutoff {}, {} bits)\n",
            r.value.re.to_decimal(),
            r.value.im.to_decimal(),
            r.abs_error_estimate,
            r.method.name(),
            r.diagnostics.cutoff,
            r.diagnostics.precision_bits
        ),
    }
}

fn point_label(pt: &ComplexPoint) -> String {
    match input::as_integer_point(pt) {
        Some(a) => join(&a),
        None => pt.0.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(","),
    }
}

fn eval_row(cli: &Cli, zv: &ZVector, a: &str, k: &str, r: &EvalReport) -> CsvRow {
    CsvRow {
        z: zv.to_string(),
        a: a.to_string(),
        k: k.to_string(),
        method: r.method.name().to_string(),
        re: r.value.re.to_decimal(),
        im: r.value.im.to_decimal(),
        abs_err: format!("{:e}", r.abs_error_estimate),
        precision_bits: cli.prec,
        order: r.diagnostics.order,
    }
}

fn cmd_eval(cli: &Cli, z: &str, s: Option<&str>, a: Option<&str>) -> Result<Outcome> {
    let zv = input::parse_z(z)?;
    let pt = match (s, a) {
        (Some(s), _) => input::parse_point(s, cli.prec)?,
        (None, Some(a)) => ComplexPoint::from_ints(&input::parse_ints(a)?, cli.prec),
        (None, None) => return Err(Error::InvalidArgument("one of -s or -a is required".into())),
    };
    let r = evaluate(cli, &zv, &pt)?;
    Ok(Outcome::ok(render_eval(cli, &zv, &pt, &r)))
}

fn cmd_reg(cli: &Cli, z: &str, a: &str, k: Option<&str>) -> Result<Outcome> {
    let zv = input::parse_z(z)?;
    let a = input::parse_ints(a)?;
    let k = match k {
        Some(k) => input::parse_orders(k)?,
        None => vec![0; a.len()],
    };
    let spec = DepthSpec::new(zv.clone(), a.clone(), k.clone())?;
    let rep = depth_expansion_report(&spec, cli.order, &match_config(cli))?;
    let value = regularised_value(&rep.expansion);
    let text = match cli.format {
        Format::Json => {
            let j = RegJson {
                z: zv.to_string(),
                a: a.clone(),
                k: k.clone(),
                order: cli.order,
                regularised: output::ComplexJson::from_complex(&value),
                constant_error: rep.constant_error,
                expansion: ExpansionJson::from_expansion(&rep.expansion),
            };
            serde_json::to_string_pretty(&j).unwrap() + "\n"
        }
        Format::Csv => write_csv(&[CsvRow {
            z: zv.to_string(),
            a: join(&a),
            k: join(&k),
            method: "regularised".into(),
            re: value.re.to_decimal(),
            im: value.im.to_decimal(),
            abs_err: format!("{:e}", 4.0 * rep.constant_error),
            precision_bits: cli.prec,
            order: cli.order,
        }]),
        Format::Text => {
            let mut out = format!("{} {}\n", value.re.to_decimal(), value.im.to_decimal());
            for (x, l, m, c) in rep.expansion.terms() {
                out += &format!("  ({})^n (log n)^{l} n^(-{m}): {c:.20}\n", x.0);
            }
            out += &format!("  + o(n^(-{}))\n", rep.expansion.precision());
            out
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Clone)]
struct TrialResult {
    suite: &'static str,
    case: String,
    residual: f64,
    bound: Option<f64>,
    error: Option<Error>,
}

fn random_root(rng: &mut StdRng, maxden: i64) -> RotationNumber {
    let d = rng.gen_range(1..=maxden);
    RotationNumber::new(rng.gen_range(0..d), d).unwrap()
}

fn translation_trials(cli: &Cli, trials: usize, rng: &mut StdRng) -> Vec<TrialResult> {
    let p = cli.prec;
    let cases: Vec<(ZVector, ComplexPoint)> = (0..trials)
        .map(|i| {
            let r = i % 3 + 1;
            let z = ZVector::new((0..r).map(|_| random_root(rng, 6)).collect()).unwrap();
            let s = ComplexPoint(
                (0..r).map(|_| Complex::from_f64(rng.gen_range(0.05..3.0), rng.gen_range(-1.0..1.0), p)).collect(),
            );
            (z, s)
        })
        .collect();
    cases
        .par_iter()
        .map(|(z, s)| {
            let case = format!("z=({z}) s=({})", s.0.iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>().join(","));
            match verify_translation(z, s, 50, 15, cli.tol * 1e-3, p) {
                Ok(r) => TrialResult { suite: "translation", case, residual: r.residual, bound: None, error: None },
                Err(e) => TrialResult { suite: "translation", case, residual: f64::NAN, bound: None, error: Some(e) },
            }
        })
        .collect()
}

fn summation_trials(cli: &Cli, trials: usize, rng: &mut StdRng) -> Vec<TrialResult> {
    let p = cli.prec;
    let cases: Vec<(Vec<(u32, i64, f64)>, u64, u64, usize)> = (0..trials)
        .map(|_| {
            let nt = rng.gen_range(1..=3);
            let f = (0..nt).map(|_| (rng.gen_range(0..=2), rng.gen_range(0..=3), rng.gen_range(-2.0..2.0))).collect();
            let k = rng.gen_range(1..=5);
            let n = rng.gen_range(k.max(2)..=60);
            let m = rng.gen_range(1..=8);
            (f, k, n, m)
        })
        .collect();
    cases
        .par_iter()
        .map(|(f, k, n, m)| {
            let sf = ScaleFunction::from_f64_terms(f, p);
            let case = format!("f={f:?} k={k} n={n} m={m}");
            let zeta = RotationNumber::new(1, *k as i64).unwrap();
            let res = if *k == 1 { euler_maclaurin(&sf, *n, *m) } else { gen_euler_boole(&sf, *k, &zeta, *n, *m) };
            match res {
                Ok(b) => {
                    let brute = direct_sum(&sf.with_prec(p + 64), &zeta, *n);
                    let d = (&b.total.with_prec(p + 64) - &brute).abs_f64();
                    TrialResult { suite: "summation", case, residual: d, bound: Some(b.remainder_estimate), error: None }
                }
                Err(e) => TrialResult { suite: "summation", case, residual: f64::NAN, bound: None, error: Some(e) },
            }
        })
        .collect()
}

fn cmd_verify(cli: &Cli, suite: Suite, trials: usize, seed: u64) -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut results = Vec::new();
    if matches!(suite, Suite::Translation | Suite::All) {
        results.extend(translation_trials(cli, trials, &mut rng));
    }
    if matches!(suite, Suite::Summation | Suite::All) {
        results.extend(summation_trials(cli, trials, &mut rng));
    }
    let passed = |t: &TrialResult| {
        t.error.is_none() && t.residual <= cli.tol && t.bound.map(|b| t.residual <= b).unwrap_or(true)
    };
    let failures = results.iter().filter(|t| !passed(t)).count();
    let code = results
        .iter()
        .find_map(|t| t.error.as_ref().map(exit_code))
        .unwrap_or(if failures > 0 { 4 } else { 0 });
    let worst = results.iter().map(|t| t.residual).filter(|x| x.is_finite()).fold(0.0, f64::max);
    let text = match cli.format {
        Format::Json => {
            let items: Vec<_> = results
                .iter()
                .map(|t| {
                    json!({
                        "suite": t.suite,
                        "case": t.case,
                        "residual": if t.residual.is_finite() { json!(t.residual) } else { json!(null) },
                        "bound": t.bound,
                        "passed": passed(t),
                        "error": t.error.as_ref().map(ErrorJson::from_error),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "tol": cli.tol,
                "trials": results.len(),
                "failures": failures,
                "worst_residual": worst,
                "results": items,
            }))
            .unwrap()
                + "\n"
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().delimiter(b';').from_writer(Vec::new());
            w.write_record(["suite", "case", "residual", "bound", "passed"]).unwrap();
            for t in &results {
                let bound = t.bound.map(|b| format!("{b:e}")).unwrap_or_default();
                w.write_record([t.suite, &t.case, &format!("{:e}", t.residual), &bound, &passed(t).to_string()])
                    .unwrap();
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::Text => {
            let mut out = String::new();
            for t in &results {
                let status = if passed(t) { "ok  " } else { "FAIL" };
                match &t.error {
                    Some(e) => out += &format!("{status} {} {}: {e}\n", t.suite, t.case),
                    None => out += &format!("{status} {} {}: residual {:.3e}\n", t.suite, t.case, t.residual),
                }
            }
            out += &format!("{} trials, {failures} failures, worst residual {worst:.3e}\n", results.len());
            out
        }
    };
    Ok(Outcome { text, code })
}

fn grid(from: &[i64], to: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (&lo, &hi) in from.iter().zip(to) {
        out = out.into_iter().flat_map(|p| (lo..=hi).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

fn cmd_table(cli: &Cli, z: &str, from: &str, to: &str, k: Option<&str>) -> Result<Outcome> {
    let zv = input::parse_z(z)?;
    let lo = input::parse_ints(from)?;
    let hi = input::parse_ints(to)?;
    if lo.len() != zv.len() || hi.len() != zv.len() {
        return Err(Error::LengthMismatch(format!("grid corners must have {} coordinates", zv.len())));
    }
    let k = match k {
        Some(k) => input::parse_orders(k)?,
        None => vec![0; zv.len()],
    };
    if k.len() != zv.len() {
        return Err(Error::LengthMismatch(format!("k must have {} entries", zv.len())));
    }
    let points = grid(&lo, &hi);
    let logs = k.iter().any(|&x| x > 0);
    let results: Vec<(Vec<i64>, Result<CsvRow>)> = points
        .into_par_iter()
        .map(|a| {
            let row = if logs {
                let spec = DepthSpec::new(zv.clone(), a.clone(), k.clone());
                spec.and_then(|s| depth_expansion_report(&s, cli.order, &match_config(cli))).map(|rep| {
                    let v = regularised_value(&rep.expansion);
                    CsvRow {
                        z: zv.to_string(),
                        a: join(&a),
                        k: join(&k),
                        method: "regularised".into(),
                        re: v.re.to_decimal(),
                        im: v.im.to_decimal(),
                        abs_err: format!("{:e}", 4.0 * rep.constant_error),
                        precision_bits: cli.prec,
                        order: cli.order,
                    }
                })
            } else {
                let pt = ComplexPoint::from_ints(&a, cli.prec);
                evaluate(cli, &zv, &pt).map(|r| eval_row(cli, &zv, &join(&a), &join(&k), &r))
            };
            (a, row)
        })
        .collect();
    let mut code = 0;
    let rows: Vec<CsvRow> = results
        .into_iter()
        .map(|(a, r)| match r {
            Ok(row) => row,
            Err(e) => {
                if code == 0 {
                    code = exit_code(&e);
                }
                CsvRow {
                    z: zv.to_string(),
                    a: join(&a),
                    k: join(&k),
                    method: format!("error:{}", output::error_kind(&e)),
                    re: String::new(),
                    im: String::new(),
                    abs_err: String::new(),
                    precision_bits: cli.prec,
                    order: cli.order,
                }
            }
        })
        .collect();
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&rows).unwrap() + "\n",
        Format::Csv | Format::Text => write_csv(&rows),
    };
    Ok(Outcome { text, code })
}

fn cmd_euler_poly(cli: &Cli, k: u64, n: usize) -> Result<Outcome> {
    let e = gen_euler_polynomial(k, n)?;
    let coeffs: Vec<String> = e.coeffs().iter().map(|c| c.to_string()).collect();
    let text = match cli.format {
        Format::Json => {
            let ip = if k >= 2 {
                let zeta = RotationNumber::new(1, k as i64)?;
                Some(output::ComplexJson::from_complex(&inner_product(k, &zeta, 1, k - 1, cli.prec)?))
            } else {
                None
            };
            serde_json::to_string_pretty(&json!({ "k": k, "n": n, "coefficients": coeffs, "polynomial": e.to_string(), "v1k_w1k": ip }))
                .unwrap()
                + "\n"
        }
        Format::Csv => {
            let mut out = String::from("degree;coefficient\n");
            for (d, c) in coeffs.iter().enumerate() {
                out += &format!("{d};{c}\n");
            }
            out
        }
        Format::Text => format!("E_{{{k},{n}}}(x) = {e}\n"),
    };
    Ok(Outcome::ok(text))
}

