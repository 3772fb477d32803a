//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use mplreg_core::asymptotics::{
    depth_expansion, order_lower_bound, partial_sum, regularised_value, AsymptoticExpansion, Character, ConstantMode,
    DepthSpec,
};
use mplreg_core::eulerpoly::{gen_euler_polynomial, inner_product_terms, RationalPolynomial};
use mplreg_core::polylog::{
    brute_partial_sum, eval_convergent, eval_integer_point, verify_translation, ConvergentConfig, PartialSumSpec,
};
use mplreg_core::rootsofunity::{contains, ComplexPoint, DomainKind, RotationNumber, ZVector};
use mplreg_core::scalefun::ScaleFunction;
use mplreg_core::summation::{euler_maclaurin, gen_euler_boole, MatchConfig};
use mplreg_core::{Complex, Real};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const P: usize = 128;

type Outcome = Result<String, String>;

fn zv(s: &str) -> ZVector {
    s.parse().unwrap()
}

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// zeta(s) for real s > 1 by Euler–Maclaurin in f64: 10 direct terms, 6 Bernoulli corrections.
fn zeta_f64(s: f64) -> f64 {
    let n = 10.0f64;
    let mut acc: f64 = (1..10).map(|k| (k as f64).powf(-s)).sum();
    acc += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
    let mut fact = 1.0;
    let mut rising = s; // s (s+1) ... (s+2j-2)
    for (j, bj) in b.iter().enumerate() {
        let k = 2 * j + 2;
        fact *= ((k - 1) * k) as f64;
        acc += bj / fact * rising * n.powf(-s - (k as f64) + 1.0);
        rising *= (s + k as f64 - 1.0) * (s + k as f64);
    }
    acc
}

fn c1() -> Outcome {
    let mut u = AsymptoticExpansion::new(4);
    u.add_term(Character(RotationNumber::MINUS_ONE), 0, 0, Complex::one(P));
    let v = partial_sum(&u, ConstantMode::PerTerm).map_err(|e| e.to_string())?;
    let reg = regularised_value(&v).re.to_f64();
    let osc = v.coeff_or_zero(Character(RotationNumber::MINUS_ONE), 0, 0, P).re.to_f64();
    check((reg + 0.5).abs() < 1e-12 && (osc + 0.5).abs() < 1e-12, format!("regularised {reg:.15}, (-1)^n coefficient {osc:.15}"))
}

fn c2() -> Outcome {
    let mut u = AsymptoticExpansion::new(4);
    u.add_term(Character(RotationNumber::MINUS_ONE), 1, 0, Complex::one(P));
    let v = partial_sum(&u, ConstantMode::PerTerm).map_err(|e| e.to_string())?;
    let reg = regularised_value(&v).re.to_f64();
    let expect = (PI / 2.0).ln() / 2.0;
    check((reg - expect).abs() < 1e-10, format!("regularised {reg:.15}, expected {expect:.15}"))
}

fn c3() -> Outcome {
    let r = eval_integer_point(&zv("1,-1"), &[2, -1], 6, &MatchConfig::for_prec(P)).map_err(|e| e.to_string())?;
    let v = r.value.re.to_f64();
    let expect = LN_2 / 2.0 - PI * PI / 16.0;
    check((v - expect).abs() < 1e-8, format!("value {v:.15}, expected {expect:.15}"))
}

fn c4() -> Outcome {
    let s = DepthSpec::new(zv("1,-1"), vec![2, -2], vec![0, 0]).unwrap();
    let e = depth_expansion(&s, 2).map_err(|e| e.to_string())?;
    let c = regularised_value(&e).re.to_f64();
    let osc = e.coeff_or_zero(Character(RotationNumber::MINUS_ONE), 0, 0, P).re.to_f64();
    let expect = -LN_2 / 2.0 + 0.25;
    check(
        (c - expect).abs() < 1e-8 && (osc - 0.25).abs() < 1e-8,
        format!("constant {c:.15} (expected {expect:.15}), (-1)^n coefficient {osc:.15}"),
    )
}

fn c5() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for s in [2i64, 3] {
        let expect = -(2f64).powi(-s as i32) * zeta_f64(s as f64);
        let conv = eval_convergent(&zv("1,-1"), &ComplexPoint::from_ints(&[s, 0], P), &ConvergentConfig::new(P, 1e-13))
            .map_err(|e| e.to_string())?;
        let reg = eval_integer_point(&zv("1,-1"), &[s, 0], 6, &MatchConfig::for_prec(P)).map_err(|e| e.to_string())?;
        let (a, b) = (conv.value.re.to_f64(), reg.value.re.to_f64());
        ok &= (a - expect).abs() < 1e-10 && (b - expect).abs() < 1e-10;
        lines.push(format!("s={s}: convergent {:.2e}, regularised {:.2e} off", (a - expect).abs(), (b - expect).abs()));
    }
    check(ok, lines.join("; "))
}

/// Independent double-precision-free oracle: direct sum at 256 bits.
fn brute_twisted(f: &[(u32, i64)], k: u64, n: u64) -> Complex {
    let p = 256;
    let mut acc = Complex::zero(p);
    for a in 1..n {
        let ar = Real::from_u64(a, p);
        let la = ar.ln();
        let mut v = Real::zero(p);
        for &(l, m) in f {
            v = &v + &(&la.powi(l as i64) * &ar.powi(-m));
        }
        acc = &acc + &Complex::root_of_unity((a % k) as i64, k as i64, p).scale(&v);
    }
    acc
}

fn c6() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for k in 2..=5u64 {
        let zeta = RotationNumber::new(1, k as i64).unwrap();
        for f in [vec![(0u32, 2i64)], vec![(1, 2)]] {
            let sf = ScaleFunction::from_f64_terms(&f.iter().map(|&(l, m)| (l, m, 1.0)).collect::<Vec<_>>(), P);
            let r = gen_euler_boole(&sf, k, &zeta, 30, 6).map_err(|e| e.to_string())?;
            let d = (&r.total.with_prec(256) - &brute_twisted(&f, k, 30)).abs_f64();
            ok &= d <= r.remainder_estimate && d <= 1e-20;
            worst = worst.max(d);
        }
    }
    check(ok, format!("worst |engine - brute| = {worst:.2e}"))
}

fn classical_euler(n: usize) -> RationalPolynomial {
    // E_n(x) = x^n - (1/2) sum_{j<n} C(n,j) E_j(x)
    let mut polys: Vec<RationalPolynomial> = Vec::new();
    for m in 0..=n {
        let mut acc = RationalPolynomial::monomial(m);
        for (j, e) in polys.iter().enumerate() {
            let c = mplreg_core::eulerpoly::binomial(m as u64, j as u64);
            acc = acc.add(&e.scale(&BigRational::new(-c, BigInt::from(2))));
        }
        polys.push(acc);
    }
    polys.pop().unwrap()
}

fn c7() -> Outcome {
    for n in 0..=10 {
        let g = gen_euler_polynomial(2, n).map_err(|e| e.to_string())?;
        if g != classical_euler(n) {
            return Err(format!("E_(2,{n}) = {g} differs from classical {}", classical_euler(n)));
        }
    }
    // evaluate the exact form at zeta = -1
    let terms = inner_product_terms(2, 1, 1).map_err(|e| e.to_string())?;
    let v: BigRational = terms.iter().map(|(pw, c)| if pw % 2 == 0 { c.clone() } else { -c.clone() }).sum();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    check(v == half, format!("E_(2,n) classical for n <= 10; <v11,w11> = {v}"))
}

fn c8() -> Outcome {
    let f = ScaleFunction::from_f64_terms(&[(0, 2, 1.0)], P);
    let r = euler_maclaurin(&f, 50, 4).map_err(|e| e.to_string())?;
    let d = (&r.total.with_prec(256) - &brute_twisted(&[(0, 2)], 1, 50)).abs_f64();
    check(d <= r.remainder_estimate, format!("|engine - brute| = {d:.2e}, estimate {:.2e}", r.remainder_estimate))
}

fn random_roots(rng: &mut StdRng, r: usize, maxden: i64) -> ZVector {
    let v = (0..r)
        .map(|_| {
            let d = rng.gen_range(1..=maxden);
            RotationNumber::new(rng.gen_range(0..d), d).unwrap()
        })
        .collect();
    ZVector::new(v).unwrap()
}

fn c9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for r in 1..=3 {
        for _ in 0..25 {
            let z = random_roots(&mut rng, r, 6);
            let s = ComplexPoint(
                (0..r).map(|_| Complex::from_f64(rng.gen_range(0.05..3.0), rng.gen_range(-1.0..1.0), P)).collect(),
            );
            let rep = verify_translation(&z, &s, 50, 15, 1e-20, P).map_err(|e| format!("z = {z}: {e}"))?;
            worst = worst.max(rep.residual);
        }
    }
    check(worst < 1e-14, format!("75 cases, worst residual {worst:.2e}"))
}

fn c10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..50 {
        let r = rng.gen_range(1..=3);
        let z = random_roots(&mut rng, r, 4);
        let a: Vec<i64> = (0..r).map(|_| rng.gen_range(-3..=3)).collect();
        let spec = DepthSpec::new(z.clone(), a.clone(), vec![0; r]).unwrap();
        let e = depth_expansion(&spec, 2).map_err(|e| format!("z = {z}, a = {a:?}: {e}"))?;
        let lb = order_lower_bound(&spec);
        if let Some(o) = e.order() {
            if o < lb {
                return Err(format!("z = {z}, a = {a:?}: order {o} < bound {lb}"));
            }
        }
    }
    Ok(String::from("50 random specs respect the bound"))
}

fn c11() -> Outcome {
    let z = zv("-1,1");
    let s = ComplexPoint::from_f64(&[1.2, 0.1], P);
    let mut pts = Vec::new();
    for n in [100u64, 1000, 10000] {
        let t = brute_partial_sum(&PartialSumSpec::from_roots(&z, s.clone(), n, Some(2 * n), P), P)
            .map_err(|e| e.to_string())?;
        pts.push(((n as f64).ln(), t.abs_f64().ln()));
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    check(slope <= -0.2, format!("fitted slope {slope:.4}"))
}

fn c12() -> Outcome {
    let pt = |a: f64, b: f64| ComplexPoint::from_f64(&[a, b], P);
    let z = zv("-1,1");
    let out_u = !contains(DomainKind::Urz, &z, &pt(1.0, 0.0)).unwrap();
    // bounds are Re s1 > 0 (strict, holds) and Re(s1+s2) > 1 (equality at the point)
    let sums = pt(1.0, 0.0).real_prefix_sums();
    let boundary = sums[0].to_f64() > 0.0 && sums[1].to_f64() == 1.0;
    let z2 = zv("1,-1");
    let in_v = contains(DomainKind::Vrz, &z2, &pt(2.0, -1.0)).unwrap();
    let not_u = !contains(DomainKind::Urz, &z2, &pt(2.0, -1.0)).unwrap();
    let z3 = zv("-1,-1");
    let mut same = true;
    for i in 0..10 {
        for j in 0..10 {
            let q = pt(-1.0 + 0.37 * i as f64, -1.5 + 0.41 * j as f64);
            same &= contains(DomainKind::Urz, &z3, &q).unwrap() == contains(DomainKind::Vrz, &z3, &q).unwrap();
        }
    }
    check(
        out_u && boundary && in_v && not_u && same,
        format!("(1,0) outside: {out_u}, boundary: {boundary}, (2,-1) in V\\U: {}, U=V on grid: {same}", in_v && not_u),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("alternating sum regularised value", c1),
        ("alternating log sum regularised value", c2),
        ("integer point (2,-1)", c3),
        ("depth expansion (2,-2)", c4),
        ("two methods vs closed form", c5),
        ("root-of-unity engine identity", c6),
        ("k=2 reduction", c7),
        ("Euler-Maclaurin engine identity", c8),
        ("translation identity residuals", c9),
        ("order lower bound", c10),
        ("tail decay slope", c11),
        ("domain examples", c12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err(String::from("panicked")));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{secs:.2}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{secs:.2}s]", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
