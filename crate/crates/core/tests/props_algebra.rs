//! Property tests for roots of unity, the scale algebra and the polynomial families.

use mplreg_core::eulerpoly::{
    binomial, gen_euler_polynomial, periodic_gen_euler_eval, RationalPolynomial,
};
use mplreg_core::rootsofunity::{
    contains, domain_bounds, first_nontrivial_prefix, q_counts, rotation_product, ComplexPoint, DomainKind,
    RotationNumber, ZVector,
};
use mplreg_core::scalefun::{approx_eq, ScaleFunction};
use mplreg_core::{Complex, Real};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const P: usize = 128;

fn root() -> impl Strategy<Value = RotationNumber> {
    (1i64..=12).prop_flat_map(|d| (-30i64..30).prop_map(move |n| RotationNumber::new(n, d).unwrap()))
}

fn zvec(maxlen: usize) -> impl Strategy<Value = ZVector> {
    prop::collection::vec(root(), 1..=maxlen).prop_map(|v| ZVector::new(v).unwrap())
}

fn scale_fn() -> impl Strategy<Value = Vec<(u32, i64, f64)>> {
    prop::collection::vec((0u32..=3, -2i64..=4, -3.0f64..3.0), 1..=3)
}

proptest! {
    #[test]
    fn rotation_group_laws(a in root(), b in root(), c in root()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_one());
        prop_assert_eq!(a.is_one(), a.numerator() == 0);
        prop_assert_eq!(a.numerator().gcd(&a.denominator()), 1);
        if a.numerator() == 0 {
            prop_assert_eq!(a.denominator(), 1);
        }
        prop_assert_eq!(a.to_string().parse::<RotationNumber>().unwrap(), a);
    }

    #[test]
    fn products_are_associative(z in zvec(6)) {
        let r = z.len();
        for i in 1..=r {
            for j in i..=r {
                for m in i..j {
                    let split = rotation_product(&z, i, m).unwrap().mul(&rotation_product(&z, m + 1, j).unwrap());
                    prop_assert_eq!(split, rotation_product(&z, i, j).unwrap());
                }
            }
        }
        prop_assert!(rotation_product(&z, 1, r + 1).is_err());
    }

    #[test]
    fn q_counts_bounded(z in zvec(6)) {
        let q = first_nontrivial_prefix(&z);
        for (idx, &qi) in q_counts(&z).iter().enumerate() {
            let i = idx + 1;
            prop_assert!(qi <= i);
            if i >= q {
                prop_assert!(qi + 1 <= i);
            }
        }
    }

    #[test]
    fn domain_inclusions(z in zvec(4), s in prop::collection::vec(-3.0f64..4.0, 4)) {
        let pt = ComplexPoint::from_f64(&s[..z.len()], P);
        let u = contains(DomainKind::Ur, &z, &pt).unwrap();
        let uz = contains(DomainKind::Urz, &z, &pt).unwrap();
        let v = contains(DomainKind::Vrz, &z, &pt).unwrap();
        prop_assert!(!u || uz);
        prop_assert!(!uz || v);
    }

    #[test]
    fn v_equals_u_only_for_trivial_z(z in zvec(4)) {
        let r = z.len();
        let trivial = z.entries().iter().all(|x| x.is_one());
        // grid of prefix sums around the bounds
        let steps = [-0.5, 0.5, 1.5];
        let mut differs = false;
        let mut idx = vec![0usize; r];
        loop {
            let mut prev = 0.0;
            let sums: Vec<f64> = (0..r).map(|i| i as f64 + 1.0 + steps[idx[i]] - 1.0).collect();
            let coords: Vec<f64> = sums.iter().map(|x| { let c = x - prev; prev = *x; c }).collect();
            let pt = ComplexPoint::from_f64(&coords, P);
            differs |= contains(DomainKind::Ur, &z, &pt).unwrap() != contains(DomainKind::Vrz, &z, &pt).unwrap();
            let mut k = 0;
            while k < r && idx[k] == steps.len() - 1 { idx[k] = 0; k += 1; }
            if k == r { break; }
            idx[k] += 1;
        }
        // a point just above the V bounds lies in V; it lies in U only when the bounds agree
        let vb = domain_bounds(DomainKind::Vrz, &z);
        let mut prev = 0.0;
        let coords: Vec<f64> = vb.iter().map(|&b| { let c = b as f64 + 0.5 - prev; prev = b as f64 + 0.5; c }).collect();
        let w = ComplexPoint::from_f64(&coords, P);
        prop_assert!(contains(DomainKind::Vrz, &z, &w).unwrap());
        differs |= !contains(DomainKind::Ur, &z, &w).unwrap();
        prop_assert_eq!(differs, !trivial);
    }

    #[test]
    fn derivative_undoes_antiderivative(terms in scale_fn()) {
        let f = ScaleFunction::from_f64_terms(&terms, P);
        let back = f.antiderivative().differentiate();
        prop_assert!(approx_eq(&back, &f, 1e-30));
    }

    #[test]
    fn derivative_matches_finite_differences(terms in scale_fn()) {
        let f = ScaleFunction::from_f64_terms(&terms, P);
        let d = f.differentiate();
        for t in [2.0f64, 10.0, 100.0] {
            let h = t * 1e-4;
            let at = |x: f64| f.value_at(&Real::from_f64(x, P));
            // fourth-order central difference
            let fd = (&(&at(t - 2.0 * h) - &at(t + 2.0 * h)).scale(&Real::from_f64(1.0 / 12.0, P))
                + (&at(t + h) - &at(t - h)).scale(&Real::from_f64(2.0 / 3.0, P)))
                .scale(&Real::from_f64(1.0 / h, P));
            let exact = d.value_at(&Real::from_f64(t, P));
            let scale = exact.abs_f64().max(f.abs_coeff_sum() * t.powi(-6));
            prop_assert!((&fd - &exact).abs_f64() <= 1e-6 * scale.max(1e-300), "t={} fd={} exact={}", t, fd, exact);
        }
    }

    #[test]
    fn tail_bound_dominates_quadrature(terms in prop::collection::vec((0u32..=2, 2i64..=4, -3.0f64..3.0), 1..=3), a in 2.0f64..20.0) {
        let f = ScaleFunction::from_f64_terms(&terms, P);
        let bound = f.abs_tail_bound(a);
        // Simpson in u = log t over [a, a + 1e4]
        let (u0, u1) = (a.ln(), (a + 1e4).ln());
        let n = 4000;
        let h = (u1 - u0) / n as f64;
        let g = |u: f64| {
            let t = u.exp();
            let v: f64 = terms.iter().map(|&(l, m, c)| c * u.powi(l as i32) * t.powi(-(m as i32))).sum();
            v.abs() * t
        };
        let mut q = g(u0) + g(u1);
        for i in 1..n {
            q += g(u0 + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        q *= h / 3.0;
        prop_assert!(bound >= q * (1.0 - 1e-9), "bound {} < quadrature {}", bound, q);
    }

    #[test]
    fn shift_expansion_residual(terms in prop::collection::vec((0u32..=2, -1i64..=3, -2.0f64..2.0), 1..=2), t0 in 0u64..4, a in 0i64..4) {
        let f = ScaleFunction::from_f64_terms(&terms, P);
        let (g, err) = f.shift_expand(t0, a);
        prop_assert_eq!(err.m, a + 1);
        let mut scaled = Vec::new();
        for n in [1000u64, 10000] {
            let x = f.value_at(&Real::from_u64(n + t0, P));
            let y = g.value_at(&Real::from_u64(n, P));
            let res = (&x - &y).abs_f64();
            let ln = (n as f64).ln();
            scaled.push(res * (n as f64).powi((a + 1) as i32) / (1.0 + ln).powi(err.l as i32));
        }
        let c: f64 = terms.iter().map(|t| t.2.abs()).sum::<f64>() * ((t0 + 1) as f64).powi((a + 2) as i32) * 4f64.powi((a + 4) as i32);
        prop_assert!(scaled[0] <= c && scaled[1] <= c, "{:?} vs {}", scaled, c);
    }
}

/// `(1/k) sum_j E(x + j)` as an exact polynomial.
fn strodt(p: &RationalPolynomial, k: u64) -> RationalPolynomial {
    let mut acc = RationalPolynomial::new(vec![]);
    for j in 0..k {
        acc = acc.add(&p.compose_affine(&BigRational::from_integer(BigInt::from(j)), &BigRational::one()));
    }
    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(k)))
}

#[test]
fn strodt_identity_exhaustive() {
    for k in 2..=6u64 {
        for n in 0..=12 {
            let e = gen_euler_polynomial(k, n).unwrap();
            assert_eq!(strodt(&e, k), RationalPolynomial::monomial(n), "k={k} n={n}");
        }
    }
}

#[test]
fn derivative_identity_exhaustive() {
    for k in 2..=6u64 {
        for n in 1..=12 {
            let d = gen_euler_polynomial(k, n).unwrap().derivative();
            let rhs = gen_euler_polynomial(k, n - 1).unwrap().scale(&BigRational::from_integer(BigInt::from(n)));
            assert_eq!(d, rhs, "k={k} n={n}");
        }
    }
}

/// Classical Euler polynomials from (1 + e^t) G(x, t) = 2 e^{xt}, G = sum E_n(x) t^n / n!.
fn euler_from_generating_series(nmax: usize) -> Vec<RationalPolynomial> {
    let fact = |n: usize| -> BigInt { (1..=n as u64).fold(BigInt::one(), |a, b| a * b) };
    let mut g: Vec<RationalPolynomial> = Vec::new();
    for n in 0..=nmax {
        let mut rhs = RationalPolynomial::monomial(n).scale(&BigRational::new(BigInt::from(2), fact(n)));
        for j in 1..=n {
            rhs = rhs.add(&g[n - j].scale(&BigRational::new(-BigInt::one(), fact(j))));
        }
        g.push(rhs.scale(&BigRational::new(BigInt::one(), BigInt::from(2))));
    }
    g.into_iter().enumerate().map(|(n, p)| p.scale(&BigRational::from_integer(fact(n)))).collect()
}

#[test]
fn k2_matches_generating_series() {
    let classical = euler_from_generating_series(10);
    for (n, c) in classical.iter().enumerate() {
        assert_eq!(&gen_euler_polynomial(2, n).unwrap(), c, "n={n}");
    }
    // spot value: E_2(x) = x^2 - x
    assert_eq!(classical[2], RationalPolynomial::from_ints(&[0, -1, 1]));
    assert!(binomial(10, 3) == BigInt::from(120));
    assert!(!classical[3].is_zero() && BigRational::zero() == classical[1].eval(&BigRational::new(BigInt::one(), BigInt::from(2))));
}

proptest! {
    #[test]
    fn periodic_extension_has_period_k(k in 2u64..=6, num in 1i64..6, n in 0usize..8, x in -5.0f64..5.0) {
        prop_assume!((num as u64) < k && (num as u64).gcd(&k) == 1);
        let zeta = RotationNumber::new(num, k as i64).unwrap();
        let xr = Real::from_f64(x, P);
        let a = periodic_gen_euler_eval(k, &zeta, n, &xr).unwrap();
        let b = periodic_gen_euler_eval(k, &zeta, n, &(&xr + &Real::from_u64(k, P))).unwrap();
        let scale = 1.0 + a.abs_f64();
        prop_assert!((&a - &b).abs_f64() < 1e-25 * scale);
        // quasi-periodicity by one step
        let c = periodic_gen_euler_eval(k, &zeta, n, &(&xr + &Real::one(P))).unwrap();
        let expect = &zeta.inverse().to_complex(P) * &a;
        prop_assert!((&c - &expect).abs_f64() < 1e-25 * scale);
        let _ = Complex::zero(P);
    }
}
