use plancherel::numerics::*;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

const P: u32 = 256;

fn c(re: f64, im: f64) -> Complex {
    Complex::with_val(P, (re, im))
}

fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
    crel_err(a, b) < tol
}

#[test]
fn bernoulli_examples() {
    assert_eq!(bernoulli(0), 1);
    assert_eq!(bernoulli(1), Rational::from((-1, 2)));
    assert_eq!(bernoulli(2), Rational::from((1, 6)));
    assert_eq!(bernoulli(4), Rational::from((-1, 30)));
    assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    let t = bernoulli_table(40);
    for m in 1..20 {
        assert_eq!(t[2 * m + 1], 0);
    }
}

#[test]
fn bernoulli_recursion_holds() {
    let t = bernoulli_table(30);
    for n in 1..30usize {
        let mut acc = Rational::new();
        let mut binom = rug::Integer::from(1);
        for k in 0..=n {
            acc += Rational::from(&binom) * &t[k];
            binom *= (n + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        assert_eq!(acc, 0, "n = {n}");
    }
}

#[test]
fn neg_polylog_examples() {
    let x = c(0.3, 0.2);
    let expect = Complex::with_val(P, -(Complex::with_val(P, 1 - &x).ln()));
    assert!(close(&neg_polylog(0, &x).unwrap(), &expect, 1e-70));
    assert!(neg_polylog(1, &c(0.0, 0.0)).unwrap().real().is_zero());
    let v = neg_polylog(2, &c(0.5, 0.0)).unwrap();
    assert!(close(&v, &c(2.0, 0.0), 1e-70));
    assert!(neg_polylog(1, &c(1.0, 0.0)).is_err());
    assert!(neg_polylog(0, &c(1.0, 0.0)).is_err());
}

#[test]
fn neg_polylog_matches_series() {
    // Li_{1-m}(x) = Σ k^{m-1} x^k for |x| < 1.
    let x = c(0.21, -0.13);
    for m in 1..7usize {
        let mut acc = Complex::new(P);
        let mut pw = x.clone();
        for k in 1..600u32 {
            let term = Complex::with_val(P, &pw * Float::with_val(P, k).pow(m as u32 - 1));
            acc += term;
            pw *= &x;
        }
        assert!(close(&neg_polylog(m, &x).unwrap(), &acc, 1e-60), "m = {m}");
    }
}

#[test]
fn chebyshev_examples() {
    let s = c(0.7, 0.4);
    assert!(close(&chebyshev_eval(0, &s), &c(2.0, 0.0), 1e-70));
    assert!(close(&chebyshev_eval(1, &s), &s, 1e-70));
    assert!(close(&chebyshev_eval(-1, &s), &s, 1e-70));
    let s2 = Complex::with_val(P, &s * &s) - 2;
    assert!(close(&chebyshev_eval(2, &s), &s2, 1e-70));
    let z = c(1.3, 0.5);
    let sz = Complex::with_val(P, &z + Complex::with_val(P, z.recip_ref()));
    for j in 0..9i32 {
        let e = Complex::with_val(P, (&z).pow(j)) + Complex::with_val(P, (&z).pow(-j));
        assert!(close(&chebyshev_eval(j as i64, &sz), &e, 1e-60));
    }
}

#[test]
fn newton_sqrt2() {
    let f = |u: &[Float]| vec![Float::with_val(P, u[0].square_ref()) - 2u32];
    let j = |u: &[Float]| vec![vec![Float::with_val(P, &u[0] * 2u32)]];
    let tol = default_tol(P);
    let out = newton_solve(&f, Jacobian::Closed(&j), &[real(P, 1.5)], &tol, 50).unwrap();
    let s2 = Float::with_val(P, 2u32).sqrt();
    assert!(rel_err(&out.root[0], &s2) < 1e-70);
    let fd = newton_solve(&f, Jacobian::FiniteDifference, &[real(P, 1.5)], &tol, 80).unwrap();
    assert!(rel_err(&fd.root[0], &s2) < 1e-60);
    assert!(f(&out.root)[0].clone().abs() < tol);
}

#[test]
fn newton_reports_failure() {
    let f = |u: &[Float]| vec![Float::with_val(P, u[0].square_ref()) + 1u32];
    let tol = default_tol(P);
    assert!(newton_solve(&f, Jacobian::FiniteDifference, &[real(P, 0.5)], &tol, 30).is_err());
}

#[test]
fn lagrange_catalan() {
    let f = TruncatedPowerSeries::from_coeffs(
        [0i64, 1, -1, 0, 0, 0, 0, 0, 0].iter().map(|&v| Rational::from(v)).collect(),
    );
    let g = series_invert_lagrange(&f).unwrap();
    let cat = [0i64, 1, 1, 2, 5, 14, 42, 132, 429];
    for (k, &v) in cat.iter().enumerate() {
        assert_eq!(g.coeff(k as i64).unwrap(), v);
    }
    let back = f.compose(&g).unwrap();
    for k in 0..back.end() {
        assert_eq!(back.coeff(k).unwrap(), if k == 1 { 1 } else { 0 });
    }
    let id = TruncatedPowerSeries::from_coeffs(vec![Rational::new(), Rational::from(1), Rational::new()]);
    let gi = series_invert_lagrange(&id).unwrap();
    assert_eq!(gi.coeff(1).unwrap(), 1);
    assert_eq!(gi.coeff(2).unwrap(), 0);
    let bad = TruncatedPowerSeries::from_coeffs(vec![Rational::new(), Rational::new(), Rational::from(1)]);
    assert!(series_invert_lagrange(&bad).is_err());
}

#[test]
fn truncation_contract_of_products() {
    let z = Complex::new(P);
    let a = Series::new(-2, (0..6).map(|k| c(k as f64 + 1.0, 0.5)).collect(), &z);
    let b = Series::new(1, (0..4).map(|k| c(0.5, k as f64)).collect(), &z);
    let p = a.mul(&b);
    assert_eq!(p.lo(), -1);
    assert_eq!(p.end(), (-2 + b.end()).min(1 + a.end()));
    assert!(p.get(p.end()).is_err());
}

#[test]
fn local_series_residue() {
    // 1/(z-2)^2 * (z^2) about 2: z^2 = 4 + 4ζ + ζ², residue 4.
    let center = c(2.0, 0.0);
    let z = Complex::new(P);
    let s = Series::new(-2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], &z);
    let poly = Series::new(0, vec![c(4.0, 0.0), c(4.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], &z);
    let ls = LocalSeries::new(center.clone(), s).mul(&LocalSeries::new(center, poly));
    assert!(close(&ls.residue().unwrap(), &c(4.0, 0.0), 1e-70));
}

fn cseries(lo: i64, v: &[(f64, f64)]) -> Series<Complex> {
    Series::new(lo, v.iter().map(|&(a, b)| c(a, b)).collect(), &Complex::new(P))
}

fn coeff_vec() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 3..9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_then_quotient_recovers(a in coeff_vec(), b in coeff_vec(), la in -3i64..3, lb in -3i64..3,
                                      b0 in 0.5f64..2.0) {
        let mut b = b;
        b[0] = (b0, 0.3);
        let sa = cseries(la, &a);
        let sb = cseries(lb, &b);
        let q = sa.mul(&sb).div(&sb).unwrap();
        for k in q.lo()..q.end() {
            let x = q.coeff(k).unwrap();
            let y = sa.coeff(k).unwrap();
            prop_assert!(Float::with_val(P, Complex::with_val(P, &x - &y).abs_ref()).to_f64() < 1e-60);
        }
        prop_assert!(q.end() <= sa.end());
    }

    #[test]
    fn exp_ln_inverse(a in coeff_vec()) {
        let mut a = a;
        a[0] = (0.2, -0.4);
        let s = cseries(0, &a);
        let back = s.exp().unwrap().ln().unwrap();
        for k in 0..s.end() {
            let d = Complex::with_val(P, back.coeff(k).unwrap() - s.coeff(k).unwrap());
            prop_assert!(Float::with_val(P, d.abs_ref()).to_f64() < 1e-60);
        }
        let mut b = a.clone();
        b[0] = (1.5, 0.5);
        let s = cseries(0, &b);
        let back = s.ln().unwrap().exp().unwrap();
        for k in 0..s.end() {
            let d = Complex::with_val(P, back.coeff(k).unwrap() - s.coeff(k).unwrap());
            prop_assert!(Float::with_val(P, d.abs_ref()).to_f64() < 1e-60);
        }
    }

    #[test]
    fn polylog_inversion_symmetry(re in -3.0f64..3.0, im in 0.2f64..3.0, m in 2usize..9) {
        let x = c(re, im);
        let xi = Complex::with_val(P, x.recip_ref());
        let a = neg_polylog(m, &xi).unwrap();
        let b = neg_polylog(m, &x).unwrap();
        let b = if m % 2 == 0 { b } else { Complex::with_val(P, -b) };
        prop_assert!(crel_err(&a, &b) < 1e-60);
    }

    #[test]
    fn newton_residual_below_tol(a in 0.5f64..20.0) {
        let target = Float::with_val(P, a);
        let f = |u: &[Float]| vec![Float::with_val(P, u[0].square_ref()) - &target];
        let j = |u: &[Float]| vec![vec![Float::with_val(P, &u[0] * 2u32)]];
        let tol = default_tol(P);
        let out = newton_solve(&f, Jacobian::Closed(&j), &[real(P, a.sqrt() * 1.1)], &tol, 60).unwrap();
        prop_assert!(f(&out.root)[0].clone().abs() < tol);
    }

    #[test]
    fn lagrange_inverse_composes_to_identity(v in prop::collection::vec(-2.0f64..2.0, 6)) {
        let mut coeffs = vec![Float::new(P), Float::with_val(P, 1.5)];
        coeffs.extend(v.iter().map(|&x| Float::with_val(P, x)));
        let f = TruncatedPowerSeries::from_coeffs(coeffs);
        let g = series_invert_lagrange(&f).unwrap();
        let id = f.compose(&g).unwrap();
        for k in 0..id.end() {
            let e = if k == 1 { 1.0 } else { 0.0 };
            prop_assert!((id.coeff(k).unwrap().to_f64() - e).abs() < 1e-50);
        }
    }
}
