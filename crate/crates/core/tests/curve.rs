use plancherel::curve::*;
use plancherel::numerics::{crel_err, rel_err};
use plancherel::Error;
use rug::{Complex, Float, Integer, Rational};

const P: u32 = 256;

fn f(v: f64) -> Float {
    Float::with_val(P, v)
}

fn c(re: f64, im: f64) -> Complex {
    Complex::with_val(P, (re, im))
}

#[test]
fn pure_curve_is_trivial() {
    let k = solve_plancherel(&[], P).unwrap();
    assert!(k.u.iter().all(|u| u.is_zero()));
    assert_eq!(k.gamma, 1);
    let q = f(9.0);
    assert_eq!(k.arctic(&q), 6);
    let pt = eval_curve(&k, &c(1.0, 0.0)).unwrap();
    assert_eq!(pt.x, c(4.0, 0.0));
    assert!(pt.y.real().is_zero() && pt.y.imag().is_zero());
    let k2 = solve_plancherel(&[f(0.0), f(0.0)], P).unwrap();
    assert!(k2.u.iter().all(|u| u.is_zero()));
}

/// -2u0 = Σ k^{k-1}/k! t^{2k}, summed independently.
fn lambert_u0(t2: f64, terms: u32) -> Float {
    let t2 = Float::with_val(P, Rational::from_f64(t2).unwrap());
    let s = Float::with_val(P, t2.square_ref());
    let mut acc = Float::new(P);
    let mut pw = s.clone();
    for k in 1..=terms {
        let coef = Rational::from((Integer::from(Integer::u_pow_u(k, k - 1)), Integer::from(Integer::factorial(k))));
        acc += Float::with_val(P, &coef * &pw);
        pw *= &s;
    }
    -acc / 2u32
}

#[test]
fn t2_family_closed_relations() {
    for &t2 in &[0.2, 0.35] {
        let t = Float::with_val(P, Rational::from_f64(t2).unwrap());
        let k = solve_plancherel(&[t.clone()], P).unwrap();
        let u0 = &k.u[0];
        let u1 = &k.u[1];
        let lhs = Float::with_val(P, u0 * -2i32) * Float::with_val(P, u0 * 2u32).exp();
        let t_sq = Float::with_val(P, t.square_ref());
        assert!(rel_err(&lhs, &t_sq) < 1e-60);
        let r = Float::with_val(P, u1.square_ref()) + Float::with_val(P, u0 * 2u32);
        assert!(r.abs() < 1e-60);
        assert!(*u1 > 0);
        let lam = lambert_u0(t2, 400);
        assert!(rel_err(u0, &lam) < 1e-40, "t2 = {t2}");
    }
    let k = solve_plancherel(&[f(0.2)], P).unwrap();
    assert!((k.u[0].to_f64() + 0.020851).abs() < 1e-6);
}

#[test]
fn higher_couplings_satisfy_the_defining_identity() {
    // Σ_k u_k (z^k + z^{-k}) = Σ_k t_{k+1} γ^k (z + 1/z - u_1)^k at sampled z
    let t = vec![f(0.2), f(-0.03), f(0.01)];
    let k = solve_plancherel(&t, P).unwrap();
    assert_eq!(k.u.len(), 4);
    for z in [c(1.3, 0.4), c(-0.7, 2.1), c(0.2, -0.9)] {
        let zi = Complex::with_val(P, z.recip_ref());
        let mut lhs = Complex::with_val(P, &k.u[0] * 2u32);
        let (mut a, mut b) = (z.clone(), zi.clone());
        for j in 1..k.u.len() {
            lhs += Complex::with_val(P, &a + &b) * &k.u[j];
            a *= &z;
            b *= &zi;
        }
        let w = Complex::with_val(P, &z + &zi) - &k.u[1];
        let gw = Complex::with_val(P, &w * &k.gamma);
        let mut rhs = Complex::new(P);
        let mut pw = gw.clone();
        for tk in &t {
            rhs += Complex::with_val(P, &pw * tk);
            pw *= &gw;
        }
        assert!(crel_err(&lhs, &rhs) < 1e-60);
    }
}

#[test]
fn out_of_regime_is_reported() {
    match solve_plancherel(&[f(0.7)], P) {
        Err(Error::OutOfRegime(_)) => {}
        other => panic!("expected out-of-regime, got {other:?}"),
    }
}

#[test]
fn x_is_symmetric_and_branch_points_are_critical() {
    let a = solve_plancherel(&[f(0.2), f(0.05)], P).unwrap();
    let b = solve_xp(3, &f(3.0)).unwrap();
    let curves: [&dyn SpectralCurve; 2] = [&a, &b];
    for k in curves {
        for z in [c(2.0, 0.5), c(-3.0, 1.0)] {
            let zi = Complex::with_val(P, z.recip_ref());
            assert!(crel_err(&k.x(&z), &k.x(&zi)) < 1e-70);
        }
        for s in [1.0, -1.0] {
            let d = k.dx(&c(s, 0.0));
            assert!(d.real().is_zero() && d.imag().is_zero());
        }
    }
}

#[test]
fn local_series_match_point_values() {
    let a = solve_plancherel(&[f(0.2), f(0.05)], P).unwrap();
    let b = solve_xp(-1, &f(4.0)).unwrap();
    let curves: [&dyn SpectralCurve; 2] = [&a, &b];
    for k in curves {
        for s in [1i32, -1] {
            // a point just above the real axis so that principal logs agree
            let zeta = c(0.01, 0.004);
            let z = Complex::with_val(P, &zeta + s);
            let yl = k.y_local(s, 60).unwrap().eval(&zeta);
            assert!(crel_err(&yl, &k.y(&z).unwrap()) < 1e-50, "a = {s}");
            let xl = k.x_local(s, 60).eval(&zeta);
            assert!(crel_err(&xl, &k.x(&z)) < 1e-60);
            let dl = k.dx_local(s, 60).eval(&zeta);
            assert!(crel_err(&dl, &k.dx(&z)) < 1e-60);
        }
    }
}

#[test]
fn xp_invariants_and_symmetry() {
    for &(p, t) in &[(0i64, 2.0), (1, 2.0), (3, 3.0), (-1, 4.0)] {
        let k = solve_xp(p, &f(t)).unwrap();
        for r in k.invariant_residuals() {
            assert!(r < 1e-60, "(p, t) = ({p}, {t}): {r}");
        }
        assert!(k.z0 > 1);
        let mirror = solve_xp(2 - p, &f(t)).unwrap();
        assert_eq!(k.z0, mirror.z0);
        let x0 = k.x(&Complex::with_val(P, (&k.z0, 0)));
        assert!(Float::with_val(P, x0.abs_ref()) < 1e-70);
    }
    let k = solve_xp(0, &f(2.0)).unwrap();
    assert!(rel_err(&k.z0, &f(1.0).exp()) < 1e-70);
}

#[test]
fn xp_newton_agrees_with_lagrange_to_truncation() {
    for &(p, t) in &[(0i64, 2.0), (1, 2.0), (3, 3.0), (-1, 4.0)] {
        let k = solve_xp(p, &f(t)).unwrap();
        let w = Float::with_val(P, k.z0.square_ref()).recip();
        let seed = xp_lagrange_seed(p, &f(t), 3);
        let c4 = &xp_lagrange_coeffs(p, 4)[3];
        let q4 = Float::with_val(P, -4.0 * t).exp();
        let bound = Float::with_val(P, c4 * &q4).abs() * 2u32;
        let d = Float::with_val(P, &w - &seed).abs();
        assert!(d <= bound || d < 1e-70, "(p, t) = ({p}, {t}): {d} vs {bound}");
    }
    // p = 3: 1, 3, 15 as listed
    let cs = xp_lagrange_coeffs(3, 3);
    assert_eq!(cs, vec![Rational::from(1), Rational::from(3), Rational::from(15)]);
}

#[test]
fn xp_rejects_unreachable_real_branch() {
    assert!(solve_xp(3, &f(0.1)).is_err());
}

#[test]
fn f1_arguments_match_closed_forms() {
    let k = solve_plancherel(&[f(0.2)], P).unwrap();
    let u0 = &k.u[0];
    let expect = -Float::with_val(P, u0 * -2i32).exp() * Float::with_val(P, 1 + Float::with_val(P, u0 * 2u32));
    assert!(rel_err(f1_argument(&k).unwrap().real(), &expect) < 1e-60);
    for &(p, t) in &[(0i64, 2.0), (1, 2.0), (3, 3.0), (-1, 4.0)] {
        let k = solve_xp(p, &f(t)).unwrap();
        let z2 = Float::with_val(P, k.z0.square_ref());
        let pm = Float::with_val(P, (p - 1) * (p - 1));
        let num = Float::with_val(P, &z2 * (pm - &z2));
        let den = Float::with_val(P, 1 - &z2);
        let den3 = Float::with_val(P, &den * &den) * &den;
        let expect = -(num / den3);
        let got = f1_argument(&k).unwrap();
        assert!(rel_err(got.real(), &expect) < 1e-60, "p = {p}");
        assert!(got.imag().is_zero() || Float::with_val(P, got.imag().abs_ref()) < 1e-70);
    }
}

#[test]
fn loop_equation_residuals() {
    // pure and t2 families: exact identity at matching truncation
    for t in [vec![], vec![f(0.2)], vec![f(0.2), f(-0.05)]] {
        let k = Curve::Plancherel(solve_plancherel(&t, P).unwrap());
        let edge = match &k {
            Curve::Plancherel(c) => Float::with_val(P, &c.gamma * 4u32),
            _ => unreachable!(),
        };
        let xs: Vec<Float> = (1..=10).map(|i| Float::with_val(P, &edge * i) / 11u32).collect();
        for r in loop_residual(&k, &xs, &f(100.0), 6).unwrap() {
            assert!(r < 1e-60, "{r}");
        }
        assert!(loop_residual(&k, &[Float::with_val(P, &edge * 2u32)], &f(100.0), 6).is_err());
    }
    for &(p, t) in &[(0i64, 2.0), (3, 3.0), (1, 2.0)] {
        let xp = solve_xp(p, &f(t)).unwrap();
        let lo = Float::with_val(P, 1 - Float::with_val(P, &xp.gamma * 4u32));
        let width = Float::with_val(P, 1 - &lo);
        let xs: Vec<Float> = (1..=10).map(|i| Float::with_val(P, &lo + Float::with_val(P, &width * i) / 11u32)).collect();
        let k = Curve::Xp(xp);
        for r in loop_residual(&k, &xs, &f(0.05), 5).unwrap() {
            assert!(r < 1e-60, "p = {p}: {r}");
        }
    }
}

#[test]
fn curve_json_roundtrip() {
    let k = Curve::Xp(solve_xp(3, &f(3.0)).unwrap());
    let j = k.to_json();
    let s = serde_json::to_string(&j).unwrap();
    let back: CurveJson = serde_json::from_str(&s).unwrap();
    assert_eq!(back, j);
    let z0 = Float::with_val(P, Float::parse(j.z0.as_ref().unwrap()).unwrap());
    match &k {
        Curve::Xp(c) => assert_eq!(z0, c.z0),
        _ => unreachable!(),
    }
}

#[test]
fn first_omitted_term_sizes() {
    let k = Curve::Plancherel(solve_plancherel(&[], P).unwrap());
    // B_8 / (4 (q x^2)^4) at q = 1, x = 1: (1/30)/4
    let v = loop_first_omitted(&k, &[f(1.0)], &f(1.0), 3).unwrap();
    assert!(rel_err(&v[0], &(f(1.0) / 120u32)) < 1e-70);
    let xp = Curve::Xp(solve_xp(0, &f(2.0)).unwrap());
    let a = loop_first_omitted(&xp, &[f(0.5)], &f(0.05), 3).unwrap();
    let b = loop_first_omitted(&xp, &[f(0.5)], &f(0.05), 4).unwrap();
    assert!(b[0] < a[0] && a[0] > 0);
}
