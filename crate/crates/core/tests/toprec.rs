use plancherel::curve::*;
use plancherel::numerics::{crel_err, rel_err, Series};
use plancherel::toprec::*;
use plancherel::Result;
use rug::{Complex, Float};
use std::sync::Arc;

const P: u32 = 256;

fn f(v: f64) -> Float {
    Float::with_val(P, v)
}

fn c(re: f64, im: f64) -> Complex {
    Complex::with_val(P, (re, im))
}

/// x = z + 1/z, y = (z - 1/z)/2: the Gaussian curve, F_g = B_{2g} / (2g (2g - 2)).
struct Gaussian;

impl SpectralCurve for Gaussian {
    fn prec(&self) -> u32 {
        P
    }
    fn x_coeffs(&self) -> (Complex, Complex) {
        (Complex::new(P), Complex::with_val(P, 1))
    }
    fn y(&self, z: &Complex) -> Result<Complex> {
        let zi = Complex::with_val(P, z.recip_ref());
        Ok(Complex::with_val(P, z - zi) / 2u32)
    }
    fn y_local(&self, a: i32, order: i64) -> Result<Series<Complex>> {
        let zero = Complex::new(P);
        let mut cs = vec![zero.clone(); order as usize];
        cs[0] = Complex::with_val(P, a);
        cs[1] = Complex::with_val(P, 1);
        let s = Series::new(0, cs, &zero);
        Ok(s.sub(&s.inv()?).scale(&Complex::with_val(P, 0.5)))
    }
    fn is_real(&self) -> bool {
        true
    }
}

fn engine<C: SpectralCurve + 'static>(k: C, g: u32) -> RecursionEngine {
    RecursionEngine::new(Arc::new(k), g).unwrap()
}

fn q(n: i64, d: i64) -> Float {
    Float::with_val(P, n) / d
}

#[test]
fn gaussian_free_energies_are_bernoulli() {
    let mut e = engine(Gaussian, 3);
    assert!(rel_err(&e.free_energy(2).unwrap(), &q(-1, 240)) < 1e-60);
    assert!(rel_err(&e.free_energy(3).unwrap(), &q(1, 1008)) < 1e-60);
}

#[test]
fn pure_curve_free_energies_vanish() {
    let k = solve_plancherel(&[], P).unwrap();
    assert!(f1(&k).unwrap().is_zero());
    let mut e = engine(k, 3);
    assert!(e.free_energy(2).unwrap().abs() < 1e-12);
    assert!(e.free_energy(3).unwrap().abs() < 1e-12);
}

/// Displayed t2-family ω_1^(1) (coefficient of dz).
fn omega11_display(u0: &Float, z: f64) -> Float {
    let z = f(z);
    let z2 = Float::with_val(P, z.square_ref());
    let z4 = Float::with_val(P, z2.square_ref());
    let s = Float::with_val(P, u0 * -2i32).sqrt();
    let s3 = Float::with_val(P, &s * &s) * &s;
    let one_z2 = Float::with_val(P, 1 + &z2);
    let mut num = Float::with_val(P, &one_z2 * Float::with_val(P, 1 - Float::with_val(P, &z2 * 14u32) + &z4));
    num -= Float::with_val(P, &s3 * 24u32) * Float::with_val(P, &z2 * &z);
    num += Float::with_val(P, &s * 2u32) * &z * Float::with_val(P, 1 + Float::with_val(P, &z2 * 10u32) + &z4);
    num += Float::with_val(P, u0 * 4u32) * &one_z2 * Float::with_val(P, 1 - Float::with_val(P, &z2 * 8u32) + &z4);
    let w = Float::with_val(P, &z2 - 1u32);
    let w2 = Float::with_val(P, w.square_ref());
    let b = Float::with_val(P, 1 + Float::with_val(P, u0 * 2u32));
    let den = Float::with_val(P, -u0).exp() * Float::with_val(P, b.square_ref()) * Float::with_val(P, w2.square_ref()) * 24u32;
    num / den
}

fn t2_f2_display(u0: &Float) -> Float {
    let b = Float::with_val(P, 1 + Float::with_val(P, u0 * 2u32));
    let b5 = Float::with_val(P, rug::ops::Pow::pow(&b, 5u32));
    let u3 = Float::with_val(P, rug::ops::Pow::pow(u0, 3u32));
    let e = Float::with_val(P, u0 * 2u32).exp();
    e * u3 * Float::with_val(P, 1 - Float::with_val(P, u0 * 12u32)) / b5 / 180u32
}

#[test]
fn t2_genus_one_correlator_matches_display() {
    for t2 in [0.2, 0.35] {
        let k = solve_plancherel(&[f(t2)], P).unwrap();
        let u0 = k.u[0].clone();
        let mut e = engine(k.clone(), 1);
        let w = e.omega(1, 1).unwrap();
        for z in [1.5, 2.0, -3.0] {
            let got = w.eval(&k, &[c(z, 0.0)]).unwrap();
            let want = Complex::with_val(P, (omega11_display(&u0, z), 0));
            assert!(crel_err(&got, &want) < 1e-50, "t2 = {t2}, z = {z}");
        }
    }
}

#[test]
fn t2_f2_is_the_negated_display() {
    // the dilaton rule fixes the opposite overall sign to the displayed form
    for t2 in [0.2, 0.35] {
        let k = solve_plancherel(&[f(t2)], P).unwrap();
        let want = -t2_f2_display(&k.u[0]);
        let mut e = engine(k, 2);
        assert!(rel_err(&e.free_energy(2).unwrap(), &want) < 1e-50, "t2 = {t2}");
    }
}

/// Displayed X_p numerator with the (p-1)^6 bracket given as `sign6 * (-5 + s + 2 s^2)`.
fn xp_f2_form(p: i64, z0: &Float, sign6: i32) -> Float {
    let s = Float::with_val(P, z0.square_ref());
    let m = Float::with_val(P, (p - 1) * (p - 1));
    let pw = |x: &Float, n: u32| Float::with_val(P, rug::ops::Pow::pow(x, n));
    let s2 = pw(&s, 2);
    let s3 = pw(&s, 3);
    let mut num = pw(&m, 4) * Float::with_val(P, -1 + Float::with_val(P, &s * 12u32) - Float::with_val(P, &s2 * 12u32));
    num += pw(&m, 3) * &s * Float::with_val(P, -5 + Float::with_val(P, &s + Float::with_val(P, &s2 * 2u32))) * sign6;
    num += pw(&m, 2) * &s2 * Float::with_val(P, &s - 1u32) * 35u32;
    num += Float::with_val(P, &m * &s2) * Float::with_val(P, 2 + Float::with_val(P, &s - Float::with_val(P, &s2 * 5u32)));
    num += Float::with_val(P, &s3 * Float::with_val(P, 12 - Float::with_val(P, &s * 12u32) + &s2));
    let d = Float::with_val(P, &s - &m);
    num / (pw(&d, 5) * 2880u32)
}

#[test]
fn xp_f2_against_the_z0_form() {
    for &(p, t) in &[(0i64, 2.0), (1, 2.0), (3, 3.0), (-1, 4.0), (4, 5.0)] {
        let k = solve_xp(p, &f(t)).unwrap();
        let z0 = k.z0.clone();
        let mut e = engine(k, 2);
        let got = e.free_energy(2).unwrap();
        // with the (p-1)^6 bracket sign-flipped the form holds for every p
        assert!(rel_err(&got, &-xp_f2_form(p, &z0, -1)) < 1e-50, "p = {p}");
        if p == 1 {
            assert!(rel_err(&got, &-xp_f2_form(p, &z0, 1)) < 1e-50);
        }
    }
}

#[test]
fn conifold_f2_is_exact() {
    // p = 0: F_2 = -1/2880 + Σ_d d Q^d / 240 = -1/2880 + Q / (240 (1 - Q)^2)
    let t = f(2.0);
    let k = solve_xp(0, &t).unwrap();
    let mut e = engine(k, 2);
    let qq = Float::with_val(P, -&t).exp();
    let one_q = Float::with_val(P, 1 - &qq);
    let want = Float::with_val(P, &qq / Float::with_val(P, one_q.square_ref())) / 240u32 - q(1, 2880);
    assert!(rel_err(&e.free_energy(2).unwrap(), &want) < 1e-50);
}

#[test]
fn correlators_are_symmetric() {
    let k = solve_plancherel(&[f(0.2), f(0.05)], P).unwrap();
    let mut e = engine(k, 2);
    for (g, n) in [(0u32, 3u32), (0, 4), (1, 2), (1, 3), (2, 2)] {
        let w = e.omega(g, n).unwrap();
        for i in 0..n as usize {
            for j in i + 1..n as usize {
                let d = w.symmetry_defect(i, j);
                assert!(d < 1e-50, "({g}, {n}) slots {i} {j}: {d}");
            }
        }
    }
}

#[test]
fn residues_of_one_point_functions_vanish() {
    let k = solve_xp(3, &f(3.0)).unwrap();
    let mut e = engine(k, 3);
    for g in 1..=3 {
        let r = e.residue_sum(g).unwrap();
        assert!(Float::with_val(P, r.abs_ref()) < 1e-60);
    }
}

#[test]
fn local_order_doubling_is_stable() {
    let k = solve_plancherel(&[f(0.2), f(-0.03)], P).unwrap();
    let arc: Arc<dyn SpectralCurve + Send + Sync> = Arc::new(k);
    let mut a = RecursionEngine::new(arc.clone(), 3).unwrap();
    let mut b = RecursionEngine::with_order(arc, 3, 2 * a.order).unwrap();
    for g in 2..=3 {
        let fa = a.free_energy(g).unwrap();
        let fb = b.free_energy(g).unwrap();
        assert!(rel_err(&fa, &fb) < 1e-30, "g = {g}");
    }
}

#[test]
fn free_energies_of_complex_curves_are_complex() {
    let geo = XpGeometry::new(3, c(2.5, 0.3));
    let mut e = engine(geo, 2);
    let v = e.free_energy_complex(2).unwrap();
    assert!(Float::with_val(P, v.imag().abs_ref()) > 1e-10);
    assert!(e.free_energy(2).is_err());
    // the real section of the same family is real
    let geo = XpGeometry::new(3, c(2.5, 0.0));
    let mut e = engine(geo, 2);
    assert!(e.free_energy(2).is_ok());
}

#[test]
fn w_corrections_decay_and_subtract_the_double_pole() {
    let k = solve_plancherel(&[], P).unwrap();
    let mut e = engine(k, 1);
    let near = Complex::with_val(P, e.w_correction(1, 1, &[c(10.0, 0.0)]).unwrap().abs_ref());
    let far = Complex::with_val(P, e.w_correction(1, 1, &[c(1000.0, 0.0)]).unwrap().abs_ref());
    assert!(far.real() < &Float::with_val(P, near.real() * 1e-4));
    // W_2^(0) excludes 1/(x1 - x2)^2, so it stays bounded as x1 -> x2
    let near = |e: i32| Complex::with_val(P, c(7.0, 0.0) + Float::with_val(P, Float::i_exp(1, e)));
    let a = e.w_correction(0, 2, &[c(7.0, 0.0), near(-60)]).unwrap();
    let b = e.w_correction(0, 2, &[c(7.0, 0.0), near(-30)]).unwrap();
    assert!(crel_err(&a, &b) < 1e-8);
    assert!(Float::with_val(P, a.abs_ref()) < 1);
    assert!(e.w_correction(1, 1, &[c(2.0, 0.0)]).is_err(), "x = 2 lies on the cut");
}

#[test]
fn genus_one_free_energy_tracks_the_curve() {
    // d f1/d t2 by central differences vs the closed derivative
    let t2 = 0.2;
    let h = Float::with_val(P, Float::i_exp(1, -40));
    let f1_at = |t: Float| f1(&solve_plancherel(&[t], P).unwrap()).unwrap();
    let fd = Float::with_val(P, f1_at(f(t2) + &h) - f1_at(f(t2) - &h)) / Float::with_val(P, &h * 2u32);
    let k = solve_plancherel(&[f(t2)], P).unwrap();
    let u0 = &k.u[0];
    let b = Float::with_val(P, 1 + Float::with_val(P, u0 * 2u32));
    // -2 u0 e^{2u0} = t2^2
    let du = Float::with_val(P, -t2) / (Float::with_val(P, u0 * 2u32).exp() * &b);
    // f1 = (1/24)(-2u0 + ln(1 + 2u0))
    let want = (Float::with_val(P, 2u32 / &b) - 2u32) * du / 24u32;
    assert!(rel_err(&fd, &want) < 1e-8);
    let mut e = engine(k, 1);
    let d = e.dilaton_sum(1).unwrap();
    assert!(d.real().is_finite() && d.imag().is_finite());
}

#[test]
fn correlator_json_lists_pole_terms() {
    let k = solve_plancherel(&[f(0.2)], P).unwrap();
    let mut e = engine(k, 1);
    let j = e.omega(1, 1).unwrap().to_json();
    assert_eq!((j.g, j.n), (1, 1));
    assert!(!j.terms.is_empty());
    assert!(j.terms.iter().all(|t| t.orders.iter().all(|&k| (2..=4).contains(&k))));
    let s = serde_json::to_string(&j).unwrap();
    assert!(s.contains("\"branches\""));
}
