use plancherel::numerics::rel_err;
use plancherel::oracle::*;
use plancherel::partitions::*;
use rug::{Float, Integer, Rational};

const P: u32 = 256;

fn f(v: f64) -> Float {
    Float::with_val(P, v)
}

/// Direct per-partition sum with series-route Casimirs, independent of the
/// grouped shell tables.
fn direct_z(q: &Float, t: &[Float], k: u64) -> Float {
    let mut z = Float::new(P);
    for l in enumerate(k, None) {
        let c = casimirs(&l, t.len() + 1);
        let mut e = Float::new(P);
        for (i, tk) in t.iter().enumerate() {
            let kk = i as i32 + 2;
            let qp = Float::with_val(P, q.pow_ref(&Float::with_val(P, (1 - kk) as f64 / 2.0)));
            e += Float::with_val(P, tk * &qp) / kk * Float::with_val(P, c.get(kk as usize));
        }
        let w = Float::with_val(P, &plancherel_weight(&l)) * Float::with_val(P, q.pow_ref(&Float::with_val(P, l.weight())));
        z += w * Float::with_val(P, -e).exp();
    }
    z
}

trait PowRef {
    fn pow_ref(&self, e: &Float) -> Float;
}
impl PowRef for Float {
    fn pow_ref(&self, e: &Float) -> Float {
        use rug::ops::Pow;
        Float::with_val(P, self.pow(e))
    }
}

#[test]
fn untwisted_sum_is_exponential_partial_sum() {
    for &(q, k) in &[(1.0, 20u64), (2.5, 18), (0.3, 10)] {
        let spec = PlancherelSumSpec { q: f(q), t: vec![], n_max: None, max_weight: k };
        let z = z_plancherel(&spec).unwrap();
        let mut e = Float::new(P);
        let mut term = Float::with_val(P, 1);
        for n in 0..=k {
            e += &term;
            term = term * f(q) / (n + 1);
        }
        assert!(rel_err(&z.value, &e) < 1e-70, "q = {q}");
    }
}

#[test]
fn q_zero_gives_one() {
    let spec = PlancherelSumSpec { q: f(0.0), t: vec![f(0.2)], n_max: None, max_weight: 5 };
    assert_eq!(z_plancherel(&spec).unwrap().value, 1);
}

#[test]
fn shells_match_direct_sum_with_couplings() {
    let q = f(2.0);
    let t = vec![f(0.2), f(-0.1), f(0.05)];
    let spec = PlancherelSumSpec { q: q.clone(), t: t.clone(), n_max: None, max_weight: 14 };
    let a = z_plancherel(&spec).unwrap().value;
    let b = direct_z(&q, &t, 14);
    assert!(rel_err(&a, &b) < 1e-60);
}

#[test]
fn length_bound_matches_filtered_sum() {
    let q = f(1.5);
    let spec = PlancherelSumSpec { q: q.clone(), t: vec![f(0.3)], n_max: Some(3), max_weight: 12 };
    let a = z_plancherel(&spec).unwrap().value;
    let mut b = Float::new(P);
    for l in enumerate(12, Some(3)) {
        let c2 = Float::with_val(P, casimirs(&l, 2).get(2));
        let e: Float = Float::with_val(P, f(0.3) / Float::with_val(P, q.sqrt_ref())) / 2u32 * c2;
        b += Float::with_val(P, &plancherel_weight(&l)) * Float::with_val(P, q.pow_ref(&f(l.weight() as f64))) * Float::with_val(P, -e).exp();
    }
    assert!(rel_err(&a, &b) < 1e-60);
}

#[test]
fn mean_length_small_cases() {
    assert_eq!(mean_length(&f(0.0), 10).unwrap(), 0);
    let exact = mean_length_exact(&Rational::from(1), 20);
    let fl = mean_length(&f(1.0), 20).unwrap();
    assert!(rel_err(&fl, &Float::with_val(P, &exact)) < 1e-70);
}

#[test]
fn last_shell_decreases_past_eq() {
    for &q in &[2.0, 5.0, 9.0] {
        let spec = PlancherelSumSpec { q: f(q), t: vec![f(0.2)], n_max: None, max_weight: 40 };
        let z = z_plancherel(&spec).unwrap();
        let start = (std::f64::consts::E * q).ceil() as usize + 1;
        for n in start..z.shells.len() - 1 {
            assert!(z.shells[n + 1] < z.shells[n], "q = {q}, n = {n}");
        }
    }
}

#[test]
fn conifold_degree_one() {
    let s = z_qdeformed_series(0, 2, 2).unwrap();
    assert!(s.coeffs[0].same_as(&QRationalFunction { num: LaurentPoly::one(), den: LaurentPoly::one() }));
    let expect = QRationalFunction { num: LaurentPoly::one(), den: LaurentPoly::qnumber(1).pow(2) };
    assert!(s.coeffs[1].same_as(&expect));
    assert_eq!(s.gs[1].lo(), -2);
    assert_eq!(s.gs[1].get(-2).unwrap(), 1);
    assert_eq!(s.gs[1].get(0).unwrap(), Rational::from((-1, 12)));
    assert_eq!(s.gs[1].get(2).unwrap(), Rational::from((1, 240)));
    assert_eq!(s.invariant(0, 1).unwrap(), 1);
    assert_eq!(s.invariant(1, 1).unwrap(), Rational::from((-1, 12)));
    for p in [-1i64, 0, 1, 3] {
        let s = z_qdeformed_series(p, 3, 2).unwrap();
        assert!(s.coeffs[0].same_as(&QRationalFunction { num: LaurentPoly::one(), den: LaurentPoly::one() }));
        // connectedness at degree one
        for k in s.gs[1].lo()..s.ln_gs[1].end().min(s.gs[1].end()) {
            assert_eq!(s.gs[1].get(k).unwrap(), s.ln_gs[1].get(k).unwrap());
        }
        for c in &s.coeffs {
            assert!(c.same_as(&c.invert_variable()), "p = {p}");
        }
    }
}

#[test]
fn conifold_known_invariants() {
    // Resolved conifold: ln Z = Σ_d Q^d / (d (2 sinh(d g/2))^2), independently expanded.
    let s = z_qdeformed_series(0, 3, 2).unwrap();
    for d in 1..=3i64 {
        // 1/(d (2 sinh(d g/2))^2) = 1/(d^3 g^2) - 1/(12 d) + d g^2/240 + ...
        let e0 = Rational::from((1, d * d * d));
        let e1 = Rational::from((-1, 12 * d));
        let e2 = Rational::from((d, 240));
        assert_eq!(s.invariant(0, d as usize).unwrap(), e0, "d = {d}");
        assert_eq!(s.invariant(1, d as usize).unwrap(), e1, "d = {d}");
        assert_eq!(s.invariant(2, d as usize).unwrap(), e2, "d = {d}");
    }
}

#[test]
fn dims_sum_to_factorial_in_shell_tables() {
    let table = ShellTable::build(16, None, KeySpec { casimir_orders: vec![2], length: false }).unwrap();
    for (n, shell) in table.shells.iter().enumerate() {
        let s: Integer = shell.iter().map(|(_, v)| v.clone()).sum();
        assert_eq!(s, ShellTable::factorial(n as u64));
        // C_2 is odd under conjugation, so grouped sums are symmetric in the key.
        for (k, v) in shell {
            let mirror = shell.iter().find(|(k2, _)| k2[0] == -k[0]).map(|(_, v2)| v2.clone());
            assert_eq!(mirror, Some(v.clone()));
        }
    }
}
