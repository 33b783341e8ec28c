//! The twelve acceptance checks, shared by the `acceptance` test target and
//! the `verify` command. Each check returns a verdict with a short detail
//! line; nothing here panics on a numerical mismatch.

use crate::curve::{loop_first_omitted, loop_residual, solve_plancherel, solve_xp, xp_lagrange_coeffs, xp_lagrange_seed, Curve};
use crate::error::Result;
use crate::numerics::{crel_err, rel_err};
use crate::observables::{f0_second_derivative_series, gw_invariants, mirror_curve, F0_IDENTITY_TOL};
use crate::oracle::{mean_length, z_qdeformed_series, KeySpec, ShellTable};
use crate::partitions::{casimirs_at, enumerate, plancherel_weight, plancherel_weight_at, q_plancherel_symbolic_at, Partition};
use crate::toprec::{f1, RecursionEngine};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;
use std::sync::Arc;
use std::time::Instant;

const P: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// Skips the checks whose oracle tables take minutes (criterion 5).
    Quick,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub title: &'static str,
    pub status: Status,
    pub detail: String,
    /// Wall time; kept out of JSON so reports stay reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "exact Burnside sums"),
    (2, "N-independence"),
    (3, "pure curve triviality"),
    (4, "t2 family closed forms"),
    (5, "oracle against asymptotics"),
    (6, "X_p curve invariants"),
    (7, "X_p free energies"),
    (8, "conifold exactness"),
    (9, "F0'' identity"),
    (10, "mirror curves"),
    (11, "loop-equation diagnostic"),
    (12, "arctic circle mean length"),
];

pub fn title(id: u32) -> &'static str {
    CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown")
}

/// Outcome of a check body: pass flag and detail.
type Verdict = (bool, String);

pub fn run(id: u32, profile: Profile) -> CheckResult {
    let start = Instant::now();
    let body: fn() -> Result<Verdict> = match id {
        1 => burnside,
        2 => n_independence,
        3 => pure_curve,
        4 => t2_closed_forms,
        5 if profile == Profile::Quick => {
            return CheckResult { id, title: title(id), status: Status::Skip, detail: "full profile only".into(), seconds: 0.0 };
        }
        5 => oracle_vs_asymptotics,
        6 => xp_invariants,
        7 => xp_free_energies,
        8 => conifold,
        9 => f0_identity,
        10 => mirror_curves,
        11 => loop_diagnostic,
        12 => arctic_mean_length,
        _ => {
            return CheckResult { id, title: "unknown", status: Status::Fail, detail: "no such criterion".into(), seconds: 0.0 };
        }
    };
    let outcome = std::panic::catch_unwind(body);
    let (status, detail) = match outcome {
        Ok(Ok((true, d))) => (Status::Pass, d),
        Ok(Ok((false, d))) => (Status::Fail, d),
        Ok(Err(e)) => (Status::Fail, format!("error: {e}")),
        Err(p) => {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            (Status::Fail, format!("panic: {}", msg.unwrap_or_default()))
        }
    };
    CheckResult { id, title: title(id), status, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all(profile: Profile) -> Vec<CheckResult> {
    CRITERIA.iter().map(|&(id, _)| run(id, profile)).collect()
}

fn f(v: f64) -> Float {
    Float::with_val(P, v)
}

fn e(v: f64) -> String {
    format!("{v:.3e}")
}

// ---------------------------------------------------------------------------
// reference closed forms

/// (1/24) ln(e^{-2u0} (1 + 2u0)).
pub fn t2_f1_form(u0: &Float) -> Float {
    let b = Float::with_val(P, 1 + Float::with_val(P, u0 * 2u32));
    (Float::with_val(P, u0 * -2i32).exp() * b).ln() / 24u32
}

/// e^{2u0} u0³ (1 - 12 u0) / (180 (1 + 2u0)^5).
pub fn t2_f2_form(u0: &Float) -> Float {
    let b = Float::with_val(P, 1 + Float::with_val(P, u0 * 2u32));
    let b5 = Float::with_val(P, (&b).pow(5u32));
    let u3 = Float::with_val(P, u0.pow(3u32));
    let ex = Float::with_val(P, u0 * 2u32).exp();
    ex * u3 * Float::with_val(P, 1 - Float::with_val(P, u0 * 12u32)) / b5 / 180u32
}

/// dz-coefficient of ω_{1,1} on the t2 curve.
pub fn t2_omega11_form(u0: &Float, z: &Float) -> Float {
    let z2 = Float::with_val(P, z.square_ref());
    let z4 = Float::with_val(P, z2.square_ref());
    let s = Float::with_val(P, u0 * -2i32).sqrt();
    let s3 = Float::with_val(P, (&s).pow(3u32));
    let one_z2 = Float::with_val(P, 1 + &z2);
    let mut num = Float::with_val(P, &one_z2 * Float::with_val(P, 1 - Float::with_val(P, &z2 * 14u32) + &z4));
    num -= Float::with_val(P, &s3 * 24u32) * Float::with_val(P, &z2 * z);
    num += Float::with_val(P, &s * 2u32) * z * Float::with_val(P, 1 + Float::with_val(P, &z2 * 10u32) + &z4);
    num += Float::with_val(P, u0 * 4u32) * &one_z2 * Float::with_val(P, 1 - Float::with_val(P, &z2 * 8u32) + &z4);
    let w = Float::with_val(P, &z2 - 1u32);
    let w4 = Float::with_val(P, (&w).pow(4u32));
    let b = Float::with_val(P, 1 + Float::with_val(P, u0 * 2u32));
    let den = Float::with_val(P, -u0).exp() * Float::with_val(P, b.square_ref()) * w4 * 24u32;
    num / den
}

/// (1/24) ln(z0² ((p-1)² - z0²) / (1 - z0²)³); None if the argument is not positive.
pub fn xp_f1_form(p: i64, z0: &Float) -> Option<Float> {
    let s = Float::with_val(P, z0.square_ref());
    let m = Float::with_val(P, (p - 1) * (p - 1));
    let d = Float::with_val(P, 1 - &s);
    let arg = Float::with_val(P, &s * Float::with_val(P, &m - &s)) / Float::with_val(P, d.pow(3u32));
    (arg > 0).then(|| arg.ln() / 24u32)
}

/// The z0-form of F_2 for X_p with its (p-1)^6 bracket written as
/// `sign6 * z0² (-5 + z0² + 2 z0⁴)`; sign6 = 1 is the reference form of criterion 7.
pub fn xp_f2_form(p: i64, z0: &Float, sign6: i32) -> Float {
    let s = Float::with_val(P, z0.square_ref());
    let m = Float::with_val(P, (p - 1) * (p - 1));
    let pw = |x: &Float, n: u32| Float::with_val(P, x.pow(n));
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

// ---------------------------------------------------------------------------
// checks

fn burnside() -> Result<Verdict> {
    let start = Instant::now();
    let mut sums = vec![Rational::new(); 19];
    for l in enumerate(18, None) {
        sums[l.weight() as usize] += plancherel_weight(&l);
    }
    let bad: Vec<usize> = (0..=18)
        .filter(|&k| sums[k] != Rational::from((1, Integer::from(Integer::factorial(k as u32)))))
        .collect();
    let secs = start.elapsed().as_secs_f64();
    Ok((bad.is_empty() && secs < 60.0, format!("k <= 18, mismatches {bad:?}, under 60 s: {}", secs < 60.0)))
}

fn random_partition(rng: &mut StdRng, weight: u32) -> Partition {
    let mut left = weight;
    let mut parts = Vec::new();
    while left > 0 {
        let k = rng.gen_range(1..=left);
        parts.push(k);
        left -= k;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts).expect("sorted parts")
}

fn n_independence() -> Result<Verdict> {
    let mut rng = StdRng::seed_from_u64(20_240_601);
    let mut bad = 0;
    for _ in 0..200 {
        let w = rng.gen_range(0..=14);
        let l = random_partition(&mut rng, w);
        let (n, m) = (l.length(), l.length() + 5);
        let same = plancherel_weight_at(&l, n) == plancherel_weight_at(&l, m)
            && q_plancherel_symbolic_at(&l, n).same_as(&q_plancherel_symbolic_at(&l, m))
            && casimirs_at(&l, 6, n) == casimirs_at(&l, 6, m);
        if !same {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("200 partitions of weight <= 14, {bad} differ")))
}

fn pure_curve() -> Result<Verdict> {
    let start = Instant::now();
    let k = solve_plancherel(&[], P)?;
    let f1v = f1(&k)?;
    let mut eng = RecursionEngine::new(Arc::new(k), 3)?;
    let f2 = eng.free_energy(2)?.to_f64().abs();
    let f3 = eng.free_energy(3)?.to_f64().abs();
    let secs = start.elapsed().as_secs_f64();
    let ok = f1v.is_zero() && f2 < 1e-12 && f3 < 1e-12 && secs < 300.0;
    Ok((ok, format!("f1 = {}, |F2| = {}, |F3| = {}, under 300 s: {}", f1v.to_f64(), e(f2), e(f3), secs < 300.0)))
}

fn t2_closed_forms() -> Result<Verdict> {
    let mut ok = true;
    let mut parts = Vec::new();
    for t2 in [0.2, 0.35] {
        let k = solve_plancherel(&[f(t2)], P)?;
        let u0 = k.u[0].clone();
        let r1 = rel_err(&f1(&k)?, &t2_f1_form(&u0));
        let mut eng = RecursionEngine::new(Arc::new(k.clone()), 2)?;
        let f2 = eng.free_energy(2)?;
        let want = t2_f2_form(&u0);
        let r2 = rel_err(&f2, &want);
        let ratio = Float::with_val(P, &f2 / &want).to_f64();
        let mut rw: f64 = 0.0;
        for z in [1.5, 2.0, -3.0] {
            let zc = Complex::with_val(P, (z, 0));
            let x = crate::curve::SpectralCurve::x(&k, &zc);
            let got = eng.w_correction(1, 1, &[x])?;
            let want = Complex::with_val(P, (t2_omega11_form(&u0, &f(z)), 0)) / crate::curve::SpectralCurve::dx(&k, &zc);
            rw = rw.max(crel_err(&got, &want));
        }
        ok &= r1 < 1e-12 && r2 < 1e-10 && rw < 1e-10;
        parts.push(format!("t2={t2}: f1 {} F2 {} (engine/form {ratio:.6}) W {}", e(r1), e(r2), e(rw)));
    }
    Ok((ok, parts.join("; ")))
}

/// Smallest weight bound for which the last shell is below 1e-25 Z at q = 16.
pub const CRITERION5_MAX_WEIGHT: u64 = 80;

fn oracle_vs_asymptotics() -> Result<Verdict> {
    let t = [f(0.2)];
    let k = solve_plancherel(&t, P)?;
    let f1v = f1(&k)?;
    let mut eng = RecursionEngine::new(Arc::new(k), 2)?;
    let f2 = eng.free_energy(2)?;
    let table = ShellTable::build(CRITERION5_MAX_WEIGHT, None, KeySpec { casimir_orders: vec![2], length: false })?;
    let qs = [4.0, 9.0, 16.0];
    let mut lnz = Vec::new();
    let mut trunc_ok = true;
    for q in qs {
        let v = table.z_plancherel(&f(q), &t)?;
        trunc_ok &= Float::with_val(P, &v.last_shell / &v.value).abs() < 1e-25;
        lnz.push(v.value.ln());
    }
    // genus-one term of ln Z is -f1 (fixed by N_{1,1} = -1/12), F2 as the engine gives it
    let decay = |big_f1: &Float| -> (f64, f64) {
        let r: Vec<Float> = qs
            .iter()
            .zip(&lnz)
            .map(|(&q, l)| Float::with_val(P, l - big_f1) - Float::with_val(P, &f2 / q))
            .collect();
        let f0 = Float::with_val(P, &r[1] - &r[0]) / 5u32;
        let a = Float::with_val(P, &r[2] - Float::with_val(P, &f0 * 16u32)).abs();
        let b = Float::with_val(P, &r[1] - Float::with_val(P, &f0 * 9u32)).abs();
        (a.to_f64(), b.to_f64() * (81.0 / 256.0) * 3.0)
    };
    let (lhs, rhs) = decay(&Float::with_val(P, -&f1v));
    let (lhs_alt, rhs_alt) = decay(&f1v);
    let ok = trunc_ok && lhs < rhs;
    Ok((
        ok,
        format!(
            "max weight {CRITERION5_MAX_WEIGHT} (tail ok: {trunc_ok}); F1 = -f1: {} vs bound {}; F1 = +f1: {} vs bound {}",
            e(lhs),
            e(rhs),
            e(lhs_alt),
            e(rhs_alt)
        ),
    ))
}

const XP_POINTS: [(i64, f64); 4] = [(0, 2.0), (1, 2.0), (3, 3.0), (-1, 4.0)];

fn xp_invariants() -> Result<Verdict> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, t) in XP_POINTS {
        let tt = f(t);
        let k = solve_xp(p, &tt)?;
        let inv = k.invariant_residuals().iter().cloned().fold(0.0, f64::max);
        let w = Float::with_val(P, k.z0.square_ref()).recip();
        let seed = xp_lagrange_seed(p, &tt, 3);
        let diff = Float::with_val(P, &w - &seed).abs();
        // first dropped Lagrange term, with a factor 2 for the rest of the tail
        let c4 = xp_lagrange_coeffs(p, 4).pop().expect("four terms");
        let q4 = Float::with_val(P, Float::with_val(P, &tt * -4i32).exp());
        let bound = Float::with_val(P, Float::with_val(P, &c4 * &q4).abs() * 2u32) + Float::with_val(P, &w * 1e-70);
        ok &= inv < 1e-60 && diff <= bound;
        parts.push(format!("({p},{t}): invariants {} seed diff {} <= {}", e(inv), e(diff.to_f64()), e(bound.to_f64())));
    }
    Ok((ok, parts.join("; ")))
}

fn xp_free_energies() -> Result<Verdict> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, t) in XP_POINTS {
        let k = solve_xp(p, &f(t))?;
        let z0 = k.z0.clone();
        let f1v = f1(&k)?;
        let r1 = xp_f1_form(p, &z0).map(|v| rel_err(&f1v, &v)).unwrap_or(f64::INFINITY);
        let mut eng = RecursionEngine::new(Arc::new(k), 2)?;
        let f2 = eng.free_energy(2)?;
        let r2 = rel_err(&f2, &xp_f2_form(p, &z0, 1));
        let r2_fixed = rel_err(&f2, &-xp_f2_form(p, &z0, -1));
        // p <-> 2 - p
        let kq = solve_xp(2 - p, &f(t))?;
        let f1q = f1(&kq)?;
        let mut engq = RecursionEngine::new(Arc::new(kq), 2)?;
        let sym = rel_err(&f1v, &f1q).max(rel_err(&f2, &engq.free_energy(2)?));
        ok &= r1 < 1e-10 && r2 < 1e-10 && sym < 1e-10;
        parts.push(format!(
            "({p},{t}): f1 {} F2 {} (against -form with corrected bracket {}) p<->2-p {}",
            e(r1),
            e(r2),
            e(r2_fixed),
            e(sym)
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn conifold() -> Result<Verdict> {
    let tab = gw_invariants(0, 2, 3, P)?;
    let or = z_qdeformed_series(0, 3, 2)?;
    let mut worst: f64 = 0.0;
    for g in 0..=2u32 {
        for d in 1..=3 {
            let want = Float::with_val(P, &or.invariant(g as usize, d)?);
            let got = tab.get(g, d).expect("table entry");
            worst = worst.max(rel_err(got, &want));
        }
    }
    let n01 = rel_err(tab.get(0, 1).expect("N01"), &f(1.0));
    let n11 = rel_err(tab.get(1, 1).expect("N11"), &(f(-1.0) / 12u32));
    let ok = worst < 1e-8 && n01 < 1e-8 && n11 < 1e-8;
    Ok((ok, format!("N01 {} N11 {} worst (g<=2, d<=3) {}", e(n01), e(n11), e(worst))))
}

fn f0_identity() -> Result<Verdict> {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [0i64, 3] {
        let s = f0_second_derivative_series(p, 5, P)?;
        ok &= s.max_rel_diff < F0_IDENTITY_TOL;
        parts.push(format!("p={p}: {}", e(s.max_rel_diff)));
    }
    Ok((ok, parts.join("; ")))
}

/// Deterministic sample points on |z| = 2.
pub fn circle_points(n: usize) -> Vec<Complex> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    (1..=n)
        .map(|k| {
            let ang = Float::with_val(P, (k as f64 * golden).fract()) * crate::numerics::pi(P) * 2u32;
            Complex::with_val(P, (0, ang)).exp() * 2u32
        })
        .collect()
}

fn mirror_curves() -> Result<Verdict> {
    let t = f(3.0);
    let pts = circle_points(20);
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [0i64, 1, 2, -1] {
        let m = mirror_curve(p, &t)?;
        let gen = pts.iter().map(|z| m.vanishing_defect(&m.general, z)).fold(0.0, f64::max);
        let (disp, diff) = match &m.display {
            Some(d) => (pts.iter().map(|z| m.vanishing_defect(d, z)).fold(0.0, f64::max), m.display_difference().unwrap_or(f64::INFINITY)),
            None => (f64::INFINITY, f64::INFINITY),
        };
        ok &= gen < 1e-40 && disp < 1e-40 && diff < 1e-40;
        parts.push(format!("p={p}: general {} displayed {} coefficient diff {}", e(gen), e(disp), e(diff)));
    }
    Ok((ok, parts.join("; ")))
}

fn loop_diagnostic() -> Result<Verdict> {
    let mut ok = true;
    let mut parts = Vec::new();
    let k = solve_plancherel(&[f(0.2)], P)?;
    let edge = Float::with_val(P, &k.gamma * 4u32);
    let xs: Vec<Float> = (1..=10).map(|i| Float::with_val(P, &edge * i) / 11u32).collect();
    let mut cases = vec![(Curve::Plancherel(k), xs, f(100.0), 6usize, "plancherel t2=0.2 q=100".to_string())];
    for (p, t) in [(0i64, 2.0), (3, 3.0)] {
        let xp = solve_xp(p, &f(t))?;
        let lo = Float::with_val(P, 1 - Float::with_val(P, &xp.gamma * 4u32));
        let width = Float::with_val(P, 1 - &lo);
        let xs = (1..=10).map(|i| Float::with_val(P, &lo + Float::with_val(P, &width * i) / 11u32)).collect();
        cases.push((Curve::Xp(xp), xs, f(0.05), 5, format!("X_{p} t={t} gs=0.05")));
    }
    for (curve, xs, scale, trunc, label) in cases {
        let res = loop_residual(&curve, &xs, &scale, trunc)?;
        let bound = loop_first_omitted(&curve, &xs, &scale, trunc)?;
        let below = res.iter().zip(&bound).filter(|(r, b)| r < b).count();
        let worst = res.iter().map(|r| r.to_f64()).fold(0.0, f64::max);
        let least = bound.iter().map(|b| b.to_f64()).fold(f64::INFINITY, f64::min);
        ok &= below == xs.len();
        parts.push(format!("{label}: {below}/10 below, max residual {} min omitted {}", e(worst), e(least)));
    }
    Ok((ok, parts.join("; ")))
}

fn arctic_mean_length() -> Result<Verdict> {
    let m = mean_length(&f(9.0), 50)?.to_f64();
    Ok(((m - 6.5).abs() <= 2.0, format!("<n> = {m:.6} at q = 9, window 6.5 +/- 2.0")))
}
