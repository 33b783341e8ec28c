//! Physical outputs: limit shapes, density corrections, Gromov-Witten
//! invariants of X_p and the mirror-curve polynomials.

use crate::curve::{PlancherelCurve, XpGeometry};
use crate::error::{Error, Result};
use crate::numerics::{newton_solve_complex, pi, to_decimal, Series};
use crate::toprec::RecursionEngine;
use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// limit shape

#[derive(Clone, Debug)]
pub struct ShapePoint {
    pub phi: Float,
    pub i: Float,
    pub lambda: Float,
}

impl ShapePoint {
    /// (λ - I, λ + I): the π/4-rotated diagram.
    pub fn rotated(&self) -> (Float, Float) {
        let p = self.phi.prec();
        (Float::with_val(p, &self.lambda - &self.i), Float::with_val(p, &self.lambda + &self.i))
    }
}

#[derive(Clone, Debug)]
pub struct ShapeCurve {
    pub q: Float,
    /// Typical length n̄ = I(π) + 1/2.
    pub n_bar: Float,
    pub gamma: Float,
    pub points: Vec<ShapePoint>,
}

impl ShapeCurve {
    /// Two columns λ - I, λ + I as full-precision decimals.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda_minus_i,lambda_plus_i\n");
        for pt in &self.points {
            let (a, b) = pt.rotated();
            s.push_str(&to_decimal(&a));
            s.push(',');
            s.push_str(&to_decimal(&b));
            s.push('\n');
        }
        s
    }

    /// Absolute h_I = N - n̄ + 2γ sqrt(q)(1 + cos φ) for a given N.
    pub fn absolute_h(&self, n: &Float) -> Vec<Float> {
        let p = self.q.prec();
        let sq = Float::with_val(p, self.q.sqrt_ref());
        let base = Float::with_val(p, n - &self.n_bar);
        self.points
            .iter()
            .map(|pt| {
                let c = Float::with_val(p, pt.phi.cos_ref()) + 1u32;
                Float::with_val(p, &base + Float::with_val(p, &self.gamma * 2u32) * &sq * c)
            })
            .collect()
    }
}

/// ρ_eq(φ) = (φ + Σ u_k sin kφ)/π.
pub fn equilibrium_density(curve: &PlancherelCurve, phi: &Float) -> Float {
    let p = curve.prec;
    let mut acc = phi.clone();
    for k in 1..curve.u.len() {
        let s = Float::with_val(p, phi * k as u32).sin();
        acc += s * &curve.u[k];
    }
    acc / pi(p)
}

/// Number of h_i above x(φ): (sqrt(q) γ/π) (2(sin φ - φ cos φ) + u_1(φ - sin φ cos φ)
/// - Σ_{k>=2} u_k (sin(k+1)φ/(k+1) - sin(k-1)φ/(k-1))).
pub fn integrated_density(curve: &PlancherelCurve, q: &Float, phi: &Float) -> Float {
    let p = curve.prec;
    let (s, c) = (Float::with_val(p, phi.sin_ref()), Float::with_val(p, phi.cos_ref()));
    let mut acc = Float::with_val(p, &s - Float::with_val(p, phi * &c)) * 2u32;
    if curve.u.len() > 1 {
        acc += Float::with_val(p, phi - Float::with_val(p, &s * &c)) * &curve.u[1];
    }
    for k in 2..curve.u.len() {
        let a = Float::with_val(p, phi * (k as u32 + 1)).sin() / (k as u32 + 1);
        let b = Float::with_val(p, phi * (k as u32 - 1)).sin() / (k as u32 - 1);
        acc -= Float::with_val(p, a - b) * &curve.u[k];
    }
    let sq = Float::with_val(p, q.sqrt_ref());
    acc * sq * &curve.gamma / pi(p)
}

pub const DENSITY_SAMPLES: usize = 512;

/// Typical rotated diagram on φ_j = π j/(n + 1), j = 1..n.
pub fn limit_shape(curve: &PlancherelCurve, q: &Float, n_points: usize) -> Result<ShapeCurve> {
    let p = curve.prec;
    if *q <= 0 {
        return Err(Error::Domain("q must be positive".into()));
    }
    if n_points == 0 {
        return Err(Error::Domain("need at least one point".into()));
    }
    let pi = pi(p);
    for j in 1..=DENSITY_SAMPLES {
        let phi = Float::with_val(p, &pi * j as u32) / (DENSITY_SAMPLES as u32 + 1);
        if equilibrium_density(curve, &phi) < 0 {
            return Err(Error::OutOfRegime(format!("negative density at phi = {:.6}", phi.to_f64())));
        }
    }
    let n_bar = integrated_density(curve, q, &pi) + Float::with_val(p, 0.5);
    let sq = Float::with_val(p, q.sqrt_ref());
    let edge = Float::with_val(p, &curve.gamma * 2u32) * &sq;
    let mut points = Vec::with_capacity(n_points);
    for j in 1..=n_points {
        let phi = Float::with_val(p, &pi * j as u32) / (n_points as u32 + 1);
        let i = integrated_density(curve, q, &phi);
        let c = Float::with_val(p, phi.cos_ref()) + 1u32;
        let lambda = Float::with_val(p, &i - &n_bar) + Float::with_val(p, &edge * c);
        points.push(ShapePoint { phi, i, lambda });
    }
    Ok(ShapeCurve { q: q.clone(), n_bar, gamma: curve.gamma.clone(), points })
}

/// Order q^{1/2-g} density corrections -(1/2iπ) W_1^{(g)}(x).
pub fn density_corrections(engine: &mut RecursionEngine, g: u32, xs: &[Complex]) -> Result<Vec<Complex>> {
    let prec = engine.curve().prec();
    // -1/(2iπ) = i/(2π)
    let factor = Complex::with_val(prec, (0, pi(prec).recip() / 2u32));
    xs.iter()
        .map(|x| Ok(engine.w_correction(g, 1, std::slice::from_ref(x))? * &factor))
        .collect()
}

// ---------------------------------------------------------------------------
// Gromov-Witten invariants of X_p

/// w = 1/z0² = Σ c_k Q^k, exact through Q^{d_max}.
pub fn kahler_w_series(p: i64, d_max: usize) -> Series<Rational> {
    let mut cs = vec![Rational::new()];
    cs.extend(crate::curve::xp_lagrange_coeffs(p, d_max));
    Series::from_coeffs(cs)
}

fn li3_series(x: &Series<Rational>, d_max: usize) -> Result<Series<Rational>> {
    let mut acc = Series::zeros(0, d_max as i64 + 1, &Rational::new());
    let mut pw = x.clone();
    for k in 1..=d_max as i64 {
        acc = acc.add(&pw.scale(&Rational::from((1, k * k * k))));
        pw = pw.mul(x);
    }
    Ok(acc)
}

/// [Q^d] F_0, d = 0..=d_max, from the closed trilogarithm form.
pub fn f0_series(p: i64, d_max: usize) -> Result<Vec<Rational>> {
    let m = p * (p - 2);
    let pm = (p - 1) * (p - 1);
    let end = d_max as i64 + 1;
    let w = kahler_w_series(p, d_max);
    let one = Series::constant(Rational::from(1), end);
    let one_w = one.sub(&w);
    // 1/(1 - z0²) = -w/(1 - w)
    let x = w.div(&one_w)?.neg();
    let l = one_w.ln()?;
    let l3 = l.mul(&l).mul(&l);
    let f = li3_series(&x, d_max)?
        .scale(&Rational::from(m))
        .add(&li3_series(&w, d_max)?.scale(&Rational::from(pm)))
        .sub(&l3.scale(&Rational::from((m * pm, 6))));
    (0..end).map(|d| f.get(d)).collect()
}

/// [Q^d] of the genus-one term -f1 of ln Z, d = 1..=d_max (index 0 unused):
/// f1 = (1/24)(ln Q - (m + 3) ln(1 - w) + ln(1 - (p-1)² w)).
pub fn genus_one_series(p: i64, d_max: usize) -> Result<Vec<Rational>> {
    let m = p * (p - 2);
    let pm = (p - 1) * (p - 1);
    let end = d_max as i64 + 1;
    let w = kahler_w_series(p, d_max);
    let one = Series::constant(Rational::from(1), end);
    let a = one.sub(&w).ln()?.scale(&Rational::from(-(m + 3)));
    let b = one.sub(&w.scale(&Rational::from(pm))).ln()?;
    let f = a.add(&b).scale(&Rational::from((-1, 24)));
    let mut out = vec![Rational::new()];
    for d in 1..end {
        out.push(f.get(d)?);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GWTable {
    pub p: i64,
    pub g_max: u32,
    pub d_max: usize,
    /// Sampling circle |Q| = radius for g >= 2.
    pub radius: Float,
    pub samples: usize,
    /// entries[g][d - 1] = N_{g,d}
    pub entries: Vec<Vec<Float>>,
    /// Largest relative change of a g >= 2 entry between M and 2M samples.
    pub doubling_change: f64,
}

impl GWTable {
    pub fn get(&self, g: u32, d: usize) -> Option<&Float> {
        self.entries.get(g as usize)?.get(d.checked_sub(1)?)
    }

    pub fn to_json(&self) -> GWTableJson {
        GWTableJson {
            p: self.p,
            g_max: self.g_max,
            d_max: self.d_max,
            radius: to_decimal(&self.radius),
            samples: self.samples,
            doubling_change: format!("{:e}", self.doubling_change),
            invariants: self
                .entries
                .iter()
                .enumerate()
                .flat_map(|(g, row)| {
                    row.iter().enumerate().map(move |(i, v)| GWEntryJson { g: g as u32, d: i + 1, value: to_decimal(v) })
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GWEntryJson {
    pub g: u32,
    pub d: usize,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GWTableJson {
    pub p: i64,
    pub g_max: u32,
    pub d_max: usize,
    pub radius: String,
    pub samples: usize,
    pub doubling_change: String,
    pub invariants: Vec<GWEntryJson>,
}

/// Root w of w (1 - w)^m = Q near the series value.
fn kahler_w_at(p: i64, q: &Complex, series: &Series<Rational>) -> Result<Complex> {
    let prec = q.prec().0;
    let m = p * (p - 2);
    let mut seed = Complex::new(prec);
    let mut pw = Complex::with_val(prec, 1);
    for c in series.coeffs() {
        seed += Complex::with_val(prec, &pw * c);
        pw *= q;
    }
    let f = |w: &Complex| {
        let one_w = Complex::with_val(prec, 1 - w);
        let pm1 = Complex::with_val(prec, rug::ops::Pow::pow(&one_w, (m - 1) as i32));
        let pm = Complex::with_val(prec, &pm1 * &one_w);
        let v = Complex::with_val(prec, w * &pm) - q;
        let d = pm1 * Complex::with_val(prec, &one_w - Complex::with_val(prec, w * m));
        (v, d)
    };
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 24));
    let tol = Float::with_val(prec, &tol * Float::with_val(prec, q.abs_ref()));
    Ok(newton_solve_complex(&f, &seed, &tol, 100)?.0)
}

pub const GW_STABILITY: f64 = 1e-8;

/// N_{g,d} with the default sampling: M = 4 d_max points on |Q| = e^{-(d_max + 2)}.
pub fn gw_invariants(p: i64, g_max: u32, d_max: usize, prec: u32) -> Result<GWTable> {
    let radius = Float::with_val(prec, -(d_max as f64 + 2.0)).exp();
    gw_invariants_with(p, g_max, d_max, prec, &radius, 4 * d_max)
}

/// F_0 and -f1 come from exact series; g >= 2 from F_g at 2M circle points,
/// inverted with M and with 2M points and compared.
pub fn gw_invariants_with(p: i64, g_max: u32, d_max: usize, prec: u32, radius: &Float, samples: usize) -> Result<GWTable> {
    if g_max > 4 || d_max == 0 || d_max > 8 {
        return Err(Error::Domain("need g_max <= 4 and 1 <= d_max <= 8".into()));
    }
    if samples <= d_max {
        return Err(Error::Domain("need more samples than degrees".into()));
    }
    let mut entries = Vec::new();
    let f0 = f0_series(p, d_max)?;
    entries.push(f0[1..].iter().map(|r| Float::with_val(prec, r)).collect::<Vec<_>>());
    if g_max >= 1 {
        let f1s = genus_one_series(p, d_max)?;
        entries.push(f1s[1..].iter().map(|r| Float::with_val(prec, r)).collect());
    }
    let mut change = 0.0f64;
    if g_max >= 2 {
        let big = 2 * samples;
        let series = kahler_w_series(p, d_max + 12);
        let two_pi = pi(prec) * 2u32;
        let mut values: Vec<Vec<Complex>> = vec![Vec::with_capacity(big); g_max as usize - 1];
        for j in 0..big {
            let ang = Float::with_val(prec, &two_pi * j as u32) / big as u32;
            let e = Complex::with_val(prec, (0, ang)).exp();
            let q = Complex::with_val(prec, &e * radius);
            let w = kahler_w_at(p, &q, &series)?;
            let z0 = w.sqrt().recip();
            let mut eng = RecursionEngine::new(Arc::new(XpGeometry::new(p, z0)), g_max)?;
            for g in 2..=g_max {
                values[g as usize - 2].push(eng.free_energy_complex(g)?);
            }
        }
        for g in 2..=g_max {
            let vals = &values[g as usize - 2];
            let fine = dft_coeffs(vals, 1, d_max, radius, &two_pi);
            let coarse = dft_coeffs(vals, 2, d_max, radius, &two_pi);
            let mut row = Vec::with_capacity(d_max);
            for d in 0..d_max {
                let a = &fine[d];
                let b = &coarse[d];
                let diff = Float::with_val(prec, Complex::with_val(prec, a - b).abs_ref());
                let s = Float::with_val(prec, a.abs_ref());
                let floor = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
                let rel = if s > floor { Float::with_val(prec, &diff / &s).to_f64() } else { diff.to_f64() };
                change = change.max(rel);
                if rel > GW_STABILITY {
                    return Err(Error::Assertion(format!(
                        "extraction instability: N_{{{g},{}}} changes by {rel:.3e} under M -> 2M",
                        d + 1
                    )));
                }
                let im = Float::with_val(prec, a.imag().abs_ref());
                if s > floor && im > Float::with_val(prec, &s * GW_STABILITY) {
                    return Err(Error::Assertion(format!("N_{{{g},{}}} is not real", d + 1)));
                }
                row.push(a.real().clone());
            }
            entries.push(row);
        }
    }
    Ok(GWTable { p, g_max, d_max, radius: radius.clone(), samples, entries, doubling_change: change })
}

/// [Q^d] by discrete Fourier inversion over every `stride`-th sample.
fn dft_coeffs(vals: &[Complex], stride: usize, d_max: usize, radius: &Float, two_pi: &Float) -> Vec<Complex> {
    let prec = radius.prec();
    let m = vals.len() / stride;
    let mut out = Vec::with_capacity(d_max);
    for d in 1..=d_max {
        let mut acc = Complex::new(prec);
        for (k, v) in vals.iter().step_by(stride).enumerate() {
            let ang = -Float::with_val(prec, two_pi * (k * d) as u64) / m as u32;
            acc += Complex::with_val(prec, (0, ang)).exp() * v;
        }
        let rd = Float::with_val(prec, rug::ops::Pow::pow(radius, d as u32));
        out.push(acc / m as u32 / rd);
    }
    out
}

// ---------------------------------------------------------------------------
// F_0'' identity

#[derive(Clone, Debug)]
pub struct F0SecondDerivative {
    pub p: i64,
    /// [Q^k] of -ln(1 - w(Q)), exact.
    pub left: Vec<Rational>,
    /// Γ(k(p-1)²)/(k! Γ(k p(p-2) + 1)).
    pub right: Vec<Float>,
    /// Entries where a Γ argument hits a pole and the ratio is continued.
    pub continued: Vec<bool>,
    pub max_rel_diff: f64,
}

pub const F0_IDENTITY_TOL: f64 = 1e-40;

/// Both sides of ∂²F_0/∂t² = -ln(1 - 1/z0²) = Σ_k Γ(k(p-1)²)/(k! Γ(kp(p-2)+1)) Q^k,
/// k = 1..=d_max; index 0 of each vector is the (zero) constant term.
pub fn f0_second_derivative_series(p: i64, d_max: usize, prec: u32) -> Result<F0SecondDerivative> {
    let mut out = F0SecondDerivative { p, left: vec![], right: vec![], continued: vec![], max_rel_diff: 0.0 };
    if d_max == 0 {
        return Ok(out);
    }
    let end = d_max as i64 + 1;
    let w = kahler_w_series(p, d_max);
    let l = Series::constant(Rational::from(1), end).sub(&w).ln()?.neg();
    out.left = (0..end).map(|k| l.get(k)).collect::<Result<_>>()?;
    out.right.push(Float::new(prec));
    out.continued.push(false);
    let pm = (p - 1) * (p - 1);
    let m = p * (p - 2);
    for k in 1..=d_max as i64 {
        let a = k * pm;
        let b = k * m + 1;
        let kf = Float::with_val(prec, Integer::from(Integer::factorial(k as u32)));
        let (v, cont) = if a > 0 && b > 0 {
            let ga = Float::with_val(prec, a).gamma();
            let gb = Float::with_val(prec, b).gamma();
            (ga / gb / kf, false)
        } else {
            // b = a - (k - 1): Γ(a)/Γ(b) = (a-1)(a-2)..(a-k+1), entire in a
            if b != a - (k - 1) {
                return Err(Error::Pole(format!("Gamma ratio at k = {k}")));
            }
            let mut r = Integer::from(1);
            for j in 1..k {
                r *= a - j;
            }
            (Float::with_val(prec, r) / kf, true)
        };
        out.right.push(v);
        out.continued.push(cont);
    }
    for k in 1..=d_max {
        let lf = Float::with_val(prec, &out.left[k]);
        let d = Float::with_val(prec, &lf - &out.right[k]).abs();
        let s = lf.abs();
        let r = if s.is_zero() { d.to_f64() } else { (d / s).to_f64() };
        out.max_rel_diff = out.max_rel_diff.max(r);
    }
    if out.max_rel_diff > F0_IDENTITY_TOL {
        return Err(Error::Assertion(format!("F0'' sides differ by {:.3e}", out.max_rel_diff)));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// mirror curves

/// Polynomial Σ c_{ij} u^i v^j.
pub type Poly2 = BTreeMap<(u32, u32), Float>;

#[derive(Clone, Debug)]
pub struct MirrorPolynomial {
    pub p: i64,
    pub t: Float,
    pub z0: Float,
    /// Whether the Chebyshev relation was squared (odd p).
    pub squared: bool,
    pub general: Poly2,
    /// The specialized displayed form, for p in {0, 1, 2, -1}.
    pub display: Option<Poly2>,
}

fn poly_add(a: &mut Vec<Float>, b: &[Float]) {
    if a.len() < b.len() {
        let prec = b[0].prec();
        a.resize(b.len(), Float::new(prec));
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn poly_mul(a: &[Float], b: &[Float]) -> Vec<Float> {
    let prec = a[0].prec();
    let mut out = vec![Float::new(prec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Float::with_val(prec, x * y);
        }
    }
    out
}

fn poly_scale(a: &[Float], c: &Float) -> Vec<Float> {
    a.iter().map(|x| Float::with_val(c.prec(), x * c)).collect()
}

fn put(h: &mut Poly2, i: u32, j: u32, c: Float) {
    if c.is_zero() {
        return;
    }
    match h.get_mut(&(i, j)) {
        Some(x) => *x += c,
        None => {
            h.insert((i, j), c);
        }
    }
}

/// Chebyshev polynomials T_0..=T_n in s = k (1 - u) - 2, as polynomials in u.
fn chebyshev_in_u(n: usize, k: &Float) -> Vec<Vec<Float>> {
    let prec = k.prec();
    let s = vec![Float::with_val(prec, k - 2u32), Float::with_val(prec, -k)];
    let mut t = vec![vec![Float::with_val(prec, 2)], s.clone()];
    while t.len() <= n {
        let l = t.len();
        let mut next = poly_mul(&s, &t[l - 1]);
        poly_add(&mut next, &poly_scale(&t[l - 2], &Float::with_val(prec, -1)));
        t.push(next);
    }
    t
}

/// u(z) = γ z0 (1 - z/z0)(1 - 1/(z z0)), v(z) = z^{-1} ((1 - z/z0)/(1 - 1/(z z0)))^{p/2}.
pub fn mirror_param(p: i64, z0: &Complex, z: &Complex) -> (Complex, Complex) {
    let prec = z.prec().0;
    let geo = XpGeometry::new(p, z0.clone());
    let a = Complex::with_val(prec, 1 - Complex::with_val(prec, z / z0));
    let b = Complex::with_val(prec, 1 - Complex::with_val(prec, Complex::with_val(prec, z * z0).recip()));
    let u = Complex::with_val(prec, &geo.gamma * z0) * &a * &b;
    let ratio = Complex::with_val(prec, &a / &b);
    let pw = if p % 2 == 0 {
        Complex::with_val(prec, rug::ops::Pow::pow(&ratio, (p / 2) as i32))
    } else {
        Complex::with_val(prec, rug::ops::Pow::pow(&ratio.sqrt(), p as i32))
    };
    let v = pw / z;
    (u, v)
}

impl MirrorPolynomial {
    pub fn eval(&self, h: &Poly2, u: &Complex, v: &Complex) -> (Complex, Float) {
        let prec = u.prec().0;
        let mut acc = Complex::new(prec);
        let mut scale = Float::new(prec);
        for (&(i, j), c) in h {
            let t = Complex::with_val(prec, rug::ops::Pow::pow(u, i)) * Complex::with_val(prec, rug::ops::Pow::pow(v, j)) * c;
            scale += Float::with_val(prec, t.abs_ref());
            acc += t;
        }
        (acc, scale)
    }

    /// |H(u(z), v(z))| relative to Σ |c u^i v^j|.
    pub fn vanishing_defect(&self, h: &Poly2, z: &Complex) -> f64 {
        let prec = z.prec().0;
        let (u, v) = mirror_param(self.p, &Complex::with_val(prec, &self.z0), z);
        let (val, scale) = self.eval(h, &u, &v);
        Float::with_val(prec, Float::with_val(prec, val.abs_ref()) / scale).to_f64()
    }

    /// Largest coefficient difference between the displayed and the general form,
    /// both normalized by their largest coefficient (sign fixed on it).
    pub fn display_difference(&self) -> Option<f64> {
        let d = self.display.as_ref()?;
        let norm = |h: &Poly2| -> Poly2 {
            let (key, big) = h
                .iter()
                .max_by(|a, b| a.1.clone().abs().partial_cmp(&b.1.clone().abs()).unwrap())
                .map(|(k, v)| (*k, v.clone()))
                .unwrap();
            let _ = key;
            h.iter().map(|(k, v)| (*k, Float::with_val(v.prec(), v / &big))).collect()
        };
        let (a, b) = (norm(&self.general), norm(d));
        let prec = self.z0.prec();
        let mut worst = 0.0f64;
        for k in a.keys().chain(b.keys()) {
            let x = a.get(k).cloned().unwrap_or_else(|| Float::new(prec));
            let y = b.get(k).cloned().unwrap_or_else(|| Float::new(prec));
            worst = worst.max(Float::with_val(prec, x - y).abs().to_f64());
        }
        Some(worst)
    }

    pub fn to_json(&self) -> MirrorJson {
        let enc = |h: &Poly2| h.iter().map(|(&(i, j), c)| MonomialJson { u: i, v: j, coeff: to_decimal(c) }).collect();
        MirrorJson {
            p: self.p,
            t: to_decimal(&self.t),
            z0: to_decimal(&self.z0),
            squared: self.squared,
            general: enc(&self.general),
            display: self.display.as_ref().map(enc),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonomialJson {
    pub u: u32,
    pub v: u32,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MirrorJson {
    pub p: i64,
    pub t: String,
    pub z0: String,
    pub squared: bool,
    pub general: Vec<MonomialJson>,
    pub display: Option<Vec<MonomialJson>>,
}

/// General Chebyshev form, with the specialized display for p in {0, 1, 2, -1}.
/// p = 2 uses the z0 = -e^{t/2} root that its display refers to.
pub fn mirror_curve(p: i64, t: &Float) -> Result<MirrorPolynomial> {
    let prec = t.prec();
    let xp = crate::curve::solve_xp(p, t)?;
    let z0 = if p == 2 { Float::with_val(prec, -&xp.z0) } else { xp.z0.clone() };
    let general = mirror_general(p, &z0);
    let display = mirror_display(p, t, &z0);
    Ok(MirrorPolynomial { p, t: t.clone(), z0, squared: p % 2 != 0, general, display })
}

/// (v + 1/v)(1 + 1/z0)^|p| u^{|p|/2} = Σ_j C(|p|, j)(-1/z0)^j T_{j∓1}(s), cleared of
/// denominators (times v) and squared when |p| is odd.
pub fn mirror_general(p: i64, z0: &Float) -> Poly2 {
    let prec = z0.prec();
    let ap = p.unsigned_abs() as usize;
    let zi = Float::with_val(prec, z0.recip_ref());
    let k = Float::with_val(prec, 1 + z0) * Float::with_val(prec, 1 + &zi);
    let cheb = chebyshev_in_u(ap + 2, &k);
    let mut r = vec![Float::new(prec)];
    let mut c = Float::with_val(prec, 1);
    let mzi = Float::with_val(prec, -&zi);
    for j in 0..=ap {
        let binom = Float::with_val(prec, Integer::from(Integer::binomial_u(ap as u32, j as u32)));
        let idx = if p >= 0 { (j as i64 - 1).unsigned_abs() as usize } else { j + 1 };
        poly_add(&mut r, &poly_scale(&cheb[idx], &Float::with_val(prec, &binom * &c)));
        c *= &mzi;
    }
    let l = Float::with_val(prec, rug::ops::Pow::pow(Float::with_val(prec, 1 + &zi), ap as u32));
    let mut h = Poly2::new();
    if ap % 2 == 0 {
        let e = (ap / 2) as u32;
        put(&mut h, e, 2, l.clone());
        put(&mut h, e, 0, l);
        for (i, ri) in r.iter().enumerate() {
            put(&mut h, i as u32, 1, Float::with_val(prec, -ri));
        }
    } else {
        let l2 = Float::with_val(prec, l.square_ref());
        let e = ap as u32;
        put(&mut h, e, 4, l2.clone());
        put(&mut h, e, 2, Float::with_val(prec, &l2 * 2u32));
        put(&mut h, e, 0, l2);
        for (i, ri) in poly_mul(&r, &r).iter().enumerate() {
            put(&mut h, i as u32, 2, Float::with_val(prec, -ri));
        }
    }
    h
}

/// Specialized displayed mirror curves, multiplied out to polynomials.
pub fn mirror_display(p: i64, t: &Float, z0: &Float) -> Option<Poly2> {
    let prec = t.prec();
    let mut h = Poly2::new();
    let eh = Float::with_val(prec, t / 2u32).exp();
    let kk = Float::with_val(prec, 1 + &eh) * Float::with_val(prec, 1 + eh.recip());
    let f = |v: i64| Float::with_val(prec, v);
    match p {
        0 => {
            // v + 1/v + 2 = (1 - u) K, times v
            put(&mut h, 0, 2, f(1));
            put(&mut h, 0, 1, Float::with_val(prec, 2 - &kk));
            put(&mut h, 0, 0, f(1));
            put(&mut h, 1, 1, kk);
        }
        2 => {
            // v + 1/v + 2 = (1 - 1/u) K, times u v
            put(&mut h, 1, 2, f(1));
            put(&mut h, 1, 1, Float::with_val(prec, 2 - &kk));
            put(&mut h, 1, 0, f(1));
            put(&mut h, 0, 1, kk);
        }
        1 | -1 => {
            // v² + v^-2 = A u + B/u - C, times u v²
            let (a, b, c) = if p == 1 {
                let a = Float::with_val(prec, 1 + z0).square();
                let b = Float::with_val(prec, 1 - z0).square();
                (a, b, Float::with_val(prec, z0.square_ref()) * 2u32)
            } else {
                let zi = Float::with_val(prec, z0.recip_ref());
                let a = Float::with_val(prec, 1 + &zi).square();
                let b = Float::with_val(prec, 1 - &zi).square();
                (a, b, Float::with_val(prec, zi.square_ref()) * 2u32)
            };
            put(&mut h, 1, 4, f(1));
            put(&mut h, 1, 0, f(1));
            put(&mut h, 2, 2, -a);
            put(&mut h, 0, 2, -b);
            put(&mut h, 1, 2, c);
        }
        _ => return None,
    }
    Some(h)
}
