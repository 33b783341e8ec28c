//! Spectral curves of the two one-cut families: the Plancherel family with
//! Casimir couplings t_2..t_{d+1}, and the q-deformed family X_p.
//!
//! Both have x(z) = c0 + c1 (z + 1/z), branch points z = ±1 and involution
//! z -> 1/z. Plancherel curves are stored with the (N - 1/2)/sqrt(q) offset
//! dropped, x(z) = γ (z + 2 + 1/z), so that the cut is [0, 4γ].

use crate::error::{Error, Result};
use crate::numerics::{
    bernoulli_table, cplx, default_tol, neg_polylog, newton_solve, to_decimal, Jacobian, Series,
};
use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

/// Point and local evaluation shared by both families.
pub trait SpectralCurve: Send + Sync {
    fn prec(&self) -> u32;
    /// (c0, c1) with x(z) = c0 + c1 (z + 1/z).
    fn x_coeffs(&self) -> (Complex, Complex);
    /// y(z), principal-branch logarithms.
    fn y(&self, z: &Complex) -> Result<Complex>;
    /// y(a + ζ) as a power series in ζ through ζ^{order-1}, continued
    /// analytically from the principal value at a = ±1.
    fn y_local(&self, a: i32, order: i64) -> Result<Series<Complex>>;
    /// Whether every curve parameter is real (F_g must then be real).
    fn is_real(&self) -> bool;

    fn x(&self, z: &Complex) -> Complex {
        let p = self.prec();
        let (c0, c1) = self.x_coeffs();
        let w = Complex::with_val(p, z + Complex::with_val(p, z.recip_ref()));
        Complex::with_val(p, c0 + c1 * w)
    }

    fn dx(&self, z: &Complex) -> Complex {
        let p = self.prec();
        let (_, c1) = self.x_coeffs();
        let z2 = Complex::with_val(p, z.square_ref());
        Complex::with_val(p, c1 * (Complex::with_val(p, 1) - Complex::with_val(p, z2.recip_ref())))
    }

    /// x(a + ζ) through ζ^{order-1}.
    fn x_local(&self, a: i32, order: i64) -> Series<Complex> {
        let p = self.prec();
        let (c0, c1) = self.x_coeffs();
        let s = local_z(p, a, order);
        let w = s.add(&s.inv().expect("z = ±1 is invertible"));
        w.scale(&c1).add(&Series::constant(c0, order))
    }

    /// x'(a + ζ) through ζ^{order-1}.
    fn dx_local(&self, a: i32, order: i64) -> Series<Complex> {
        self.x_local(a, order + 1).derivative().truncate(order)
    }
}

/// The series a + ζ known through ζ^{order-1}.
pub(crate) fn local_z(prec: u32, a: i32, order: i64) -> Series<Complex> {
    let zero = Complex::new(prec);
    let mut c = vec![zero.clone(); order.max(2) as usize];
    c[0] = Complex::with_val(prec, a);
    c[1] = Complex::with_val(prec, 1);
    Series::new(0, c, &zero).truncate(order)
}

/// Curve values at a point: x, y, x' and Δy = y(z) - y(1/z).
#[derive(Clone, Debug)]
pub struct CurvePoint {
    pub x: Complex,
    pub y: Complex,
    pub dx: Complex,
    pub delta_y: Complex,
}

pub fn eval_curve(curve: &dyn SpectralCurve, z: &Complex) -> Result<CurvePoint> {
    if z.real().is_zero() && z.imag().is_zero() {
        return Err(Error::Domain("z = 0".into()));
    }
    let p = curve.prec();
    let y = curve.y(z)?;
    let zi = Complex::with_val(p, z.recip_ref());
    let yi = curve.y(&zi)?;
    Ok(CurvePoint {
        x: curve.x(z),
        dx: curve.dx(z),
        delta_y: Complex::with_val(p, &y - &yi),
        y,
    })
}

/// γ² y'(1) y'(-1), the argument of the genus-one free energy.
pub fn f1_argument(curve: &dyn SpectralCurve) -> Result<Complex> {
    let p = curve.prec();
    let (_, c1) = curve.x_coeffs();
    let yp = curve.y_local(1, 3)?.get(1)?;
    let ym = curve.y_local(-1, 3)?.get(1)?;
    let tiny = Float::with_val(p, Float::i_exp(1, -((p as i32) * 3 / 4)));
    for v in [&yp, &ym] {
        if Float::with_val(p, v.abs_ref()) < tiny {
            return Err(Error::OutOfRegime("y' vanishes at a branch point".into()));
        }
    }
    Ok(Complex::with_val(p, c1.square_ref()) * yp * ym)
}

// ---------------------------------------------------------------------------
// Plancherel family

#[derive(Clone, Debug)]
pub struct PlancherelCurve {
    pub prec: u32,
    /// t_2..t_{d+1}
    pub t: Vec<Float>,
    /// u_0..u_d, always at least u_0, u_1
    pub u: Vec<Float>,
    pub gamma: Float,
}

fn binom(n: u64, k: u64) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// [z^j] (z + 1/z)^m.
fn w_coeff(m: u64, j: i64) -> Integer {
    let j = j.unsigned_abs();
    if j > m || (m - j) % 2 == 1 {
        return Integer::new();
    }
    binom(m, (m - j) / 2)
}

/// c_j(u0, u1) = [z^j] Σ_k t_{k+1} e^{-k u0} (z + 1/z - u1)^k, and its partials.
fn plancherel_coeff(t: &[Float], u0: &Float, u1: &Float, j: i64, prec: u32) -> (Float, Float, Float) {
    let mut c = Float::new(prec);
    let mut d0 = Float::new(prec);
    let mut d1 = Float::new(prec);
    let mu1 = Float::with_val(prec, -u1);
    for (i, tk) in t.iter().enumerate() {
        let k = i as u64 + 1;
        if tk.is_zero() {
            continue;
        }
        let e = Float::with_val(prec, u0 * -(k as i64)).exp();
        let pre = Float::with_val(prec, tk * &e);
        let mut s = Float::new(prec);
        let mut ds = Float::new(prec);
        for m in 0..=k {
            let w = w_coeff(m, j);
            if w == 0 {
                continue;
            }
            let cb = Float::with_val(prec, binom(k, m) * w);
            let r = (k - m) as i32;
            let pw = Float::with_val(prec, rug::ops::Pow::pow(&mu1, r));
            s += Float::with_val(prec, &cb * &pw);
            if r > 0 {
                let pw1 = Float::with_val(prec, rug::ops::Pow::pow(&mu1, r - 1));
                ds -= Float::with_val(prec, &cb * &pw1) * r;
            }
        }
        c += Float::with_val(prec, &pre * &s);
        d0 -= Float::with_val(prec, &pre * &s) * k;
        d1 += Float::with_val(prec, &pre * &ds);
    }
    (c, d0, d1)
}

/// Solves the (u0, u1) system by Newton with a closed-form Jacobian, seeded at
/// the origin and falling back to continuation in the overall coupling scale.
pub fn solve_plancherel(t: &[Float], prec: u32) -> Result<PlancherelCurve> {
    let t: Vec<Float> = t.iter().map(|v| Float::with_val(prec, v)).collect();
    let d = t.len().max(1);
    let tol = default_tol(prec);

    let solve_at = |scale: &Float, seed: &[Float]| -> Result<Vec<Float>> {
        let ts: Vec<Float> = t.iter().map(|v| Float::with_val(prec, v * scale)).collect();
        let sys = |x: &[Float]| -> Vec<Float> {
            let (c0, _, _) = plancherel_coeff(&ts, &x[0], &x[1], 0, prec);
            let (c1, _, _) = plancherel_coeff(&ts, &x[0], &x[1], 1, prec);
            vec![Float::with_val(prec, &x[0] * 2u32) - c0, Float::with_val(prec, &x[1] - &c1)]
        };
        let jac = |x: &[Float]| -> Vec<Vec<Float>> {
            let (_, a0, a1) = plancherel_coeff(&ts, &x[0], &x[1], 0, prec);
            let (_, b0, b1) = plancherel_coeff(&ts, &x[0], &x[1], 1, prec);
            vec![
                vec![Float::with_val(prec, 2 - a0), Float::with_val(prec, -a1)],
                vec![Float::with_val(prec, -b0), Float::with_val(prec, 1 - b1)],
            ]
        };
        Ok(newton_solve(&sys, Jacobian::Closed(&jac), seed, &tol, 200)?.root)
    };

    let zero_seed = vec![Float::new(prec), Float::new(prec)];
    let one = Float::with_val(prec, 1);
    let continuation = |steps: u32| -> Result<Vec<Float>> {
        let mut seed = zero_seed.clone();
        for s in 1..=steps {
            let scale = Float::with_val(prec, Rational::from((s, steps)));
            seed = solve_at(&scale, &seed)?;
        }
        Ok(seed)
    };
    let root = solve_at(&one, &zero_seed)
        .or_else(|_| continuation(8))
        .or_else(|_| continuation(64))
        .map_err(|e| Error::OutOfRegime(format!("spectral-curve solver failed ({e})")))?;
    let (u0, u1) = (root[0].clone(), root[1].clone());
    let mut u = vec![u0.clone(), u1.clone()];
    for j in 2..=d as i64 {
        u.push(plancherel_coeff(&t, &u0, &u1, j, prec).0);
    }
    let gamma = Float::with_val(prec, -&u0).exp();
    let curve = PlancherelCurve { prec, t, u, gamma };
    curve.check_one_cut()?;
    Ok(curve)
}

impl PlancherelCurve {
    pub fn d(&self) -> usize {
        self.u.len() - 1
    }

    /// n̄ - 1/2 = (u_1 + 2) γ sqrt(q).
    pub fn arctic(&self, q: &Float) -> Float {
        let p = self.prec;
        Float::with_val(p, &self.u[1] + 2u32) * &self.gamma * Float::with_val(p, q.sqrt_ref())
    }

    /// Rejects solutions past the critical point where y'(±1) changes sign.
    fn check_one_cut(&self) -> Result<()> {
        let arg = f1_argument(self)?;
        if *arg.real() >= 0 {
            return Err(Error::OutOfRegime("branch-point derivative product changed sign".into()));
        }
        Ok(())
    }

    /// |ω(z) + ω(1/z) - V'(x)| at each x inside the cut (0, 4γ), with the
    /// Bernoulli tails of both sides cut after `trunc` terms.
    pub fn loop_residual(&self, xs: &[Float], q: &Float, trunc: usize) -> Result<Vec<Float>> {
        let p = self.prec;
        let sq = Float::with_val(p, q.sqrt_ref());
        let b = bernoulli_table(2 * trunc);
        let edge = Float::with_val(p, &self.gamma * 4u32);
        let nbar = Float::with_val(p, &self.u[1] + 2u32) * &self.gamma;
        let mut out = Vec::with_capacity(xs.len());
        for x in xs {
            if *x <= 0 || *x >= edge {
                return Err(Error::Domain(format!("sample {} outside the cut", x.to_f64())));
            }
            let c = Float::with_val(p, x / Float::with_val(p, &self.gamma * 2u32)) - 1u32;
            let phi = c.acos();
            let z = Complex::with_val(p, (phi.clone().cos(), phi.sin()));
            let xc = cplx(p, x);
            let omega = |z: &Complex| -> Complex {
                let mut w = Complex::new(p);
                let zi = Complex::with_val(p, z.recip_ref());
                let mut pw = zi.clone();
                for k in 1..self.u.len() {
                    w += Complex::with_val(p, &pw * &self.u[k]);
                    pw *= &zi;
                }
                w += Complex::with_val(p, 1 + &zi).ln() * 2u32;
                let sx = Complex::with_val(p, &xc * &sq);
                w += Complex::with_val(p, sx.recip_ref()) / 2u32;
                let mut sxp = Complex::with_val(p, sx.square_ref());
                let sx2 = sxp.clone();
                for n in 1..=trunc {
                    let bn = Float::with_val(p, &b[2 * n]);
                    w -= Complex::with_val(p, bn / &sxp) / (2 * n as u32);
                    sxp *= &sx2;
                }
                w
            };
            let zi = Complex::with_val(p, z.recip_ref());
            let lhs = omega(&z) + omega(&zi);
            let mut v = Complex::with_val(p, xc.ln_ref()) * 2u32;
            let shift = Float::with_val(p, x - &nbar);
            let mut pw = shift.clone();
            for tk in &self.t {
                v += Complex::with_val(p, Float::with_val(p, tk * &pw));
                pw *= &shift;
            }
            let sx = Float::with_val(p, x * &sq);
            v += Complex::with_val(p, Float::with_val(p, sx.recip_ref()));
            let x2 = Float::with_val(p, x.square_ref());
            let mut den = Float::with_val(p, q * &x2);
            for m in 1..=trunc {
                let bm = Float::with_val(p, &b[2 * m]);
                v -= Complex::with_val(p, bm / &den / m as u32);
                den *= Float::with_val(p, q * &x2);
            }
            out.push(Float::with_val(p, Complex::with_val(p, lhs - v).abs().real()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            family: "plancherel".into(),
            precision: self.prec,
            t: self.t.iter().map(to_decimal).collect(),
            u: self.u.iter().map(to_decimal).collect(),
            gamma: to_decimal(&self.gamma),
            p: None,
            t_kahler: None,
            z0: None,
            big_t: None,
        }
    }
}

impl SpectralCurve for PlancherelCurve {
    fn prec(&self) -> u32 {
        self.prec
    }

    fn x_coeffs(&self) -> (Complex, Complex) {
        let p = self.prec;
        (cplx(p, &Float::with_val(p, &self.gamma * 2u32)), cplx(p, &self.gamma))
    }

    fn y(&self, z: &Complex) -> Result<Complex> {
        let p = self.prec;
        let mut y = Complex::with_val(p, z.ln_ref());
        let zi = Complex::with_val(p, z.recip_ref());
        let (mut a, mut b) = (z.clone(), zi.clone());
        for k in 1..self.u.len() {
            let d = Complex::with_val(p, &a - &b) * &self.u[k];
            y += d / 2u32;
            a *= z;
            b *= &zi;
        }
        Ok(y)
    }

    fn y_local(&self, a: i32, order: i64) -> Result<Series<Complex>> {
        let p = self.prec;
        let s = local_z(p, a, order);
        let si = s.inv()?;
        let mut y = s.ln()?;
        let (mut pa, mut pb) = (s.clone(), si.clone());
        for k in 1..self.u.len() {
            let c = cplx(p, &Float::with_val(p, &self.u[k] / 2u32));
            y = y.add(&pa.sub(&pb).scale(&c));
            pa = pa.mul(&s);
            pb = pb.mul(&si);
        }
        Ok(y)
    }

    fn is_real(&self) -> bool {
        true
    }
}

// ---------------------------------------------------------------------------
// X_p family

#[derive(Clone, Debug)]
pub struct XpCurve {
    pub prec: u32,
    pub p: i64,
    pub t: Float,
    pub z0: Float,
    /// T = 2 ln(1 + 1/z0) - p ln(1 - 1/z0²)
    pub big_t: Float,
    pub gamma: Float,
}

/// Curve geometry of X_p with a possibly complex z0; used for real curves and
/// for sampling at complex Kähler parameter.
#[derive(Clone, Debug)]
pub struct XpGeometry {
    pub prec: u32,
    pub p: i64,
    pub z0: Complex,
    pub gamma: Complex,
}

impl XpGeometry {
    pub fn new(p: i64, z0: Complex) -> Self {
        let prec = z0.prec().0;
        let zi = Complex::with_val(prec, z0.recip_ref());
        let g = Complex::with_val(prec, 1 + &z0) * Complex::with_val(prec, 1 + zi);
        XpGeometry { prec, p, gamma: Complex::with_val(prec, g.recip_ref()), z0 }
    }
}

/// 1/z0² from the Lagrange series Q + Σ_{k>=2} Q^k/k! Π_{j=0}^{k-2} (k m + j),
/// m = p(p-2), Q = e^{-t}; `terms` terms kept.
pub fn xp_lagrange_coeffs(p: i64, terms: usize) -> Vec<Rational> {
    let m = p * (p - 2);
    let mut out = Vec::with_capacity(terms);
    for k in 1..=terms as i64 {
        let mut c = Rational::from(1);
        for j in 0..=(k - 2) {
            c *= k * m + j;
        }
        c /= Integer::from(Integer::factorial(k as u32));
        out.push(c);
    }
    out
}

pub fn xp_lagrange_seed(p: i64, t: &Float, terms: usize) -> Float {
    let prec = t.prec();
    let q = Float::with_val(prec, -t).exp();
    let mut acc = Float::new(prec);
    let mut pw = q.clone();
    for c in xp_lagrange_coeffs(p, terms) {
        acc += Float::with_val(prec, &c * &pw);
        pw *= &q;
    }
    acc
}

/// Real branch z0 > 1 of e^{-t} = z0^{-2} (1 - z0^{-2})^{p(p-2)}, seeded by the
/// three-term Lagrange series for 1/z0².
pub fn solve_xp(p: i64, t: &Float) -> Result<XpCurve> {
    let prec = t.prec();
    let m = p * (p - 2);
    if m > 0 {
        // w (1-w)^m peaks at w = 1/(1+m)
        let wm = Float::with_val(prec, Rational::from((1, 1 + m)));
        let peak = Float::with_val(prec, wm.ln_ref()) + Float::with_val(prec, 1 - &wm).ln() * m;
        if Float::with_val(prec, -t) >= peak {
            return Err(Error::OutOfRegime("no real branch z0 > 1: complex branch required".into()));
        }
    }
    let seed = xp_lagrange_seed(p, t, 3);
    let f = |x: &[Float]| -> Vec<Float> {
        let w = &x[0];
        if *w <= 0 || *w >= 1 {
            return vec![Float::with_val(prec, f64::NAN)];
        }
        vec![Float::with_val(prec, w.ln_ref()) + Float::with_val(prec, 1 - w).ln() * m + t]
    };
    let j = |x: &[Float]| -> Vec<Vec<Float>> {
        let w = &x[0];
        vec![vec![Float::with_val(prec, w.recip_ref()) - Float::with_val(prec, m) / Float::with_val(prec, 1 - w)]]
    };
    let out = newton_solve(&f, Jacobian::Closed(&j), &[seed], &default_tol(prec), 200)?;
    let w = out.root[0].clone();
    if m > 0 && w >= Float::with_val(prec, Rational::from((1, 1 + m))) {
        return Err(Error::Domain("Newton left the small-Q branch".into()));
    }
    let z0 = Float::with_val(prec, w.sqrt_ref()).recip();
    Ok(XpCurve::from_z0(p, t.clone(), z0))
}

impl XpCurve {
    pub fn from_z0(p: i64, t: Float, z0: Float) -> Self {
        let prec = z0.prec();
        let zi = Float::with_val(prec, z0.recip_ref());
        let big_t = Float::with_val(prec, 1 + &zi).ln() * 2u32
            - Float::with_val(prec, 1 - Float::with_val(prec, zi.square_ref())).ln() * p;
        let gamma = (Float::with_val(prec, 1 + &z0) * Float::with_val(prec, 1 + &zi)).recip();
        XpCurve { prec, p, t, z0, big_t, gamma }
    }

    pub fn geometry(&self) -> XpGeometry {
        XpGeometry::new(self.p, cplx(self.prec, &self.z0))
    }

    /// Relative residuals of the three defining relations (z0, T, γ).
    pub fn invariant_residuals(&self) -> [f64; 3] {
        let prec = self.prec;
        let zi2 = Float::with_val(prec, self.z0.square_ref()).recip();
        let m = self.p * (self.p - 2);
        let lhs = Float::with_val(prec, -&self.t).exp();
        let rhs = Float::with_val(prec, &zi2 * rug::ops::Pow::pow(Float::with_val(prec, 1 - &zi2), m as i32));
        let zi = Float::with_val(prec, self.z0.recip_ref());
        let e_t = Float::with_val(prec, -&self.big_t).exp();
        let rt = Float::with_val(prec, rug::ops::Pow::pow(Float::with_val(prec, 1 - &zi), self.p as i32))
            / Float::with_val(prec, rug::ops::Pow::pow(Float::with_val(prec, 1 + &zi), (2 - self.p) as i32));
        let ig = Float::with_val(prec, self.gamma.recip_ref());
        let rg = Float::with_val(prec, 1 + &self.z0) * Float::with_val(prec, 1 + &zi);
        use crate::numerics::rel_err;
        [rel_err(&lhs, &rhs), rel_err(&e_t, &rt), rel_err(&ig, &rg)]
    }

    /// |ω(z) + ω(1/z) - V'(x)| at each x inside the cut (1 - 4γ, 1), with the
    /// polylogarithm series cut after `trunc` terms.
    pub fn loop_residual(&self, xs: &[Float], gs: &Float, trunc: usize) -> Result<Vec<Float>> {
        let prec = self.prec;
        let b = bernoulli_table(2 * trunc);
        let lo = Float::with_val(prec, 1 - Float::with_val(prec, &self.gamma * 4u32));
        let z0 = cplx(prec, &self.z0);
        let z0i = Complex::with_val(prec, z0.recip_ref());
        let pc = self.p;
        let ln1 = |v: Complex| -> Complex { Complex::with_val(prec, v.ln_ref()) };
        let one = Complex::with_val(prec, 1);
        let c_a = ln1(Complex::with_val(prec, &one + &z0i));
        let c_b = ln1(Complex::with_val(prec, &one - Complex::with_val(prec, z0i.square_ref())));
        let mut fact = Vec::with_capacity(trunc + 1);
        let mut f = Integer::from(1);
        fact.push(f.clone());
        for k in 1..=2 * trunc as u32 {
            f *= k;
            if k % 2 == 0 {
                fact.push(f.clone());
            }
        }
        let mut out = Vec::with_capacity(xs.len());
        for x in xs {
            if *x <= lo || *x >= 1 {
                return Err(Error::Domain(format!("sample {} outside the cut", x.to_f64())));
            }
            let c = Float::with_val(prec, 1 - x) / Float::with_val(prec, &self.gamma * 2u32) - 1u32;
            let phi = c.acos();
            let z = Complex::with_val(prec, (phi.clone().cos(), phi.sin()));
            let xc = cplx(prec, x);
            let mut tail = Complex::new(prec);
            for m in 1..=trunc {
                let li = neg_polylog(2 * m, &xc)?;
                let bm = Float::with_val(prec, &b[2 * m]) / Float::with_val(prec, &fact[m]);
                let g = Float::with_val(prec, rug::ops::Pow::pow(gs, 2 * m as i32));
                tail += li * Float::with_val(prec, bm * g);
            }
            let pole = Complex::with_val(prec, &xc / Complex::with_val(prec, &xc - 1u32)) * gs;
            let xomega = |z: &Complex| -> Complex {
                let zi = Complex::with_val(prec, z.recip_ref());
                let mut w = (ln1(Complex::with_val(prec, &one + &zi)) - &c_a) * -2i32;
                let inner = Complex::with_val(prec, &zi * &z0i);
                w += (ln1(Complex::with_val(prec, &one - inner)) - &c_b) * pc;
                w + &tail + Complex::with_val(prec, &pole / 2u32)
            };
            let zi = Complex::with_val(prec, z.recip_ref());
            let lhs = xomega(&z) + xomega(&zi);
            let mut v = ln1(Complex::with_val(prec, &one - &xc)) * -2i32;
            v += (ln1(xc.clone()) + &self.big_t) * pc;
            v -= &self.t;
            v += Complex::with_val(prec, &tail * 2u32) + &pole;
            let r = Complex::with_val(prec, lhs - v) / &xc;
            out.push(Float::with_val(prec, r.abs().real()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            family: "xp".into(),
            precision: self.prec,
            t: vec![],
            u: vec![],
            gamma: to_decimal(&self.gamma),
            p: Some(self.p),
            t_kahler: Some(to_decimal(&self.t)),
            z0: Some(to_decimal(&self.z0)),
            big_t: Some(to_decimal(&self.big_t)),
        }
    }
}

impl SpectralCurve for XpGeometry {
    fn prec(&self) -> u32 {
        self.prec
    }

    fn x_coeffs(&self) -> (Complex, Complex) {
        let p = self.prec;
        (Complex::with_val(p, 1 - Complex::with_val(p, &self.gamma * 2u32)), Complex::with_val(p, -&self.gamma))
    }

    fn y(&self, z: &Complex) -> Result<Complex> {
        let p = self.prec;
        let zi0 = Complex::with_val(p, self.z0.recip_ref());
        let a = Complex::with_val(p, 1 - Complex::with_val(p, z * &zi0));
        let zi = Complex::with_val(p, z.recip_ref());
        let b = Complex::with_val(p, 1 - Complex::with_val(p, &zi * &zi0));
        if a.real().is_zero() && a.imag().is_zero() || b.real().is_zero() && b.imag().is_zero() {
            return Err(Error::Pole("z = z0 or 1/z0".into()));
        }
        let ln_ratio = Complex::with_val(p, a.ln_ref()) - Complex::with_val(p, b.ln_ref());
        let num = -Complex::with_val(p, z.ln_ref()) + ln_ratio * Float::with_val(p, self.p) / 2u32;
        Ok(num / self.x(z))
    }

    fn y_local(&self, a: i32, order: i64) -> Result<Series<Complex>> {
        let p = self.prec;
        let s = local_z(p, a, order);
        let si = s.inv()?;
        let zi0 = Complex::with_val(p, self.z0.recip_ref());
        let one = Series::constant(Complex::with_val(p, 1), order);
        let la = one.sub(&s.scale(&zi0)).ln()?;
        let lb = one.sub(&si.scale(&zi0)).ln()?;
        let half_p = Complex::with_val(p, (self.p as f64 / 2.0, 0));
        let num = s.ln()?.neg().add(&la.sub(&lb).scale(&half_p));
        num.div(&self.x_local(a, order))
    }

    fn is_real(&self) -> bool {
        self.z0.imag().is_zero()
    }
}

impl SpectralCurve for XpCurve {
    fn prec(&self) -> u32 {
        self.prec
    }
    fn x_coeffs(&self) -> (Complex, Complex) {
        self.geometry().x_coeffs()
    }
    fn y(&self, z: &Complex) -> Result<Complex> {
        self.geometry().y(z)
    }
    fn y_local(&self, a: i32, order: i64) -> Result<Series<Complex>> {
        self.geometry().y_local(a, order)
    }
    fn is_real(&self) -> bool {
        true
    }
}

/// Either solved family.
#[derive(Clone, Debug)]
pub enum Curve {
    Plancherel(PlancherelCurve),
    Xp(XpCurve),
}

impl Curve {
    pub fn as_dyn(&self) -> &dyn SpectralCurve {
        match self {
            Curve::Plancherel(c) => c,
            Curve::Xp(c) => c,
        }
    }

    pub fn to_json(&self) -> CurveJson {
        match self {
            Curve::Plancherel(c) => c.to_json(),
            Curve::Xp(c) => c.to_json(),
        }
    }
}

/// `scale` is q for the Plancherel family and g_s for X_p.
pub fn loop_residual(curve: &Curve, xs: &[Float], scale: &Float, trunc: usize) -> Result<Vec<Float>> {
    match curve {
        Curve::Plancherel(c) => c.loop_residual(xs, scale, trunc),
        Curve::Xp(c) => c.loop_residual(xs, scale, trunc),
    }
}

/// Size of the first Bernoulli term dropped by `loop_residual` at `trunc`, on
/// the potential side: B_{2m}/(m (q x²)^m) for Plancherel curves and
/// 2 B_{2m} g_s^{2m} Li_{1-2m}(x)/((2m)! x) for X_p, with m = trunc + 1.
pub fn loop_first_omitted(curve: &Curve, xs: &[Float], scale: &Float, trunc: usize) -> Result<Vec<Float>> {
    let m = trunc + 1;
    let prec = scale.prec();
    let b = Float::with_val(prec, &bernoulli_table(2 * m)[2 * m]).abs();
    xs.iter()
        .map(|x| match curve {
            Curve::Plancherel(_) => {
                let qx2 = Float::with_val(prec, scale * Float::with_val(prec, x.square_ref()));
                let den = Float::with_val(prec, rug::ops::Pow::pow(&qx2, m as u32)) * m as u32;
                Ok(Float::with_val(prec, &b / &den))
            }
            Curve::Xp(_) => {
                let li = neg_polylog(2 * m, &cplx(prec, x))?;
                let fact = Float::with_val(prec, Integer::from(Integer::factorial(2 * m as u32)));
                let g = Float::with_val(prec, rug::ops::Pow::pow(scale, 2 * m as i32));
                // the X_p residual is reported divided by x
                let li_abs = Float::with_val(prec, li.abs_ref()) / Float::with_val(prec, x.abs_ref());
                Ok(Float::with_val(prec, &b * &g) * li_abs * 2u32 / fact)
            }
        })
        .collect()
}

/// Serialized curve data; scalars are decimal strings at `precision` bits.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurveJson {
    pub family: String,
    pub precision: u32,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub t: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub u: Vec<String>,
    pub gamma: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_kahler: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z0: Option<String>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none", default)]
    pub big_t: Option<String>,
}
