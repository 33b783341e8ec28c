//! Topological recursion on curves with x(z) = c0 + c1 (z + 1/z).
//!
//! Stable correlators are pole tensors Σ c Π dz_i / (z_i - a_i)^{k_i} with
//! a_i = ±1, k_i >= 2. All residues are taken in the local coordinate
//! ζ = z - a, where σ(z) = 1/z becomes a + η(ζ).

use crate::curve::{f1_argument, local_z, SpectralCurve};
use crate::error::{Error, Result};
use crate::numerics::{to_decimal, Series};
use rug::{Complex, Float};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// One slot of a pole-tensor key: branch point (±1) and pole order.
pub type Slot = (i8, u32);

#[derive(Clone, Debug)]
pub enum CorrelatorKind {
    /// ω_{0,1} = y dx; not a pole tensor.
    Disk,
    /// ω_{0,2} = dz1 dz2 / (z1 - z2)^2.
    Bergman,
    Poles(BTreeMap<Vec<Slot>, Complex>),
}

#[derive(Clone, Debug)]
pub struct Correlator {
    pub g: u32,
    pub n: u32,
    pub kind: CorrelatorKind,
}

impl Correlator {
    /// Largest pole order allowed in any slot.
    pub fn order_cap(g: u32, n: u32) -> u32 {
        (6 * g + 2 * n).saturating_sub(4)
    }

    pub fn terms(&self) -> Option<&BTreeMap<Vec<Slot>, Complex>> {
        match &self.kind {
            CorrelatorKind::Poles(t) => Some(t),
            _ => None,
        }
    }

    /// Coefficient of dz_1 .. dz_n at the given points (for Bergman: of dz1 dz2).
    pub fn eval(&self, curve: &dyn SpectralCurve, zs: &[Complex]) -> Result<Complex> {
        if zs.len() != self.n as usize {
            return Err(Error::Domain("wrong number of points".into()));
        }
        let prec = curve.prec();
        match &self.kind {
            CorrelatorKind::Disk => {
                let y = curve.y(&zs[0])?;
                Ok(y * curve.dx(&zs[0]))
            }
            CorrelatorKind::Bergman => {
                let d = Complex::with_val(prec, &zs[0] - &zs[1]);
                Ok(Complex::with_val(prec, d.square_ref()).recip())
            }
            CorrelatorKind::Poles(t) => {
                let mut inv: Vec<[Complex; 2]> = Vec::with_capacity(zs.len());
                for z in zs {
                    let p = Complex::with_val(prec, z - 1u32);
                    let m = Complex::with_val(prec, z + 1u32);
                    inv.push([p.recip(), m.recip()]);
                }
                let mut acc = Complex::new(prec);
                for (key, c) in t {
                    let mut term = c.clone();
                    for (i, &(a, k)) in key.iter().enumerate() {
                        let b = &inv[i][if a > 0 { 0 } else { 1 }];
                        term *= Complex::with_val(prec, rug::ops::Pow::pow(b, k));
                    }
                    acc += term;
                }
                Ok(acc)
            }
        }
    }

    /// Largest |c_k - c_{π(k)}| over slot permutations swapping slots i and j.
    pub fn symmetry_defect(&self, i: usize, j: usize) -> f64 {
        let Some(t) = self.terms() else { return 0.0 };
        let mut worst = 0.0f64;
        for (key, c) in t {
            let mut k2 = key.clone();
            k2.swap(i, j);
            let other = t.get(&k2).cloned().unwrap_or_else(|| Complex::new(c.prec().0));
            let d = Complex::with_val(c.prec().0, c - &other);
            let s = Float::with_val(c.prec().0, c.abs_ref()).to_f64().max(1e-300);
            worst = worst.max(Float::with_val(c.prec().0, d.abs_ref()).to_f64() / s);
        }
        worst
    }

    pub fn to_json(&self) -> CorrelatorJson {
        let mut terms = Vec::new();
        if let Some(t) = self.terms() {
            for (key, c) in t {
                terms.push(PoleTermJson {
                    branches: key.iter().map(|s| s.0).collect(),
                    orders: key.iter().map(|s| s.1).collect(),
                    re: to_decimal(c.real()),
                    im: to_decimal(c.imag()),
                });
            }
        }
        CorrelatorJson { g: self.g, n: self.n, terms }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleTermJson {
    pub branches: Vec<i8>,
    pub orders: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelatorJson {
    pub g: u32,
    pub n: u32,
    pub terms: Vec<PoleTermJson>,
}

/// Where a correlator slot sits relative to the integration variable.
#[derive(Clone, Copy, PartialEq, Eq)]
enum At {
    Z,
    Sigma,
}

/// Local data about one branch point a.
struct Local {
    a: i8,
    /// η(ζ) = 1/(a+ζ) - a
    eta: Series<Complex>,
    /// σ'(a+ζ) = -1/(a+ζ)^2
    dsigma: Series<Complex>,
    /// 1 / (2 Δy x'), a Laurent series starting at ζ^{-2}
    inv_kernel: Series<Complex>,
    /// Φ with dΦ = y dx, zero constant term
    phi: Series<Complex>,
    /// factors (ζ + a - b)^{-k}: index [same branch?][k]
    z_pow: [Vec<Series<Complex>>; 2],
    /// factors σ' (η + a - b)^{-k}
    s_pow: [Vec<Series<Complex>>; 2],
    /// ζ^m - η^m, m = 0..
    kernel_num: Vec<Series<Complex>>,
    /// ζ^m and σ' η^m for the Bergman expansion
    zeta_m: Vec<Series<Complex>>,
    eta_m: Vec<Series<Complex>>,
}

pub struct RecursionEngine {
    curve: Arc<dyn SpectralCurve + Send + Sync>,
    pub g_max: u32,
    /// Local series order: every regular local factor is known through ζ^{L-1}.
    pub order: i64,
    prec: u32,
    locals: [Local; 2],
    memo: HashMap<(u32, u32), Arc<Correlator>>,
}

fn branch_index(a: i8) -> usize {
    if a > 0 {
        0
    } else {
        1
    }
}

impl RecursionEngine {
    /// Default local order 6 g_max + 8.
    pub fn new(curve: Arc<dyn SpectralCurve + Send + Sync>, g_max: u32) -> Result<Self> {
        Self::with_order(curve, g_max, 6 * g_max as i64 + 8)
    }

    pub fn with_order(curve: Arc<dyn SpectralCurve + Send + Sync>, g_max: u32, order: i64) -> Result<Self> {
        let prec = curve.prec();
        let cap = Correlator::order_cap(g_max, 3).max(4) as usize + 2;
        let lp = Self::local(&*curve, 1, order, cap)?;
        let lm = Self::local(&*curve, -1, order, cap)?;
        Ok(RecursionEngine { curve, g_max, order, prec, locals: [lp, lm], memo: HashMap::new() })
    }

    pub fn curve(&self) -> &(dyn SpectralCurve + Send + Sync) {
        &*self.curve
    }

    fn local(curve: &dyn SpectralCurve, a: i32, order: i64, cap: usize) -> Result<Local> {
        let prec = curve.prec();
        let end = order + 4;
        let s = local_z(prec, a, end);
        let si = s.inv()?;
        let ac = Complex::with_val(prec, a);
        let eta = si.sub(&Series::constant(ac.clone(), end));
        let dsigma = si.mul(&si).neg();
        let y = curve.y_local(a, end)?;
        let y_sigma = y.compose(&eta)?;
        let dy = y.sub(&y_sigma);
        let dx = curve.dx_local(a, end);
        let two = Complex::with_val(prec, 2);
        let inv_kernel = dy.mul(&dx).scale(&two).inv()?;
        let phi = y.mul(&dx).integral()?;
        let zero = Complex::new(prec);
        let zeta = Series::monomial(1, Complex::with_val(prec, 1), end);
        let mut z_pow: [Vec<Series<Complex>>; 2] = [Vec::new(), Vec::new()];
        let mut s_pow: [Vec<Series<Complex>>; 2] = [Vec::new(), Vec::new()];
        for (idx, same) in [(0usize, true), (1, false)] {
            let off = if same { zero.clone() } else { Complex::with_val(prec, 2 * a) };
            let zb = zeta.add(&Series::constant(off.clone(), end));
            let eb = eta.add(&Series::constant(off, end));
            let zi = zb.inv()?;
            let ei = eb.inv()?;
            let mut zp = Series::constant(Complex::with_val(prec, 1), end);
            let mut sp = dsigma.clone();
            z_pow[idx].push(zp.clone());
            s_pow[idx].push(sp.clone());
            for _ in 1..=cap {
                zp = zp.mul(&zi);
                sp = sp.mul(&ei);
                z_pow[idx].push(zp.clone());
                s_pow[idx].push(sp.clone());
            }
        }
        let mut kernel_num = Vec::with_capacity(2 * cap + 2);
        let mut zeta_m = Vec::new();
        let mut eta_m = Vec::new();
        let mut zm = Series::constant(Complex::with_val(prec, 1), end);
        let mut em = zm.clone();
        for _ in 0..=2 * cap + 2 {
            kernel_num.push(zm.sub(&em));
            zeta_m.push(zm.clone());
            eta_m.push(em.mul(&dsigma));
            zm = zm.mul(&zeta).truncate(end);
            em = em.mul(&eta).truncate(end);
        }
        Ok(Local {
            a: a as i8,
            eta,
            dsigma,
            inv_kernel,
            phi,
            z_pow,
            s_pow,
            kernel_num,
            zeta_m,
            eta_m,
        })
    }

    /// Expansion of a slot factor dz/(z-b)^k (or its pull-back by σ) about a.
    fn factor<'a>(loc: &'a Local, at: At, b: i8, k: u32) -> Result<&'a Series<Complex>> {
        let idx = if b == loc.a { 0 } else { 1 };
        let v = match at {
            At::Z => &loc.z_pow[idx],
            At::Sigma => &loc.s_pow[idx],
        };
        v.get(k as usize).ok_or(Error::TruncationInsufficient { needed: k as i64, available: v.len() as i64 })
    }

    /// ω_{g,1}, ω_{g,n} for any stable (g, n) or the two base cases.
    pub fn omega(&mut self, g: u32, n: u32) -> Result<Arc<Correlator>> {
        if n == 0 {
            return Err(Error::Domain("correlators need n >= 1".into()));
        }
        if g == 0 && n == 1 {
            return Ok(Arc::new(Correlator { g, n, kind: CorrelatorKind::Disk }));
        }
        if g == 0 && n == 2 {
            return Ok(Arc::new(Correlator { g, n, kind: CorrelatorKind::Bergman }));
        }
        if let Some(c) = self.memo.get(&(g, n)) {
            return Ok(c.clone());
        }
        let c = Arc::new(self.compute(g, n)?);
        self.memo.insert((g, n), c.clone());
        Ok(c)
    }

    /// Expands the leading slots of ω_{g,n} about the local point (each at z
    /// or at σ(z)); the rest stay as tensor keys. Bergman slots facing a free
    /// variable expand as Σ_k (k-1) ζ^{k-2} / (z_j - a)^k up to `cap`.
    fn expand(&mut self, ai: usize, g: u32, n: u32, at: &[At], cap: u32) -> Result<BTreeMap<Vec<Slot>, Series<Complex>>> {
        let prec = self.prec;
        let mut out: BTreeMap<Vec<Slot>, Series<Complex>> = BTreeMap::new();
        if g == 0 && n == 2 {
            let loc = &self.locals[ai];
            if at.len() == 2 {
                // ω_{0,2}(z, σz) = σ'(z) / (z - σz)^2 dz^2
                let s = local_z(prec, loc.a as i32, self.order + 4);
                let diff = s.sub(&loc.eta).sub(&Series::constant(Complex::with_val(prec, loc.a), self.order + 4));
                let v = loc.dsigma.div(&diff.mul(&diff))?;
                out.insert(vec![], v);
                return Ok(out);
            }
            for k in 2..=cap {
                let base = match at[0] {
                    At::Z => &loc.zeta_m,
                    At::Sigma => &loc.eta_m,
                };
                let sr = base
                    .get(k as usize - 2)
                    .ok_or(Error::TruncationInsufficient { needed: k as i64, available: base.len() as i64 })?;
                out.insert(vec![(loc.a, k)], sr.scale(&Complex::with_val(prec, k - 1)));
            }
            return Ok(out);
        }
        let corr = self.omega(g, n)?;
        let terms = corr.terms().expect("stable correlator");
        let loc = &self.locals[ai];
        for (key, c) in terms {
            let mut s: Option<Series<Complex>> = None;
            for (i, &w) in at.iter().enumerate() {
                let f = Self::factor(loc, w, key[i].0, key[i].1)?;
                s = Some(match s {
                    None => f.clone(),
                    Some(x) => x.mul(f),
                });
            }
            let s = s.expect("at least one expanded slot").scale(c);
            let rest = key[at.len()..].to_vec();
            match out.get_mut(&rest) {
                Some(acc) => *acc = acc.add(&s),
                None => {
                    out.insert(rest, s);
                }
            }
        }
        Ok(out)
    }

    fn compute(&mut self, g: u32, n_out: u32) -> Result<Correlator> {
        let n = n_out - 1; // free slots J besides z0
        let cap = Correlator::order_cap(g, n_out);
        let mut result: BTreeMap<Vec<Slot>, Complex> = BTreeMap::new();
        for ai in 0..2 {
            // bracket B(ζ; J) keyed by J slots
            let mut bracket: BTreeMap<Vec<Slot>, Series<Complex>> = BTreeMap::new();
            let add = |bracket: &mut BTreeMap<Vec<Slot>, Series<Complex>>, k: Vec<Slot>, s: Series<Complex>| {
                match bracket.get_mut(&k) {
                    Some(acc) => *acc = acc.add(&s),
                    None => {
                        bracket.insert(k, s);
                    }
                }
            };
            if g >= 1 {
                let m = self.expand(ai, g - 1, n + 2, &[At::Z, At::Sigma], cap)?;
                for (k, s) in m {
                    add(&mut bracket, k, s);
                }
            }
            for g1 in 0..=g {
                let g2 = g - g1;
                for mask in 0u32..(1 << n) {
                    let i_count = mask.count_ones();
                    let rest_count = n - i_count;
                    if (g1 == 0 && i_count == 0) || (g2 == 0 && rest_count == 0) {
                        continue;
                    }
                    let left = self.expand(ai, g1, 1 + i_count, &[At::Z], cap)?;
                    let right = self.expand(ai, g2, 1 + rest_count, &[At::Sigma], cap)?;
                    for (kl, sl) in &left {
                        for (kr, sr) in &right {
                            let mut key = Vec::with_capacity(n as usize);
                            let (mut il, mut ir) = (0, 0);
                            for j in 0..n {
                                if mask & (1 << j) != 0 {
                                    key.push(kl[il]);
                                    il += 1;
                                } else {
                                    key.push(kr[ir]);
                                    ir += 1;
                                }
                            }
                            add(&mut bracket, key, sl.mul(sr));
                        }
                    }
                }
            }
            let loc = &self.locals[ai];
            for (jkey, b) in &bracket {
                let b = b.normalized();
                let lo = b.lo();
                if lo > 0 {
                    continue;
                }
                // Res ζ^{-1} of K_m B for m = 1 ..= 1 - lo
                for m in 1..=(1 - lo) as u32 {
                    if m + 1 > cap {
                        break;
                    }
                    let km = loc.kernel_num[m as usize].mul(&loc.inv_kernel);
                    let mut res = Complex::new(self.prec);
                    for e in lo..=(-1 - km.lo()) {
                        let bc = b.get(e)?;
                        if bc.real().is_zero() && bc.imag().is_zero() {
                            continue;
                        }
                        res += km.get(-1 - e)? * bc;
                    }
                    if res.real().is_zero() && res.imag().is_zero() {
                        continue;
                    }
                    let mut key = Vec::with_capacity(n_out as usize);
                    key.push((loc.a, m + 1));
                    key.extend_from_slice(jkey);
                    match result.get_mut(&key) {
                        Some(acc) => *acc += res,
                        None => {
                            result.insert(key, res);
                        }
                    }
                }
                // poles past the classical bound must vanish
                let m_top = (1 - lo) as u32;
                if m_top + 1 > cap {
                    for m in cap..=m_top {
                        let km = loc.kernel_num[m as usize].mul(&loc.inv_kernel);
                        let mut res = Complex::new(self.prec);
                        for e in lo..=(-1 - km.lo()) {
                            res += km.get(-1 - e)? * b.get(e)?;
                        }
                        let mag = Float::with_val(self.prec, res.abs_ref());
                        let floor = Float::with_val(self.prec, Float::i_exp(1, -(self.prec as i32) / 2));
                        if mag > floor {
                            return Err(Error::Assertion(format!("pole order {} exceeds bound {cap}", m + 1)));
                        }
                    }
                }
            }
        }
        Ok(Correlator { g, n: n_out, kind: CorrelatorKind::Poles(result) })
    }

    /// Σ_a Res ω_{g,1} (vanishes since every pole has order >= 2; kept as a check).
    pub fn residue_sum(&mut self, g: u32) -> Result<Complex> {
        let w = self.omega(g, 1)?;
        let mut acc = Complex::new(self.prec);
        for (key, c) in w.terms().expect("stable") {
            if key[0].1 == 1 {
                acc += c;
            }
        }
        Ok(acc)
    }

    /// Σ_a Res Φ ω_{g,1} as a complex number.
    pub fn dilaton_sum(&mut self, g: u32) -> Result<Complex> {
        let w = self.omega(g, 1)?;
        let mut acc = Complex::new(self.prec);
        for (key, c) in w.terms().expect("stable") {
            let (a, k) = key[0];
            let loc = &self.locals[branch_index(a)];
            acc += loc.phi.get(k as i64 - 1)? * c;
        }
        Ok(acc)
    }

    /// F_g = (1/(2-2g)) Σ_a Res Φ ω_{g,1}, complex (for complex curves).
    pub fn free_energy_complex(&mut self, g: u32) -> Result<Complex> {
        if g < 2 {
            return Err(Error::Domain("free_energy needs g >= 2".into()));
        }
        let s = self.dilaton_sum(g)?;
        Ok(s / Complex::with_val(self.prec, 2 - 2 * g as i64))
    }

    /// Real F_g; the imaginary part must be below 1e-20 relative.
    pub fn free_energy(&mut self, g: u32) -> Result<Float> {
        let f = self.free_energy_complex(g)?;
        let im = Float::with_val(self.prec, f.imag().abs_ref());
        let scale = Float::with_val(self.prec, f.abs_ref());
        if !scale.is_zero() {
            let floor = Float::with_val(self.prec, Float::i_exp(1, -(self.prec as i32) * 3 / 4));
            if im > Float::with_val(self.prec, &scale * 1e-20) && im > floor {
                return Err(Error::Assertion(format!(
                    "F_{g} not real: Im/|F| = {:.3e}",
                    Float::with_val(self.prec, &im / &scale).to_f64()
                )));
            }
        }
        Ok(f.real().clone())
    }

    /// W_n^{(g)}(x_1..x_n) at points off the cut, via the physical-sheet preimages.
    pub fn w_correction(&mut self, g: u32, n: u32, xs: &[Complex]) -> Result<Complex> {
        let prec = self.prec;
        let zs: Vec<Complex> = xs.iter().map(|x| preimage(&*self.curve, x)).collect::<Result<_>>()?;
        let w = self.omega(g, n)?;
        let mut v = w.eval(&*self.curve, &zs)?;
        for z in &zs {
            v /= self.curve.dx(z);
        }
        if g == 0 && n == 2 {
            let d = Complex::with_val(prec, &xs[0] - &xs[1]);
            v -= Complex::with_val(prec, d.square_ref()).recip();
        }
        Ok(v)
    }
}

/// Physical-sheet (|z| > 1) solution of x(z) = x.
pub fn preimage(curve: &dyn SpectralCurve, x: &Complex) -> Result<Complex> {
    let prec = curve.prec();
    let (c0, c1) = curve.x_coeffs();
    let s = Complex::with_val(prec, x - c0) / c1;
    let disc = Complex::with_val(prec, s.square_ref()) - 4u32;
    let r = disc.sqrt();
    let z1 = Complex::with_val(prec, &s + &r) / 2u32;
    let z2 = Complex::with_val(prec, &s - &r) / 2u32;
    let n1 = Float::with_val(prec, z1.abs_ref());
    let n2 = Float::with_val(prec, z2.abs_ref());
    let one = Float::with_val(prec, 1);
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    let best = if n1 >= n2 { (z1, n1) } else { (z2, n2) };
    if Float::with_val(prec, &best.1 - &one) <= eps {
        return Err(Error::Domain("x lies on the cut".into()));
    }
    Ok(best.0)
}

/// F_1 = (1/24) ln|γ² y'(1) y'(-1)|.
pub fn f1(curve: &dyn SpectralCurve) -> Result<Float> {
    let prec = curve.prec();
    let a = f1_argument(curve)?;
    let m = Float::with_val(prec, a.abs_ref());
    Ok(m.ln() / 24u32)
}

/// Complex genus-one free energy (1/24) ln(-γ² y'(1) y'(-1)) for complex curves;
/// agrees with `f1` on real curves where the argument is negative.
pub fn f1_complex(curve: &dyn SpectralCurve) -> Result<Complex> {
    let a = f1_argument(curve)?;
    Ok((-a).ln() / 24u32)
}
