use super::coeff::Coeff;
use crate::error::{Error, Result};
use rug::Complex;

/// Truncated Laurent series Σ_{k=lo}^{end-1} c_k ζ^k. Coefficients at or beyond
/// `end` are unknown, not zero; every operation propagates that bound.
#[derive(Clone, Debug)]
pub struct Series<C: Coeff> {
    lo: i64,
    coeffs: Vec<C>,
    zero: C,
}

/// Power series (lo = 0) over an exact or floating ring.
pub type TruncatedPowerSeries<C> = Series<C>;

impl<C: Coeff> Series<C> {
    pub fn new(lo: i64, coeffs: Vec<C>, zero: &C) -> Self {
        Series { lo, coeffs, zero: zero.zero_like() }
    }

    pub fn zeros(lo: i64, end: i64, zero: &C) -> Self {
        let n = (end - lo).max(0) as usize;
        Series { lo, coeffs: vec![zero.zero_like(); n], zero: zero.zero_like() }
    }

    /// c·ζ^k known through exponent end-1.
    pub fn monomial(k: i64, c: C, end: i64) -> Self {
        let mut s = Series::zeros(k.min(end), end, &c);
        if k < end {
            s.coeffs[(k - s.lo) as usize] = c;
        }
        s
    }

    pub fn constant(c: C, end: i64) -> Self {
        Series::monomial(0, c, end)
    }

    /// Power series from coefficients c_0, c_1, ... known through len-1.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "series needs a coefficient template");
        let zero = coeffs[0].zero_like();
        Series { lo: 0, coeffs, zero }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// First exponent whose coefficient is unknown.
    pub fn end(&self) -> i64 {
        self.lo + self.coeffs.len() as i64
    }

    pub fn zero(&self) -> &C {
        &self.zero
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Option<C> {
        if k >= self.end() {
            None
        } else if k < self.lo {
            Some(self.zero.clone())
        } else {
            Some(self.coeffs[(k - self.lo) as usize].clone())
        }
    }

    pub fn get(&self, k: i64) -> Result<C> {
        self.coeff(k).ok_or(Error::TruncationInsufficient { needed: k, available: self.end() })
    }

    fn at(&self, k: i64) -> &C {
        if k < self.lo {
            &self.zero
        } else {
            &self.coeffs[(k - self.lo) as usize]
        }
    }

    pub fn truncate(&self, end: i64) -> Self {
        let end = end.min(self.end());
        let mut s = Series::zeros(self.lo.min(end), end, &self.zero);
        for k in s.lo..end {
            s.coeffs[(k - s.lo) as usize] = self.at(k).clone();
        }
        s
    }

    /// Drops leading exact zeros.
    pub fn normalized(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero_c()).count();
        Series {
            lo: self.lo + skip as i64,
            coeffs: self.coeffs[skip..].to_vec(),
            zero: self.zero.clone(),
        }
    }

    /// Lowest exponent with an exactly nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero_c()).map(|i| self.lo + i as i64)
    }

    fn combine(&self, o: &Self, sub: bool) -> Self {
        let lo = self.lo.min(o.lo);
        let end = self.end().min(o.end());
        let mut s = Series::zeros(lo.min(end), end, &self.zero);
        for k in s.lo..end {
            let a = self.at(k);
            let b = o.at(k);
            s.coeffs[(k - s.lo) as usize] = if sub { a.sub_c(b) } else { a.add_c(b) };
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    pub fn neg(&self) -> Self {
        Series {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c.neg_c()).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|x| x.mul_c(c)).collect(),
            zero: self.zero.clone(),
        }
    }

    /// Multiplication by ζ^k.
    pub fn shift(&self, k: i64) -> Self {
        Series { lo: self.lo + k, coeffs: self.coeffs.clone(), zero: self.zero.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = self.normalized();
        let b = o.normalized();
        let lo = a.lo + b.lo;
        let end = (a.lo + b.end()).min(b.lo + a.end());
        let n = (end - lo).max(0) as usize;
        let mut out = vec![self.zero.clone(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if i >= n || x.is_zero_c() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(n - i) {
                if !y.is_zero_c() {
                    out[i + j].add_assign_c(&x.mul_c(y));
                }
            }
        }
        Series { lo, coeffs: out, zero: self.zero.clone() }
    }

    /// Multiplicative inverse; the lowest retained coefficient must be nonzero.
    pub fn inv(&self) -> Result<Self> {
        let a = self.normalized();
        if a.coeffs.is_empty() {
            return Err(Error::TruncationInsufficient { needed: self.end(), available: self.end() });
        }
        let n = a.coeffs.len();
        let c0 = &a.coeffs[0];
        let mut out: Vec<C> = Vec::with_capacity(n);
        out.push(c0.one_like().div_c(c0));
        for m in 1..n {
            let mut acc = self.zero.clone();
            for k in 1..=m {
                if !a.coeffs[k].is_zero_c() {
                    acc.add_assign_c(&a.coeffs[k].mul_c(&out[m - k]));
                }
            }
            out.push(acc.neg_c().mul_c(&out[0]));
        }
        Ok(Series { lo: -a.lo, coeffs: out, zero: self.zero.clone() })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.powi(-n);
        }
        if n == 0 {
            return Ok(Series::constant(self.zero.one_like(), self.end().max(1)));
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.unwrap())
    }

    /// self(inner(ζ)) for a power series self and inner with no terms below ζ^1.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.lo < 0 {
            return Err(Error::Domain("outer series of a composition must be a power series".into()));
        }
        let inn = inner.normalized();
        let v = inn.lo;
        if v < 1 {
            return Err(Error::Domain("inner series of a composition needs zero constant term".into()));
        }
        let outer_end = self.end();
        let end = inn.end().min(outer_end.saturating_mul(v));
        let mut acc = Series::zeros(0, end, &self.zero);
        if end > 0 {
            acc.coeffs[0] = self.at(0).clone();
        }
        let mut pw = Series::constant(self.zero.one_like(), end);
        let mut k = 1;
        while k * v < end {
            pw = pw.mul(&inn).truncate(end);
            let c = self.at(k);
            if !c.is_zero_c() {
                acc = acc.add(&pw.scale(c));
            }
            k += 1;
        }
        Ok(acc.truncate(end))
    }

    fn extend_low(&self, lo: i64) -> Self {
        if lo >= self.lo {
            return self.clone();
        }
        let mut coeffs = vec![self.zero.clone(); (self.lo - lo) as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        Series { lo, coeffs, zero: self.zero.clone() }
    }

    pub fn derivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.lo + i as i64;
            coeffs.push(c.mul_i64(k));
        }
        Series { lo: self.lo - 1, coeffs, zero: self.zero.clone() }
    }

    /// Antiderivative with zero constant; fails on a nonzero ζ^{-1} term.
    pub fn integral(&self) -> Result<Self> {
        if self.lo <= -1 && -1 < self.end() && !self.at(-1).is_zero_c() {
            return Err(Error::Domain("antiderivative of a series with a residue".into()));
        }
        if self.end() <= -1 {
            return Err(Error::TruncationInsufficient { needed: -1, available: self.end() });
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        let lo = self.lo.min(-1) + 1;
        for k in lo..=self.end() {
            if k == 0 {
                coeffs.push(self.zero.clone());
            } else {
                coeffs.push(self.at(k - 1).div_i64(k));
            }
        }
        Ok(Series { lo, coeffs, zero: self.zero.clone() })
    }

    pub fn exp(&self) -> Result<Self> {
        if self.valuation().map_or(false, |v| v < 0) {
            return Err(Error::Domain("exp of a series with a pole".into()));
        }
        let f = self.extend_low(0);
        if f.lo > 0 {
            return Err(Error::Domain("series window starts above zero".into()));
        }
        let n = f.coeffs.len();
        if n == 0 {
            return Ok(f);
        }
        let g0 = f.coeffs[0]
            .exp_c()
            .ok_or_else(|| Error::Domain("exp of a nonzero constant in an exact ring".into()))?;
        let mut g = vec![g0];
        for m in 1..n {
            let mut acc = self.zero.clone();
            for k in 1..=m {
                if !f.coeffs[k].is_zero_c() {
                    acc.add_assign_c(&f.coeffs[k].mul_i64(k as i64).mul_c(&g[m - k]));
                }
            }
            g.push(acc.div_i64(m as i64));
        }
        Ok(Series { lo: 0, coeffs: g, zero: self.zero.clone() })
    }

    pub fn ln(&self) -> Result<Self> {
        let f = self.extend_low(0);
        if f.lo != 0 || f.coeffs.is_empty() || f.coeffs[0].is_zero_c() {
            return Err(Error::Domain("ln needs a nonzero constant term".into()));
        }
        let n = f.coeffs.len();
        let f0 = &f.coeffs[0];
        let h0 = f0.ln_c().ok_or_else(|| Error::Domain("ln of a constant outside the ring".into()))?;
        let mut h = vec![h0];
        for m in 1..n {
            let mut acc = f.coeffs[m].mul_i64(m as i64);
            for k in 1..m {
                if !f.coeffs[m - k].is_zero_c() {
                    acc = acc.sub_c(&h[k].mul_i64(k as i64).mul_c(&f.coeffs[m - k]));
                }
            }
            h.push(acc.div_c(f0).div_i64(m as i64));
        }
        Ok(Series { lo: 0, coeffs: h, zero: self.zero.clone() })
    }

    /// Σ c_k x^k over the retained window.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = self.zero.clone();
        for i in (0..self.coeffs.len()).rev() {
            acc = acc.mul_c(x).add_c(&self.coeffs[i]);
        }
        if self.lo != 0 {
            let mut p = self.zero.one_like();
            let base = if self.lo > 0 { x.clone() } else { x.one_like().div_c(x) };
            for _ in 0..self.lo.abs() {
                p = p.mul_c(&base);
            }
            acc = acc.mul_c(&p);
        }
        acc
    }

    pub fn map<D: Coeff>(&self, zero: &D, f: impl Fn(&C) -> D) -> Series<D> {
        Series { lo: self.lo, coeffs: self.coeffs.iter().map(f).collect(), zero: zero.zero_like() }
    }
}

/// Compositional inverse by Lagrange: [Q^n] g = (1/n) [w^{n-1}] (w/f(w))^n.
pub fn series_invert_lagrange<C: Coeff>(f: &TruncatedPowerSeries<C>) -> Result<TruncatedPowerSeries<C>> {
    let f1 = f.coeff(1).ok_or(Error::TruncationInsufficient { needed: 1, available: f.end() })?;
    if f1.is_zero_c() {
        return Err(Error::Domain("zero linear coefficient".into()));
    }
    if let Some(c0) = f.coeff(0) {
        if !c0.is_zero_c() {
            return Err(Error::Domain("nonzero constant term".into()));
        }
    }
    let n = f.end();
    let zero = f.zero().clone();
    // f(w)/w as a power series valid through n-2.
    let q = Series::new(0, (1..n).map(|k| f.coeff(k).unwrap()).collect(), &zero);
    let r = q.inv()?;
    let mut out = vec![zero.clone(), zero.one_like().div_c(&f1)];
    let mut rk = r.clone();
    for k in 2..n {
        rk = rk.mul(&r);
        let c = rk.get(k - 1)?.div_i64(k);
        out.push(c);
    }
    out.truncate(n.max(0) as usize);
    Ok(Series::new(0, out, &zero))
}

/// Truncated Laurent expansion about a point: Σ c_m (z - center)^m.
#[derive(Clone, Debug)]
pub struct LocalSeries {
    pub center: Complex,
    pub series: Series<Complex>,
}

impl LocalSeries {
    pub fn new(center: Complex, series: Series<Complex>) -> Self {
        LocalSeries { center, series }
    }

    fn check(&self, o: &LocalSeries) {
        assert!(self.center == o.center, "local series about different points");
    }

    pub fn add(&self, o: &LocalSeries) -> LocalSeries {
        self.check(o);
        LocalSeries::new(self.center.clone(), self.series.add(&o.series))
    }

    pub fn sub(&self, o: &LocalSeries) -> LocalSeries {
        self.check(o);
        LocalSeries::new(self.center.clone(), self.series.sub(&o.series))
    }

    pub fn mul(&self, o: &LocalSeries) -> LocalSeries {
        self.check(o);
        LocalSeries::new(self.center.clone(), self.series.mul(&o.series))
    }

    pub fn inv(&self) -> Result<LocalSeries> {
        Ok(LocalSeries::new(self.center.clone(), self.series.inv()?))
    }

    pub fn div(&self, o: &LocalSeries) -> Result<LocalSeries> {
        self.check(o);
        Ok(LocalSeries::new(self.center.clone(), self.series.div(&o.series)?))
    }

    pub fn derivative(&self) -> LocalSeries {
        LocalSeries::new(self.center.clone(), self.series.derivative())
    }

    pub fn exp(&self) -> Result<LocalSeries> {
        Ok(LocalSeries::new(self.center.clone(), self.series.exp()?))
    }

    pub fn ln(&self) -> Result<LocalSeries> {
        Ok(LocalSeries::new(self.center.clone(), self.series.ln()?))
    }

    /// Coefficient of (z - center)^{-1}.
    pub fn residue(&self) -> Result<Complex> {
        self.series.get(-1)
    }

    pub fn eval(&self, z: &Complex) -> Complex {
        let p = z.prec();
        let zeta = Complex::with_val(p, z - &self.center);
        self.series.eval(&zeta)
    }
}
