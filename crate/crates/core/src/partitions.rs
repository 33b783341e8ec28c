//! Partitions, Plancherel weights (plain and q-deformed) and Casimirs.

use crate::error::{Error, Result};
use crate::numerics::{bernoulli_table, Series};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
    weight: u64,
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl Partition {
    /// Trailing zeros are dropped; parts must be weakly decreasing.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("parts not weakly decreasing: {parts:?}")));
        }
        let weight = parts.iter().map(|&p| p as u64).sum();
        Ok(Partition { parts, weight })
    }

    pub fn empty() -> Self {
        Partition { parts: vec![], weight: 0 }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    /// n(λ), the number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// h_i = λ_i - i + N for i = 1..N; N must be at least n(λ).
    pub fn hooks(&self, n: usize) -> Vec<i64> {
        assert!(n >= self.length(), "N below the partition length");
        (1..=n).map(|i| self.part(i - 1) as i64 - i as i64 + n as i64).collect()
    }

    pub fn conjugate(&self) -> Partition {
        let mut c = vec![0u32; self.part(0) as usize];
        for &p in &self.parts {
            for x in c.iter_mut().take(p as usize) {
                *x += 1;
            }
        }
        Partition { parts: c, weight: self.weight }
    }

    /// Hook lengths of all boxes, row by row.
    pub fn hook_lengths(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.weight as usize);
        for (i, &p) in self.parts.iter().enumerate() {
            for j in 0..p as usize {
                out.push(p - j as u32 + conj.parts[j] - i as u32 - 1);
            }
        }
        out
    }

    /// dim λ = |λ|! / Π hooks.
    pub fn dimension(&self) -> Integer {
        let mut h = Integer::from(1);
        for x in self.hook_lengths() {
            h *= x;
        }
        let f = Integer::from(Integer::factorial(self.weight as u32));
        f.div_exact(&h)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Weight first, then reverse lexicographic (larger first part first).
impl Ord for Partition {
    fn cmp(&self, o: &Self) -> Ordering {
        self.weight.cmp(&o.weight).then_with(|| o.parts.cmp(&self.parts))
    }
}

/// Stream of all partitions with |λ| <= max_weight and n(λ) <= max_length,
/// weight-major and reverse lexicographic within a weight: (5), (4,1), (3,2), ...
pub struct Partitions {
    max_weight: u64,
    max_length: usize,
    weight: u64,
    current: Option<Vec<u32>>,
    started: bool,
}

pub fn enumerate(max_weight: u64, max_length: Option<usize>) -> Partitions {
    Partitions { max_weight, max_length: max_length.unwrap_or(usize::MAX), weight: 0, current: None, started: false }
}

impl Partitions {
    fn first_of_weight(&self, n: u64) -> Option<Vec<u32>> {
        if n == 0 {
            return Some(vec![]);
        }
        if self.max_length == 0 {
            return None;
        }
        Some(vec![n as u32])
    }

    /// Next partition of the same weight in reverse lexicographic order,
    /// restricted to at most max_length parts.
    fn next_same_weight(&self, cur: &[u32]) -> Option<Vec<u32>> {
        let mut v = cur.to_vec();
        loop {
            // Find the rightmost part > 1.
            let mut rem = 0u32;
            while let Some(&last) = v.last() {
                if last == 1 {
                    rem += 1;
                    v.pop();
                } else {
                    break;
                }
            }
            let idx = v.len().checked_sub(1)?;
            v[idx] -= 1;
            rem += 1;
            let cap = v[idx];
            while rem > 0 {
                let take = rem.min(cap);
                v.push(take);
                rem -= take;
            }
            if v.len() <= self.max_length {
                return Some(v);
            }
            // Too many rows: every later partition that keeps this prefix is
            // longer still, so keep advancing.
        }
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if !self.started {
            self.started = true;
            self.weight = 0;
            self.current = Some(vec![]);
        } else {
            let cur = self.current.as_ref()?;
            match self.next_same_weight(cur) {
                Some(v) => self.current = Some(v),
                None => {
                    self.weight += 1;
                    self.current = if self.weight > self.max_weight { None } else { self.first_of_weight(self.weight) };
                }
            }
        }
        let parts = self.current.clone()?;
        Some(Partition { parts, weight: self.weight })
    }
}

/// P(λ) = Π_{i<j}(h_i-h_j)² / Π_i (h_i!)² at N = n(λ).
pub fn plancherel_weight(l: &Partition) -> Rational {
    plancherel_weight_at(l, l.length())
}

pub fn plancherel_weight_at(l: &Partition, n: usize) -> Rational {
    let h = l.hooks(n);
    let mut num = Integer::from(1);
    for i in 0..n {
        for j in i + 1..n {
            num *= h[i] - h[j];
        }
    }
    num.square_mut();
    let mut den = Integer::from(1);
    for &x in &h {
        den *= Integer::from(Integer::factorial(x as u32));
    }
    den.square_mut();
    Rational::from((num, den))
}

/// Laurent polynomial in s = q^{1/2} with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    pub lo: i64,
    pub coeffs: Vec<Rational>,
}

impl LaurentPoly {
    pub fn one() -> Self {
        LaurentPoly { lo: 0, coeffs: vec![Rational::from(1)] }
    }

    pub fn monomial(k: i64, c: Rational) -> Self {
        LaurentPoly { lo: k, coeffs: vec![c] }.trimmed()
    }

    /// [h] = s^{-h} - s^h.
    pub fn qnumber(h: i64) -> Self {
        if h == 0 {
            return LaurentPoly { lo: 0, coeffs: vec![] };
        }
        let a = h.abs();
        let mut coeffs = vec![Rational::new(); (2 * a + 1) as usize];
        let sign = if h > 0 { 1 } else { -1 };
        coeffs[0] = Rational::from(sign);
        coeffs[(2 * a) as usize] = Rational::from(-sign);
        LaurentPoly { lo: -a, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().map_or(false, |c| *c == 0) {
            self.coeffs.pop();
        }
        let skip = self.coeffs.iter().take_while(|c| **c == 0).count();
        if skip > 0 {
            self.coeffs.drain(..skip);
            self.lo += skip as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
        self
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly { lo: 0, coeffs: vec![] };
        }
        let mut c = vec![Rational::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if *b != 0 {
                    c[i + j] += Rational::from(a * b);
                }
            }
        }
        LaurentPoly { lo: self.lo + o.lo, coeffs: c }.trimmed()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = (self.lo + self.coeffs.len() as i64).max(o.lo + o.coeffs.len() as i64);
        let mut c = vec![Rational::new(); (hi - lo) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[(self.lo - lo) as usize + i] += a;
        }
        for (i, a) in o.coeffs.iter().enumerate() {
            c[(o.lo - lo) as usize + i] += a;
        }
        LaurentPoly { lo, coeffs: c }.trimmed()
    }

    /// Exact quotient, or None when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let n = self.coeffs.len();
        let m = d.coeffs.len();
        if n < m {
            return None;
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::new(); n - m + 1];
        let lead = d.coeffs[m - 1].clone();
        for k in (0..=n - m).rev() {
            let c = Rational::from(&r[k + m - 1] / &lead);
            if c != 0 {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] -= Rational::from(&c * dj);
                }
            }
            q[k] = c;
        }
        if r.iter().any(|c| *c != 0) {
            return None;
        }
        Some(LaurentPoly { lo: self.lo - d.lo, coeffs: q }.trimmed())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// s -> 1/s.
    pub fn invert_variable(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        LaurentPoly { lo: -(self.lo + self.coeffs.len() as i64 - 1), coeffs: c }.trimmed()
    }

    pub fn eval(&self, s: &Float) -> Float {
        let prec = s.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= s;
            acc += Float::with_val(prec, c);
        }
        let sp = Float::with_val(prec, s.pow(self.lo as i32));
        acc * sp
    }

    /// Substitute s = e^{-g/2}; the result is a power series in g known
    /// through g^{end-1}.
    pub fn expand_gs(&self, end: i64) -> Series<Rational> {
        let mut acc = Series::zeros(0, end, &Rational::new());
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let k = self.lo + i as i64;
            acc = acc.add(&exp_linear(&Rational::from((-k, 2)), end).scale(c));
        }
        acc
    }
}

/// e^{a g} as an exact series known through g^{end-1}.
fn exp_linear(a: &Rational, end: i64) -> Series<Rational> {
    let mut coeffs = Vec::with_capacity(end.max(0) as usize);
    let mut t = Rational::from(1);
    for k in 0..end {
        coeffs.push(t.clone());
        t = t * a / Rational::from(k + 1);
    }
    Series::new(0, coeffs, &Rational::new())
}

/// Exact ratio num/den of Laurent polynomials in s.
#[derive(Clone, Debug)]
pub struct QRationalFunction {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl QRationalFunction {
    /// Divides out whichever side divides the other.
    pub fn reduced(&self) -> Self {
        if let Some(q) = self.den.div_exact(&self.num) {
            return QRationalFunction { num: LaurentPoly::one(), den: q };
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            return QRationalFunction { num: q, den: LaurentPoly::one() };
        }
        self.clone()
    }

    /// Equality by cross-multiplication.
    pub fn same_as(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn mul(&self, o: &Self) -> Self {
        QRationalFunction { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return QRationalFunction { num: self.num.add(&o.num), den: self.den.clone() };
        }
        QRationalFunction { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }

    pub fn invert_variable(&self) -> Self {
        QRationalFunction { num: self.num.invert_variable(), den: self.den.invert_variable() }
    }

    pub fn eval(&self, s: &Float) -> Float {
        self.num.eval(s) / self.den.eval(s)
    }

    /// Laurent expansion in g with s = e^{-g/2}, known through g^{end-1}.
    /// The pole order is read off the denominator.
    pub fn expand_gs(&self, end: i64) -> Result<Series<Rational>> {
        let pole = self.den.zero_order_at_one() as i64 - self.num.zero_order_at_one() as i64;
        let width = end + pole;
        let dz = self.den.zero_order_at_one() as i64;
        let nz = self.num.zero_order_at_one() as i64;
        let den = self.den.expand_gs(dz + width.max(1)).normalized();
        let num = self.num.expand_gs(nz + width.max(1)).normalized();
        if den.lo() != dz || num.lo() != nz {
            return Err(Error::Assertion("pole order mismatch in g-expansion".into()));
        }
        Ok(num.div(&den)?.truncate(end))
    }
}

impl LaurentPoly {
    /// Multiplicity of the root s = 1.
    pub fn zero_order_at_one(&self) -> usize {
        let mut p = self.clone();
        let lin = LaurentPoly { lo: 0, coeffs: vec![Rational::from(-1), Rational::from(1)] };
        let mut k = 0;
        while !p.is_zero() {
            match p.div_exact(&lin) {
                Some(q) => {
                    p = q;
                    k += 1;
                }
                None => break,
            }
        }
        k
    }
}

/// [h]! = [1][2]...[h].
fn qfactorial(h: i64) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for k in 1..=h {
        acc = acc.mul(&LaurentPoly::qnumber(k));
    }
    acc
}

/// Symbolic P_q(λ) = Π_{i<j}[h_i-h_j]² / Π_i([h_i]!)² in s = q^{1/2}, at N = n(λ), reduced.
pub fn q_plancherel_symbolic(l: &Partition) -> QRationalFunction {
    q_plancherel_symbolic_at(l, l.length())
}

pub fn q_plancherel_symbolic_at(l: &Partition, n: usize) -> QRationalFunction {
    let h = l.hooks(n);
    let mut num = LaurentPoly::one();
    for i in 0..n {
        for j in i + 1..n {
            num = num.mul(&LaurentPoly::qnumber(h[i] - h[j]));
        }
    }
    num = num.mul(&num);
    let mut den = LaurentPoly::one();
    for &x in &h {
        den = den.mul(&qfactorial(x));
    }
    den = den.mul(&den);
    QRationalFunction { num, den }.reduced()
}

/// Numeric P_q(λ) for 0 < q < 1.
pub fn q_plancherel_weight(l: &Partition, q: &Float) -> Result<Float> {
    if !(*q > 0 && *q < 1) {
        return Err(Error::Domain("q must lie in (0,1)".into()));
    }
    let prec = q.prec();
    let s = Float::with_val(prec, q.sqrt_ref());
    let si = Float::with_val(prec, s.recip_ref());
    let qn = |h: i64| -> Float {
        let a = Float::with_val(prec, (&si).pow(h as i32));
        let b = Float::with_val(prec, (&s).pow(h as i32));
        a - b
    };
    let mut acc = Float::with_val(prec, 1);
    for x in l.hook_lengths() {
        acc *= qn(x as i64);
    }
    let acc = Float::with_val(prec, acc.square_ref());
    Ok(acc.recip())
}

/// C_1..C_kmax as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CasimirTable {
    pub values: Vec<Rational>,
}

impl CasimirTable {
    pub fn get(&self, k: usize) -> &Rational {
        &self.values[k - 1]
    }
}

pub fn casimirs(l: &Partition, k_max: usize) -> CasimirTable {
    casimirs_at(l, k_max, l.length())
}

/// k! [z^k] of Σ_i e^{z(h_i-N+1/2)} + e^{-(N-1/2)z}/(e^z-1) - 1/z.
pub fn casimirs_at(l: &Partition, k_max: usize, n: usize) -> CasimirTable {
    assert!(k_max >= 1);
    let end = k_max as i64 + 1;
    let zero = Rational::new();
    let mut g = Series::zeros(0, end, &zero);
    let nh = Rational::from(n as i64) - Rational::from((1, 2));
    for h in l.hooks(n) {
        g = g.add(&exp_linear(&(Rational::from(h) - &nh), end));
    }
    // 1/(e^z - 1) = z^{-1} Σ B_m z^m / m!
    let b = bernoulli_table(end as usize + 1);
    let mut fac = Rational::from(1);
    let mut bc = Vec::new();
    for (m, bm) in b.iter().enumerate().take(end as usize + 1) {
        if m > 0 {
            fac *= m as u64;
        }
        bc.push(Rational::from(bm / &fac));
    }
    let inv = Series::new(-1, bc, &zero);
    let tail = exp_linear(&Rational::from(-&nh), end + 1).mul(&inv);
    g = g.add(&tail);
    g = g.sub(&Series::monomial(-1, Rational::from(1), end));
    let mut values = Vec::with_capacity(k_max);
    let mut fac = Rational::from(1);
    for k in 1..=k_max as i64 {
        fac *= k as u64;
        values.push(Rational::from(g.coeff(k).unwrap() * &fac));
    }
    CasimirTable { values }
}

/// D_k = Σ_{i<=n(λ)} [(2λ_i - 2i + 1)^k - (1 - 2i)^k], so C_k(λ) = D_k / 2^k + C_k(∅).
pub fn casimir_shift(parts: &[u32], k: u32) -> i128 {
    let mut acc = 0i128;
    for (i, &p) in parts.iter().enumerate() {
        let i = i as i128 + 1;
        acc += (2 * p as i128 - 2 * i + 1).pow(k) - (1 - 2 * i).pow(k);
    }
    acc
}

pub fn casimir_fast(l: &Partition, k: usize) -> Rational {
    let base = casimirs_at(&Partition::empty(), k, 0);
    Rational::from((Integer::from(casimir_shift(l.parts(), k as u32)), Integer::from(1) << k as u32)) + base.get(k)
}

/// Σ_i λ_i(λ_i - 2i + 1).
pub fn c2_closed(l: &Partition) -> i64 {
    l.parts().iter().enumerate().map(|(i, &p)| p as i64 * (p as i64 - 2 * i as i64 - 1)).sum()
}
