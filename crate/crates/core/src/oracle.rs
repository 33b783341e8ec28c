//! Exact truncated partition sums: the ground truth for all asymptotics.

use crate::error::{Error, Result};
use crate::numerics::{Coeff, Series};
use crate::partitions::{casimirs_at, enumerate, q_plancherel_symbolic, c2_closed, Partition, QRationalFunction};
use rug::{Float, Integer, Rational};
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct PlancherelSumSpec {
    pub q: Float,
    /// t_2, t_3, ...
    pub t: Vec<Float>,
    /// Bound on n(λ); None means unbounded.
    pub n_max: Option<usize>,
    pub max_weight: u64,
}

#[derive(Clone, Debug)]
pub struct OracleValue {
    pub value: Float,
    /// Contribution of the |λ| = max_weight shell.
    pub last_shell: Float,
    pub shells: Vec<Float>,
}

const MAX_STATS: usize = 4;
type Key = [i128; MAX_STATS];

/// Which integer statistics each partition is grouped by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeySpec {
    /// Orders k whose Casimir shift D_k is tracked.
    pub casimir_orders: Vec<u32>,
    pub length: bool,
}

impl KeySpec {
    fn width(&self) -> usize {
        self.casimir_orders.len() + self.length as usize
    }
}

/// Exact grouped shell sums S_{n,key} = Σ_{|λ|=n, key(λ)=key} (dim λ)².
#[derive(Clone, Debug)]
pub struct ShellTable {
    pub spec: KeySpec,
    pub max_weight: u64,
    pub n_max: Option<usize>,
    /// Per weight, (key, S) sorted by key.
    pub shells: Vec<Vec<(Vec<i128>, Integer)>>,
    pub partitions_visited: u64,
}

struct Builder<'a> {
    spec: &'a KeySpec,
    k_max: u64,
    n_max: usize,
    parts: Vec<u32>,
    conj: Vec<u32>,
    key: Key,
    fact: Vec<Integer>,
    maps: Vec<HashMap<Key, Integer>>,
    visited: u64,
    hook_acc: Integer,
}

impl Builder<'_> {
    fn visit(&mut self, weight: u64) {
        self.visited += 1;
        // Hook product in u64 chunks, flushed into a big integer.
        self.hook_acc.assign_u(1);
        let mut chunk: u64 = 1;
        for (i, &p) in self.parts.iter().enumerate() {
            for j in 0..p as usize {
                let h = (p as u64 - j as u64) + (self.conj[j] as u64 - i as u64) - 1;
                if chunk > (u64::MAX >> 8) / h.max(1) {
                    self.hook_acc *= chunk;
                    chunk = 1;
                }
                chunk *= h;
            }
        }
        self.hook_acc *= chunk;
        let mut d = self.fact[weight as usize].clone();
        d.div_exact_mut(&self.hook_acc);
        d.square_mut();
        let slot = self.maps[weight as usize].entry(self.key).or_insert_with(Integer::new);
        *slot += d;
    }

    fn dfs(&mut self, weight: u64, max_part: u32) {
        self.visit(weight);
        if self.parts.len() >= self.n_max {
            return;
        }
        let top = max_part.min((self.k_max - weight) as u32);
        let i = self.parts.len() as i128 + 1;
        for m in (1..=top).rev() {
            let saved = self.key;
            let mut slot = 0;
            for &k in &self.spec.casimir_orders {
                self.key[slot] += (2 * m as i128 - 2 * i + 1).pow(k) - (1 - 2 * i).pow(k);
                slot += 1;
            }
            if self.spec.length {
                self.key[slot] += 1;
            }
            self.parts.push(m);
            if self.conj.len() < m as usize {
                self.conj.resize(m as usize, 0);
            }
            for c in self.conj.iter_mut().take(m as usize) {
                *c += 1;
            }
            self.dfs(weight + m as u64, m);
            for c in self.conj.iter_mut().take(m as usize) {
                *c -= 1;
            }
            while self.conj.last() == Some(&0) {
                self.conj.pop();
            }
            self.parts.pop();
            self.key = saved;
        }
    }
}

trait AssignU {
    fn assign_u(&mut self, v: u64);
}

impl AssignU for Integer {
    fn assign_u(&mut self, v: u64) {
        use rug::Assign;
        self.assign(v);
    }
}

impl ShellTable {
    pub fn build(max_weight: u64, n_max: Option<usize>, spec: KeySpec) -> Result<ShellTable> {
        if spec.width() > MAX_STATS {
            return Err(Error::Domain(format!("at most {MAX_STATS} grouping statistics")));
        }
        let mut fact = vec![Integer::from(1)];
        for n in 1..=max_weight {
            let f = Integer::from(&fact[n as usize - 1] * n);
            fact.push(f);
        }
        let mut b = Builder {
            spec: &spec,
            k_max: max_weight,
            n_max: n_max.unwrap_or(usize::MAX),
            parts: Vec::with_capacity(max_weight as usize),
            conj: Vec::with_capacity(max_weight as usize),
            key: [0; MAX_STATS],
            fact,
            maps: vec![HashMap::new(); max_weight as usize + 1],
            visited: 0,
            hook_acc: Integer::new(),
        };
        b.dfs(0, max_weight as u32);
        let visited = b.visited;
        let maps = b.maps;
        let w = spec.width();
        let shells = maps
            .into_iter()
            .map(|m| {
                let mut v: Vec<(Vec<i128>, Integer)> = m.into_iter().map(|(k, s)| (k[..w].to_vec(), s)).collect();
                v.sort_by(|a, b| a.0.cmp(&b.0));
                v
            })
            .collect();
        Ok(ShellTable { spec, max_weight, n_max, shells, partitions_visited: visited })
    }

    pub fn factorial(n: u64) -> Integer {
        Integer::from(Integer::factorial(n as u32))
    }

    /// Σ_n q^n/(n!)² Σ_key S · w(key), accumulated weight-major.
    pub fn evaluate(&self, q: &Float, weight: impl Fn(&[i128]) -> Float) -> OracleValue {
        let prec = q.prec();
        let mut total = Float::new(prec);
        let mut shells = Vec::with_capacity(self.shells.len());
        let mut qn = Float::with_val(prec, 1);
        for (n, shell) in self.shells.iter().enumerate() {
            let f = Self::factorial(n as u64);
            let f2 = Integer::from(f.square_ref());
            let mut acc = Float::new(prec);
            for (key, s) in shell {
                let r = Rational::from((s.clone(), f2.clone()));
                acc += Float::with_val(prec, &r) * weight(key);
            }
            acc *= &qn;
            total += &acc;
            shells.push(acc);
            qn *= q;
        }
        let last_shell = shells.last().cloned().unwrap_or_else(|| Float::new(prec));
        OracleValue { value: total, last_shell, shells }
    }

    /// Z(q, t) for couplings t_2.. matching the table's Casimir orders.
    pub fn z_plancherel(&self, q: &Float, t: &[Float]) -> Result<OracleValue> {
        let prec = q.prec();
        let orders: Vec<u32> = (0..t.len()).filter(|&i| !t[i].is_zero()).map(|i| i as u32 + 2).collect();
        for k in &orders {
            if !self.spec.casimir_orders.contains(k) {
                return Err(Error::Domain(format!("shell table does not track C_{k}")));
            }
        }
        let kmax = self.spec.casimir_orders.iter().copied().max().unwrap_or(1) as usize;
        let empty = casimirs_at(&Partition::empty(), kmax.max(1), 0);
        // coefficient of C_k in the exponent: t_k q^{(1-k)/2} / k
        let mut coef: Vec<(usize, Float, Rational, Rational)> = Vec::new();
        for (slot, &k) in self.spec.casimir_orders.iter().enumerate() {
            let tk = t.get(k as usize - 2).cloned().unwrap_or_else(|| Float::new(prec));
            if tk.is_zero() {
                continue;
            }
            let qp = Float::with_val(prec, q.pow_ref(&Float::with_val(prec, (1 - k as i32) as f64 / 2.0)));
            let c = Float::with_val(prec, &tk * &qp) / k;
            let scale = Rational::from((1, Integer::from(1) << k));
            coef.push((slot, c, scale, empty.get(k as usize).clone()));
        }
        Ok(self.evaluate(q, |key| {
            let mut e = Float::new(prec);
            for (slot, c, scale, base) in &coef {
                let ck = Rational::from(key[*slot]) * scale + base;
                e += Float::with_val(prec, c * Float::with_val(prec, &ck));
            }
            Float::with_val(prec, -e).exp()
        }))
    }
}

trait PowRef {
    fn pow_ref(&self, e: &Float) -> Float;
}

impl PowRef for Float {
    fn pow_ref(&self, e: &Float) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(e))
    }
}

/// Truncated Z_N(q, t); builds the shells for this one call.
pub fn z_plancherel(spec: &PlancherelSumSpec) -> Result<OracleValue> {
    let prec = spec.q.prec();
    if spec.q.is_zero() {
        let one = Float::with_val(prec, 1);
        let mut shells = vec![one.clone()];
        shells.resize(spec.max_weight as usize + 1, Float::new(prec));
        let last = shells.last().unwrap().clone();
        return Ok(OracleValue { value: one, last_shell: last, shells });
    }
    if spec.q < 0 {
        return Err(Error::Domain("q must be nonnegative".into()));
    }
    let orders: Vec<u32> = (0..spec.t.len()).filter(|&i| !spec.t[i].is_zero()).map(|i| i as u32 + 2).collect();
    let table = ShellTable::build(spec.max_weight, spec.n_max, KeySpec { casimir_orders: orders, length: false })?;
    table.z_plancherel(&spec.q, &spec.t)
}

/// ⟨n(λ)⟩ under q^{|λ|} P(λ), truncated at max_weight.
pub fn mean_length(q: &Float, max_weight: u64) -> Result<Float> {
    let prec = q.prec();
    if q.is_zero() {
        return Ok(Float::new(prec));
    }
    let table = ShellTable::build(max_weight, None, KeySpec { casimir_orders: vec![], length: true })?;
    Ok(mean_length_from(&table, q))
}

pub fn mean_length_from(table: &ShellTable, q: &Float) -> Float {
    let prec = q.prec();
    let z = table.evaluate(q, |_| Float::with_val(prec, 1));
    let slot = table.spec.casimir_orders.len();
    let nl = table.evaluate(q, |k| Float::with_val(prec, k[slot]));
    nl.value / z.value
}

/// Exact rational mean length (useful at small cutoffs).
pub fn mean_length_exact(q: &Rational, max_weight: u64) -> Rational {
    let mut z = Rational::new();
    let mut m = Rational::new();
    let mut qn = Rational::from(1);
    let mut last = 0;
    for l in enumerate(max_weight, None) {
        while last < l.weight() {
            qn *= q;
            last += 1;
        }
        let w = Rational::from(&qn * &crate::partitions::plancherel_weight(&l));
        m += Rational::from(&w * l.length() as u64);
        z += w;
    }
    m / z
}

/// Σ_λ P_q(λ) q^{(p-1)C_2/2} Q^{|λ|}: exact coefficients in s = q^{1/2},
/// their Laurent expansions in g_s (q = e^{-g_s}), and the expansion of ln.
#[derive(Clone, Debug)]
pub struct QDeformedSeries {
    pub p: i64,
    pub d_max: usize,
    pub g_max: usize,
    pub coeffs: Vec<QRationalFunction>,
    /// Known through g_s^{2 g_max + 2 d_max - 1}.
    pub gs: Vec<Series<Rational>>,
    /// ln of the series, coefficient of Q^d for d = 0..=d_max (Q^0 term is 0).
    pub ln_gs: Vec<Series<Rational>>,
}

impl QDeformedSeries {
    /// N_{g,d}: coefficient of Q^d g_s^{2g-2} in ln Z.
    pub fn invariant(&self, g: usize, d: usize) -> Result<Rational> {
        self.ln_gs[d].get(2 * g as i64 - 2)
    }
}

pub fn z_qdeformed_series(p: i64, d_max: usize, g_max: usize) -> Result<QDeformedSeries> {
    if d_max < 1 {
        return Err(Error::Domain("d_max must be at least 1".into()));
    }
    let end = (2 * g_max + 2 * d_max) as i64;
    let mut coeffs = Vec::with_capacity(d_max + 1);
    let mut gs = Vec::with_capacity(d_max + 1);
    for d in 0..=d_max as u64 {
        let mut acc: Option<QRationalFunction> = None;
        for l in enumerate(d, None).filter(|l| l.weight() == d) {
            let w = q_plancherel_symbolic(&l);
            let e = (p - 1) * c2_closed(&l);
            let mono = QRationalFunction {
                num: crate::partitions::LaurentPoly::monomial(e, Rational::from(1)),
                den: crate::partitions::LaurentPoly::one(),
            };
            let term = w.mul(&mono);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        let c = acc.unwrap().reduced();
        gs.push(c.expand_gs(end)?);
        coeffs.push(c);
    }
    let ln_gs = ln_q_series(&gs, d_max)?;
    Ok(QDeformedSeries { p, d_max, g_max, coeffs, gs, ln_gs })
}

/// ln(1 + X) with X = Σ_{d>=1} c_d Q^d, each c_d a Laurent series in g_s.
fn ln_q_series(c: &[Series<Rational>], d_max: usize) -> Result<Vec<Series<Rational>>> {
    let zero = Rational::new();
    let end = c.iter().skip(1).map(|s| s.end()).min().unwrap_or(0);
    let mut x: Vec<Option<Series<Rational>>> = vec![None; d_max + 1];
    for d in 1..=d_max {
        x[d] = Some(c[d].clone());
    }
    let mut out: Vec<Option<Series<Rational>>> = vec![None; d_max + 1];
    let mut pw = x.clone(); // X^k, starting at k = 1
    for k in 1..=d_max {
        let sign = if k % 2 == 1 { Rational::from(1) } else { Rational::from(-1) };
        let f = sign / Rational::from(k as u64);
        for d in k..=d_max {
            if let Some(s) = &pw[d] {
                let t = s.scale(&f);
                out[d] = Some(match out[d].take() {
                    None => t,
                    Some(o) => o.add(&t),
                });
            }
        }
        // pw <- pw * X
        let mut next: Vec<Option<Series<Rational>>> = vec![None; d_max + 1];
        for a in 1..=d_max {
            let Some(pa) = &pw[a] else { continue };
            for b in 1..=d_max - a.min(d_max) {
                if a + b > d_max {
                    break;
                }
                let Some(xb) = &x[b] else { continue };
                let prod = pa.mul(xb);
                next[a + b] = Some(match next[a + b].take() {
                    None => prod,
                    Some(o) => o.add(&prod),
                });
            }
        }
        pw = next;
    }
    let mut res = vec![Series::zeros(0, end, &zero)];
    for d in 1..=d_max {
        res.push(out[d].take().unwrap_or_else(|| Series::zeros(0, end, &zero)));
    }
    for s in res.iter_mut() {
        if s.coeffs().iter().all(|c| c.is_zero_c()) && s.lo() > 0 {
            *s = Series::zeros(0, s.end(), &zero);
        }
    }
    Ok(res)
}
