//! Multiprecision plumbing, special numbers, series algebra and root finding.

mod coeff;
mod newton;
mod series;
mod special;

pub use coeff::Coeff;
pub use newton::{newton_solve, newton_solve_complex, Jacobian, NewtonOutcome};
pub use series::{series_invert_lagrange, LocalSeries, Series, TruncatedPowerSeries};
pub use special::{bernoulli, bernoulli_table, chebyshev_eval, neg_polylog, neg_polylog_numerator};

use rug::{Complex, Float, Rational};

/// Mantissa bits used when nothing else is requested.
pub const DEFAULT_PREC: u32 = 256;

/// Default residual tolerance for a given precision: 2^-(prec - 56).
pub fn default_tol(prec: u32) -> Float {
    let e = prec.saturating_sub(56).max(40) as i32;
    Float::with_val(prec, Float::i_exp(1, -e))
}

pub fn real(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

pub fn parse_real(prec: u32, s: &str) -> Option<Float> {
    Float::parse(s).ok().map(|p| Float::with_val(prec, p))
}

pub fn rat_to_real(prec: u32, r: &Rational) -> Float {
    Float::with_val(prec, r)
}

pub fn cplx(prec: u32, re: &Float) -> Complex {
    Complex::with_val(prec, (re, 0))
}

pub fn cprec(c: &Complex) -> u32 {
    c.prec().0
}

/// Full-precision decimal rendering, stable across runs.
pub fn to_decimal(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, None)
}

/// Decimal digits that are meaningful at `prec` bits.
pub fn digits_for(prec: u32) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).floor() as usize
}

pub fn rel_err(a: &Float, b: &Float) -> f64 {
    let d = Float::with_val(a.prec(), a - b).abs();
    let s = Float::with_val(a.prec(), b.abs_ref());
    if s.is_zero() {
        return d.to_f64();
    }
    Float::with_val(a.prec(), &d / &s).to_f64()
}

pub fn crel_err(a: &Complex, b: &Complex) -> f64 {
    let p = cprec(a);
    let d = Complex::with_val(p, a - b);
    let dn = Float::with_val(p, d.abs_ref());
    let s = Float::with_val(p, b.abs_ref());
    if s.is_zero() {
        return dn.to_f64();
    }
    Float::with_val(p, &dn / &s).to_f64()
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}
