use rug::{Complex, Float, Rational};
use std::fmt::Debug;

/// Coefficient ring for truncated series. Values carry their own precision, so
/// every constructor works "like" an existing value.
pub trait Coeff: Clone + Debug {
    fn zero_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    fn from_rational_like(&self, r: &Rational) -> Self;
    fn is_zero_c(&self) -> bool;
    fn add_c(&self, o: &Self) -> Self;
    fn sub_c(&self, o: &Self) -> Self;
    fn mul_c(&self, o: &Self) -> Self;
    fn neg_c(&self) -> Self;
    /// Panics on an exact zero divisor.
    fn div_c(&self, o: &Self) -> Self;
    /// exp of a constant term; exact rings only support exp(0).
    fn exp_c(&self) -> Option<Self>;
    /// ln of a constant term; exact rings only support ln(1).
    fn ln_c(&self) -> Option<Self>;

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }
    fn add_assign_c(&mut self, o: &Self) {
        *self = self.add_c(o);
    }
    fn mul_i64(&self, k: i64) -> Self {
        self.mul_c(&self.from_i64_like(k))
    }
    fn div_i64(&self, k: i64) -> Self {
        self.div_c(&self.from_i64_like(k))
    }
}

impl Coeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Rational::from(v)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero_c(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn add_c(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub_c(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul_c(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn neg_c(&self) -> Self {
        Rational::from(-self)
    }
    fn div_c(&self, o: &Self) -> Self {
        assert!(!o.is_zero_c(), "exact division by zero");
        Rational::from(self / o)
    }
    fn exp_c(&self) -> Option<Self> {
        self.is_zero_c().then(|| Rational::from(1))
    }
    fn ln_c(&self) -> Option<Self> {
        (*self == 1).then(Rational::new)
    }
    fn add_assign_c(&mut self, o: &Self) {
        *self += o;
    }
}

impl Coeff for Float {
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Float::with_val(self.prec(), v)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        Float::with_val(self.prec(), r)
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn sub_c(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn mul_c(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn neg_c(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
    fn div_c(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero");
        Float::with_val(self.prec(), self / o)
    }
    fn exp_c(&self) -> Option<Self> {
        Some(Float::with_val(self.prec(), self.exp_ref()))
    }
    fn ln_c(&self) -> Option<Self> {
        (*self > 0).then(|| Float::with_val(self.prec(), self.ln_ref()))
    }
    fn add_assign_c(&mut self, o: &Self) {
        *self += o;
    }
}

impl Coeff for Complex {
    fn zero_like(&self) -> Self {
        Complex::new(self.prec())
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Complex::with_val(self.prec(), v)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        Complex::with_val(self.prec(), (r, 0))
    }
    fn is_zero_c(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self + o)
    }
    fn sub_c(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self - o)
    }
    fn mul_c(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self * o)
    }
    fn neg_c(&self) -> Self {
        Complex::with_val(self.prec(), -self)
    }
    fn div_c(&self, o: &Self) -> Self {
        assert!(!o.is_zero_c(), "division by zero");
        Complex::with_val(self.prec(), self / o)
    }
    fn exp_c(&self) -> Option<Self> {
        Some(Complex::with_val(self.prec(), self.exp_ref()))
    }
    fn ln_c(&self) -> Option<Self> {
        (!self.is_zero_c()).then(|| Complex::with_val(self.prec(), self.ln_ref()))
    }
    fn add_assign_c(&mut self, o: &Self) {
        *self += o;
    }
}
