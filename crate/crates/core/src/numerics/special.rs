use crate::error::{Error, Result};
use rug::{Complex, Integer, Rational};

/// B_0..=B_n from Σ_{k<=n} C(n+1,k) B_k = 0, so B_1 = -1/2.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::from(1));
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        let mut binom = Integer::from(1); // C(m+1, k)
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from(&binom) * bk;
            binom *= (m + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        b.push(-acc / Rational::from((m + 1) as u64));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().unwrap()
}

/// Integer numerator P_m of Li_{1-m}(x) = P_m(x) / (1-x)^m for m >= 1,
/// built by repeated application of x d/dx starting from Li_0 = x/(1-x).
pub fn neg_polylog_numerator(m: usize) -> Vec<Integer> {
    assert!(m >= 1);
    let mut p = vec![Integer::new(), Integer::from(1)];
    for n in 1..m {
        // x d/dx [P/(1-x)^n] = [x P' (1-x) + n x P] / (1-x)^{n+1}
        let mut q = vec![Integer::new(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            if k >= 1 {
                let d = Integer::from(c * k as u64);
                q[k] += &d;
                q[k + 1] -= &d;
            }
            q[k + 1] += Integer::from(c * n as u64);
        }
        while q.len() > 1 && q.last().map_or(false, |c| *c == 0) {
            q.pop();
        }
        p = q;
    }
    p
}

/// Li_{1-m}(x): m = 0 is -ln(1-x) on the principal branch, m >= 1 the rational
/// functions Li_0, Li_{-1}, ...
pub fn neg_polylog(m: usize, x: &Complex) -> Result<Complex> {
    let prec = x.prec().0;
    let one_minus = Complex::with_val(prec, 1 - x);
    if one_minus.real().is_zero() && one_minus.imag().is_zero() {
        return Err(Error::Pole("x = 1".into()));
    }
    if m == 0 {
        return Ok(Complex::with_val(prec, -one_minus.ln()));
    }
    let p = neg_polylog_numerator(m);
    let mut num = Complex::new(prec);
    for c in p.iter().rev() {
        num *= x;
        num += c;
    }
    use rug::ops::Pow;
    let den = Complex::with_val(prec, (&one_minus).pow(m as u32));
    Ok(Complex::with_val(prec, num / den))
}

/// T_j(s) with T_j(z + 1/z) = z^j + z^{-j}; T_{-1} = T_1.
pub fn chebyshev_eval(j: i64, s: &Complex) -> Complex {
    assert!(j >= -1, "chebyshev index below -1");
    let prec = s.prec().0;
    let j = j.abs();
    let mut a = Complex::with_val(prec, 2);
    if j == 0 {
        return a;
    }
    let mut b = s.clone();
    for _ in 1..j {
        let c = Complex::with_val(prec, s * &b) - &a;
        a = b;
        b = c;
    }
    b
}
