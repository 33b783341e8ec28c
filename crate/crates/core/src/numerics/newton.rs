use crate::error::{Error, Result};
use rug::{Complex, Float};

pub enum Jacobian<'a> {
    Closed(&'a dyn Fn(&[Float]) -> Vec<Vec<Float>>),
    FiniteDifference,
}

#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub root: Vec<Float>,
    pub iterations: usize,
    pub residual_norm: Float,
}

fn max_norm(v: &[Float], prec: u32) -> Float {
    let mut m = Float::new(prec);
    for x in v {
        let a = Float::with_val(prec, x.abs_ref());
        if a > m {
            m = a;
        }
    }
    m
}

fn fd_jacobian(f: &dyn Fn(&[Float]) -> Vec<Float>, x: &[Float], fx: &[Float], prec: u32) -> Vec<Vec<Float>> {
    let n = x.len();
    let h0 = Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32)));
    let mut j = vec![vec![Float::new(prec); n]; fx.len()];
    for c in 0..n {
        let h = Float::with_val(prec, &h0 * (Float::with_val(prec, x[c].abs_ref()) + 1u32));
        let mut xp = x.to_vec();
        xp[c] += &h;
        let fp = f(&xp);
        for r in 0..fx.len() {
            j[r][c] = Float::with_val(prec, &fp[r] - &fx[r]) / &h;
        }
    }
    j
}

/// Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<Float>>, mut b: Vec<Float>, prec: u32) -> Result<Vec<Float>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &k| a[i][col].clone().abs().partial_cmp(&a[k][col].clone().abs()).unwrap())
            .unwrap();
        if a[piv][col].is_zero() {
            return Err(Error::SingularJacobian);
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = Float::with_val(prec, &a[r][col] / &a[col][col]);
            for c in col..n {
                let t = Float::with_val(prec, &f * &a[col][c]);
                a[r][c] -= t;
            }
            let t = Float::with_val(prec, &f * &b[col]);
            b[r] -= t;
        }
    }
    let mut x = vec![Float::new(prec); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= Float::with_val(prec, &a[r][c] * &x[c]);
        }
        x[r] = acc / &a[r][r];
    }
    Ok(x)
}

/// Damped Newton: full steps, halved while the residual norm grows.
pub fn newton_solve(
    system: &dyn Fn(&[Float]) -> Vec<Float>,
    jacobian: Jacobian,
    seed: &[Float],
    tol: &Float,
    max_iter: usize,
) -> Result<NewtonOutcome> {
    let prec = seed.first().map_or(tol.prec(), |s| s.prec());
    let mut x: Vec<Float> = seed.to_vec();
    let mut fx = system(&x);
    let mut norm = max_norm(&fx, prec);
    for it in 0..max_iter {
        let converged = norm < *tol;
        let jm = match &jacobian {
            Jacobian::Closed(j) => j(&x),
            Jacobian::FiniteDifference => fd_jacobian(system, &x, &fx, prec),
        };
        let rhs: Vec<Float> = fx.iter().map(|v| Float::with_val(prec, -v)).collect();
        let step = match solve_linear(jm, rhs, prec) {
            Ok(s) => s,
            Err(_) if converged => return Ok(NewtonOutcome { root: x, iterations: it, residual_norm: norm }),
            Err(e) => return Err(e),
        };
        let mut lambda = Float::with_val(prec, 1);
        let mut accepted = false;
        for _ in 0..(if converged { 1 } else { 40 }) {
            let trial: Vec<Float> =
                x.iter().zip(&step).map(|(a, d)| Float::with_val(prec, a + Float::with_val(prec, d * &lambda))).collect();
            let ft = system(&trial);
            let nt = max_norm(&ft, prec);
            if nt.is_finite() && nt < norm {
                x = trial;
                fx = ft;
                norm = nt;
                accepted = true;
                break;
            }
            lambda /= 2;
        }
        // one polishing step past the tolerance, then stop
        if converged || !accepted {
            if converged {
                return Ok(NewtonOutcome { root: x, iterations: it + 1, residual_norm: norm });
            }
            break;
        }
    }
    if norm < *tol {
        return Ok(NewtonOutcome { root: x, iterations: max_iter, residual_norm: norm });
    }
    Err(Error::NonConvergence { iterations: max_iter, residual: format!("{:.3e}", norm.to_f64()) })
}

/// Scalar complex Newton; `f` returns (value, derivative).
pub fn newton_solve_complex(
    f: &dyn Fn(&Complex) -> (Complex, Complex),
    seed: &Complex,
    tol: &Float,
    max_iter: usize,
) -> Result<(Complex, usize)> {
    let prec = seed.prec().0;
    let mut z = seed.clone();
    let mut last = Float::with_val(prec, f64::INFINITY);
    for it in 0..max_iter {
        let (v, d) = f(&z);
        let n = Float::with_val(prec, v.abs_ref());
        if n < *tol {
            return Ok((z, it));
        }
        if d.real().is_zero() && d.imag().is_zero() {
            return Err(Error::SingularJacobian);
        }
        if it > 8 && n >= last {
            break;
        }
        last = n;
        z -= Complex::with_val(prec, &v / &d);
    }
    let (v, _) = f(&z);
    let n = Float::with_val(prec, v.abs_ref());
    if n < *tol {
        return Ok((z, max_iter));
    }
    Err(Error::NonConvergence { iterations: max_iter, residual: format!("{:.3e}", n.to_f64()) })
}
