//! Unary analytic functions with closed-form derivative towers.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A complex-analytic function that can report `h(z), h'(z), …, h⁽ⁿ⁾(z)`.
pub trait Analytic {
    fn name(&self) -> &'static str;

    /// Returns the `order + 1` values `h⁽ᵏ⁾(z)` for `k = 0..=order`.
    fn tower(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>>;
}

/// The built-in elementary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sinh,
    Cosh,
    Tanh,
    Sech,
    Arctanh,
    Sqrt,
    Log,
    Recip,
}

/// Distance below which a point counts as sitting on a pole or branch point.
const POLE_EPS: f64 = 1e-12;

impl Analytic for Func {
    fn name(&self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sech => "sech",
            Func::Arctanh => "arctanh",
            Func::Sqrt => "sqrt",
            Func::Log => "log",
            Func::Recip => "recip",
        }
    }

    fn tower(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let singular = || Error::Singular {
            func: self.name(),
            at: z,
        };
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(singular());
        }
        let n = order + 1;
        let out = match self {
            Func::Exp => vec![z.exp(); n],
            Func::Sinh | Func::Cosh => {
                let (s, c) = (z.sinh(), z.cosh());
                let (even, odd) = if *self == Func::Sinh { (s, c) } else { (c, s) };
                (0..n).map(|k| if k % 2 == 0 { even } else { odd }).collect()
            }
            Func::Tanh => {
                if z.cosh().norm() < POLE_EPS {
                    return Err(singular());
                }
                // h^(k) = P_k(tanh z), P_0 = T, P_{k+1} = P_k'(T) (1 - T²)
                let t = z.tanh();
                let mut p = vec![0.0, 1.0];
                let mut out = Vec::with_capacity(n);
                for _ in 0..n {
                    out.push(eval_poly(&p, t));
                    p = mul_one_minus_t2(&poly_deriv(&p));
                }
                out
            }
            Func::Sech => {
                let ch = z.cosh();
                if ch.norm() < POLE_EPS {
                    return Err(singular());
                }
                // h^(k) = sech z · Q_k(tanh z), Q_{k+1} = Q_k'(T)(1 - T²) - T Q_k(T)
                let (sech, t) = (ch.inv(), z.tanh());
                let mut q = vec![1.0];
                let mut out = Vec::with_capacity(n);
                for _ in 0..n {
                    out.push(sech * eval_poly(&q, t));
                    let mut next = mul_one_minus_t2(&poly_deriv(&q));
                    let shifted: Vec<f64> = std::iter::once(0.0).chain(q.iter().copied()).collect();
                    poly_sub_assign(&mut next, &shifted);
                    q = next;
                }
                out
            }
            Func::Arctanh => {
                let on_cut = z.im.abs() <= POLE_EPS * z.norm().max(1.0) && z.re.abs() >= 1.0;
                if on_cut || (z - 1.0).norm() < POLE_EPS || (z + 1.0).norm() < POLE_EPS {
                    return Err(singular());
                }
                // h^(k) = (k-1)!/2 [ (1-z)^-k + (-1)^(k-1) (1+z)^-k ],  k ≥ 1
                let (a, b) = ((1.0 - z).inv(), (1.0 + z).inv());
                let mut out = Vec::with_capacity(n);
                out.push(z.atanh());
                let (mut pa, mut pb, mut fact) = (a, b, 1.0);
                for k in 1..n {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    out.push(0.5 * fact * (pa + sign * pb));
                    pa *= a;
                    pb *= b;
                    fact *= k as f64;
                }
                out
            }
            Func::Sqrt => {
                if z.norm() < POLE_EPS {
                    return Err(singular());
                }
                // c_k · sqrt(z) / z^k keeps every derivative on the branch of the value
                let (root, zinv) = (z.sqrt(), z.inv());
                let mut out = Vec::with_capacity(n);
                let (mut ck, mut zk) = (1.0, Complex64::new(1.0, 0.0));
                for k in 0..n {
                    out.push(ck * root * zk);
                    ck *= 0.5 - k as f64;
                    zk *= zinv;
                }
                out
            }
            Func::Log => {
                if z.norm() < POLE_EPS {
                    return Err(singular());
                }
                let zinv = z.inv();
                let mut out = Vec::with_capacity(n);
                out.push(z.ln());
                let (mut coef, mut zk) = (1.0, zinv);
                for k in 1..n {
                    out.push(coef * zk);
                    coef *= -(k as f64);
                    zk *= zinv;
                }
                out
            }
            Func::Recip => {
                if z.norm() < POLE_EPS {
                    return Err(singular());
                }
                let zinv = z.inv();
                let mut out = Vec::with_capacity(n);
                let (mut coef, mut zk) = (1.0, zinv);
                for k in 0..n {
                    out.push(coef * zk);
                    coef *= -((k + 1) as f64);
                    zk *= zinv;
                }
                out
            }
        };
        Ok(out)
    }
}

fn eval_poly(p: &[f64], t: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c)
}

fn poly_deriv(p: &[f64]) -> Vec<f64> {
    if p.len() <= 1 {
        return vec![0.0];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

fn mul_one_minus_t2(p: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 2];
    for (i, &c) in p.iter().enumerate() {
        out[i] += c;
        out[i + 2] -= c;
    }
    out
}

fn poly_sub_assign(a: &mut Vec<f64>, b: &[f64]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0.0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x -= y;
    }
}
