//! Finite Grassmann algebra with [`Jet`] coefficients.
//!
//! Generators `0` and `1` are the superspace coordinates `θ₁`, `θ₂`; generator
//! `k + 1` is the fermionic parameter `ε_k`. Elements are stored densely, one
//! jet per subset of generators, with the subset encoded as a bitmask. A
//! monomial is the product of its generators in ascending index order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::analytic::{Analytic, Func};
use crate::error::{Error, Result};
use crate::jet::{jet_from_tower, jet_mul, Jet};

pub const MAX_GENERATORS: usize = 10;
pub const THETA1: usize = 0;
pub const THETA2: usize = 1;

/// Coefficients below this modulus count as absent when classifying parity.
pub const PARITY_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn of_monomial(mask: usize) -> Parity {
        if mask.count_ones() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
        }
    }
}

/// Generator index of the fermionic parameter `ε_k` (`k ≥ 1`).
pub fn epsilon(k: usize) -> usize {
    k + 1
}

/// `true` when reordering `a·b` into ascending order takes an odd number of
/// transpositions. Only meaningful for disjoint masks.
#[inline]
pub fn merge_is_negative(a: usize, b: usize) -> bool {
    let mut swaps = 0u32;
    let mut hi = a >> 1;
    while hi != 0 {
        swaps += (hi & b).count_ones();
        hi >>= 1;
    }
    swaps % 2 == 1
}

/// Human-readable name of a monomial, e.g. `θ1θ2ε1`.
pub fn monomial_name(mask: usize) -> String {
    if mask == 0 {
        return "1".into();
    }
    let mut s = String::new();
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        match i {
            THETA1 => s.push_str("θ1"),
            THETA2 => s.push_str("θ2"),
            k => s.push_str(&format!("ε{}", k - 1)),
        }
        m &= m - 1;
    }
    s
}

#[derive(Clone, PartialEq)]
pub struct GrassmannNumber {
    n_gen: usize,
    coeffs: Vec<Jet>,
}

impl GrassmannNumber {
    pub fn zero(n_gen: usize) -> Result<Self> {
        if n_gen > MAX_GENERATORS {
            return Err(Error::TooManyGenerators {
                got: n_gen,
                max: MAX_GENERATORS,
            });
        }
        Ok(GrassmannNumber {
            n_gen,
            coeffs: vec![Jet::ZERO; 1 << n_gen],
        })
    }

    pub fn scalar(n_gen: usize, c: impl Into<Jet>) -> Result<Self> {
        let mut g = Self::zero(n_gen)?;
        g.coeffs[0] = c.into();
        Ok(g)
    }

    pub fn generator(n_gen: usize, index: usize) -> Result<Self> {
        let mut g = Self::zero(n_gen)?;
        g.check_index(index)?;
        g.coeffs[1 << index] = Jet::ONE;
        Ok(g)
    }

    /// Single monomial `c · g_{i1} g_{i2} …` for the generators set in `mask`.
    pub fn monomial(n_gen: usize, mask: usize, c: impl Into<Jet>) -> Result<Self> {
        let mut g = Self::zero(n_gen)?;
        if mask >= g.coeffs.len() {
            return Err(Error::GeneratorIndex {
                index: (usize::BITS - mask.leading_zeros() - 1) as usize,
                n_gen,
            });
        }
        g.coeffs[mask] = c.into();
        Ok(g)
    }

    pub fn zeros_like(&self) -> Self {
        GrassmannNumber {
            n_gen: self.n_gen,
            coeffs: vec![Jet::ZERO; self.coeffs.len()],
        }
    }

    pub fn scalar_like(&self, c: impl Into<Jet>) -> Self {
        let mut g = self.zeros_like();
        g.coeffs[0] = c.into();
        g
    }

    pub fn n_gen(&self) -> usize {
        self.n_gen
    }

    pub fn coeff(&self, mask: usize) -> Jet {
        self.coeffs[mask]
    }

    pub fn set_coeff(&mut self, mask: usize, c: Jet) {
        self.coeffs[mask] = c;
    }

    pub fn coeffs(&self) -> &[Jet] {
        &self.coeffs
    }

    /// Nonzero terms in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Jet)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn body(&self) -> Jet {
        self.coeffs[0]
    }

    pub fn soul(&self) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = Jet::ZERO;
        s
    }

    pub fn parity(&self) -> Parity {
        let (mut even, mut odd) = (false, false);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.max_abs() >= PARITY_EPS {
                match Parity::of_monomial(mask) {
                    Parity::Even => even = true,
                    _ => odd = true,
                }
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Jet::is_zero)
    }

    /// `Ok` if the element is homogeneous of the given parity (zero is both).
    pub fn require(&self, want: Parity) -> Result<()> {
        let p = self.parity();
        let zero_ok = self.coeffs.iter().all(|c| c.max_abs() < PARITY_EPS);
        if p == want || zero_ok {
            Ok(())
        } else {
            Err(Error::Parity {
                expected: want.name(),
                found: p.name(),
            })
        }
    }

    /// Largest modulus of the value slot over all monomials.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GrassmannNumber {
            n_gen: self.n_gen,
            coeffs: self.coeffs.iter().map(|j| j.scale(c)).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn mul_jet(&self, c: &Jet) -> Self {
        GrassmannNumber {
            n_gen: self.n_gen,
            coeffs: self
                .coeffs
                .iter()
                .map(|j| if j.is_zero() { *j } else { jet_mul(c, j) })
                .collect(),
        }
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.n_gen {
            Err(Error::GeneratorIndex {
                index,
                n_gen: self.n_gen,
            })
        } else {
            Ok(())
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n_gen != other.n_gen {
            Err(Error::GeneratorMismatch {
                left: self.n_gen,
                right: other.n_gen,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &Self, f: impl Fn(Jet, Jet) -> Jet) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| match (a.is_zero(), b.is_zero()) {
                (true, true) => Jet::ZERO,
                _ => f(a, b),
            })
            .collect();
        GrassmannNumber {
            n_gen: self.n_gen,
            coeffs,
        }
    }

    /// Grassmann product: the bilinear extension of the signed monomial merge.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.zeros_like();
        let rhs: Vec<(usize, &Jet)> = other.terms().collect();
        for (a, ca) in self.terms() {
            for &(b, cb) in &rhs {
                if a & b != 0 {
                    continue;
                }
                let p = jet_mul(ca, cb);
                let slot = &mut out.coeffs[a | b];
                if merge_is_negative(a, b) {
                    *slot = *slot - p;
                } else {
                    *slot += p;
                }
            }
        }
        Ok(out)
    }

    /// `h(G)` for an even `G`, as the terminating Taylor series of `h` about
    /// the body in powers of the nilpotent soul.
    pub fn apply_even<H: Analytic + ?Sized>(&self, h: &H) -> Result<Self> {
        self.require(Parity::Even)?;
        let body = self.body();
        let soul = self.soul();
        // every soul monomial holds at least two generators
        let max_power = self.n_gen / 2;
        let tower = h.tower(body.v, max_power + 2)?;
        let mut out = self.scalar_like(jet_from_tower(&tower, 0, &body));
        let mut power = self.scalar_like(Jet::ONE);
        let mut factorial = 1.0;
        for k in 1..=max_power {
            power = &power * &soul;
            if power.is_zero() {
                break;
            }
            factorial *= k as f64;
            let coef = jet_from_tower(&tower, k, &body).scale(Complex64::new(1.0 / factorial, 0.0));
            out = &out + &power.mul_jet(&coef);
        }
        Ok(out)
    }

    /// Left derivative `∂/∂g_i`: bring `g_i` to the front of each monomial
    /// containing it and strip it.
    pub fn deriv(&self, index: usize) -> Result<Self> {
        self.check_index(index)?;
        let bit = 1usize << index;
        let below = bit - 1;
        let mut out = self.zeros_like();
        for (mask, c) in self.terms() {
            if mask & bit == 0 {
                continue;
            }
            let target = &mut out.coeffs[mask & !bit];
            if (mask & below).count_ones() % 2 == 1 {
                *target = -*c;
            } else {
                *target = *c;
            }
        }
        Ok(out)
    }

    pub fn exp(&self) -> Result<Self> {
        self.apply_even(&Func::Exp)
    }
    pub fn sinh(&self) -> Result<Self> {
        self.apply_even(&Func::Sinh)
    }
    pub fn cosh(&self) -> Result<Self> {
        self.apply_even(&Func::Cosh)
    }
    pub fn tanh(&self) -> Result<Self> {
        self.apply_even(&Func::Tanh)
    }
    pub fn sech(&self) -> Result<Self> {
        self.apply_even(&Func::Sech)
    }
    pub fn arctanh(&self) -> Result<Self> {
        self.apply_even(&Func::Arctanh)
    }
    pub fn sqrt(&self) -> Result<Self> {
        self.apply_even(&Func::Sqrt)
    }
    pub fn ln(&self) -> Result<Self> {
        self.apply_even(&Func::Log)
    }
    pub fn recip(&self) -> Result<Self> {
        self.apply_even(&Func::Recip)
    }

    /// `self / d` for an even denominator.
    pub fn div(&self, d: &Self) -> Result<Self> {
        self.try_mul(&d.recip()?)
    }
}

impl fmt::Debug for GrassmannNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G[{}](", self.n_gen)?;
        let mut first = true;
        for (mask, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}·{:?}", monomial_name(mask), c)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for GrassmannNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}){}", c.v, if mask == 0 { String::new() } else { monomial_name(mask) })?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator forms panic on generator-count mismatch; the `try_*` methods
// report it instead.

impl Add for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn add(self, o: &GrassmannNumber) -> GrassmannNumber {
        self.try_add(o).expect("generator count mismatch in Grassmann sum")
    }
}

impl Add for GrassmannNumber {
    type Output = GrassmannNumber;
    fn add(self, o: GrassmannNumber) -> GrassmannNumber {
        &self + &o
    }
}

impl Sub for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn sub(self, o: &GrassmannNumber) -> GrassmannNumber {
        self.try_sub(o).expect("generator count mismatch in Grassmann difference")
    }
}

impl Sub for GrassmannNumber {
    type Output = GrassmannNumber;
    fn sub(self, o: GrassmannNumber) -> GrassmannNumber {
        &self - &o
    }
}

impl Neg for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn neg(self) -> GrassmannNumber {
        GrassmannNumber {
            n_gen: self.n_gen,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl Neg for GrassmannNumber {
    type Output = GrassmannNumber;
    fn neg(self) -> GrassmannNumber {
        -&self
    }
}

impl Mul for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn mul(self, o: &GrassmannNumber) -> GrassmannNumber {
        self.try_mul(o).expect("generator count mismatch in Grassmann product")
    }
}

impl Mul for GrassmannNumber {
    type Output = GrassmannNumber;
    fn mul(self, o: GrassmannNumber) -> GrassmannNumber {
        &self * &o
    }
}

impl Mul<Complex64> for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn mul(self, c: Complex64) -> GrassmannNumber {
        self.scale(c)
    }
}

impl Mul<f64> for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn mul(self, c: f64) -> GrassmannNumber {
        self.scale_real(c)
    }
}

impl Mul<f64> for GrassmannNumber {
    type Output = GrassmannNumber;
    fn mul(self, c: f64) -> GrassmannNumber {
        self.scale_real(c)
    }
}

impl Mul<Complex64> for GrassmannNumber {
    type Output = GrassmannNumber;
    fn mul(self, c: Complex64) -> GrassmannNumber {
        self.scale(c)
    }
}
