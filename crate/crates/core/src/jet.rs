//! Values carrying exact first derivatives in `x`, `t` and the mixed
//! derivative `∂x∂t`.
//!
//! A [`Jet`] is arithmetic in `C[ex, et] / (ex², et²)`: the four slots are the
//! coefficients of `1, ex, et, ex·et`. Products follow the Leibniz rule
//! exactly, analytic functions follow the chain rule through [`jet_apply`].
//!
//! Each jet also records which derivative slots are still meaningful. Taking
//! an x-derivative of a jet (see [`Jet::shift_x`]) moves `dx` into the value
//! slot; the new `dx` would be `∂x²`, which is not tracked, so the slot is
//! marked unavailable and reads as zero.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::analytic::Analytic;
use crate::error::Result;

const DX: u8 = 0b001;
const DT: u8 = 0b010;
const DXT: u8 = 0b100;
const ALL: u8 = DX | DT | DXT;

#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: Complex64,
    pub dx: Complex64,
    pub dt: Complex64,
    pub dxt: Complex64,
    avail: u8,
}

impl Jet {
    pub const ZERO: Jet = Jet {
        v: Complex64::new(0.0, 0.0),
        dx: Complex64::new(0.0, 0.0),
        dt: Complex64::new(0.0, 0.0),
        dxt: Complex64::new(0.0, 0.0),
        avail: ALL,
    };

    pub const ONE: Jet = Jet {
        v: Complex64::new(1.0, 0.0),
        ..Jet::ZERO
    };

    pub fn new(v: Complex64, dx: Complex64, dt: Complex64, dxt: Complex64) -> Self {
        Jet {
            v,
            dx,
            dt,
            dxt,
            avail: ALL,
        }
    }

    /// Real-valued convenience constructor.
    pub fn real(v: f64, dx: f64, dt: f64, dxt: f64) -> Self {
        Jet::new(v.into(), dx.into(), dt.into(), dxt.into())
    }

    pub fn constant(c: Complex64) -> Self {
        Jet { v: c, ..Jet::ZERO }
    }

    pub fn has_dx(&self) -> bool {
        self.avail & DX != 0
    }

    pub fn has_dt(&self) -> bool {
        self.avail & DT != 0
    }

    pub fn has_dxt(&self) -> bool {
        self.avail & DXT != 0
    }

    pub fn is_zero(&self) -> bool {
        self.v == Complex64::ZERO
            && self.dx == Complex64::ZERO
            && self.dt == Complex64::ZERO
            && self.dxt == Complex64::ZERO
    }

    /// Largest modulus over the available slots.
    pub fn max_abs(&self) -> f64 {
        let mut m = self.v.norm();
        if self.has_dx() {
            m = m.max(self.dx.norm());
        }
        if self.has_dt() {
            m = m.max(self.dt.norm());
        }
        if self.has_dxt() {
            m = m.max(self.dxt.norm());
        }
        m
    }

    /// `∂x` of this jet. The result no longer knows its own x-derivative.
    pub fn shift_x(&self) -> Jet {
        Jet {
            v: self.dx,
            dx: Complex64::ZERO,
            dt: if self.has_dxt() { self.dxt } else { Complex64::ZERO },
            dxt: Complex64::ZERO,
            avail: if self.has_dxt() { DT } else { 0 },
        }
    }

    /// `∂t` of this jet. The result no longer knows its own t-derivative.
    pub fn shift_t(&self) -> Jet {
        Jet {
            v: self.dt,
            dx: if self.has_dxt() { self.dxt } else { Complex64::ZERO },
            dt: Complex64::ZERO,
            dxt: Complex64::ZERO,
            avail: if self.has_dxt() { DX } else { 0 },
        }
    }

    pub fn scale(&self, c: Complex64) -> Jet {
        Jet {
            v: self.v * c,
            dx: self.dx * c,
            dt: self.dt * c,
            dxt: self.dxt * c,
            avail: self.avail,
        }
    }

    pub fn recip(&self) -> Result<Jet> {
        jet_apply(&crate::analytic::Func::Recip, self)
    }

    fn product_avail(a: u8, b: u8) -> u8 {
        let both = a & b;
        // the mixed slot of a product reads both first-order slots too
        if both & (DX | DT) == DX | DT {
            both
        } else {
            both & !DXT
        }
    }
}

impl Default for Jet {
    fn default() -> Self {
        Jet::ZERO
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet({}", self.v)?;
        if self.has_dx() {
            write!(f, ", dx={}", self.dx)?;
        }
        if self.has_dt() {
            write!(f, ", dt={}", self.dt)?;
        }
        if self.has_dxt() {
            write!(f, ", dxt={}", self.dxt)?;
        }
        write!(f, ")")
    }
}

impl From<Complex64> for Jet {
    fn from(c: Complex64) -> Self {
        Jet::constant(c)
    }
}

impl From<f64> for Jet {
    fn from(c: f64) -> Self {
        Jet::constant(c.into())
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            dx: self.dx + o.dx,
            dt: self.dt + o.dt,
            dxt: self.dxt + o.dxt,
            avail: self.avail & o.avail,
        }
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            v: -self.v,
            dx: -self.dx,
            dt: -self.dt,
            dxt: -self.dxt,
            avail: self.avail,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, g: Jet) -> Jet {
        jet_mul(&self, &g)
    }
}

impl Mul<Complex64> for Jet {
    type Output = Jet;
    fn mul(self, c: Complex64) -> Jet {
        self.scale(c)
    }
}

/// Leibniz product of two jets.
pub fn jet_mul(f: &Jet, g: &Jet) -> Jet {
    Jet {
        v: f.v * g.v,
        dx: f.dx * g.v + f.v * g.dx,
        dt: f.dt * g.v + f.v * g.dt,
        dxt: f.dxt * g.v + f.dx * g.dt + f.dt * g.dx + f.v * g.dxt,
        avail: Jet::product_avail(f.avail, g.avail),
    }
}

/// Chain rule: `h(f)` with `∂x`, `∂t` and `∂x∂t` propagated exactly.
pub fn jet_apply<H: Analytic + ?Sized>(h: &H, f: &Jet) -> Result<Jet> {
    let d = h.tower(f.v, 2)?;
    Ok(jet_from_tower(&d, 0, f))
}

/// Builds the jet of `h^(k)(f)` from a precomputed derivative tower of `h`
/// at `f.v` (the tower must reach order `k + 2`).
pub(crate) fn jet_from_tower(d: &[Complex64], k: usize, f: &Jet) -> Jet {
    Jet {
        v: d[k],
        dx: d[k + 1] * f.dx,
        dt: d[k + 1] * f.dt,
        dxt: d[k + 2] * f.dx * f.dt + d[k + 1] * f.dxt,
        avail: f.avail,
    }
}
