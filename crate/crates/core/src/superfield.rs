//! Superfields `Φ = φ + θ₁ψ̄ + iθ₂ψ − θ₁θ₂·2i sinh φ` evaluated pointwise,
//! the superderivatives `D_x = ∂_θ₁ + θ₁∂_x`, `D_t = ∂_θ₂ + θ₂∂_t`, and the
//! equation-of-motion residual `D_xD_tΦ − 2i sinh Φ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannNumber, Parity, THETA1, THETA2};

const I: Complex64 = Complex64::new(0.0, 1.0);
const THETA_MASK: usize = (1 << THETA1) | (1 << THETA2);

/// The θ-free component fields of a superfield. `phi` is even, `psibar` and
/// `psi` are odd; all three live in the same algebra with no θ content.
#[derive(Debug, Clone, PartialEq)]
pub struct Components {
    pub phi: GrassmannNumber,
    pub psibar: GrassmannNumber,
    pub psi: GrassmannNumber,
}

impl Components {
    pub fn vacuum(n_gen: usize) -> Result<Self> {
        let z = GrassmannNumber::zero(n_gen)?;
        Ok(Components {
            phi: z.clone(),
            psibar: z.clone(),
            psi: z,
        })
    }

    pub fn n_gen(&self) -> usize {
        self.phi.n_gen()
    }
}

/// An on-shell superfield value at one spacetime point.
#[derive(Debug, Clone, PartialEq)]
pub struct Superfield(GrassmannNumber);

impl Superfield {
    /// Wraps an even Grassmann value. The on-shell auxiliary relation is not
    /// checked; superposition formulas produce such values directly.
    pub fn from_grassmann(g: GrassmannNumber) -> Result<Self> {
        g.require(Parity::Even)?;
        Ok(Superfield(g))
    }

    pub fn as_grassmann(&self) -> &GrassmannNumber {
        &self.0
    }

    pub fn into_grassmann(self) -> GrassmannNumber {
        self.0
    }

    pub fn n_gen(&self) -> usize {
        self.0.n_gen()
    }

    pub fn phi(&self) -> GrassmannNumber {
        self.theta_component(0, Complex64::new(1.0, 0.0))
    }

    pub fn psibar(&self) -> GrassmannNumber {
        self.theta_component(1 << THETA1, Complex64::new(1.0, 0.0))
    }

    /// The `θ₂` coefficient divided by `i`.
    pub fn psi(&self) -> GrassmannNumber {
        self.theta_component(1 << THETA2, -I)
    }

    /// The auxiliary `θ₁θ₂` coefficient.
    pub fn aux(&self) -> GrassmannNumber {
        self.theta_component(THETA_MASK, Complex64::new(1.0, 0.0))
    }

    pub fn components(&self) -> Components {
        Components {
            phi: self.phi(),
            psibar: self.psibar(),
            psi: self.psi(),
        }
    }

    fn theta_component(&self, theta: usize, factor: Complex64) -> GrassmannNumber {
        let mut out = self.0.zeros_like();
        for (mask, c) in self.0.terms() {
            if mask & THETA_MASK == theta {
                out.set_coeff(mask & !THETA_MASK, c.scale(factor));
            }
        }
        out
    }
}

/// Builds `φ + θ₁ψ̄ + iθ₂ψ − θ₁θ₂·2i sinh φ`.
pub fn assemble(phi: &GrassmannNumber, psibar: &GrassmannNumber, psi: &GrassmannNumber) -> Result<Superfield> {
    let n = phi.n_gen();
    for other in [psibar, psi] {
        if other.n_gen() != n {
            return Err(Error::GeneratorMismatch {
                left: n,
                right: other.n_gen(),
            });
        }
    }
    if n < 2 {
        return Err(Error::GeneratorIndex { index: THETA2, n_gen: n });
    }
    phi.require(Parity::Even)?;
    psibar.require(Parity::Odd)?;
    psi.require(Parity::Odd)?;
    for part in [phi, psibar, psi] {
        if part.terms().any(|(m, _)| m & THETA_MASK != 0) {
            return Err(Error::InvalidParams("component fields must not contain θ".into()));
        }
    }
    let aux = phi.sinh()?.scale(Complex64::new(0.0, -2.0));
    let mut out = phi.clone();
    for (mask, c) in psibar.terms() {
        out.set_coeff(mask | (1 << THETA1), *c);
    }
    for (mask, c) in psi.terms() {
        out.set_coeff(mask | (1 << THETA2), c.scale(I));
    }
    for (mask, c) in aux.terms() {
        out.set_coeff(mask | THETA_MASK, *c);
    }
    Ok(Superfield(out))
}

pub fn assemble_components(c: &Components) -> Result<Superfield> {
    assemble(&c.phi, &c.psibar, &c.psi)
}

fn superderiv(g: &GrassmannNumber, theta: usize, var: char) -> Result<GrassmannNumber> {
    let bit = 1usize << theta;
    let mut out = g.deriv(theta)?;
    for (mask, c) in g.terms() {
        if mask & bit != 0 {
            continue;
        }
        let available = if var == 'x' { c.has_dx() } else { c.has_dt() };
        if !available {
            return Err(Error::OrderExhausted { var });
        }
        let shifted = if var == 'x' { c.shift_x() } else { c.shift_t() };
        // θ·m reordered into ascending form
        let negative = (mask & (bit - 1)).count_ones() % 2 == 1;
        let target = mask | bit;
        let prev = out.coeff(target);
        out.set_coeff(target, if negative { prev - shifted } else { prev + shifted });
    }
    Ok(out)
}

/// `D_x G = ∂_θ₁ G + θ₁ ∂_x G`.
///
/// Every coefficient moved by `θ₁∂_x` spends its x-derivative; applying
/// `D_x` again only succeeds where `θ₁·θ₁ = 0` makes the missing `∂x²`
/// irrelevant (so `D_x² = ∂_x` works, a third application does not).
pub fn superderiv_x(g: &GrassmannNumber) -> Result<GrassmannNumber> {
    superderiv(g, THETA1, 'x')
}

/// `D_t G = ∂_θ₂ G + θ₂ ∂_t G`.
pub fn superderiv_t(g: &GrassmannNumber) -> Result<GrassmannNumber> {
    superderiv(g, THETA2, 't')
}

/// `D_xD_tΦ − 2i sinh Φ` at a single point.
pub fn eom_residual_value(phi: &Superfield) -> Result<GrassmannNumber> {
    let lhs = superderiv_x(&superderiv_t(phi.as_grassmann())?)?;
    let rhs = phi.as_grassmann().sinh()?.scale(Complex64::new(0.0, 2.0));
    lhs.try_sub(&rhs)
}

/// A superfield over spacetime. Evaluation returns the value at `(x, t)`
/// with exact `∂x`, `∂t`, `∂x∂t` in every coefficient's jet.
pub trait FieldFunction: Send + Sync {
    fn n_gen(&self) -> usize;

    fn eval(&self, x: f64, t: f64) -> Result<Superfield>;

    /// Distance-like measure to the nearest singular set at `(x, t)`; zero
    /// on it. Fields without singularities report infinity.
    fn singular_distance(&self, _x: f64, _t: f64) -> f64 {
        f64::INFINITY
    }

    fn components(&self, x: f64, t: f64) -> Result<Components> {
        Ok(self.eval(x, t)?.components())
    }
}

impl<F: FieldFunction + ?Sized> FieldFunction for std::sync::Arc<F> {
    fn n_gen(&self) -> usize {
        (**self).n_gen()
    }
    fn eval(&self, x: f64, t: f64) -> Result<Superfield> {
        (**self).eval(x, t)
    }
    fn singular_distance(&self, x: f64, t: f64) -> f64 {
        (**self).singular_distance(x, t)
    }
    fn components(&self, x: f64, t: f64) -> Result<Components> {
        (**self).components(x, t)
    }
}

pub fn d_x(field: &dyn FieldFunction, x: f64, t: f64) -> Result<GrassmannNumber> {
    superderiv_x(field.eval(x, t)?.as_grassmann())
}

pub fn d_t(field: &dyn FieldFunction, x: f64, t: f64) -> Result<GrassmannNumber> {
    superderiv_t(field.eval(x, t)?.as_grassmann())
}

pub fn eom_residual(field: &dyn FieldFunction, x: f64, t: f64) -> Result<GrassmannNumber> {
    eom_residual_value(&field.eval(x, t)?).map_err(|e| e.at_point(x, t))
}

/// The zero solution.
#[derive(Debug, Clone, Copy)]
pub struct Vacuum {
    pub n_gen: usize,
}

impl FieldFunction for Vacuum {
    fn n_gen(&self) -> usize {
        self.n_gen
    }

    fn eval(&self, _x: f64, _t: f64) -> Result<Superfield> {
        Ok(Superfield(GrassmannNumber::zero(self.n_gen)?))
    }
}

/// Adapts a closure producing component fields into a [`FieldFunction`].
pub struct ComponentFn<F> {
    n_gen: usize,
    f: F,
}

impl<F> ComponentFn<F>
where
    F: Fn(f64, f64) -> Result<Components> + Send + Sync,
{
    pub fn new(n_gen: usize, f: F) -> Self {
        ComponentFn { n_gen, f }
    }
}

impl<F> FieldFunction for ComponentFn<F>
where
    F: Fn(f64, f64) -> Result<Components> + Send + Sync,
{
    fn n_gen(&self) -> usize {
        self.n_gen
    }

    fn eval(&self, x: f64, t: f64) -> Result<Superfield> {
        assemble_components(&(self.f)(x, t)?)
    }
}
