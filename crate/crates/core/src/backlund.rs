//! Bäcklund transformations between superfield solutions and the algebraic
//! data of their permutability (Bianchi) diagram.
//!
//! A transformation with spectral parameter `β` relates `Φ₀` and `Φ₁`
//! through an odd auxiliary superfield `f₀₁`:
//!
//! ```text
//! D_x(Φ₀ − Φ₁) = −(4i/β) f₀₁ cosh((Φ₀+Φ₁)/2)     D_x f₀₁ = (2i/β) sinh((Φ₀+Φ₁)/2)
//! D_t(Φ₀ + Φ₁) =   2β   f₀₁ cosh((Φ₀−Φ₁)/2)      D_t f₀₁ =    β   sinh((Φ₀−Φ₁)/2)
//! ```
//!
//! Parameters are usually given as `σ = −2/β²`; `β` is always the principal
//! square root of `−2/σ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannNumber, Parity, THETA1, THETA2};
use crate::solitons::OneSoliton;
use crate::superfield::{superderiv_t, superderiv_x, Superfield};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Principal `√(−2/σ)`.
pub fn beta_from_sigma(sigma: f64) -> Result<Complex64> {
    if sigma == 0.0 || !sigma.is_finite() {
        return Err(Error::InvalidParams(format!("sigma must be finite and nonzero, got {sigma}")));
    }
    Ok(c(-2.0 / sigma).sqrt())
}

/// Two spectral parameters and the constants of their superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    pub sigma1: Complex64,
    pub sigma2: Complex64,
    pub beta1: Complex64,
    pub beta2: Complex64,
    /// `(σ₁+σ₂)/(σ₁−σ₂) = −(β₁²+β₂²)/(β₁²−β₂²)`
    pub delta: Complex64,
    /// `2β₁β₂/(β₁²−β₂²)`, sign fixed by the principal-branch `β`s
    pub delta1: Complex64,
}

impl SpectralPair {
    pub fn new(sigma1: f64, sigma2: f64) -> Result<Self> {
        let beta1 = beta_from_sigma(sigma1)?;
        let beta2 = beta_from_sigma(sigma2)?;
        if sigma1 == sigma2 {
            return Err(Error::Degenerate(format!("equal spectral parameters sigma = {sigma1}")));
        }
        let (b1s, b2s) = (beta1 * beta1, beta2 * beta2);
        Ok(SpectralPair {
            sigma1: c(sigma1),
            sigma2: c(sigma2),
            beta1,
            beta2,
            delta: c((sigma1 + sigma2) / (sigma1 - sigma2)),
            delta1: 2.0 * beta1 * beta2 / (b1s - b2s),
        })
    }

    /// Builds the pair from `β`s directly; `σ_k = −2/β_k²`.
    pub fn from_betas(beta1: Complex64, beta2: Complex64) -> Result<Self> {
        let (b1s, b2s) = (beta1 * beta1, beta2 * beta2);
        if b1s == Complex64::ZERO || b2s == Complex64::ZERO {
            return Err(Error::InvalidParams("beta must be nonzero".into()));
        }
        if (b1s - b2s).norm() <= 1e-14 * b1s.norm().max(b2s.norm()) {
            return Err(Error::Degenerate(format!(
                "beta1² = beta2² makes the permutability denominators vanish ({beta1}, {beta2})"
            )));
        }
        Ok(SpectralPair {
            sigma1: -2.0 / b1s,
            sigma2: -2.0 / b2s,
            beta1,
            beta2,
            delta: -(b1s + b2s) / (b1s - b2s),
            delta1: 2.0 * beta1 * beta2 / (b1s - b2s),
        })
    }

    /// `δ² − δ₁²`, identically one.
    pub fn identity_defect(&self) -> Complex64 {
        self.delta * self.delta - self.delta1 * self.delta1 - 1.0
    }

    pub fn swapped(&self) -> Self {
        SpectralPair {
            sigma1: self.sigma2,
            sigma2: self.sigma1,
            beta1: self.beta2,
            beta2: self.beta1,
            delta: -self.delta,
            delta1: -self.delta1,
        }
    }
}

/// Value of an odd auxiliary superfield `f = f₁ + θ₁b₁ + θ₂b₂ + θ₁θ₂f₂` at a
/// point.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxFermion(GrassmannNumber);

impl AuxFermion {
    pub fn new(g: GrassmannNumber) -> Result<Self> {
        g.require(Parity::Odd)?;
        Ok(AuxFermion(g))
    }

    pub fn zero(n_gen: usize) -> Result<Self> {
        Ok(AuxFermion(GrassmannNumber::zero(n_gen)?))
    }

    pub fn as_grassmann(&self) -> &GrassmannNumber {
        &self.0
    }

    pub fn into_grassmann(self) -> GrassmannNumber {
        self.0
    }

    /// Builds `f₁ + θ₁b₁ + θ₂b₂ + θ₁θ₂f₂` from θ-free parts.
    pub fn from_parts(
        f1: &GrassmannNumber,
        b1: &GrassmannNumber,
        b2: &GrassmannNumber,
        f2: &GrassmannNumber,
    ) -> Result<Self> {
        let mut g = f1.clone();
        for (theta, part) in [(1 << THETA1, b1), (1 << THETA2, b2), ((1 << THETA1) | (1 << THETA2), f2)] {
            for (mask, v) in part.terms() {
                g.set_coeff(mask | theta, *v);
            }
        }
        AuxFermion::new(g)
    }
}

/// An auxiliary fermion as a function of spacetime.
pub trait AuxField: Send + Sync {
    fn n_gen(&self) -> usize;
    fn eval(&self, x: f64, t: f64) -> Result<AuxFermion>;
}

/// Auxiliary fermion linking the vacuum to a one-soliton.
///
/// `f₁ = ψ̄/(2√(2σ) cosh(φ/2))`; the θ-components follow from requiring
/// `D_x f` and `D_t f` to match the transformation:
/// `b₁ = (2i/β) sinh(φ/2)`, `b₂ = −β sinh(φ/2)`, `f₂ = (β/2) cosh(φ/2) ψ̄`.
pub fn vacuum_aux(sol: &OneSoliton, x: f64, t: f64) -> Result<AuxFermion> {
    let sigma = sol.params().sigma;
    let beta = beta_from_sigma(sigma)?;
    let comps = sol.components_at(x, t)?;
    let half = comps.phi.scale_real(0.5);
    let ch = half.cosh()?;
    let sh = half.sinh()?;
    let norm = 2.0 * c(2.0 * sigma).sqrt();
    let f1 = comps
        .psibar
        .try_mul(&ch.recip().map_err(|e| e.at_point(x, t))?)?
        .scale(norm.inv());
    let b1 = sh.scale(2.0 * I / beta);
    let b2 = sh.scale(-beta);
    let f2 = ch.try_mul(&comps.psibar)?.scale(beta / 2.0);
    AuxFermion::from_parts(&f1, &b1, &b2, &f2)
}

/// [`vacuum_aux`] as a spacetime function.
#[derive(Debug, Clone)]
pub struct VacuumAux(pub OneSoliton);

impl AuxField for VacuumAux {
    fn n_gen(&self) -> usize {
        self.0.n_gen()
    }

    fn eval(&self, x: f64, t: f64) -> Result<AuxFermion> {
        vacuum_aux(&self.0, x, t)
    }
}

/// Residuals of the four first-order transformation equations.
#[derive(Debug, Clone, PartialEq)]
pub struct BtResiduals {
    /// `D_x(Φ₀−Φ₁) + (4i/β) f cosh((Φ₀+Φ₁)/2)`
    pub field_x: GrassmannNumber,
    /// `D_t(Φ₀+Φ₁) − 2β f cosh((Φ₀−Φ₁)/2)`
    pub field_t: GrassmannNumber,
    /// `D_x f − (2i/β) sinh((Φ₀+Φ₁)/2)`
    pub aux_x: GrassmannNumber,
    /// `D_t f − β sinh((Φ₀−Φ₁)/2)`
    pub aux_t: GrassmannNumber,
}

impl BtResiduals {
    pub fn max_abs(&self) -> f64 {
        self.all().iter().map(|g| g.max_abs()).fold(0.0, f64::max)
    }

    pub fn all(&self) -> [&GrassmannNumber; 4] {
        [&self.field_x, &self.field_t, &self.aux_x, &self.aux_t]
    }
}

pub fn bt_residuals_value(
    phi0: &Superfield,
    phi1: &Superfield,
    f: &AuxFermion,
    beta: Complex64,
) -> Result<BtResiduals> {
    if beta == Complex64::ZERO {
        return Err(Error::InvalidParams("beta must be nonzero".into()));
    }
    let (p0, p1, f) = (phi0.as_grassmann(), phi1.as_grassmann(), f.as_grassmann());
    let half_sum = p0.try_add(p1)?.scale_real(0.5);
    let half_diff = p0.try_sub(p1)?.scale_real(0.5);

    let field_x = superderiv_x(&p0.try_sub(p1)?)?
        .try_add(&f.try_mul(&half_sum.cosh()?)?.scale(4.0 * I / beta))?;
    let field_t = superderiv_t(&p0.try_add(p1)?)?
        .try_sub(&f.try_mul(&half_diff.cosh()?)?.scale(2.0 * beta))?;
    let aux_x = superderiv_x(f)?.try_sub(&half_sum.sinh()?.scale(2.0 * I / beta))?;
    let aux_t = superderiv_t(f)?.try_sub(&half_diff.sinh()?.scale(beta))?;
    Ok(BtResiduals {
        field_x,
        field_t,
        aux_x,
        aux_t,
    })
}

pub fn bt_residuals(
    phi0: &dyn crate::superfield::FieldFunction,
    phi1: &dyn crate::superfield::FieldFunction,
    f01: &dyn AuxField,
    beta: Complex64,
    x: f64,
    t: f64,
) -> Result<BtResiduals> {
    let r = bt_residuals_value(&phi0.eval(x, t)?, &phi1.eval(x, t)?, &f01.eval(x, t)?, beta);
    r.map_err(|e| e.at_point(x, t))
}

/// Grassmann-valued coefficients of the superposition `Φ₃` of `Φ₁`, `Φ₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionCoeffs {
    pub delta: Complex64,
    pub delta1: Complex64,
    /// `δ₁ / √(1 − δ² tanh²((Φ₁−Φ₂)/2))`
    pub a: GrassmannNumber,
    /// `δ sech((Φ₁−Φ₂)/2) / √(1 − δ² tanh²((Φ₁−Φ₂)/2))`
    pub b: GrassmannNumber,
    /// coefficient of `f₀₁f₀₂` in `Φ₃ − Φ₀ − Γ`
    pub lambda: GrassmannNumber,
    /// `δ₁ sech((Φ₁−Φ₂)/2)`
    pub omega: GrassmannNumber,
    /// `2 arctanh(δ tanh((Φ₁−Φ₂)/2))`
    pub gamma: GrassmannNumber,
}

pub fn superposition_coeffs(
    phi1: &GrassmannNumber,
    phi2: &GrassmannNumber,
    pair: &SpectralPair,
) -> Result<SuperpositionCoeffs> {
    let xi = phi1.try_sub(phi2)?;
    let half = xi.scale_real(0.5);
    let th = half.tanh()?;
    let sech = half.sech()?;
    let gamma = th.scale(pair.delta).arctanh()?.scale_real(2.0);
    let root = (&xi.scalar_like(1.0) - &(&th * &th).scale(pair.delta * pair.delta)).sqrt()?;
    let inv_root = root.recip()?;
    let a = inv_root.scale(pair.delta1);
    let b = (&sech * &inv_root).scale(pair.delta);
    let omega = sech.scale(pair.delta1);

    let (b1, b2) = (pair.beta1, pair.beta2);
    let (b1s, b2s) = (b1 * b1, b2 * b2);
    let denom = &xi.scalar_like(b1s * b1s + b2s * b2s) - &xi.cosh()?.scale(2.0 * b1s * b2s);
    let lambda = half
        .sinh()?
        .try_mul(&denom.recip()?)?
        .scale(-4.0 * b1 * b2 * (b1s + b2s));
    Ok(SuperpositionCoeffs {
        delta: pair.delta,
        delta1: pair.delta1,
        a,
        b,
        lambda,
        omega,
        gamma,
    })
}

/// `f₁₃ = −a f₀₁ − b f₀₂`, `f₂₃ = b f₀₁ + a f₀₂`.
pub fn descend_aux(
    f01: &AuxFermion,
    f02: &AuxFermion,
    coeffs: &SuperpositionCoeffs,
) -> Result<(AuxFermion, AuxFermion)> {
    coeffs.a.require(Parity::Even)?;
    coeffs.b.require(Parity::Even)?;
    let (f01, f02) = (f01.as_grassmann(), f02.as_grassmann());
    let af01 = coeffs.a.try_mul(f01)?;
    let bf02 = coeffs.b.try_mul(f02)?;
    let bf01 = coeffs.b.try_mul(f01)?;
    let af02 = coeffs.a.try_mul(f02)?;
    let f13 = -(af01.try_add(&bf02)?);
    let f23 = bf01.try_add(&af02)?;
    Ok((AuxFermion::new(f13)?, AuxFermion::new(f23)?))
}

/// The lattice fields `Φ₀…Φ₃` together with the four auxiliary fermions of
/// its edges.
pub struct LatticeValues<'a> {
    pub phi: [&'a Superfield; 4],
    pub f01: &'a AuxFermion,
    pub f13: &'a AuxFermion,
    pub f02: &'a AuxFermion,
    pub f23: &'a AuxFermion,
}

fn half_cosh(a: &GrassmannNumber, b: &GrassmannNumber, sum: bool) -> Result<GrassmannNumber> {
    let s = if sum { a.try_add(b)? } else { a.try_sub(b)? };
    s.scale_real(0.5).cosh()
}

/// Residuals of the two relations obtained by going around the square both
/// ways, in x and in t.
pub fn permutability_residuals(
    v: &LatticeValues<'_>,
    beta1: Complex64,
    beta2: Complex64,
) -> Result<(GrassmannNumber, GrassmannNumber)> {
    let [p0, p1, p2, p3] = v.phi.map(Superfield::as_grassmann);
    let (f01, f13, f02, f23) = (
        v.f01.as_grassmann(),
        v.f13.as_grassmann(),
        v.f02.as_grassmann(),
        v.f23.as_grassmann(),
    );
    let term = |f: &GrassmannNumber, a, b, sum, w: Complex64| -> Result<GrassmannNumber> {
        Ok(f.try_mul(&half_cosh(a, b, sum)?)?.scale(w))
    };
    let rx = term(f01, p0, p1, true, beta1.inv())?
        + term(f13, p1, p3, true, beta2.inv())?
        - term(f02, p0, p2, true, beta2.inv())?
        - term(f23, p2, p3, true, beta1.inv())?;
    let rt = term(f01, p0, p1, false, beta1)? - term(f13, p1, p3, false, beta2)?
        - term(f02, p0, p2, false, beta2)?
        + term(f23, p2, p3, false, beta1)?;
    Ok((rx, rt))
}

/// The four `Λ` obtained by solving the two permutability relations for
/// `f₁₃`, `f₂₃`, compared against `(−a, −b, b, a)`.
#[derive(Debug, Clone)]
pub struct LambdaCheck {
    /// `Λ₁₃⁽¹⁾ + a`, `Λ₁₃⁽²⁾ + b`, `Λ₂₃⁽¹⁾ − b`, `Λ₂₃⁽²⁾ − a`
    pub differences: [GrassmannNumber; 4],
    /// Distance of each difference from the ideal generated by `f₀₁f₀₂`.
    pub ideal_residuals: [f64; 4],
}

impl LambdaCheck {
    pub fn max_ideal_residual(&self) -> f64 {
        self.ideal_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Body magnitude below which the `Λ` denominator counts as vanishing.
const LAMBDA_DENOM_EPS: f64 = 1e-12;

pub fn lambda_coeff_check(
    phi: [&Superfield; 4],
    beta1: Complex64,
    beta2: Complex64,
    f01: &AuxFermion,
    f02: &AuxFermion,
) -> Result<LambdaCheck> {
    let pair = SpectralPair::from_betas(beta1, beta2)?;
    let [p0, p1, p2, p3] = phi.map(Superfield::as_grassmann);
    let ch = |a, b, sum| half_cosh(a, b, sum);
    let (c01p, c01m) = (ch(p0, p1, true)?, ch(p0, p1, false)?);
    let (c02p, c02m) = (ch(p0, p2, true)?, ch(p0, p2, false)?);
    let (c13p, c13m) = (ch(p1, p3, true)?, ch(p1, p3, false)?);
    let (c23p, c23m) = (ch(p2, p3, true)?, ch(p2, p3, false)?);
    let (b1s, b2s) = (beta1 * beta1, beta2 * beta2);

    let denom = (&c23m * &c13p).scale(b1s) - (&c13m * &c23p).scale(b2s);
    if denom.body().v.norm() < LAMBDA_DENOM_EPS {
        return Err(Error::Degenerate("permutability denominator vanishes".into()));
    }
    let inv = denom.recip()?;
    let l13_1 = (&(&c01p * &c23m) + &(&c01m * &c23p)).scale(-beta1 * beta2) * inv.clone();
    let l13_2 = (&(&c02p * &c23m).scale(b1s) + &(&c02m * &c23p).scale(b2s)) * inv.clone();
    let l23_1 = (&(&c01m * &c13p).scale(b1s) + &(&c01p * &c13m).scale(b2s)).scale(c(-1.0)) * inv.clone();
    let l23_2 = (&(&c02p * &c13m) + &(&c02m * &c13p)).scale(beta1 * beta2) * inv;

    let coeffs = superposition_coeffs(p1, p2, &pair)?;
    let (a, b) = (&coeffs.a, &coeffs.b);
    let differences = [&l13_1 + a, &l13_2 + b, &l23_1 - b, &l23_2 - a];
    let product = f01.as_grassmann().try_mul(f02.as_grassmann())?;
    let mut ideal_residuals = [0.0; 4];
    for (r, d) in ideal_residuals.iter_mut().zip(&differences) {
        *r = ideal_residual(d, &product);
    }
    Ok(LambdaCheck {
        differences,
        ideal_residuals,
    })
}

/// `min_c ‖d − c·p‖` over even `c`, measured as the largest leftover
/// coefficient after a least-squares fit.
pub fn ideal_residual(d: &GrassmannNumber, p: &GrassmannNumber) -> f64 {
    let size = d.coeffs().len();
    let evens: Vec<usize> = (0..size).filter(|m| m.count_ones() % 2 == 0).collect();
    let columns: Vec<GrassmannNumber> = evens
        .iter()
        .map(|&m| {
            let mono = GrassmannNumber::monomial(d.n_gen(), m, 1.0).expect("mask within range");
            &mono * p
        })
        .collect();
    let a = DMatrix::from_fn(size, evens.len(), |r, k| columns[k].coeff(r).v);
    let rhs = DVector::from_fn(size, |r, _| d.coeff(r).v);
    let svd = a.clone().svd(true, true);
    let cutoff = svd.singular_values.max() * 1e-12;
    let fit = match svd.solve(&rhs, cutoff.max(f64::MIN_POSITIVE)) {
        Ok(coef) => &a * coef,
        Err(_) => DVector::zeros(size),
    };
    (rhs - fit).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
