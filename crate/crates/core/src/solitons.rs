//! Exact solutions: the one-soliton, two-soliton superpositions in component
//! and superfield form, and N-soliton towers built on the Bianchi lattice.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::Func;
use crate::backlund::{AuxField, SpectralPair};
use crate::error::{Error, Result};
use crate::grassmann::{GrassmannNumber, MAX_GENERATORS, THETA2};
use crate::jet::{jet_apply, Jet};
use crate::sampling::{sample_points, Window};
use crate::superfield::{assemble_components, eom_residual, Components, FieldFunction, Superfield};

/// Minimum distance from `E = ±1` at which a one-soliton is evaluated.
const CURVE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    pub sigma: f64,
    pub b: f64,
    pub a: f64,
    /// Index of the odd generator `ε_k` carrying the fermion amplitude.
    pub gen: usize,
}

impl SolitonParams {
    pub fn new(sigma: f64, b: f64, a: f64, gen: usize) -> Result<Self> {
        let p = SolitonParams { sigma, b, a, gen };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigma == 0.0 || !self.sigma.is_finite() {
            return Err(Error::InvalidParams(format!("sigma must be finite and nonzero, got {}", self.sigma)));
        }
        if !self.b.is_finite() || !self.a.is_finite() {
            return Err(Error::InvalidParams("amplitudes must be finite".into()));
        }
        if self.gen <= THETA2 {
            return Err(Error::InvalidParams(format!(
                "generator {} is reserved for θ",
                self.gen
            )));
        }
        Ok(())
    }
}

/// `φ = ln((1+E)/(1−E))`, `E = b·exp(2σx + 2t/σ)`,
/// `ψ̄ = ε a e^{2σx+2t/σ} (1/(1+E) + 1/(1−E))`, `ψ = ψ̄/σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSoliton {
    params: SolitonParams,
    n_gen: usize,
}

impl OneSoliton {
    pub fn new(params: SolitonParams, n_gen: usize) -> Result<Self> {
        params.validate()?;
        if n_gen > MAX_GENERATORS {
            return Err(Error::TooManyGenerators {
                got: n_gen,
                max: MAX_GENERATORS,
            });
        }
        if params.gen >= n_gen {
            return Err(Error::GeneratorIndex {
                index: params.gen,
                n_gen,
            });
        }
        Ok(OneSoliton { params, n_gen })
    }

    pub fn params(&self) -> &SolitonParams {
        &self.params
    }

    pub fn n_gen(&self) -> usize {
        self.n_gen
    }

    /// `exp(2σx + 2t/σ)` with its exact derivatives.
    fn growth(&self, x: f64, t: f64) -> Jet {
        let s = self.params.sigma;
        let g = (2.0 * s * x + 2.0 * t / s).exp();
        Jet::real(g, 2.0 * s * g, 2.0 * g / s, 4.0 * g)
    }

    /// `E` at `(x, t)` as a plain number.
    pub fn e_value(&self, x: f64, t: f64) -> f64 {
        let s = self.params.sigma;
        self.params.b * (2.0 * s * x + 2.0 * t / s).exp()
    }

    pub fn phi_body(&self, x: f64, t: f64) -> Result<Complex64> {
        let e = self.e_value(x, t);
        self.check_curve(e, x, t)?;
        Ok(Complex64::new(((1.0 + e) / (1.0 - e)).abs().ln(), if e.abs() > 1.0 { std::f64::consts::PI } else { 0.0 }))
    }

    fn check_curve(&self, e: f64, x: f64, t: f64) -> Result<()> {
        if (1.0 - e).abs() < CURVE_EPS || (1.0 + e).abs() < CURVE_EPS {
            return Err(Error::SingularPoint {
                x,
                t,
                reason: format!("one-soliton E = {e} at ±1"),
            });
        }
        Ok(())
    }

    pub fn components_at(&self, x: f64, t: f64) -> Result<Components> {
        let n = self.n_gen;
        let g = self.growth(x, t);
        let e = g.scale(self.params.b.into());
        self.check_curve(e.v.re, x, t)?;
        let one = Jet::ONE;
        let inv_minus = (one - e).recip()?;
        let inv_plus = (one + e).recip()?;
        let mut ratio = (one + e) * inv_minus;
        // beyond |E| = 1 the log takes the +iπ branch
        ratio.v.im = 0.0;
        let phi = jet_apply(&Func::Log, &ratio).map_err(|err| err.at_point(x, t))?;
        let pb = g.scale(self.params.a.into()) * (inv_plus + inv_minus);

        let mut out = Components::vacuum(n)?;
        out.phi.set_coeff(0, phi);
        out.psibar.set_coeff(1 << self.params.gen, pb);
        out.psi.set_coeff(1 << self.params.gen, pb.scale((1.0 / self.params.sigma).into()));
        Ok(out)
    }
}

impl FieldFunction for OneSoliton {
    fn n_gen(&self) -> usize {
        self.n_gen
    }

    fn eval(&self, x: f64, t: f64) -> Result<Superfield> {
        assemble_components(&self.components_at(x, t)?).map_err(|e| e.at_point(x, t))
    }

    fn singular_distance(&self, x: f64, t: f64) -> f64 {
        let e = self.e_value(x, t);
        (1.0 - e).abs().min((1.0 + e).abs())
    }

    fn components(&self, x: f64, t: f64) -> Result<Components> {
        self.components_at(x, t)
    }
}

fn principal_sqrt(z: Complex64) -> Complex64 {
    // keep a signed zero from flipping the branch of a negative real
    Complex64::new(z.re, if z.im == 0.0 { 0.0 } else { z.im }).sqrt()
}

/// Component superposition of `Φ₁`, `Φ₂` over the common parent `Φ₀`.
///
/// With `h = (φ₁−φ₂)/2`:
///
/// ```text
/// φ₃  = φ₀ + 2 arctanh(δ tanh h) − Δ₂/(8√σ₁√σ₂) · [ψ̄₀(ψ̄₁−ψ̄₂) + ψ̄₁ψ̄₂] / [cosh((φ₀+φ₁)/2) cosh((φ₀+φ₂)/2)]
/// ψ̄₃ = ψ̄₀ + Δ₁(ψ̄₁−ψ̄₂) − Δ₂/2 · [√σ₂/√σ₁ · sinh((φ₀+φ₂)/2)/cosh((φ₀+φ₁)/2) (ψ̄₀−ψ̄₁)
///                                 − √σ₁/√σ₂ · sinh((φ₀+φ₁)/2)/cosh((φ₀+φ₂)/2) (ψ̄₀−ψ̄₂)]
/// ψ₃  = ψ₀ + Δ₁(ψ₁−ψ₂) − Δ₂/2 · [√σ₂/√σ₁ · sinh((φ₀−φ₁)/2)/cosh((φ₀−φ₂)/2) (ψ₀+ψ₂)
///                                 − √σ₁/√σ₂ · sinh((φ₀−φ₂)/2)/cosh((φ₀−φ₁)/2) (ψ₀+ψ₁)]
/// Δ₁ = δ/(cosh²h − δ² sinh²h),   Δ₂ = A sinh h/(B − sinh²h),
/// A = (σ₁+σ₂)/(√σ₁√σ₂),           B = (σ₁−σ₂)²/(4σ₁σ₂)
/// ```
pub fn superpose_component_values(
    c0: &Components,
    c1: &Components,
    c2: &Components,
    pair: &SpectralPair,
) -> Result<Components> {
    let (s1, s2) = (pair.sigma1, pair.sigma2);
    let (r1, r2) = (principal_sqrt(s1), principal_sqrt(s2));
    let a_const = (s1 + s2) / (r1 * r2);
    let b_const = (s1 - s2) * (s1 - s2) / (4.0 * s1 * s2);
    let delta = pair.delta;

    let (p0, p1, p2) = (&c0.phi, &c1.phi, &c2.phi);
    let h = p1.try_sub(p2)?.scale_real(0.5);
    let (sh, ch) = (h.sinh()?, h.cosh()?);
    let gamma = h.tanh()?.scale(delta).arctanh()?.scale_real(2.0);
    let sh2 = &sh * &sh;
    let delta_1 = (&(&ch * &ch) - &sh2.scale(delta * delta)).recip()?.scale(delta);
    let delta_2 = sh.try_mul(&(&h.scalar_like(b_const) - &sh2).recip()?)?.scale(a_const);

    let half = |a: &GrassmannNumber, b: &GrassmannNumber, sum: bool| -> Result<GrassmannNumber> {
        Ok(if sum { a.try_add(b)? } else { a.try_sub(b)? }.scale_real(0.5))
    };
    let (u01, u02) = (half(p0, p1, true)?, half(p0, p2, true)?);
    let (v01, v02) = (half(p0, p1, false)?, half(p0, p2, false)?);
    let (cu01, cu02) = (u01.cosh()?, u02.cosh()?);
    let (cv01, cv02) = (v01.cosh()?, v02.cosh()?);

    let (pb0, pb1, pb2) = (&c0.psibar, &c1.psibar, &c2.psibar);
    let bilinear = &(pb0 * &(pb1 - pb2)) + &(pb1 * pb2);
    let phi3 = &(p0 + &gamma)
        - &(&delta_2 * &bilinear)
            .try_mul(&(&cu01 * &cu02).recip()?)?
            .scale((8.0 * r1 * r2).inv());

    let ratio21 = r2 / r1;
    let ratio12 = r1 / r2;
    let bracket_bar = &(&u02.sinh()?.try_mul(&cu01.recip()?)? * &(pb0 - pb1)).scale(ratio21)
        - &(&u01.sinh()?.try_mul(&cu02.recip()?)? * &(pb0 - pb2)).scale(ratio12);
    let psibar3 = &(pb0 + &(&delta_1 * &(pb1 - pb2))) - &(&delta_2 * &bracket_bar).scale_real(0.5);

    let (q0, q1, q2) = (&c0.psi, &c1.psi, &c2.psi);
    let bracket = &(&v01.sinh()?.try_mul(&cv02.recip()?)? * &(q0 + q2)).scale(ratio21)
        - &(&v02.sinh()?.try_mul(&cv01.recip()?)? * &(q0 + q1)).scale(ratio12);
    let psi3 = &(q0 + &(&delta_1 * &(q1 - q2))) - &(&delta_2 * &bracket).scale_real(0.5);

    Ok(Components {
        phi: phi3,
        psibar: psibar3,
        psi: psi3,
    })
}

/// Distance-like margin of a component superposition from its singular set,
/// computed from the bodies `φ₀, φ₁, φ₂` only.
pub fn superposition_margin(p0: Complex64, p1: Complex64, p2: Complex64, pair: &SpectralPair) -> f64 {
    let h = (p1 - p2) / 2.0;
    let z = pair.delta * h.tanh();
    let on_cut = z.im.abs() <= 1e-12 * z.norm().max(1.0) && z.re.abs() >= 1.0;
    let mut m = if on_cut { 0.0 } else { (1.0 - z).norm().min((1.0 + z).norm()) };
    let (s1, s2) = (pair.sigma1, pair.sigma2);
    let b_const = (s1 - s2) * (s1 - s2) / (4.0 * s1 * s2);
    let sh = h.sinh();
    m = m.min((b_const - sh * sh).norm());
    for d in [(p0 + p1) / 2.0, (p0 + p2) / 2.0, (p0 - p1) / 2.0, (p0 - p2) / 2.0] {
        m = m.min(d.cosh().norm());
    }
    if m.is_nan() {
        0.0
    } else {
        m
    }
}

/// [`superpose_component_values`] as a spacetime function.
pub struct ComponentSuperposition {
    pub phi0: Arc<dyn FieldFunction>,
    pub phi1: Arc<dyn FieldFunction>,
    pub phi2: Arc<dyn FieldFunction>,
    pub pair: SpectralPair,
}

impl ComponentSuperposition {
    pub fn new(
        phi0: Arc<dyn FieldFunction>,
        phi1: Arc<dyn FieldFunction>,
        phi2: Arc<dyn FieldFunction>,
        sigma1: f64,
        sigma2: f64,
    ) -> Result<Self> {
        let n = phi0.n_gen();
        for f in [&phi1, &phi2] {
            if f.n_gen() != n {
                return Err(Error::GeneratorMismatch {
                    left: n,
                    right: f.n_gen(),
                });
            }
        }
        Ok(ComponentSuperposition {
            phi0,
            phi1,
            phi2,
            pair: SpectralPair::new(sigma1, sigma2)?,
        })
    }
}

impl FieldFunction for ComponentSuperposition {
    fn n_gen(&self) -> usize {
        self.phi0.n_gen()
    }

    fn eval(&self, x: f64, t: f64) -> Result<Superfield> {
        assemble_components(&self.components(x, t)?).map_err(|e| e.at_point(x, t))
    }

    fn components(&self, x: f64, t: f64) -> Result<Components> {
        let c0 = self.phi0.components(x, t)?;
        let c1 = self.phi1.components(x, t)?;
        let c2 = self.phi2.components(x, t)?;
        superpose_component_values(&c0, &c1, &c2, &self.pair).map_err(|e| e.at_point(x, t))
    }

    fn singular_distance(&self, x: f64, t: f64) -> f64 {
        let mut m = [&self.phi0, &self.phi1, &self.phi2]
            .iter()
            .map(|f| f.singular_distance(x, t))
            .fold(f64::INFINITY, f64::min);
        let bodies: Result<Vec<Complex64>> = [&self.phi0, &self.phi1, &self.phi2]
            .iter()
            .map(|f| Ok(f.components(x, t)?.phi.body().v))
            .collect();
        match bodies {
            Ok(b) => m = m.min(superposition_margin(b[0], b[1], b[2], &self.pair)),
            Err(_) => m = 0.0,
        }
        m
    }
}

/// `Φ₃ = Φ₀ + 2 arctanh(δ tanh((Φ₁−Φ₂)/2) · exp(Ω f₀₁f₀₂))`, `Ω = δ₁ sech((Φ₁−Φ₂)/2)`.
pub fn superpose_superfield_value(
    phi0: &Superfield,
    phi1: &Superfield,
    phi2: &Superfield,
    f01: &GrassmannNumber,
    f02: &GrassmannNumber,
    pair: &SpectralPair,
) -> Result<Superfield> {
    let half = phi1.as_grassmann().try_sub(phi2.as_grassmann())?.scale_real(0.5);
    let omega = half.sech()?.scale(pair.delta1);
    let weight = omega.try_mul(&f01.try_mul(f02)?)?.exp()?;
    let arg = half.tanh()?.scale(pair.delta).try_mul(&weight)?;
    let phi3 = phi0.as_grassmann().try_add(&arg.arctanh()?.scale_real(2.0))?;
    Superfield::from_grassmann(phi3)
}

/// [`superpose_superfield_value`] as a spacetime function.
pub struct SuperfieldSuperposition {
    pub phi0: Arc<dyn FieldFunction>,
    pub phi1: Arc<dyn FieldFunction>,
    pub phi2: Arc<dyn FieldFunction>,
    pub f01: Arc<dyn AuxField>,
    pub f02: Arc<dyn AuxField>,
    pub pair: SpectralPair,
}

impl FieldFunction for SuperfieldSuperposition {
    fn n_gen(&self) -> usize {
        self.phi0.n_gen()
    }

    fn eval(&self, x: f64, t: f64) -> Result<Superfield> {
        let v = superpose_superfield_value(
            &self.phi0.eval(x, t)?,
            &self.phi1.eval(x, t)?,
            &self.phi2.eval(x, t)?,
            self.f01.eval(x, t)?.as_grassmann(),
            self.f02.eval(x, t)?.as_grassmann(),
            &self.pair,
        );
        v.map_err(|e| e.at_point(x, t))
    }

    fn singular_distance(&self, x: f64, t: f64) -> f64 {
        let m = [&self.phi0, &self.phi1, &self.phi2]
            .iter()
            .map(|f| f.singular_distance(x, t))
            .fold(f64::INFINITY, f64::min);
        let bodies: Result<Vec<Complex64>> = [&self.phi0, &self.phi1, &self.phi2]
            .iter()
            .map(|f| Ok(f.components(x, t)?.phi.body().v))
            .collect();
        match bodies {
            Ok(b) => m.min(superposition_margin(b[0], b[1], b[2], &self.pair)),
            Err(_) => 0.0,
        }
    }
}

/// Reparametrizes a two-soliton to the normalization with spectral
/// constants `γ₁`, `γ₂`:
/// `σ_k → γ_k`, `b₁ → (b₁/2)r`, `b₂ → −(b₂/2)r`, `a₁ → −γ₁r`, `a₂ → γ₂r`,
/// `r = (γ₁−γ₂)/(γ₁+γ₂)`.
pub fn rescale_pair(
    p1: &SolitonParams,
    p2: &SolitonParams,
    gamma1: f64,
    gamma2: f64,
) -> Result<(SolitonParams, SolitonParams)> {
    if gamma1 + gamma2 == 0.0 {
        return Err(Error::Degenerate("γ₁ + γ₂ = 0".into()));
    }
    let r = (gamma1 - gamma2) / (gamma1 + gamma2);
    Ok((
        SolitonParams::new(gamma1, p1.b / 2.0 * r, -gamma1 * r, p1.gen)?,
        SolitonParams::new(gamma2, -p2.b / 2.0 * r, gamma2 * r, p2.gen)?,
    ))
}

/// N-soliton built by iterating the component superposition.
///
/// With `P_m` the solution carrying the first `m` solitons and `N(m, k)`
/// the one carrying `P_m` plus soliton `k`:
/// `N(0, k)` is the one-soliton, `P_{m+1} = N(m, m)` and
/// `N(m, k) = sup(P_{m−1}, P_m, N(m−1, k); σ_{m−1}, σ_k)`.
#[derive(Debug, Clone)]
pub struct BianchiLattice {
    solitons: Vec<OneSoliton>,
    pairs: Vec<Vec<Option<SpectralPair>>>,
    n_gen: usize,
}

impl BianchiLattice {
    pub fn new(params: &[SolitonParams], n_gen: usize) -> Result<Self> {
        for (i, p) in params.iter().enumerate() {
            for q in &params[..i] {
                if p.sigma == q.sigma {
                    return Err(Error::Degenerate(format!("duplicate sigma {}", p.sigma)));
                }
                if p.gen == q.gen {
                    return Err(Error::InvalidParams(format!("generator {} used twice", p.gen)));
                }
            }
        }
        let solitons = params
            .iter()
            .map(|p| OneSoliton::new(*p, n_gen))
            .collect::<Result<Vec<_>>>()?;
        if n_gen > MAX_GENERATORS {
            return Err(Error::TooManyGenerators {
                got: n_gen,
                max: MAX_GENERATORS,
            });
        }
        let mut pairs = vec![vec![None; params.len()]; params.len()];
        for (i, p) in params.iter().enumerate() {
            for (j, q) in params.iter().enumerate() {
                if i != j {
                    pairs[i][j] = Some(SpectralPair::new(p.sigma, q.sigma)?);
                }
            }
        }
        Ok(BianchiLattice { solitons, pairs, n_gen })
    }

    /// Builds the lattice with generators `ε₁, ε₂, …` assigned in order and
    /// the smallest algebra holding them.
    pub fn from_amplitudes(sab: &[(f64, f64, f64)]) -> Result<Self> {
        let params = sab
            .iter()
            .enumerate()
            .map(|(k, &(s, b, a))| SolitonParams::new(s, b, a, crate::grassmann::epsilon(k + 1)))
            .collect::<Result<Vec<_>>>()?;
        BianchiLattice::new(&params, 2 + params.len())
    }

    pub fn len(&self) -> usize {
        self.solitons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solitons.is_empty()
    }

    pub fn solitons(&self) -> &[OneSoliton] {
        &self.solitons
    }

    fn pair(&self, i: usize, j: usize) -> &SpectralPair {
        self.pairs[i][j].as_ref().expect("distinct indices")
    }

    fn run<T: Clone>(
        &self,
        base: T,
        leaf: impl Fn(&OneSoliton) -> Result<T>,
        mut sup: impl FnMut(&T, &T, &T, &SpectralPair) -> Result<T>,
    ) -> Result<T> {
        let n = self.solitons.len();
        if n == 0 {
            return Ok(base);
        }
        let mut row = self.solitons.iter().map(&leaf).collect::<Result<Vec<_>>>()?;
        let mut prefix_prev = base;
        for m in 1..n {
            let prefix = row[m - 1].clone();
            let mut next = row.clone();
            for k in m..n {
                next[k] = sup(&prefix_prev, &prefix, &row[k], self.pair(m - 1, k))?;
            }
            prefix_prev = prefix;
            row = next;
        }
        Ok(row.pop().expect("nonempty"))
    }
}

impl FieldFunction for BianchiLattice {
    fn n_gen(&self) -> usize {
        self.n_gen
    }

    fn eval(&self, x: f64, t: f64) -> Result<Superfield> {
        assemble_components(&self.components(x, t)?).map_err(|e| e.at_point(x, t))
    }

    fn components(&self, x: f64, t: f64) -> Result<Components> {
        self.run(
            Components::vacuum(self.n_gen)?,
            |s| s.components_at(x, t),
            |c0, c1, c2, pair| superpose_component_values(c0, c1, c2, pair).map_err(|e| e.at_point(x, t)),
        )
    }

    fn singular_distance(&self, x: f64, t: f64) -> f64 {
        let mut margin = self
            .solitons
            .iter()
            .map(|s| s.singular_distance(x, t))
            .fold(f64::INFINITY, f64::min);
        if margin < CURVE_EPS {
            return 0.0;
        }
        let top = self.run(
            Complex64::ZERO,
            |s| s.phi_body(x, t),
            |p0, p1, p2, pair| {
                margin = margin.min(superposition_margin(*p0, *p1, *p2, pair));
                let z = pair.delta * ((p1 - p2) / 2.0).tanh();
                Ok(p0 + 2.0 * z.atanh())
            },
        );
        match top {
            Ok(_) => margin,
            Err(_) => 0.0,
        }
    }
}

/// Sampling and tolerance settings for residual certification.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifyOptions {
    pub window: Window,
    pub samples: usize,
    pub margin: f64,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            window: Window::new(-1.0, 1.0, -1.0, 1.0),
            samples: 50,
            margin: 1e-3,
            seed: 0,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub points: usize,
    pub rejected: usize,
    pub skipped: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Largest EOM residual over the sampled points; singular evaluations are
/// counted, not absorbed.
pub fn certify(field: &dyn FieldFunction, opts: &CertifyOptions) -> Result<Certificate> {
    let samples = sample_points(field, &opts.window, opts.samples, opts.margin, opts.seed)?;
    let results: Vec<Result<f64>> = samples
        .points
        .par_iter()
        .map(|&(x, t)| eom_residual(field, x, t).map(|r| r.max_abs()))
        .collect();
    let (mut max, mut skipped, mut points) = (0.0f64, 0, 0);
    for r in results {
        match r {
            Ok(v) => {
                points += 1;
                max = if v.is_nan() { f64::INFINITY } else { max.max(v) };
            }
            Err(e) if e.is_singular() => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(Certificate {
        points,
        rejected: samples.rejected,
        skipped,
        max_residual: max,
        tolerance: opts.tolerance,
        passed: points > 0 && max < opts.tolerance,
    })
}

/// The top node of a Bianchi lattice and what built it.
#[derive(Clone)]
pub struct LatticeNode {
    pub field: Arc<BianchiLattice>,
    pub sigmas: Vec<f64>,
    pub generators: Vec<usize>,
    pub certificate: Certificate,
}

impl LatticeNode {
    pub fn is_certified(&self) -> bool {
        self.certificate.passed
    }
}

pub fn bianchi_lattice(params: &[SolitonParams], opts: &CertifyOptions) -> Result<LatticeNode> {
    if params.is_empty() {
        return Err(Error::InvalidParams("the lattice needs at least one soliton".into()));
    }
    let n_gen = params.iter().map(|p| p.gen + 1).max().unwrap_or(2).max(2);
    let field = Arc::new(BianchiLattice::new(params, n_gen)?);
    let certificate = certify(field.as_ref(), opts)?;
    Ok(LatticeNode {
        field,
        sigmas: params.iter().map(|p| p.sigma).collect(),
        generators: params.iter().map(|p| p.gen).collect(),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::epsilon;

    fn sol(sigma: f64, b: f64, a: f64, k: usize, n: usize) -> OneSoliton {
        OneSoliton::new(SolitonParams::new(sigma, b, a, epsilon(k)).unwrap(), n).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(SolitonParams::new(0.0, 1.0, 1.0, 2).is_err());
        assert!(SolitonParams::new(1.0, 1.0, 1.0, 1).is_err());
        assert!(OneSoliton::new(SolitonParams::new(1.0, 1.0, 1.0, 4).unwrap(), 4).is_err());
    }

    #[test]
    fn zero_amplitude_is_vacuum() {
        let s = sol(2.0, 0.0, 0.0, 1, 3);
        let c = s.components_at(0.3, 0.4).unwrap();
        assert!(c.phi.is_zero() && c.psibar.is_zero() && c.psi.is_zero());
    }

    #[test]
    fn value_at_origin() {
        let s = sol(1.0, 0.5, 1.0, 1, 3);
        let c = s.components_at(0.0, 0.0).unwrap();
        assert!((c.phi.body().v.re - 3f64.ln()).abs() < 1e-15);
        assert!((c.psibar.coeff(1 << epsilon(1)).v.re - 8.0 / 3.0).abs() < 1e-15);
        assert!((s.phi_body(0.0, 0.0).unwrap().re - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn first_order_equation_holds() {
        let s = sol(0.5, 0.2, 0.3, 1, 3);
        for (x, t) in [(0.1, 0.2), (-0.7, 0.4), (1.1, -0.9)] {
            let phi = s.components_at(x, t).unwrap().phi.body();
            let want = 2.0 * 0.5 * phi.v.sinh();
            assert!((phi.dx - want).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_curve_reported() {
        // E = 1 at x = 0, t = 0 for b = 1
        let s = sol(1.0, 1.0, 0.0, 1, 3);
        assert!(matches!(s.components_at(0.0, 0.0), Err(Error::SingularPoint { .. })));
        assert_eq!(s.singular_distance(0.0, 0.0), 0.0);
    }

    #[test]
    fn bosonic_superposition_matches_closed_form() {
        let n = 4;
        let (s1, s2) = (sol(3.0, 0.1, 0.0, 1, n), sol(1.0, -0.05, 0.0, 2, n));
        let pair = SpectralPair::new(3.0, 1.0).unwrap();
        let (x, t) = (0.02, -0.11);
        let c0 = Components::vacuum(n).unwrap();
        let c3 = superpose_component_values(&c0, &s1.components_at(x, t).unwrap(), &s2.components_at(x, t).unwrap(), &pair)
            .unwrap();
        let (p1, p2) = (s1.phi_body(x, t).unwrap(), s2.phi_body(x, t).unwrap());
        let want = 2.0 * (2.0 * ((p1 - p2) / 2.0).tanh()).atanh();
        assert!((c3.phi.body().v - want).norm() < 1e-12);
        assert!(c3.psibar.is_zero() && c3.psi.is_zero());
    }

    #[test]
    fn coincident_children_leave_parent() {
        let n = 3;
        let s = sol(3.0, 0.3, 0.5, 1, n);
        let pair = SpectralPair::new(3.0, 1.0).unwrap();
        let c1 = s.components_at(0.1, 0.1).unwrap();
        let c0 = Components::vacuum(n).unwrap();
        let c3 = superpose_component_values(&c0, &c1, &c1, &pair).unwrap();
        assert!(c3.phi.max_abs() < 1e-15);
    }

    #[test]
    fn rescale_map() {
        let p1 = SolitonParams::new(3.0, 0.4, 1.0, 2).unwrap();
        let p2 = SolitonParams::new(1.0, 0.6, 1.0, 3).unwrap();
        let (q1, q2) = rescale_pair(&p1, &p2, 3.0, 1.0).unwrap();
        assert_eq!((q1.sigma, q1.b, q1.a), (3.0, 0.1, -1.5));
        assert_eq!((q2.sigma, q2.b, q2.a), (1.0, -0.15, 0.5));
    }

    #[test]
    fn lattice_rejects_duplicates() {
        let p = SolitonParams::new(1.0, 0.1, 0.0, 2).unwrap();
        let q = SolitonParams::new(1.0, 0.2, 0.0, 3).unwrap();
        assert!(matches!(BianchiLattice::new(&[p, q], 4), Err(Error::Degenerate(_))));
    }

    #[test]
    fn single_node_lattice_is_one_soliton() {
        let lat = BianchiLattice::from_amplitudes(&[(0.5, 0.2, 0.3)]).unwrap();
        let s = sol(0.5, 0.2, 0.3, 1, 3);
        assert_eq!(lat.components(0.2, 0.1).unwrap(), s.components_at(0.2, 0.1).unwrap());
    }
}
