#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use susy_backlund::config::RunConfig;
use susy_backlund::grassmann::{epsilon, GrassmannNumber, Parity};
use susy_backlund::solitons::{OneSoliton, SolitonParams};
use susy_backlund::superfield::Components;
use susy_backlund::Jet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_jet(r: &mut ChaCha8Rng) -> Jet {
    let mut c = || Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
    Jet::new(c(), c(), c(), c())
}

/// Random element with every coefficient of the requested parity filled.
pub fn rand_grassmann(r: &mut ChaCha8Rng, n: usize, parity: Parity) -> GrassmannNumber {
    let mut g = GrassmannNumber::zero(n).unwrap();
    for mask in 0..1usize << n {
        let keep = match parity {
            Parity::Even => mask.count_ones() % 2 == 0,
            Parity::Odd => mask.count_ones() % 2 == 1,
            Parity::Mixed => true,
        };
        if keep {
            g.set_coeff(mask, rand_jet(r));
        }
    }
    g
}

/// Polynomial `Σ c_ij xⁱ tʲ` (degrees < 4) with its jet and its exact
/// `∂x`, `∂t` jets.
pub struct Poly {
    pub c: [[f64; 4]; 4],
}

impl Poly {
    pub fn random(r: &mut ChaCha8Rng) -> Poly {
        let mut c = [[0.0; 4]; 4];
        for row in &mut c {
            for v in row.iter_mut() {
                *v = r.random_range(-1.0..1.0);
            }
        }
        Poly { c }
    }

    /// `∂xᵃ ∂tᵇ p` at `(x, t)`.
    pub fn d(&self, a: usize, b: usize, x: f64, t: f64) -> f64 {
        let fall = |k: usize, m: usize| -> f64 { (0..m).map(|j| (k - j) as f64).product() };
        let mut s = 0.0;
        for i in a..4 {
            for j in b..4 {
                s += self.c[i][j] * fall(i, a) * fall(j, b) * x.powi((i - a) as i32) * t.powi((j - b) as i32);
            }
        }
        s
    }

    pub fn jet(&self, x: f64, t: f64) -> Jet {
        self.jet_of(0, 0, x, t)
    }

    /// Jet of `∂xᵃ∂tᵇ p`.
    pub fn jet_of(&self, a: usize, b: usize, x: f64, t: f64) -> Jet {
        Jet::real(
            self.d(a, b, x, t),
            self.d(a + 1, b, x, t),
            self.d(a, b + 1, x, t),
            self.d(a + 1, b + 1, x, t),
        )
    }
}

pub const GRID: &str = "[grid]\nxmin = -0.5\nxmax = 0.5\nnx = 5\ntmin = -0.5\ntmax = 0.5\nnt = 4\n";

pub const SOLITON_1: (f64, f64, f64) = (3.0, 0.3, 0.7);
pub const SOLITON_2: (f64, f64, f64) = (1.0, -0.2, 1.3);
pub const SOLITON_3: (f64, f64, f64) = (0.5, 0.15, -0.9);

pub fn config(solitons: &[(f64, f64, f64)], extra: &str) -> RunConfig {
    let mut s = format!("seed = 11\n{extra}\n{GRID}");
    for (sigma, b, a) in solitons {
        s += &format!("\n[[solitons]]\nsigma = {sigma:?}\nb = {b:?}\na = {a:?}\n");
    }
    RunConfig::from_toml_str(&s).unwrap()
}

pub fn soliton(k: usize, (sigma, b, a): (f64, f64, f64), n_gen: usize) -> OneSoliton {
    OneSoliton::new(SolitonParams::new(sigma, b, a, epsilon(k)).unwrap(), n_gen).unwrap()
}

/// One-soliton components in the printed form `ψ̄ = ε (a/b) E (1/(1+E) + 1/(1−E))`,
/// with jets from hand-differentiated closed forms.
pub fn one_soliton_oracle(k: usize, (sigma, b, a): (f64, f64, f64), n_gen: usize, x: f64, t: f64) -> Components {
    let e = b * (2.0 * sigma * x + 2.0 * t / sigma).exp();
    let (ex, et, ext) = (2.0 * sigma * e, 2.0 * e / sigma, 4.0 * e);
    // φ = ln(1+E) − ln(1−E); φ' = 2E'/(1−E²); φ_xt = 2E_xt/(1−E²) + 4E E_x E_t/(1−E²)²
    let q = 1.0 - e * e;
    let log = Complex64::new((1.0 + e) / (1.0 - e), 0.0).ln();
    let mut phi = Jet::real(0.0, 2.0 * ex / q, 2.0 * et / q, 2.0 * ext / q + 4.0 * e * ex * et / (q * q));
    phi.v = log;
    // ψ̄/ε = (a/b) · 2E/(1−E²) = (a/b) g(E), g' = 2(1+E²)/(1−E²)², g'' = 4E(3+E²)/(1−E²)³
    let g = 2.0 * e / q;
    let g1 = 2.0 * (1.0 + e * e) / (q * q);
    let g2 = 4.0 * e * (3.0 + e * e) / (q * q * q);
    let s = a / b;
    let pb = Jet::real(s * g, s * g1 * ex, s * g1 * et, s * (g2 * ex * et + g1 * ext));
    let mut c = Components::vacuum(n_gen).unwrap();
    c.phi.set_coeff(0, phi);
    c.psibar.set_coeff(1 << epsilon(k), pb);
    c.psi.set_coeff(1 << epsilon(k), pb.scale((1.0 / sigma).into()));
    c
}

/// Two-soliton over the vacuum as printed, with
/// `Δ₁ = 2/sinh(φ₁−φ₂) · δ tanh(h)/(1 − δ² tanh² h)`. Valid for `σ₁, σ₂ > 0`.
pub fn two_soliton_oracle(c1: &Components, c2: &Components, s1: f64, s2: f64) -> Components {
    let delta = (s1 + s2) / (s1 - s2);
    let a_const = (s1 + s2) / (s1 * s2).sqrt();
    let b_const = (s1 - s2).powi(2) / (4.0 * s1 * s2);
    let (p1, p2) = (&c1.phi, &c2.phi);
    let diff = p1 - p2;
    let h = diff.scale_real(0.5);
    let th = h.tanh().unwrap();
    let th2 = &th * &th;
    let one = h.scalar_like(1.0);
    let d1 = (&diff.sinh().unwrap().recip().unwrap() * &th.scale_real(2.0 * delta))
        * (&one - &th2.scale_real(delta * delta)).recip().unwrap();
    let sh = h.sinh().unwrap();
    let d2 = (&sh * &(&h.scalar_like(b_const) - &(&sh * &sh)).recip().unwrap()).scale_real(a_const);

    let half = |p: &GrassmannNumber| p.scale_real(0.5);
    let (ch1, ch2) = (half(p1).cosh().unwrap(), half(p2).cosh().unwrap());
    let (sh1, sh2) = (half(p1).sinh().unwrap(), half(p2).sinh().unwrap());
    let (r21, r12) = ((s2 / s1).sqrt(), (s1 / s2).sqrt());

    let phi3 = &th.scale_real(delta).arctanh().unwrap().scale_real(2.0)
        - &(&(&d2 * &(&c1.psibar * &c2.psibar)) * &(&ch1 * &ch2).recip().unwrap()).scale_real(1.0 / (8.0 * (s1 * s2).sqrt()));

    let k1 = &d1 + &(&d2 * &(&sh2 * &ch1.recip().unwrap())).scale_real(0.5 * r21);
    let k2 = &d1 + &(&d2 * &(&sh1 * &ch2.recip().unwrap())).scale_real(0.5 * r12);
    let psibar3 = &(&k1 * &c1.psibar) - &(&k2 * &c2.psibar);

    let m1 = &d1 - &(&d2 * &(&sh2 * &ch1.recip().unwrap())).scale_real(0.5 * r12);
    let m2 = &d1 - &(&d2 * &(&sh1 * &ch2.recip().unwrap())).scale_real(0.5 * r21);
    let psi3 = &(&m1 * &c1.psi) - &(&m2 * &c2.psi);
    Components {
        phi: phi3,
        psibar: psibar3,
        psi: psi3,
    }
}

pub fn components_diff(a: &Components, b: &Components) -> f64 {
    [(&a.phi, &b.phi), (&a.psibar, &b.psibar), (&a.psi, &b.psi)]
        .iter()
        .map(|(u, v)| (*u - *v).max_abs())
        .fold(0.0, f64::max)
}

/// Largest difference over every slot of every coefficient.
pub fn jet_diff(a: &GrassmannNumber, b: &GrassmannNumber) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(u, v)| (*u - *v).max_abs())
        .fold(0.0, f64::max)
}

/// First point of a coarse scan of `[-0.5, 0.5]²` well away from the
/// singular set of the two-soliton built from `p1`, `p2`.
pub fn regular_point(p1: (f64, f64, f64), p2: (f64, f64, f64)) -> (f64, f64) {
    use susy_backlund::superfield::FieldFunction;
    let lat = susy_backlund::solitons::BianchiLattice::from_amplitudes(&[p1, p2]).unwrap();
    for i in 0..21 {
        for j in 0..21 {
            let (x, t) = (-0.5 + 0.05 * i as f64, -0.5 + 0.05 * j as f64);
            if lat.singular_distance(x, t) > 0.2 {
                return (x, t);
            }
        }
    }
    panic!("no regular point");
}
