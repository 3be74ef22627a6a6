//! Browser bindings for a few interactive views of the superposition.
//!
//! Each exported function wraps a plain Rust function of the same name
//! with a `_native` suffix, so the logic is testable off the wasm target.

use susy_backlund::backlund::SpectralPair;
use susy_backlund::solitons::BianchiLattice;
use susy_backlund::superfield::{eom_residual, FieldFunction};
use wasm_bindgen::prelude::*;

fn axis(xmin: f64, xmax: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (xmax - xmin) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| xmin + step * i as f64)
}

fn lattice(sigmas: [f64; 2], bs: [f64; 2], a: [f64; 2]) -> Option<BianchiLattice> {
    BianchiLattice::from_amplitudes(&[(sigmas[0], bs[0], a[0]), (sigmas[1], bs[1], a[1])]).ok()
}

/// Real part of the body of φ along `x` at fixed `t`. NaN where the
/// field is singular.
pub fn two_soliton_profile_native(sigmas: [f64; 2], bs: [f64; 2], a: [f64; 2], t: f64, xmin: f64, xmax: f64, n: usize) -> Vec<f64> {
    let Some(lat) = lattice(sigmas, bs, a) else {
        return vec![f64::NAN; n];
    };
    axis(xmin, xmax, n)
        .map(|x| lat.eval(x, t).map(|s| s.phi().body().v.re).unwrap_or(f64::NAN))
        .collect()
}

/// log10 of the largest coefficient of the superfield equation residual
/// along `x`. NaN where the field is singular.
pub fn eom_residual_profile_native(sigmas: [f64; 2], bs: [f64; 2], a: [f64; 2], t: f64, xmin: f64, xmax: f64, n: usize) -> Vec<f64> {
    let Some(lat) = lattice(sigmas, bs, a) else {
        return vec![f64::NAN; n];
    };
    axis(xmin, xmax, n)
        .map(|x| match eom_residual(&lat, x, t) {
            Ok(r) => r.max_abs().max(1e-300).log10(),
            Err(_) => f64::NAN,
        })
        .collect()
}

/// `[Re δ, Im δ, Re δ₁, Im δ₁, |δ² − δ₁² − 1|]`, or an empty vector for an
/// invalid pair.
pub fn spectral_pair_native(sigma1: f64, sigma2: f64) -> Vec<f64> {
    match SpectralPair::new(sigma1, sigma2) {
        Ok(p) => vec![p.delta.re, p.delta.im, p.delta1.re, p.delta1.im, p.identity_defect().norm()],
        Err(_) => Vec::new(),
    }
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn two_soliton_profile(s1: f64, b1: f64, a1: f64, s2: f64, b2: f64, a2: f64, t: f64, xmin: f64, xmax: f64, n: usize) -> Vec<f64> {
    two_soliton_profile_native([s1, s2], [b1, b2], [a1, a2], t, xmin, xmax, n)
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn eom_residual_profile(s1: f64, b1: f64, a1: f64, s2: f64, b2: f64, a2: f64, t: f64, xmin: f64, xmax: f64, n: usize) -> Vec<f64> {
    eom_residual_profile_native([s1, s2], [b1, b2], [a1, a2], t, xmin, xmax, n)
}

#[wasm_bindgen]
pub fn spectral_pair(sigma1: f64, sigma2: f64) -> Vec<f64> {
    spectral_pair_native(sigma1, sigma2)
}
