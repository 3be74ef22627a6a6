//! Residual suites over seeded sample points, collected into a report.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::backlund::{
    bt_residuals, bt_residuals_value, descend_aux, lambda_coeff_check, permutability_residuals,
    superposition_coeffs, LatticeValues, SpectralPair, VacuumAux,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::sampling::sample_points;
use crate::solitons::{superpose_component_values, superpose_superfield_value, BianchiLattice, OneSoliton};
use crate::superfield::{assemble_components, eom_residual, Components, FieldFunction, Superfield, Vacuum};

pub const TOL_EOM_ONE: f64 = 1e-10;
pub const TOL_EOM_TWO: f64 = 1e-9;
pub const TOL_EOM_MANY: f64 = 1e-8;
pub const TOL_BT: f64 = 1e-9;
pub const TOL_PERM: f64 = 1e-9;
pub const TOL_SWAP: f64 = 1e-12;
pub const TOL_AGREE: f64 = 1e-9;
pub const TOL_DELTA: f64 = 1e-12;
pub const TOL_FPROD: f64 = 1e-10;
pub const TOL_LAMBDA: f64 = 1e-9;

/// Random spectral pairs drawn for the `δ² − δ₁² = 1` check.
const RANDOM_PAIRS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Eom,
    Bt,
    Perm,
    Identities,
    Lattice,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Eom => "eom",
            Suite::Bt => "bt",
            Suite::Perm => "perm",
            Suite::Identities => "identities",
            Suite::Lattice => "lattice",
            Suite::All => "all",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eom" => Suite::Eom,
            "bt" => Suite::Bt,
            "perm" => Suite::Perm,
            "identities" => Suite::Identities,
            "lattice" => Suite::Lattice,
            "all" => Suite::All,
            other => return Err(Error::Config(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fault injection for exercising failing reports.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Hooks {
    pub delta_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub max: f64,
    pub mean: f64,
    pub points: usize,
    pub skipped: usize,
    pub rejected: usize,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub suite: String,
    pub seed: u64,
    pub singular_margin: f64,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl ResidualReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "suite {} (seed {}, singular margin {:e}, {} samples per check)\n",
            self.suite, self.seed, self.singular_margin, self.samples
        );
        for c in &self.checks {
            s += &format!(
                "{} {:<34} max {:.3e} mean {:.3e} tol {:.0e} points {} skipped {} rejected {}  [{}]\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.max,
                c.mean,
                c.tolerance,
                c.points,
                c.skipped,
                c.rejected,
                c.anchor
            );
        }
        s += if self.pass { "overall PASS\n" } else { "overall FAIL\n" };
        s
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    solitons: Vec<Arc<OneSoliton>>,
    n_gen: usize,
}

impl Ctx<'_> {
    fn tol(&self, default: f64) -> f64 {
        self.cfg.tolerance.unwrap_or(default)
    }
}

/// Per-point residuals, several checks at once.
type PointValues = Vec<f64>;

struct CheckDef {
    name: String,
    anchor: &'static str,
    tolerance: f64,
}

fn check_def(name: impl Into<String>, anchor: &'static str, tolerance: f64) -> CheckDef {
    CheckDef {
        name: name.into(),
        anchor,
        tolerance,
    }
}

/// Samples points away from `guard`'s singular set, evaluates `eval` at each
/// in parallel and reduces in point order.
fn point_checks<F>(ctx: &Ctx<'_>, guard: &dyn FieldFunction, defs: Vec<CheckDef>, eval: F) -> Result<Vec<CheckResult>>
where
    F: Fn(f64, f64) -> Result<PointValues> + Sync,
{
    let cfg = ctx.cfg;
    let samples = sample_points(guard, &cfg.grid.window(), cfg.samples, cfg.singular_margin, cfg.seed)?;
    let values: Vec<Result<PointValues>> = samples.points.par_iter().map(|&(x, t)| eval(x, t)).collect();
    let k = defs.len();
    let (mut max, mut sum) = (vec![0.0f64; k], vec![0.0f64; k]);
    let (mut points, mut skipped) = (0, 0);
    for v in values {
        match v {
            Ok(v) => {
                points += 1;
                for i in 0..k {
                    let r = if v[i].is_nan() { f64::INFINITY } else { v[i] };
                    max[i] = max[i].max(r);
                    sum[i] += r;
                }
            }
            Err(e) if e.is_singular() => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(defs
        .into_iter()
        .enumerate()
        .map(|(i, s)| CheckResult {
            pass: points > 0 && max[i] < s.tolerance,
            name: s.name,
            anchor: s.anchor.to_string(),
            max: max[i],
            mean: if points > 0 { sum[i] / points as f64 } else { 0.0 },
            points,
            skipped,
            rejected: samples.rejected,
            tolerance: s.tolerance,
        })
        .collect())
}

pub fn run_suite(cfg: &RunConfig, suite: Suite) -> Result<ResidualReport> {
    run_suite_with(cfg, suite, Hooks::default())
}

pub fn run_suite_with(cfg: &RunConfig, suite: Suite, hooks: Hooks) -> Result<ResidualReport> {
    cfg.validate()?;
    let n_gen = cfg.n_gen();
    let solitons = cfg
        .params()?
        .into_iter()
        .map(|p| OneSoliton::new(p, n_gen).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let ctx = Ctx { cfg, solitons, n_gen };
    let mut checks = Vec::new();

    if suite.includes(Suite::Eom) {
        checks.extend(eom_checks(&ctx)?);
    }
    if suite.includes(Suite::Bt) {
        checks.extend(bt_checks(&ctx)?);
    }
    if suite.includes(Suite::Perm) && ctx.solitons.len() >= 2 {
        checks.extend(two_soliton_checks(&ctx, Suite::Perm)?);
    }
    if suite.includes(Suite::Identities) {
        checks.push(delta_identity_check(&ctx, hooks));
        if ctx.solitons.len() >= 2 {
            checks.extend(two_soliton_checks(&ctx, Suite::Identities)?);
        }
    }
    if suite.includes(Suite::Lattice) {
        checks.extend(lattice_checks(&ctx)?);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(ResidualReport {
        suite: suite.name().to_string(),
        seed: cfg.seed,
        singular_margin: cfg.singular_margin,
        samples: cfg.samples,
        checks,
        pass,
    })
}

const EOM_ANCHOR: &str = "D_x D_t Φ = 2i sinh Φ";

fn eom_checks(ctx: &Ctx<'_>) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    if ctx.solitons.is_empty() {
        let vac = Vacuum { n_gen: ctx.n_gen };
        let s = check_def("eom vacuum", EOM_ANCHOR, ctx.tol(TOL_EOM_ONE));
        out.extend(point_checks(ctx, &vac, vec![s], |x, t| Ok(vec![eom_residual(&vac, x, t)?.max_abs()]))?);
        return Ok(out);
    }
    for (k, sol) in ctx.solitons.iter().enumerate() {
        let s = check_def(format!("eom one-soliton {}", k + 1), EOM_ANCHOR, ctx.tol(TOL_EOM_ONE));
        out.extend(point_checks(ctx, sol.as_ref(), vec![s], |x, t| {
            Ok(vec![eom_residual(sol.as_ref(), x, t)?.max_abs()])
        })?);
    }
    if ctx.solitons.len() >= 2 {
        let params: Vec<_> = ctx.solitons[..2].iter().map(|s| *s.params()).collect();
        let two = BianchiLattice::new(&params, ctx.n_gen)?;
        let s = check_def("eom two-soliton", EOM_ANCHOR, ctx.tol(TOL_EOM_TWO));
        out.extend(point_checks(ctx, &two, vec![s], |x, t| Ok(vec![eom_residual(&two, x, t)?.max_abs()]))?);
    }
    Ok(out)
}

fn bt_checks(ctx: &Ctx<'_>) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let vac = Vacuum { n_gen: ctx.n_gen };
    for (k, sol) in ctx.solitons.iter().enumerate() {
        let aux = VacuumAux(**sol);
        let beta = crate::backlund::beta_from_sigma(sol.params().sigma)?;
        let s = check_def(
            format!("bt vacuum to soliton {}", k + 1),
            "D_x(Φ₀−Φ₁) = −(4i/β) f cosh((Φ₀+Φ₁)/2), D_t(Φ₀+Φ₁) = 2β f cosh((Φ₀−Φ₁)/2)",
            ctx.tol(TOL_BT),
        );
        out.extend(point_checks(ctx, sol.as_ref(), vec![s], |x, t| {
            Ok(vec![bt_residuals(&vac, sol.as_ref(), &aux, beta, x, t)?.max_abs()])
        })?);
    }
    if ctx.solitons.len() >= 2 {
        out.extend(two_soliton_checks(ctx, Suite::Bt)?);
    }
    Ok(out)
}

/// Everything on one square of the lattice, seeded at the vacuum.
struct Square {
    phi: [Superfield; 4],
    components3: Components,
    swapped3: Components,
    f01: crate::backlund::AuxFermion,
    f02: crate::backlund::AuxFermion,
    f13: crate::backlund::AuxFermion,
    f23: crate::backlund::AuxFermion,
    pair: SpectralPair,
    lambda_f: crate::grassmann::GrassmannNumber,
    gamma: crate::grassmann::GrassmannNumber,
}

fn square(s1: &OneSoliton, s2: &OneSoliton, x: f64, t: f64) -> Result<Square> {
    let n = s1.n_gen();
    let pair = SpectralPair::new(s1.params().sigma, s2.params().sigma)?;
    let c0 = Components::vacuum(n)?;
    let (c1, c2) = (s1.components_at(x, t)?, s2.components_at(x, t)?);
    let p0 = assemble_components(&c0)?;
    let p1 = assemble_components(&c1)?;
    let p2 = assemble_components(&c2)?;
    let f01 = crate::backlund::vacuum_aux(s1, x, t)?;
    let f02 = crate::backlund::vacuum_aux(s2, x, t)?;
    let p3 = superpose_superfield_value(&p0, &p1, &p2, f01.as_grassmann(), f02.as_grassmann(), &pair)?;
    let coeffs = superposition_coeffs(p1.as_grassmann(), p2.as_grassmann(), &pair)?;
    let (f13, f23) = descend_aux(&f01, &f02, &coeffs)?;
    let components3 = superpose_component_values(&c0, &c1, &c2, &pair)?;
    let swapped3 = superpose_component_values(&c0, &c2, &c1, &pair.swapped())?;
    let lambda_f = coeffs.lambda.try_mul(&f01.as_grassmann().try_mul(f02.as_grassmann())?)?;
    Ok(Square {
        phi: [p0, p1, p2, p3],
        components3,
        swapped3,
        f01,
        f02,
        f13,
        f23,
        pair,
        lambda_f,
        gamma: coeffs.gamma,
    })
}

fn two_soliton_checks(ctx: &Ctx<'_>, part: Suite) -> Result<Vec<CheckResult>> {
    let (s1, s2) = (ctx.solitons[0].as_ref(), ctx.solitons[1].as_ref());
    let params = [*s1.params(), *s2.params()];
    let guard = BianchiLattice::new(&params, ctx.n_gen)?;
    let defs = match part {
        Suite::Bt => vec![
            check_def("bt descended (Φ₁,Φ₃;β₂)", "f₁₃ = −a f₀₁ − b f₀₂", ctx.tol(TOL_BT)),
            check_def("bt descended (Φ₂,Φ₃;β₁)", "f₂₃ = b f₀₁ + a f₀₂", ctx.tol(TOL_BT)),
        ],
        Suite::Perm => vec![
            check_def("perm x-relation", "Σ f cosh((Φᵢ+Φⱼ)/2)/β around the square = 0", ctx.tol(TOL_PERM)),
            check_def("perm t-relation", "Σ β f cosh((Φᵢ−Φⱼ)/2) around the square = 0", ctx.tol(TOL_PERM)),
            check_def("perm swap symmetry", "(Φ₁,σ₁) ↔ (Φ₂,σ₂)", ctx.tol(TOL_SWAP)),
            check_def(
                "superfield vs components",
                "Φ₃ = Φ₀ + 2 arctanh(δ tanh((Φ₁−Φ₂)/2) e^{Ω f₀₁f₀₂})",
                ctx.tol(TOL_AGREE),
            ),
            check_def("ansatz decomposition", "Φ₃ = Φ₀ + Γ(Φ₁−Φ₂) + λ f₀₁f₀₂", ctx.tol(TOL_AGREE)),
        ],
        _ => vec![
            check_def("aux product", "f₁₃f₂₃ = f₀₁f₀₂", ctx.tol(TOL_FPROD)),
            check_def("Λ vs (a, b)", "(Λ₁₃, Λ₂₃) = (−a, −b; b, a) mod f₀₁f₀₂", ctx.tol(TOL_LAMBDA)),
        ],
    };
    point_checks(ctx, &guard, defs, |x, t| {
        let sq = square(s1, s2, x, t).map_err(|e| e.at_point(x, t))?;
        let [p0, p1, p2, p3] = &sq.phi;
        let v = match part {
            Suite::Bt => vec![
                bt_residuals_value(p1, p3, &sq.f13, sq.pair.beta2)?.max_abs(),
                bt_residuals_value(p2, p3, &sq.f23, sq.pair.beta1)?.max_abs(),
            ],
            Suite::Perm => {
                let lv = LatticeValues {
                    phi: [p0, p1, p2, p3],
                    f01: &sq.f01,
                    f13: &sq.f13,
                    f02: &sq.f02,
                    f23: &sq.f23,
                };
                let (rx, rt) = permutability_residuals(&lv, sq.pair.beta1, sq.pair.beta2)?;
                let swap = [
                    (&sq.components3.phi, &sq.swapped3.phi),
                    (&sq.components3.psibar, &sq.swapped3.psibar),
                    (&sq.components3.psi, &sq.swapped3.psi),
                ]
                .iter()
                .map(|(a, b)| (*a - *b).max_abs())
                .fold(0.0, f64::max);
                let comp = assemble_components(&sq.components3)?;
                let agree = (p3.as_grassmann() - comp.as_grassmann()).max_abs();
                let ansatz = (&(&(p3.as_grassmann() - p0.as_grassmann()) - &sq.gamma) - &sq.lambda_f).max_abs();
                vec![rx.max_abs(), rt.max_abs(), swap, agree, ansatz]
            }
            _ => {
                let prod = sq.f13.as_grassmann() * sq.f23.as_grassmann();
                let base = sq.f01.as_grassmann() * sq.f02.as_grassmann();
                let lam = lambda_coeff_check([p0, p1, p2, p3], sq.pair.beta1, sq.pair.beta2, &sq.f01, &sq.f02)?;
                vec![(&prod - &base).max_abs(), lam.max_ideal_residual()]
            }
        };
        Ok(v)
    })
}

fn delta_identity_check(ctx: &Ctx<'_>, hooks: Hooks) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for (i, a) in ctx.solitons.iter().enumerate() {
        for b in &ctx.solitons[i + 1..] {
            pairs.push((a.params().sigma, b.params().sigma));
        }
    }
    while pairs.len() < RANDOM_PAIRS + ctx.solitons.len() * ctx.solitons.len().saturating_sub(1) / 2 {
        let mut draw = || {
            let mag = 10f64.powf(rng.random_range(-1.0..1.0));
            if rng.random::<bool>() {
                mag
            } else {
                -mag
            }
        };
        let (s1, s2) = (draw(), draw());
        if s1 != s2 {
            pairs.push((s1, s2));
        }
    }
    let (mut max, mut sum, mut points) = (0.0f64, 0.0, 0);
    for (s1, s2) in pairs {
        let r = match SpectralPair::new(s1, s2) {
            Ok(p) => {
                let d = p.delta + Complex64::new(hooks.delta_offset, 0.0);
                // relative to the size of the cancelling squares
                (d * d - p.delta1 * p.delta1 - 1.0).norm() / (d * d).norm().max(1.0)
            }
            Err(_) => f64::INFINITY,
        };
        let r = if r.is_nan() { f64::INFINITY } else { r };
        max = max.max(r);
        sum += r;
        points += 1;
    }
    let tolerance = ctx.tol(TOL_DELTA);
    CheckResult {
        name: "δ² − δ₁² = 1 (relative)".into(),
        anchor: "δ = (σ₁+σ₂)/(σ₁−σ₂), δ₁ = 2β₁β₂/(β₁²−β₂²)".into(),
        max,
        mean: sum / points as f64,
        points,
        skipped: 0,
        rejected: 0,
        tolerance,
        pass: max < tolerance,
    }
}

fn lattice_checks(ctx: &Ctx<'_>) -> Result<Vec<CheckResult>> {
    let params: Vec<_> = ctx.solitons.iter().map(|s| *s.params()).collect();
    let top = BianchiLattice::new(&params, ctx.n_gen)?;
    let default = match params.len() {
        0 | 1 => TOL_EOM_ONE,
        2 => TOL_EOM_TWO,
        _ => TOL_EOM_MANY,
    };
    let s = check_def(format!("eom lattice n={}", params.len()), EOM_ANCHOR, ctx.tol(default));
    point_checks(ctx, &top, vec![s], |x, t| Ok(vec![eom_residual(&top, x, t)?.max_abs()]))
}
