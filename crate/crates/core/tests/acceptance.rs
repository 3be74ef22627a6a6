//! Acceptance criteria 1 to 9, one PASS/FAIL line each.

mod common;

use std::process::Command;
use std::time::Instant;

use common::{config, one_soliton_oracle, rand_grassmann, rng, two_soliton_oracle, Poly, SOLITON_1, SOLITON_2, SOLITON_3};
use num_complex::Complex64;
use rand::Rng;
use susy_backlund::config::RunConfig;
use susy_backlund::grassmann::{GrassmannNumber, Parity};
use susy_backlund::solitons::BianchiLattice;
use susy_backlund::superfield::{superderiv_t, superderiv_x, FieldFunction};
use susy_backlund::verify::{run_suite, ResidualReport, Suite};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Worst residual and smallest point count over the checks whose names
/// start with one of `prefixes`; passes when each of them passed.
fn from_report(r: &ResidualReport, prefixes: &[&str]) -> (bool, f64, usize, usize) {
    let picked: Vec<_> = r
        .checks
        .iter()
        .filter(|c| prefixes.iter().any(|p| c.name.starts_with(p)))
        .collect();
    let pass = !picked.is_empty() && picked.iter().all(|c| c.pass);
    let max = picked.iter().map(|c| c.max).fold(0.0, f64::max);
    let points = picked.iter().map(|c| c.points).min().unwrap_or(0);
    (pass, max, points, picked.len())
}

fn acceptance_config(solitons: &[(f64, f64, f64)]) -> RunConfig {
    config(solitons, "samples = 60\nsingular_margin = 0.05")
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    let cases = 1000;
    for case in 0..cases {
        let n = 1 + case % 6;
        let a = rand_grassmann(&mut r, n, Parity::Mixed);
        let b = rand_grassmann(&mut r, n, Parity::Mixed);
        let c = rand_grassmann(&mut r, n, Parity::Mixed);
        worst = worst.max(common::jet_diff(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
        let (u, v) = (rand_grassmann(&mut r, n, Parity::Odd), rand_grassmann(&mut r, n, Parity::Odd));
        worst = worst.max(common::jet_diff(&(&u * &v), &-(&v * &u)));
        let i = r.random_range(0..n);
        let lhs = (&u * &b).deriv(i).unwrap();
        let rhs = &(&u.deriv(i).unwrap() * &b) - &(&u * &b.deriv(i).unwrap());
        worst = worst.max(common::jet_diff(&lhs, &rhs));
    }
    outcome(
        worst < 1e-12,
        format!("algebra laws: max deviation {worst:.2e} over {cases} cases, n_gen 1..6 (tol 1e-12)"),
    )
}

fn criterion_2() -> Outcome {
    let (mut anti, mut square) = (0.0f64, 0.0f64);
    let mut r = rng(2);
    let n = 5;
    for _ in 0..50 {
        let (x, t) = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let polys: Vec<Poly> = (0..1 << n).map(|_| Poly::random(&mut r)).collect();
        let mut g = GrassmannNumber::zero(n).unwrap();
        for (m, p) in polys.iter().enumerate() {
            g.set_coeff(m, p.jet(x, t));
        }
        let dx = superderiv_x(&g).unwrap();
        let dt = superderiv_t(&g).unwrap();
        anti = anti.max((&superderiv_x(&dt).unwrap() + &superderiv_t(&dx).unwrap()).max_abs());
        let dxx = superderiv_x(&dx).unwrap();
        let dtt = superderiv_t(&dt).unwrap();
        for (m, p) in polys.iter().enumerate() {
            square = square.max((dxx.coeff(m).v - Complex64::new(p.d(1, 0, x, t), 0.0)).norm());
            square = square.max((dtt.coeff(m).v - Complex64::new(p.d(0, 1, x, t), 0.0)).norm());
        }
    }
    outcome(
        anti < 1e-11 && square < 1e-11,
        format!("superderivative identities: anticommutator {anti:.2e}, D² vs ∂ {square:.2e} (tol 1e-11)"),
    )
}

fn criterion_3() -> Outcome {
    let cfg = acceptance_config(&[SOLITON_1, SOLITON_2, SOLITON_3]);
    let eom = run_suite(&cfg, Suite::Eom).unwrap();
    let bt = run_suite(&cfg, Suite::Bt).unwrap();
    let (p1, m1, n1, k1) = from_report(&eom, &["eom one-soliton"]);
    let (p2, m2, n2, k2) = from_report(&bt, &["bt vacuum to soliton"]);
    outcome(
        p1 && p2 && k1 == 3 && k2 == 3 && n1.min(n2) >= 50,
        format!(
            "one-soliton σ = 3, 1, 1/2: eom {m1:.2e} (tol 1e-10), bt vs vacuum {m2:.2e} (tol 1e-9), {} points",
            n1.min(n2)
        ),
    )
}

fn criterion_4() -> Outcome {
    let cfg = acceptance_config(&[SOLITON_1, SOLITON_2]);
    let eom = run_suite(&cfg, Suite::Eom).unwrap();
    let perm = run_suite(&cfg, Suite::Perm).unwrap();
    let (p1, m1, n1, _) = from_report(&eom, &["eom two-soliton"]);
    let (p2, m2, n2, _) = from_report(&perm, &["superfield vs components"]);

    let lat = BianchiLattice::from_amplitudes(&[SOLITON_1, SOLITON_2]).unwrap();
    let mut r = rng(4);
    let (mut spec_max, mut points) = (0.0f64, 0);
    while points < 50 {
        let (x, t) = (r.random_range(-0.5..0.5), r.random_range(-0.5..0.5));
        if lat.singular_distance(x, t) < 0.05 {
            continue;
        }
        let c1 = one_soliton_oracle(1, SOLITON_1, 4, x, t);
        let c2 = one_soliton_oracle(2, SOLITON_2, 4, x, t);
        let want = two_soliton_oracle(&c1, &c2, SOLITON_1.0, SOLITON_2.0);
        spec_max = spec_max.max(common::components_diff(&lat.components(x, t).unwrap(), &want));
        points += 1;
    }
    outcome(
        p1 && p2 && spec_max < 1e-10 && n1.min(n2) >= 50,
        format!(
            "two-soliton: eom {m1:.2e} (tol 1e-9), superfield agreement {m2:.2e} (tol 1e-9), printed specialization {spec_max:.2e} (tol 1e-10), {} points",
            n1.min(n2)
        ),
    )
}

fn criterion_5() -> Outcome {
    let cfg = acceptance_config(&[SOLITON_1, SOLITON_2]);
    let perm = run_suite(&cfg, Suite::Perm).unwrap();
    let bt = run_suite(&cfg, Suite::Bt).unwrap();
    let (p1, m1, n1, _) = from_report(&perm, &["perm x-relation", "perm t-relation"]);
    let (p2, m2, _, _) = from_report(&perm, &["perm swap symmetry"]);
    let (p3, m3, n3, k3) = from_report(&bt, &["bt descended"]);
    outcome(
        p1 && p2 && p3 && k3 == 2,
        format!(
            "permutability: relations {m1:.2e} (tol 1e-9), swap {m2:.2e} (tol 1e-12), descended bt {m3:.2e} (tol 1e-9), {} points",
            n1.min(n3)
        ),
    )
}

fn criterion_6() -> Outcome {
    let cfg = acceptance_config(&[SOLITON_1, SOLITON_2]);
    let ids = run_suite(&cfg, Suite::Identities).unwrap();
    let (p1, m1, n1, _) = from_report(&ids, &["δ² − δ₁² = 1"]);
    let (p2, m2, _, _) = from_report(&ids, &["aux product"]);
    let (p3, m3, n3, _) = from_report(&ids, &["Λ vs (a, b)"]);
    outcome(
        p1 && p2 && p3 && n1 >= 100,
        format!(
            "scalar identities: δ²−δ₁²−1 {m1:.2e} over {n1} pairs (tol 1e-12), f₁₃f₂₃−f₀₁f₀₂ {m2:.2e} (tol 1e-10), Λ off the f₀₁f₀₂ ideal {m3:.2e} (tol 1e-9), {n3} points"
        ),
    )
}

fn criterion_7() -> Outcome {
    let (q1, q2) = ((SOLITON_1.0, SOLITON_1.1, 0.0), (SOLITON_2.0, SOLITON_2.1, 0.0));
    let lat = BianchiLattice::from_amplitudes(&[q1, q2]).unwrap();
    let delta = (q1.0 + q2.0) / (q1.0 - q2.0);
    let mut r = rng(7);
    let (mut worst, mut soul, mut points) = (0.0f64, 0.0f64, 0);
    while points < 50 {
        let (x, t) = (r.random_range(-0.5..0.5), r.random_range(-0.5..0.5));
        if lat.singular_distance(x, t) < 0.05 {
            continue;
        }
        let phi = |(s, b, _): (f64, f64, f64)| {
            let e = b * (2.0 * s * x + 2.0 * t / s).exp();
            Complex64::new((1.0 + e) / (1.0 - e), 0.0).ln()
        };
        let want = 2.0 * (delta * ((phi(q1) - phi(q2)) / 2.0).tanh()).atanh();
        let c = lat.components(x, t).unwrap();
        worst = worst.max((c.phi.body().v - want).norm());
        soul = soul.max(c.phi.soul().max_abs()).max(c.psibar.max_abs()).max(c.psi.max_abs());
        points += 1;
    }
    outcome(
        worst < 1e-12 && soul == 0.0,
        format!("bosonic reduction: φ₃ vs classical superposition {worst:.2e} (tol 1e-12), fermion parts {soul:.1e}, {points} points"),
    )
}

fn criterion_8() -> Outcome {
    let cfg = acceptance_config(&[SOLITON_1, SOLITON_2, SOLITON_3]);
    let lat = run_suite(&cfg, Suite::Lattice).unwrap();
    let (p, m, n, _) = from_report(&lat, &["eom lattice n=3"]);
    let rejected = lat.checks.first().map(|c| c.rejected).unwrap_or(0);
    outcome(
        p && n >= 50,
        format!("three-soliton lattice: eom {m:.2e} (tol 1e-8), {n} points, {rejected} rejected near singular curves"),
    )
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    let mut body = format!("seed = 21\nsingular_margin = 0.05\n{}", common::GRID);
    for (s, b, a) in [SOLITON_1, SOLITON_2, SOLITON_3] {
        body += &format!("\n[[solitons]]\nsigma = {s:?}\nb = {b:?}\na = {a:?}\n");
    }
    std::fs::write(&cfg, body).unwrap();
    let run = |sub: &str, out: &str| -> Vec<u8> {
        let path = dir.path().join(out);
        let status = Command::new(env!("CARGO_BIN_EXE_susy-bt"))
            .args([sub, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&path)
            .output()
            .unwrap()
            .status;
        assert!(status.code().is_some());
        std::fs::read(&path).unwrap_or_default()
    };
    let (g1, g2) = (run("gen", "g1.csv"), run("gen", "g2.csv"));
    let (v1, v2) = (run("verify", "v1.json"), run("verify", "v2.json"));
    let same = !g1.is_empty() && !v1.is_empty() && g1 == g2 && v1 == v2;
    outcome(
        same,
        format!("determinism: gen {} bytes and verify {} bytes identical across two runs", g1.len(), v1.len()),
    )
}

fn main() {
    let start = Instant::now();
    let criteria: [fn() -> Outcome; 9] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let o = c();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} {}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of 9 passed in {:.1?}", 9 - failed, start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
