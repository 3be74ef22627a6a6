//! Command-line front end: `gen`, `verify`, `lattice`.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::solitons::BianchiLattice;
use crate::superfield::FieldFunction;
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "susy-bt", version, about = "Supersymmetric sinh-Gordon soliton generator and residual checker")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the component fields of the top lattice node over the grid
    Gen(GenArgs),
    /// Run residual suites and write a JSON report
    Verify(VerifyArgs),
    /// Same as `gen`, requiring at least three solitons
    Lattice(GenArgs),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Overrides the configured seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    common: Common,
    /// CSV output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Report path (JSON)
    #[arg(long)]
    out: Option<PathBuf>,
    /// eom, bt, perm, identities, lattice or all
    #[arg(long, default_value = "all")]
    suite: String,
}

fn load(c: &Common) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(&c.config)?;
    if let Some(tol) = c.tol {
        cfg.tolerance = Some(tol);
    }
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.cmd {
        Command::Gen(a) => load(&a.common).and_then(|cfg| cmd_generate(&cfg, a.out.as_deref(), false)),
        Command::Lattice(a) => load(&a.common).and_then(|cfg| cmd_generate(&cfg, a.out.as_deref(), true)),
        Command::Verify(a) => load(&a.common).and_then(|cfg| {
            let suite: Suite = a.suite.parse()?;
            cmd_verify(&cfg, suite, a.out.as_deref())
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SamplingExhausted { .. } => EXIT_FAIL,
                _ => EXIT_USAGE,
            }
        }
    }
}

/// One output column: a field and one of its ε-monomials.
struct Column {
    field: usize,
    mask: usize,
    label: String,
}

fn columns(n_solitons: usize) -> Vec<Column> {
    let mut out = Vec::new();
    for (field, name, parity) in [(0, "phi", 0), (1, "psibar", 1), (2, "psi", 1)] {
        for subset in 0usize..1 << n_solitons {
            if subset.count_ones() % 2 != parity {
                continue;
            }
            let mono = if subset == 0 {
                "1".to_string()
            } else {
                (0..n_solitons)
                    .filter(|k| subset & (1 << k) != 0)
                    .map(|k| format!("e{}", k + 1))
                    .collect()
            };
            out.push(Column {
                field,
                mask: subset << 2,
                label: format!("{name}:{mono}"),
            });
        }
    }
    out
}

/// The CSV table written by `gen`.
pub fn generate_csv(cfg: &RunConfig) -> Result<String> {
    let field = BianchiLattice::new(&cfg.params()?, cfg.n_gen())?;
    let cols = columns(cfg.solitons.len());
    let mut header = String::from("x,t,singular");
    for c in &cols {
        header += &format!(",{0}:re,{0}:im", c.label);
    }
    header.push('\n');

    let g = cfg.grid;
    let cells: Vec<(usize, usize)> = (0..g.nx).flat_map(|i| (0..g.nt).map(move |j| (i, j))).collect();
    let rows: Vec<Result<String>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let (x, t) = (g.x(i), g.t(j));
            let mut row = format!("{x:e},{t:e}");
            match field.components(x, t) {
                Ok(c) => {
                    row += ",0";
                    let parts = [&c.phi, &c.psibar, &c.psi];
                    for col in &cols {
                        let v = parts[col.field].coeff(col.mask).v;
                        row += &format!(",{:e},{:e}", v.re, v.im);
                    }
                }
                Err(e) if e.is_singular() => {
                    row += ",1";
                    row += &",".repeat(2 * cols.len());
                }
                Err(e) => return Err(e),
            }
            row.push('\n');
            Ok(row)
        })
        .collect();
    let mut out = header;
    for r in rows {
        out += &r?;
    }
    Ok(out)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Config(format!("cannot write to stdout: {e}"))),
    }
}

pub fn cmd_generate(cfg: &RunConfig, out: Option<&Path>, lattice: bool) -> Result<i32> {
    if lattice && cfg.solitons.len() < 3 {
        return Err(Error::Config(format!(
            "lattice needs at least 3 solitons, config has {}",
            cfg.solitons.len()
        )));
    }
    write_out(out, &generate_csv(cfg)?)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(cfg: &RunConfig, suite: Suite, report: Option<&Path>) -> Result<i32> {
    let r = run_suite(cfg, suite)?;
    print!("{}", r.to_text());
    if let Some(p) = report {
        write_out(Some(p), &r.to_json())?;
    }
    Ok(if r.pass { EXIT_OK } else { EXIT_FAIL })
}
