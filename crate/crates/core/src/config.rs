//! Run configuration, read from TOML.
//!
//! ```toml
//! seed = 7
//! singular_margin = 1e-3
//! tolerance = 1e-9        # optional; overrides every per-check default
//! samples = 50
//!
//! [grid]
//! xmin = -1.0
//! xmax = 1.0
//! nx = 21
//! tmin = -1.0
//! tmax = 1.0
//! nt = 21
//!
//! [[solitons]]
//! sigma = 3.0
//! b = 0.3
//! a = 0.7
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{epsilon, MAX_GENERATORS};
use crate::sampling::Window;
use crate::solitons::SolitonParams;

pub const DEFAULT_SINGULAR_MARGIN: f64 = 1e-3;
pub const DEFAULT_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonSpec {
    pub sigma: f64,
    pub b: f64,
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub xmin: f64,
    pub xmax: f64,
    pub nx: usize,
    pub tmin: f64,
    pub tmax: f64,
    pub nt: usize,
}

impl Grid {
    fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        Grid::axis(self.xmin, self.xmax, self.nx, i)
    }

    pub fn t(&self, j: usize) -> f64 {
        Grid::axis(self.tmin, self.tmax, self.nt, j)
    }

    pub fn window(&self) -> Window {
        Window::new(self.xmin, self.xmax, self.tmin, self.tmax)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub solitons: Vec<SolitonSpec>,
    pub grid: Grid,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_margin")]
    pub singular_margin: f64,
    /// Sample points per residual check.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_margin() -> f64 {
    DEFAULT_SINGULAR_MARGIN
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let g = &self.grid;
        if g.nx < 1 || g.nt < 1 {
            return bad("grid needs nx, nt ≥ 1".into());
        }
        if ![g.xmin, g.xmax, g.tmin, g.tmax].iter().all(|v| v.is_finite()) || g.xmin > g.xmax || g.tmin > g.tmax {
            return bad("grid bounds must be finite with min ≤ max".into());
        }
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0) {
                return bad(format!("tolerance must be positive, got {tol}"));
            }
        }
        if !(self.singular_margin >= 0.0) {
            return bad("singular_margin must be non-negative".into());
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.solitons.len() + 2 > MAX_GENERATORS {
            return bad(format!("at most {} solitons are supported", MAX_GENERATORS - 2));
        }
        for (i, s) in self.solitons.iter().enumerate() {
            if s.sigma == 0.0 || !s.sigma.is_finite() || !s.b.is_finite() || !s.a.is_finite() {
                return bad(format!("soliton {} has invalid parameters", i + 1));
            }
            if self.solitons[..i].iter().any(|o| o.sigma == s.sigma) {
                return bad(format!("duplicate sigma {}", s.sigma));
            }
        }
        Ok(())
    }

    /// Soliton `k` (from 1) carries generator `ε_k`.
    pub fn params(&self) -> Result<Vec<SolitonParams>> {
        self.solitons
            .iter()
            .enumerate()
            .map(|(k, s)| SolitonParams::new(s.sigma, s.b, s.a, epsilon(k + 1)))
            .collect()
    }

    pub fn n_gen(&self) -> usize {
        2 + self.solitons.len()
    }
}
