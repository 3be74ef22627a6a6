//! Seeded sampling of non-singular spacetime points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::superfield::FieldFunction;

/// Attempts allowed per requested point before giving up.
const ATTEMPTS_PER_POINT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub tmin: f64,
    pub tmax: f64,
}

impl Window {
    pub fn new(xmin: f64, xmax: f64, tmin: f64, tmax: f64) -> Self {
        Window { xmin, xmax, tmin, tmax }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub points: Vec<(f64, f64)>,
    pub rejected: usize,
}

/// Draws `count` points uniformly from `window`, rejecting those within
/// `margin` of the field's singular set.
pub fn sample_points(
    field: &dyn FieldFunction,
    window: &Window,
    count: usize,
    margin: f64,
    seed: u64,
) -> Result<Samples> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let mut rejected = 0;
    let max_attempts = ATTEMPTS_PER_POINT * count.max(1);
    let mut attempts = 0;
    while points.len() < count {
        if attempts == max_attempts {
            return Err(Error::SamplingExhausted {
                accepted: points.len(),
                rejected,
            });
        }
        attempts += 1;
        let x = window.xmin + (window.xmax - window.xmin) * rng.random::<f64>();
        let t = window.tmin + (window.tmax - window.tmin) * rng.random::<f64>();
        let d = field.singular_distance(x, t);
        if d.is_nan() || d < margin {
            rejected += 1;
        } else {
            points.push((x, t));
        }
    }
    Ok(Samples { points, rejected })
}
