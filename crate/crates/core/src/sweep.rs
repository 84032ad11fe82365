//! Exhaustive evaluation of the FIS response surface over an
//! (environment, window, overlap) grid, with argmax and feasible-region
//! extraction and CSV/JSON export.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{Engine, FisDefinition};

const AXIS_EPS: f64 = 1e-9;

/// `lo:hi:step` description of one inclusive axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl AxisSpec {
    pub const fn new(lo: f64, hi: f64, step: f64) -> Self {
        Self { lo, hi, step }
    }

    /// Inclusive arithmetic progression. `hi` is part of the axis when
    /// `(hi - lo) / step` is an integer within 1e-9.
    pub fn values(&self) -> Result<Vec<f64>> {
        let Self { lo, hi, step } = *self;
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(Error::Input(format!("axis {self} must be finite")));
        }
        if lo > hi {
            return Err(Error::Input(format!("axis {self} has lo > hi")));
        }
        if step <= 0.0 {
            return Err(Error::Input(format!("axis {self} needs a positive step")));
        }
        let ratio = (hi - lo) / step;
        let nearest = ratio.round();
        let (intervals, hits_hi) = if (ratio - nearest).abs() <= AXIS_EPS {
            (nearest as usize, true)
        } else {
            (ratio.floor() as usize, false)
        };
        Ok((0..=intervals)
            .map(|i| {
                if hits_hi && i == intervals {
                    hi
                } else {
                    lo + step * i as f64
                }
            })
            .collect())
    }
}

impl fmt::Display for AxisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

impl FromStr for AxisSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(Error::Input(format!("expected lo:hi:step, got '{s}'")));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Input(format!("'{t}' in axis '{s}' is not a number")))
        };
        Ok(Self::new(num(lo)?, num(hi)?, num(step)?))
    }
}

/// Table grid: 5 dB, 5 samples, 5 % steps. Includes the (50, 255, 50)
/// full-membership point.
pub const COARSE_AXES: [AxisSpec; 3] = [
    AxisSpec::new(10.0, 50.0, 5.0),
    AxisSpec::new(240.0, 270.0, 5.0),
    AxisSpec::new(20.0, 60.0, 5.0),
];

/// Optimization grid: 1 dB, 1 sample, 0.5 % steps.
pub const FINE_AXES: [AxisSpec; 3] = [
    AxisSpec::new(10.0, 50.0, 1.0),
    AxisSpec::new(240.0, 270.0, 1.0),
    AxisSpec::new(20.0, 60.0, 0.5),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub env: Vec<f64>,
    pub win: Vec<f64>,
    pub overlap: Vec<f64>,
}

impl SweepGrid {
    pub fn new(env: Vec<f64>, win: Vec<f64>, overlap: Vec<f64>) -> Result<Self> {
        for (name, axis) in [("env", &env), ("win", &win), ("overlap", &overlap)] {
            if axis.is_empty() {
                return Err(Error::Input(format!("{name} axis is empty")));
            }
            if axis.iter().any(|v| !v.is_finite()) || axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Input(format!(
                    "{name} axis must be finite and strictly increasing"
                )));
            }
        }
        Ok(Self { env, win, overlap })
    }

    pub fn len(&self) -> usize {
        self.env.len() * self.win.len() * self.overlap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of cell `i` in lexicographic (env, win, overlap) order.
    pub fn cell(&self, i: usize) -> [f64; 3] {
        let per_env = self.win.len() * self.overlap.len();
        let (e, rest) = (i / per_env, i % per_env);
        let (w, o) = (rest / self.overlap.len(), rest % self.overlap.len());
        [self.env[e], self.win[w], self.overlap[o]]
    }
}

pub fn build_grid(env: AxisSpec, win: AxisSpec, overlap: AxisSpec) -> Result<SweepGrid> {
    SweepGrid::new(env.values()?, win.values()?, overlap.values()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub env: f64,
    pub win: f64,
    pub overlap: f64,
    pub accuracy: f64,
    pub fired: bool,
}

impl SurfacePoint {
    fn coords_cmp(&self, other: &Self) -> Ordering {
        self.env
            .total_cmp(&other.env)
            .then(self.win.total_cmp(&other.win))
            .then(self.overlap.total_cmp(&other.overlap))
    }
}

/// Evaluates every grid cell in parallel. Output is in lexicographic
/// (env, win, overlap) order and identical to [`evaluate_surface_serial`].
pub fn evaluate_surface(fis: &FisDefinition, grid: &SweepGrid, resolution: usize) -> Result<Vec<SurfacePoint>> {
    let engine = surface_engine(fis, resolution)?;
    (0..grid.len())
        .into_par_iter()
        .map(|i| point(&engine, grid.cell(i)))
        .collect()
}

pub fn evaluate_surface_serial(fis: &FisDefinition, grid: &SweepGrid, resolution: usize) -> Result<Vec<SurfacePoint>> {
    let engine = surface_engine(fis, resolution)?;
    (0..grid.len()).map(|i| point(&engine, grid.cell(i))).collect()
}

fn surface_engine(fis: &FisDefinition, resolution: usize) -> Result<Engine<'_>> {
    if fis.inputs.len() != 3 {
        return Err(Error::Input(format!(
            "surface sweeps need a 3-input system (environment, window, overlap); this one has {}",
            fis.inputs.len()
        )));
    }
    Engine::new(fis, resolution)
}

fn point(engine: &Engine<'_>, [env, win, overlap]: [f64; 3]) -> Result<SurfacePoint> {
    let trace = engine.infer(&[env, win, overlap])?;
    Ok(SurfacePoint {
        env,
        win,
        overlap,
        accuracy: trace.crisp(),
        fired: trace.fired,
    })
}

/// Highest-accuracy point; ties go to the lexicographically smallest
/// (env, win, overlap).
pub fn argmax(points: &[SurfacePoint]) -> Result<SurfacePoint> {
    points
        .iter()
        .copied()
        .reduce(|best, p| match p.accuracy.total_cmp(&best.accuracy) {
            Ordering::Greater => p,
            Ordering::Equal if p.coords_cmp(&best) == Ordering::Less => p,
            _ => best,
        })
        .ok_or_else(|| Error::Input("argmax of an empty surface".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibleRegion {
    pub env_range: (f64, f64),
    pub win_range: (f64, f64),
    pub overlap_range: (f64, f64),
    pub threshold: f64,
    /// Number of points with accuracy at or above the threshold.
    pub points: usize,
}

impl FeasibleRegion {
    pub fn contains(&self, p: &SurfacePoint) -> bool {
        let inside = |(lo, hi): (f64, f64), v: f64| lo <= v && v <= hi;
        inside(self.env_range, p.env) && inside(self.win_range, p.win) && inside(self.overlap_range, p.overlap)
    }

    pub fn is_within(&self, outer: &FeasibleRegion) -> bool {
        let sub = |(a, b): (f64, f64), (c, d): (f64, f64)| c <= a && b <= d;
        sub(self.env_range, outer.env_range)
            && sub(self.win_range, outer.win_range)
            && sub(self.overlap_range, outer.overlap_range)
    }
}

/// Axis-aligned bounds of every point with `accuracy >= threshold`.
pub fn feasible_region(points: &[SurfacePoint], threshold: f64) -> Result<FeasibleRegion> {
    if threshold.is_nan() {
        return Err(Error::Input("threshold is NaN".into()));
    }
    let mut region: Option<FeasibleRegion> = None;
    for p in points.iter().filter(|p| p.accuracy >= threshold) {
        let widen = |(lo, hi): (f64, f64), v: f64| (lo.min(v), hi.max(v));
        region = Some(match region {
            None => FeasibleRegion {
                env_range: (p.env, p.env),
                win_range: (p.win, p.win),
                overlap_range: (p.overlap, p.overlap),
                threshold,
                points: 1,
            },
            Some(r) => FeasibleRegion {
                env_range: widen(r.env_range, p.env),
                win_range: widen(r.win_range, p.win),
                overlap_range: widen(r.overlap_range, p.overlap),
                threshold,
                points: r.points + 1,
            },
        });
    }
    region.ok_or(Error::EmptyRegion { threshold })
}

pub const CSV_HEADER: &str = "env,win,overlap,accuracy,fired";

/// Writes `env,win,overlap,accuracy,fired` rows. Floats use the shortest
/// round-trip representation.
pub fn write_csv<W: Write>(points: &[SurfacePoint], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for p in points {
        w.serialize(p)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// JSON array of `{env, win, overlap, accuracy, fired}` objects.
pub fn write_json<W: Write>(points: &[SurfacePoint], writer: W) -> Result<()> {
    serde_json::to_writer_pretty(writer, points)?;
    Ok(())
}
