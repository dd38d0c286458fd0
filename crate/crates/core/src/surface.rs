//! Regular 3D lattices of Fresnel-quartic values for rendering.

use std::collections::VecDeque;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::fresnel::QuarticForm;
use crate::metaclass::MetaclassParams;
use crate::segre::Metaclass;

/// Coefficient tolerance of the rotation-invariance check.
pub const ROTATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// Slice `ξ1 = 0` with axes `(ξ0, ξ2, ξ3)`; requires invariance under
    /// rotations in the `(ξ1, ξ2)` plane, so `ξ2` stands for `±√(ξ1²+ξ2²)`.
    Rotational,
    /// Slice `ξk = 0` with the remaining coordinates as axes.
    Slice(usize),
}

impl Projection {
    pub fn axes(&self) -> [usize; 3] {
        let k = match self {
            Self::Rotational => 1,
            Self::Slice(k) => *k,
        };
        let mut out = [0; 3];
        for (slot, i) in out.iter_mut().zip((0..4).filter(|&i| i != k)) {
            *slot = i;
        }
        out
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rotational => f.write_str("rotational"),
            Self::Slice(k) => write!(f, "xi{k}=0"),
        }
    }
}

impl FromStr for Projection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "rotational" {
            return Ok(Self::Rotational);
        }
        let k = s
            .strip_prefix("xi")
            .and_then(|r| r.strip_suffix("=0"))
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|k| *k < 4)
            .ok_or_else(|| Error::Format(format!("unknown projection {s:?}; expected rotational or xiK=0 with K in 0..3")))?;
        Ok(Self::Slice(k))
    }
}

/// Values of a quartic on an `n³` lattice over `[lo, hi]³`, stored with the
/// first axis outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub projection: Projection,
    pub bounds: (f64, f64),
    pub resolution: usize,
    pub values: Vec<f64>,
}

/// Whether `f` is unchanged by rotations of the `(ξ1, ξ2)` plane.
pub fn is_rotationally_symmetric(f: &QuarticForm) -> bool {
    [0.7_f64, 1.9].iter().all(|&t| {
        let (c, s) = (t.cos(), t.sin());
        let r = Matrix4::new(1.0, 0.0, 0.0, 0.0, 0.0, c, -s, 0.0, 0.0, s, c, 0.0, 0.0, 0.0, 0.0, 1.0);
        f.substitute(&r).distance(f) <= ROTATION_TOL * f.norm()
    })
}

impl SurfaceGrid {
    pub fn new(f: &QuarticForm, projection: Projection, bounds: (f64, f64), resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::InvalidResolution(resolution));
        }
        if !bounds.0.is_finite() || !bounds.1.is_finite() || bounds.0 >= bounds.1 {
            return Err(Error::Format(format!("invalid bounds {:?}", bounds)));
        }
        if projection == Projection::Rotational && !is_rotationally_symmetric(f) {
            return Err(Error::NotRotationallySymmetric);
        }
        let axes = projection.axes();
        let mut values = Vec::with_capacity(resolution.pow(3));
        let grid = Self { projection, bounds, resolution, values: Vec::new() };
        for i in 0..resolution {
            for j in 0..resolution {
                for k in 0..resolution {
                    let mut xi = Vector4::zeros();
                    xi[axes[0]] = grid.coordinate(i);
                    xi[axes[1]] = grid.coordinate(j);
                    xi[axes[2]] = grid.coordinate(k);
                    values.push(f.evaluate(&xi));
                }
            }
        }
        Ok(Self { values, ..grid })
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        let (lo, hi) = self.bounds;
        lo + (hi - lo) * i as f64 / (self.resolution - 1) as f64
    }

    pub fn value(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.resolution;
        self.values[(i * n + j) * n + k]
    }

    /// `x,y,z,f` rows, `x` outermost.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,y,z,f")?;
        let n = self.resolution;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    writeln!(out, "{},{},{},{}", self.coordinate(i), self.coordinate(j), self.coordinate(k), self.value(i, j, k))?;
                }
            }
        }
        Ok(())
    }

    /// Number of 6-connected components of `{f > 0}` and `{f < 0}`.
    pub fn sign_components(&self) -> (usize, usize) {
        (self.component_sizes(|v| v > 0.0).len(), self.component_sizes(|v| v < 0.0).len())
    }

    /// Like [`Self::sign_components`] but ignoring components with fewer than
    /// `min_fraction·n³` cells, which are lattice fragments of thin regions
    /// where two sheets touch.
    pub fn major_sign_components(&self, min_fraction: f64) -> (usize, usize) {
        let min = (min_fraction * self.values.len() as f64).ceil() as usize;
        let count = |sizes: Vec<usize>| sizes.into_iter().filter(|&s| s >= min.max(1)).count();
        (count(self.component_sizes(|v| v > 0.0)), count(self.component_sizes(|v| v < 0.0)))
    }

    /// Cell counts of the 6-connected components of `{v : inside(v)}`, largest first.
    pub fn component_sizes(&self, inside: impl Fn(f64) -> bool) -> Vec<usize> {
        let n = self.resolution;
        let mut seen = vec![false; self.values.len()];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.values.len() {
            if seen[start] || !inside(self.values[start]) {
                continue;
            }
            let mut size = 0;
            seen[start] = true;
            queue.push_back(start);
            while let Some(idx) = queue.pop_front() {
                size += 1;
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                let mut visit = |i: usize, j: usize, k: usize| {
                    let q = (i * n + j) * n + k;
                    if !seen[q] && inside(self.values[q]) {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                };
                if i > 0 {
                    visit(i - 1, j, k);
                }
                if i + 1 < n {
                    visit(i + 1, j, k);
                }
                if j > 0 {
                    visit(i, j - 1, k);
                }
                if j + 1 < n {
                    visit(i, j + 1, k);
                }
                if k > 0 {
                    visit(i, j, k - 1);
                }
                if k + 1 < n {
                    visit(i, j, k + 1);
                }
            }
            sizes.push(size);
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

/// Class-II parameters with rotationally symmetric Fresnel surfaces: `α = 0`, `β1 = β2 = beta`.
pub fn class_ii_surface_params(beta: f64) -> MetaclassParams {
    MetaclassParams { class: Metaclass::II, alpha: vec![0.0, 0.0], beta: vec![beta, beta] }
}

/// Class-IV parameters with `α1 = α2 = α3 = 0`, `β1 = β2 = 1` and `α4 > 0`
/// chosen so that `D1 = (1 − α4²)/α4` takes the requested value.
pub fn class_iv_surface_params(d1: f64) -> MetaclassParams {
    let a4 = 0.5 * (-d1 + (d1 * d1 + 4.0).sqrt());
    MetaclassParams { class: Metaclass::IV, alpha: vec![0.0, 0.0, 0.0, a4], beta: vec![1.0, 1.0] }
}
