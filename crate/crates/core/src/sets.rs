//! Borel sets on the line as finite interval unions, and rotated frames of
//! the phase plane.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite union of disjoint intervals `(lo, hi)`, sorted ascending.
///
/// Endpoints may be infinite, so the full line and half-lines are
/// representable. Closedness of the endpoints is irrelevant for every
/// quantity computed here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &intervals {
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(Error::Domain(format!("invalid interval ({lo}, {hi})")));
            }
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in intervals.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::Domain(format!(
                    "intervals ({}, {}) and ({}, {}) overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(Self { intervals })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    pub fn full_line() -> Self {
        Self {
            intervals: vec![(f64::NEG_INFINITY, f64::INFINITY)],
        }
    }

    /// `[lo, +inf)`.
    pub fn from(lo: f64) -> Self {
        Self {
            intervals: vec![(lo, f64::INFINITY)],
        }
    }

    pub fn empty() -> Self {
        Self { intervals: vec![] }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Lebesgue measure; infinite for unbounded sets.
    pub fn lebesgue(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals
            .iter()
            .all(|(lo, hi)| lo.is_finite() && hi.is_finite())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= x && x < hi)
    }

    /// The translate `X + shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            intervals: self
                .intervals
                .iter()
                .map(|&(lo, hi)| (lo + shift, hi + shift))
                .collect(),
        }
    }

    /// Intersection with `[-r, r]`, dropping empty pieces.
    pub fn clipped(&self, r: f64) -> Vec<(f64, f64)> {
        self.intervals
            .iter()
            .filter_map(|&(lo, hi)| {
                let lo = lo.max(-r);
                let hi = hi.min(r);
                (lo < hi).then_some((lo, hi))
            })
            .collect()
    }
}

impl std::str::FromStr for IntervalSet {
    type Err = Error;

    /// Parses `lo:hi[,lo:hi...]`; `inf`/`-inf` are accepted as endpoints
    /// and `R` denotes the full line.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "R" || s == "full" {
            return Ok(Self::full_line());
        }
        let mut out = Vec::new();
        for piece in s.split(',') {
            let (lo, hi) = piece
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("interval `{piece}` is not lo:hi")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("interval endpoint `{v}`: {e}")))
            };
            out.push((parse(lo)?, parse(hi)?));
        }
        Self::new(out)
    }
}

/// An orthonormal frame `e1 = (cos t, sin t)`, `e2 = (-sin t, cos t)` of
/// the phase plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedFrame {
    theta: f64,
    cos: f64,
    sin: f64,
}

impl RotatedFrame {
    /// The angle is reduced into `[0, 2 pi)`.
    pub fn new(theta: f64) -> Self {
        let theta = theta.rem_euclid(TAU);
        let (sin, cos) = theta.sin_cos();
        Self { theta, cos, sin }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn e1(&self) -> [f64; 2] {
        [self.cos, self.sin]
    }

    pub fn e2(&self) -> [f64; 2] {
        [-self.sin, self.cos]
    }

    /// `(q_t, p_t) = (q cos t + p sin t, -q sin t + p cos t)`.
    pub fn to_rotated(&self, q: f64, p: f64) -> (f64, f64) {
        (q * self.cos + p * self.sin, -q * self.sin + p * self.cos)
    }

    /// `(q, p) = q_t e1 + p_t e2`.
    pub fn from_rotated(&self, q_t: f64, p_t: f64) -> (f64, f64) {
        (
            q_t * self.cos - p_t * self.sin,
            q_t * self.sin + p_t * self.cos,
        )
    }
}
