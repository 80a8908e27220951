//! Uniformly sampled functions on 1D and 2D grids.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform axis `min, min + step, ..., min + (len - 1) step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    /// Builds the axis covering `[min, max]`; `max` must be hit to within
    /// `1e-9` steps.
    pub fn from_range(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::Domain(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if !(max >= min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::Domain(format!("invalid grid range [{min}, {max}]")));
        }
        let cells = (max - min) / step;
        let n = cells.round();
        if (cells - n).abs() > 1e-9 * n.max(1.0) {
            return Err(Error::Domain(format!(
                "range [{min}, {max}] is not a whole number of steps {step}"
            )));
        }
        Ok(Self {
            min,
            step,
            len: n as usize + 1,
        })
    }

    /// Symmetric axis `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, step: f64) -> Result<Self> {
        Self::from_range(-half_width, half_width, step)
    }

    pub fn max(&self) -> f64 {
        self.at(self.len - 1)
    }

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.at(i)).collect()
    }

    /// Composite trapezoid weights.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let mut w = vec![self.step; self.len];
        if self.len > 1 {
            w[0] *= 0.5;
            w[self.len - 1] *= 0.5;
        } else {
            w[0] = 0.0;
        }
        w
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    /// Parses `min:max:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("grid `{s}` is not min:max:step")));
        }
        let mut v = [0.0; 3];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("grid field `{part}`: {e}")))?;
        }
        Self::from_range(v[0], v[1], v[2])
    }
}

/// Samples of a real or complex function on one or two uniform axes.
///
/// Two-dimensional values are stored row-major in the first axis: the value
/// at `(i, j)` is `values[i * axes[1].len + j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction<T = f64> {
    axes: Vec<Axis>,
    values: Vec<T>,
}

impl<T: Copy + Send + Sync> GridFunction<T> {
    pub fn new(axes: Vec<Axis>, values: Vec<T>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::Domain(format!(
                "grid functions have 1 or 2 axes, got {}",
                axes.len()
            )));
        }
        let expected: usize = axes.iter().map(|a| a.len).product();
        if expected != values.len() {
            return Err(Error::Length(format!(
                "{} samples for a grid of {expected} points",
                values.len()
            )));
        }
        Ok(Self { axes, values })
    }

    /// Samples `f` on a 1D axis.
    pub fn sample_1d(axis: Axis, f: impl Fn(f64) -> T + Sync) -> Self {
        let values = (0..axis.len)
            .into_par_iter()
            .map(|i| f(axis.at(i)))
            .collect();
        Self {
            axes: vec![axis],
            values,
        }
    }

    /// Samples `f(q, p)` on the product grid, in parallel over rows.
    pub fn sample_2d(q: Axis, p: Axis, f: impl Fn(f64, f64) -> T + Sync) -> Self {
        let values = (0..q.len * p.len)
            .into_par_iter()
            .map(|k| f(q.at(k / p.len), p.at(k % p.len)))
            .collect();
        Self {
            axes: vec![q, p],
            values,
        }
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_2d(&self) -> bool {
        self.axes.len() == 2
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.axes[1].len + j]
    }
}

impl GridFunction<f64> {
    /// Largest absolute value on the outer boundary of a 2D grid (or the end
    /// points of a 1D grid).
    pub fn boundary_max_abs(&self) -> f64 {
        if !self.is_2d() {
            let n = self.values.len();
            return self.values[0].abs().max(self.values[n - 1].abs());
        }
        let (nq, np) = (self.axes[0].len, self.axes[1].len);
        let mut m = 0.0_f64;
        for j in 0..np {
            m = m.max(self.get(0, j).abs()).max(self.get(nq - 1, j).abs());
        }
        for i in 0..nq {
            m = m.max(self.get(i, 0).abs()).max(self.get(i, np - 1).abs());
        }
        m
    }

    /// Pointwise `a * self + b * other` on identical grids.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.axes != other.axes {
            return Err(Error::Domain("grids differ".into()));
        }
        Ok(Self {
            axes: self.axes.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Trapezoid integral over the whole grid.
    pub fn integrate(&self) -> f64 {
        if !self.is_2d() {
            let w = self.axes[0].trapezoid_weights();
            return w.iter().zip(&self.values).map(|(w, v)| w * v).sum();
        }
        let wq = self.axes[0].trapezoid_weights();
        let wp = self.axes[1].trapezoid_weights();
        let mut total = 0.0;
        for (i, wi) in wq.iter().enumerate() {
            let row: f64 = wp
                .iter()
                .enumerate()
                .map(|(j, wj)| wj * self.get(i, j))
                .sum();
            total += wi * row;
        }
        total
    }
}

/// `printf("%.12e")` formatting: twelve fractional digits and a signed
/// two-digit exponent.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_scientific() {
        assert_eq!(format_sci(1.0), "1.000000000000e+00");
        assert_eq!(format_sci(-0.00123), "-1.230000000000e-03");
        assert_eq!(format_sci(6.02e123), "6.020000000000e+123");
        assert_eq!(format_sci(0.0), "0.000000000000e+00");
    }

    #[test]
    fn axis_parsing_and_points() {
        let a: Axis = "-6:6:0.01".parse().unwrap();
        assert_eq!(a.len, 1201);
        assert!((a.max() - 6.0).abs() < 1e-12);
        assert!("0:1".parse::<Axis>().is_err());
        assert!("0:1:0".parse::<Axis>().is_err());
        assert!("0:1:0.3".parse::<Axis>().is_err());
    }

    #[test]
    fn value_count_checked() {
        let a = Axis::from_range(0.0, 1.0, 0.5).unwrap();
        assert!(GridFunction::new(vec![a], vec![1.0, 2.0]).is_err());
        assert!(GridFunction::new(vec![a, a], vec![0.0; 9]).is_ok());
    }

    #[test]
    fn gaussian_integral_on_grid() {
        let a = Axis::symmetric(8.0, 0.05).unwrap();
        let g = GridFunction::sample_2d(a, a, |q, p| (-(q * q + p * p) / 2.0).exp());
        assert!((g.integrate() - std::f64::consts::TAU).abs() < 1e-10);
        assert!(g.boundary_max_abs() < 1e-13);
        assert_eq!(g.get(160, 160), 1.0);
    }
}
