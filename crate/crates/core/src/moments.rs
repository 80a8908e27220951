//! Moment algebra of sequential measurements: binomial convolution of
//! moment sequences, its triangular inverse, and recovery of quadrature
//! statistics from Gaussian-smeared moments.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::TruncatedState;
use crate::quadrature::quadrature_moments;
use crate::special::binomial;

pub const DEFAULT_K_MAX: usize = 12;
pub const MAX_DEMO_ORDER: usize = 16;
const HANKEL_TOL: f64 = 1e-9;

/// Raw moments `m_0 = 1, m_1, ..., m_{k_max}` of a probability measure.
///
/// Sequences produced by [`convolved_moments`] and [`invert_moments`] also
/// carry the rounding residual of each value, so that the ill-conditioned
/// triangular inversion does not amplify the rounding of its input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSequence {
    values: Vec<f64>,
    #[serde(skip)]
    residuals: Vec<f64>,
}

impl MomentSequence {
    /// Validates `m_0 = 1` and positivity of the Hankel matrix `[m_{i+j}]`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let seq = Self::unchecked(values)?;
        let min = seq.hankel_min_eigenvalue();
        let scale = seq.hankel().norm().max(1.0);
        if min < -HANKEL_TOL * scale {
            return Err(Error::Validation(format!(
                "Hankel matrix of the moments is not positive semidefinite (eigenvalue {min:e})"
            )));
        }
        Ok(seq)
    }

    /// Only checks `m_0 = 1`.
    pub fn unchecked(values: Vec<f64>) -> Result<Self> {
        match values.first() {
            Some(&v) if (v - 1.0).abs() <= 1e-12 => Ok(Self::exact(values)),
            Some(&v) => Err(Error::Validation(format!("zeroth moment is {v}, not 1"))),
            None => Err(Error::Length("empty moment sequence".into())),
        }
    }

    fn exact(values: Vec<f64>) -> Self {
        let residuals = vec![0.0; values.len()];
        Self { values, residuals }
    }

    /// Moments of the point mass at zero.
    pub fn delta(k_max: usize) -> Self {
        let mut values = vec![0.0; k_max + 1];
        values[0] = 1.0;
        Self::exact(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn pair(&self, k: usize) -> (f64, f64) {
        (self.values[k], self.residuals[k])
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    fn hankel(&self) -> DMatrix<f64> {
        let half = self.k_max() / 2;
        DMatrix::from_fn(half + 1, half + 1, |i, j| self.values[i + j])
    }

    pub fn hankel_min_eigenvalue(&self) -> f64 {
        self.hankel().symmetric_eigen().eigenvalues.min()
    }

    fn truncated(&self, k_max: usize) -> Self {
        Self {
            values: self.values[..=k_max].to_vec(),
            residuals: self.residuals[..=k_max].to_vec(),
        }
    }

    fn from_accumulators(accs: Vec<Accumulator>) -> Self {
        let (values, residuals) = accs.into_iter().map(|a| a.split()).unzip();
        Self { values, residuals }
    }
}

/// Compensated accumulator for sums of triple products.
#[derive(Default)]
struct Accumulator {
    hi: f64,
    lo: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
        self.lo += err;
    }

    /// Adds `c (b_hi + b_lo)(d_hi + d_lo)` to about twice working precision.
    fn add_product(&mut self, c: f64, b: (f64, f64), d: (f64, f64)) {
        let cb = c * b.0;
        let cb_err = c.mul_add(b.0, -cb);
        let cbd = cb * d.0;
        let cbd_err = cb.mul_add(d.0, -cbd);
        self.add(cbd);
        self.lo += cbd_err + cb_err * d.0 + c * (b.0 * d.1 + b.1 * d.0);
    }

    /// Nearest double and the remaining residual.
    fn split(&self) -> (f64, f64) {
        let hi = self.hi + self.lo;
        (hi, self.lo - (hi - self.hi))
    }
}

/// `s[k] = sum_n C(k,n) mu[k-n] p[n]`: moments of the sum of independent
/// variables.
pub fn convolved_moments(
    mu: &MomentSequence,
    p: &MomentSequence,
    k_max: usize,
) -> Result<MomentSequence> {
    if mu.k_max() < k_max || p.k_max() < k_max {
        return Err(Error::Length(format!(
            "inputs of orders {} and {} do not reach {k_max}",
            mu.k_max(),
            p.k_max()
        )));
    }
    let accs = (0..=k_max)
        .map(|k| {
            let mut acc = Accumulator::default();
            for n in 0..=k {
                acc.add_product(binomial(k, n), mu.pair(k - n), p.pair(n));
            }
            acc
        })
        .collect();
    Ok(MomentSequence::from_accumulators(accs))
}

/// Solves `s = mu * p` for `p` by forward substitution.
pub fn invert_moments(s: &MomentSequence, mu: &MomentSequence) -> Result<MomentSequence> {
    if s.k_max() != mu.k_max() {
        return Err(Error::Length(format!(
            "sequences of orders {} and {}",
            s.k_max(),
            mu.k_max()
        )));
    }
    let mut p: Vec<(f64, f64)> = Vec::with_capacity(s.values.len());
    for k in 0..s.values.len() {
        let mut acc = Accumulator::default();
        let (hi, lo) = s.pair(k);
        acc.add(hi);
        acc.lo += lo;
        for (n, &pn) in p.iter().enumerate() {
            acc.add_product(-binomial(k, n), mu.pair(k - n), pn);
        }
        p.push(acc.split());
    }
    let (values, residuals) = p.into_iter().unzip();
    Ok(MomentSequence { values, residuals })
}

/// Raw moments of `N(mean, var)`.
pub fn gaussian_moments(mean: f64, var: f64, k_max: usize) -> Result<MomentSequence> {
    if !(var >= 0.0) || !mean.is_finite() || !var.is_finite() {
        return Err(Error::Domain(format!(
            "Gaussian needs finite mean and non-negative variance, got ({mean}, {var})"
        )));
    }
    // central[j] = (j-1)!! var^{j/2} for even j.
    let mut central = vec![0.0; k_max + 1];
    central[0] = 1.0;
    for j in (2..=k_max).step_by(2) {
        central[j] = central[j - 2] * (j - 1) as f64 * var;
    }
    let values = (0..=k_max)
        .map(|k| {
            (0..=k)
                .step_by(2)
                .map(|j| binomial(k, j) * mean.powi((k - j) as i32) * central[j])
                .sum()
        })
        .collect();
    Ok(MomentSequence::exact(values))
}

/// One measured channel of [`sequential_demo`].
#[derive(Debug, Clone, Serialize)]
pub struct ChannelReport {
    pub channel: String,
    pub angle: f64,
    pub smearing_variance: f64,
    pub ground_truth: Vec<f64>,
    pub smeared: Vec<f64>,
    pub recovered: Vec<f64>,
    pub max_relative_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SequentialReport {
    pub theta: f64,
    pub k_max: usize,
    pub channels: Vec<ChannelReport>,
    pub max_relative_error: f64,
}

/// `|a - b| / max(1, |b|)`, maximized over the sequence.
pub fn moment_error(got: &[f64], want: &[f64]) -> f64 {
    got.iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Smears the moments of `rho^Q` and `rho^{Q_t}` with centered Gaussians of
/// variances `mu_var` and `nu_var`, inverts both, and compares against the
/// exact quadrature moments.
pub fn sequential_demo(
    rho: &TruncatedState,
    theta: f64,
    mu_var: f64,
    nu_var: f64,
    k_max: usize,
) -> Result<SequentialReport> {
    if k_max > MAX_DEMO_ORDER {
        return Err(Error::Domain(format!(
            "moment order {k_max} exceeds {MAX_DEMO_ORDER}"
        )));
    }
    let channels = [("Q", 0.0, mu_var), ("Q_theta", theta, nu_var)]
        .into_iter()
        .map(|(name, angle, var)| {
            let truth = MomentSequence::unchecked(quadrature_moments(rho, angle, k_max)?)?;
            let smearing = gaussian_moments(0.0, var, k_max)?;
            let smeared = convolved_moments(&smearing, &truth, k_max)?;
            let recovered = invert_moments(&smeared, &smearing)?;
            Ok(ChannelReport {
                channel: name.to_string(),
                angle,
                smearing_variance: var,
                max_relative_error: moment_error(recovered.values(), truth.values()),
                ground_truth: truth.values,
                smeared: smeared.values,
                recovered: recovered.values,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_relative_error = channels
        .iter()
        .map(|c| c.max_relative_error)
        .fold(0.0, f64::max);
    Ok(SequentialReport {
        theta,
        k_max,
        channels,
        max_relative_error,
    })
}

/// Density `exp(-x^2) sum_j c_j x^j` matched to a moment sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteFockDensity {
    coeffs: Vec<f64>,
}

impl FiniteFockDensity {
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        poly * (-x * x).exp()
    }
}

/// `Gamma(k/2)` for `k >= 1`.
fn gamma_half(k: usize) -> f64 {
    let mut g = if k % 2 == 0 {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    let mut x = if k % 2 == 0 { 1.0 } else { 0.5 };
    while 2.0 * x < k as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Solves for the density of a state supported on `dim` Fock levels,
/// whose quadrature densities are `exp(-x^2)` times polynomials of degree
/// at most `2(dim - 1)`, from the moments up to that degree.
pub fn density_from_moments(moments: &MomentSequence, dim: usize) -> Result<FiniteFockDensity> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let size = 2 * dim - 1;
    if moments.k_max() + 1 < size {
        return Err(Error::Length(format!(
            "{} moments cannot fix {size} coefficients",
            moments.k_max() + 1
        )));
    }
    let a = DMatrix::from_fn(size, size, |k, j| {
        if (k + j) % 2 == 0 {
            gamma_half(k + j + 1)
        } else {
            0.0
        }
    });
    let b = DVector::from_column_slice(&moments.truncated(size - 1).values);
    let coeffs = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Conditioning(f64::INFINITY))?;
    Ok(FiniteFockDensity {
        coeffs: coeffs.iter().copied().collect(),
    })
}
