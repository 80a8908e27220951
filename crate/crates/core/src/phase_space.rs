//! Weyl operators and the covariant phase-space observable `G_K` generated
//! by a positive trace-one operator `K`.
//!
//! The Weyl operator `W(q,p) = exp(iqp/2) exp(-iqP) exp(ipQ)` equals
//! `exp(i(pQ - qP))` by the Baker-Campbell-Hausdorff formula, and hence the
//! displacement `D(a) = exp(a a^+ - conj(a) a)` with `a = (q + ip)/sqrt(2)`.
//! Its matrix elements are
//! `<h_m|W|h_n> = sqrt(n!/m!) a^{m-n} exp(-|a|^2/2) L_n^{(m-n)}(|a|^2)` for
//! `m >= n`, and `<h_m|W|h_n> = (-1)^{n-m} conj(<h_n|W|h_m>)` otherwise.
//!
//! `g_K^rho(q,p) = tr[rho W K W^*]` is the trace density; the probability
//! density of `G_K` in the state `rho` is `g / (2 pi)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{
    check_same_dim, effective_support, parity_conjugate, rotate_state, CMatrix, TruncatedState,
};
use crate::linalg::{expi_hermitian, trace_product};
use crate::quadrature::{momentum_matrix, position_matrix, QuadratureDensity};
use crate::sets::IntervalSet;
use crate::special::{gauss_legendre, ln_factorial};

/// A point `(q, p)` of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    pub fn origin() -> Self {
        Self { q: 0.0, p: 0.0 }
    }

    /// Complex amplitude `(q + ip)/sqrt(2)`.
    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.q, self.p) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.q * s, self.p * s)
    }
}

/// Truncated Weyl operator `W(q,p)` from the Laguerre closed form.
///
/// Every entry is exact (not a truncation of an exponential), so
/// `tr[rho W K W^*]` is exact whenever `rho` and `K` fit in `dim`.
pub fn displacement_matrix(pt: PhasePoint, dim: usize) -> CMatrix {
    displacement_block(pt, dim, dim)
}

/// The `rows x cols` top-left block of `W(q,p)`.
pub fn displacement_block(pt: PhasePoint, rows: usize, cols: usize) -> CMatrix {
    let alpha = pt.alpha();
    let x = alpha.norm_sqr();
    let mut out = CMatrix::zeros(rows, cols);
    if x == 0.0 {
        for n in 0..rows.min(cols) {
            out[(n, n)] = Complex64::new(1.0, 0.0);
        }
        return out;
    }
    let ln_abs = alpha.norm().ln();
    let arg = alpha.arg();
    let size = rows.max(cols);
    let mut ell = vec![0.0; size];
    for k in 0..size {
        // Largest lower index n with n + k inside the block.
        let below = rows.saturating_sub(k).min(cols);
        let above = cols.saturating_sub(k).min(rows);
        let count = below.max(above);
        if count == 0 {
            continue;
        }
        normalized_laguerre(k, x, &mut ell[..count]);
        let pref = (-0.5 * x + k as f64 * ln_abs - 0.5 * ln_factorial(k)).exp();
        let phase = Complex64::from_polar(pref, k as f64 * arg);
        // <m|W|n> for m = n + k, and <n|W|m> = (-1)^k conj(<m|W|n>).
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for (n, &l) in ell[..count].iter().enumerate() {
            let v = phase * l;
            if n + k < rows && n < cols {
                out[(n + k, n)] = v;
            }
            if k > 0 && n < rows && n + k < cols {
                out[(n, n + k)] = v.conj() * sign;
            }
        }
    }
    out
}

/// `ell_n = sqrt(k! n! / (n+k)!) L_n^{(k)}(x)` for `n < out.len()`, by the
/// normalized three-term recurrence
/// `ell_{n+1} = ((2n+1+k-x) ell_n - sqrt(n(n+k)) ell_{n-1}) / sqrt((n+1)(n+k+1))`.
pub fn normalized_laguerre(k: usize, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let kf = k as f64;
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = (1.0 + kf - x) / (1.0 + kf).sqrt();
    }
    for n in 1..out.len().saturating_sub(1) {
        let nf = n as f64;
        out[n + 1] = ((2.0 * nf + 1.0 + kf - x) * out[n] - (nf * (nf + kf)).sqrt() * out[n - 1])
            / ((nf + 1.0) * (nf + kf + 1.0)).sqrt();
    }
}

/// `exp(i(pQ - qP))` of the truncated quadratures, computed on a larger
/// truncation and cut back to `dim`; an independent route to
/// [`displacement_matrix`].
pub fn displacement_matrix_expm(pt: PhasePoint, dim: usize, work_dim: usize) -> CMatrix {
    let work = work_dim.max(dim);
    let generator = position_matrix(work) * Complex64::new(pt.p, 0.0)
        - momentum_matrix(work) * Complex64::new(pt.q, 0.0);
    expi_hermitian(&generator, 1.0)
        .view((0, 0), (dim, dim))
        .into_owned()
}

/// `g_K^rho(q, p) = tr[rho W(q,p) K W(q,p)^*]`.
pub fn gk_density(rho: &TruncatedState, k: &TruncatedState, pt: PhasePoint) -> Result<f64> {
    check_same_dim(rho, k)?;
    let w = displacement_matrix(pt, rho.dim());
    let moved = &w * k.matrix() * w.adjoint();
    Ok(trace_product(rho.matrix(), &moved).re)
}

/// Quadrature grid for the one-dimensional convolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionGrid {
    pub half_width: f64,
    pub step: f64,
}

impl Default for ConvolutionGrid {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            step: 0.005,
        }
    }
}

impl ConvolutionGrid {
    fn nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let n = (2.0 * self.half_width / self.step).round() as usize;
        let xs: Vec<f64> = (0..=n)
            .map(|i| -self.half_width + i as f64 * self.step)
            .collect();
        let mut ws = vec![self.step; n + 1];
        ws[0] *= 0.5;
        ws[n] *= 0.5;
        (xs, ws)
    }
}

/// Density of the unsharp quadrature `mu^{K_{-t}} * Q_t` in the state
/// `rho`, precomputed for repeated evaluation at many points.
///
/// It is the convolution `(K_{pi-t}^Q * rho^{Q_t})(s)`, where
/// `K_{pi-t} = Pi K_{-t} Pi^*`.
pub struct RotatedMarginal {
    smearing: QuadratureDensity,
    xs: Vec<f64>,
    weighted_density: Vec<f64>,
}

impl RotatedMarginal {
    pub fn new(
        rho: &TruncatedState,
        k: &TruncatedState,
        theta: f64,
        grid: ConvolutionGrid,
    ) -> Result<Self> {
        check_same_dim(rho, k)?;
        let smearing = QuadratureDensity::new(&parity_conjugate(&rotate_state(k, -theta)), 0.0);
        let sharp = QuadratureDensity::new(rho, theta);
        let (xs, ws) = grid.nodes();
        let mut h = vec![0.0; rho.dim()];
        let weighted_density = xs
            .iter()
            .zip(&ws)
            .map(|(&x, w)| w * sharp.eval_with(x, &mut h))
            .collect();
        Ok(Self {
            smearing,
            xs,
            weighted_density,
        })
    }

    pub fn eval(&self, s: f64) -> f64 {
        let mut h = vec![0.0; self.smearing.dim()];
        self.xs
            .iter()
            .zip(&self.weighted_density)
            .map(|(&x, &w)| {
                if w == 0.0 {
                    0.0
                } else {
                    w * self.smearing.eval_with(s - x, &mut h)
                }
            })
            .sum()
    }

    /// Evaluates at every point, in parallel.
    pub fn profile(&self, ss: &[f64]) -> Vec<f64> {
        ss.par_iter().map(|&s| self.eval(s)).collect()
    }
}

/// `(K_{pi-t}^Q * rho^{Q_t})(s)` on the default convolution grid.
pub fn rotated_marginal_density(
    rho: &TruncatedState,
    k: &TruncatedState,
    theta: f64,
    s: f64,
) -> Result<f64> {
    Ok(RotatedMarginal::new(rho, k, theta, ConvolutionGrid::default())?.eval(s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Q,
    P,
}

/// Density of the Cartesian marginal `mu^K * Q` (axis `Q`) or `nu^K * P`
/// (axis `P`).
pub fn cartesian_marginal_density(
    rho: &TruncatedState,
    k: &TruncatedState,
    axis: Axis,
    s: f64,
) -> Result<f64> {
    let theta = match axis {
        Axis::Q => 0.0,
        Axis::P => std::f64::consts::FRAC_PI_2,
    };
    rotated_marginal_density(rho, k, theta, s)
}

const STRIP_PANEL: f64 = 0.25;
const STRIP_ORDER: usize = 16;

/// `tr[rho G_K(Z(t, X))]` for the strip `Z(t, X)`: the union of the lines
/// `s e1(t) + R e2(t)` over `s` in `X`.
pub fn strip_probability(
    rho: &TruncatedState,
    k: &TruncatedState,
    theta: f64,
    set: &IntervalSet,
) -> Result<f64> {
    strip_probability_on(rho, k, theta, set, ConvolutionGrid::default())
}

pub fn strip_probability_on(
    rho: &TruncatedState,
    k: &TruncatedState,
    theta: f64,
    set: &IntervalSet,
    grid: ConvolutionGrid,
) -> Result<f64> {
    let marginal = RotatedMarginal::new(rho, k, theta, grid)?;
    let reach = grid.half_width + effective_support(k.dim());
    let (nodes, weights) = gauss_legendre(STRIP_ORDER);
    let mut points = Vec::new();
    let mut point_weights = Vec::new();
    for (lo, hi) in set.clipped(reach) {
        let panels = ((hi - lo) / STRIP_PANEL).ceil().max(1.0) as usize;
        let width = (hi - lo) / panels as f64;
        for j in 0..panels {
            let mid = lo + (j as f64 + 0.5) * width;
            for (x, w) in nodes.iter().zip(&weights) {
                points.push(mid + 0.5 * width * x);
                point_weights.push(0.5 * width * w);
            }
        }
    }
    let values = marginal.profile(&points);
    let total: f64 = values.iter().zip(&point_weights).map(|(v, w)| v * w).sum();
    if !(-1e-9..=1.0 + 1e-9).contains(&total) {
        return Err(Error::Coverage(format!(
            "strip probability {total} outside [0, 1]; convolution grid too small"
        )));
    }
    Ok(total.clamp(0.0, 1.0))
}
