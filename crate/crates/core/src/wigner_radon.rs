//! Wigner functions, the Radon transform of sampled phase-space functions,
//! and the identities `R W_rho = rho^{Q_t}` and `R g_K = 2 pi (K * rho^{Q_t})`.
//!
//! `W_rho(q,p) = (1/pi) tr[rho W Pi W^*]`. Since `W Pi W^* = W(2q,2p) Pi`,
//! the trace reduces to `(1/pi) sum_{ab} rho_ab (-1)^a <b|W(2q,2p)|a>`,
//! which only involves entries inside the truncation.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{check_same_dim, TruncatedState};
use crate::grid::{format_sci, Axis, GridFunction};
use crate::linalg::trace_product;
use crate::phase_space::ConvolutionGrid;
use crate::phase_space::{displacement_block, gk_density, PhasePoint, RotatedMarginal};
use crate::quadrature::QuadratureDensity;
use crate::sets::RotatedFrame;

use std::f64::consts::{PI, TAU};

/// Wigner function at one phase-space point.
pub fn wigner(rho: &TruncatedState, pt: PhasePoint) -> f64 {
    let d = rho.dim();
    let w = displacement_block(pt.scaled(2.0), d, d);
    let m = rho.matrix();
    let mut acc = 0.0;
    for a in 0..d {
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        let mut row = Complex64::new(0.0, 0.0);
        for b in 0..d {
            row += m[(a, b)] * w[(b, a)];
        }
        acc += sign * row.re;
    }
    acc / PI
}

/// `(1/pi) tr[rho W Pi W^*]` with the intermediate sum over Fock states
/// running to `work_dim`; converges to [`wigner`] as `work_dim` grows.
pub fn wigner_defining_trace(rho: &TruncatedState, pt: PhasePoint, work_dim: usize) -> Complex64 {
    let d = rho.dim();
    let work = work_dim.max(d);
    let mut w = displacement_block(pt, d, work);
    let conj = w.adjoint();
    for c in (1..work).step_by(2) {
        w.column_mut(c).neg_mut();
    }
    trace_product(rho.matrix(), &(w * conj)) / PI
}

/// Wigner function sampled on a `q x p` grid.
pub fn sample_wigner(rho: &TruncatedState, q: Axis, p: Axis) -> GridFunction {
    GridFunction::sample_2d(q, p, |q, p| wigner(rho, PhasePoint::new(q, p)))
}

/// `g_K^rho` sampled on a `q x p` grid.
pub fn sample_gk(
    rho: &TruncatedState,
    k: &TruncatedState,
    q: Axis,
    p: Axis,
) -> Result<GridFunction> {
    check_same_dim(rho, k)?;
    Ok(GridFunction::sample_2d(q, p, |q, p| {
        gk_density(rho, k, PhasePoint::new(q, p)).expect("dimensions checked")
    }))
}

/// Line-integration settings for [`radon_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadonOptions {
    /// Points per axis of the tensor Lagrange interpolant; 2 is bilinear.
    pub order: usize,
    /// Half-length of the integration segment; the grid half-extent if `None`.
    pub half_range: Option<f64>,
    /// Largest admissible boundary value of the sampled function.
    pub coverage_tol: f64,
}

impl Default for RadonOptions {
    fn default() -> Self {
        Self {
            order: 6,
            half_range: None,
            coverage_tol: 1e-12,
        }
    }
}

/// Lagrange stencil on one axis: first index and weights.
fn stencil(axis: &Axis, x: f64, order: usize, weights: &mut [f64]) -> Option<usize> {
    let u = (x - axis.min) / axis.step;
    let last = (axis.len - 1) as f64;
    if !(-1e-9..=last + 1e-9).contains(&u) {
        return None;
    }
    let order = order.min(axis.len);
    let base = u.floor() as isize - (order as isize / 2 - 1);
    let start = base.clamp(0, (axis.len - order) as isize) as usize;
    for (k, w) in weights[..order].iter_mut().enumerate() {
        let xk = (start + k) as f64;
        let mut prod = 1.0;
        for j in 0..order {
            if j != k {
                let xj = (start + j) as f64;
                prod *= (u - xj) / (xk - xj);
            }
        }
        *w = prod;
    }
    Some(start)
}

/// Interpolated value of a 2D grid function; zero outside the grid box.
pub fn interpolate(f: &GridFunction, q: f64, p: f64, order: usize) -> f64 {
    let axes = f.axes();
    let mut wq = [0.0; 16];
    let mut wp = [0.0; 16];
    let order = order.clamp(2, 16);
    let (Some(iq), Some(ip)) = (
        stencil(&axes[0], q, order, &mut wq),
        stencil(&axes[1], p, order, &mut wp),
    ) else {
        return 0.0;
    };
    let nq = order.min(axes[0].len);
    let np = order.min(axes[1].len);
    let mut acc = 0.0;
    for a in 0..nq {
        let mut row = 0.0;
        for b in 0..np {
            row += wp[b] * f.get(iq + a, ip + b);
        }
        acc += wq[a] * row;
    }
    acc
}

fn check_coverage(f: &GridFunction, tol: f64) -> Result<()> {
    if !f.is_2d() {
        return Err(Error::Domain("the Radon transform needs a 2D grid".into()));
    }
    let edge = f.boundary_max_abs();
    if edge > tol {
        return Err(Error::Coverage(format!(
            "boundary value {edge:e} exceeds {tol:e}; enlarge the grid"
        )));
    }
    Ok(())
}

fn line_integral(f: &GridFunction, frame: &RotatedFrame, t: f64, opts: &RadonOptions) -> f64 {
    let axes = f.axes();
    let h = axes[0].step.min(axes[1].step);
    let half = opts.half_range.unwrap_or_else(|| {
        [axes[0].min, axes[0].max(), axes[1].min, axes[1].max()]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    });
    let n = (half / h).round() as i64;
    let mut acc = 0.0;
    for k in -n..=n {
        let s = k as f64 * h;
        let (q, p) = frame.from_rotated(t, s);
        let w = if k.abs() == n { 0.5 } else { 1.0 };
        acc += w * interpolate(f, q, p, opts.order);
    }
    acc * h
}

/// `(R f)(t, s) = int f(s cos t - u sin t, s sin t + u cos t) du`.
pub fn radon(f: &GridFunction, theta: f64, t: f64) -> Result<f64> {
    radon_with(f, theta, t, &RadonOptions::default())
}

pub fn radon_with(f: &GridFunction, theta: f64, t: f64, opts: &RadonOptions) -> Result<f64> {
    check_coverage(f, opts.coverage_tol)?;
    Ok(line_integral(f, &RotatedFrame::new(theta), t, opts))
}

/// The Radon transform at one angle for many offsets, in parallel.
pub fn radon_profile(
    f: &GridFunction,
    theta: f64,
    ts: &[f64],
    opts: &RadonOptions,
) -> Result<Vec<f64>> {
    check_coverage(f, opts.coverage_tol)?;
    let frame = RotatedFrame::new(theta);
    Ok(ts
        .par_iter()
        .map(|&t| line_integral(f, &frame, t, opts))
        .collect())
}

/// Sampling box and offsets used by the identity checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadonSetup {
    pub box_half_width: f64,
    pub step: f64,
    pub offsets: Axis,
    pub options: RadonOptions,
}

impl Default for RadonSetup {
    fn default() -> Self {
        Self {
            box_half_width: 8.0,
            step: 0.02,
            offsets: Axis::symmetric(6.0, 0.02).expect("valid axis"),
            options: RadonOptions::default(),
        }
    }
}

impl RadonSetup {
    /// Box half-width `sqrt(2D) + 4` for states of dimension `dim`.
    pub fn for_dim(dim: usize) -> Self {
        let half = ((2.0 * dim as f64).sqrt() + 4.0).max(8.0);
        let half = (half / 0.02).ceil() * 0.02;
        Self {
            box_half_width: half,
            ..Self::default()
        }
    }

    pub fn box_axis(&self) -> Result<Axis> {
        Axis::symmetric(self.box_half_width, self.step)
    }
}

/// `max_s |R(sampled)(t, s) - reference(s)|` over the setup offsets.
pub fn max_radon_deviation(
    sampled: &GridFunction,
    theta: f64,
    setup: &RadonSetup,
    reference: impl Fn(f64) -> f64 + Sync,
) -> Result<f64> {
    let ts = setup.offsets.points();
    let got = radon_profile(sampled, theta, &ts, &setup.options)?;
    Ok(ts
        .par_iter()
        .zip(&got)
        .map(|(&t, g)| (g - reference(t)).abs())
        .reduce(|| 0.0, f64::max))
}

/// `max |R W_rho(t, .) - rho^{Q_t}|` on the setup offsets.
pub fn verify_wigner_radon(rho: &TruncatedState, theta: f64, setup: &RadonSetup) -> Result<f64> {
    let axis = setup.box_axis()?;
    let w = sample_wigner(rho, axis, axis);
    verify_wigner_radon_sampled(rho, &w, theta, setup)
}

/// As [`verify_wigner_radon`] with a precomputed Wigner grid.
pub fn verify_wigner_radon_sampled(
    rho: &TruncatedState,
    sampled: &GridFunction,
    theta: f64,
    setup: &RadonSetup,
) -> Result<f64> {
    let density = QuadratureDensity::new(rho, theta);
    max_radon_deviation(sampled, theta, setup, |x| density.eval(x))
}

/// `max |R g_K(t, .) - 2 pi (K_{pi-t}^Q * rho^{Q_t})|` on the setup offsets.
pub fn verify_gk_radon(
    rho: &TruncatedState,
    k: &TruncatedState,
    theta: f64,
    setup: &RadonSetup,
) -> Result<f64> {
    let axis = setup.box_axis()?;
    let g = sample_gk(rho, k, axis, axis)?;
    verify_gk_radon_sampled(rho, k, &g, theta, setup)
}

pub fn verify_gk_radon_sampled(
    rho: &TruncatedState,
    k: &TruncatedState,
    sampled: &GridFunction,
    theta: f64,
    setup: &RadonSetup,
) -> Result<f64> {
    let marginal = RotatedMarginal::new(rho, k, theta, ConvolutionGrid::default())?;
    let ts = setup.offsets.points();
    let expected = marginal.profile(&ts);
    let got = radon_profile(sampled, theta, &ts, &setup.options)?;
    Ok(got
        .iter()
        .zip(&expected)
        .map(|(g, e)| (g - TAU * e).abs())
        .fold(0.0, f64::max))
}

/// Writes a 2D grid as `# q_min q_max p_min p_max step` followed by one
/// row per `q` sample.
pub fn write_grid_dump(f: &GridFunction, mut out: impl Write) -> Result<()> {
    let axes = f.axes();
    if !f.is_2d() || axes[0].step != axes[1].step {
        return Err(Error::Domain(
            "grid dumps need two axes with a common step".into(),
        ));
    }
    let (q, p) = (axes[0], axes[1]);
    let mut text = format!(
        "# {} {} {} {} {}\n",
        format_sci(q.min),
        format_sci(q.max()),
        format_sci(p.min),
        format_sci(p.max()),
        format_sci(q.step)
    );
    for i in 0..q.len {
        for j in 0..p.len {
            if j > 0 {
                text.push(' ');
            }
            let _ = write!(text, "{}", format_sci(f.get(i, j)));
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Parse(format!("writing grid dump: {e}")))
}

pub fn read_grid_dump(input: impl BufRead) -> Result<GridFunction> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty grid dump".into()))?
        .map_err(|e| Error::Parse(e.to_string()))?;
    let fields: Vec<f64> = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("grid dump header must start with `#`".into()))?
        .split_whitespace()
        .map(|s| {
            s.parse()
                .map_err(|e| Error::Parse(format!("header field `{s}`: {e}")))
        })
        .collect::<Result<_>>()?;
    let [q0, q1, p0, p1, step] = fields[..] else {
        return Err(Error::Parse(
            "grid dump header needs q_min q_max p_min p_max step".into(),
        ));
    };
    let q = Axis::from_range(q0, q1, step)?;
    let p = Axis::from_range(p0, p1, step)?;
    let mut values = Vec::with_capacity(q.len * p.len);
    for line in lines {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|s| {
                s.parse()
                    .map_err(|e| Error::Parse(format!("value `{s}`: {e}")))
            })
            .collect::<Result<_>>()?;
        if row.len() != p.len {
            return Err(Error::Length(format!(
                "row of {} values, expected {}",
                row.len(),
                p.len
            )));
        }
        values.extend(row);
    }
    GridFunction::new(vec![q, p], values)
}
