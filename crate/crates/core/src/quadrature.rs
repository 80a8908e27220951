//! Rotated quadratures `Q_t = U_t Q U_t^* = Q cos t + P sin t` in the
//! truncated basis, their distributions and moments, and the coupling
//! properties of pairs `(Q, Q_t)`: commutator, preparation uncertainty,
//! the trace formula and the Weyl relation.
//!
//! Sign convention: with `rho[(n, m)] = <h_n|rho|h_m>`,
//! `rho^{Q_t}(x) = sum_{nm} rho_nm exp(-i(n-m)t) h_n(x) h_m(x)`, which is the
//! unrotated density of `U_t^* rho U_t`. This is the convention under which
//! `rho^{Q_t}` equals `rotate_state(rho, -t)` read at `t = 0`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{effective_support, overlap_matrix, rotate_state, CMatrix, TruncatedState};
use crate::fock::{make_state, StateSpec};
use crate::linalg::{expi_hermitian, max_abs, trace_product};
use crate::sets::IntervalSet;
use crate::special::hermite_functions_into;

/// Largest moment order accepted by [`quadrature_moment`].
pub const MAX_MOMENT_ORDER: usize = 64;
/// Moment orders above this need a state with no truncation leakage.
pub const LEAKY_MOMENT_ORDER: usize = 20;

/// Truncated matrix of `Q_t`, with `Q_{n,n+1} = sqrt((n+1)/2)` and
/// `P_{n,n+1} = -i sqrt((n+1)/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureMatrix {
    pub theta: f64,
    pub matrix: CMatrix,
}

impl QuadratureMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

pub fn quadrature_matrix(theta: f64, dim: usize) -> Result<QuadratureMatrix> {
    if dim < 2 {
        return Err(Error::Domain(format!(
            "quadrature matrices need dimension >= 2, got {dim}"
        )));
    }
    Ok(QuadratureMatrix {
        theta,
        matrix: raw_quadrature(theta, dim),
    })
}

// Off-diagonal entries exp(-i t) sqrt((n+1)/2) above the diagonal.
fn raw_quadrature(theta: f64, dim: usize) -> CMatrix {
    let (s, c) = theta.sin_cos();
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        let a = ((n as f64 + 1.0) / 2.0).sqrt();
        let upper = Complex64::new(c * a, -s * a);
        m[(n, n + 1)] = upper;
        m[(n + 1, n)] = upper.conj();
    }
    m
}

pub fn position_matrix(dim: usize) -> CMatrix {
    raw_quadrature(0.0, dim)
}

pub fn momentum_matrix(dim: usize) -> CMatrix {
    raw_quadrature(std::f64::consts::FRAC_PI_2, dim)
}

/// Evaluator for `x -> rho^{Q_t}(x)`, which is the quadratic form
/// `h(x)^T B h(x)` with `B = Re(rotate_state(rho, -t))`.
#[derive(Debug, Clone)]
pub struct QuadratureDensity {
    form: DMatrix<f64>,
}

impl QuadratureDensity {
    pub fn new(state: &TruncatedState, theta: f64) -> Self {
        let rotated = rotate_state(state, -theta);
        Self {
            form: rotated.matrix().map(|z| z.re),
        }
    }

    pub fn dim(&self) -> usize {
        self.form.nrows()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut h = vec![0.0; self.dim()];
        self.eval_with(x, &mut h)
    }

    /// As [`eval`](Self::eval), reusing a caller buffer of length `dim`.
    pub fn eval_with(&self, x: f64, h: &mut [f64]) -> f64 {
        hermite_functions_into(x, h);
        let d = self.dim();
        let mut acc = 0.0;
        for n in 0..d {
            if h[n] == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for m in 0..d {
                row += self.form[(n, m)] * h[m];
            }
            acc += h[n] * row;
        }
        acc
    }
}

/// `rho^{Q_t}(x)`.
pub fn quadrature_density(state: &TruncatedState, theta: f64, x: f64) -> f64 {
    QuadratureDensity::new(state, theta).eval(x)
}

/// `tr[rho Q_t(X)]`, clamped to `[0, 1]`.
pub fn quadrature_probability(state: &TruncatedState, theta: f64, set: &IntervalSet) -> f64 {
    let o = overlap_matrix(set, state.dim());
    let rotated = rotate_state(state, -theta);
    let d = state.dim();
    let mut acc = 0.0;
    for n in 0..d {
        for m in 0..d {
            acc += rotated.entry(n, m).re * o[(n, m)];
        }
    }
    acc.clamp(0.0, 1.0)
}

/// `k`-th raw moment of `rho^{Q_t}`, computed as `tr[rho Q_t^k]` on a
/// truncation enlarged by `k`, which makes the operator power exact on the
/// support of `rho`.
pub fn quadrature_moment(state: &TruncatedState, theta: f64, k: usize) -> Result<f64> {
    Ok(quadrature_moments(state, theta, k)?[k])
}

/// Raw moments of orders `0..=k_max`.
pub fn quadrature_moments(state: &TruncatedState, theta: f64, k_max: usize) -> Result<Vec<f64>> {
    if k_max > MAX_MOMENT_ORDER {
        return Err(Error::Range(format!(
            "moment order {k_max} exceeds {MAX_MOMENT_ORDER}"
        )));
    }
    if k_max > LEAKY_MOMENT_ORDER && state.leakage() >= 1e-10 {
        return Err(Error::Range(format!(
            "moment order {k_max} > {LEAKY_MOMENT_ORDER} needs a state without truncation \
             leakage (leakage {:.3e})",
            state.leakage()
        )));
    }
    let big = state.dim() + k_max + 1;
    let rho = state.padded(big)?;
    let q = raw_quadrature(theta, big);
    let mut power = CMatrix::identity(big, big);
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        if k > 0 {
            power = &power * &q;
        }
        out.push(trace_product(rho.matrix(), &power).re);
    }
    Ok(out)
}

/// Variance of `rho^{Q_t}`.
pub fn quadrature_variance(state: &TruncatedState, theta: f64) -> Result<f64> {
    let m = quadrature_moments(state, theta, 2)?;
    Ok(m[2] - m[1] * m[1])
}

/// `Var(rho^Q) * Var(rho^{Q_t})`; bounded below by `sin^2(t)/4`.
pub fn uncertainty_product(state: &TruncatedState, theta: f64) -> Result<f64> {
    Ok(quadrature_variance(state, 0.0)? * quadrature_variance(state, theta)?)
}

/// Full `[Q, Q_t]` at truncation `dim`, including the corner artifact in
/// the last row and column.
pub fn commutator(theta: f64, dim: usize) -> Result<CMatrix> {
    let q = quadrature_matrix(0.0, dim)?.matrix;
    let qt = quadrature_matrix(theta, dim)?.matrix;
    Ok(&q * &qt - &qt * &q)
}

/// Top-left `(dim - 2) x (dim - 2)` block of `[Q, Q_t]`, which equals
/// `i sin(t) I` away from the truncation edge.
pub fn commutator_block(theta: f64, dim: usize) -> Result<CMatrix> {
    if dim < 4 {
        return Err(Error::Domain(format!(
            "commutator block needs dimension >= 4, got {dim}"
        )));
    }
    let full = commutator(theta, dim)?;
    Ok(full.view((0, 0), (dim - 2, dim - 2)).into_owned())
}

/// Centered pure Gaussian state with covariance
/// `[[v, c], [c, (1/4 + c^2)/v]]`, `v = |sin t|/2`, `c = -v cot t`, for
/// which `Var(Q) Var(Q_t) = sin^2(t)/4`. Realized as a squeezed vacuum
/// rotated onto the minor axis of the covariance ellipse.
pub fn saturating_gaussian(theta: f64, dim: usize) -> Result<TruncatedState> {
    let s = theta.sin();
    if s.abs() < 1e-12 {
        return Err(Error::DegeneratePair(theta));
    }
    let v = s.abs() / 2.0;
    let c = -v * theta.cos() / s;
    let (r, phi) = squeezing_for_covariance(v, c, (0.25 + c * c) / v);
    make_state(&StateSpec::Squeezed { r, phi }, dim)
}

/// Squeezing parameters `(r, phi)` of the pure Gaussian with covariance
/// `[[a, c], [c, b]]` (determinant 1/4): the squeezed variance
/// `exp(-2r)/2` is the smaller eigenvalue and `phi` the angle of its
/// eigenvector.
pub fn squeezing_for_covariance(a: f64, c: f64, b: f64) -> (f64, f64) {
    let mean = 0.5 * (a + b);
    let radius = (0.25 * (a - b) * (a - b) + c * c).sqrt();
    let minor = mean - radius;
    let major_angle = 0.5 * (2.0 * c).atan2(a - b);
    let phi = major_angle + std::f64::consts::FRAC_PI_2;
    let r = -0.5 * (2.0 * minor).ln();
    (r, phi)
}

/// `sum_{n<D} <h_n| Q(X) Q_t(Y) |h_n>`, i.e. `tr[P_D Q(X) P_D Q_t(Y)]` for
/// the projection `P_D` onto the first `D` levels. Tends to
/// `lambda(X) lambda(Y) / (2 pi |sin t|)`.
pub fn trace_pair(x: &IntervalSet, y: &IntervalSet, theta: f64, dim: usize) -> Result<f64> {
    if !x.is_bounded() || !y.is_bounded() {
        return Err(Error::Domain("trace formula needs bounded sets".into()));
    }
    if theta.sin().abs() < 1e-12 {
        return Err(Error::DegeneratePair(theta));
    }
    let ox = overlap_matrix(x, dim);
    let oy = overlap_matrix(y, dim);
    let mut acc = 0.0;
    for n in 0..dim {
        let mut row = 0.0;
        for m in 0..dim {
            row += ox[(n, m)] * oy[(n, m)] * ((m as f64 - n as f64) * theta).cos();
        }
        acc += row;
    }
    Ok(acc)
}

/// Analytic limit of [`trace_pair`].
pub fn trace_pair_limit(x: &IntervalSet, y: &IntervalSet, theta: f64) -> f64 {
    x.lebesgue() * y.lebesgue() / (2.0 * std::f64::consts::PI * theta.sin().abs())
}

/// Max-norm of `exp(-iqP) exp(ipQ) - exp(-iqp) exp(ipQ) exp(-iqP)` on the
/// top-left `dim/2` block, with the exponentials of the truncated
/// operators.
pub fn weyl_relation_deviation(q: f64, p: f64, dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::Domain(format!(
            "Weyl relation check needs dimension >= 2, got {dim}"
        )));
    }
    let shift = expi_hermitian(&momentum_matrix(dim), -q);
    let boost = expi_hermitian(&position_matrix(dim), p);
    let lhs = &shift * &boost;
    let rhs = (&boost * &shift) * Complex64::from_polar(1.0, -q * p);
    let half = dim / 2;
    Ok(max_abs(
        &(lhs - rhs).view((0, 0), (half, half)).into_owned(),
    ))
}

/// Radius outside which `rho^{Q_t}` is negligible for states of dimension
/// `dim`.
pub fn density_support(dim: usize) -> f64 {
    effective_support(dim)
}
