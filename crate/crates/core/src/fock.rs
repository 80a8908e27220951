//! Density operators truncated to the span of `h_0, ..., h_{D-1}`, their
//! constructors, the rotation `A -> U_t A U_t^*` generated by the
//! oscillator Hamiltonian, parity, and Hermite-function overlap integrals.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::IntervalSet;
use crate::special::{gauss_legendre, hermite_functions_into, ln_factorial};

pub type CMatrix = DMatrix<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
/// Norm lost to truncation above which a constructed state is flagged.
pub const LEAKAGE_THRESHOLD: f64 = 1e-8;

/// A positive trace-one operator in the truncated Hermite basis, with
/// entries `rho[(n, m)] = <h_n| rho |h_m>`.
///
/// Used both for states and for the generating operator of a covariant
/// phase-space observable.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    matrix: CMatrix,
    leakage: f64,
}

impl TruncatedState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let d = matrix.nrows();
        if d == 0 || matrix.ncols() != d {
            return Err(Error::Validation(format!(
                "state matrix must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Validation(
                "state matrix has non-finite entries".into(),
            ));
        }
        for n in 0..d {
            for m in 0..=n {
                let dev = (matrix[(n, m)] - matrix[(m, n)].conj()).norm();
                if dev > HERMITIAN_TOL {
                    return Err(Error::Validation(format!(
                        "Hermitian: |rho[{n},{m}] - conj(rho[{m},{n}])| = {dev:.3e} > {HERMITIAN_TOL:e}"
                    )));
                }
            }
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::Validation(format!(
                "unit trace: trace = {} + {}i",
                trace.re, trace.im
            )));
        }
        let lowest = min_eigenvalue(&matrix);
        if lowest < -PSD_TOL {
            return Err(Error::Validation(format!(
                "positive semidefinite: smallest eigenvalue {lowest:.3e} < -{PSD_TOL:e}"
            )));
        }
        Ok(Self {
            matrix,
            leakage: 0.0,
        })
    }

    /// `|psi><psi|` for a (not necessarily normalized) coefficient vector.
    /// Coefficients beyond `dim` are discarded and counted as leakage.
    pub fn pure(coeffs: &[Complex64], dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("dimension must be at least 1".into()));
        }
        let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let kept: f64 = coeffs.iter().take(dim).map(|c| c.norm_sqr()).sum();
        if !(kept > 0.0) || !total.is_finite() {
            return Err(Error::Validation(
                "pure state has zero norm inside the truncation".into(),
            ));
        }
        let scale = 1.0 / kept.sqrt();
        let mut psi = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        for (slot, c) in psi.iter_mut().zip(coeffs.iter()) {
            *slot = c * scale;
        }
        let matrix = &psi * psi.adjoint();
        Ok(Self {
            matrix,
            leakage: ((total - kept) / total).max(0.0),
        })
    }

    pub fn number(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::Validation(format!(
                "number state {n} does not fit in dimension {dim}"
            )));
        }
        let mut matrix = CMatrix::zeros(dim, dim);
        matrix[(n, n)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            matrix,
            leakage: 0.0,
        })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::number(0, dim)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    #[inline]
    pub fn entry(&self, n: usize, m: usize) -> Complex64 {
        self.matrix[(n, m)]
    }

    /// Relative norm lost when the state was truncated.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn leakage_warning(&self) -> bool {
        self.leakage > LEAKAGE_THRESHOLD
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|n| (0..d).all(|m| n == m || self.matrix[(n, m)].norm() == 0.0))
    }

    /// Highest Fock index carrying weight above `tol`, plus one.
    pub fn support(&self, tol: f64) -> usize {
        let d = self.dim();
        (0..d)
            .rev()
            .find(|&n| (0..d).any(|m| self.matrix[(n, m)].norm() > tol))
            .map_or(0, |n| n + 1)
    }

    /// Embeds into a larger truncation by zero padding.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::Validation(format!(
                "cannot pad dimension {} down to {dim}",
                self.dim()
            )));
        }
        let mut matrix = CMatrix::zeros(dim, dim);
        matrix
            .view_mut((0, 0), (self.dim(), self.dim()))
            .copy_from(&self.matrix);
        Ok(Self {
            matrix,
            leakage: self.leakage,
        })
    }

    /// Frobenius distance between two states of equal dimension.
    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        check_same_dim(self, other)?;
        Ok((&self.matrix - &other.matrix).norm())
    }

    pub(crate) fn from_parts_unchecked(matrix: CMatrix, leakage: f64) -> Self {
        Self { matrix, leakage }
    }

    pub fn to_json(&self) -> String {
        let file = StateFile {
            dim: self.dim(),
            matrix: self
                .matrix
                .transpose()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("state serializes")
    }

    /// Parses the state file format `{"dim": D, "matrix": [[re, im], ...]}`
    /// with the matrix listed row-major.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("state file: {e}")))?;
        if file.matrix.len() != file.dim * file.dim {
            return Err(Error::Validation(format!(
                "state file lists {} entries for dim {}",
                file.matrix.len(),
                file.dim
            )));
        }
        let matrix = CMatrix::from_row_iterator(
            file.dim,
            file.dim,
            file.matrix.iter().map(|[re, im]| Complex64::new(*re, *im)),
        );
        Self::from_matrix(matrix)
    }
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    dim: usize,
    matrix: Vec<[f64; 2]>,
}

pub(crate) fn check_same_dim(a: &TruncatedState, b: &TruncatedState) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

pub(crate) fn min_eigenvalue(m: &CMatrix) -> f64 {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    herm.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Constructor families for [`make_state`].
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Number(usize),
    /// Coherent state with complex amplitude `alpha`.
    Coherent(Complex64),
    /// Squeezed vacuum with squeezing `r`, rotated by `phi`.
    Squeezed {
        r: f64,
        phi: f64,
    },
    /// Pure state from Fock coefficients (normalized on construction).
    Pure(Vec<Complex64>),
    Raw(CMatrix),
}

/// Builds a truncated state of dimension `dim`.
///
/// Coherent: `c_n = exp(-|a|^2/2) a^n / sqrt(n!)`. Squeezed vacuum:
/// `c_{2k} = sqrt(sech r) (-tanh r)^k sqrt((2k)!) / (2^k k!)`, odd
/// coefficients zero, then rotated by `phi`. Lost norm is reported through
/// [`TruncatedState::leakage`].
pub fn make_state(spec: &StateSpec, dim: usize) -> Result<TruncatedState> {
    if dim == 0 {
        return Err(Error::Validation("dimension must be at least 1".into()));
    }
    match spec {
        StateSpec::Number(n) => TruncatedState::number(*n, dim),
        StateSpec::Coherent(alpha) => {
            let (coeffs, kept) = coherent_coefficients(*alpha, dim);
            let mut state = TruncatedState::pure(&coeffs, dim)?;
            state.leakage = (1.0 - kept).max(0.0);
            Ok(state)
        }
        StateSpec::Squeezed { r, phi } => {
            let (coeffs, kept) = squeezed_coefficients(*r, dim);
            let mut state = TruncatedState::pure(&coeffs, dim)?;
            state.leakage = (1.0 - kept).max(0.0);
            Ok(rotate_state(&state, *phi))
        }
        StateSpec::Pure(coeffs) => TruncatedState::pure(coeffs, dim),
        StateSpec::Raw(matrix) => {
            if matrix.nrows() != dim {
                return Err(Error::DimensionMismatch {
                    left: matrix.nrows(),
                    right: dim,
                });
            }
            TruncatedState::from_matrix(matrix.clone())
        }
    }
}

fn coherent_coefficients(alpha: Complex64, dim: usize) -> (Vec<Complex64>, f64) {
    let r2 = alpha.norm_sqr();
    let mut coeffs = Vec::with_capacity(dim);
    let mut kept = 0.0;
    for n in 0..dim {
        let c = if r2 == 0.0 {
            if n == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        } else {
            let log_mag = -0.5 * r2 + n as f64 * alpha.norm().ln() - 0.5 * ln_factorial(n);
            Complex64::from_polar(log_mag.exp(), n as f64 * alpha.arg())
        };
        kept += c.norm_sqr();
        coeffs.push(c);
    }
    (coeffs, kept)
}

fn squeezed_coefficients(r: f64, dim: usize) -> (Vec<Complex64>, f64) {
    let t = r.tanh();
    let log_pref = -0.5 * r.cosh().ln();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
    let mut kept = 0.0;
    for k in 0..dim.div_ceil(2) {
        let c = if t == 0.0 {
            if k == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            let log_mag = log_pref + k as f64 * t.abs().ln() + 0.5 * ln_factorial(2 * k)
                - k as f64 * std::f64::consts::LN_2
                - ln_factorial(k);
            let sign = if t > 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            sign * log_mag.exp()
        };
        kept += c * c;
        coeffs[2 * k] = Complex64::new(c, 0.0);
    }
    (coeffs, kept)
}

impl FromStr for StateSpec {
    type Err = Error;

    /// `vacuum | number:<n> | coherent:<re>,<im> | squeezed:<r>,<phi>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "vacuum" {
            return Ok(Self::Number(0));
        }
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown state spec `{s}`")))?;
        let floats = |args: &str| -> Result<Vec<f64>> {
            args.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("state parameter `{v}`: {e}")))
                })
                .collect()
        };
        match kind {
            "number" => args
                .trim()
                .parse()
                .map(Self::Number)
                .map_err(|e| Error::Parse(format!("number state index `{args}`: {e}"))),
            "coherent" => match floats(args)?.as_slice() {
                [re, im] => Ok(Self::Coherent(Complex64::new(*re, *im))),
                _ => Err(Error::Parse("coherent:<re>,<im> expects two values".into())),
            },
            "squeezed" => match floats(args)?.as_slice() {
                [r, phi] => Ok(Self::Squeezed { r: *r, phi: *phi }),
                _ => Err(Error::Parse("squeezed:<r>,<phi> expects two values".into())),
            },
            _ => Err(Error::Parse(format!("unknown state kind `{kind}`"))),
        }
    }
}

/// `A_t = U_t A U_t^*` with `U_t = exp(i t H)`; entrywise
/// `(A_t)_{nm} = exp(i (n - m) t) A_{nm}`. The global phase of `U_t`
/// cancels.
pub fn rotate_state(state: &TruncatedState, theta: f64) -> TruncatedState {
    let matrix = CMatrix::from_fn(state.dim(), state.dim(), |n, m| {
        let d = n as f64 - m as f64;
        state.matrix[(n, m)] * Complex64::from_polar(1.0, d * theta)
    });
    TruncatedState::from_parts_unchecked(matrix, state.leakage)
}

/// `Pi rho Pi^*` with `Pi h_n = (-1)^n h_n`.
pub fn parity_conjugate(state: &TruncatedState) -> TruncatedState {
    let matrix = CMatrix::from_fn(state.dim(), state.dim(), |n, m| {
        if (n + m) % 2 == 0 {
            state.matrix[(n, m)]
        } else {
            -state.matrix[(n, m)]
        }
    });
    TruncatedState::from_parts_unchecked(matrix, state.leakage)
}

const PANEL_WIDTH: f64 = 0.25;
const PANEL_ORDER: usize = 16;
const PANEL_TOL: f64 = 1e-14;
const MAX_BISECTIONS: u32 = 12;

/// Radius beyond which `h_0, ..., h_{dim-1}` are negligible.
pub fn effective_support(dim: usize) -> f64 {
    (2.0 * dim.saturating_sub(1) as f64 + 1.0).sqrt() + 6.0
}

/// `int_X h_n(x) h_m(x) dx`.
pub fn overlap(set: &IntervalSet, n: usize, m: usize) -> f64 {
    let (lo, hi) = if n <= m { (n, m) } else { (m, n) };
    overlap_matrix(set, hi + 1)[(lo, hi)]
}

/// The symmetric matrix `O[n, m] = int_X h_n h_m dx` for `n, m < dim`.
///
/// Integrates on Gauss-Legendre panels of width at most 0.25, bisecting a
/// panel until its two halves agree with the whole to `1e-14`. Unbounded
/// sets are clipped to [`effective_support`].
pub fn overlap_matrix(set: &IntervalSet, dim: usize) -> DMatrix<f64> {
    let rule = gauss_legendre(PANEL_ORDER);
    let mut acc = vec![0.0; dim * dim];
    let mut scratch = PanelScratch::new(dim);
    for (lo, hi) in set.clipped(effective_support(dim)) {
        let panels = ((hi - lo) / PANEL_WIDTH).ceil().max(1.0) as usize;
        let width = (hi - lo) / panels as f64;
        for k in 0..panels {
            let a = lo + k as f64 * width;
            let b = if k + 1 == panels { hi } else { a + width };
            let whole = scratch.panel(&rule, a, b);
            integrate_adaptive(&rule, a, b, whole, 0, &mut scratch, &mut acc);
        }
    }
    DMatrix::from_fn(dim, dim, |n, m| {
        let (i, j) = if n <= m { (n, m) } else { (m, n) };
        acc[i * dim + j]
    })
}

struct PanelScratch {
    dim: usize,
    h: Vec<f64>,
}

impl PanelScratch {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            h: vec![0.0; dim],
        }
    }

    /// Upper triangle of the panel integral, row-major.
    fn panel(&mut self, rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in rule.0.iter().zip(&rule.1) {
            hermite_functions_into(mid + half * x, &mut self.h);
            let w = w * half;
            for i in 0..d {
                let wi = w * self.h[i];
                if wi == 0.0 {
                    continue;
                }
                let row = &mut out[i * d..(i + 1) * d];
                for j in i..d {
                    row[j] += wi * self.h[j];
                }
            }
        }
        out
    }
}

fn integrate_adaptive(
    rule: &(Vec<f64>, Vec<f64>),
    a: f64,
    b: f64,
    whole: Vec<f64>,
    depth: u32,
    scratch: &mut PanelScratch,
    acc: &mut [f64],
) {
    let mid = 0.5 * (a + b);
    let left = scratch.panel(rule, a, mid);
    let right = scratch.panel(rule, mid, b);
    let err = whole
        .iter()
        .zip(left.iter().zip(&right))
        .map(|(w, (l, r))| (w - l - r).abs())
        .fold(0.0, f64::max);
    if err <= PANEL_TOL || depth >= MAX_BISECTIONS {
        for (slot, (l, r)) in acc.iter_mut().zip(left.iter().zip(&right)) {
            *slot += l + r;
        }
        return;
    }
    integrate_adaptive(rule, a, mid, left, depth + 1, scratch, acc);
    integrate_adaptive(rule, mid, b, right, depth + 1, scratch, acc);
}
