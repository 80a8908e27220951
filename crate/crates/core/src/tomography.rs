//! Quadrature tomography: the observable `E(Theta x X)`, state
//! reconstruction from rotated quadrature densities, and the number-state
//! Markov kernel expressing `g_K` through tomographic data.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{overlap_matrix, CMatrix, TruncatedState};
use crate::grid::{format_sci, Axis};
use crate::linalg::project_to_states;
use crate::phase_space::PhasePoint;
use crate::quadrature::QuadratureDensity;
use crate::sets::{IntervalSet, RotatedFrame};
use crate::special::{
    binomial, dawson_derivatives, hermite_functions, hermite_functions_into, ln_factorial,
    PI_POW_MINUS_QUARTER,
};

use std::f64::consts::TAU;

/// Rotated quadrature densities at `J` equally spaced angles `2 pi j / J`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureDataset {
    xs: Axis,
    values: Vec<Vec<f64>>,
}

impl QuadratureDataset {
    pub fn new(xs: Axis, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("a dataset needs at least one angle".into()));
        }
        if let Some(row) = values.iter().find(|r| r.len() != xs.len) {
            return Err(Error::Length(format!(
                "angle row of {} samples, grid has {}",
                row.len(),
                xs.len
            )));
        }
        Ok(Self { xs, values })
    }

    /// Samples `rho^{Q_t}` on `xs` at `angles` equally spaced angles.
    pub fn generate(rho: &TruncatedState, angles: usize, xs: Axis) -> Result<Self> {
        if angles == 0 {
            return Err(Error::Domain("angle count must be at least 1".into()));
        }
        let points = xs.points();
        let values = (0..angles)
            .into_par_iter()
            .map(|j| {
                let density = QuadratureDensity::new(rho, angle(j, angles));
                let mut h = vec![0.0; rho.dim()];
                points
                    .iter()
                    .map(|&x| density.eval_with(x, &mut h))
                    .collect()
            })
            .collect();
        Self::new(xs, values)
    }

    pub fn angle_count(&self) -> usize {
        self.values.len()
    }

    pub fn angle(&self, j: usize) -> f64 {
        angle(j, self.angle_count())
    }

    pub fn xs(&self) -> Axis {
        self.xs
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Checks non-negativity and unit mass of every angle row.
    pub fn check(&self) -> Result<()> {
        let w = self.xs.trapezoid_weights();
        for (j, row) in self.values.iter().enumerate() {
            if let Some(v) = row.iter().find(|&&v| v < -1e-10 || !v.is_finite()) {
                return Err(Error::Validation(format!(
                    "density at angle {j} is negative or not finite ({v})"
                )));
            }
            let mass: f64 = row.iter().zip(&w).map(|(v, w)| v * w).sum();
            if (mass - 1.0).abs() > 1e-6 {
                return Err(Error::Coverage(format!(
                    "density at angle {j} integrates to {mass}, not 1"
                )));
            }
        }
        Ok(())
    }

    /// `# J x_min x_max step` followed by one row per angle.
    pub fn write(&self, mut out: impl Write) -> Result<()> {
        let mut text = format!(
            "# {} {} {} {}\n",
            self.angle_count(),
            format_sci(self.xs.min),
            format_sci(self.xs.max()),
            format_sci(self.xs.step)
        );
        for row in &self.values {
            let line: Vec<String> = row.iter().map(|&v| format_sci(v)).collect();
            text.push_str(&line.join(" "));
            text.push('\n');
        }
        out.write_all(text.as_bytes())
            .map_err(|e| Error::Parse(format!("writing dataset: {e}")))
    }

    pub fn read(input: impl BufRead) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty dataset".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let fields: Vec<&str> = header
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse("dataset header must start with `#`".into()))?
            .split_whitespace()
            .collect();
        let [j, lo, hi, step] = fields[..] else {
            return Err(Error::Parse(
                "dataset header needs J x_min x_max step".into(),
            ));
        };
        let count: usize = j
            .parse()
            .map_err(|e| Error::Parse(format!("angle count `{j}`: {e}")))?;
        let parse = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|e| Error::Parse(format!("header field `{s}`: {e}")))
        };
        let xs = Axis::from_range(parse(lo)?, parse(hi)?, parse(step)?)?;
        let mut values = Vec::with_capacity(count);
        for line in lines {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|s| {
                    s.parse()
                        .map_err(|e| Error::Parse(format!("value `{s}`: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            values.push(row);
        }
        if values.len() != count {
            return Err(Error::Length(format!(
                "header announces {count} angles, found {} rows",
                values.len()
            )));
        }
        let data = Self::new(xs, values)?;
        data.check()?;
        Ok(data)
    }
}

fn angle(j: usize, count: usize) -> f64 {
    TAU * j as f64 / count as f64
}

/// `(1/2 pi) int_Theta exp(-i d t) dt` over a union of intervals.
fn angular_factor(theta: &IntervalSet, d: i64) -> Complex64 {
    theta
        .intervals()
        .iter()
        .map(|&(a, b)| {
            if d == 0 {
                Complex64::new((b - a) / TAU, 0.0)
            } else {
                let df = d as f64;
                let diff =
                    Complex64::from_polar(1.0, -df * b) - Complex64::from_polar(1.0, -df * a);
                Complex64::i() * diff / (df * TAU)
            }
        })
        .sum()
}

/// `E(Theta x X) = (1/2 pi) int_Theta tr[rho Q_t(X)] dt`.
pub fn tomography_probability(
    rho: &TruncatedState,
    theta: &IntervalSet,
    x: &IntervalSet,
) -> Result<f64> {
    if theta
        .intervals()
        .iter()
        .any(|&(a, b)| a < 0.0 || b > TAU + 1e-12)
    {
        return Err(Error::Domain("angle set must lie inside [0, 2 pi)".into()));
    }
    let d = rho.dim();
    let o = overlap_matrix(x, d);
    let factors: Vec<Complex64> = (0..d as i64).map(|k| angular_factor(theta, k)).collect();
    let m = rho.matrix();
    let mut total = 0.0;
    for n in 0..d {
        for k in 0..d {
            let f = if n >= k {
                factors[n - k]
            } else {
                factors[k - n].conj()
            };
            total += (m[(n, k)] * f).re * o[(n, k)];
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

/// Reconstructed state with the diagnostics of the inversion.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub state: TruncatedState,
    /// Negative eigenvalue weight removed by the projection onto states.
    pub clipped_weight: f64,
    /// Largest condition number over the band systems.
    pub max_condition: f64,
}

const MAX_CONDITION: f64 = 1e10;

/// Recovers a `dim`-dimensional density matrix from noiseless data.
///
/// The band `d = n - m` of `rho` is isolated by the discrete Fourier sum
/// `(1/J) sum_j rho^{Q_{t_j}}(x) exp(i d t_j)`, which is exact for
/// `J >= 2 dim - 1`, and then fitted against `h_{m+d}(x) h_m(x)`.
pub fn reconstruct_state(data: &QuadratureDataset, dim: usize) -> Result<Reconstruction> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let j_count = data.angle_count();
    if j_count < 2 * dim - 1 {
        return Err(Error::Underdetermined(format!(
            "{j_count} angles cannot separate {} Fourier bands; need at least {}",
            dim,
            2 * dim - 1
        )));
    }
    let xs = data.xs().points();
    let mut basis = DMatrix::<f64>::zeros(xs.len(), dim);
    for (i, &x) in xs.iter().enumerate() {
        let mut row = vec![0.0; dim];
        hermite_functions_into(x, &mut row);
        for (n, v) in row.into_iter().enumerate() {
            basis[(i, n)] = v;
        }
    }
    let bands: Vec<Result<(Vec<Complex64>, f64)>> = (0..dim)
        .into_par_iter()
        .map(|d| {
            let cols = dim - d;
            let design = DMatrix::from_fn(xs.len(), cols, |i, m| basis[(i, m + d)] * basis[(i, m)]);
            let mut rhs = DMatrix::<f64>::zeros(xs.len(), 2);
            for (j, row) in data.values().iter().enumerate() {
                let phase = Complex64::from_polar(1.0 / j_count as f64, d as f64 * data.angle(j));
                for (i, v) in row.iter().enumerate() {
                    rhs[(i, 0)] += phase.re * v;
                    rhs[(i, 1)] += phase.im * v;
                }
            }
            let svd = design.svd(true, true);
            let smax = svd.singular_values.max();
            let smin = svd.singular_values.min();
            let cond = if smin > 0.0 {
                smax / smin
            } else {
                f64::INFINITY
            };
            if cond > MAX_CONDITION {
                return Err(Error::Conditioning(cond));
            }
            let sol = svd
                .solve(&rhs, 0.0)
                .map_err(|e| Error::Domain(format!("band {d} least squares: {e}")))?;
            let coeffs = (0..cols)
                .map(|m| Complex64::new(sol[(m, 0)], sol[(m, 1)]))
                .collect();
            Ok((coeffs, cond))
        })
        .collect();
    let mut matrix = CMatrix::zeros(dim, dim);
    let mut max_condition = 0.0_f64;
    for (d, band) in bands.into_iter().enumerate() {
        let (coeffs, cond) = band?;
        max_condition = max_condition.max(cond);
        for (m, c) in coeffs.into_iter().enumerate() {
            let c = if d == 0 { Complex64::new(c.re, 0.0) } else { c };
            matrix[(m + d, m)] = c;
            matrix[(m, m + d)] = c.conj();
        }
    }
    let (projected, clipped_weight) = project_to_states(&matrix);
    let state = TruncatedState::from_matrix(projected)?;
    Ok(Reconstruction {
        state,
        clipped_weight,
        max_condition,
    })
}

/// Evaluation route for [`markov_kernel_number`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelForm {
    Derivative,
    Series,
}

impl std::str::FromStr for KernelForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "derivative" => Ok(Self::Derivative),
            "series" => Ok(Self::Series),
            _ => Err(Error::Parse(format!(
                "kernel form `{s}` is not derivative or series"
            ))),
        }
    }
}

pub const MAX_KERNEL_INDEX: usize = 6;
const SERIES_CAP: usize = 500;
const SERIES_RUN: usize = 5;
const SERIES_REL: f64 = 1e-12;

/// Kernel for `K = |h_n><h_n|` at phase point `pt`, angle `theta`, and
/// quadrature value `x`; depends on them only through `x - q_theta`.
pub fn markov_kernel_number(
    n: usize,
    pt: PhasePoint,
    theta: f64,
    x: f64,
    form: KernelForm,
) -> Result<f64> {
    let (q_theta, _) = RotatedFrame::new(theta).to_rotated(pt.q, pt.p);
    markov_kernel_at(n, x - q_theta, form)
}

/// The kernel at the origin and angle zero, as a function of `t`.
pub fn markov_kernel_at(n: usize, t: f64, form: KernelForm) -> Result<f64> {
    if n > MAX_KERNEL_INDEX {
        return Err(Error::Domain(format!(
            "kernel index {n} exceeds {MAX_KERNEL_INDEX}"
        )));
    }
    match form {
        KernelForm::Derivative => Ok(kernel_derivative(n, t)),
        KernelForm::Series => kernel_series(n, t),
    }
}

/// `sum_u C(n,u) 2^{1-u}/u! F^{(2u+1)}(t)` with `F` Dawson's integral.
fn kernel_derivative(n: usize, t: f64) -> f64 {
    let derivs = dawson_derivatives(t, 2 * n + 1);
    (0..=n)
        .map(|u| {
            binomial(n, u) * 2f64.powi(1 - u as i32) / ln_factorial(u).exp() * derivs[2 * u + 1]
        })
        .sum()
}

/// `sum_{k>=n} C(k,n) (-1)^{k-n} k! / (2^k (2k)!) H_{2k}(t)`, with
/// `H_{2k}(t) = sqrt(2^{2k} (2k)! sqrt(pi)) exp(t^2/2) h_{2k}(t)`.
fn kernel_series(n: usize, t: f64) -> Result<f64> {
    let h = hermite_functions(2 * SERIES_CAP + 2, t);
    let scale = (t * t / 2.0).exp() / PI_POW_MINUS_QUARTER;
    let mut sum = 0.0;
    let mut running_max = 0.0_f64;
    let mut small = 0;
    for k in n..n + SERIES_CAP {
        let sign = if (k - n) % 2 == 0 { 1.0 } else { -1.0 };
        let mag = (ln_factorial(k) - 0.5 * ln_factorial(2 * k)).exp();
        let term = sign * binomial(k, n) * mag * scale * h[2 * k];
        sum += term;
        running_max = running_max.max(term.abs());
        if term.abs() < SERIES_REL * running_max {
            small += 1;
            if small >= SERIES_RUN {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Convergence(format!(
        "kernel series for n = {n} at t = {t} did not settle in {SERIES_CAP} terms"
    )))
}

/// `g_K(q,p)` for `K = |h_n><h_n|` as the angle-average of
/// `int M(t, x) rho^{Q_t}(x) dx` over the dataset angles.
pub fn gk_from_quadrature_data(data: &QuadratureDataset, n: usize, pt: PhasePoint) -> Result<f64> {
    if data.angle_count() < 32 {
        return Err(Error::Domain(format!(
            "{} angles; the kernel average needs at least 32",
            data.angle_count()
        )));
    }
    if data.xs().step > 0.02 + 1e-12 {
        return Err(Error::Domain(format!(
            "grid step {} exceeds 0.02",
            data.xs().step
        )));
    }
    if n > MAX_KERNEL_INDEX {
        return Err(Error::Domain(format!(
            "kernel index {n} exceeds {MAX_KERNEL_INDEX}"
        )));
    }
    let xs = data.xs().points();
    let w = data.xs().trapezoid_weights();
    let per_angle: Vec<f64> = (0..data.angle_count())
        .into_par_iter()
        .map(|j| {
            let (q_theta, _) = RotatedFrame::new(data.angle(j)).to_rotated(pt.q, pt.p);
            data.values()[j]
                .iter()
                .zip(&xs)
                .zip(&w)
                .map(|((v, &x), w)| w * v * kernel_derivative(n, x - q_theta))
                .sum()
        })
        .collect();
    Ok(per_angle.iter().sum::<f64>() / data.angle_count() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::overlap;
    use crate::phase_space::gk_density;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn default_xs() -> Axis {
        Axis::symmetric(8.0, 0.01).unwrap()
    }

    fn sample_state(dim: usize, seed: f64) -> TruncatedState {
        let coeffs: Vec<_> = (0..dim)
            .map(|n| {
                c(
                    (seed * n as f64 + 0.3).sin(),
                    (1.3 * n as f64 + seed).cos() * 0.5,
                )
            })
            .collect();
        TruncatedState::pure(&coeffs, dim).unwrap()
    }

    #[test]
    fn full_observable_has_unit_mass() {
        let rho = sample_state(5, 0.9);
        let full = IntervalSet::interval(0.0, TAU).unwrap();
        let p = tomography_probability(&rho, &full, &IntervalSet::full_line()).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_circle_of_vacuum() {
        let vac = TruncatedState::vacuum(3).unwrap();
        let x = IntervalSet::interval(-0.5, 1.0).unwrap();
        let half = IntervalSet::interval(0.0, PI).unwrap();
        let p = tomography_probability(&vac, &half, &x).unwrap();
        assert!((p - 0.5 * overlap(&x, 0, 0)).abs() < 1e-14);
    }

    #[test]
    fn angle_set_outside_circle_is_rejected() {
        let vac = TruncatedState::vacuum(1).unwrap();
        let bad = IntervalSet::interval(-0.1, 1.0).unwrap();
        assert!(matches!(
            tomography_probability(&vac, &bad, &IntervalSet::full_line()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn partial_angle_set_against_numeric_average() {
        let rho = sample_state(4, 0.3);
        let theta = IntervalSet::interval(0.4, 2.1).unwrap();
        let x = IntervalSet::interval(-0.3, 1.2).unwrap();
        let got = tomography_probability(&rho, &theta, &x).unwrap();
        let (nodes, weights) = crate::special::gauss_legendre(40);
        let mut want = 0.0;
        for (s, w) in nodes.iter().zip(&weights) {
            let t = 1.25 + 0.85 * s;
            want += 0.85 * w * crate::quadrature::quadrature_probability(&rho, t, &x);
        }
        assert!((got - want / TAU).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_examples() {
        for rho in [
            TruncatedState::vacuum(6).unwrap(),
            TruncatedState::number(1, 6).unwrap(),
        ] {
            let data = QuadratureDataset::generate(&rho, 16, default_xs()).unwrap();
            let rec = reconstruct_state(&data, 6).unwrap();
            assert!(rec.state.frobenius_distance(&rho).unwrap() < 1e-8);
        }
        let rho = sample_state(6, 1.7);
        let data = QuadratureDataset::generate(&rho, 16, default_xs()).unwrap();
        let rec = reconstruct_state(&data, 6).unwrap();
        assert!(rec.state.frobenius_distance(&rho).unwrap() < 1e-6);
        assert!(rec.max_condition < 1e3);
    }

    #[test]
    fn too_few_angles_is_underdetermined() {
        let data =
            QuadratureDataset::generate(&TruncatedState::vacuum(2).unwrap(), 10, default_xs())
                .unwrap();
        assert!(matches!(
            reconstruct_state(&data, 6),
            Err(Error::Underdetermined(_))
        ));
    }

    #[test]
    fn ill_conditioned_bands_are_reported() {
        let xs = Axis::from_range(0.0, 0.02, 0.01).unwrap();
        let data =
            QuadratureDataset::generate(&TruncatedState::vacuum(1).unwrap(), 16, xs).unwrap();
        assert!(matches!(
            reconstruct_state(&data, 6),
            Err(Error::Conditioning(_))
        ));
    }

    #[test]
    fn dataset_round_trip_and_checks() {
        let rho = sample_state(3, 0.5);
        let data =
            QuadratureDataset::generate(&rho, 4, Axis::symmetric(8.0, 0.5).unwrap()).unwrap();
        let mut buf = Vec::new();
        data.write(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("# 4 -8.000000000000e+00"));
        let back = QuadratureDataset::read(&buf[..]);
        // A coarse grid still integrates to one for Gaussian-weighted data.
        assert!(back.is_ok());
        assert!(QuadratureDataset::read(&b"# 2 0 1 0.5\n0 0 0\n"[..]).is_err());
        let negative = QuadratureDataset::new(
            Axis::from_range(0.0, 1.0, 0.5).unwrap(),
            vec![vec![1.0, -1.0, 1.0]],
        )
        .unwrap();
        assert!(matches!(negative.check(), Err(Error::Validation(_))));
    }

    #[test]
    fn kernel_at_origin_is_two() {
        let d = markov_kernel_at(0, 0.0, KernelForm::Derivative).unwrap();
        let s = markov_kernel_at(0, 0.0, KernelForm::Series).unwrap();
        assert!((d - 2.0).abs() < 1e-14);
        assert!((s - 2.0).abs() < 1e-10);
    }

    #[test]
    fn kernel_forms_agree() {
        for n in 0..=2 {
            let mut worst = 0.0_f64;
            for i in -400..=400 {
                let t = i as f64 * 0.01;
                let d = markov_kernel_at(n, t, KernelForm::Derivative).unwrap();
                let s = markov_kernel_at(n, t, KernelForm::Series).unwrap();
                worst = worst.max((d - s).abs());
            }
            assert!(worst < 1e-6, "n={n}: {worst:e}");
        }
    }

    #[test]
    fn kernel_index_is_bounded() {
        assert!(markov_kernel_at(7, 0.0, KernelForm::Derivative).is_err());
    }

    #[test]
    fn kernel_is_angle_free_at_origin() {
        for n in 0..=3 {
            let base =
                markov_kernel_number(n, PhasePoint::origin(), 0.0, 0.8, KernelForm::Derivative)
                    .unwrap();
            for &theta in &[0.5, 2.0, 4.4] {
                let v = markov_kernel_number(
                    n,
                    PhasePoint::origin(),
                    theta,
                    0.8,
                    KernelForm::Derivative,
                )
                .unwrap();
                assert!((v - base).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_translation_covariance() {
        let pt = PhasePoint::new(0.7, -1.1);
        let theta = 1.3_f64;
        let q_theta = 0.7 * theta.cos() - 1.1 * theta.sin();
        for form in [KernelForm::Derivative, KernelForm::Series] {
            let a = markov_kernel_number(2, pt, theta, 0.4, form).unwrap();
            let b =
                markov_kernel_number(2, PhasePoint::origin(), 0.0, 0.4 - q_theta, form).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gk_from_tomographic_data() {
        let xs = Axis::symmetric(8.0, 0.02).unwrap();
        let vac = TruncatedState::vacuum(2).unwrap();
        let one = TruncatedState::number(1, 2).unwrap();
        let vdata = QuadratureDataset::generate(&vac, 32, xs).unwrap();
        let odata = QuadratureDataset::generate(&one, 32, xs).unwrap();
        for &(q, p) in &[(0.0, 0.0), (0.5, -1.0), (1.5, 1.0)] {
            let pt = PhasePoint::new(q, p);
            let got = gk_from_quadrature_data(&vdata, 0, pt).unwrap();
            assert!((got - (-(q * q + p * p) / 2.0f64).exp()).abs() < 1e-4);
            let want = gk_density(&one, &vac, pt).unwrap();
            assert!((gk_from_quadrature_data(&odata, 0, pt).unwrap() - want).abs() < 1e-4);
        }
        let coarse = QuadratureDataset::generate(&vac, 16, xs).unwrap();
        assert!(gk_from_quadrature_data(&coarse, 0, PhasePoint::origin()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn marginal_over_all_angles_is_diagonal(
            re in prop::collection::vec(-1.0..1.0f64, 4),
            im in prop::collection::vec(-1.0..1.0f64, 4),
            a in -3.0..1.0f64, len in 0.1..3.0f64,
        ) {
            let coeffs: Vec<_> = re.iter().zip(&im).map(|(&x, &y)| c(x, y)).collect();
            prop_assume!(coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-2);
            let rho = TruncatedState::pure(&coeffs, 4).unwrap();
            let x = IntervalSet::interval(a, a + len).unwrap();
            let full = IntervalSet::interval(0.0, TAU).unwrap();
            let got = tomography_probability(&rho, &full, &x).unwrap();
            let want: f64 = (0..4).map(|n| rho.entry(n, n).re * overlap(&x, n, n)).sum();
            prop_assert!((got - want).abs() < 1e-10);
        }

        #[test]
        fn reconstruction_round_trip(
            re in prop::collection::vec(-1.0..1.0f64, 5),
            im in prop::collection::vec(-1.0..1.0f64, 5),
        ) {
            let coeffs: Vec<_> = re.iter().zip(&im).map(|(&x, &y)| c(x, y)).collect();
            prop_assume!(coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-2);
            let rho = TruncatedState::pure(&coeffs, 5).unwrap();
            let data = QuadratureDataset::generate(&rho, 11, Axis::symmetric(8.0, 0.02).unwrap()).unwrap();
            let rec = reconstruct_state(&data, 5).unwrap();
            prop_assert!(rec.state.frobenius_distance(&rho).unwrap() < 1e-6);
        }
    }
}
