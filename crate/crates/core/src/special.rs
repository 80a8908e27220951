//! Special functions: Hermite polynomials and functions, the Dawson integral
//! and its derivatives, normalized associated Laguerre sequences, and
//! Gauss-Legendre nodes.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest polynomial degree accepted by [`hermite_polynomial`].
pub const MAX_HERMITE_POLY_DEGREE: usize = 4000;
/// Largest index accepted by [`hermite_function`].
pub const MAX_HERMITE_FUNCTION_INDEX: usize = 2000;

/// `pi^{-1/4}`, the value of `h_0(0)`.
pub const PI_POW_MINUS_QUARTER: f64 = 0.751_125_544_464_942_5;

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence
/// `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite_polynomial(n: usize, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_POLY_DEGREE {
        return Err(Error::Range(format!(
            "Hermite degree {n} exceeds {MAX_HERMITE_POLY_DEGREE}"
        )));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    if cur.is_finite() {
        Ok(cur)
    } else {
        Err(Error::Range(format!("H_{n}({x}) overflows f64")))
    }
}

// Beyond this |x| the Gaussian factor is applied in log space.
const DIRECT_GAUSSIAN_LIMIT: f64 = 35.0;
const RESCALE_THRESHOLD: f64 = 1e150;

/// Normalized Hermite function
/// `h_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2)`.
///
/// Uses the normalized recurrence
/// `h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}`, so no factorial
/// is ever formed. Far in the tails the values underflow to zero.
pub fn hermite_function(n: usize, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_FUNCTION_INDEX {
        return Err(Error::Range(format!(
            "Hermite function index {n} exceeds {MAX_HERMITE_FUNCTION_INDEX}"
        )));
    }
    Ok(*hermite_functions(n + 1, x).last().unwrap())
}

/// All Hermite functions `h_0(x), ..., h_{count-1}(x)`.
pub fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; count];
    hermite_functions_into(x, &mut out);
    out
}

/// Fills `out[k] = h_k(x)` for every slot of `out`.
pub fn hermite_functions_into(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    if x.abs() <= DIRECT_GAUSSIAN_LIMIT {
        out[0] = PI_POW_MINUS_QUARTER * (-0.5 * x * x).exp();
        if out.len() > 1 {
            out[1] = std::f64::consts::SQRT_2 * x * out[0];
        }
        for k in 1..out.len().saturating_sub(1) {
            let kf = k as f64;
            out[k + 1] =
                (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        }
        return;
    }

    // Log-scaled path: run the recurrence without the Gaussian and track an
    // accumulated log scale that is folded back in at each index.
    let mut log_scale = -0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = PI_POW_MINUS_QUARTER;
    out[0] = cur * log_scale.exp();
    for k in 0..out.len() - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_THRESHOLD {
            prev /= RESCALE_THRESHOLD;
            cur /= RESCALE_THRESHOLD;
            log_scale += RESCALE_THRESHOLD.ln();
        }
        out[k + 1] = if log_scale < -745.0 && cur.abs() < 1.0 {
            0.0
        } else {
            let mag = cur.abs().ln() + log_scale;
            cur.signum() * mag.exp()
        };
    }
}

/// `ln(n!)`, exact product for small `n` and a corrected Stirling series
/// beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n <= 20 {
        let mut acc = 1.0_f64;
        for k in 2..=n {
            acc *= k as f64;
        }
        return acc.ln();
    }
    let x = n as f64;
    let x2 = x * x;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2)
}

/// Binomial coefficient as a float, exact for all values that fit in 2^53.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0_f64;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc.round()
}

const DAWSON_SERIES_LIMIT: f64 = 6.0;

/// Dawson's integral `F(t) = exp(-t^2) * int_0^t exp(y^2) dy`.
///
/// For `|t| <= 6` the positive series `sum t^{2k+1} / (k! (2k+1))` is summed
/// and multiplied by `exp(-t^2)`; it has no cancellation. Beyond that the
/// asymptotic series `1/(2t) sum (2k-1)!! / (2t^2)^k` is used, whose
/// smallest term is below `1e-14` there.
pub fn dawson(t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let a = t.abs();
    let value = if a <= DAWSON_SERIES_LIMIT {
        let a2 = a * a;
        let mut term = a;
        let mut sum = a;
        let mut k = 0usize;
        loop {
            k += 1;
            let kf = k as f64;
            term *= a2 / kf;
            let contrib = term / (2.0 * kf + 1.0);
            sum += contrib;
            if contrib < sum * 1e-17 {
                break;
            }
        }
        sum * (-a2).exp()
    } else {
        let inv = 1.0 / (2.0 * a * a);
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            let next = term * (2 * k - 1) as f64 * inv;
            if next >= term {
                break;
            }
            term = next;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum / (2.0 * a)
    };
    value.copysign(t)
}

/// `[F(t), F'(t), ..., F^{(order)}(t)]` for Dawson's integral, from
/// `F' = 1 - 2tF` and `F^{(k+1)} = -2t F^{(k)} - 2k F^{(k-1)}`.
pub fn dawson_derivatives(t: f64, order: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(order + 1);
    out.push(dawson(t));
    if order >= 1 {
        out.push(1.0 - 2.0 * t * out[0]);
    }
    for k in 1..order {
        let next = -2.0 * t * out[k] - 2.0 * k as f64 * out[k - 1];
        out.push(next);
    }
    out
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
