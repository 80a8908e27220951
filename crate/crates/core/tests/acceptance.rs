//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use common::{random_mixed_state, random_pure_state, rng};
use quadsuite::fock::{CMatrix, TruncatedState};
use quadsuite::grid::Axis;
use quadsuite::linalg::max_abs;
use quadsuite::moments::{
    convolved_moments, gaussian_moments, invert_moments, moment_error, sequential_demo,
    MomentSequence,
};
use quadsuite::phase_space::{rotated_marginal_density, strip_probability, PhasePoint};
use quadsuite::quadrature::{
    commutator_block, quadrature_density, quadrature_moments, saturating_gaussian, trace_pair,
    uncertainty_product, weyl_relation_deviation,
};
use quadsuite::sets::IntervalSet;
use quadsuite::special::{gauss_legendre, hermite_polynomial, ln_factorial};
use quadsuite::tomography::{
    gk_from_quadrature_data, markov_kernel_at, reconstruct_state, KernelForm, QuadratureDataset,
};
use quadsuite::wigner_radon::{
    sample_gk, sample_wigner, verify_gk_radon_sampled, verify_wigner_radon_sampled, RadonSetup,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Check = quadsuite::Result<Outcome>;

fn run(id: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let out = f().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let pass = out.pass && in_time;
    let budget = match limit {
        Some(l) if !in_time => format!("; over the {}s budget", l.as_secs()),
        _ => String::new(),
    };
    println!(
        "criterion {id:>2} {name}: {} ({}; {:.1}s{budget})",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64()
    );
    pass
}

fn wigner_radon_identity() -> Check {
    let mut rng = rng(1);
    let setup = RadonSetup::default();
    let axis = setup.box_axis()?;
    let thetas = [0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_2, 2.0];
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let support = rng.random_range(1..=10);
        let rho = random_pure_state(&mut rng, support, 12);
        let w = sample_wigner(&rho, axis, axis);
        for &theta in &thetas {
            worst = worst.max(verify_wigner_radon_sampled(&rho, &w, theta, &setup)?);
        }
    }
    Ok(outcome(
        worst <= 1e-6,
        format!("max |R W - rho^Q_t| = {worst:.2e}, bound 1e-6"),
    ))
}

fn gk_radon_identity() -> Check {
    let setup = RadonSetup {
        box_half_width: 10.0,
        ..RadonSetup::default()
    };
    let axis = setup.box_axis()?;
    let states = [TruncatedState::vacuum(2)?, TruncatedState::number(1, 2)?];
    let thetas = [0.0, FRAC_PI_3, FRAC_PI_2];
    let mut worst = 0.0_f64;
    for rho in &states {
        for k in &states {
            let g = sample_gk(rho, k, axis, axis)?;
            for &theta in &thetas {
                worst = worst.max(verify_gk_radon_sampled(rho, k, &g, theta, &setup)?);
            }
        }
    }
    let vac = &states[0];
    let mut strip = 0.0_f64;
    for &theta in &thetas {
        for i in -60..=60 {
            let t = i as f64 * 0.1;
            let want = (-t * t / 2.0).exp() / TAU.sqrt();
            strip = strip.max((rotated_marginal_density(vac, vac, theta, t)? - want).abs());
        }
    }
    Ok(outcome(
        worst <= 1e-5 && strip <= 1e-8,
        format!("max |R g - 2 pi marginal| = {worst:.2e} (bound 1e-5), vacuum strip density vs N(0,1) = {strip:.2e} (bound 1e-8)"),
    ))
}

/// `(1/(2^n n! sqrt(pi))) int_X int H_n(x - s)^2 exp(-(x - s)^2) rho^{Q_t}(x) dx ds`.
fn number_strip_oracle(
    rho: &TruncatedState,
    n: usize,
    theta: f64,
    a: f64,
    b: f64,
) -> quadsuite::Result<f64> {
    let norm = 1.0 / ((n as f64) * 2f64.ln() + ln_factorial(n) + 0.5 * PI.ln()).exp();
    let (nodes, weights) = gauss_legendre(20);
    let (outer_nodes, outer_weights) = gauss_legendre(48);
    let panel = 0.5;
    let mut total = 0.0;
    for (u, wu) in outer_nodes.iter().zip(&outer_weights) {
        let s = 0.5 * (a + b) + 0.5 * (b - a) * u;
        let mut inner = 0.0;
        for j in 0..56 {
            let mid = -14.0 + (j as f64 + 0.5) * panel;
            for (v, wv) in nodes.iter().zip(&weights) {
                let x = mid + 0.5 * panel * v;
                let y = x - s;
                let h = hermite_polynomial(n, y)?;
                inner +=
                    0.5 * panel * wv * h * h * (-y * y).exp() * quadrature_density(rho, theta, x);
            }
        }
        total += 0.5 * (b - a) * wu * norm * inner;
    }
    Ok(total)
}

fn number_strip_closed_form() -> Check {
    let mut rng = rng(3);
    let states = [
        TruncatedState::vacuum(4)?,
        TruncatedState::number(1, 4)?,
        random_mixed_state(&mut rng, 4),
        random_pure_state(&mut rng, 4, 4),
    ];
    let x = IntervalSet::interval(0.0, 1.0)?;
    let mut worst = 0.0_f64;
    for rho in &states {
        for n in 0..=2 {
            let k = TruncatedState::number(n, 4)?;
            for &theta in &[0.0, FRAC_PI_4] {
                let got = strip_probability(rho, &k, theta, &x)?;
                let want = number_strip_oracle(rho, n, theta, 0.0, 1.0)?;
                worst = worst.max((got - want).abs());
            }
        }
    }
    Ok(outcome(
        worst <= 1e-8,
        format!("max strip deviation = {worst:.2e}, bound 1e-8"),
    ))
}

fn commutator_identity() -> Check {
    let mut worst = 0.0_f64;
    for &theta in &[FRAC_PI_6, FRAC_PI_2] {
        let block = commutator_block(theta, 40)?;
        let n = block.nrows();
        let target = CMatrix::identity(n, n) * Complex64::new(0.0, theta.sin());
        worst = worst.max(max_abs(&(block - target)));
    }
    Ok(outcome(
        worst <= 1e-10,
        format!("max |[Q, Q_t] - i sin t I| = {worst:.2e}, bound 1e-10"),
    ))
}

fn uncertainty_bound() -> Check {
    let mut rng = rng(5);
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for i in 0..500 {
        let dim = rng.random_range(2..=10);
        let rho = if i % 2 == 0 {
            let support = rng.random_range(1..=dim);
            random_pure_state(&mut rng, support, dim)
        } else {
            random_mixed_state(&mut rng, dim)
        };
        let theta = rng.random_range(0.0..TAU);
        let product = uncertainty_product(&rho, theta)?;
        let bound = theta.sin().powi(2) / 4.0;
        tightest = tightest.min(product - bound);
        if product < bound - 1e-9 {
            violations += 1;
        }
    }
    let mut worst_gap = 0.0_f64;
    for &theta in &[FRAC_PI_6, FRAC_PI_4, FRAC_PI_2] {
        let rho = saturating_gaussian(theta, 60)?;
        let bound = theta.sin().powi(2) / 4.0;
        let product = uncertainty_product(&rho, theta)?;
        worst_gap = worst_gap.max((product - bound).abs() / bound);
    }
    Ok(outcome(
        violations == 0 && worst_gap <= 0.01,
        format!("{violations} violations in 500 states (smallest margin {tightest:.2e}); saturating family within {:.2e} relative, bound 1e-2", worst_gap),
    ))
}

fn trace_formula() -> Check {
    let x = IntervalSet::interval(0.0, 1.0)?;
    let values: Vec<f64> = [50, 100, 200]
        .iter()
        .map(|&d| trace_pair(&x, &x, FRAC_PI_2, d))
        .collect::<quadsuite::Result<_>>()?;
    let limit = 1.0 / TAU;
    let rel = (values[2] - limit).abs() / limit;
    let monotone = values
        .windows(2)
        .all(|w| (w[1] - limit).abs() <= (w[0] - limit).abs());
    Ok(outcome(
        rel <= 0.02 && monotone,
        format!(
            "D=50: {:.6}, D=100: {:.6}, D=200: {:.6}, limit {limit:.6}; relative gap {rel:.2e} (bound 2e-2), monotone approach {monotone}",
            values[0], values[1], values[2]
        ),
    ))
}

fn weyl_relation() -> Check {
    let mut worst = 0.0_f64;
    for i in 0..=4 {
        for j in 0..=4 {
            let q = -0.5 + 0.25 * i as f64;
            let p = -0.5 + 0.25 * j as f64;
            worst = worst.max(weyl_relation_deviation(q, p, 80)?);
        }
    }
    Ok(outcome(
        worst <= 1e-6,
        format!("max deviation = {worst:.2e}, bound 1e-6"),
    ))
}

fn tomographic_completeness() -> Check {
    let mut rng = rng(8);
    let xs = Axis::symmetric(8.0, 0.01)?;
    let mut worst = 0.0_f64;
    for i in 0..10 {
        let rho = if i % 2 == 0 {
            random_mixed_state(&mut rng, 6)
        } else {
            random_pure_state(&mut rng, 6, 6)
        };
        let data = QuadratureDataset::generate(&rho, 16, xs)?;
        let rec = reconstruct_state(&data, 6)?;
        worst = worst.max(rec.state.frobenius_distance(&rho)?);
    }
    Ok(outcome(
        worst <= 1e-6,
        format!("max Frobenius error = {worst:.2e}, bound 1e-6"),
    ))
}

fn markov_kernel() -> Check {
    let mut forms = 0.0_f64;
    for n in 0..=2 {
        for i in -400..=400 {
            let t = i as f64 * 0.01;
            let d = markov_kernel_at(n, t, KernelForm::Derivative)?;
            let s = markov_kernel_at(n, t, KernelForm::Series)?;
            forms = forms.max((d - s).abs());
        }
    }
    let origin = [KernelForm::Derivative, KernelForm::Series]
        .iter()
        .map(|&f| Ok((markov_kernel_at(0, 0.0, f)? - 2.0).abs()))
        .collect::<quadsuite::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let xs = Axis::symmetric(8.0, 0.02)?;
    let k = TruncatedState::vacuum(2)?;
    let mut gk = 0.0_f64;
    for rho in [TruncatedState::vacuum(2)?, TruncatedState::number(1, 2)?] {
        let data = QuadratureDataset::generate(&rho, 32, xs)?;
        for q in [-1.0, 0.0, 1.0] {
            for p in [-1.0, 0.0, 1.0] {
                let pt = PhasePoint::new(q, p);
                let got = gk_from_quadrature_data(&data, 0, pt)?;
                let want = quadsuite::phase_space::gk_density(&rho, &k, pt)?;
                gk = gk.max((got - want).abs());
            }
        }
    }
    Ok(outcome(
        forms <= 1e-6 && origin <= 1e-10 && gk <= 1e-4,
        format!("forms differ by {forms:.2e} (bound 1e-6); |M(0) - 2| = {origin:.2e} (bound 1e-10); g from data off by {gk:.2e} (bound 1e-4)"),
    ))
}

fn random_moment_sequence(rng: &mut impl Rng, k_max: usize) -> quadsuite::Result<MomentSequence> {
    let a = gaussian_moments(
        rng.random_range(-1.0..1.0),
        rng.random_range(0.05..2.0),
        k_max,
    )?;
    let b = gaussian_moments(
        rng.random_range(-1.0..1.0),
        rng.random_range(0.05..2.0),
        k_max,
    )?;
    let w: f64 = rng.random_range(0.0..1.0);
    let values = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| w * x + (1.0 - w) * y)
        .collect();
    MomentSequence::new(values)
}

fn moment_method() -> Check {
    let mut rng = rng(10);
    let support3 = random_pure_state(&mut rng, 3, 3);
    let states = [
        TruncatedState::vacuum(3)?,
        TruncatedState::number(1, 3)?,
        support3,
    ];
    let variances = [0.1, 0.5, 2.0];

    let mut round_trip = 0.0_f64;
    for k_max in 1..=12 {
        let mut pairs = Vec::new();
        for rho in &states {
            let theta = rng.random_range(0.0..TAU);
            let p = MomentSequence::new(quadrature_moments(rho, theta, k_max)?)?;
            for &v in &variances {
                pairs.push((gaussian_moments(0.0, v, k_max)?, p.clone()));
            }
        }
        for _ in 0..20 {
            pairs.push((
                random_moment_sequence(&mut rng, k_max)?,
                random_moment_sequence(&mut rng, k_max)?,
            ));
        }
        for (mu, p) in &pairs {
            let s = convolved_moments(mu, p, k_max)?;
            let back = invert_moments(&s, mu)?;
            round_trip = round_trip.max(moment_error(back.values(), p.values()));
        }
    }

    let mut recovery = 0.0_f64;
    let mut spread = 0.0_f64;
    for rho in &states {
        let reference = sequential_demo(rho, FRAC_PI_3, 0.1, 0.1, 12)?;
        for &mu_var in &variances {
            for &nu_var in &variances {
                let r = sequential_demo(rho, FRAC_PI_3, mu_var, nu_var, 12)?;
                recovery = recovery.max(r.max_relative_error);
                for (a, b) in r.channels.iter().zip(&reference.channels) {
                    spread = spread.max(moment_error(&a.recovered, &b.recovered));
                }
            }
        }
    }
    Ok(outcome(
        round_trip <= 1e-12 && recovery <= 1e-9 && spread <= 1e-9,
        format!("round trip {round_trip:.2e} (bound 1e-12); recovery {recovery:.2e} (bound 1e-9); variance dependence {spread:.2e} (bound 1e-9)"),
    ))
}

fn main() {
    let minutes = |m: u64| Some(Duration::from_secs(60 * m));
    let results = [
        run(
            1,
            "Wigner-Radon identity",
            minutes(2),
            wigner_radon_identity,
        ),
        run(2, "G_K marginal/Radon identity", None, gk_radon_identity),
        run(
            3,
            "number-state strip closed form",
            None,
            number_strip_closed_form,
        ),
        run(4, "commutator", None, commutator_identity),
        run(5, "uncertainty bound", None, uncertainty_bound),
        run(6, "trace formula", None, trace_formula),
        run(7, "Weyl relation", None, weyl_relation),
        run(
            8,
            "tomographic completeness",
            minutes(1),
            tomographic_completeness,
        ),
        run(9, "Markov kernel", minutes(5), markov_kernel),
        run(10, "moment method", None, moment_method),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
