//! `quadsuite`: command-line access to the quadrature, phase-space,
//! tomography and moment routines.

mod inputs;
mod output;

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use quadsuite::fock::{effective_support, TruncatedState};
use quadsuite::grid::{Axis, GridFunction};
use quadsuite::moments::{sequential_demo, DEFAULT_K_MAX};
use quadsuite::phase_space::{strip_probability, PhasePoint};
use quadsuite::quadrature::{
    commutator_block, quadrature_density, saturating_gaussian, trace_pair, trace_pair_limit,
    uncertainty_product,
};
use quadsuite::sets::IntervalSet;
use quadsuite::tomography::{
    markov_kernel_number, reconstruct_state, KernelForm, QuadratureDataset,
};
use quadsuite::wigner_radon::{
    radon_profile, sample_gk, sample_wigner, write_grid_dump, RadonOptions, RadonSetup,
};
use quadsuite::Error;

use crate::inputs::{load_dataset, load_grid, load_state};
use crate::output::{emit, Format, Record, Table};

/// A failed run: exit status and message.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn config(message: impl ToString) -> Self {
        Self {
            code: 2,
            message: message.to_string(),
        }
    }

    pub fn state(err: impl ToString) -> Self {
        Self {
            code: 3,
            message: format!("input state rejected: {}", err.to_string()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Parse(_)
            | Error::Domain(_)
            | Error::DimensionMismatch { .. }
            | Error::Length(_) => 2,
            Error::Validation(_) => 3,
            Error::Range(_)
            | Error::DegeneratePair(_)
            | Error::Coverage(_)
            | Error::Underdetermined(_)
            | Error::Conditioning(_)
            | Error::Convergence(_) => 4,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Self::config(format!("i/o error: {err}"))
    }
}

type Outcome = Result<(), Failure>;

/// Grid spec `min:max:step`.
#[derive(Debug, Clone, Copy)]
struct GridSpec(Axis);

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, step] = parts.as_slice() else {
            return Err(format!("grid `{s}` is not min:max:step"));
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("grid value `{v}`: {e}"))
        };
        Axis::from_range(num(min)?, num(max)?, num(step)?)
            .map(GridSpec)
            .map_err(|e| e.to_string())
    }
}

fn parse_set(s: &str) -> Result<IntervalSet, String> {
    s.parse::<IntervalSet>().map_err(|e| e.to_string())
}

fn parse_form(s: &str) -> Result<KernelForm, String> {
    s.parse::<KernelForm>().map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "quadsuite",
    version,
    about = "Quadrature observables in a truncated Fock basis"
)]
struct Cli {
    /// Worker thread cap.
    #[arg(long, global = true, env = "QUADSUITE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct StateArgs {
    /// vacuum | number:<n> | coherent:<re>,<im> | squeezed:<r>,<phi> | file:<path>
    #[arg(long, default_value = "vacuum")]
    state: String,

    /// Truncation dimension.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
}

impl StateArgs {
    fn dim(&self) -> usize {
        self.dim as usize
    }

    fn load(&self) -> Result<TruncatedState, Failure> {
        load_state(&self.state, self.dim())
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,

    /// csv or json; 2D grids default to the grid dump layout.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl OutputArgs {
    fn write(&self, text: &str) -> Outcome {
        emit(self.output.as_deref(), text).map_err(Failure::from)
    }

    fn table(&self, table: &Table) -> Outcome {
        self.write(&table.render(self.format.unwrap_or(Format::Csv)))
    }

    fn record(&self, record: &Record, default: Format) -> Outcome {
        self.write(&record.render(self.format.unwrap_or(default)))
    }

    fn grid(&self, f: &GridFunction) -> Outcome {
        match self.format {
            None => {
                let mut buf = Vec::new();
                write_grid_dump(f, &mut buf)?;
                self.write(&String::from_utf8(buf).expect("dump is ASCII"))
            }
            Some(format) => {
                let (qa, pa) = (f.axes()[0], f.axes()[1]);
                let mut table = Table::new(&["q", "p", "value"]);
                for i in 0..qa.len {
                    for j in 0..pa.len {
                        table.push(vec![qa.at(i), pa.at(j), f.get(i, j)]);
                    }
                }
                self.write(&table.render(format))
            }
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Samples the quadrature density of a state at angle theta.
    QuadDensity {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value = "-6:6:0.01", allow_hyphen_values = true)]
        grid: GridSpec,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Samples the Wigner function on a square grid.
    Wigner {
        #[command(flatten)]
        state: StateArgs,
        /// Axis used for both q and p.
        #[arg(long, default_value = "-5:5:0.05", allow_hyphen_values = true)]
        grid: GridSpec,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Line integrals of a sampled phase-space function along angle theta.
    Radon {
        /// Grid dump to transform; otherwise the Wigner function of --state.
        #[arg(long, conflicts_with = "state")]
        input: Option<String>,
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        dim: u64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Offsets t of the lines.
        #[arg(long, default_value = "-6:6:0.02", allow_hyphen_values = true)]
        grid: GridSpec,
        /// Interpolation points per axis.
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Samples the covariant phase-space density tr[rho W K W*].
    GkDensity {
        #[command(flatten)]
        state: StateArgs,
        /// Generating operator, same grammar as --state.
        #[arg(long, default_value = "vacuum")]
        kernel: String,
        #[arg(long, default_value = "-5:5:0.05", allow_hyphen_values = true)]
        grid: GridSpec,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Probability of the strip over a set of rotated positions.
    StripProb {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "vacuum")]
        kernel: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Union of intervals `lo:hi,lo:hi`, or R.
        #[arg(long, default_value = "0:1", value_parser = parse_set, allow_hyphen_values = true)]
        set: IntervalSet,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Writes noiseless quadrature data at equally spaced angles.
    TomoGenerate {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
        angles: u64,
        #[arg(long, default_value = "-8:8:0.01", allow_hyphen_values = true)]
        grid: GridSpec,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Reconstructs a density matrix from quadrature data.
    TomoReconstruct {
        #[arg(long)]
        input: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        dim: u64,
        /// Reference state for the Frobenius error.
        #[arg(long)]
        state: Option<String>,
        /// Writes the reconstructed state as JSON.
        #[arg(long)]
        state_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Samples the Markov kernel of K = |h_n><h_n| in x.
    MarkovKernel {
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value = "-4:4:0.05", allow_hyphen_values = true)]
        grid: GridSpec,
        /// derivative or series.
        #[arg(long, default_value = "derivative", value_parser = parse_form)]
        form: KernelForm,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Smears and recovers the moments of two quadratures.
    MomentsDemo {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.5)]
        mu_var: f64,
        #[arg(long, default_value_t = 0.5)]
        nu_var: f64,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Trace formula, commutator and uncertainty bound for the pair (Q, Q_theta).
    ComplementarityReport {
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(3..))]
        dim: u64,
        #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value = "0:1", value_parser = parse_set, allow_hyphen_values = true)]
        x: IntervalSet,
        #[arg(long, default_value = "0:1", value_parser = parse_set, allow_hyphen_values = true)]
        y: IntervalSet,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn run(command: Command) -> Outcome {
    match command {
        Command::QuadDensity {
            state,
            theta,
            grid,
            out,
        } => {
            let rho = state.load()?;
            let mut table = Table::new(&["x", "density"]);
            for x in grid.0.points() {
                table.push(vec![x, quadrature_density(&rho, theta, x)]);
            }
            out.table(&table)
        }
        Command::Wigner { state, grid, out } => {
            let rho = state.load()?;
            out.grid(&sample_wigner(&rho, grid.0, grid.0))
        }
        Command::Radon {
            input,
            state,
            dim,
            theta,
            grid,
            order,
            out,
        } => {
            let f = match input {
                Some(path) => load_grid(&path)?,
                None => {
                    let rho = load_state(state.as_deref().unwrap_or("vacuum"), dim as usize)?;
                    let axis = RadonSetup::for_dim(dim as usize).box_axis()?;
                    sample_wigner(&rho, axis, axis)
                }
            };
            let opts = RadonOptions {
                order,
                ..RadonOptions::default()
            };
            let ts = grid.0.points();
            let values = radon_profile(&f, theta, &ts, &opts)?;
            let mut table = Table::new(&["t", "radon"]);
            for (t, v) in ts.into_iter().zip(values) {
                table.push(vec![t, v]);
            }
            out.table(&table)
        }
        Command::GkDensity {
            state,
            kernel,
            grid,
            out,
        } => {
            let rho = state.load()?;
            let k = load_state(&kernel, state.dim())?;
            out.grid(&sample_gk(&rho, &k, grid.0, grid.0)?)
        }
        Command::StripProb {
            state,
            kernel,
            theta,
            set,
            out,
        } => {
            let rho = state.load()?;
            let k = load_state(&kernel, state.dim())?;
            let prob = strip_probability(&rho, &k, theta, &set)?;
            let record = Record::new()
                .real("theta", theta)
                .real("set_measure", set.lebesgue())
                .real("probability", prob);
            out.record(&record, Format::Csv)
        }
        Command::TomoGenerate {
            state,
            angles,
            grid,
            output,
        } => {
            let rho = state.load()?;
            let data = QuadratureDataset::generate(&rho, angles as usize, grid.0)?;
            let mut buf = Vec::new();
            data.write(&mut buf)?;
            emit(
                output.as_deref(),
                &String::from_utf8(buf).expect("dataset is ASCII"),
            )?;
            Ok(())
        }
        Command::TomoReconstruct {
            input,
            dim,
            state,
            state_out,
            out,
        } => {
            let data = load_dataset(&input)?;
            let rec = reconstruct_state(&data, dim as usize)?;
            let mut record = Record::new()
                .int("dim", dim as usize)
                .int("angles", data.angle_count())
                .real("clipped_weight", rec.clipped_weight)
                .real("max_condition", rec.max_condition);
            if let Some(spec) = state {
                let reference = load_state(&spec, dim as usize)?;
                record = record.real("frobenius_error", rec.state.frobenius_distance(&reference)?);
            }
            if let Some(path) = state_out {
                emit(Some(&path), &rec.state.to_json())?;
            }
            out.record(&record, Format::Json)
        }
        Command::MarkovKernel {
            n,
            q,
            p,
            theta,
            grid,
            form,
            out,
        } => {
            let pt = PhasePoint::new(q, p);
            let mut table = Table::new(&["x", "kernel"]);
            for x in grid.0.points() {
                table.push(vec![x, markov_kernel_number(n, pt, theta, x, form)?]);
            }
            out.table(&table)
        }
        Command::MomentsDemo {
            state,
            theta,
            mu_var,
            nu_var,
            k_max,
            out,
        } => {
            let rho = state.load()?;
            let report = sequential_demo(&rho, theta, mu_var, nu_var, k_max)?;
            match out.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut text =
                        serde_json::to_string_pretty(&report).expect("report serializes");
                    text.push('\n');
                    out.write(&text)
                }
                Format::Csv => {
                    let mut text = String::from("channel,k,ground_truth,smeared,recovered\n");
                    for c in &report.channels {
                        for k in 0..c.ground_truth.len() {
                            let _ = writeln!(
                                text,
                                "{},{},{},{},{}",
                                c.channel,
                                k,
                                quadsuite::grid::format_sci(c.ground_truth[k]),
                                quadsuite::grid::format_sci(c.smeared[k]),
                                quadsuite::grid::format_sci(c.recovered[k]),
                            );
                        }
                    }
                    out.write(&text)
                }
            }
        }
        Command::ComplementarityReport {
            dim,
            theta,
            x,
            y,
            out,
        } => {
            let dim = dim as usize;
            let estimate = trace_pair(&x, &y, theta, dim)?;
            let limit = trace_pair_limit(&x, &y, theta);
            let block = commutator_block(theta, dim)?;
            let expected = Complex64::new(0.0, theta.sin());
            let mut commutator_deviation: f64 = 0.0;
            for i in 0..block.nrows() {
                for j in 0..block.ncols() {
                    let want = if i == j {
                        expected
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    commutator_deviation = commutator_deviation.max((block[(i, j)] - want).norm());
                }
            }
            let gaussian = saturating_gaussian(theta, dim)?;
            let product = uncertainty_product(&gaussian, theta)?;
            let bound = theta.sin().powi(2) / 4.0;
            let record = Record::new()
                .int("dim", dim)
                .real("theta", theta)
                .real("trace_estimate", estimate)
                .real("trace_limit", limit)
                .real("trace_relative_gap", (estimate - limit).abs() / limit)
                .real("commutator_deviation", commutator_deviation)
                .real("uncertainty_product", product)
                .real("uncertainty_bound", bound)
                .real("effective_support", effective_support(dim));
            out.record(&record, Format::Json)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(2),
            };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot size the thread pool: {err}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
