mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flatknot::diagram::Family;
use flatknot::Error;

#[derive(Parser)]
#[command(name = "flatknot", version, about = "Uniformization and resistance energies of planar curves and flat knot diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find the critical amplitude and build the figure-eight critical curve.
    Pendulum {
        /// Even, nonzero number of pendulum swings.
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
        /// Samples on the curve.
        #[arg(long, default_value_t = 1024)]
        n: usize,
        /// Directory for curve.json and curve.svg.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniformization energy of a curve, and optionally a resistance energy.
    Energy {
        /// Diagram or curve JSON.
        input: PathBuf,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Energy density: x, x^2, x^4, ...
        #[arg(long = "f", default_value = "x^2")]
        functional: String,
    },
    /// Count cycles of a diagram, a grid or a woven lattice.
    Cycles {
        #[command(flatten)]
        input: CyclesInput,
        /// Give up after this many cycles.
        #[arg(long, default_value_t = flatknot::diagram::DEFAULT_CYCLE_LIMIT)]
        limit: u64,
    },
    /// Run the gradient flow and write its trace.
    Relax {
        /// Diagram or curve JSON.
        input: PathBuf,
        /// Flow configuration JSON; omitted fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Write an SVG keyframe every this many iterations (0 disables).
        #[arg(long, default_value_t = 10)]
        keyframe_every: usize,
    },
    /// Draw a curve or diagram as SVG.
    Render {
        /// Diagram or curve JSON.
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 480)]
        width: u32,
        #[arg(long, default_value_t = 480)]
        height: u32,
        #[arg(long, default_value_t = 2.0)]
        stroke: f64,
        /// Draw the curve without over/under gaps.
        #[arg(long)]
        no_crossings: bool,
        /// Shade these cycles (indices in canonical order).
        #[arg(long, value_delimiter = ',')]
        cycles: Option<Vec<usize>>,
    },
    /// Run the acceptance suite.
    Verify {
        /// Group names (pendulum, curve, diagram, flow) or criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CyclesInput {
    #[arg(long)]
    diagram: Option<PathBuf>,
    /// The square grid with (n+1)² vertices.
    #[arg(long)]
    grid: Option<usize>,
    /// The woven lattice G*(n).
    #[arg(long)]
    gstar: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Re,
    Mre,
    Gmre,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Re => Family::RE,
            FamilyArg::Mre => Family::MRE,
            FamilyArg::Gmre => Family::GMRE,
        }
    }
}

/// Exit codes.
pub mod code {
    pub const OK: u8 = 0;
    pub const VERIFY_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const SINGULAR: u8 = 3;
    pub const EXPLOSION: u8 = 4;
    pub const FORBIDDEN: u8 = 5;
}

/// A failure with the exit code it maps to.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: code::USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SingularDiagram(_) | Error::CodimensionOne { .. } => code::SINGULAR,
            Error::CycleExplosion { .. } => code::EXPLOSION,
            Error::BracketFailure { .. } | Error::Stalled(_) => code::VERIFY_FAILED,
            _ => code::USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self::usage(e.to_string())
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("FLATKNOT_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Failure::usage(format!("FLATKNOT_THREADS={v} is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    init_threads()?;
    match cli.command {
        Command::Pendulum { r, n, out } => commands::pendulum(r, n, out.as_deref()),
        Command::Energy { input, family, delta, functional } => {
            commands::energy(&input, family.map(Family::from), delta, &functional)
        }
        Command::Cycles { input, limit } => commands::cycles(input.diagram.as_deref(), input.grid, input.gstar, limit),
        Command::Relax { input, config, out, keyframe_every } => {
            commands::relax(&input, config.as_deref(), &out, keyframe_every)
        }
        Command::Render { input, out, width, height, stroke, no_crossings, cycles } => {
            let spec = flatknot::render::RenderSpec { width, height, stroke, show_crossings: !no_crossings, show_cycles: cycles };
            commands::render(&input, &out, &spec)
        }
        Command::Verify { only } => commands::verify(&only),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) => ExitCode::from(c),
        Err(f) => {
            eprintln!("flatknot: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
