mod commands;
mod error;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser)]
#[command(name = "eigenbound", version, about = "Neumann eigenvalue bounds under curvature pinching")]
struct Cli {
    /// Include wall-clock timings in JSON output.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
pub struct Tolerances {
    /// Relative/absolute tolerance of the radial ODE integrator.
    #[arg(long, default_value_t = 1e-12)]
    pub ode_tol: f64,
    /// Width of the final eigenvalue bracket.
    #[arg(long, default_value_t = 1e-12)]
    pub bisection_tol: f64,
    /// Intervals of the stored eigenfunction grid.
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
}

#[derive(Subcommand)]
enum Command {
    /// First nonzero Neumann eigenvalue of a geodesic ball.
    #[command(name = "mu1-ball", allow_negative_numbers = true)]
    Mu1Ball {
        #[arg(short = 'k', long = "k")]
        k: f64,
        #[arg(short = 'n', long = "dim")]
        n: usize,
        #[arg(short = 'R', long = "radius")]
        radius: f64,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Upper bound C·μ₁(B_k(R)) with all ingredients.
    #[command(allow_negative_numbers = true)]
    Bound {
        #[command(flatten)]
        input: BoundArgs,
        #[arg(short = 'd', long = "diameter")]
        diameter: f64,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Wang's constant (sin_K(d)/sin_k(d))^(2n-2).
    #[command(allow_negative_numbers = true)]
    Wang {
        #[arg(short = 'n', long = "dim")]
        n: usize,
        #[arg(short = 'k', long = "k")]
        k: f64,
        #[arg(short = 'K', long = "big-k")]
        big_k: f64,
        #[arg(short = 'd', long = "diameter")]
        diameter: f64,
    },
    /// Diameter beyond which C is smaller than Wang's constant.
    #[command(allow_negative_numbers = true)]
    Crossover {
        #[command(flatten)]
        input: BoundArgs,
        #[arg(long)]
        dmax: f64,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Verify the bound on a domain or surface described by a JSON file.
    Verify {
        spec: PathBuf,
        /// Override the mesh size from the file.
        #[arg(long)]
        mesh_h: Option<f64>,
        /// Write the coarse mesh of a conformal domain as JSON.
        #[arg(long)]
        dump_mesh: Option<PathBuf>,
    },
    /// Tabulate the bound over a parameter range as CSV.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long)]
        steps: usize,
        #[arg(short = 'n', long = "dim")]
        n: usize,
        #[arg(short = 'k', long = "k")]
        k: Option<f64>,
        #[arg(short = 'K', long = "big-k")]
        big_k: Option<f64>,
        #[arg(short = 'V', long = "volume")]
        volume: Option<f64>,
        #[arg(short = 'd', long = "diameter")]
        diameter: Option<f64>,
        /// Output file; standard output when absent.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Verify every scenario file in a directory.
    Corpus { dir: PathBuf },
}

#[derive(Args, Clone, Copy)]
struct BoundArgs {
    #[arg(short = 'n', long = "dim")]
    n: usize,
    #[arg(short = 'k', long = "k")]
    k: f64,
    #[arg(short = 'K', long = "big-k")]
    big_k: f64,
    #[arg(short = 'V', long = "volume")]
    volume: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    #[value(name = "d")]
    D,
    #[value(name = "V")]
    V,
    #[value(name = "K")]
    BigK,
    #[value(name = "k")]
    K,
    #[value(name = "R")]
    R,
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(value) = std::env::var("EIGENBOUND_THREADS") {
        let threads: usize = value
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| CliError::Usage(format!("EIGENBOUND_THREADS must be a positive integer, got {value:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let timing = cli.timing;
    match cli.command {
        Command::Mu1Ball { k, n, radius, tol } => commands::mu1_ball(k, n, radius, tol, timing),
        Command::Bound { input, diameter, tol } => {
            commands::bound(input.n, input.k, input.big_k, input.volume, diameter, tol, timing)
        }
        Command::Wang { n, k, big_k, diameter } => commands::wang(n, k, big_k, diameter),
        Command::Crossover { input, dmax, tol } => {
            commands::crossover(input.n, input.k, input.big_k, input.volume, dmax, tol, timing)
        }
        Command::Verify { spec, mesh_h, dump_mesh } => commands::verify(&spec, mesh_h, dump_mesh.as_deref(), timing),
        Command::Sweep {
            param,
            lo,
            hi,
            steps,
            n,
            k,
            big_k,
            volume,
            diameter,
            out,
            tol,
        } => commands::sweep(
            commands::SweepSpec {
                param,
                lo,
                hi,
                steps,
                dim: n,
                k,
                big_k,
                volume,
                diameter,
            },
            out.as_deref(),
            tol,
        ),
        Command::Corpus { dir } => commands::corpus(&dir, timing),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::Usage(e.render().to_string().trim().to_owned());
            eprintln!("{}", err.to_json());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
