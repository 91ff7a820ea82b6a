use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cpnlab_cli::{emit_report, run_experiment, ExperimentConfig, ReportFormat};

/// Identity experiments for coherent-state quantization on CP^n.
///
/// Exit status: 0 when the experiment passes, 1 when a tolerance fails,
/// 2 on usage or configuration errors.
#[derive(Parser)]
#[command(name = "cpnlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polar-divisor membership against the cut-locus predicate
    Theorem1(RunArgs),
    /// Cayley distance of embedded points reaches pi/2 exactly on the cut locus
    Corollary(RunArgs),
    /// Resolution-of-identity defect through the exact monomial route
    Resolution(RunArgs),
    /// Holomorphic-sector inner product against the Hilbert inner product
    Parseval(RunArgs),
    /// Star product by quadrature against the operator-product oracle
    #[command(name = "star-exactness")]
    StarExactness(RunArgs),
    /// Deformation and commutator defects over N in {2,4,8,16,32}
    Correspondence(RunArgs),
    /// Two-point/characteristic agreement and the dual-route diastasis
    Diastasis(RunArgs),
    /// Constancy of the epsilon function
    Epsilon(RunArgs),
    /// Embedding pullback metric against the closed-form metric
    Isometry(RunArgs),
    /// Overlap vanishing multiplicity equals the level, N <= 10
    #[command(name = "divisor-order")]
    DivisorOrder(RunArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Theorem1(_) => "theorem1",
            Command::Corollary(_) => "corollary",
            Command::Resolution(_) => "resolution",
            Command::Parseval(_) => "parseval",
            Command::StarExactness(_) => "star-exactness",
            Command::Correspondence(_) => "correspondence",
            Command::Diastasis(_) => "diastasis",
            Command::Epsilon(_) => "epsilon",
            Command::Isometry(_) => "isometry",
            Command::DivisorOrder(_) => "divisor-order",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Theorem1(a)
            | Command::Corollary(a)
            | Command::Resolution(a)
            | Command::Parseval(a)
            | Command::StarExactness(a)
            | Command::Correspondence(a)
            | Command::Diastasis(a)
            | Command::Epsilon(a)
            | Command::Isometry(a)
            | Command::DivisorOrder(a) => a,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Complex dimension of CP^n
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Line-bundle level N (the Planck parameter is 1/N)
    #[arg(long, default_value_t = 2)]
    level: usize,
    /// Radial grid points (default 2N + 4)
    #[arg(long)]
    radial: Option<usize>,
    /// Angular grid points (default 4N + 4)
    #[arg(long)]
    angular: Option<usize>,
    /// Cut-locus angle tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Sample count (per-experiment default otherwise)
    #[arg(long)]
    pairs: Option<usize>,
    /// Seed of the ChaCha8 sample stream
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sequential reduction and zeroed wall time for byte-stable reports
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    deterministic: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = cli.command.args();
    let config = ExperimentConfig {
        n: args.n,
        level: args.level,
        radial: args.radial,
        angular: args.angular,
        tol: args.tol,
        pairs: args.pairs,
        seed: args.seed,
        deterministic: args.deterministic,
    };

    let report = match run_experiment(cli.command.name(), &config) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("cpnlab: {err}");
            return ExitCode::from(2);
        }
    };

    let format = match args.format {
        Format::Json => ReportFormat::Json,
        Format::Csv => ReportFormat::Csv,
    };
    if let Err(err) = emit_report(&report, format, args.out.as_deref()) {
        eprintln!("cpnlab: failed to write report: {err}");
        return ExitCode::from(1);
    }

    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
