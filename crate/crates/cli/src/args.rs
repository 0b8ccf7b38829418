use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::input::InputFormat;

#[derive(Debug, Parser)]
#[command(name = "chains", version, about = "Analyze finite Markov chains and random walks on weighted graphs")]
pub struct Cli {
    /// Row-sum tolerance when validating transition matrices.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for simulation and random constructions.
    #[arg(long, global = true, env = "CHAINS_SEED")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Include intermediate matrices and vectors in the report.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    /// Input format; guessed from the file extension when absent.
    #[arg(long, global = true, value_enum)]
    pub input_format: Option<InputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Chain JSON (`{"states": [...], "P": [[...]]}`) or graph edge list.
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct Spectral {
    /// Distance from a taxonomy boundary that still counts as on it.
    #[arg(long, default_value_t = chains_core::spectral::TAXONOMY_EPS)]
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Normalized,
    Unnormalized,
    Directed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReversibilityTest {
    DetailedBalance,
    Kolmogorov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Additive,
    Multiplicative,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate an input document.
    Validate(Input),
    /// Communicating classes, recurrence, periods and chain-level flags.
    Classify(Input),
    /// Stationary distributions, one per recurrent class.
    Stationary {
        #[command(flatten)]
        input: Input,
        /// Convex weights combining the per-class distributions.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Eigenvalues with taxonomy labels and biorthogonal eigenvectors.
    Spectrum {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        spectral: Spectral,
    },
    /// Taxonomy label of every eigenvalue.
    Taxonomy {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        spectral: Spectral,
    },
    /// Evolve an initial distribution for a number of steps.
    Evolve {
        #[command(flatten)]
        input: Input,
        #[arg(long, short = 'k', default_value_t = 1)]
        steps: usize,
        /// Start from a point mass on this state.
        #[arg(long, conflicts_with = "mu")]
        from: Option<String>,
        /// Initial distribution, comma separated.
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<f64>>,
        /// Also evolve through the eigenbasis and report its parts.
        #[arg(long)]
        spectral: bool,
    },
    /// Sample trajectories; several trajectories give occupancy frequencies.
    Simulate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        from: String,
        /// Number of steps after the start.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        trajectories: usize,
    },
    /// Time reversal and reversibility verdicts.
    Reverse {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = ReversibilityTest::DetailedBalance)]
        test: ReversibilityTest,
    },
    /// Additive or multiplicative reversibilization.
    Reversibilize {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Mode::Additive)]
        mode: Mode,
    },
    /// The symmetrized kernel `Π^{1/2} P Π^{-1/2}`.
    Kmatrix(Input),
    /// Graph Laplacian of an undirected graph, or the directed Laplacian of a chain.
    Laplacian {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Variant::Normalized)]
        variant: Variant,
    },
    /// The smoothest Laplacian eigenvectors and their coordinate transforms.
    Embed {
        #[command(flatten)]
        input: Input,
        #[arg(long, short = 'k')]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Variant::Normalized)]
        variant: Variant,
    },
    /// Graph Fourier transform of a vertex signal.
    Gft {
        #[command(flatten)]
        input: Input,
        /// Signal values in vertex order, comma separated.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        signal: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Variant::Normalized)]
        variant: Variant,
    },
    /// Teleporting random walk and its stationary ranking.
    Pagerank {
        #[command(flatten)]
        input: Input,
        #[arg(long, visible_alias = "alpha", default_value_t = 0.85)]
        damping: f64,
        #[arg(long, default_value_t = chains_core::surfer::PAGERANK_TOL)]
        pagerank_tol: f64,
        #[arg(long, default_value_t = chains_core::surfer::PAGERANK_MAX_ITERS)]
        max_iters: usize,
    },
    /// Canonical form and fundamental matrix of an absorbing chain.
    Absorb(Input),
    /// Balanced and undirected members of the random walk set; scaling to another graph.
    Rwset {
        #[command(flatten)]
        input: Input,
        /// A second graph to compare against.
        #[arg(long)]
        other: Option<PathBuf>,
    },
    /// Birth-death chain on a line and its eigenvector tables.
    DemoLineChain {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0.52)]
        p_right: f64,
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        /// Number of eigenvectors tabulated.
        #[arg(long, short = 'k', default_value_t = 6)]
        k: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Classify(_) => "classify",
            Command::Stationary { .. } => "stationary",
            Command::Spectrum { .. } => "spectrum",
            Command::Taxonomy { .. } => "taxonomy",
            Command::Evolve { .. } => "evolve",
            Command::Simulate { .. } => "simulate",
            Command::Reverse { .. } => "reverse",
            Command::Reversibilize { .. } => "reversibilize",
            Command::Kmatrix(_) => "kmatrix",
            Command::Laplacian { .. } => "laplacian",
            Command::Embed { .. } => "embed",
            Command::Gft { .. } => "gft",
            Command::Pagerank { .. } => "pagerank",
            Command::Absorb(_) => "absorb",
            Command::Rwset { .. } => "rwset",
            Command::DemoLineChain { .. } => "demo-line-chain",
        }
    }
}
