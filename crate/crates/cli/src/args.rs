use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact δ-derivations and transposed Poisson structures on graded Lie algebras.
#[derive(Parser, Debug)]
#[command(name = "lietp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads for per-degree solves (0: one per core).
    #[arg(long, env = "LIETP_THREADS", global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the built-in algebras, or the families of one of them.
    Catalog(CatalogArgs),
    /// Sample random triples and check the Jacobi identity.
    Jacobi(JacobiArgs),
    /// Solve for δ-derivations on a window and report interior ranks.
    Derive(DeriveArgs),
    /// Verify a commutative product against the transposed Poisson laws.
    Tp(TpArgs),
    /// Parse and compile a .liealg file.
    Compile(CompileArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Catalog(_) => "catalog",
            Command::Jacobi(_) => "jacobi",
            Command::Derive(_) => "derive",
            Command::Tp(_) => "tp",
            Command::Compile(_) => "compile",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraArgs {
    /// Built-in algebra (see `lietp catalog`).
    #[arg(long, conflicts_with = "file")]
    pub name: Option<String>,

    /// Algebra definition in .liealg format.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,

    /// Deformation parameter λ of g(G,λ); with --file, binds `lambda`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,

    /// Rank ν of G ⊂ ℂ.
    #[arg(long)]
    pub rank: Option<usize>,

    /// Generator values ε₁,...,ε_ν (ε₁ = 1); default formal e2, e3, ...
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub gens: Option<Vec<String>>,

    /// Parameter binding for --file, NAME=VALUE (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct WindowArgs {
    /// Degree box per coordinate, e.g. -6..6 or -3..3,-2..2.
    #[arg(long, allow_hyphen_values = true)]
    pub gbox: Option<String>,

    /// Index interval for indexed families, e.g. 0..6.
    #[arg(long, allow_hyphen_values = true)]
    pub ibox: Option<String>,

    /// Restrict the window to these families (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    #[command(flatten)]
    pub alg: AlgebraArgs,
}

#[derive(Args, Debug)]
pub struct JacobiArgs {
    #[command(flatten)]
    pub alg: AlgebraArgs,

    /// Number of random triples.
    #[arg(long, default_value_t = 500)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Sampled degree coordinates, e.g. -5..5.
    #[arg(long, default_value = "-5..5", allow_hyphen_values = true)]
    pub degrees: String,

    /// Sampled indices, e.g. 0..4 (ℤ₊ families) or -4..4 (ℤ families).
    #[arg(long, allow_hyphen_values = true)]
    pub indices: Option<String>,
}

#[derive(Args, Debug)]
pub struct DeriveArgs {
    #[command(flatten)]
    pub alg: AlgebraArgs,

    #[command(flatten)]
    pub window: WindowArgs,

    /// Boundary layer excluded from the interior.
    #[arg(long, default_value_t = 2)]
    pub margin: i64,

    /// Index padding for unknown images (default: the margin).
    #[arg(long)]
    pub pad: Option<i64>,

    /// δ in φ([x,y]) = δ([φx,y] + [x,φy]).
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    pub delta: String,

    /// `all` (one solve per degree), `mixed` (one solve over every shift) or
    /// a degree such as 0 or 1,-1.
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    pub degree: String,

    /// Number of basis coefficients printed per vector in tables.
    #[arg(long, default_value_t = 8)]
    pub show: usize,
}

#[derive(Args, Debug)]
pub struct TpArgs {
    #[command(flatten)]
    pub alg: AlgebraArgs,

    #[command(flatten)]
    pub window: WindowArgs,

    /// Product description (JSON).
    #[arg(long, value_name = "PATH")]
    pub product: PathBuf,
}

#[derive(Args, Debug)]
pub struct CompileArgs {
    /// Algebra definition in .liealg format.
    #[arg(long, value_name = "PATH")]
    pub file: PathBuf,

    /// Parameter binding, NAME=VALUE (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,

    #[arg(long)]
    pub rank: Option<usize>,

    /// Random bindings per clause for the antisymmetry check.
    #[arg(long, default_value_t = lietp_core::dsl::DEFAULT_SAMPLES)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Print the file in canonical form instead of a summary.
    #[arg(long)]
    pub canonical: bool,
}
