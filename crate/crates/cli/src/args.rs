use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sobolev_qg::verify::{ExponentKind, GradedFamily};
use sobolev_qg::{GroupDescriptor, Verdict};

#[derive(Debug, Parser)]
#[command(name = "sobolev-qg", version, about = "Sobolev, Hausdorff-Young and ultracontractivity computations on compact quantum groups")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn group(s: &str) -> Result<GroupDescriptor, String> {
    s.parse().map_err(|e: sobolev_qg::Error| e.to_string())
}

fn family(s: &str) -> Result<GradedFamily, String> {
    s.parse().map_err(|e: sobolev_qg::Error| e.to_string())
}

fn verdict(s: &str) -> Result<Verdict, String> {
    match s {
        "holds" => Ok(Verdict::Holds),
        "violated" => Ok(Verdict::Violated),
        "bounded" => Ok(Verdict::Bounded),
        "divergent" => Ok(Verdict::Divergent),
        "converges" => Ok(Verdict::Converges),
        "inconclusive" => Ok(Verdict::Inconclusive),
        _ => Err(format!("unknown verdict {s:?}")),
    }
}

fn exponent_kind(s: &str) -> Result<ExponentKind, String> {
    s.parse().map_err(|e: sobolev_qg::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct GroupArg {
    /// Group selector: oplus:N, splus:N, fdual:N, zd:d, su2 or so3.
    #[arg(long, value_parser = group)]
    pub group: GroupDescriptor,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions, sphere sizes and ball sizes up to a length.
    Dims {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value_t = 10)]
        kmax: u64,
    },
    /// Growth order and sphere growth envelope.
    Growth {
        #[command(flatten)]
        group: GroupArg,
        /// Largest length used by the growth-order fit.
        #[arg(long, default_value_t = 400)]
        kmax: u64,
    },
    /// Decomposition of a tensor product of two irreducibles.
    Fusion {
        #[command(flatten)]
        group: GroupArg,
        /// First label: a degree, a word such as "aB", or a lattice point such as "1,-2".
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Fourier-side and function-side norms of a coefficient document.
    Norm {
        /// JSON coefficient document.
        #[arg(long)]
        input: PathBuf,
        /// Exponents; "inf" is accepted.
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = vec![1.0, 2.0, f64::INFINITY])]
        p: Vec<f64>,
    },
    /// Operator norm of an element of a free group algebra.
    Fgnorm {
        /// Number of generators.
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// JSON element document.
        #[arg(long, conflicts_with = "radial")]
        input: Option<PathBuf>,
        /// Radial element Σ a_k σ_k given by a_0,a_1,...
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        radial: Option<Vec<f64>>,
        /// Truncation radii; three or more also give an extrapolated limit.
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long, default_value_t = sobolev_qg::freegroup::DEFAULT_TOL)]
        tol: f64,
    },
    /// Small-time scan of t^s times the ultracontractivity series.
    ScanUltra {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 1e-3)]
        tmin: f64,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
        #[arg(long, default_value_t = 60)]
        points: usize,
        /// Exit with status 1 unless the verdict is this one.
        #[arg(long, value_parser = verdict)]
        expect: Option<Verdict>,
    },
    /// Lower-bound scan along the unit test vectors ξ_m.
    ScanSharpness {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 200)]
        mmax: u64,
        /// Cross-check product norms by quadrature up to this m.
        #[arg(long, default_value_t = 40)]
        qmax: u64,
        #[arg(long, value_parser = verdict)]
        expect: Option<Verdict>,
    },
    /// Convergence of Σ c_k (1+k)^{-2s} over a grid of s.
    RdDegree {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        kmax: u64,
    },
    /// Verification batteries.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// Hausdorff-Young on random central elements.
    Hy {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sharpened Hausdorff-Young trend on a graded family.
    Shy {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        p: f64,
        /// Rapid-decay exponent; defaults to the group's.
        #[arg(long)]
        beta: Option<f64>,
        /// xi, single_sphere, dirichlet or geometric.
        #[arg(long, value_parser = family, default_value = "dirichlet")]
        family: GradedFamily,
        #[arg(long, default_value_t = 60)]
        mmax: u64,
    },
    /// Sobolev embedding trend on a graded family.
    Sobolev {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        s: f64,
        #[arg(long, value_parser = family, default_value = "xi")]
        family: GradedFamily,
        #[arg(long, default_value_t = 60)]
        mmax: u64,
    },
    /// Exponent identities behind the sharpness thresholds
    Exponents {
        #[arg(long, value_delimiter = ',', value_parser = exponent_kind, default_value = "hardy_littlewood,sharpened_hy,interpolated_weight,l4_exponent")]
        kind: Vec<ExponentKind>,
        /// Replaces the default exponent grid.
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
    },
    /// Ultracontractivity decision; the expected verdict is bounded iff s ≥ 3.
    Ultra {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        s: f64,
    },
    /// Truncated operator norms against the Haagerup bound.
    Haagerup {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Verify {
                check: Check::Hy { seed, .. } | Check::Haagerup { seed, .. },
            } => Some(*seed),
            _ => None,
        }
    }
}
