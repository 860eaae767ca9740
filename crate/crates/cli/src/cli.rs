use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::forms::FormId;

#[derive(Debug, Parser)]
#[command(name = "siegelfc", version, about = "Fourier coefficients of Siegel cusp forms of degree two")]
pub struct Cli {
    /// Cache directory (default: $SIEGELFC_CACHE_DIR, else ./.siegelfc-cache).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

/// How the sieve modulus `M` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MPolicy {
    /// Primorial from the ratio-lemma scan, joined with the primes of the level.
    Auto,
    Fixed(u64),
}

impl std::str::FromStr for MPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(MPolicy::Auto);
        }
        s.parse::<u64>()
            .map(MPolicy::Fixed)
            .map_err(|_| format!("expected `auto` or a positive integer, got {s:?}"))
    }
}

impl std::fmt::Display for MPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MPolicy::Auto => f.write_str("auto"),
            MPolicy::Fixed(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a lift up to a determinant bound and store it in the cache.
    Build {
        #[arg(long)]
        form: FormId,
        #[arg(long = "det-bound")]
        det_bound: u64,
    },
    /// Print one coefficient a(F, T) for T given as n,r,m.
    Coeff {
        #[arg(long)]
        form: FormId,
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        t: Vec<i64>,
    },
    /// Fourier-Jacobi coefficient of index m as CSV rows (n, r, c).
    Fj {
        #[arg(long)]
        form: FormId,
        #[arg(long)]
        m: u64,
        #[arg(long = "n-bound")]
        n_bound: u64,
    },
    /// Theta decomposition of the index-p slice as CSV rows (n, a, normalized).
    Theta {
        #[arg(long)]
        form: FormId,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        prec: u64,
    },
    /// Nonzero coefficients at odd squarefree 4 det T up to a bound.
    Scan {
        #[arg(long)]
        form: FormId,
        #[arg(long = "d-bound")]
        d_bound: u64,
    },
    /// Character sums of coefficients over the class group of discriminant -D.
    ClassSum {
        #[arg(long)]
        form: FormId,
        #[arg(long)]
        disc: u64,
    },
    /// Squarefree sieve sums of the theta decomposition over an X grid.
    Sieve {
        #[arg(long)]
        form: FormId,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 8000)]
        prec: u64,
        #[arg(long = "M", default_value = "auto")]
        m: MPolicy,
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
        grid: Vec<f64>,
        /// Growth parameter of the ratio lemma used by `--M auto`.
        #[arg(long, default_value_t = 19.0)]
        y: f64,
    },
    /// Ratio-lemma value (-1 + prod_{p>T}(1 + y/p^2)) / prod_{p<=T}(1 - 1/p).
    Ratio {
        #[arg(long)]
        y: f64,
        #[arg(long = "T")]
        t: f64,
    },
    /// Run the exact identity checks.
    Selftest,
}
