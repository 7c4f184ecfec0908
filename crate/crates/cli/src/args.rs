use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "erlangen", version, about = "Transformation groups and their invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared with the config file. Flags override file values.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Key = value file supplying seed, trials, tolerance, group, dimension.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub dimension: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Randomized search for a configuration whose property a group element changes.
    CheckInvariance {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        property: String,
        /// Metric for ck-distance: klein-disk, hyperbolic or elliptic.
        #[arg(long)]
        metric: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Cayley-Klein distance between two affine points.
    Distance {
        #[arg(long)]
        metric: String,
        /// Comma-separated affine coordinates.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Applies one of the transfer maps to a comma-separated input.
    Transfer {
        /// stereographic, inverse-stereographic, pluecker, circle, moebius-sphere or conic.
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        /// Use the conjugating map for moebius-sphere.
        #[arg(long)]
        conjugating: bool,
    },
    /// Covariants, invariants and roots of a binary form.
    Covariants {
        /// Coefficients of x^d, x^(d-1) y, ..., y^d; `re:im` for complex entries.
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Randomized test of whether a map preserves the contact form up to a factor.
    ContactCheck {
        #[arg(long)]
        map: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Images of a point under sampled group elements.
    Orbit {
        #[arg(long)]
        group: Option<String>,
        /// Affine coordinates; `re,im` for moebius; `cx,cy,r` for circle groups.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Samples the closure, inverse and identity axioms of a group.
    Axioms {
        #[arg(long)]
        group: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
}
