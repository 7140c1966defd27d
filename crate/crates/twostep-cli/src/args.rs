//! Command-line grammar.

use std::path::PathBuf;

use clap::{builder::PossibleValuesParser, Args, Parser, Subcommand, ValueEnum};
use twostep::fixtures::CATALOG;

use crate::output::Format;
use crate::repro::Target;

/// Exact dimension formulas, lattice search, generic ideals and tangent
/// spaces for 2-step ideals in Hilbert schemes of points.
#[derive(Debug, Parser)]
#[command(name = "twostep", version, about)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the result to this file instead of standard output.
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Worker threads (default: $TWOSTEP_THREADS, else all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Δ_{n,r,k} at a point (h_k, h_{k+1}, h_{k+1}', h_{k+2}', …), or report its critical point.
    Delta(DeltaArgs),
    /// Evaluate Θ_{n,k,b} at (h_k, h_{k+1}).
    Theta(ThetaArgs),
    /// List the lattice pairs (h_k, h_{k+1}) of the potential TNT area.
    Area(AreaArgs),
    /// Search the lattice domain of (n, r, k) for points with Δ ≥ 0.
    Search(SearchArgs),
    /// Tangent dimensions, TNT verdict and certificate for a fixture or a generic sample.
    Certify(SubjectArgs),
    /// Graded tangent dimensions only, for a fixture or a generic sample.
    Tangent(SubjectArgs),
    /// Draw seeded generic ideals (or nestings) with a given profile.
    Sample(SampleArgs),
    /// Recompute a published table and compare every cell.
    Repro(ReproArgs),
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 'r')]
    pub r: usize,
    #[arg(short = 'k')]
    pub k: usize,
    /// Report the critical point, its value and nature instead of evaluating.
    #[arg(long)]
    pub critical: bool,
    /// 2r coordinates, integers or rationals `p/q`.
    #[arg(value_name = "COORD", allow_negative_numbers = true)]
    pub point: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 'k')]
    pub k: usize,
    /// The admissible value b ≤ β_{2,k+2} of the lex ideal.
    #[arg(short = 'b', default_value_t = 0)]
    pub b: usize,
    /// h_k (integer or `p/q`).
    #[arg(allow_negative_numbers = true)]
    pub hk: String,
    /// h_{k+1} (integer or `p/q`).
    #[arg(allow_negative_numbers = true)]
    pub hk1: String,
}

#[derive(Debug, Args)]
pub struct AreaArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 'k')]
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Exhaustive,
    Hypercube,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 'r')]
    pub r: usize,
    #[arg(short = 'k')]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
    pub strategy: StrategyArg,
    /// Largest hypercube shell radius.
    #[arg(long, default_value_t = twostep::search::Strategy::DEFAULT_CAP)]
    pub cap: usize,
    /// Keep only certificates whose colength sequence is minimal.
    #[arg(long)]
    pub minimal: bool,
}

#[derive(Debug, Args)]
pub struct SubjectArgs {
    /// A bundled ideal or nesting.
    #[arg(long, value_parser = PossibleValuesParser::new(CATALOG.iter().map(|(name, _)| *name)),
          required_unless_present = "profile", conflicts_with = "profile")]
    pub fixture: Option<String>,
    /// `n=6,k=2,(1,6,20,7)` (quotient Hilbert function) or `n=3,k=2,[(0,6),(1,10)]` (nesting).
    #[arg(long)]
    pub profile: Option<String>,
    /// Seed of the generic sample.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Compute over the rationals instead of the 61-bit prime field.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// `n=6,k=2,(1,6,20,7)` or `n=3,k=2,[(0,6),(1,10)]`.
    #[arg(long)]
    pub profile: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Seed of the generic samples.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
