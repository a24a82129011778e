//! `setinv`: invertibility of set collections, inverting permutations,
//! packings and hypercube blocking sets from the command line.
//!
//! Exit codes: 0 positive result, 1 negative result, 2 usage error,
//! 3 invalid input file.

mod commands;
mod num;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "setinv", version, about = "Invertible set collections, packings and hypercube blocking sets")]
pub struct Cli {
    /// Emit one JSON document instead of the text report
    #[arg(long, global = true)]
    pub json: bool,

    /// Size cap for brute-force and exhaustive searches
    #[arg(long, global = true, value_name = "N")]
    pub limit: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether one permutation inverts every set of a collection
    Invert {
        #[arg(long, value_name = "FILE")]
        input: String,
        /// Cross-check against exhaustive search (ground sets up to --limit)
        #[arg(long)]
        brute_force: bool,
    },
    /// Closed-form test for three sets of equal size
    Triple {
        #[arg(long, value_name = "FILE")]
        input: String,
    },
    /// Find a fixed-point-poor involution inverting many sets
    Kappa {
        #[arg(long, value_name = "FILE")]
        input: String,
        /// Also search all permutations of the simple kind (n up to --limit)
        #[arg(long)]
        exhaustive: bool,
        /// With --exhaustive, search every permutation instead
        #[arg(long, requires = "exhaustive")]
        all_permutations: bool,
    },
    /// Number of simple permutations of an n-set
    Sigma {
        #[arg(long)]
        n: usize,
    },
    /// Number of simple permutations inverting a fixed i-subset
    Lambda {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
    },
    /// Packings with bounded pairwise intersections
    #[command(subcommand)]
    Pack(PackCommand),
    /// Packing size bounds
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Square-blocking edge sets of the hypercube
    #[command(subcommand)]
    Cube(CubeCommand),
}

#[derive(Subcommand, Debug)]
pub enum PackCommand {
    /// Recursive product construction
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = num::parse_rational)]
        alpha: num_rational::Rational64,
        #[arg(long, value_name = "FILE")]
        output: Option<String>,
        /// Largest family that is listed and checked pair by pair
        #[arg(long, default_value_t = 200_000)]
        max_blocks: u128,
    },
    /// Check every pairwise intersection of a family
    Verify {
        #[arg(long, value_name = "FILE")]
        input: String,
        #[arg(long, value_parser = num::parse_rational)]
        alpha: num_rational::Rational64,
    },
    /// Half-size sets with no invertible triple
    No3(No3Args),
}

#[derive(Args, Debug)]
pub struct No3Args {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Reference k-sets on n/2 + k elements; built greedily when omitted
    #[arg(long, value_name = "FILE")]
    pub rs: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub output: Option<String>,
    /// Sample this many triples when there are more (needs --seed)
    #[arg(long, default_value_t = 100_000)]
    pub max_triples: u64,
    /// Seed for triple sampling; without it every triple is checked
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Existence bound; at the optimal c when --c is omitted
    Lower {
        #[arg(long, value_parser = num::parse_rational)]
        alpha: num_rational::Rational64,
        #[arg(long)]
        c: Option<f64>,
    },
    /// Upper bounds at (c, alpha)
    Upper {
        #[arg(long, value_parser = num::parse_rational)]
        alpha: num_rational::Rational64,
        #[arg(long)]
        c: f64,
    },
    /// Optimal c with both bounds there
    Optimum {
        #[arg(long, value_parser = num::parse_rational)]
        alpha: num_rational::Rational64,
    },
    /// Exact upper bound for a concrete n and block size
    Finite {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        block_size: usize,
        #[arg(long, value_parser = num::parse_rational)]
        alpha: num_rational::Rational64,
        /// Size of the fixed core; searched when omitted
        #[arg(long, requires = "e")]
        d: Option<usize>,
        /// Size of the fixed superset; searched when omitted
        #[arg(long, requires = "d")]
        e: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CubeCommand {
    /// Build a square-blocking set of Q_n
    Build {
        #[arg(long)]
        n: usize,
        /// Use involution-guided symmetries between the two halves
        #[arg(long)]
        assist: bool,
        #[arg(long, value_name = "FILE")]
        output: Option<String>,
    },
    /// Check that an edge set blocks every square of Q_n
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "FILE")]
        edges: String,
    },
}

/// What a command produced.
pub struct Outcome {
    pub positive: bool,
    pub text: String,
    pub json: Value,
}

pub enum Failure {
    Usage(String),
    Input(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.positive { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
