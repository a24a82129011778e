mod bounds;
mod cube;
mod pack;
mod sets;

use std::fs;
use std::io::Read;

use setinv::Collection;

use crate::{BoundsCommand, Cli, Command, CubeCommand, Failure, Outcome, PackCommand};

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Invert { input, brute_force } => sets::invert(input, *brute_force, cli.limit),
        Command::Triple { input } => sets::triple(input),
        Command::Kappa { input, exhaustive, all_permutations } => {
            sets::kappa(input, *exhaustive, *all_permutations, cli.limit)
        }
        Command::Sigma { n } => sets::sigma(*n),
        Command::Lambda { n, i } => sets::lambda(*n, *i),
        Command::Pack(PackCommand::Build { n, alpha, output, max_blocks }) => {
            pack::build(*n, *alpha, output.as_deref(), *max_blocks)
        }
        Command::Pack(PackCommand::Verify { input, alpha }) => pack::verify(input, *alpha),
        Command::Pack(PackCommand::No3(args)) => pack::no3(args),
        Command::Bounds(BoundsCommand::Lower { alpha, c }) => bounds::lower(*alpha, *c),
        Command::Bounds(BoundsCommand::Upper { alpha, c }) => bounds::upper(*alpha, *c),
        Command::Bounds(BoundsCommand::Optimum { alpha }) => bounds::optimum(*alpha),
        Command::Bounds(BoundsCommand::Finite { n, block_size, alpha, d, e }) => {
            bounds::finite(*n, *block_size, *alpha, d.zip(*e))
        }
        Command::Cube(CubeCommand::Build { n, assist, output }) => cube::build(*n, *assist, output.as_deref(), cli.limit),
        Command::Cube(CubeCommand::Verify { n, edges }) => cube::verify(*n, edges, cli.limit),
    }
}

/// Reads a file, or stdin for `-`.
fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn read_collection(path: &str) -> Result<Collection, Failure> {
    let text = read_text(path)?;
    Collection::parse(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn write_file(path: &str, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn set_line(s: &setinv::Subset) -> String {
    s.to_string()
}
