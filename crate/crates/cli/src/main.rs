use std::process::ExitCode;

use clap::Parser;
use twistchar_cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse()).into()
}
