use std::process::ExitCode;

use clap::Parser;
use gl2calc_cli::{run, Cli};

fn main() -> ExitCode {
    let (code, out, err) = run(Cli::parse());
    if !out.is_empty() {
        println!("{}", out.trim_end());
    }
    if !err.is_empty() {
        eprintln!("{err}");
    }
    ExitCode::from(code as u8)
}
