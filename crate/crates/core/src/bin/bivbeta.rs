use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use bivbeta::cli::{run, Cli, CliError};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(f) => run(&cli, &mut BufWriter::new(f)),
            Err(e) => Err(CliError::Io(e)),
        },
        None => run(&cli, &mut io::stdout().lock()),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let _ = writeln!(io::stderr(), "bivbeta: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
