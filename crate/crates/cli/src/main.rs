use std::fs;
use std::process::ExitCode;

use bjorth_cli::commands::{execute, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = matches!(e.downcast_ref::<bjorth::Error>(), Some(bjorth::Error::InternalInconsistency(_)));
            return ExitCode::from(if internal { 1 } else { 2 });
        }
    };
    let bytes = output.render(cli.json);
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &bytes) {
                eprintln!("error: writing {path}: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{bytes}"),
    }
    if output.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
