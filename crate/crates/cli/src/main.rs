use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use halstd_cli::{run, Args, RunConfig};

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = RunConfig::try_from(args).and_then(|cfg| run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("halstd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
