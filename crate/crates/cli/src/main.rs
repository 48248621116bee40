use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use chainmail_cli::{run, Cli, EXIT_INPUT};

fn configure_threads() {
    let Ok(value) = std::env::var("CHAINMAIL_THREADS") else { return };
    match value.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring CHAINMAIL_THREADS={value:?}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(report.text.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
