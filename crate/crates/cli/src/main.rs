use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;

use args::Cli;

/// Caps the global thread pool at `LINDEBERG_LAB_THREADS` when set.
fn configure_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var("LINDEBERG_LAB_THREADS") {
        let n: usize = value.trim().parse().map_err(|_| {
            lindeberg_core::Error::InvalidParameter(format!("LINDEBERG_LAB_THREADS={value:?} is not a count"))
        })?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| commands::run(cli)) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
