use std::process::ExitCode;

use clap::Parser;
use elastic_boxplot_cli::{exit, run, Cli, THREADS_ENV};

fn configure_threads() {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("cannot set thread count: {e}");
            }
        }
        _ => log::warn!("ignoring {THREADS_ENV}={raw:?}: expected a positive integer"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    configure_threads();
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.exit_code() == exit::OK { exit::FAILURE } else { e.exit_code() })
        }
    }
}
