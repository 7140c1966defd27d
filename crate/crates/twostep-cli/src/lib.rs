//! Library half of the `twostep` command-line tool: the argument grammar,
//! one function per subcommand, the reproduction targets and the output
//! renderers. `main.rs` only parses arguments and calls [`run`].

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod repro;
pub mod threads;

use std::io::Write;

use args::{Cli, Command};
use error::{CliError, EXIT_MISMATCH};

/// Executes a parsed command line and returns the process exit code:
/// 0 ok, 1 expectation mismatch, 2 usage error, 3 sampler exhaustion.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let env = std::env::var(threads::THREADS_ENV).ok();
    let workers = threads::resolve_threads(cli.threads, env.as_deref(), threads::available()).map_err(CliError::Usage)?;
    twostep::exec::configure_threads(workers);
    let exec = threads::exec_for(workers);
    let outcome = match &cli.command {
        Command::Delta(a) => commands::cmd_delta(a)?,
        Command::Theta(a) => commands::cmd_theta(a)?,
        Command::Area(a) => commands::cmd_area(a, exec)?,
        Command::Search(a) => commands::cmd_search(a, exec)?,
        Command::Certify(a) => commands::cmd_certify(a, exec)?,
        Command::Tangent(a) => commands::cmd_tangent(a, exec)?,
        Command::Sample(a) => commands::cmd_sample(a, exec)?,
        Command::Repro(a) => commands::cmd_repro(a, exec)?,
    };
    let text = outcome.report.render(cli.format);
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // A closed downstream pipe (`| head`) is not an error.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            other => other?,
        },
    }
    if outcome.diff.is_empty() {
        Ok(0)
    } else {
        let mut err = std::io::stderr().lock();
        writeln!(err, "expectation mismatch:")?;
        for line in &outcome.diff {
            writeln!(err, "{line}")?;
        }
        Ok(EXIT_MISMATCH)
    }
}
