//! Worker-count resolution: `--threads` beats `TWOSTEP_THREADS`, which
//! beats the machine's available parallelism.

use twostep::Exec;

/// Environment variable overriding the default worker count.
pub const THREADS_ENV: &str = "TWOSTEP_THREADS";

/// Picks the worker count from the flag, then the environment value, then
/// `default`. Zero or unparsable values are usage errors.
pub fn resolve_threads(flag: Option<usize>, env: Option<&str>, default: usize) -> Result<usize, String> {
    if let Some(t) = flag {
        return if t == 0 {
            Err("--threads must be at least 1".into())
        } else {
            Ok(t)
        };
    }
    match env.map(str::trim) {
        None | Some("") => Ok(default.max(1)),
        Some(text) => match text.parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(format!("{THREADS_ENV}={text:?} is not a positive integer")),
        },
    }
}

/// The machine default.
pub fn available() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// One worker means the sequential code path.
pub fn exec_for(threads: usize) -> Exec {
    if threads > 1 {
        Exec::Parallel
    } else {
        Exec::Sequential
    }
}
