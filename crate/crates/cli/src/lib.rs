//! File formats, run configuration and the command-line front end for
//! `hallforge-core`.
//!
//! Exit codes: 0 success, 1 identity violated, 2 input error, 3 size guard.

pub mod commands;
pub mod config;
pub mod error;
pub mod json;
pub mod output;
pub mod quiver_file;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use config::{Cli, Command, RunConfig, MAX_POINTS_ENV};
use error::{CliResult, EXIT_INPUT, EXIT_OK};

/// Parses `args` (program name first) and runs the command. Report output
/// goes to `out`, diagnostics and timings to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INPUT
                }
            };
        }
    };
    let env = std::env::var(MAX_POINTS_ENV).ok();
    match execute(&cli, env.as_deref(), out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, env_max_points: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let cfg = RunConfig::from_args(&cli.common, env_max_points)?;
    let code = match &cli.command {
        Command::Orbits => commands::cmd_orbits(&cfg, out)?,
        Command::Hall { op } => commands::cmd_hall(&cfg, op, out)?,
        Command::Verify { which } => commands::cmd_verify(&cfg, *which, out, err)?,
        Command::Census => commands::cmd_census(&cfg, out)?,
    };
    out.flush()?;
    Ok(code)
}
