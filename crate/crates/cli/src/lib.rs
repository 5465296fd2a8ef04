//! The `signet` command-line front end.

pub mod args;
pub mod commands;
pub mod error;
pub mod verify;

use args::{Cli, Command, RunConfig};
use error::CliError;

/// Executes one parsed command. Returns what should go to stdout, if anything.
pub fn run(cli: &Cli) -> Result<Option<String>, CliError> {
    let (artifacts, out) = match &cli.command {
        Command::Verify(v) => {
            let reports = verify::run(&v.only);
            let failed = reports.iter().filter(|r| !r.passed).count();
            let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
            if failed > 0 {
                return Err(CliError::Verification(format!("{text}{failed} criteria failed")));
            }
            return Ok(Some(text));
        }
        Command::Analyze(a) => {
            let rc = RunConfig::resolve(a)?;
            (commands::analyze(&rc)?, rc.out)
        }
        Command::Simulate(a) => {
            let rc = RunConfig::resolve(a)?;
            (commands::simulate(&rc)?, rc.out)
        }
        Command::Gossip(a) => {
            let rc = RunConfig::resolve(a)?;
            (commands::gossip(&rc)?, rc.out)
        }
        Command::CriticalBeta(a) => {
            let rc = RunConfig::resolve(a)?;
            (commands::critical_beta(&rc)?, rc.out)
        }
    };
    commands::emit(&artifacts, out.as_deref())
}
