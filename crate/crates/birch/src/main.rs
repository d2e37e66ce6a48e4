use std::io::Write;
use std::process::ExitCode;

use birch::cli::{run, Cli, JobSpec, Outcome};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match JobSpec::from_cli(&cli) {
        Ok(job) => {
            let out = run(&job);
            // with --out the report went to the file
            if out.code == 0 && job.output.is_some() {
                Outcome {
                    code: 0,
                    report: String::new(),
                }
            } else {
                out
            }
        }
        Err(e) => Outcome {
            code: birch::cli::exit_code(&e),
            report: format!("error: {e}\n"),
        },
    };
    if outcome.code == 0 {
        let _ = std::io::stdout().write_all(outcome.report.as_bytes());
    } else {
        let _ = std::io::stderr().write_all(outcome.report.as_bytes());
    }
    ExitCode::from(outcome.code as u8)
}
