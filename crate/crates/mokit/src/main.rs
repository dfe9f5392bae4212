use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use mokit::{emit, exit_code, run_file, Format, Task};

/// Runs a scenario and reports the results.
///
/// Exit status: 0 when every assertion passes, 1 when one fails, 2 on usage,
/// parse or numerical errors.
#[derive(Parser, Debug)]
#[command(name = "mokit", version)]
struct Args {
    task: Task,
    /// Scenario file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `seed` from the scenario.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the report; without it JSON goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let result = run_file(args.task, &args.config, args.seed);
    let code = exit_code(&result);
    match &result {
        Ok(report) => {
            let written = match (&args.out, args.format) {
                (Some(dir), f) => emit(report, f, dir),
                (None, Format::Json) => {
                    let _ = std::io::stdout().write_all(report.json_string().as_bytes());
                    Ok(vec![])
                }
                (None, Format::Csv) => {
                    let _ = std::io::stdout().write_all(report.summary_csv().as_bytes());
                    Ok(vec![])
                }
            };
            match written {
                Ok(paths) => {
                    for p in paths {
                        eprintln!("wrote {}", p.display());
                    }
                }
                Err(e) => {
                    eprintln!("error: cannot write report: {e}");
                    return ExitCode::from(2);
                }
            }
            for a in report.assertions.iter().filter(|a| !a.passed) {
                eprintln!("assertion failed: {} ({})", a.name, a.detail);
            }
        }
        Err(e) => eprintln!("error: {}: {e}", args.config.display()),
    }
    eprintln!("{} finished in {:.3} s", args.task, start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
