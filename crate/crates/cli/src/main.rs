use std::process::ExitCode;

use clap::Parser;
use patchwork_cli::report::{render_json, render_table};
use patchwork_cli::{run, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("PATCHWORK_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", render_json(&report)),
                Format::Table => print!("{}", render_table(&report)),
            }
            if report.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(failure) => {
            match cli.format {
                Format::Json => println!("{}", failure.to_json()),
                Format::Table => {
                    eprintln!("error: {}", failure.headline());
                    for d in failure.details() {
                        eprintln!("  {d}");
                    }
                }
            }
            ExitCode::from(2)
        }
    }
}
