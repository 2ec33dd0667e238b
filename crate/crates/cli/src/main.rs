mod args;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use run::{Output, Runner};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors and 0 for --help / --version.
    let cli = Cli::parse();
    let out = cli.common.out.clone();
    match Runner::new(cli.common).run(&cli.command) {
        Ok(output) => {
            let mut text = match output {
                Output::Json(s) | Output::Text(s) => s,
            };
            text.push('\n');
            let written = match &out {
                Some(path) => std::fs::write(path, &text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    report("IoError", &e.to_string());
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            report(e.name(), &e.to_string());
            ExitCode::from(1)
        }
    }
}

fn report(name: &str, message: &str) {
    let json = serde_json::json!({ "error": name, "message": message });
    eprintln!("{json}");
}
