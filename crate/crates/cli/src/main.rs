mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::Failure;

fn run(argv: Vec<String>) -> u8 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let echo = output::command_line(&argv[1..]);
    let seed = cli.command.seed();
    let doc = match cli.format {
        Format::Csv => output::render_csv(&echo, seed, &outcome),
        Format::Json => output::render_json(&echo, seed, &outcome),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, doc).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(doc.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    if outcome.ok {
        0
    } else {
        1
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args().collect()))
}
