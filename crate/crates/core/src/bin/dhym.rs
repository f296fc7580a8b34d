use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dhym::cli::{run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("DHYM_THREADS") {
        match threads.parse::<usize>() {
            Ok(k) if k > 0 => {
                // ignore failure: the pool may already exist
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
            _ => {
                eprintln!("DHYM_THREADS must be a positive integer, got `{threads}`");
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
    }
    let (value, code) = match run(&cli.command) {
        Ok(out) => (out.report, out.code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            (e.to_json(), e.code)
        }
    };
    // a closed pipe is not an error worth reporting
    let _ = writeln!(
        std::io::stdout().lock(),
        "{}",
        serde_json::to_string_pretty(&value).expect("json output")
    );
    ExitCode::from(code as u8)
}
