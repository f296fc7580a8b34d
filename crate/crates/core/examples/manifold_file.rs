//! Drives the batch commands from a JSON manifold description.
//!
//! Usage: cargo run --example manifold_file [path.json]

use std::path::PathBuf;

use dhym::cli::{cmd_angle, cmd_cjy_check, cmd_gamma_track, ManifoldFile};

fn main() {
    let path = std::env::args().nth(1).map_or_else(
        || PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/torus3_counterexample.json"),
        PathBuf::from,
    );
    let file = match ManifoldFile::load(&path) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{}", e.message);
            std::process::exit(e.code);
        }
    };
    for (name, result) in [
        ("angle", cmd_angle(&file)),
        ("gamma-track", cmd_gamma_track(&file, 128, None, false)),
        ("cjy-check", cmd_cjy_check(&file, 10.0)),
    ] {
        match result {
            Ok(out) => println!(
                "{name} (exit {}):\n{}",
                out.code,
                serde_json::to_string_pretty(&out.report).unwrap()
            ),
            Err(e) => println!("{name} failed (exit {}): {}", e.code, e.message),
        }
    }
}
