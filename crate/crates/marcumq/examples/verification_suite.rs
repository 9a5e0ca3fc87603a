//! Run the full default verification suite and write the per-cell CSV.
//!
//! Run with: cargo run --example verification_suite

use marcumq::verify::{default_suite, run_suite};

fn main() {
    let entries = default_suite();
    let suite = run_suite(&entries);
    print!("{}", suite.summary());

    let path = std::env::temp_dir().join("marcumq-suite.csv");
    std::fs::write(&path, suite.csv()).expect("write csv");
    println!("\nper-cell report written to {}", path.display());

    let rows = suite.csv().lines().count() - 1;
    println!("{rows} cells across {} scans", suite.outcomes.len());
    std::process::exit(if suite.any_error() || suite.any_asserted_failure() { 1 } else { 0 });
}
