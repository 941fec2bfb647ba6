//! Runs the bundled suite, or a config given on the command line.

use std::path::PathBuf;

use qverify::suite::{run_suite, SuiteConfig};

fn main() -> qverify::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("suites/full-catalog.json"));
    let report = run_suite(&SuiteConfig::from_path(&path)?)?;
    println!("{}", report.to_text());
    std::process::exit(report.exit_code());
}
