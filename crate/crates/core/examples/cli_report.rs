//! Runs the command line in-process, re-validates the report and writes
//! an SVG of the cut.

use equibu::cli_io::{run, validate_report};

fn main() -> anyhow::Result<()> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let svg = std::env::temp_dir().join("equibu_fractions.svg");
    let report = run([
        "equibu",
        "hs",
        "--mode",
        "fractions",
        "--measures",
        &format!("{data}/separated.json"),
        "--alphas",
        "0.25,0.75",
        "--anchor",
        "0,5",
        "--svg",
        svg.to_str().expect("utf-8 path"),
    ])?;
    println!("outcome {:?}, exit code {}", report.outcome, report.exit_code());
    for c in &report.revalidation.checks {
        println!("  {:<32} {:.2e} <= {:.0e}  {}", c.name, c.value, c.bound, c.pass);
    }
    let json = serde_json::to_value(&report)?;
    println!("stored report validates: {}", validate_report(&json)?);
    println!("svg written to {}", svg.display());
    Ok(())
}
