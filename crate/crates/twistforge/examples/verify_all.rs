//! Run every oracle cross-check suite and print a summary table.
//!
//!     cargo run --release --example verify_all

use twistforge::verify::{run, VerifyOptions};

fn main() -> twistforge::Result<()> {
    let report = run(&VerifyOptions::default())?;
    for s in &report.suites {
        println!(
            "{:<22} {:>6}/{:<6} {:>7.2}s {}",
            s.name,
            s.passed,
            s.checked,
            s.seconds,
            if s.ok() { "ok" } else { "MISMATCH" }
        );
        for m in s.mismatches.iter().take(5) {
            println!("    {m}");
        }
    }
    println!("{}", if report.ok { "all suites agree" } else { "mismatches found" });
    Ok(())
}
