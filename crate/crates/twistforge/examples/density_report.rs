//! Empirical density of admissible twists of E_{1,0} against the Taya bound.
//!
//!     cargo run --release --example density_report -- 100000

use twistforge::density::{empirical_density, sieve_constant};
use twistforge::family::{construct, FamilyParams, Sign};

fn main() -> twistforge::Result<()> {
    let x_max: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let curve = construct(FamilyParams::new(1, 0, Sign::Minus))?;
    let report = empirical_density(&curve, x_max)?;
    println!("curve {} conductor {} modulus {}", report.curve, report.conductor, report.modulus);
    println!("combined classes: {}", report.class_count);
    println!("taya bound: {} = {:.6e}", report.taya_bound, report.taya_bound_decimal);
    println!("expected congruence density: {:.6}", report.expected_congruence_density);
    println!("{:>9} {:>8} {:>8} {:>8} {:>7}", "x", "cong", "3-free", "full", "ratio");
    for cp in &report.checkpoints {
        println!(
            "{:>9} {:>8} {:>8} {:>8} {:>7.4}",
            cp.x,
            cp.congruence_count,
            cp.class_number_filtered,
            cp.fully_admissible,
            cp.filter_ratio.unwrap_or(f64::NAN)
        );
    }
    for m in [1, 8] {
        let c = sieve_constant(m, Sign::Minus, 1000)?;
        println!("sieve constant m={m}: {:.6} ({} primes with local obstruction)", c.value, c.factors.len());
    }
    Ok(())
}
