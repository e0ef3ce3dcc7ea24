//! Which n give a squarefree discriminant core, and how often.
//!
//!     cargo run --release --example sieve_parameters -- 100000

use twistforge::density::sieve_constant;
use twistforge::family::{sieve_n, Sign};

fn main() -> twistforge::Result<()> {
    let n_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    for m in [1, 7, 8, 16] {
        let r = sieve_n(m, Sign::Minus, n_max)?;
        let c = sieve_constant(m, Sign::Minus, 1000)?;
        let first: Vec<String> = r.admissible.iter().take(8).map(|n| n.to_string()).collect();
        println!(
            "m = {m:>2}: density {:.5} (Euler product {:.5}), first n: {}",
            r.density_f64(),
            c.value,
            first.join(" ")
        );
    }
    Ok(())
}
