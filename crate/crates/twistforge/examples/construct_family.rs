//! Build E_{m,n} from its parameters and print the three models with their
//! invariants.
//!
//!     cargo run --example construct_family -- 1 0 minus

use twistforge::family::{construct, FamilyParams, Sign};
use twistforge::weierstrass::WeierstrassModel;

fn show(name: &str, e: &WeierstrassModel) {
    let a: Vec<String> = e.coefficients().iter().map(|v| v.to_string()).collect();
    println!("{name:<9} [{}]", a.join(", "));
    println!("          c4 = {}  c6 = {}  disc = {}", e.c4(), e.c6(), e.discriminant());
}

fn main() -> twistforge::Result<()> {
    let mut args = std::env::args().skip(1);
    let m = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let sign: Sign = args.next().and_then(|s| s.parse().ok()).unwrap_or(Sign::Minus);

    let curve = construct(FamilyParams::new(m, n, sign))?;
    println!("{}: A = {}, H = {}, J = {}", curve.params, curve.a, curve.h, curve.j);
    println!("delta_m = {} (2^{} stripped), conductor {}", curve.delta_m, curve.two_exponent, curve.conductor);
    show("ancestor", &curve.ancestor);
    show("quotient", &curve.quotient_model);
    show("minimal", &curve.minimal_model);
    for r in &curve.bad_primes {
        println!("  bad prime {:>6}: {:?}, Tamagawa {:?}", r.prime, r.kind, r.tamagawa_index);
    }
    Ok(())
}
