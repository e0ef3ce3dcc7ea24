//! Reduction at the bad primes of a few family curves, classified three ways.

use num_bigint::BigInt;
use twistforge::family::{construct, family_rule_split, FamilyParams, Sign};
use twistforge::verify::first_admissible_n;
use twistforge::weierstrass::{count_points_ns, reduction_type, ReductionKind};

fn main() -> twistforge::Result<()> {
    for m in [1, 7, 13] {
        for n in first_admissible_n(m, Sign::Minus, 2)? {
            show(FamilyParams::new(m, n, Sign::Minus))?;
        }
    }
    Ok(())
}

fn show(params: FamilyParams) -> twistforge::Result<()> {
    let curve = construct(params)?;
    println!("{} conductor {}", curve.params, curve.conductor);
    for r in &curve.bad_primes {
        let l: &BigInt = &r.prime;
        let algebraic = reduction_type(&curve.minimal_model, l)?;
        let count = match u64::try_from(l) {
            Ok(p) if p <= 100_000 => count_points_ns(&curve.minimal_model, p)?.to_string(),
            _ => "-".into(),
        };
        println!(
            "  l = {l:>8}  rule {:<5}  algebraic {:<5}  #E_ns(F_l) = {count}",
            family_rule_split(&curve, l),
            algebraic.kind == ReductionKind::MultiplicativeSplit,
        );
    }
    Ok(())
}
