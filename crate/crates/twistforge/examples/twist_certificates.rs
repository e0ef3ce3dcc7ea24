//! Certificates for the first admissible twists of E_{1,0}, plus one rejected d.

use twistforge::family::{construct, FamilyParams, Sign};
use twistforge::twist::TwistContext;

fn main() -> twistforge::Result<()> {
    let curve = construct(FamilyParams::new(1, 0, Sign::Minus))?;
    let ctx = TwistContext::new(curve)?;
    println!(
        "d = {} mod {}, {} classes mod {}",
        ctx.rule.base_residue, ctx.rule.base_modulus, ctx.rule.class_count, ctx.rule.modulus
    );
    for r in &ctx.rule.prime_rules {
        println!("  l = {:>3} split {:<5} {:?}", r.prime, r.split, r.allowed);
    }

    let rejected = ctx.check(229)?;
    println!("229 fails: {:?}", rejected.failed_checks);

    for cert in ctx.first_admissible(5, 1_000_000)? {
        println!("{}", serde_json::to_string(&cert).expect("certificate serialises"));
    }
    Ok(())
}
