//! Local splitting, root number and torsion of individual twists.

use twistforge::family::{construct, FamilyParams, Sign};
use twistforge::twist::{root_number, torsion_analysis};

fn main() -> twistforge::Result<()> {
    let curve = construct(FamilyParams::new(1, 0, Sign::Minus))?;
    for d in [1i64, 5, 37, 229, 1093] {
        let r = root_number(&curve, d)?;
        let flips: Vec<String> = r
            .local
            .iter()
            .map(|l| format!("{}:{}", l.prime, if l.twisted_split { "split" } else { "nonsplit" }))
            .collect();
        print!("d = {d:>5}  S = {}  omega = {:+}  [{}]", r.split_count, r.omega, flips.join(" "));
        if d % 12 == 1 {
            let t = torsion_analysis(&curve, d)?;
            print!("  #E(F_3) = {}  trivial torsion: {}  (gcd {})", t.count_mod3, t.trivial, t.oracle_gcd);
        }
        println!();
    }
    Ok(())
}
