//! Narrow class numbers of real quadratic fields, by reduced-form cycles and
//! by brute-force ideal classes.

use twistforge::oracle::ideal_class_numbers;
use twistforge::quadfield::{h3_star, is_fundamental_discriminant, narrow_class_number, QuadField};

fn main() -> twistforge::Result<()> {
    println!("{:>6} {:>4} {:>7} {:>4}", "D", "h+", "ideals", "h3*");
    for disc in (5..400).filter(|&d| is_fundamental_discriminant(d)) {
        let h = narrow_class_number(disc)?;
        if h == 1 {
            continue;
        }
        let oracle = ideal_class_numbers(disc);
        println!("{disc:>6} {h:>4} {:>7} {:>4}", oracle.narrow_class_number, h3_star(disc)?);
    }
    let k = QuadField::new(229)?;
    println!("Q(sqrt 229): h+ = {}, 3 | h: {}", k.h_plus, k.three_divides_h);
    Ok(())
}
