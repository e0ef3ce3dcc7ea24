use crate::arith::jacobi_i64;
use crate::error::{Error, Result};

/// Kronecker symbol (d / q) for a fundamental discriminant d and prime q.
fn kronecker(d: i64, q: u64) -> Result<i8> {
    if q == 2 {
        return Ok(match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        });
    }
    Ok(jacobi_i64(d, q))
}

/// Root number of the twist by d of a semistable curve, from the root number
/// of the curve and the quadratic character: w(E^(d)) = w(E) chi_d(-N).
///
/// `bad` lists each prime of the conductor with its split flag.
pub fn root_number_by_character(bad: &[(u64, bool)], d: i64) -> Result<i8> {
    if d.rem_euclid(4) != 1 {
        return Err(Error::OutsidePerimeter(d.to_string()));
    }
    let w = if bad.iter().filter(|(_, split)| *split).count() % 2 == 0 { -1 } else { 1 };
    let mut chi = d.signum() as i8;
    for &(q, _) in bad {
        chi *= kronecker(d, q)?;
    }
    if chi == 0 {
        return Err(Error::OutsidePerimeter(d.to_string()));
    }
    Ok(w * chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let e10 = [(2, true), (7, true), (13, true)];
        assert_eq!(root_number_by_character(&e10, 1).unwrap(), 1);
        // chi_5(-182) = (5/2)(5/7)(5/13) = (-1)(-1)(-1)
        assert_eq!(root_number_by_character(&e10, 5).unwrap(), -1);
        assert!(root_number_by_character(&e10, 21).is_err());
        assert!(root_number_by_character(&e10, 3).is_err());
    }
}
