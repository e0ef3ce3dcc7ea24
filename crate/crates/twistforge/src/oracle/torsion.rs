use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::weierstrass::WeierstrassModel;

fn eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

fn sign(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn trim(coeffs: &[BigInt]) -> &[BigInt] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].is_zero() {
        n -= 1;
    }
    &coeffs[..n]
}

/// Integers k such that every real root of f lies in [k, k + 1]. May contain
/// extra entries.
fn brackets(coeffs: &[BigInt]) -> Vec<BigInt> {
    let f = trim(coeffs);
    match f.len() {
        0 | 1 => return Vec::new(),
        2 => return vec![(-&f[0]).div_floor(&f[1])],
        _ => {}
    }
    let lead = f.last().unwrap().abs();
    let cauchy = f[..f.len() - 1].iter().map(|c| c.abs().div_ceil(&lead)).max().unwrap() + 2;
    let mut crit = brackets(&derivative(f));
    crit.retain(|c| c.abs() <= cauchy);
    crit.sort();
    crit.dedup();

    let mut out = crit.clone();
    let mut edges = vec![-cauchy.clone()];
    for c in &crit {
        edges.push(c.clone());
        edges.push(c + 1);
    }
    edges.push(cauchy);
    for pair in edges.chunks(2) {
        let (mut lo, mut hi) = (pair[0].clone(), pair[1].clone());
        if lo >= hi {
            continue;
        }
        let slo = sign(&eval(f, &lo));
        if slo == 0 {
            out.push(lo);
            continue;
        }
        if sign(&eval(f, &hi)) == slo {
            continue;
        }
        while &hi - &lo > BigInt::from(1) {
            let mid: BigInt = (&lo + &hi) >> 1;
            if sign(&eval(f, &mid)) == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(lo);
    }
    out.sort();
    out.dedup();
    out
}

/// Integer roots of a polynomial given lowest degree first.
pub fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let f = trim(coeffs);
    let mut roots: Vec<BigInt> = brackets(f)
        .into_iter()
        .flat_map(|k| [k.clone(), k + 1])
        .filter(|k| eval(f, k).is_zero())
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

fn is_square(v: &BigInt) -> bool {
    !v.is_negative() && v.sqrt().pow(2) == *v
}

/// Whether an integral model has a rational point of order 3, found from the
/// rational roots of the 3-division polynomial.
pub fn has_rational_three_torsion(model: &WeierstrassModel) -> Result<bool> {
    if !model.is_integral() {
        return Err(Error::BadShape("model must be integral".into()));
    }
    let inv = model.invariants();
    let int = |r: &num_rational::BigRational| r.to_integer();
    let (b2, b4, b6, b8) = (int(&inv.b2), int(&inv.b4), int(&inv.b6), int(&inv.b8));
    // 27 psi_3(s/3) = s^4 + b2 s^3 + 9 b4 s^2 + 27 b6 s + 27 b8
    let quartic = [27 * &b8, 27 * &b6, 9 * &b4, b2.clone(), BigInt::from(1)];
    for s in integer_roots(&quartic) {
        // 81 (4t^3 + b2 t^2 + 2 b4 t + b6) at t = s/3
        let q: BigInt = 12 * s.pow(3) + 9 * &b2 * s.pow(2) + 54 * &b4 * &s + 81 * &b6;
        if is_square(&q) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn roots_of_products() {
        let r = integer_roots(&[b(-6), b(11), b(-6), b(1)]);
        assert_eq!(r, vec![b(1), b(2), b(3)]);
        // (x - 5)^2 (x^2 + 1)
        let r = integer_roots(&[b(25), b(-10), b(26), b(-10), b(1)]);
        assert_eq!(r, vec![b(5)]);
        assert!(integer_roots(&[b(-2), b(0), b(1)]).is_empty());
        let big: BigInt = "123456789012345678901".parse().unwrap();
        let r = integer_roots(&[-&big * 7, &big - 7, b(1)]);
        assert_eq!(r, vec![-big, b(7)]);
    }

    #[test]
    fn three_torsion_examples() {
        // y^2 + y = x^3 has (0, 0) of order 3
        let e = WeierstrassModel::from_i64([0, 0, 1, 0, 0]);
        assert!(has_rational_three_torsion(&e).unwrap());
        // 19a1 has (5, 9) of order 3
        let e = WeierstrassModel::from_i64([0, 1, 1, -9, -15]);
        assert!(has_rational_three_torsion(&e).unwrap());
        // 11a3 has Z/5, 37a1 is trivial
        let e = WeierstrassModel::from_i64([0, -1, 1, 0, 0]);
        assert!(!has_rational_three_torsion(&e).unwrap());
        let e = WeierstrassModel::from_i64([0, 0, 1, -1, 0]);
        assert!(!has_rational_three_torsion(&e).unwrap());
    }
}
