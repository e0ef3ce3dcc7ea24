//! Root numbers and torsion of the twists E^(d).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor_u64, is_local_square, is_prime_u64, is_squarefree_u64};
use crate::error::{Error, Result};
use crate::family::FamilyCurve;
use crate::oracle::has_rational_three_torsion;
use crate::weierstrass::{count_points_ns, quadratic_twist, torsion_order_bound, ReductionKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSplitting {
    pub prime: u64,
    pub base_split: bool,
    pub twisted_split: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootNumber {
    pub omega: i8,
    /// Number of split multiplicative primes of the twist.
    #[serde(rename = "S")]
    pub split_count: u32,
    pub local: Vec<LocalSplitting>,
}

fn coprime_to_discriminant(curve: &FamilyCurve, d: i64) -> bool {
    BigInt::from(d).gcd(&curve.discriminant).is_one()
}

/// Global root number of E^(d) for squarefree d = 1 mod 4 prime to the
/// discriminant.
///
/// At a bad prime the twist keeps its splitting type exactly when d is a
/// square in Q_l. Primes dividing d become additive and contribute (-1/p);
/// infinity contributes -1.
pub fn root_number(curve: &FamilyCurve, d: i64) -> Result<RootNumber> {
    if d == 0 || !is_squarefree_u64(d.unsigned_abs()) {
        return Err(Error::OutsidePerimeter(format!("{d} is not squarefree")));
    }
    if d.rem_euclid(4) != 1 {
        return Err(Error::OutsidePerimeter(format!("{d} is not 1 mod 4")));
    }
    if !coprime_to_discriminant(curve, d) {
        return Err(Error::OutsidePerimeter(format!("{d} shares a factor with the discriminant")));
    }
    let mut local = Vec::new();
    for report in &curve.bad_primes {
        let prime = report.prime.to_u64().ok_or_else(|| Error::TooLarge(report.prime.to_string()))?;
        let base_split = match report.kind {
            ReductionKind::MultiplicativeSplit => true,
            ReductionKind::MultiplicativeNonsplit => false,
            _ => return Err(Error::NotSemistable(prime.to_string())),
        };
        let twisted_split = base_split == is_local_square(d, prime);
        local.push(LocalSplitting { prime, base_split, twisted_split });
    }
    let split_count = local.iter().filter(|l| l.twisted_split).count() as u32;
    let minus_one_symbols = factor_u64(d.unsigned_abs())
        .iter()
        .filter(|(p, _)| p % 4 == 3)
        .count();
    let mut omega: i8 = if split_count % 2 == 0 { -1 } else { 1 };
    if minus_one_symbols % 2 == 1 {
        omega = -omega;
    }
    Ok(RootNumber { omega, split_count, local })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionAnalysis {
    /// #E^(d)(F_3)
    pub count_mod3: u64,
    /// y-coordinate of a rational 2-torsion point, if one exists.
    #[serde(with = "crate::num_str::opt_ratio")]
    pub two_torsion_y: Option<num_rational::BigRational>,
    /// Discriminant of 8y^3 - d y^2 + 2H d^2 y - J d^3.
    #[serde(with = "crate::num_str::int")]
    pub cubic_discriminant: BigInt,
    pub cubic_discriminant_is_square: bool,
    pub oracle_primes: Vec<u64>,
    /// gcd of #E^(d)(F_p) over `oracle_primes`.
    pub oracle_gcd: u64,
    pub trivial: bool,
}

fn cubic_value(c: &[BigInt; 3], w: &BigInt) -> BigInt {
    ((w + &c[0]) * w + &c[1]) * w + &c[2]
}

/// Smallest w in [lo, hi] with sgn * g(w) >= 0 for g monotone in direction sgn,
/// returning it if it is a root.
fn monotone_root(c: &[BigInt; 3], lo: &BigInt, hi: &BigInt, increasing: bool) -> Option<BigInt> {
    if lo > hi {
        return None;
    }
    let ok = |w: &BigInt| {
        let v = cubic_value(c, w);
        if increasing {
            !v.is_negative()
        } else {
            !v.is_positive()
        }
    };
    if !ok(hi) {
        return None;
    }
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    while lo < hi {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        if ok(&mid) {
            hi = mid;
        } else {
            lo = mid + 1u32;
        }
    }
    cubic_value(c, &lo).is_zero().then_some(lo)
}

/// Integer roots of w^3 + c0 w^2 + c1 w + c2, found exactly by bisection on
/// the monotone pieces.
pub fn integer_roots_of_monic_cubic(c: &[BigInt; 3]) -> Vec<BigInt> {
    let bound = BigInt::one() + c.iter().map(|v| v.abs()).max().unwrap();
    let neg_bound = -&bound;
    let mut roots = Vec::new();
    // g'(w) = 3w^2 + 2 c0 w + c1 vanishes at (-c0 +- sqrt(c0^2 - 3 c1)) / 3.
    let disc: BigInt = &c[0] * &c[0] - BigInt::from(3) * &c[1];
    if !disc.is_positive() {
        roots.extend(monotone_root(c, &neg_bound, &bound, true));
    } else {
        let r = disc.sqrt();
        let three = BigInt::from(3);
        let t1 = (-&c[0] - &r - 1u32).div_floor(&three);
        let t2 = -((&c[0] - &r - 1u32).div_floor(&three));
        let i1 = -((&c[0] + &r).div_floor(&three));
        let i2 = (-&c[0] + &r).div_floor(&three);
        roots.extend(monotone_root(c, &neg_bound, &t1, true));
        roots.extend(monotone_root(c, &i1, &i2, false));
        roots.extend(monotone_root(c, &t2, &bound, true));
        let mut w = &t1 + 1u32;
        while w < i1 {
            if cubic_value(c, &w).is_zero() {
                roots.push(w.clone());
            }
            w += 1u32;
        }
        let mut w = &i2 + 1u32;
        while w < t2 {
            if cubic_value(c, &w).is_zero() {
                roots.push(w.clone());
            }
            w += 1u32;
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Odd primes of good reduction for the twist used by the gcd oracle.
fn oracle_primes(curve: &FamilyCurve, d: i64, want: usize) -> Vec<u64> {
    let bad = &curve.discriminant * BigInt::from(d);
    (3u64..)
        .filter(|&p| is_prime_u64(p) && !(&bad % p).is_zero())
        .take(want)
        .collect()
}

/// Torsion of E^(d) for squarefree d = 1 mod 12 prime to the discriminant,
/// following the reduction-mod-3 argument and cross-checked against the gcd
/// of point counts.
pub fn torsion_analysis(curve: &FamilyCurve, d: i64) -> Result<TorsionAnalysis> {
    if d <= 0 || !is_squarefree_u64(d as u64) || d % 12 != 1 {
        return Err(Error::OutsidePerimeter(format!("{d} is not a positive squarefree 1 mod 12")));
    }
    if !coprime_to_discriminant(curve, d) {
        return Err(Error::OutsidePerimeter(format!("{d} shares a factor with the discriminant")));
    }
    let db = BigInt::from(d);
    let twist = quadratic_twist(&curve.minimal_model, &db)?;
    let count_mod3 = count_points_ns(&twist, 3)?;
    let expected = if curve.j.mod_floor(&BigInt::from(3)) == BigInt::from(2) { 3 } else { 6 };
    if count_mod3 != expected {
        return Err(Error::OracleMismatch(format!(
            "{} twist {d}: #E(F_3) = {count_mod3}, expected {expected}",
            curve.params
        )));
    }

    // 8y^3 - d y^2 + 2H d^2 y - J d^3; with w = 8y it becomes monic.
    let d2 = &db * &db;
    let d3 = &d2 * &db;
    let monic = [-db.clone(), BigInt::from(16) * &curve.h * &d2, BigInt::from(-64) * &curve.j * &d3];
    let roots = integer_roots_of_monic_cubic(&monic);
    let two_torsion_y = roots
        .first()
        .map(|w| num_rational::BigRational::new(w.clone(), BigInt::from(8)));

    let (a, b, c, e) = (
        BigInt::from(8),
        -db.clone(),
        BigInt::from(2) * &curve.h * &d2,
        -(&curve.j * &d3),
    );
    let cubic_discriminant: BigInt = &b * &b * &c * &c - 4 * &a * &c * &c * &c - 4 * &b * &b * &b * &e
        - 27 * &a * &a * &e * &e
        + 18 * &a * &b * &c * &e;
    let d6 = &d3 * &d3;
    if cubic_discriminant != BigInt::from(4) * &d6 * &curve.discriminant {
        return Err(Error::OracleMismatch(format!(
            "{} twist {d}: 2-division discriminant differs from 4 d^6 Delta",
            curve.params
        )));
    }
    let cubic_discriminant_is_square =
        !cubic_discriminant.is_negative() && cubic_discriminant.sqrt().pow(2) == cubic_discriminant;

    let trivial = count_mod3 == 3 || roots.is_empty();

    // Every count is divisible by 3 through the isogeny to the ancestor, so
    // the 3-part is settled by the 3-division polynomial instead.
    let mut primes = Vec::new();
    let mut g = 0u64;
    for p in oracle_primes(curve, d, 40) {
        primes.push(p);
        g = torsion_order_bound(&twist, &primes[primes.len() - 1..])?.gcd(&g);
        if strip_threes(g) == 1 {
            break;
        }
    }
    let oracle_trivial = strip_threes(g) == 1 && !has_rational_three_torsion(&twist)?;
    if trivial != oracle_trivial {
        return Err(Error::OracleMismatch(format!(
            "{} twist {d}: torsion verdict {trivial}, point-count gcd {g}",
            curve.params
        )));
    }
    Ok(TorsionAnalysis {
        count_mod3,
        two_torsion_y,
        cubic_discriminant,
        cubic_discriminant_is_square,
        oracle_primes: primes,
        oracle_gcd: g,
        trivial,
    })
}

fn strip_threes(mut g: u64) -> u64 {
    while g > 0 && g % 3 == 0 {
        g /= 3;
    }
    g
}

pub fn torsion_trivial(curve: &FamilyCurve, d: i64) -> Result<bool> {
    Ok(torsion_analysis(curve, d)?.trivial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{construct, FamilyParams, Sign};

    fn e10() -> FamilyCurve {
        construct(FamilyParams::new(1, 0, Sign::Minus)).unwrap()
    }

    #[test]
    fn root_number_examples() {
        let c = e10();
        let r = root_number(&c, 1).unwrap();
        assert_eq!((r.split_count, r.omega), (3, 1));
        let r = root_number(&c, 5).unwrap();
        assert!(!r.local[0].twisted_split);
        assert_eq!(r.omega, -1);
        assert!(matches!(root_number(&c, 3), Err(Error::OutsidePerimeter(_))));
        assert!(matches!(root_number(&c, 13), Err(Error::OutsidePerimeter(_))));
        assert!(matches!(root_number(&c, 45), Err(Error::OutsidePerimeter(_))));
    }

    #[test]
    fn torsion_examples() {
        let c = e10();
        let t = torsion_analysis(&c, 1).unwrap();
        assert_eq!(t.count_mod3, 3);
        assert!(t.trivial);
        assert_eq!(t.cubic_discriminant, BigInt::from(4 * -182));
        assert!(matches!(torsion_trivial(&c, 13), Err(Error::OutsidePerimeter(_))));
        assert!(matches!(torsion_trivial(&c, 5), Err(Error::OutsidePerimeter(_))));
    }

    #[test]
    fn plus_family_uses_two_division_test() {
        // m = 1 with the plus sign has J = 1 mod 3, so #E(F_3) = 6.
        let c = construct(FamilyParams::new(1, 0, Sign::Plus)).unwrap();
        for d in [1i64, 37, 61, 73] {
            let t = torsion_analysis(&c, d).unwrap();
            assert_eq!(t.count_mod3, 6);
            assert!(t.two_torsion_y.is_none());
            assert!(t.trivial);
        }
    }

    #[test]
    fn cubic_roots() {
        let b = BigInt::from;
        // (w - 2)(w + 3)(w - 7) = w^3 - 6w^2 - 13w + 42
        assert_eq!(integer_roots_of_monic_cubic(&[b(-6), b(-13), b(42)]), vec![b(-3), b(2), b(7)]);
        // (w - 5)(w^2 + 1)
        assert_eq!(integer_roots_of_monic_cubic(&[b(-5), b(1), b(-5)]), vec![b(5)]);
        // (w - 4)^2 (w + 1)
        assert_eq!(integer_roots_of_monic_cubic(&[b(-7), b(8), b(16)]), vec![b(-1), b(4)]);
        assert!(integer_roots_of_monic_cubic(&[b(0), b(0), b(-2)]).is_empty());
    }
}
