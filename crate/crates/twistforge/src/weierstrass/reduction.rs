//! Reduction type at a prime for models minimal at that prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::model::rational_valuation;
use super::points::{count_points_ns, DEFAULT_BUDGET};
use super::WeierstrassModel;
use crate::arith::{is_prime, jacobi};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionKind {
    Good,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

impl ReductionKind {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, Self::MultiplicativeSplit | Self::MultiplicativeNonsplit)
    }
}

/// Which procedure established the reduction type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Algebraic,
    PointCount,
    BothAgree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    #[serde(with = "crate::num_str::int")]
    pub prime: BigInt,
    pub kind: ReductionKind,
    /// `None` stands for an unknown index (additive reduction).
    pub tamagawa_index: Option<u64>,
    pub criterion: Criterion,
    pub ord_discriminant: u32,
}

fn check_integral_at(model: &WeierstrassModel, l: &BigInt) -> Result<()> {
    if model.coefficients().iter().any(|c| (c.denom() % l).is_zero()) {
        return Err(Error::NonIntegralAtPrime(l.to_string()));
    }
    Ok(())
}

fn residue(v: &BigRational, l: &BigInt) -> BigInt {
    let den = v.denom().mod_floor(l);
    let inv = den.modpow(&(l - 2u32), l);
    (v.numer() * inv).mod_floor(l)
}

/// Split test for multiplicative reduction at l, from the invariants alone.
fn algebraic_split(model: &WeierstrassModel, l: &BigInt) -> Result<bool> {
    match l.to_u64() {
        Some(2) => {
            let a1 = model.a1();
            if residue(a1, l).is_zero() {
                return Err(Error::BadShape("a1 must be odd to decide splitting at 2".into()));
            }
            // x^2 + x + (a3/a1 + a2) over F_2 has a root iff the constant is even.
            let c = model.a3() / a1 + model.a2();
            Ok(residue(&c, l).is_zero())
        }
        Some(3) => {
            let b2 = residue(&model.invariants().b2, l);
            Ok(jacobi(&b2, l)? == 1)
        }
        _ => {
            let v = -(model.c4() * model.c6());
            Ok(jacobi(&residue(&v, l), l)? == 1)
        }
    }
}

/// Classify the reduction at a prime using the algebraic criteria only.
pub fn reduction_type(model: &WeierstrassModel, l: &BigInt) -> Result<ReductionReport> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l.to_string()));
    }
    check_integral_at(model, l)?;
    let disc = model.discriminant();
    if disc.is_zero() {
        return Err(Error::BadShape("singular model".into()));
    }
    let od = rational_valuation(disc, l).unwrap();
    let oc4 = rational_valuation(model.c4(), l);
    if od >= 12 && oc4.is_none_or(|v| v >= 4) {
        return Err(Error::NotMinimalAtPrime(l.to_string()));
    }
    let (kind, tamagawa_index) = if od == 0 {
        (ReductionKind::Good, Some(1))
    } else if oc4 == Some(0) {
        if algebraic_split(model, l)? {
            (ReductionKind::MultiplicativeSplit, Some(od as u64))
        } else {
            (ReductionKind::MultiplicativeNonsplit, Some(if od % 2 == 1 { 1 } else { 2 }))
        }
    } else {
        (ReductionKind::Additive, None)
    };
    Ok(ReductionReport { prime: l.clone(), kind, tamagawa_index, criterion: Criterion::Algebraic, ord_discriminant: od })
}

/// Split flag read off a point count: l - 1 points means split, l + 1 nonsplit.
pub fn split_by_point_count(model: &WeierstrassModel, l: u64) -> Result<Option<bool>> {
    let n = count_points_ns(model, l)?;
    Ok(if n + 1 == l {
        Some(true)
    } else if n == l + 1 {
        Some(false)
    } else {
        None
    })
}

/// As [`reduction_type`], confirming multiplicative primes within the counting
/// budget against the point-count oracle.
pub fn reduction_type_checked(model: &WeierstrassModel, l: &BigInt) -> Result<ReductionReport> {
    let mut report = reduction_type(model, l)?;
    if !report.kind.is_multiplicative() {
        return Ok(report);
    }
    if let Some(lv) = l.to_u64().filter(|&v| v <= DEFAULT_BUDGET) {
        let counted = split_by_point_count(model, lv)?;
        let algebraic = report.kind == ReductionKind::MultiplicativeSplit;
        if counted != Some(algebraic) {
            return Err(Error::OracleMismatch(format!(
                "split test at {l}: algebraic {algebraic}, point count {counted:?}"
            )));
        }
        report.criterion = Criterion::BothAgree;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e10() -> WeierstrassModel {
        WeierstrassModel::from_i64([1, 0, 0, -15663, -755809])
    }

    #[test]
    fn e10_primes() {
        let e = e10();
        let r2 = reduction_type_checked(&e, &BigInt::from(2)).unwrap();
        assert_eq!(r2.kind, ReductionKind::MultiplicativeSplit);
        let r7 = reduction_type_checked(&e, &BigInt::from(7)).unwrap();
        assert_eq!(r7.kind, ReductionKind::MultiplicativeSplit);
        assert_eq!(r7.tamagawa_index, Some(1));
        assert_eq!(r7.criterion, Criterion::BothAgree);
        assert_eq!(reduction_type(&e, &BigInt::from(5)).unwrap().kind, ReductionKind::Good);
    }

    #[test]
    fn twist_flips_at_two() {
        let t = super::super::quadratic_twist(&e10(), &BigInt::from(5)).unwrap();
        let r2 = reduction_type_checked(&t, &BigInt::from(2)).unwrap();
        assert_eq!(r2.kind, ReductionKind::MultiplicativeNonsplit);
        let r5 = reduction_type(&t, &BigInt::from(5)).unwrap();
        assert_eq!(r5.kind, ReductionKind::Additive);
        assert_eq!(r5.tamagawa_index, None);
    }

    #[test]
    fn nonminimal_detected() {
        let e = e10();
        let u = BigRational::from_integer(BigInt::from(1)) / BigRational::from_integer(BigInt::from(7));
        let z = BigRational::zero();
        let scaled = super::super::transform(&e, &u, &z, &z, &z).unwrap();
        assert!(matches!(
            reduction_type(&scaled, &BigInt::from(7)),
            Err(Error::NotMinimalAtPrime(_))
        ));
        assert!(matches!(reduction_type(&e, &BigInt::from(6)), Err(Error::NotPrime(_))));
    }
}
