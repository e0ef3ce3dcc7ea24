//! Twist selection: congruence rules, per-d certificates, root numbers and
//! torsion.

mod certificate;
mod local;
mod rules;

pub use certificate::{predict_selmer, Checks, TwistCertificate, SELMER3, SELMER3_INFINITY};
pub use local::{
    integer_roots_of_monic_cubic, root_number, torsion_analysis, torsion_trivial, LocalSplitting,
    RootNumber, TorsionAnalysis,
};
pub use rules::{build_rules, PrimeRule, ResidueSet, TwistRule, MATERIALIZE_LIMIT};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::arith::is_squarefree_u64;
use crate::error::{Error, Result};
use crate::family::FamilyCurve;
use crate::quadfield::{fundamental_discriminant, narrow_class_number};

/// Largest fundamental discriminant for which class numbers are attempted.
pub const MAX_CLASS_NUMBER_DISCRIMINANT: i64 = 10_000_000_000_000;

/// A curve together with its twist rule, for evaluating many d.
#[derive(Debug, Clone)]
pub struct TwistContext {
    pub curve: FamilyCurve,
    pub rule: TwistRule,
}

impl TwistContext {
    pub fn new(curve: FamilyCurve) -> Result<Self> {
        let rule = build_rules(&curve)?;
        Ok(TwistContext { curve, rule })
    }

    /// Evaluate every hypothesis on d. Rejections are recorded in the
    /// certificate; only internal inconsistencies are errors.
    pub fn check(&self, d: i64) -> Result<TwistCertificate> {
        if d == 0 {
            return Err(Error::ZeroInput);
        }
        let positive = d > 0;
        let squarefree = is_squarefree_u64(d.unsigned_abs());
        let coprime_to_delta = BigInt::from(d).gcd(&self.curve.discriminant).is_one();
        let mod3 = self.rule.mod3(d);
        let mod4_or_8 = self.rule.mod4_or_8(d);
        let per_prime_table = self.rule.per_prime_table(d);

        let mut narrow = None;
        if positive && squarefree && d > 1 {
            let disc = fundamental_discriminant(d)?;
            if disc > MAX_CLASS_NUMBER_DISCRIMINANT {
                return Err(Error::TooLarge(d.to_string()));
            }
            narrow = Some(narrow_class_number(disc)?);
        }
        let class_number_3free = narrow.is_some_and(|h| h % 3 != 0);

        let (mut split_count, mut root, mut root_number_minus_one) = (None, None, false);
        if squarefree && coprime_to_delta && d.rem_euclid(4) == 1 {
            let r = root_number(&self.curve, d)?;
            split_count = Some(r.split_count);
            root = Some(r.omega);
            root_number_minus_one = r.omega == -1;
        }
        let torsion_trivial = if positive && squarefree && coprime_to_delta && d % 12 == 1 {
            torsion_trivial(&self.curve, d)?
        } else {
            false
        };

        Ok(predict_selmer(TwistCertificate {
            curve: self.curve.params,
            d,
            checks: Checks {
                positive,
                squarefree,
                coprime_to_delta,
                mod3,
                mod4_or_8,
                per_prime_table,
                class_number_3free,
                torsion_trivial,
                root_number_minus_one,
            },
            split_count,
            root_number: root,
            narrow_class_number: narrow,
            selmer3: None,
            selmer3_infinity: None,
            conditional_rank_one: false,
            failed_checks: Vec::new(),
        }))
    }

    /// Certificates for every candidate d <= x_max, increasing in d.
    pub fn enumerate(&self, x_max: u64) -> Result<Vec<TwistCertificate>> {
        self.rule.candidates(x_max).par_iter().map(|&d| self.check(d)).collect()
    }

    /// The first `count` fully admissible d, scanning candidates in batches.
    pub fn first_admissible(&self, count: usize, limit: u64) -> Result<Vec<TwistCertificate>> {
        let mut out = Vec::new();
        let mut lo = 0u64;
        let mut step = 20_000u64;
        while out.len() < count && lo < limit {
            let hi = (lo + step).min(limit);
            for c in self.rule.candidates(hi) {
                if (c as u64) <= lo {
                    continue;
                }
                let cert = self.check(c)?;
                if cert.checks.all() {
                    out.push(cert);
                    if out.len() == count {
                        break;
                    }
                }
            }
            lo = hi;
            step *= 2;
        }
        Ok(out)
    }
}

pub fn check_d(curve: &FamilyCurve, d: i64) -> Result<TwistCertificate> {
    TwistContext::new(curve.clone())?.check(d)
}

pub fn enumerate_d(curve: &FamilyCurve, x_max: u64) -> Result<Vec<TwistCertificate>> {
    TwistContext::new(curve.clone())?.enumerate(x_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{construct, FamilyParams, Sign};

    fn ctx() -> TwistContext {
        TwistContext::new(construct(FamilyParams::new(1, 0, Sign::Minus)).unwrap()).unwrap()
    }

    #[test]
    fn check_229() {
        let c = ctx().check(229).unwrap();
        assert!(c.checks.congruences());
        assert!(!c.checks.class_number_3free);
        assert_eq!(c.narrow_class_number, Some(3));
        assert_eq!(c.selmer3, None);
        assert_eq!(c.failed_checks, vec!["class_number_3free"]);
    }

    #[test]
    fn check_trivial_twist_and_non_squarefree() {
        let c = ctx().check(1).unwrap();
        assert!(!c.checks.per_prime_table);
        let c = ctx().check(4).unwrap();
        assert!(!c.checks.squarefree);
        assert!(c.failed_checks.contains(&"squarefree".to_string()));
    }

    #[test]
    fn first_admissible_has_verdict() {
        let found = ctx().first_admissible(3, 100_000).unwrap();
        assert_eq!(found.len(), 3);
        for c in found {
            assert_eq!(c.selmer3.as_deref(), Some(SELMER3));
            assert_eq!(c.root_number, Some(-1));
            assert_eq!(c.split_count.map(|s| s % 2), Some(0));
        }
    }

    #[test]
    fn enumerate_300() {
        let certs = ctx().enumerate(300).unwrap();
        let ds: Vec<i64> = certs.iter().map(|c| c.d).collect();
        assert!(ds.contains(&229));
        assert!(!ds.contains(&61));
        assert!(ds.windows(2).all(|w| w[0] < w[1]));
        assert!(ctx().enumerate(0).unwrap().is_empty());
    }
}
