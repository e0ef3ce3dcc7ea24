//! Congruence conditions on d that fix the splitting type of every bad prime
//! after twisting.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{crt, jacobi_u64, smallest_nonresidue};
use crate::error::{Error, Result};
use crate::family::FamilyCurve;
use crate::weierstrass::{ReductionKind, ReductionReport};

/// Combined classes are listed explicitly only up to this many.
pub const MATERIALIZE_LIMIT: u128 = 100_000;

/// Residues allowed for d at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResidueSet {
    /// d = residue mod modulus.
    Single { residue: u64, modulus: u64 },
    /// d a quadratic nonresidue mod prime; `canonical` is the least one.
    Nonresidue { prime: u64, canonical: u64 },
}

impl ResidueSet {
    pub fn contains(&self, d: i64) -> bool {
        match *self {
            ResidueSet::Single { residue, modulus } => d.rem_euclid(modulus as i64) as u64 == residue,
            ResidueSet::Nonresidue { prime, .. } => {
                jacobi_u64(d.rem_euclid(prime as i64) as u64, prime) == -1
            }
        }
    }

    /// Number of residue classes in the set.
    pub fn size(&self) -> u64 {
        match *self {
            ResidueSet::Single { .. } => 1,
            ResidueSet::Nonresidue { prime, .. } => (prime - 1) / 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRule {
    pub prime: u64,
    pub split: bool,
    pub allowed: ResidueSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRule {
    #[serde(with = "crate::num_str::int")]
    pub conductor: BigInt,
    /// 12 N
    #[serde(with = "crate::num_str::int")]
    pub modulus: BigInt,
    pub prime_rules: Vec<PrimeRule>,
    /// CRT of every single-residue condition, including d = 1 mod 3 and the
    /// condition at 2.
    #[serde(with = "crate::num_str::int")]
    pub base_residue: BigInt,
    #[serde(with = "crate::num_str::int")]
    pub base_modulus: BigInt,
    /// The class obtained by choosing the least nonresidue at every prime
    /// that asks for one.
    #[serde(with = "crate::num_str::int")]
    pub canonical_class: BigInt,
    #[serde(with = "crate::num_str::int")]
    pub class_count: BigInt,
    /// Every admissible residue mod 12 N, when there are few enough.
    pub combined_classes: Option<Vec<String>>,
}

fn prime_rule(report: &ReductionReport) -> Result<PrimeRule> {
    let prime = report
        .prime
        .to_u64()
        .ok_or_else(|| Error::TooLarge(report.prime.to_string()))?;
    let split = match report.kind {
        ReductionKind::MultiplicativeSplit => true,
        ReductionKind::MultiplicativeNonsplit => false,
        _ => return Err(Error::NotSemistable(prime.to_string())),
    };
    let nonresidue = || -> Result<ResidueSet> {
        let canonical = smallest_nonresidue(&BigInt::from(prime))?.to_u64().unwrap();
        Ok(ResidueSet::Nonresidue { prime, canonical })
    };
    let one_mod = ResidueSet::Single { residue: 1, modulus: prime };
    let allowed = match (prime, prime % 3, split) {
        (2, _, true) => ResidueSet::Single { residue: 5, modulus: 8 },
        (2, _, false) => ResidueSet::Single { residue: 1, modulus: 8 },
        (3, _, _) => {
            return Err(Error::OutsidePerimeter("3 divides the conductor".into()));
        }
        (_, 1, true) | (_, 2, false) => nonresidue()?,
        _ => one_mod,
    };
    Ok(PrimeRule { prime, split, allowed })
}

impl TwistRule {
    pub fn from_reports(conductor: &BigInt, reports: &[ReductionReport]) -> Result<TwistRule> {
        let prime_rules: Vec<PrimeRule> = reports.iter().map(prime_rule).collect::<Result<_>>()?;
        let mut singles: Vec<(BigInt, BigInt)> = vec![(BigInt::from(1), BigInt::from(3))];
        if !prime_rules.iter().any(|r| r.prime == 2) {
            singles.push((BigInt::from(1), BigInt::from(4)));
        }
        let mut canonical = Vec::new();
        let mut class_count = BigInt::from(1);
        for rule in &prime_rules {
            match rule.allowed {
                ResidueSet::Single { residue, modulus } => {
                    singles.push((BigInt::from(residue), BigInt::from(modulus)))
                }
                ResidueSet::Nonresidue { prime, canonical: c } => {
                    canonical.push((BigInt::from(c), BigInt::from(prime)));
                    class_count *= (prime - 1) / 2;
                }
            }
        }
        let (base_residue, base_modulus) = crt(&singles)?;
        let mut all = vec![(base_residue.clone(), base_modulus.clone())];
        all.extend(canonical.iter().cloned());
        let (canonical_class, modulus) = crt(&all)?;
        debug_assert_eq!(modulus, BigInt::from(12) * conductor);
        let mut rule = TwistRule {
            conductor: conductor.clone(),
            modulus,
            prime_rules,
            base_residue,
            base_modulus,
            canonical_class,
            class_count,
            combined_classes: None,
        };
        if rule.class_count.to_u128().is_some_and(|c| c <= MATERIALIZE_LIMIT) {
            rule.combined_classes = Some(rule.materialize()?.iter().map(|c| c.to_string()).collect());
        }
        Ok(rule)
    }

    fn materialize(&self) -> Result<Vec<BigInt>> {
        let mut classes = vec![(self.base_residue.clone(), self.base_modulus.clone())];
        for rule in &self.prime_rules {
            if let ResidueSet::Nonresidue { prime, .. } = rule.allowed {
                let nonres: Vec<u64> = (1..prime).filter(|&a| jacobi_u64(a, prime) == -1).collect();
                let mut next = Vec::with_capacity(classes.len() * nonres.len());
                for (r, m) in &classes {
                    for &a in &nonres {
                        next.push(crt(&[(r.clone(), m.clone()), (BigInt::from(a), BigInt::from(prime))])?);
                    }
                }
                classes = next;
            }
        }
        let mut out: Vec<BigInt> = classes.into_iter().map(|(r, _)| r).collect();
        out.sort();
        Ok(out)
    }

    pub fn mod3(&self, d: i64) -> bool {
        d.rem_euclid(3) == 1
    }

    /// d = 1 mod 4, and the class mod 8 demanded at 2 when 2 | N.
    pub fn mod4_or_8(&self, d: i64) -> bool {
        d.rem_euclid(4) == 1
            && self.prime_rules.iter().filter(|r| r.prime == 2).all(|r| r.allowed.contains(d))
    }

    /// Conditions at the odd bad primes.
    pub fn per_prime_table(&self, d: i64) -> bool {
        self.prime_rules.iter().filter(|r| r.prime != 2).all(|r| r.allowed.contains(d))
    }

    pub fn admits(&self, d: i64) -> bool {
        self.mod3(d) && self.mod4_or_8(d) && self.per_prime_table(d)
    }

    /// All admissible d in 1..=x_max, increasing.
    pub fn candidates(&self, x_max: u64) -> Vec<i64> {
        let (Some(r), Some(m)) = (self.base_residue.to_u64(), self.base_modulus.to_u64()) else {
            return Vec::new();
        };
        let start = if r == 0 { m } else { r };
        let nonres: Vec<&ResidueSet> = self
            .prime_rules
            .iter()
            .map(|p| &p.allowed)
            .filter(|a| matches!(a, ResidueSet::Nonresidue { .. }))
            .collect();
        let mut out = Vec::new();
        let mut d = start;
        while d <= x_max {
            if nonres.iter().all(|s| s.contains(d as i64)) {
                out.push(d as i64);
            }
            d = match d.checked_add(m) {
                Some(v) => v,
                None => break,
            };
        }
        out
    }
}

/// Build the twist rule of a family curve.
pub fn build_rules(curve: &FamilyCurve) -> Result<TwistRule> {
    TwistRule::from_reports(&curve.conductor, &curve.bad_primes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{construct, FamilyParams, Sign};

    fn e10_rule() -> TwistRule {
        build_rules(&construct(FamilyParams::new(1, 0, Sign::Minus)).unwrap()).unwrap()
    }

    #[test]
    fn e10_rules() {
        let rule = e10_rule();
        assert_eq!(rule.modulus, BigInt::from(2184));
        assert_eq!(rule.base_modulus, BigInt::from(24));
        assert_eq!(rule.base_residue, BigInt::from(13));
        assert_eq!(
            rule.prime_rules.iter().map(|r| r.allowed.clone()).collect::<Vec<_>>(),
            vec![
                ResidueSet::Single { residue: 5, modulus: 8 },
                ResidueSet::Nonresidue { prime: 7, canonical: 3 },
                ResidueSet::Nonresidue { prime: 13, canonical: 2 },
            ]
        );
        let expect = crt(&[
            (BigInt::from(5), BigInt::from(8)),
            (BigInt::from(1), BigInt::from(3)),
            (BigInt::from(3), BigInt::from(7)),
            (BigInt::from(2), BigInt::from(13)),
        ])
        .unwrap()
        .0;
        assert_eq!(rule.canonical_class, expect);
        assert_eq!(rule.class_count, BigInt::from(18));
        let classes = rule.combined_classes.clone().unwrap();
        assert_eq!(classes.len(), 18);
        assert!(classes.contains(&expect.to_string()));
    }

    #[test]
    fn classes_match_brute_force() {
        let rule = e10_rule();
        let brute: Vec<String> =
            (0..2184i64).filter(|&d| rule.admits(d)).map(|d| d.to_string()).collect();
        assert_eq!(rule.combined_classes.clone().unwrap(), brute);
        for c in &brute {
            let c: i64 = c.parse().unwrap();
            assert_eq!(num_integer::gcd(c, 2184), 1);
        }
    }

    #[test]
    fn candidates_have_no_gaps() {
        let rule = e10_rule();
        let naive: Vec<i64> = (1..=20_000).filter(|&d| rule.admits(d)).collect();
        assert_eq!(rule.candidates(20_000), naive);
        assert!(rule.candidates(0).is_empty());
        assert!(rule.admits(229));
        assert!(!rule.admits(61));
        assert!(!rule.admits(1));
    }

    #[test]
    fn no_odd_bad_primes() {
        let two = ReductionReport {
            prime: BigInt::from(2),
            kind: ReductionKind::MultiplicativeSplit,
            tamagawa_index: Some(1),
            criterion: crate::weierstrass::Criterion::Algebraic,
            ord_discriminant: 1,
        };
        let rule = TwistRule::from_reports(&BigInt::from(2), &[two]).unwrap();
        assert_eq!(rule.modulus, BigInt::from(24));
        assert_eq!(rule.base_residue, BigInt::from(13));
        assert_eq!(rule.combined_classes, Some(vec!["13".to_string()]));
    }
}
