//! Density estimates: the Taya lower bound, squarefree sieve constants and
//! empirical counts of admissible twists.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, is_squarefree_u64, primes_up_to};
use crate::error::{Error, Result};
use crate::family::{FamilyCurve, FamilyParams, Sign};
use crate::quadfield::{fundamental_discriminant, narrow_class_number};
use crate::twist::TwistContext;

pub const CHECKPOINTS: [u64; 3] = [10_000, 100_000, 1_000_000];

/// `coefficient * pi^pi_power`, kept exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicConstant {
    #[serde(with = "crate::num_str::int")]
    pub numerator: BigInt,
    #[serde(with = "crate::num_str::int")]
    pub denominator: BigInt,
    pub pi_power: i32,
}

impl SymbolicConstant {
    pub fn coefficient(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), self.denominator.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.coefficient().to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi(self.pi_power)
    }
}

impl fmt::Display for SymbolicConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)?;
        if self.pi_power != 0 {
            write!(f, " * pi^{}", self.pi_power)?;
        }
        Ok(())
    }
}

/// 5 / (pi^2 phi(12N)) * prod_{p | 12N} p/(p+1).
pub fn taya_lower_bound(conductor: &BigInt) -> Result<SymbolicConstant> {
    if !conductor.is_positive() {
        return Err(Error::NonPositive(conductor.to_string()));
    }
    let modulus = conductor * 12;
    let f = factor(&modulus)?;
    let mut c = BigRational::new(BigInt::from(5), crate::arith::euler_phi(&f));
    for p in f.primes() {
        c *= BigRational::new(p.clone(), p + 1);
    }
    Ok(SymbolicConstant { numerator: c.numer().clone(), denominator: c.denom().clone(), pi_power: -2 })
}

/// The admissibility condition on a residue class m mod N for the
/// Nakagawa–Horie counting theorem.
pub fn nakagawa_horie_admissible(m: i64, n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let n_i = n as i64;
    let g = m.gcd(&n_i).unsigned_abs();
    for (p, _) in crate::arith::factor_u64(g) {
        if p == 2 {
            continue;
        }
        let p2 = (p * p) as i64;
        if n_i % p2 != 0 || m % p2 == 0 {
            return false;
        }
    }
    if n % 2 == 0 {
        let case_i = n % 4 == 0 && m.rem_euclid(4) == 1;
        let case_ii = n % 16 == 0 && matches!(m.rem_euclid(16), 8 | 12);
        return case_i || case_ii;
    }
    true
}

/// delta_m(n) as an integer polynomial, evaluated mod q.
fn delta_mod(m: u32, sign: Sign, n: u64, q: u64) -> u64 {
    let s = sign.mp() as i128;
    let (m_i, n_i, q_i) = (m as i128, n as i128, q as i128);
    let lin = match m {
        8 | 16 => m_i / 8 + 3 * n_i,
        _ if m % 2 == 1 => m_i + 24 * n_i,
        _ => m_i / 2 + 12 * n_i,
    };
    let quad = (62208 * n_i % q_i * n_i + (5184 * m_i + 432 * s) * n_i + 108 * m_i * m_i + 18 * s * m_i + 1)
        .rem_euclid(q_i);
    (lin.rem_euclid(q_i) * quad % q_i) as u64
}

/// 1 - beta(p^2)/p^2, where beta counts residues a mod p^2 with p^2 | delta_m(a).
pub fn squarefree_local_density(m: u32, sign: Sign, p: u64) -> Result<BigRational> {
    FamilyParams::check_m(m)?;
    if !crate::arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if p > 1000 {
        return Err(Error::TooLarge(p.to_string()));
    }
    let q = p * p;
    let beta = (0..q).filter(|&a| delta_mod(m, sign, a, q) == 0).count() as u64;
    Ok(BigRational::new(BigInt::from(q - beta), BigInt::from(q)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalFactor {
    pub prime: u64,
    pub beta: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveConstant {
    pub m: u32,
    pub sign: Sign,
    pub p_max: u64,
    pub value: f64,
    /// Primes with beta > 0.
    pub factors: Vec<LocalFactor>,
}

/// Truncated Euler product of local squarefree densities over p <= p_max.
pub fn sieve_constant(m: u32, sign: Sign, p_max: u64) -> Result<SieveConstant> {
    FamilyParams::check_m(m)?;
    let primes = primes_up_to(p_max.min(1000));
    let locals: Vec<BigRational> =
        primes.par_iter().map(|&p| squarefree_local_density(m, sign, p)).collect::<Result<_>>()?;
    let mut value = 1.0;
    let mut factors = Vec::new();
    for (&p, local) in primes.iter().zip(&locals) {
        value *= local.to_f64().unwrap_or(1.0);
        let beta = p * p - (local * BigInt::from(p * p)).to_integer().to_u64().unwrap_or(0);
        if beta > 0 {
            factors.push(LocalFactor { prime: p, beta });
        }
    }
    Ok(SieveConstant { m, sign, p_max, value, factors })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub x: u64,
    /// Squarefree d <= x in the combined residue classes.
    pub congruence_count: u64,
    /// Those whose narrow class number is prime to 3.
    pub class_number_filtered: u64,
    pub fully_admissible: u64,
    pub filter_ratio: Option<f64>,
    pub congruence_density: f64,
    pub fully_admissible_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub curve: FamilyParams,
    #[serde(with = "crate::num_str::int")]
    pub conductor: BigInt,
    #[serde(with = "crate::num_str::int")]
    pub modulus: BigInt,
    #[serde(with = "crate::num_str::int")]
    pub class_count: BigInt,
    pub taya_bound: SymbolicConstant,
    pub taya_bound_decimal: f64,
    /// classes/modulus times the squarefree density among units mod modulus.
    pub expected_congruence_density: f64,
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    congruence: u64,
    filtered: u64,
    full: u64,
}

pub fn checkpoints_for(x_max: u64) -> Vec<u64> {
    let mut xs: Vec<u64> = CHECKPOINTS.iter().copied().filter(|&x| x < x_max).collect();
    xs.push(x_max);
    xs
}

pub fn empirical_density(curve: &FamilyCurve, x_max: u64) -> Result<DensityReport> {
    empirical_density_at(curve, &checkpoints_for(x_max))
}

/// Counts at each checkpoint x, scanning once up to the largest.
pub fn empirical_density_at(curve: &FamilyCurve, xs: &[u64]) -> Result<DensityReport> {
    let ctx = TwistContext::new(curve.clone())?;
    let x_max = xs.iter().copied().max().unwrap_or(0);
    let candidates: Vec<i64> = ctx
        .rule
        .candidates(x_max)
        .into_iter()
        .filter(|&d| is_squarefree_u64(d as u64))
        .collect();
    let rows: Vec<(i64, bool, bool)> = candidates
        .par_iter()
        .map(|&d| -> Result<(i64, bool, bool)> {
            let filtered = d > 1 && narrow_class_number(fundamental_discriminant(d)?)? % 3 != 0;
            let full = filtered && ctx.check(d)?.checks.all();
            Ok((d, filtered, full))
        })
        .collect::<Result<_>>()?;

    let mut sorted: Vec<u64> = xs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut tallies = Vec::with_capacity(sorted.len());
    let mut t = Tally::default();
    let mut i = 0;
    for &x in &sorted {
        while i < rows.len() && rows[i].0 as u64 <= x {
            t.congruence += 1;
            t.filtered += rows[i].1 as u64;
            t.full += rows[i].2 as u64;
            i += 1;
        }
        tallies.push((x, t));
    }

    let modulus = ctx.rule.modulus.clone();
    let taya = taya_lower_bound(&curve.conductor)?;
    let mut sq = 6.0 / std::f64::consts::PI.powi(2);
    for p in factor(&modulus)?.primes() {
        let p = p.to_f64().unwrap_or(f64::INFINITY);
        sq /= 1.0 - 1.0 / (p * p);
    }
    let expected = ctx.rule.class_count.to_f64().unwrap_or(0.0) / modulus.to_f64().unwrap_or(f64::INFINITY) * sq;
    let checkpoints = tallies
        .into_iter()
        .map(|(x, t)| Checkpoint {
            x,
            congruence_count: t.congruence,
            class_number_filtered: t.filtered,
            fully_admissible: t.full,
            filter_ratio: (t.congruence > 0).then(|| t.filtered as f64 / t.congruence as f64),
            congruence_density: if x == 0 { 0.0 } else { t.congruence as f64 / x as f64 },
            fully_admissible_density: if x == 0 { 0.0 } else { t.full as f64 / x as f64 },
        })
        .collect();
    Ok(DensityReport {
        curve: curve.params,
        conductor: curve.conductor.clone(),
        modulus,
        class_count: ctx.rule.class_count.clone(),
        taya_bound_decimal: taya.to_f64(),
        taya_bound: taya,
        expected_congruence_density: expected,
        checkpoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::construct;
    use num_traits::One;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn taya_examples() {
        let t = taya_lower_bound(&b(182)).unwrap();
        assert_eq!(t.coefficient(), BigRational::new(b(65), b(18432)));
        assert_eq!(t.coefficient() * b(576), BigRational::new(b(65), b(32)));
        assert!((t.to_f64() - 3.5730e-4).abs() < 1e-7);
        let t = taya_lower_bound(&b(1)).unwrap();
        assert_eq!(t.coefficient(), BigRational::new(b(5), b(8)));
        assert!(taya_lower_bound(&b(0)).is_err());
    }

    #[test]
    fn admissibility_rule() {
        assert!(nakagawa_horie_admissible(229, 2184));
        assert!(nakagawa_horie_admissible(3, 9));
        assert!(!nakagawa_horie_admissible(3, 3));
        assert!(!nakagawa_horie_admissible(9, 9));
        assert!(!nakagawa_horie_admissible(2, 8));
        assert!(nakagawa_horie_admissible(8, 16));
        assert!(!nakagawa_horie_admissible(3, 8));
        assert!(nakagawa_horie_admissible(5, 7));
    }

    #[test]
    fn local_densities() {
        // delta_1(a) = (1 + 24a) f(a); scan mod 25 directly
        let direct = (0..25u64)
            .filter(|&a| {
                let a = a as i128;
                ((1 + 24 * a) * (62208 * a * a + 4752 * a + 91)).rem_euclid(25) == 0
            })
            .count() as i64;
        assert_eq!(
            squarefree_local_density(1, Sign::Minus, 5).unwrap(),
            BigRational::new(b(25 - direct), b(25))
        );
        // 2 and 3 never divide delta_1
        assert!(squarefree_local_density(1, Sign::Minus, 2).unwrap().is_one());
        assert!(squarefree_local_density(1, Sign::Minus, 3).unwrap().is_one());
        assert!(squarefree_local_density(1, Sign::Minus, 1009).is_err());
    }

    #[test]
    fn truncated_products_decrease() {
        let a = sieve_constant(1, Sign::Minus, 50).unwrap().value;
        let b = sieve_constant(1, Sign::Minus, 200).unwrap().value;
        assert!(b <= a && b > 0.8);
    }

    #[test]
    fn small_report() {
        let c = construct(FamilyParams::new(1, 0, Sign::Minus)).unwrap();
        let r = empirical_density(&c, 5000).unwrap();
        assert_eq!(r.class_count, b(18));
        assert_eq!(r.checkpoints.len(), 1);
        let cp = &r.checkpoints[0];
        assert!(cp.fully_admissible <= cp.class_number_filtered);
        assert!(cp.class_number_filtered <= cp.congruence_count);
        let r = empirical_density(&c, 100).unwrap();
        assert_eq!(r.checkpoints[0].congruence_count, 0);
        assert_eq!(r.checkpoints[0].filter_ratio, None);
    }
}
