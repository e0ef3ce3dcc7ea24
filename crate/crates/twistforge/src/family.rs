//! The families E_{m,n}: y^2 + xy = x^3 + H x + J, built as 3-isogenous
//! quotients of curves with a rational 3-torsion point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, is_squarefree, is_squarefree_u64};
use crate::error::{Error, Result};
use crate::weierstrass::{
    reduction_type, reduction_type_checked, transform, Criterion, ReductionKind, ReductionReport,
    WeierstrassModel, DEFAULT_BUDGET,
};

/// Admissible values of m.
pub const ALLOWED_M: [u32; 14] = [1, 2, 5, 7, 8, 10, 11, 13, 14, 16, 17, 19, 22, 23];

/// Which branch of the two-valued formulas is in force. `Minus` reads the upper
/// sign of every "∓" as minus (and of every "±" as plus); `Plus` is the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    /// Value of "∓1".
    pub fn mp(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    /// Value of "±1".
    pub fn pm(self) -> i64 {
        -self.mp()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "minus",
            Sign::Plus => "plus",
        })
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "minus" | "-" => Ok(Sign::Minus),
            "plus" | "+" => Ok(Sign::Plus),
            _ => Err(format!("sign must be 'minus' or 'plus', got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub m: u32,
    pub n: u64,
    pub sign: Sign,
}

impl FamilyParams {
    pub fn new(m: u32, n: u64, sign: Sign) -> Self {
        FamilyParams { m, n, sign }
    }

    pub fn check_m(m: u32) -> Result<()> {
        if ALLOWED_M.contains(&m) {
            Ok(())
        } else {
            Err(Error::DisallowedM(m.to_string()))
        }
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E[m={},n={},{}]", self.m, self.n, self.sign)
    }
}

/// The family discriminant and its squarefree-tested core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaPoly {
    #[serde(with = "crate::num_str::int")]
    pub full_value: BigInt,
    #[serde(with = "crate::num_str::int")]
    pub delta_m: BigInt,
    pub two_exponent: u32,
    /// m + 24n
    #[serde(with = "crate::num_str::int")]
    pub linear_factor: BigInt,
    /// 62208n^2 + (5184m ∓ 432)n + (108m^2 ∓ 18m + 1)
    #[serde(with = "crate::num_str::int")]
    pub quadratic_factor: BigInt,
}

fn two_exponent(m: u32) -> u32 {
    match m {
        8 | 16 => 4,
        _ if m % 2 == 1 => 1,
        _ => 2,
    }
}

fn quadratic_factor(m: &BigInt, n: &BigInt, s: i64) -> BigInt {
    BigInt::from(62208) * n * n
        + (BigInt::from(5184) * m + 432 * s) * n
        + (BigInt::from(108) * m * m + 18 * s * m + 1)
}

pub fn delta_poly(m: u32, n: u64, sign: Sign) -> Result<DeltaPoly> {
    FamilyParams::check_m(m)?;
    let mb = BigInt::from(m);
    let nb = BigInt::from(n);
    let linear = &mb + 24 * &nb;
    let quad = quadratic_factor(&mb, &nb, sign.mp());
    let full: BigInt = BigInt::from(2 * sign.mp()) * &linear * &quad;
    let i = two_exponent(m);
    let delta_m: BigInt = full.abs() >> i;
    Ok(DeltaPoly { full_value: full, delta_m, two_exponent: i, linear_factor: linear, quadratic_factor: quad })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCurve {
    pub params: FamilyParams,
    #[serde(rename = "A", with = "crate::num_str::int")]
    pub a: BigInt,
    #[serde(rename = "B", with = "crate::num_str::ratio")]
    pub b: BigRational,
    #[serde(rename = "D", with = "crate::num_str::int")]
    pub d: BigInt,
    #[serde(with = "crate::num_str::ratio")]
    pub r: BigRational,
    #[serde(rename = "H", with = "crate::num_str::int")]
    pub h: BigInt,
    #[serde(rename = "J", with = "crate::num_str::int")]
    pub j: BigInt,
    #[serde(with = "crate::num_str::int")]
    pub delta_m: BigInt,
    pub two_exponent: u32,
    #[serde(rename = "delta", with = "crate::num_str::int")]
    pub discriminant: BigInt,
    #[serde(with = "crate::num_str::int")]
    pub conductor: BigInt,
    #[serde(with = "crate::num_str::int")]
    pub linear_factor: BigInt,
    #[serde(with = "crate::num_str::int")]
    pub quadratic_factor: BigInt,
    /// Y^2 = X^3 + (aX + b)^2 with a = A.
    pub ancestor: WeierstrassModel,
    #[serde(with = "crate::num_str::ratio")]
    pub ancestor_b: BigRational,
    /// y^2 = x^3 + D(Ax + B)^2, the quotient before the change of variables.
    pub quotient_model: WeierstrassModel,
    pub minimal_model: WeierstrassModel,
    pub bad_primes: Vec<ReductionReport>,
}

fn qi(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn exact_div(num: BigInt, den: i64, what: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(&BigInt::from(den));
    if !r.is_zero() {
        return Err(Error::IntegralityFailure(format!("{what}: {den} does not divide {num}")));
    }
    Ok(q)
}

/// H and J from A, as exact integers.
pub fn h_j_coefficients(a: &BigInt, sign: Sign) -> Result<(BigInt, BigInt)> {
    let (mp, pm) = (sign.mp(), sign.pm());
    let a3 = a * a * a;
    let a4 = &a3 * a;
    let a6 = &a3 * &a3;
    let h = exact_div(BigInt::from(1) + 8 * mp * a - 9 * &a4, 48, "H")?;
    let inner: BigInt = BigInt::from(5) + 8 * pm * a + 24 * pm * &a3 + 9 * &a4 + 18 * &a6;
    let j = exact_div(-inner, 576, "J")?;
    Ok((h, j))
}

pub fn construct(params: FamilyParams) -> Result<FamilyCurve> {
    let FamilyParams { m, n, sign } = params;
    let dp = delta_poly(m, n, sign)?;
    if !is_squarefree(&dp.delta_m)? {
        return Err(Error::NotSquarefree(dp.delta_m.to_string()));
    }
    let a = BigInt::from(18) * &dp.linear_factor + sign.mp();
    let aq = BigRational::from_integer(a.clone());
    let b = BigRational::new(BigInt::from(4 * sign.pm()), BigInt::from(9));
    let d = BigInt::from(-3);
    let dq = BigRational::from_integer(d.clone());
    let r = BigRational::new(BigInt::one(), BigInt::from(3)) + &aq * &aq;
    let (h, j) = h_j_coefficients(&a, sign)?;

    let quotient_model = WeierstrassModel::new([
        qi(0),
        &dq * &aq * &aq,
        qi(0),
        qi(2) * &aq * &b * &dq,
        &dq * &b * &b,
    ]);
    let minimal_model = transform(&quotient_model, &qi(2), &r, &qi(1), &qi(0))?;
    let expected = WeierstrassModel::from_ints([
        BigInt::one(),
        BigInt::zero(),
        BigInt::zero(),
        h.clone(),
        j.clone(),
    ]);
    if minimal_model != expected {
        return Err(Error::OracleMismatch(format!("{params}: transformed model differs from (H, J)")));
    }
    let disc = BigRational::from_integer(dp.full_value.clone());
    if minimal_model.discriminant() != &disc {
        return Err(Error::OracleMismatch(format!("{params}: closed-form discriminant differs")));
    }
    let (c4, c6) = closed_form_c4_c6(&a, sign);
    if minimal_model.c4() != &BigRational::from_integer(c4)
        || minimal_model.c6() != &BigRational::from_integer(c6)
    {
        return Err(Error::OracleMismatch(format!("{params}: closed-form c4/c6 differ")));
    }

    let ancestor_b =
        BigRational::new(BigInt::from(4), BigInt::from(27)) * (&aq * &aq * &aq + qi(sign.pm()));
    let ancestor = WeierstrassModel::new([
        qi(0),
        &aq * &aq,
        qi(0),
        qi(2) * &aq * &ancestor_b,
        &ancestor_b * &ancestor_b,
    ]);

    let primes: Vec<BigInt> = factor(&dp.full_value)?.primes().cloned().collect();
    let conductor = primes.iter().product();
    let mut curve = FamilyCurve {
        params,
        a,
        b,
        d,
        r,
        h,
        j,
        delta_m: dp.delta_m,
        two_exponent: dp.two_exponent,
        discriminant: dp.full_value,
        conductor,
        linear_factor: dp.linear_factor,
        quadratic_factor: dp.quadratic_factor,
        ancestor,
        ancestor_b,
        quotient_model,
        minimal_model,
        bad_primes: Vec::new(),
    };
    curve.bad_primes = classify_primes(&curve, &primes)?;
    Ok(curve)
}

/// c4 = A(9A^3 ± 8) and c6 = 27A^6 ± 36A^3 + 8 for the minimal model.
pub fn closed_form_c4_c6(a: &BigInt, sign: Sign) -> (BigInt, BigInt) {
    let pm = sign.pm();
    let a3 = a * a * a;
    let c4 = a * (9 * &a3 + 8 * pm);
    let c6 = 27 * &a3 * &a3 + 36 * pm * &a3 + 8;
    (c4, c6)
}

/// (0, b) is a point of order 3 on Y^2 = X^3 + (aX + b)^2: it lies on the curve
/// and the 3-division polynomial vanishes at X = 0, i.e. b8 = 0.
pub fn ancestor_torsion_holds(ancestor: &WeierstrassModel, b: &BigRational) -> bool {
    !b.is_zero() && ancestor.contains(&BigRational::zero(), b) && ancestor.invariants().b8.is_zero()
}

pub fn verify_ancestor_torsion(curve: &FamilyCurve) -> bool {
    ancestor_torsion_holds(&curve.ancestor, &curve.ancestor_b)
}

/// Splitting predicted by the family rule: 2 and the primes of m + 24n are
/// split; a prime of the quadratic factor is split iff it is 1 mod 3.
pub fn family_rule_split(curve: &FamilyCurve, l: &BigInt) -> bool {
    if l == &BigInt::from(2) || (&curve.linear_factor % l).is_zero() {
        return true;
    }
    (l % 3u32).is_one()
}

fn classify_primes(curve: &FamilyCurve, primes: &[BigInt]) -> Result<Vec<ReductionReport>> {
    primes
        .iter()
        .map(|l| {
            let within = l.to_u64().is_some_and(|v| v <= DEFAULT_BUDGET);
            let report = if within {
                reduction_type_checked(&curve.minimal_model, l)?
            } else {
                reduction_type(&curve.minimal_model, l)?
            };
            let split = match report.kind {
                ReductionKind::MultiplicativeSplit => true,
                ReductionKind::MultiplicativeNonsplit => false,
                _ => {
                    return Err(Error::OracleMismatch(format!(
                        "{}: prime {l} is not multiplicative",
                        curve.params
                    )))
                }
            };
            if split != family_rule_split(curve, l) {
                return Err(Error::OracleMismatch(format!(
                    "{}: family rule disagrees at {l}",
                    curve.params
                )));
            }
            debug_assert!(!within || report.criterion == Criterion::BothAgree);
            Ok(report)
        })
        .collect()
}

/// Re-run the three-way classification of every bad prime.
pub fn classify_bad_primes(curve: &FamilyCurve) -> Result<Vec<ReductionReport>> {
    let primes: Vec<BigInt> = curve.bad_primes.iter().map(|r| r.prime.clone()).collect();
    classify_primes(curve, &primes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveResult {
    pub m: u32,
    pub sign: Sign,
    pub n_max: u64,
    pub admissible: Vec<u64>,
    /// Admissible count in 1..=n_max divided by n_max.
    #[serde(with = "crate::num_str::ratio")]
    pub density: BigRational,
}

impl SieveResult {
    pub fn density_f64(&self) -> f64 {
        self.density.to_f64().unwrap_or(0.0)
    }
}

/// Whether delta_m(n) is squarefree, using machine words when they suffice.
pub fn delta_is_squarefree(m: u32, n: u64, sign: Sign) -> Result<bool> {
    FamilyParams::check_m(m)?;
    let lin = m as u128 + 24 * n as u128;
    let s = sign.mp() as i128;
    let nn = n as i128;
    let quad = 62208i128
        .checked_mul(nn)
        .and_then(|v| v.checked_mul(nn))
        .and_then(|v| v.checked_add((5184 * m as i128 + 432 * s) * nn))
        .map(|v| v + 108 * (m as i128).pow(2) + 18 * s * m as i128 + 1);
    let g = (2 * lin) >> two_exponent(m);
    match (u64::try_from(g), quad.and_then(|q| u64::try_from(q).ok())) {
        (Ok(g), Some(f)) => Ok(g.gcd(&f) == 1 && is_squarefree_u64(g) && is_squarefree_u64(f)),
        _ => is_squarefree(&delta_poly(m, n, sign)?.delta_m),
    }
}

/// All n in 0..=n_max with delta_m(n) squarefree.
pub fn sieve_n(m: u32, sign: Sign, n_max: u64) -> Result<SieveResult> {
    FamilyParams::check_m(m)?;
    let flags: Vec<bool> = (0..=n_max)
        .into_par_iter()
        .map(|n| delta_is_squarefree(m, n, sign))
        .collect::<Result<_>>()?;
    let admissible: Vec<u64> =
        flags.iter().enumerate().filter(|(_, &ok)| ok).map(|(n, _)| n as u64).collect();
    let counted = admissible.iter().filter(|&&n| n >= 1).count();
    let density = if n_max == 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(counted), BigInt::from(n_max))
    };
    Ok(SieveResult { m, sign, n_max, admissible, density })
}
