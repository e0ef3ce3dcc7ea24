//! Naive point counting over prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::WeierstrassModel;
use crate::arith::{is_prime_u64, mul_mod};
use crate::error::{Error, Result};

/// Largest prime accepted by [`count_points_ns`].
pub const DEFAULT_BUDGET: u64 = 100_000;

fn reduce_rational(v: &BigRational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let den = v.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::NonIntegralAtPrime(p.to_string()));
    }
    let inv = den.modpow(&BigInt::from(p - 2), &pb);
    Ok((v.numer() * inv).mod_floor(&pb).to_u64().unwrap())
}

/// Coefficients `[a1, a2, a3, a4, a6]` reduced modulo p.
pub fn reduce_coefficients(model: &WeierstrassModel, p: u64) -> Result<[u64; 5]> {
    let c = model.coefficients();
    Ok([
        reduce_rational(c[0], p)?,
        reduce_rational(c[1], p)?,
        reduce_rational(c[2], p)?,
        reduce_rational(c[3], p)?,
        reduce_rational(c[4], p)?,
    ])
}

/// Number of nonsingular points of the reduction mod p, point at infinity
/// included. For good primes this is #E(F_p).
pub fn count_points_ns(model: &WeierstrassModel, p: u64) -> Result<u64> {
    count_points_ns_with_budget(model, p, DEFAULT_BUDGET)
}

pub fn count_points_ns_with_budget(model: &WeierstrassModel, p: u64, budget: u64) -> Result<u64> {
    if p > budget {
        return Err(Error::BudgetExceeded(p.to_string(), budget));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let a = reduce_coefficients(model, p)?;
    if p == 2 {
        return Ok(count_char2(a));
    }
    Ok(count_odd(a, p))
}

fn count_char2([a1, a2, a3, a4, a6]: [u64; 5]) -> u64 {
    let mut n = 1;
    for x in 0..2u64 {
        for y in 0..2u64 {
            let f = (y * y + a1 * x * y + a3 * y + x * x * x + a2 * x * x + a4 * x + a6) % 2;
            let fx = (a1 * y + 3 * x * x + 2 * a2 * x + a4) % 2;
            let fy = (2 * y + a1 * x + a3) % 2;
            if f == 0 && (fx != 0 || fy != 0) {
                n += 1;
            }
        }
    }
    n
}

fn count_odd([a1, a2, a3, a4, a6]: [u64; 5], p: u64) -> u64 {
    let mut square = vec![false; p as usize];
    for y in 0..p {
        square[mul_mod(y, y, p) as usize] = true;
    }
    let inv2 = (p + 1) / 2;
    let mut n = 1u64;
    for x in 0..p {
        let x2 = mul_mod(x, x, p);
        let lin = (mul_mod(a1, x, p) + a3) % p;
        let cubic = (mul_mod(x2, x, p) + mul_mod(a2, x2, p) + mul_mod(a4, x, p) + a6) % p;
        let disc = (mul_mod(lin, lin, p) + mul_mod(4, cubic, p)) % p;
        if disc == 0 {
            // Double root y0 = -lin/2; the point is singular iff F_x vanishes too.
            let y0 = mul_mod((p - lin) % p, inv2, p);
            let fx = (mul_mod(a1, y0, p) + p - (mul_mod(3, x2, p) + mul_mod(2 * a2 % p, x, p) + a4) % p) % p;
            if fx != 0 {
                n += 1;
            }
        } else if square[disc as usize] {
            n += 2;
        }
    }
    n
}

/// gcd of #E(F_p) over odd primes of good reduction. A multiple of the order
/// of the rational torsion subgroup.
pub fn torsion_order_bound(model: &WeierstrassModel, sample_primes: &[u64]) -> Result<u64> {
    if sample_primes.is_empty() {
        return Err(Error::NoSamples);
    }
    let delta = model.discriminant();
    let mut g = 0u64;
    for &p in sample_primes {
        if p % 2 == 0 || !is_prime_u64(p) {
            return Err(Error::BadSamplePrime(p.to_string()));
        }
        if !model.coefficients().iter().all(|c| (c.denom() % p) != BigInt::zero())
            || (delta.numer() % p).is_zero()
        {
            return Err(Error::BadSamplePrime(p.to_string()));
        }
        g = g.gcd(&count_points_ns(model, p)?);
    }
    Ok(g)
}
