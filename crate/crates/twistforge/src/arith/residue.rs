//! Quadratic residue symbols and the Chinese remainder theorem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::prime::is_prime;
use crate::error::{Error, Result};

/// Jacobi symbol (a/n) for odd n >= 1.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i8> {
    if n.is_even() || !n.is_positive() {
        return Err(Error::EvenModulus(n.to_string()));
    }
    if let Some(nv) = n.to_u64() {
        let av = a.mod_floor(n).to_u64().unwrap();
        return Ok(jacobi_u64(av, nv));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i8;
    while !a.is_zero() {
        let z = a.trailing_zeros().unwrap();
        a >>= z;
        let r8 = (&n % 8u32).to_u32().unwrap();
        if z % 2 == 1 && (r8 == 3 || r8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { t } else { 0 })
}

/// Jacobi symbol on machine words; `n` must be odd.
pub fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Jacobi symbol with a signed numerator.
pub fn jacobi_i64(a: i64, n: u64) -> i8 {
    jacobi_u64(a.rem_euclid(n as i64) as u64, n)
}

/// Combine congruences x = r_i mod m_i with pairwise coprime moduli.
pub fn crt(pairs: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt)> {
    let mut r = BigInt::zero();
    let mut m = BigInt::one();
    for (ri, mi) in pairs {
        if !mi.is_positive() {
            return Err(Error::NonPositiveModulus(mi.to_string()));
        }
        let e = m.extended_gcd(mi);
        if !e.gcd.is_one() {
            return Err(Error::NonCoprimeModuli(m.to_string(), mi.to_string()));
        }
        // x = r + m*k with m*k = ri - r mod mi
        let k = ((ri - &r) * e.x).mod_floor(mi);
        r += &m * k;
        m *= mi;
        r = r.mod_floor(&m);
    }
    Ok((r, m))
}

/// Least positive quadratic nonresidue modulo an odd prime.
pub fn smallest_nonresidue(l: &BigInt) -> Result<BigInt> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l.to_string()));
    }
    if l == &BigInt::from(2) {
        return Err(Error::EvenModulus(l.to_string()));
    }
    let mut a = BigInt::from(2);
    loop {
        if jacobi(&a, l)? == -1 {
            return Ok(a);
        }
        a += 1;
    }
}

/// Whether d is a square in Q_l, for d a unit at l (d odd when l = 2).
pub fn is_local_square(d: i64, l: u64) -> bool {
    if l == 2 {
        d.rem_euclid(8) == 1
    } else {
        jacobi_i64(d, l) == 1
    }
}
