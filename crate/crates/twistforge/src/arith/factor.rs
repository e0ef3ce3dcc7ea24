//! Integer factorisation: trial division followed by Pollard-Brent rho.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::prime::{is_prime, is_prime_u64, mul_mod, small_primes};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::num_str::int")]
    pub prime: BigInt,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "crate::num_str::int")]
    pub value: BigInt,
    pub sign: i8,
    pub factors: Vec<PrimePower>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|f| &f.prime)
    }

    pub fn recompose(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for f in &self.factors {
            acc *= num_traits::pow(f.prime.clone(), f.exponent as usize);
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|f| f.exponent == 1)
    }
}

/// Factor a nonzero integer. Output primes are strictly increasing.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut primes: Vec<BigInt> = Vec::new();
    let m = n.abs();
    match m.to_u64() {
        Some(v) => primes.extend(factor_u64(v).into_iter().flat_map(|(p, e)| {
            std::iter::repeat(BigInt::from(p)).take(e as usize)
        })),
        None => factor_big_into(m, &mut primes),
    }
    primes.sort();
    let mut factors: Vec<PrimePower> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some(last) if last.prime == p => last.exponent += 1,
            _ => factors.push(PrimePower { prime: p, exponent: 1 }),
        }
    }
    Ok(Factorization { value: n.clone(), sign, factors })
}

fn factor_big_into(mut m: BigInt, out: &mut Vec<BigInt>) {
    for &p in small_primes() {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        while (&m % p).is_zero() {
            m /= p;
            out.push(pb.clone());
        }
    }
    split_big(m, out);
}

fn split_big(m: BigInt, out: &mut Vec<BigInt>) {
    if m.is_one() {
        return;
    }
    if let Some(v) = m.to_u64() {
        for (p, e) in factor_u64(v) {
            out.extend(std::iter::repeat(BigInt::from(p)).take(e as usize));
        }
        return;
    }
    if is_prime(&m) {
        out.push(m);
        return;
    }
    let r = m.sqrt();
    if &r * &r == m {
        split_big(r.clone(), out);
        split_big(r, out);
        return;
    }
    let d = rho_big(&m);
    let q = &m / &d;
    split_big(d, out);
    split_big(q, out);
}

/// Factor a machine-word integer into (prime, exponent) pairs, sorted.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let mut big = Vec::new();
        split_u64(n, &mut big);
        big.sort_unstable();
        for p in big {
            match out.last_mut() {
                Some(last) if last.0 == p => last.1 += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let r = n.isqrt();
    if r * r == n {
        split_u64(r, out);
        split_u64(r, out);
        return;
    }
    let d = rho_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

/// Brent's variant of Pollard rho. Seeded from `n` so runs are reproducible.
fn rho_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n ^ 0x7157_f0e9);
    loop {
        let c = rng.gen_range(1..n);
        let mut y = rng.gen_range(0..n);
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let m = 128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
}

fn rho_big(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let seed = (n % 1_000_000_007u64).to_u64().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7157_f0e9);
    loop {
        let c = BigInt::from(rng.gen_range(1u64..u64::MAX));
        let f = |x: &BigInt| (x * x + &c).mod_floor(n);
        let mut y = BigInt::from(rng.gen::<u64>()).mod_floor(n);
        let (mut g, mut r, mut q) = (BigInt::one(), 1u64, BigInt::one());
        let m = 128u64;
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()).mod_floor(n);
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
}

/// Squarefreeness without a full factorisation when possible: strip primes up to
/// the cube root of the cofactor, after which a squareful cofactor must be a square.
pub fn is_squarefree_u64(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    for &p in small_primes() {
        let p = p as u64;
        if p.saturating_mul(p).saturating_mul(p) > n {
            if n == 1 {
                return true;
            }
            let r = n.isqrt();
            return r * r != n;
        }
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
    }
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    match n.abs().to_u64() {
        Some(v) => Ok(is_squarefree_u64(v)),
        None => Ok(factor(n)?.is_squarefree()),
    }
}

/// Largest e with p^e | n.
pub fn valuation(n: &BigInt, p: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(valuation_unchecked(n, p))
}

pub(crate) fn valuation_unchecked(n: &BigInt, p: &BigInt) -> u32 {
    let mut e = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn pairs(f: &Factorization) -> Vec<(i64, u32)> {
        f.factors.iter().map(|p| (p.prime.to_i64().unwrap(), p.exponent)).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(pairs(&factor(&b(91)).unwrap()), vec![(7, 1), (13, 1)]);
        assert_eq!(pairs(&factor(&b(182)).unwrap()), vec![(2, 1), (7, 1), (13, 1)]);
        let unit = factor(&b(-1)).unwrap();
        assert_eq!(unit.sign, -1);
        assert!(unit.factors.is_empty());
        assert_eq!(factor(&b(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn large_semiprimes() {
        let p: BigInt = "1000000007".parse().unwrap();
        let q: BigInt = "10000000019".parse().unwrap();
        let n = &p * &q * &q * b(-6);
        let f = factor(&n).unwrap();
        assert_eq!(f.recompose(), n);
        assert_eq!(f.factors.last().unwrap().prime, q);
        assert_eq!(f.factors.last().unwrap().exponent, 2);
        let r = 4_294_967_291u64 * 4_294_967_279;
        assert_eq!(factor_u64(r), vec![(4_294_967_279, 1), (4_294_967_291, 1)]);
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(&b(91)).unwrap());
        assert!(!is_squarefree(&b(12)).unwrap());
        assert!(is_squarefree(&b(1)).unwrap());
        assert!(!is_squarefree_u64(1_000_003u64 * 1_000_003));
        assert!(is_squarefree_u64(1_000_003u64 * 1_000_033));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&b(-182), &b(2)), Ok(1));
        assert_eq!(valuation(&b(9), &b(3)), Ok(2));
        assert_eq!(valuation(&b(91), &b(2)), Ok(0));
        assert!(matches!(valuation(&b(8), &b(4)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn squarefree_matches_divisor_scan() {
        let mut sqf = vec![true; 100_001];
        sqf[0] = false;
        let mut k = 2usize;
        while k * k <= 100_000 {
            for j in (k * k..=100_000).step_by(k * k) {
                sqf[j] = false;
            }
            k += 1;
        }
        for n in 1..=100_000u64 {
            assert_eq!(is_squarefree_u64(n), sqf[n as usize], "{n}");
        }
    }
}
