//! Exact integer kernel: factorisation, squarefreeness, residue symbols, CRT.

mod factor;
mod prime;
mod residue;

pub use factor::{
    factor, factor_u64, is_squarefree, is_squarefree_u64, valuation, Factorization, PrimePower,
};
pub(crate) use factor::valuation_unchecked;
pub use prime::{is_prime, is_prime_u64, mul_mod, pow_mod, primes_up_to, small_primes};
pub use residue::{crt, is_local_square, jacobi, jacobi_i64, jacobi_u64, smallest_nonresidue};

use num_bigint::BigInt;
use num_traits::One;

/// Euler's totient from a factorisation.
pub fn euler_phi(f: &Factorization) -> BigInt {
    let mut phi = BigInt::one();
    for pp in &f.factors {
        phi *= num_traits::pow(pp.prime.clone(), pp.exponent as usize - 1) * (&pp.prime - 1);
    }
    phi
}

/// Distinct prime divisors of a nonzero machine word.
pub fn prime_divisors_u64(n: u64) -> Vec<u64> {
    factor_u64(n).into_iter().map(|(p, _)| p).collect()
}
