//! Real quadratic fields: fundamental discriminants and narrow class numbers
//! counted as cycles of reduced indefinite forms.
//!
//! The narrow class number h+ is either h or 2h, so 3 | h exactly when 3 | h+.

mod forms;

pub use forms::{compose_forms, reduced_forms, FormClassGroup, IndefiniteForm};

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::is_squarefree_u64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadField {
    #[serde(with = "crate::num_str::i64_str")]
    pub d: i64,
    #[serde(with = "crate::num_str::i64_str")]
    pub fundamental_discriminant: i64,
    pub h_plus: u64,
    pub three_divides_h: bool,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        let disc = fundamental_discriminant(d)?;
        let h_plus = narrow_class_number(disc)?;
        Ok(QuadField { d, fundamental_discriminant: disc, h_plus, three_divides_h: h_plus % 3 == 0 })
    }
}

/// d for d = 1 mod 4, otherwise 4d.
pub fn fundamental_discriminant(d: i64) -> Result<i64> {
    if d <= 1 {
        return Err(Error::NonPositive(d.to_string()));
    }
    if !is_squarefree_u64(d as u64) {
        return Err(Error::NotSquarefree(d.to_string()));
    }
    Ok(if d % 4 == 1 { d } else { 4 * d })
}

pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc <= 1 {
        return false;
    }
    match disc % 4 {
        1 => is_squarefree_u64(disc as u64),
        0 => {
            let m = disc / 4;
            (m % 4 == 2 || m % 4 == 3) && is_squarefree_u64(m as u64)
        }
        _ => false,
    }
}

fn cache() -> &'static Mutex<HashMap<i64, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Narrow class number of the real quadratic field of discriminant `disc`.
pub fn narrow_class_number(disc: i64) -> Result<u64> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc.to_string()));
    }
    if let Some(&h) = cache().lock().unwrap().get(&disc) {
        return Ok(h);
    }
    let h = FormClassGroup::new(disc).class_number() as u64;
    cache().lock().unwrap().insert(disc, h);
    Ok(h)
}

pub fn three_divides_h(d: i64) -> Result<bool> {
    Ok(narrow_class_number(fundamental_discriminant(d)?)? % 3 == 0)
}

/// Number of narrow classes whose cube is principal.
pub fn h3_star(disc: i64) -> Result<u64> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc.to_string()));
    }
    Ok(FormClassGroup::new(disc).cube_trivial_count() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H3Summary {
    pub x: u64,
    pub residue: u64,
    pub modulus: u64,
    pub fields: u64,
    pub three_free: u64,
    pub sum_h3_star: u64,
}

impl H3Summary {
    pub fn mean_h3_star(&self) -> Option<f64> {
        (self.fields > 0).then(|| self.sum_h3_star as f64 / self.fields as f64)
    }

    pub fn three_free_fraction(&self) -> Option<f64> {
        (self.fields > 0).then(|| self.three_free as f64 / self.fields as f64)
    }
}

/// Class-number statistics over fundamental discriminants D <= x with
/// D = residue mod modulus.
pub fn h3_star_statistics(x: u64, residue: u64, modulus: u64) -> Result<H3Summary> {
    if modulus == 0 {
        return Err(Error::NonPositiveModulus("0".into()));
    }
    let residue = residue % modulus;
    let stats: Vec<(u64, u64)> = (5..=x.max(4))
        .into_par_iter()
        .filter(|&disc| disc % modulus == residue && is_fundamental_discriminant(disc as i64))
        .map(|disc| {
            let g = FormClassGroup::new(disc as i64);
            (g.class_number() as u64, g.cube_trivial_count() as u64)
        })
        .collect();
    Ok(H3Summary {
        x,
        residue,
        modulus,
        fields: stats.len() as u64,
        three_free: stats.iter().filter(|(h, _)| h % 3 != 0).count() as u64,
        sum_h3_star: stats.iter().map(|(_, c)| c).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_examples() {
        assert_eq!(fundamental_discriminant(5), Ok(5));
        assert_eq!(fundamental_discriminant(6), Ok(24));
        assert_eq!(fundamental_discriminant(229), Ok(229));
        assert!(matches!(fundamental_discriminant(12), Err(Error::NotSquarefree(_))));
        assert!(matches!(fundamental_discriminant(1), Err(Error::NonPositive(_))));
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(narrow_class_number(5), Ok(1));
        assert_eq!(narrow_class_number(229), Ok(3));
        assert_eq!(narrow_class_number(8), Ok(1));
        assert!(matches!(narrow_class_number(9), Err(Error::NotFundamental(_))));
        assert!(three_divides_h(229).unwrap());
        assert!(!three_divides_h(5).unwrap());
        assert!(!three_divides_h(2).unwrap());
    }

    #[test]
    fn statistics() {
        let s = h3_star_statistics(100, 0, 1).unwrap();
        assert!(s.fields > 0);
        assert_eq!(s.mean_h3_star(), Some(1.0));
        assert_eq!(h3_star_statistics(4, 0, 1).unwrap().fields, 0);
        assert!(h3_star_statistics(10, 0, 0).is_err());
    }

    #[test]
    fn prime_discriminants_have_odd_h_plus() {
        for p in crate::arith::primes_up_to(3000) {
            if p % 4 == 1 {
                assert_eq!(narrow_class_number(p as i64).unwrap() % 2, 1, "{p}");
            }
        }
    }
}
