use serde::{Deserialize, Serialize};

use crate::family::FamilyParams;

pub const SELMER3: &str = "ℤ/3ℤ";
pub const SELMER3_INFINITY: &str = "ℚ₃/ℤ₃";

/// Every hypothesis on d, evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub positive: bool,
    pub squarefree: bool,
    pub coprime_to_delta: bool,
    pub mod3: bool,
    pub mod4_or_8: bool,
    pub per_prime_table: bool,
    pub class_number_3free: bool,
    pub torsion_trivial: bool,
    pub root_number_minus_one: bool,
}

impl Checks {
    pub fn named(&self) -> [(&'static str, bool); 9] {
        [
            ("positive", self.positive),
            ("squarefree", self.squarefree),
            ("coprime_to_delta", self.coprime_to_delta),
            ("mod3", self.mod3),
            ("mod4_or_8", self.mod4_or_8),
            ("per_prime_table", self.per_prime_table),
            ("class_number_3free", self.class_number_3free),
            ("torsion_trivial", self.torsion_trivial),
            ("root_number_minus_one", self.root_number_minus_one),
        ]
    }

    pub fn all(&self) -> bool {
        self.named().iter().all(|(_, ok)| *ok)
    }

    /// The congruence and squarefree conditions, before any class number.
    pub fn congruences(&self) -> bool {
        self.positive
            && self.squarefree
            && self.coprime_to_delta
            && self.mod3
            && self.mod4_or_8
            && self.per_prime_table
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistCertificate {
    pub curve: FamilyParams,
    #[serde(with = "crate::num_str::i64_str")]
    pub d: i64,
    pub checks: Checks,
    /// Split multiplicative primes of the twist, when d is in range for it.
    #[serde(rename = "S")]
    pub split_count: Option<u32>,
    pub root_number: Option<i8>,
    pub narrow_class_number: Option<u64>,
    pub selmer3: Option<String>,
    pub selmer3_infinity: Option<String>,
    /// Rank one, assuming the Birch and Swinnerton-Dyer conjecture.
    pub conditional_rank_one: bool,
    pub failed_checks: Vec<String>,
}

/// Fill in the verdict fields from the checks.
pub fn predict_selmer(mut cert: TwistCertificate) -> TwistCertificate {
    cert.failed_checks = cert
        .checks
        .named()
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name.to_string())
        .collect();
    let pass = cert.failed_checks.is_empty();
    cert.selmer3 = pass.then(|| SELMER3.to_string());
    cert.selmer3_infinity = pass.then(|| SELMER3_INFINITY.to_string());
    cert.conditional_rank_one = pass;
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Sign;

    fn cert(checks: Checks) -> TwistCertificate {
        TwistCertificate {
            curve: FamilyParams::new(1, 0, Sign::Minus),
            d: 1,
            checks,
            split_count: None,
            root_number: None,
            narrow_class_number: None,
            selmer3: None,
            selmer3_infinity: None,
            conditional_rank_one: false,
            failed_checks: Vec::new(),
        }
    }

    const ALL: Checks = Checks {
        positive: true,
        squarefree: true,
        coprime_to_delta: true,
        mod3: true,
        mod4_or_8: true,
        per_prime_table: true,
        class_number_3free: true,
        torsion_trivial: true,
        root_number_minus_one: true,
    };

    #[test]
    fn gate() {
        let c = predict_selmer(cert(ALL));
        assert_eq!(c.selmer3.as_deref(), Some(SELMER3));
        assert_eq!(c.selmer3_infinity.as_deref(), Some(SELMER3_INFINITY));
        assert!(c.conditional_rank_one);
        let c = predict_selmer(cert(Checks { root_number_minus_one: false, ..ALL }));
        assert_eq!(c.selmer3, None);
        assert!(!c.conditional_rank_one);
        assert_eq!(c.failed_checks, vec!["root_number_minus_one"]);
    }
}
