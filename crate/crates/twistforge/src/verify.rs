//! Oracle cross-checks: every computation with an independent second route is
//! rerun here and the two answers compared.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{is_local_square, is_squarefree, is_squarefree_u64};
use crate::error::{Error, Result};
use crate::family::{
    construct, delta_is_squarefree, delta_poly, family_rule_split, FamilyCurve, FamilyParams, Sign,
};
use crate::oracle::{ideal_class_numbers, root_number_by_character};
use crate::quadfield::{is_fundamental_discriminant, narrow_class_number};
use crate::twist::{root_number, torsion_analysis, TwistContext};
use crate::weierstrass::{quadratic_twist, reduction_type, split_by_point_count, ReductionKind};

pub const SUITES: [&str; 8] = [
    "integrality",
    "split-classification",
    "twist-splitting",
    "class-numbers",
    "root-number",
    "torsion",
    "enumeration-gaps",
    "sieve",
];

pub const PROVEN_M: [u32; 4] = [1, 7, 13, 19];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyOptions {
    pub suites: Vec<String>,
    /// Largest bad prime classified in split-classification.
    pub l_max: u64,
    pub n_max: u64,
    pub disc_max: i64,
    pub twist_samples: usize,
    pub certificates_per_curve: usize,
    pub gap_x: u64,
    pub sieve_n_max: u64,
    pub sieve_tolerance: f64,
    pub seed: u64,
    #[serde(skip)]
    pub inject_fault: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            l_max: 10_000,
            n_max: 200,
            disc_max: 2000,
            twist_samples: 50,
            certificates_per_curve: 50,
            gap_x: 100_000,
            sieve_n_max: 100_000,
            sieve_tolerance: 0.01,
            seed: 1,
            inject_fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRow {
    pub curve: FamilyParams,
    pub prime: u64,
    pub family_rule: bool,
    pub algebraic: bool,
    pub point_count: Option<bool>,
}

impl SplitRow {
    pub fn agree(&self) -> bool {
        self.point_count == Some(self.algebraic) && self.algebraic == self.family_rule
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: u64,
    pub passed: u64,
    pub mismatches: Vec<String>,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<SplitRow>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.passed == self.checked
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
    pub ok: bool,
}

struct Tally {
    report: SuiteReport,
    fault: bool,
}

impl Tally {
    fn new(name: &str, opts: &VerifyOptions) -> Self {
        Tally {
            report: SuiteReport {
                name: name.to_string(),
                checked: 0,
                passed: 0,
                mismatches: Vec::new(),
                seconds: 0.0,
                rows: Vec::new(),
            },
            fault: opts.inject_fault.as_deref() == Some(name),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        let injected = std::mem::take(&mut self.fault);
        self.report.checked += 1;
        if ok != injected {
            self.report.passed += 1;
        } else if injected {
            self.report.mismatches.push(format!("injected fault: {}", what()));
        } else {
            self.report.mismatches.push(what());
        }
    }

    /// Record a computation that reports disagreement through `OracleMismatch`.
    fn record_result<T>(&mut self, r: Result<T>, what: &str) -> Result<Option<T>> {
        match r {
            Ok(v) => {
                self.record(true, String::new);
                Ok(Some(v))
            }
            Err(e) if e.is_mismatch() => {
                self.record(false, || format!("{what}: {e}"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

/// The first `count` n >= 0 with delta_m(n) squarefree.
pub fn first_admissible_n(m: u32, sign: Sign, count: usize) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut n = 0;
    while out.len() < count {
        if delta_is_squarefree(m, n, sign)? {
            out.push(n);
        }
        n += 1;
    }
    Ok(out)
}

/// The sample of family curves shared by the suites.
pub fn sample_curves(per_sign: usize) -> Result<Vec<FamilyCurve>> {
    let mut out = Vec::new();
    for m in PROVEN_M {
        for sign in [Sign::Minus, Sign::Plus] {
            for n in first_admissible_n(m, sign, per_sign)? {
                out.push(construct(FamilyParams::new(m, n, sign))?);
            }
        }
    }
    Ok(out)
}

pub fn integrality(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut t = Tally::new("integrality", opts);
    for m in PROVEN_M {
        for sign in [Sign::Minus, Sign::Plus] {
            for n in 0..=opts.n_max {
                if !delta_is_squarefree(m, n, sign)? {
                    continue;
                }
                let params = FamilyParams::new(m, n, sign);
                let Some(c) = t.record_result(construct(params), &params.to_string())? else {
                    continue;
                };
                let closed = delta_poly(m, n, sign)?.full_value;
                let derived = c.minimal_model.discriminant().clone();
                let ints = c.minimal_model.integer_coefficients();
                t.record(derived.is_integer() && derived.to_integer() == closed && ints.is_some(), || {
                    format!("{params}: closed form {closed}, invariants give {derived}")
                });
            }
        }
    }
    Ok(t.report)
}

pub fn split_classification(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut t = Tally::new("split-classification", opts);
    for curve in sample_curves(3)? {
        for report in &curve.bad_primes {
            let Some(l) = report.prime.to_u64().filter(|&l| l <= opts.l_max) else {
                continue;
            };
            let lb = BigInt::from(l);
            let algebraic = reduction_type(&curve.minimal_model, &lb)?.kind == ReductionKind::MultiplicativeSplit;
            let row = SplitRow {
                curve: curve.params,
                prime: l,
                family_rule: family_rule_split(&curve, &lb),
                algebraic,
                point_count: split_by_point_count(&curve.minimal_model, l)?,
            };
            t.record(row.agree(), || format!("{} at {l}: {row:?}", curve.params));
            t.report.rows.push(row);
        }
    }
    Ok(t.report)
}

pub fn twist_splitting(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut t = Tally::new("twist-splitting", opts);
    let curve = construct(FamilyParams::new(1, 0, Sign::Minus))?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sampled = 0;
    while sampled < opts.twist_samples {
        let d: i64 = rng.gen_range(-1_000_000..=1_000_000);
        if d.rem_euclid(4) != 1 || d % 7 == 0 || d % 13 == 0 || !is_squarefree_u64(d.unsigned_abs()) {
            continue;
        }
        sampled += 1;
        let twist = quadratic_twist(&curve.minimal_model, &BigInt::from(d))?;
        for l in [7u64, 13] {
            let predicted = is_local_square(d, l);
            let counted = split_by_point_count(&twist, l)?;
            t.record(counted == Some(predicted), || {
                format!("d = {d} at {l}: predicted {predicted}, counted {counted:?}")
            });
        }
    }
    Ok(t.report)
}

pub fn class_numbers(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut t = Tally::new("class-numbers", opts);
    for disc in 5..opts.disc_max {
        if !is_fundamental_discriminant(disc) {
            continue;
        }
        let forms = narrow_class_number(disc)?;
        let ideals = ideal_class_numbers(disc);
        t.record(forms == ideals.narrow_class_number && ideals.closed_under_multiplication, || {
            format!("D = {disc}: forms {forms}, ideals {}", ideals.narrow_class_number)
        });
    }
    Ok(t.report)
}

fn certificates(curve: &FamilyCurve, count: usize) -> Result<Vec<crate::twist::TwistCertificate>> {
    TwistContext::new(curve.clone())?.first_admissible(count, 100_000_000)
}

pub fn root_numbers(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut t = Tally::new("root-number", opts);
    for curve in sample_curves(1)? {
        let bad: Vec<(u64, bool)> = curve
            .bad_primes
            .iter()
            .map(|r| (r.prime.to_u64().unwrap_or(0), r.kind == ReductionKind::MultiplicativeSplit))
            .collect();
        for cert in certificates(&curve, opts.certificates_per_curve)? {
            let r = root_number(&curve, cert.d)?;
            let by_char = root_number_by_character(&bad, cert.d)?;
            t.record(r.split_count % 2 == 0 && r.omega == -1 && by_char == r.omega, || {
                format!("{} d = {}: S = {}, omega {}, character {by_char}", curve.params, cert.d, r.split_count, r.omega)
            });
        }
    }
    Ok(t.report)
}

pub fn torsion(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut t = Tally::new("torsion", opts);
    for curve in sample_curves(1)? {
        for cert in certificates(&curve, opts.certificates_per_curve)? {
            let label = format!("{} d = {}", curve.params, cert.d);
            if let Some(a) = t.record_result(torsion_analysis(&curve, cert.d), &label)? {
                t.record(a.trivial, || format!("{label}: nontrivial"));
            }
        }
    }
    Ok(t.report)
}

pub fn enumeration_gaps(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut t = Tally::new("enumeration-gaps", opts);
    for curve in sample_curves(1)? {
        let ctx = TwistContext::new(curve.clone())?;
        let fast = ctx.rule.candidates(opts.gap_x);
        let naive: Vec<i64> = (1..=opts.gap_x as i64).filter(|&d| ctx.rule.admits(d)).collect();
        t.record(fast == naive, || {
            format!("{}: {} candidates, naive scan {}", curve.params, fast.len(), naive.len())
        });
    }
    Ok(t.report)
}

pub fn sieve(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut t = Tally::new("sieve", opts);
    for (m, target) in [(1u32, 0.85164041), (8, 0.6387303)] {
        for sign in [Sign::Minus, Sign::Plus] {
            for n in 0..=opts.sieve_n_max.min(2000) {
                let fast = delta_is_squarefree(m, n, sign)?;
                let slow = is_squarefree(&delta_poly(m, n, sign)?.delta_m)?;
                t.record(fast == slow, || format!("m = {m} {sign} n = {n}: {fast} vs {slow}"));
            }
        }
        if opts.sieve_n_max >= 100_000 {
            let density = crate::family::sieve_n(m, Sign::Minus, opts.sieve_n_max)?.density_f64();
            t.record((density - target).abs() <= opts.sieve_tolerance, || {
                format!("m = {m}: density {density:.6}, expected {target}")
            });
        }
    }
    Ok(t.report)
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut report = match name {
        "integrality" => integrality(opts),
        "split-classification" => split_classification(opts),
        "twist-splitting" => twist_splitting(opts),
        "class-numbers" => class_numbers(opts),
        "root-number" => root_numbers(opts),
        "torsion" => torsion(opts),
        "enumeration-gaps" => enumeration_gaps(opts),
        "sieve" => sieve(opts),
        other => Err(Error::Config(format!("unknown suite {other}"))),
    }?;
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    let suites = opts.suites.iter().map(|s| run_suite(s, opts)).collect::<Result<Vec<_>>>()?;
    let ok = suites.iter().all(SuiteReport::ok);
    Ok(VerifyReport { suites, ok })
}
