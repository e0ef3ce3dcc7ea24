use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use twistforge::arith::{crt, factor, is_squarefree, is_squarefree_u64, jacobi_i64};
use twistforge::density::{sieve_constant, taya_lower_bound};
use twistforge::family::{construct, delta_is_squarefree, delta_poly, FamilyCurve, FamilyParams, Sign};
use twistforge::oracle::{brute_force_count, ideal_class_numbers, root_number_by_character};
use twistforge::quadfield::{is_fundamental_discriminant, narrow_class_number, FormClassGroup};
use twistforge::twist::{root_number, TwistContext};
use twistforge::weierstrass::{
    count_points_ns, inverse_parameters, quadratic_twist, transform, ReductionKind, WeierstrassModel,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn e10() -> FamilyCurve {
    construct(FamilyParams::new(1, 0, Sign::Minus)).unwrap()
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73])
}

fn split_flags(c: &FamilyCurve) -> Vec<(u64, bool)> {
    c.bad_primes
        .iter()
        .map(|r| (r.prime.to_u64().unwrap(), r.kind == ReductionKind::MultiplicativeSplit))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorisation_recomposes(n in 1i64..1_000_000_000_000) {
        let b = BigInt::from(n);
        let f = factor(&b).unwrap();
        prop_assert_eq!(f.recompose(), b.clone());
        let naive_sqfree = (2..=1_000_000i64).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0);
        if n < 1_000_000_000 {
            prop_assert_eq!(is_squarefree(&b).unwrap(), naive_sqfree);
            prop_assert_eq!(is_squarefree_u64(n as u64), naive_sqfree);
        }
    }

    #[test]
    fn jacobi_is_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, k in 0u64..500) {
        let n = 2 * k + 1;
        prop_assert_eq!(jacobi_i64(a * b, n), jacobi_i64(a, n) * jacobi_i64(b, n));
    }

    #[test]
    fn crt_solves_each_congruence(r1 in 0i64..1000, r2 in 0i64..1000, r3 in 0i64..1000) {
        let pairs: Vec<(BigInt, BigInt)> =
            [(r1, 8i64), (r2, 3), (r3, 91)].iter().map(|&(r, m)| (BigInt::from(r), BigInt::from(m))).collect();
        let (x, m) = crt(&pairs).unwrap();
        prop_assert_eq!(m, BigInt::from(2184));
        for (r, mi) in &pairs {
            prop_assert_eq!(x.mod_floor(mi), r.mod_floor(mi));
        }
    }

    #[test]
    fn coordinate_change_scales_discriminant(
        a in prop::array::uniform5(-20i64..20),
        u in 1i64..5, r in -5i64..5, s in -5i64..5, t in -5i64..5,
    ) {
        let e = WeierstrassModel::from_i64(a);
        prop_assume!(!e.is_singular());
        let (u, r, s, t) = (q(u, 1), q(r, 2), q(s, 1), q(t, 3));
        let e2 = transform(&e, &u, &r, &s, &t).unwrap();
        let u12 = num_traits::pow(u.clone(), 12);
        prop_assert_eq!(e2.discriminant() * &u12, e.discriminant().clone());
        prop_assert_eq!(&e2.invariants().j, &e.invariants().j);
        let [ui, ri, si, ti] = inverse_parameters(&u, &r, &s, &t).unwrap();
        prop_assert_eq!(transform(&e2, &ui, &ri, &si, &ti).unwrap(), e);
    }

    #[test]
    fn point_counts_match_brute_force(a in prop::array::uniform5(-30i64..30), p in small_prime()) {
        let e = WeierstrassModel::from_i64(a);
        prop_assume!(!e.is_singular());
        prop_assert_eq!(count_points_ns(&e, p).unwrap(), brute_force_count(&e, p).unwrap());
    }

    #[test]
    fn twist_scales_discriminant_by_d6(k in -2000i64..2000) {
        let d = 4 * k + 1;
        prop_assume!(d != 0 && is_squarefree_u64(d.unsigned_abs()));
        let c = e10();
        let t = quadratic_twist(&c.minimal_model, &BigInt::from(d)).unwrap();
        prop_assert!(t.is_integral());
        let d6 = BigRational::from_integer(BigInt::from(d).pow(6));
        prop_assert_eq!(t.discriminant().clone(), c.minimal_model.discriminant() * d6);
        prop_assert_eq!(&t.invariants().j, &c.minimal_model.invariants().j);
    }

    #[test]
    fn fast_squarefree_test_matches_big_integers(
        m in prop::sample::select(twistforge::family::ALLOWED_M.to_vec()),
        n in 0u64..5_000_000,
        plus in any::<bool>(),
    ) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let slow = is_squarefree(&delta_poly(m, n, sign).unwrap().delta_m).unwrap();
        prop_assert_eq!(delta_is_squarefree(m, n, sign).unwrap(), slow);
    }

    #[test]
    fn root_number_matches_character_formula(k in -250_000i64..250_000, which in 0usize..4) {
        let d = 4 * k + 1;
        let m = [1u32, 7, 13, 19][which];
        let curve = construct(FamilyParams::new(m, 0, Sign::Minus)).unwrap();
        prop_assume!(is_squarefree_u64(d.unsigned_abs()) && BigInt::from(d).gcd(&curve.discriminant).is_one());
        let r = root_number(&curve, d).unwrap();
        prop_assert_eq!(r.omega, root_number_by_character(&split_flags(&curve), d).unwrap());
    }

    #[test]
    fn candidates_satisfy_congruences_and_have_even_s(x in 1_000u64..60_000) {
        let ctx = TwistContext::new(e10()).unwrap();
        for d in ctx.rule.candidates(x) {
            prop_assert!(ctx.rule.admits(d));
            if is_squarefree_u64(d as u64) {
                let r = root_number(&ctx.curve, d).unwrap();
                prop_assert_eq!(r.split_count % 2, 0);
                prop_assert_eq!(r.omega, -1);
            }
        }
    }

    #[test]
    fn taya_bound_shrinks_with_new_primes(n in 1u64..5000, p in prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23])) {
        prop_assume!(n % p != 0);
        let a = taya_lower_bound(&BigInt::from(n)).unwrap().coefficient();
        let b = taya_lower_bound(&BigInt::from(n * p)).unwrap().coefficient();
        prop_assert!(b <= a);
    }

    #[test]
    fn family_curve_json_round_trip(m in prop::sample::select(vec![1u32, 7, 13, 19]), n in 0u64..40) {
        prop_assume!(delta_is_squarefree(m, n, Sign::Minus).unwrap());
        let c = construct(FamilyParams::new(m, n, Sign::Minus)).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: FamilyCurve = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn form_and_ideal_class_numbers_agree(disc in 5i64..4000) {
        prop_assume!(is_fundamental_discriminant(disc));
        let oracle = ideal_class_numbers(disc);
        prop_assert_eq!(narrow_class_number(disc).unwrap(), oracle.narrow_class_number);
    }

    #[test]
    fn composition_is_associative_and_commutative(disc in 5i64..3000, seed in 0usize..1000) {
        prop_assume!(is_fundamental_discriminant(disc));
        let g = FormClassGroup::new(disc);
        let h = g.class_number();
        let (x, y, z) = (seed % h, (seed / 3) % h, (seed / 7) % h);
        prop_assert_eq!(g.compose(x, y), g.compose(y, x));
        prop_assert_eq!(g.compose(g.compose(x, y), z), g.compose(x, g.compose(y, z)));
        prop_assert_eq!(g.compose(x, g.identity()), x);
    }
}

#[test]
fn truncated_euler_products_decrease() {
    let mut last = 1.0;
    for p_max in [10, 50, 100, 300] {
        let v = sieve_constant(1, Sign::Minus, p_max).unwrap().value;
        assert!(v <= last);
        last = v;
    }
}
