use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_squarefree;
use crate::error::{Error, Result};

/// Derived invariants of a long Weierstrass equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    #[serde(with = "crate::num_str::ratio")]
    pub b2: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    pub b4: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    pub b6: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    pub b8: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    pub c4: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    pub c6: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    pub discriminant: BigRational,
    #[serde(with = "crate::num_str::opt_ratio")]
    pub j: Option<BigRational>,
}

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q.
///
/// Invariants are computed on construction and kept in sync; the only way to
/// change coefficients is to build a new model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct WeierstrassModel {
    #[serde(with = "crate::num_str::ratio")]
    a1: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    a2: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    a3: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    a4: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    a6: BigRational,
    #[serde(flatten)]
    invariants: Invariants,
}

#[derive(Deserialize)]
struct RawModel {
    #[serde(with = "crate::num_str::ratio")]
    a1: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    a2: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    a3: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    a4: BigRational,
    #[serde(with = "crate::num_str::ratio")]
    a6: BigRational,
    #[serde(flatten)]
    invariants: Option<Invariants>,
}

impl TryFrom<RawModel> for WeierstrassModel {
    type Error = String;

    fn try_from(raw: RawModel) -> std::result::Result<Self, String> {
        let model = WeierstrassModel::new([raw.a1, raw.a2, raw.a3, raw.a4, raw.a6]);
        match raw.invariants {
            Some(inv) if inv != model.invariants => {
                Err("stored invariants disagree with the coefficients".into())
            }
            _ => Ok(model),
        }
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Standard b-, c-invariants, discriminant and j-invariant.
pub fn derive_invariants(a: &[BigRational; 5]) -> Invariants {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + q(4) * a2;
    let b4 = q(2) * a4 + a1 * a3;
    let b6 = a3 * a3 + q(4) * a6;
    let b8 = a1 * a1 * a6 + q(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - q(24) * &b4;
    let c6 = -(&b2 * &b2 * &b2) + q(36) * &b2 * &b4 - q(216) * &b6;
    let discriminant = -(&b2 * &b2 * &b8) - q(8) * &b4 * &b4 * &b4 - q(27) * &b6 * &b6
        + q(9) * &b2 * &b4 * &b6;
    let j = if discriminant.is_zero() {
        None
    } else {
        Some(&c4 * &c4 * &c4 / &discriminant)
    };
    Invariants { b2, b4, b6, b8, c4, c6, discriminant, j }
}

impl WeierstrassModel {
    /// Build a model from `[a1, a2, a3, a4, a6]`. Singular equations are allowed.
    pub fn new(a: [BigRational; 5]) -> Self {
        let invariants = derive_invariants(&a);
        let [a1, a2, a3, a4, a6] = a;
        WeierstrassModel { a1, a2, a3, a4, a6, invariants }
    }

    pub fn from_ints(a: [BigInt; 5]) -> Self {
        Self::new(a.map(BigRational::from_integer))
    }

    pub fn from_i64(a: [i64; 5]) -> Self {
        Self::new(a.map(q))
    }

    pub fn coefficients(&self) -> [&BigRational; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn a1(&self) -> &BigRational {
        &self.a1
    }
    pub fn a2(&self) -> &BigRational {
        &self.a2
    }
    pub fn a3(&self) -> &BigRational {
        &self.a3
    }
    pub fn a4(&self) -> &BigRational {
        &self.a4
    }
    pub fn a6(&self) -> &BigRational {
        &self.a6
    }

    pub fn invariants(&self) -> &Invariants {
        &self.invariants
    }

    pub fn discriminant(&self) -> &BigRational {
        &self.invariants.discriminant
    }

    pub fn c4(&self) -> &BigRational {
        &self.invariants.c4
    }

    pub fn c6(&self) -> &BigRational {
        &self.invariants.c6
    }

    pub fn is_singular(&self) -> bool {
        self.invariants.discriminant.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, if the model is integral.
    pub fn integer_coefficients(&self) -> Option<[BigInt; 5]> {
        if !self.is_integral() {
            return None;
        }
        Some([&self.a1, &self.a2, &self.a3, &self.a4, &self.a6].map(|c| c.to_integer()))
    }

    /// Whether the affine point (x, y) satisfies the equation.
    pub fn contains(&self, x: &BigRational, y: &BigRational) -> bool {
        let lhs = y * y + &self.a1 * x * y + &self.a3 * y;
        let rhs = x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6;
        lhs == rhs
    }
}

/// Change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
pub fn transform(
    model: &WeierstrassModel,
    u: &BigRational,
    r: &BigRational,
    s: &BigRational,
    t: &BigRational,
) -> Result<WeierstrassModel> {
    if u.is_zero() {
        return Err(Error::ZeroScale);
    }
    let [a1, a2, a3, a4, a6] = model.coefficients();
    let u2 = u * u;
    let u3 = &u2 * u;
    let u4 = &u2 * &u2;
    let u6 = &u3 * &u3;
    let n1 = a1 + q(2) * s;
    let n2 = a2 - s * a1 + q(3) * r - s * s;
    let n3 = a3 + r * a1 + q(2) * t;
    let n4 = a4 - s * a3 + q(2) * r * a2 - (t + r * s) * a1 + q(3) * r * r - q(2) * s * t;
    let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    Ok(WeierstrassModel::new([n1 / u, n2 / u2, n3 / u3, n4 / u4, n6 / u6]))
}

/// Parameters undoing `transform(_, u, r, s, t)`.
pub fn inverse_parameters(
    u: &BigRational,
    r: &BigRational,
    s: &BigRational,
    t: &BigRational,
) -> Result<[BigRational; 4]> {
    if u.is_zero() {
        return Err(Error::ZeroScale);
    }
    let u3 = u * u * u;
    Ok([u.recip(), -r / (u * u), -s / u, (r * s - t) / u3])
}

/// Quadratic twist by a squarefree d.
///
/// Short models y^2 = x^3 + a2 x^2 + a4 x + a6 twist to a2 d, a4 d^2, a6 d^3.
/// Models with a1 = 1, a3 = 0 twist to a2 d + (d-1)/4, a4 d^2, a6 d^3, which
/// is integral only for d = 1 mod 4. Both keep the discriminant at d^6 times
/// the original.
pub fn quadratic_twist(model: &WeierstrassModel, d: &BigInt) -> Result<WeierstrassModel> {
    if d.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !is_squarefree(d)? {
        return Err(Error::NotSquarefree(d.to_string()));
    }
    let [a1, a2, a3, a4, a6] = model.coefficients();
    if !a3.is_zero() || !(a1.is_zero() || a1.is_one()) {
        return Err(Error::BadShape("twist needs a3 = 0 and a1 in {0, 1}".into()));
    }
    let dq = BigRational::from_integer(d.clone());
    let d2 = &dq * &dq;
    let d3 = &d2 * &dq;
    let new_a2 = if a1.is_zero() {
        a2 * &dq
    } else {
        if d.mod_floor(&BigInt::from(4)) != BigInt::one() {
            return Err(Error::IntegralityFailure(d.to_string()));
        }
        a2 * &dq + (&dq - q(1)) / q(4)
    };
    Ok(WeierstrassModel::new([a1.clone(), new_a2, q(0), a4 * d2, a6 * d3]))
}

/// Numerator valuation helper for rationals known to be integral at p.
pub(crate) fn rational_valuation(v: &BigRational, p: &BigInt) -> Option<u32> {
    if v.is_zero() {
        return None;
    }
    Some(crate::arith::valuation_unchecked(&v.numer().abs(), p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e10() -> WeierstrassModel {
        WeierstrassModel::from_i64([1, 0, 0, -15663, -755809])
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(WeierstrassModel::from_i64([0, 0, 0, 0, 1]).discriminant(), &q(-432));
        let e = e10();
        assert_eq!(e.discriminant(), &q(-182));
        assert_eq!(e.c4(), &q(751_825));
        assert_eq!(e.c6(), &q(651_891_239));
    }

    #[test]
    fn identities_hold() {
        let e = e10();
        let i = e.invariants();
        assert_eq!(&i.c4 * &i.c4 * &i.c4 - &i.c6 * &i.c6, q(1728) * &i.discriminant);
        assert_eq!(q(4) * &i.b8, &i.b2 * &i.b6 - &i.b4 * &i.b4);
    }

    #[test]
    fn quotient_model_invariants() {
        // y^2 = x^3 + D(Ax + B)^2 with A = 17, B = 4/9, D = -3.
        let a = q(17);
        let b = BigRational::new(4.into(), 9.into());
        let d = q(-3);
        let m = WeierstrassModel::new([
            q(0),
            &d * &a * &a,
            q(0),
            q(2) * &a * &b * &d,
            &d * &b * &b,
        ]);
        let expect = q(16) * &a * &d * (&a * &a * &a * &d - q(6) * &b);
        assert_eq!(m.c4(), &expect);
    }

    #[test]
    fn transform_reaches_minimal_model() {
        let a = q(17);
        let b = BigRational::new(4.into(), 9.into());
        let d = q(-3);
        let old = WeierstrassModel::new([
            q(0),
            &d * &a * &a,
            q(0),
            q(2) * &a * &b * &d,
            &d * &b * &b,
        ]);
        let r = BigRational::new(1.into(), 3.into()) + &a * &a;
        let new = transform(&old, &q(2), &r, &q(1), &q(0)).unwrap();
        assert_eq!(new, e10());
        assert_eq!(new.discriminant() * q(4096), *old.discriminant());
    }

    #[test]
    fn transform_identity_and_inverse() {
        let e = e10();
        assert_eq!(transform(&e, &q(1), &q(0), &q(0), &q(0)).unwrap(), e);
        let (u, r, s, t) = (q(3), BigRational::new(1.into(), 2.into()), q(-2), q(5));
        let f = transform(&e, &u, &r, &s, &t).unwrap();
        let [ui, ri, si, ti] = inverse_parameters(&u, &r, &s, &t).unwrap();
        assert_eq!(transform(&f, &ui, &ri, &si, &ti).unwrap(), e);
        assert_eq!(transform(&e, &q(0), &r, &s, &t), Err(Error::ZeroScale));
    }

    #[test]
    fn twist_examples() {
        let e = e10();
        assert_eq!(quadratic_twist(&e, &BigInt::from(1)).unwrap(), e);
        let t = quadratic_twist(&e, &BigInt::from(5)).unwrap();
        assert_eq!(t.a2(), &q(1));
        assert_eq!(t.a4(), &q(-15663 * 25));
        assert_eq!(t.a6(), &q(-755809 * 125));
        assert_eq!(t.discriminant(), &(q(15625) * e.discriminant()));
        assert!(matches!(
            quadratic_twist(&e, &BigInt::from(3)),
            Err(Error::IntegralityFailure(_))
        ));
        assert!(matches!(quadratic_twist(&e, &BigInt::from(12)), Err(Error::NotSquarefree(_))));
        let short = WeierstrassModel::from_i64([0, 0, 0, -1, 0]);
        let ts = quadratic_twist(&short, &BigInt::from(-7)).unwrap();
        assert_eq!(ts.discriminant(), &(q(117_649) * short.discriminant()));
    }

    #[test]
    fn serde_recomputes_invariants() {
        let e = e10();
        let js = serde_json::to_string(&e).unwrap();
        let back: WeierstrassModel = serde_json::from_str(&js).unwrap();
        assert_eq!(back, e);
        let bare = r#"{"a1":"1","a2":"0","a3":"0","a4":"-15663","a6":"-755809"}"#;
        assert_eq!(serde_json::from_str::<WeierstrassModel>(bare).unwrap(), e);
        let bad = js.replace("\"-182\"", "\"-183\"");
        assert!(serde_json::from_str::<WeierstrassModel>(&bad).is_err());
    }
}
