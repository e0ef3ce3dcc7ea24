//! Class numbers by enumerating ideals of small norm.
//!
//! Deliberately shares no code with the form-cycle computation: ideals are
//! multiplied as Z-lattices and principality is decided by searching for an
//! element of norm +-N(I) among continued-fraction convergents.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// The primitive ideal Z a + Z (b + sqrt(D))/2 with b^2 = D mod 4a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub a: i128,
    pub b: i128,
}

/// (x + y sqrt(D))/2
type Elt = (i128, i128);

fn normalize(a: i128, b: i128) -> Ideal {
    Ideal { a, b: b.rem_euclid(2 * a) }
}

impl Ideal {
    pub fn unit(disc: i128) -> Ideal {
        normalize(1, disc.rem_euclid(2))
    }

    pub fn conjugate(&self) -> Ideal {
        normalize(self.a, -self.b)
    }

    fn generators(&self) -> [Elt; 2] {
        [(2 * self.a, 0), (self.b, 1)]
    }
}

fn mul_elt(x: Elt, y: Elt, disc: i128) -> Elt {
    ((x.0 * y.0 + x.1 * y.1 * disc) / 2, (x.0 * y.1 + x.1 * y.0) / 2)
}

/// Primitive part of the ideal spanned (as a Z-module) by `gens`.
fn primitive_part(gens: &[Elt], disc: i128) -> Ideal {
    // Row-reduce to a basis {(x_axis, 0), (x0, g)}.
    let mut g = 0i128;
    let mut x0 = 0i128;
    let mut x_axis = 0i128;
    for &(x, y) in gens {
        if y == 0 {
            x_axis = x_axis.gcd(&x);
            continue;
        }
        if g == 0 {
            g = y;
            x0 = x;
            continue;
        }
        let e = g.extended_gcd(&y);
        let (ng, nx) = (e.gcd, e.x * x0 + e.y * x);
        // Both old generators minus multiples of the new one lie on the x-axis.
        x_axis = x_axis.gcd(&(x0 - nx * (g / ng)));
        x_axis = x_axis.gcd(&(x - nx * (y / ng)));
        g = ng;
        x0 = nx;
    }
    if g < 0 {
        g = -g;
        x0 = -x0;
    }
    let x_axis = x_axis.abs();
    assert!(g > 0 && x_axis > 0, "degenerate lattice");
    assert!(x0 % g == 0 && x_axis % (2 * g) == 0, "lattice is not an ideal");
    let ideal = normalize(x_axis / (2 * g), x0 / g);
    debug_assert_eq!((ideal.b * ideal.b - disc).rem_euclid(4 * ideal.a), 0);
    ideal
}

pub fn multiply(i: &Ideal, j: &Ideal, disc: i128) -> Ideal {
    let mut gens = Vec::with_capacity(4);
    for x in i.generators() {
        for y in j.generators() {
            gens.push(mul_elt(x, y, disc));
        }
    }
    primitive_part(&gens, disc)
}

fn multiply_by(i: &Ideal, e: Elt, disc: i128) -> Ideal {
    let gens: Vec<Elt> = i.generators().iter().map(|&x| mul_elt(x, e, disc)).collect();
    primitive_part(&gens, disc)
}

fn eval(a: &BigInt, b: &BigInt, c: &BigInt, x: &BigInt, y: &BigInt) -> BigInt {
    a * x * x + b * x * y + c * y * y
}

/// Whether a x^2 + b xy + c y^2 takes the value `target` (which is +-1).
fn represents(a: i128, b: i128, c: i128, disc: i128, target: i64) -> bool {
    for y in 0..=30i128 {
        for x in -30..=30i128 {
            if (x, y) != (0, 0) && a * x * x + b * x * y + c * y * y == target as i128 {
                return true;
            }
        }
    }
    let (ab, bb, cb) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    let t = BigInt::from(target);
    let s = BigInt::from(disc).sqrt();
    let d = BigInt::from(disc);
    // Any solution with y > 0 has x/y a convergent of one of the roots.
    for (p0, q0) in [(-b, 2 * a), (b, -2 * a)] {
        let (mut p, mut q) = (BigInt::from(p0), BigInt::from(q0));
        let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
        let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
        let mut seen = HashSet::new();
        let mut extra: Option<usize> = None;
        let mut steps = 0usize;
        loop {
            let partial: BigInt = if q.is_positive() {
                (&p + &s).div_floor(&q)
            } else {
                let neg_q: BigInt = -&q;
                -((&p + &s).div_floor(&neg_q) + 1u32)
            };
            let h = &partial * &h1 + &h2;
            let k = &partial * &k1 + &k2;
            if eval(&ab, &bb, &cb, &h, &k) == t {
                return true;
            }
            h2 = std::mem::replace(&mut h1, h);
            k2 = std::mem::replace(&mut k1, k);
            p = &partial * &q - &p;
            q = (&d - &p * &p) / &q;
            steps += 1;
            match extra {
                None => {
                    if !seen.insert((p.clone(), q.clone())) {
                        extra = Some(steps + seen.len());
                    }
                }
                Some(stop) if steps >= stop => break,
                _ => {}
            }
        }
    }
    false
}

fn form_of(i: &Ideal, disc: i128) -> (i128, i128, i128) {
    (i.a, i.b, (i.b * i.b - disc) / (4 * i.a))
}

/// Narrowly principal: generated by an element of positive norm.
pub fn is_narrowly_principal(i: &Ideal, disc: i128) -> bool {
    let (a, b, c) = form_of(i, disc);
    represents(a, b, c, disc, 1)
}

pub fn is_principal(i: &Ideal, disc: i128) -> bool {
    let (a, b, c) = form_of(i, disc);
    represents(a, b, c, disc, 1) || represents(a, b, c, disc, -1)
}

/// Primitive ideals of norm at most `bound`.
pub fn ideals_up_to(disc: i128, bound: i128) -> Vec<Ideal> {
    let mut out = Vec::new();
    for a in 1..=bound {
        for b in 0..2 * a {
            if (b - disc).rem_euclid(2) == 0 && (b * b - disc).rem_euclid(4 * a) == 0 {
                out.push(Ideal { a, b });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealClassReport {
    pub discriminant: i64,
    pub narrow_class_number: u64,
    pub class_number: u64,
    pub closed_under_multiplication: bool,
}

fn partition(ideals: &[Ideal], disc: i128, principal: impl Fn(&Ideal) -> bool) -> Vec<Ideal> {
    let mut reps: Vec<Ideal> = Vec::new();
    for i in ideals {
        if !reps.iter().any(|r| principal(&multiply(i, &r.conjugate(), disc))) {
            reps.push(*i);
        }
    }
    reps
}

/// Class numbers from ideals of norm up to the Minkowski bound sqrt(D)/2.
/// Narrow classes are all hit once the ideals are also multiplied by sqrt(D),
/// an element of negative norm.
pub fn ideal_class_numbers(disc: i64) -> IdealClassReport {
    let d = disc as i128;
    let bound = ((d as u128).isqrt() as i128) / 2;
    let small = ideals_up_to(d, bound.max(1));
    let mut all = small.clone();
    all.extend(small.iter().map(|i| multiply_by(i, (0, 2), d)));
    let narrow_principal = |i: &Ideal| is_narrowly_principal(i, d);
    let narrow = partition(&all, d, narrow_principal);
    let wide = partition(&small, d, |i| is_principal(i, d));
    let closed = narrow.iter().all(|x| {
        narrow.iter().all(|y| {
            let p = multiply(x, y, d);
            narrow.iter().any(|r| narrow_principal(&multiply(&p, &r.conjugate(), d)))
        })
    });
    IdealClassReport {
        discriminant: disc,
        narrow_class_number: narrow.len() as u64,
        class_number: wide.len() as u64,
        closed_under_multiplication: closed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let r = ideal_class_numbers(229);
        assert_eq!((r.narrow_class_number, r.class_number), (3, 3));
        assert!(r.closed_under_multiplication);
        let r = ideal_class_numbers(12);
        assert_eq!((r.narrow_class_number, r.class_number), (2, 1));
        let r = ideal_class_numbers(316);
        assert_eq!((r.narrow_class_number, r.class_number), (6, 3));
        assert_eq!(ideal_class_numbers(5).narrow_class_number, 1);
        assert_eq!(ideal_class_numbers(8).narrow_class_number, 1);
    }

    #[test]
    fn products_stay_ideals() {
        let d = 229;
        let ideals = ideals_up_to(d, 7);
        for i in &ideals {
            for j in &ideals {
                let p = multiply(i, j, d);
                assert_eq!((p.b * p.b - d).rem_euclid(4 * p.a), 0);
            }
            let n = multiply(i, &i.conjugate(), d);
            assert_eq!(n, Ideal::unit(d));
        }
    }
}
