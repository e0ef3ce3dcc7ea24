//! Indefinite binary quadratic forms: reduction, cycles and composition.

use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::factor_u64;

/// a x^2 + b xy + c y^2 with positive non-square discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndefiniteForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl IndefiniteForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        IndefiniteForm { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        (self.b as i128).pow(2) - 4 * self.a as i128 * self.c as i128
    }

    /// The principal form of discriminant `disc`.
    pub fn principal(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        IndefiniteForm::new(1, b, (b * b - disc) / 4)
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// |sqrt(D) - 2|a|| < b < sqrt(D), tested in integers.
    pub fn is_reduced(&self, disc: i64) -> bool {
        let d = disc as i128;
        let b = self.b as i128;
        let a2 = 2 * (self.a as i128).abs();
        b > 0 && b * b < d && (a2 + b).pow(2) > d && (a2 - b < 0 || (a2 - b).pow(2) < d)
    }

    /// The reduction operator; `s` is floor(sqrt(D)).
    pub fn rho(&self, disc: i64, s: i64) -> Self {
        let c = self.c as i128;
        let ac = c.abs();
        let two_c = 2 * ac;
        let mb = -(self.b as i128);
        let s = s as i128;
        let nb = if ac > s {
            let mut r = mb.rem_euclid(two_c);
            if r > ac {
                r -= two_c;
            }
            r
        } else {
            s - (s - mb).rem_euclid(two_c)
        };
        let nc = (nb * nb - disc as i128) / (4 * c);
        IndefiniteForm::new(self.c, nb as i64, nc as i64)
    }

    /// Iterate the reduction operator until the form is reduced.
    pub fn reduce(&self, disc: i64) -> Self {
        let s = isqrt(disc);
        let mut f = *self;
        let mut steps = 0u32;
        while !f.is_reduced(disc) {
            f = f.rho(disc, s);
            steps += 1;
            assert!(steps < 10_000, "reduction of {self:?} does not terminate");
        }
        f
    }
}

pub(crate) fn isqrt(n: i64) -> i64 {
    (n as u64).isqrt() as i64
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out
}

/// Every reduced form of discriminant `disc`.
pub fn reduced_forms(disc: i64) -> Vec<IndefiniteForm> {
    let s = isqrt(disc);
    let mut out = Vec::new();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = ((disc as i128 - (b as i128) * (b as i128)) / 4) as u64;
        for a in divisors(n) {
            let f = IndefiniteForm::new(a as i64, b, -((n / a) as i64));
            if f.is_reduced(disc) {
                out.push(f);
                out.push(IndefiniteForm::new(-(a as i64), b, (n / a) as i64));
            }
        }
        b += 2;
    }
    out.sort();
    out
}

/// Solve u a + v b + w c = gcd(a, b, c) with gcd >= 0.
fn ext_gcd3(a: i128, b: i128, c: i128) -> (i128, i128, i128, i128) {
    let e1 = a.extended_gcd(&b);
    let e2 = e1.gcd.extended_gcd(&c);
    (e2.gcd, e2.x * e1.x, e2.x * e1.y, e2.y)
}

/// Dirichlet composition of two forms of the same discriminant (unreduced).
pub fn compose_forms(f: &IndefiniteForm, g: &IndefiniteForm) -> IndefiniteForm {
    let disc = f.discriminant();
    debug_assert_eq!(disc, g.discriminant());
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2) = (g.a as i128, g.b as i128);
    let s = (b1 + b2) / 2;
    let (e, u, v, w) = ext_gcd3(a1, a2, s);
    let a3 = a1 * a2 / (e * e);
    let num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) / 2;
    let mut b3 = (num / e).rem_euclid(2 * a3.abs());
    if b3 > a3.abs() {
        b3 -= 2 * a3.abs();
    }
    let c3 = (b3 * b3 - disc) / (4 * a3);
    debug_assert_eq!(b3 * b3 - 4 * a3 * c3, disc, "composition of {f:?} and {g:?}");
    IndefiniteForm::new(a3 as i64, b3 as i64, c3 as i64)
}

/// The narrow form class group of a discriminant, with classes given by cycles
/// of reduced forms.
#[derive(Debug, Clone)]
pub struct FormClassGroup {
    pub discriminant: i64,
    pub forms: Vec<IndefiniteForm>,
    pub cycles: Vec<Vec<usize>>,
    cycle_of: Vec<usize>,
    index: HashMap<IndefiniteForm, usize>,
}

impl FormClassGroup {
    pub fn new(disc: i64) -> Self {
        let forms = reduced_forms(disc);
        let index: HashMap<_, _> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let s = isqrt(disc);
        let mut cycle_of = vec![usize::MAX; forms.len()];
        let mut cycles = Vec::new();
        for start in 0..forms.len() {
            if cycle_of[start] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cycle = Vec::new();
            let mut i = start;
            loop {
                cycle_of[i] = id;
                cycle.push(i);
                let next = forms[i].rho(disc, s);
                i = *index.get(&next).expect("rho maps reduced forms to reduced forms");
                if i == start {
                    break;
                }
                assert_eq!(cycle_of[i], usize::MAX, "rho is not a permutation");
            }
            cycles.push(cycle);
        }
        FormClassGroup { discriminant: disc, forms, cycles, cycle_of, index }
    }

    pub fn class_number(&self) -> usize {
        self.cycles.len()
    }

    pub fn class_of(&self, f: &IndefiniteForm) -> usize {
        let r = f.reduce(self.discriminant);
        self.cycle_of[self.index[&r]]
    }

    pub fn identity(&self) -> usize {
        self.class_of(&IndefiniteForm::principal(self.discriminant))
    }

    pub fn representative(&self, class: usize) -> IndefiniteForm {
        self.forms[self.cycles[class][0]]
    }

    pub fn compose(&self, x: usize, y: usize) -> usize {
        self.class_of(&compose_forms(&self.representative(x), &self.representative(y)))
    }

    /// Number of classes whose cube is trivial.
    pub fn cube_trivial_count(&self) -> usize {
        let id = self.identity();
        (0..self.class_number())
            .filter(|&c| self.compose(self.compose(c, c), c) == id)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_numbers() {
        assert_eq!(FormClassGroup::new(5).class_number(), 1);
        assert_eq!(FormClassGroup::new(8).class_number(), 1);
        assert_eq!(FormClassGroup::new(12).class_number(), 2);
        assert_eq!(FormClassGroup::new(229).class_number(), 3);
    }

    #[test]
    fn reduced_forms_have_right_discriminant() {
        for d in [5i64, 13, 40, 229, 1001, 4 * 79] {
            for f in reduced_forms(d) {
                assert_eq!(f.discriminant(), d as i128);
                assert!(f.is_reduced(d));
            }
        }
    }

    #[test]
    fn composition_is_a_group_law() {
        let g = FormClassGroup::new(229);
        let id = g.identity();
        let h = g.class_number();
        for x in 0..h {
            assert_eq!(g.compose(x, id), x);
            for y in 0..h {
                assert_eq!(g.compose(x, y), g.compose(y, x));
                for z in 0..h {
                    assert_eq!(g.compose(g.compose(x, y), z), g.compose(x, g.compose(y, z)));
                }
            }
        }
        assert_eq!(g.cube_trivial_count(), 3);
    }

    #[test]
    fn cubes_in_cyclic_group_of_order_six() {
        // D = 4 * 79 has narrow class group of order 6.
        let g = FormClassGroup::new(316);
        assert_eq!(g.class_number(), 6);
        assert_eq!(g.cube_trivial_count(), 3);
    }
}
