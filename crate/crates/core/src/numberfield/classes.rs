//! Ideal classes of a real quadratic order via cycles of reduced ideals.
//!
//! A primitive ideal `[a, (b + sqrt D)/2]` is reduced when `b` can be chosen
//! with `|sqrt D - 2a| < b < sqrt D`. The reduction operator
//! `rho(I) = (conj(alpha)/a) I`, `alpha = (b + sqrt D)/2`, carries every ideal
//! to a reduced one in finitely many steps and permutes the reduced ideals of
//! a class in a single cycle. Equivalence is the wide one: `I ~ J` iff
//! `alpha I = beta J` for nonzero `alpha, beta`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::{isqrt_i64, square_free_decompose};
use crate::error::{Error, Result};
use crate::quadratic::QuadraticNumber;

/// Reduced-ideal cycles of the order of discriminant `disc` (invertible
/// ideals only).
#[derive(Debug, Clone)]
pub struct ClassCycles {
    disc: i64,
    root: i64,
    radicand: i64,
    surd_factor: i64,
    cycles: Vec<Vec<(i64, i64)>>,
    index: HashMap<(i64, i64), usize>,
    principal: usize,
}

/// One reduction step: the new ideal and the multiplier data
/// `alpha = (r + sqrt D)/2`, `c = N(alpha)/a` with `I = (alpha/c) rho(I)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RhoStep {
    pub next: (i64, i64),
    pub r: i64,
    pub c: i64,
}

impl ClassCycles {
    pub fn compute(disc: i64) -> Result<Self> {
        if disc <= 0 || crate::arith::is_square_i64(disc) || !matches!(disc.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidInput(format!(
                "{disc} is not a positive non-square discriminant"
            )));
        }
        let root = isqrt_i64(disc);
        let (f, d) = square_free_decompose(&BigInt::from(disc));
        let to64 = |x: BigInt| i64::try_from(x).map_err(|_| Error::Overflow("discriminant"));
        let (surd_factor, radicand) = (to64(f)?, to64(d)?);

        let mut reduced = Vec::new();
        let mut b = if (root - disc).rem_euclid(2) == 0 {
            root
        } else {
            root - 1
        };
        while b > 0 {
            let n = (disc - b * b) / 4;
            let mut q = 1;
            while q * q <= n {
                if n % q == 0 {
                    for a in [q, n / q] {
                        let c = n / a;
                        if 2 * a - b <= root && b > root - 2 * a && a.gcd(&b).gcd(&c) == 1 {
                            reduced.push((a, b));
                        }
                        if q * q == n {
                            break;
                        }
                    }
                }
                q += 1;
            }
            b -= 2;
        }
        reduced.sort_unstable();
        reduced.dedup();

        let mut this = ClassCycles {
            disc,
            root,
            radicand,
            surd_factor,
            cycles: Vec::new(),
            index: HashMap::with_capacity(reduced.len()),
            principal: 0,
        };
        for &(a, b) in &reduced {
            if this.index.contains_key(&(a, b.rem_euclid(2 * a))) {
                continue;
            }
            let id = this.cycles.len();
            let mut cycle = Vec::new();
            let mut cur = (a, b);
            loop {
                this.index.insert((cur.0, cur.1.rem_euclid(2 * cur.0)), id);
                cycle.push(cur);
                cur = this.rho(cur.0, cur.1).next;
                if cur == (a, b) {
                    break;
                }
                if cycle.len() > reduced.len() {
                    return Err(Error::ConsistencyFault(format!(
                        "reduction cycle for D = {disc} does not close"
                    )));
                }
            }
            this.cycles.push(cycle);
        }
        if this.index.len() != reduced.len() {
            return Err(Error::ConsistencyFault(format!(
                "rho left the reduced set for D = {disc}"
            )));
        }
        let s = disc.rem_euclid(2);
        this.principal = this.class_index(1, s);
        Ok(this)
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Wide equivalence of two primitive invertible ideals `[a, (b + sqrt D)/2]`
    /// of the order of discriminant `disc`, decided by walking the reduced
    /// cycle of the first without enumerating the class group.
    pub fn same_class(disc: i64, i: (i64, i64), j: (i64, i64)) -> Result<bool> {
        if disc <= 0 || crate::arith::is_square_i64(disc) || !matches!(disc.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidInput(format!(
                "{disc} is not a positive non-square discriminant"
            )));
        }
        for (a, b) in [i, j] {
            let num = b as i128 * b as i128 - disc as i128;
            if a < 1 || num.rem_euclid(4 * a as i128) != 0 {
                return Err(Error::InvalidIdeal(format!(
                    "[{a}, ({b}+√{disc})/2] is not an ideal"
                )));
            }
            let c = num / (4 * a as i128);
            if (a as i128).gcd(&(b as i128)).gcd(&c) != 1 {
                return Err(Error::InvalidIdeal(format!(
                    "[{a}, ({b}+√{disc})/2] is not invertible"
                )));
            }
        }
        let bare = ClassCycles {
            disc,
            root: isqrt_i64(disc),
            radicand: 0,
            surd_factor: 0,
            cycles: Vec::new(),
            index: HashMap::new(),
            principal: 0,
        };
        let key = |(a, b): (i64, i64)| (a, b.rem_euclid(2 * a));
        let start = bare.reduce(i.0, i.1);
        let target = key(bare.reduce(j.0, j.1));
        let mut cur = start;
        loop {
            if key(cur) == target {
                return Ok(true);
            }
            cur = bare.rho(cur.0, cur.1).next;
            if key(cur) == key(start) {
                return Ok(false);
            }
        }
    }

    pub fn class_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycles(&self) -> &[Vec<(i64, i64)>] {
        &self.cycles
    }

    pub fn principal_index(&self) -> usize {
        self.principal
    }

    // r = x (mod 2a) in the window (sqrt D - 2a, sqrt D)
    fn window_rep(&self, a: i64, x: i64) -> i64 {
        self.root - (self.root - x).rem_euclid(2 * a)
    }

    fn is_reduced_rep(&self, a: i64, r: i64) -> bool {
        a <= self.root && 2 * a - r <= self.root
    }

    pub(crate) fn rho(&self, a: i64, b: i64) -> RhoStep {
        let num = b as i128 * b as i128 - self.disc as i128;
        let c = (num / (4 * a as i128)) as i64;
        let big_a = c.abs();
        let x = -b;
        let r = if big_a > self.root {
            let r = x.rem_euclid(2 * big_a);
            if r > big_a {
                r - 2 * big_a
            } else {
                r
            }
        } else {
            self.window_rep(big_a, x)
        };
        RhoStep {
            next: (big_a, r),
            r: b,
            c,
        }
    }

    /// Reduces a primitive ideal, recording each step.
    pub(crate) fn reduce_traced(&self, a: i64, b: i64, trace: &mut Vec<RhoStep>) -> (i64, i64) {
        let (mut a, mut b) = (a, b);
        loop {
            if a <= self.root {
                let r = self.window_rep(a, b);
                if self.is_reduced_rep(a, r) {
                    return (a, r);
                }
                b = r;
            }
            let step = self.rho(a, b);
            trace.push(step);
            (a, b) = step.next;
        }
    }

    pub fn reduce(&self, a: i64, b: i64) -> (i64, i64) {
        let (mut a, mut b) = (a, b);
        loop {
            if a <= self.root {
                let r = self.window_rep(a, b);
                if self.is_reduced_rep(a, r) {
                    return (a, r);
                }
                b = r;
            }
            (a, b) = self.rho(a, b).next;
        }
    }

    /// Class of the primitive ideal `[a, (b + sqrt D)/2]`.
    pub fn class_index(&self, a: i64, b: i64) -> usize {
        let (ra, rb) = self.reduce(a, b);
        self.index[&(ra, rb.rem_euclid(2 * ra))]
    }

    /// `(r + sqrt D)/2` as an exact number of `Q(sqrt d)`.
    fn half_surd(&self, r: i64) -> QuadraticNumber {
        QuadraticNumber::from_canonical_radicand(
            BigInt::from(r),
            BigInt::from(self.surd_factor),
            BigInt::from(2),
            BigInt::from(self.radicand),
        )
        .expect("nonzero denominator")
    }

    fn step_multiplier(&self, step: &RhoStep) -> QuadraticNumber {
        let c = QuadraticNumber::from_integer(step.c, self.radicand);
        &self.half_surd(step.r) / &c
    }

    /// A generator of the primitive ideal when it is principal.
    pub fn principal_generator(&self, a: i64, b: i64) -> Option<QuadraticNumber> {
        let mut trace = Vec::new();
        let (mut ra, mut rb) = self.reduce_traced(a, b, &mut trace);
        if self.index[&(ra, rb.rem_euclid(2 * ra))] != self.principal {
            return None;
        }
        while ra != 1 {
            let step = self.rho(ra, rb);
            trace.push(step);
            (ra, rb) = step.next;
        }
        let mut gen = QuadraticNumber::from_integer(1, self.radicand);
        for step in &trace {
            gen = &gen * &self.step_multiplier(step);
        }
        Some(gen)
    }

    /// The fundamental unit of the order: one trip around the principal
    /// cycle multiplies out to a unit, normalized to exceed 1.
    pub fn fundamental_unit(&self) -> QuadraticNumber {
        let start = self.cycles[self.principal][0];
        let mut unit = QuadraticNumber::from_integer(1, self.radicand);
        let mut cur = start;
        loop {
            let step = self.rho(cur.0, cur.1);
            unit = &unit * &self.step_multiplier(&step);
            cur = step.next;
            if cur == start {
                break;
            }
        }
        let one = QuadraticNumber::from_integer(1, self.radicand);
        let conj = unit.conjugate();
        [unit.clone(), -&unit, conj.clone(), -&conj]
            .into_iter()
            .find(|u| u.cmp_value(&one) == std::cmp::Ordering::Greater)
            .expect("a unit other than +-1 has a conjugate-sign variant above 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_numbers() {
        for (d, h) in [
            (5, 1),
            (8, 1),
            (12, 1),
            (40, 2),
            (60, 2),
            (316, 3),
            (104, 2),
            (328, 4),
        ] {
            assert_eq!(ClassCycles::compute(d).unwrap().class_count(), h, "D = {d}");
        }
    }

    #[test]
    fn units_from_principal_cycle() {
        let u = ClassCycles::compute(5).unwrap().fundamental_unit();
        assert_eq!(u, QuadraticNumber::new(1, 1, 2, 5).unwrap());
        let u = ClassCycles::compute(316).unwrap().fundamental_unit();
        assert_eq!(u, QuadraticNumber::new(80, 9, 1, 79).unwrap());
        // the order Z[3 sqrt 5] of discriminant 180
        let u = ClassCycles::compute(180).unwrap().fundamental_unit();
        // phi^12, the first power of the golden ratio inside Z[3 sqrt 5]
        assert_eq!(u.norm(), (BigInt::from(1), BigInt::from(1)));
        assert_eq!(u, QuadraticNumber::new(161, 72, 1, 5).unwrap());
    }

    #[test]
    fn generators_have_the_right_norm() {
        let cc = ClassCycles::compute(40).unwrap();
        assert!(cc.principal_generator(2, 0).is_none());
        let g = cc.principal_generator(9, 2).unwrap();
        assert_eq!(g.norm().0.magnitude(), &num_bigint::BigUint::from(9u32));
    }

    #[test]
    fn same_class_agrees_with_the_table() {
        for disc in [40, 60, 316, 328, 180, 20, 45] {
            let cc = ClassCycles::compute(disc).unwrap();
            let reps: Vec<(i64, i64)> = cc.cycles().iter().flatten().copied().collect();
            for &x in &reps {
                for &y in &reps {
                    let table = cc.class_index(x.0, x.1) == cc.class_index(y.0, y.1);
                    assert_eq!(
                        ClassCycles::same_class(disc, x, y).unwrap(),
                        table,
                        "D = {disc}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_bad_discriminants() {
        assert!(ClassCycles::compute(16).is_err());
        assert!(ClassCycles::compute(7).is_err());
        assert!(ClassCycles::compute(-4).is_err());
    }
}
