//! Counting integral ideals by class and norm.
//!
//! Every integral ideal is `m P` with `P` primitive, and `m P` lies in the
//! class of `P`. Primitive ideals of norm `a` are the `[a, (b + sqrt D)/2]`
//! with `b^2 = D (mod 4a)`, `0 <= b < 2a`; the roots are assembled prime by
//! prime and combined with the Chinese remainder theorem. Each ideal is
//! classified by reducing it onto its cycle.

use std::ops::RangeInclusive;

use super::{IdealClass, RealQuadraticField};
use crate::arith::{inv_mod, sqrt_mod_prime};

pub struct IdealCounter {
    field: RealQuadraticField,
    limit: u64,
    smallest_factor: Vec<u32>,
    // roots of b^2 = D mod 2^(e+2), taken mod 2^(e+1), indexed by e
    two_adic: Vec<Vec<i64>>,
}

impl IdealCounter {
    pub fn new(field: &RealQuadraticField, limit: u64) -> Self {
        let n = limit as usize + 1;
        let mut smallest_factor = vec![0u32; n.max(2)];
        for i in 2..n {
            if smallest_factor[i] == 0 {
                let mut j = i;
                while j < n {
                    if smallest_factor[j] == 0 {
                        smallest_factor[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        let disc = field.discriminant();
        let mut two_adic = Vec::new();
        let mut e = 0u32;
        while (1u64 << e) <= limit.max(1) {
            let modulus = 1i64 << (e + 2);
            let roots = (0..(1i64 << (e + 1)))
                .filter(|&b| (b * b - disc).rem_euclid(modulus) == 0)
                .collect();
            two_adic.push(roots);
            e += 1;
        }
        IdealCounter {
            field: field.clone(),
            limit,
            smallest_factor,
            two_adic,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All `b` in `[0, 2a)` with `b^2 = D (mod 4a)`.
    pub fn roots(&self, a: u64) -> Vec<i64> {
        assert!(
            a >= 1 && a <= self.limit.max(1),
            "norm {a} outside the sieve"
        );
        let disc = self.field.discriminant();
        let mut rest = a;
        let mut e2 = 0;
        while rest.is_multiple_of(2) {
            rest /= 2;
            e2 += 1;
        }
        let mut residues = self.two_adic[e2].clone();
        let mut modulus: i128 = 1 << (e2 + 1);
        while rest > 1 && !residues.is_empty() {
            let p = self.smallest_factor[rest as usize] as u64;
            let mut pe = 1u64;
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                pe *= p;
                e += 1;
            }
            let local = odd_prime_power_roots(disc, p, e, pe);
            residues = crt(&residues, modulus, &local, pe as i128);
            modulus *= pe as i128;
        }
        residues
    }

    /// Primitive ideal counts for norms in `range`, indexed `[class][a - lo]`.
    pub fn count_range(&self, range: RangeInclusive<u64>) -> Vec<Vec<u32>> {
        let (lo, hi) = (*range.start(), *range.end());
        let h = self.field.class_number();
        let classes = self.field.cycles();
        let width = (hi + 1).saturating_sub(lo) as usize;
        let mut counts = vec![vec![0u32; width]; h];
        for a in lo.max(1)..=hi {
            let roots = self.roots(a);
            if h == 1 {
                counts[0][(a - lo) as usize] = roots.len() as u32;
                continue;
            }
            for b in roots {
                let class = classes.class_index(a as i64, b);
                counts[class][(a - lo) as usize] += 1;
            }
        }
        counts
    }

    pub fn count(&self) -> PrimitiveCounts {
        PrimitiveCounts::from_parts(
            self.field.class_number(),
            vec![(1, self.count_range(1..=self.limit))],
        )
    }

    /// Same result as [`IdealCounter::count`], split over `threads` norm ranges.
    #[cfg(not(target_arch = "wasm32"))]
    pub fn count_parallel(&self, threads: usize) -> PrimitiveCounts {
        let threads = threads.max(1) as u64;
        let chunk = self.limit.div_ceil(threads).max(1);
        let parts = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|i| (1 + i * chunk, ((i + 1) * chunk).min(self.limit)))
                .filter(|(lo, hi)| lo <= hi)
                .map(|(lo, hi)| scope.spawn(move || (lo, self.count_range(lo..=hi))))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("counting thread panicked"))
                .collect()
        });
        PrimitiveCounts::from_parts(self.field.class_number(), parts)
    }
}

fn odd_prime_power_roots(disc: i64, p: u64, e: u32, pe: u64) -> Vec<i64> {
    let dm = disc.rem_euclid(p as i64) as u64;
    if dm == 0 {
        // p divides a fundamental discriminant exactly once
        return if e == 1 { vec![0] } else { Vec::new() };
    }
    let Some(mut r) = sqrt_mod_prime(dm, p).map(|r| r as i128) else {
        return Vec::new();
    };
    let mut modulus = p as i128;
    for _ in 1..e {
        modulus *= p as i128;
        let f = (r * r - disc as i128).rem_euclid(modulus);
        let inv = inv_mod(2 * r, modulus).expect("2r is a unit mod p^k");
        r = (r - f * inv).rem_euclid(modulus);
    }
    let r = r as i64;
    vec![r, pe as i64 - r]
}

fn crt(xs: &[i64], m: i128, ys: &[i64], n: i128) -> Vec<i64> {
    let inv = inv_mod(m % n, n).expect("coprime moduli");
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &x in xs {
        for &y in ys {
            let t = ((y as i128 - x as i128) * inv).rem_euclid(n);
            out.push((x as i128 + m * t) as i64);
        }
    }
    out
}

/// Primitive ideal counts per class with cumulative lookups.
#[derive(Debug, Clone)]
pub struct PrimitiveCounts {
    limit: u64,
    // cumulative[class][a] = primitive ideals of norm <= a in the class
    cumulative: Vec<Vec<u64>>,
}

impl PrimitiveCounts {
    fn from_parts(classes: usize, mut parts: Vec<(u64, Vec<Vec<u32>>)>) -> Self {
        parts.sort_by_key(|(lo, _)| *lo);
        let limit = parts
            .iter()
            .map(|(lo, v)| lo + v[0].len() as u64 - 1)
            .max()
            .unwrap_or(0);
        let mut cumulative = vec![vec![0u64; limit as usize + 1]; classes];
        for (class, cum) in cumulative.iter_mut().enumerate() {
            let mut acc = 0u64;
            let mut a = 1usize;
            for (lo, counts) in &parts {
                debug_assert_eq!(*lo as usize, a, "norm ranges must tile 1..=limit");
                for &c in &counts[class] {
                    acc += c as u64;
                    cum[a] = acc;
                    a += 1;
                }
            }
        }
        PrimitiveCounts { limit, cumulative }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primitive_up_to(&self, class: &IdealClass, t: u64) -> u64 {
        self.cumulative[class.index()][t.min(self.limit) as usize]
    }

    /// `N(t, A)`: integral ideals of norm at most `t` in the class.
    pub fn count_in_class(&self, class: &IdealClass, t: u64) -> u64 {
        self.count_index(class.index(), t)
    }

    fn count_index(&self, index: usize, t: u64) -> u64 {
        assert!(t <= self.limit, "count requested beyond the counted range");
        let cum = &self.cumulative[index];
        let mut total = 0;
        let mut m = 1u64;
        while m * m <= t {
            total += cum[(t / (m * m)) as usize];
            m += 1;
        }
        total
    }

    /// All integral ideals of norm at most `t`.
    pub fn total(&self, t: u64) -> u64 {
        (0..self.cumulative.len())
            .map(|i| self.count_index(i, t))
            .sum()
    }
}

impl RealQuadraticField {
    /// `N(t, A)` computed from scratch.
    pub fn count_ideals_in_class(&self, class: &IdealClass, t: u64) -> u64 {
        if t == 0 {
            return 0;
        }
        IdealCounter::new(self, t).count().count_in_class(class, t)
    }
}
