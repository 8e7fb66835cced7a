//! Brute-force oracles, written without the library's number theory.
#![allow(dead_code)]

use std::collections::HashSet;

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u128) as i128;
    (r * r == n).then_some(r)
}

pub fn square_free(n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    n > 0
}

pub fn square_free_part(mut n: u128) -> u128 {
    let mut out = 1;
    let mut p = 2u128;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out * n
}

pub fn field_disc(d: i64) -> i64 {
    if d % 4 == 1 {
        d
    } else {
        4 * d
    }
}

/// Smallest unit `(x + y sqrt D)/2 > 1`: least `y >= 1` with
/// `x^2 - D y^2 = -4` or `+4`; returns `(x, y, norm sign)`.
pub fn unit_oracle(d: i64) -> (i128, i128, i32) {
    let disc = field_disc(d) as i128;
    let mut y = 1i128;
    loop {
        for sign in [-1i32, 1] {
            if let Some(x) = is_square(disc * y * y + 4 * sign as i128) {
                if x > 0 {
                    return (x, y, sign);
                }
            }
        }
        y += 1;
    }
}

/// Narrow class number by cycles of reduced indefinite forms `(a, b, c)`
/// with `0 < b < sqrt D`, `sqrt D - b < 2|a| < sqrt D + b`.
pub fn narrow_class_number(disc: i64) -> usize {
    let s = isqrt(disc as u128) as i64;
    let mut forms = Vec::new();
    let mut b = s;
    while b > 0 {
        if (b - disc).rem_euclid(2) == 0 {
            let n = (disc - b * b) / 4;
            for a in 1..=n {
                if n % a == 0 && 2 * a + b > s && 2 * a - b <= s {
                    forms.push((a, b, -n / a));
                    forms.push((-a, b, n / a));
                }
            }
        }
        b -= 1;
    }
    let rho = |(_, b, c): (i64, i64, i64)| {
        let m = 2 * c.abs();
        let nb = s - (s + b).rem_euclid(m);
        (c, nb, (nb * nb - disc) / (4 * c))
    };
    let mut seen = HashSet::new();
    let mut cycles = 0;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        while seen.insert(g) {
            g = rho(g);
        }
    }
    cycles
}

/// Wide class number from the narrow one and the norm of the unit.
pub fn class_number_oracle(d: i64) -> usize {
    let hp = narrow_class_number(field_disc(d));
    if unit_oracle(d).2 == -1 {
        hp
    } else {
        hp / 2
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `chi_D(n)` for all `n <= limit`, completely multiplicative from its
/// values on primes (Euler's criterion, and the mod-8 rule at 2).
pub fn character_table(disc: i64, limit: usize) -> Vec<i32> {
    let mut spf = vec![0usize; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    let mut chi = vec![0i32; limit + 1];
    if limit >= 1 {
        chi[1] = 1;
    }
    for n in 2..=limit {
        let p = spf[n];
        let at_p = if disc.rem_euclid(p as i64) == 0 {
            0
        } else if p == 2 {
            if matches!(disc.rem_euclid(8), 1 | 7) {
                1
            } else {
                -1
            }
        } else if pow_mod(
            disc.rem_euclid(p as i64) as u64,
            (p as u64 - 1) / 2,
            p as u64,
        ) == 1
        {
            1
        } else {
            -1
        };
        chi[n] = at_p * chi[n / p];
    }
    chi
}

/// Analytic class number `-(1 / (2 log eps)) sum chi(a) log sin(pi a / D)`.
pub fn analytic_class_number(d: i64) -> f64 {
    let disc = field_disc(d);
    let chi = character_table(disc, disc as usize);
    let (x, y, _) = unit_oracle(d);
    let eps = (x as f64 + y as f64 * (disc as f64).sqrt()) / 2.0;
    let sum: f64 = (1..disc)
        .map(|a| {
            chi[a as usize] as f64 * (std::f64::consts::PI * a as f64 / disc as f64).sin().ln()
        })
        .sum();
    -sum / (2.0 * eps.ln())
}

/// Number of integral ideals of norm at most `t`: `sum_k chi(k) floor(t/k)`.
pub fn total_ideals_oracle(disc: i64, t: u64) -> u64 {
    let chi = character_table(disc, t as usize);
    (1..=t)
        .map(|k| chi[k as usize] as i64 * (t / k) as i64)
        .sum::<i64>() as u64
}

/// `2 log(eps) / sqrt(D)` in floating point.
pub fn density_oracle(d: i64) -> f64 {
    let disc = field_disc(d) as f64;
    let (x, y, _) = unit_oracle(d);
    2.0 * ((x as f64 + y as f64 * disc.sqrt()) / 2.0).ln() / disc.sqrt()
}

/// Whether `m [a, (b + sqrt D)/2]` has a generator, by searching
/// `(x + y sqrt D)/2` of norm `+-N` inside the ideal.
pub fn principal_oracle(d: i64, m: i64, a: i64, b: i64) -> bool {
    let disc = field_disc(d) as i128;
    let norm = (m * m * a) as i128;
    let (ux, uy, _) = unit_oracle(d);
    let eps = (ux as f64 + uy as f64 * (disc as f64).sqrt()) / 2.0;
    let bound = ((eps + 1.0) * (norm as f64).sqrt() * 2.0).ceil() as i128 + 2;
    for y in 0..=bound {
        let rhs = disc * y * y;
        for sign in [4 * norm, -4 * norm] {
            let Some(x) = is_square(rhs + sign) else {
                continue;
            };
            for x in [x, -x] {
                // membership: y = m v, x = m (2 u a + v b)
                if y % m as i128 != 0 || x % m as i128 != 0 {
                    continue;
                }
                let v = y / m as i128;
                let w = x / m as i128 - v * b as i128;
                if w % (2 * a as i128) == 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Minimal polynomial discriminant and square-free kernel of the purely
/// periodic continued fraction with the given period.
pub fn periodic_cf_radicand(period: &[i64]) -> (i128, i128) {
    let (mut p, mut p1, mut q, mut q1) = (1i128, 0i128, 0i128, 1i128);
    for &a in period {
        let a = a as i128;
        (p, p1, q, q1) = (a * p + p1, p, a * q + q1, q);
    }
    // x = (p x + p1)/(q x + q1)  =>  q x^2 + (q1 - p) x - p1 = 0
    let disc = (q1 - p) * (q1 - p) + 4 * q * p1;
    (disc, square_free_part(disc as u128) as i128)
}

/// `log(eps)/sqrt(D)` for the field of a surgery slope.
pub fn volume_oracle(period: &[i64]) -> f64 {
    let (_, d) = periodic_cf_radicand(period);
    density_oracle(d as i64) / 2.0
}
