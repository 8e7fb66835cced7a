//! Integral ideals of the maximal order in standard two-generator form.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

use crate::arith::{factorize_u64, is_prime_u64, kronecker, sqrt_mod_prime};
use crate::error::{Error, Result};

/// The ideal `m * (a Z + (b + sqrt D)/2 Z)` of the order of discriminant `D`.
///
/// Normalized: `m >= 1`, `a >= 1`, `0 <= b < 2a`, `b = D (mod 2)` and
/// `b^2 = D (mod 4a)`. The primitive part `[a, (b + sqrt D)/2]` has norm `a`;
/// the whole ideal has norm `m^2 a`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    disc: i64,
    m: i64,
    a: i64,
    b: i64,
}

/// Element `x + y*omega` with `omega = (s + sqrt D)/2`, `s = D mod 2`.
pub(crate) type Elem = (i128, i128);

fn sigma(disc: i64) -> i128 {
    disc.rem_euclid(2) as i128
}

pub(crate) fn elem_mul(disc: i64, u: Elem, v: Elem) -> Elem {
    let s = sigma(disc);
    let k = (disc as i128 - s) / 4;
    (
        u.0 * v.0 + u.1 * v.1 * k,
        u.0 * v.1 + u.1 * v.0 + s * u.1 * v.1,
    )
}

impl QuadIdeal {
    /// Builds and normalizes `m [a, (b + sqrt D)/2]`.
    pub fn new(disc: i64, m: i64, a: i64, b: i64) -> Result<Self> {
        if m < 1 || a < 1 {
            return Err(Error::InvalidIdeal(format!(
                "scale {m} and norm {a} must be positive"
            )));
        }
        let b = b.rem_euclid(2 * a);
        if (b - disc).rem_euclid(2) != 0 {
            return Err(Error::InvalidIdeal(format!(
                "b = {b} has the wrong parity for D = {disc}"
            )));
        }
        let lhs = (b as i128 * b as i128 - disc as i128).rem_euclid(4 * a as i128);
        if lhs != 0 {
            return Err(Error::InvalidIdeal(format!(
                "b^2 != D mod 4a for a = {a}, b = {b}"
            )));
        }
        Ok(QuadIdeal { disc, m, a, b })
    }

    /// Primitive ideal `[a, (b + sqrt D)/2]`.
    pub fn primitive(disc: i64, a: i64, b: i64) -> Result<Self> {
        Self::new(disc, 1, a, b)
    }

    /// The principal ideal generated by the rational integer `n`.
    pub fn principal_integer(disc: i64, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroIdeal);
        }
        Self::new(disc, n.abs(), 1, disc.rem_euclid(2))
    }

    pub fn unit(disc: i64) -> Self {
        QuadIdeal {
            disc,
            m: 1,
            a: 1,
            b: disc.rem_euclid(2),
        }
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }
    pub fn scale(&self) -> i64 {
        self.m
    }
    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn norm(&self) -> i128 {
        self.m as i128 * self.m as i128 * self.a as i128
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.m == 1 && self.a == 1
    }

    pub fn primitive_part(&self) -> QuadIdeal {
        QuadIdeal { m: 1, ..*self }
    }

    pub fn conjugate(&self) -> QuadIdeal {
        QuadIdeal {
            b: (-self.b).rem_euclid(2 * self.a),
            ..*self
        }
    }

    fn basis(&self) -> [Elem; 2] {
        let m = self.m as i128;
        [
            (m * self.a as i128, 0),
            (m * (self.b as i128 - sigma(self.disc)) / 2, m),
        ]
    }

    /// The ideal generated over the maximal order by the given elements.
    pub(crate) fn generated_by(disc: i64, gens: &[Elem]) -> Result<Self> {
        let omega: Elem = (0, 1);
        let mut all: Vec<Elem> = Vec::with_capacity(2 * gens.len());
        for &g in gens {
            all.push(g);
            all.push(elem_mul(disc, g, omega));
        }
        Self::from_lattice(disc, &all)
    }

    /// Reads an ideal off the Hermite normal form of a Z-lattice that is
    /// already closed under multiplication by omega.
    fn from_lattice(disc: i64, vectors: &[Elem]) -> Result<Self> {
        let mut pivot: Option<Elem> = None;
        let mut xs: i128 = 0;
        for &(x, y) in vectors {
            if y == 0 {
                xs = xs.gcd(&x);
                continue;
            }
            match pivot {
                None => pivot = Some((x, y)),
                Some((px, py)) => {
                    let e = py.extended_gcd(&y);
                    let g = e.gcd;
                    let nx =
                        e.x.checked_mul(px)
                            .and_then(|u| e.y.checked_mul(x).and_then(|v| u.checked_add(v)));
                    let rx = (y / g)
                        .checked_mul(px)
                        .and_then(|u| (py / g).checked_mul(x).and_then(|v| u.checked_sub(v)));
                    let (nx, rx) = match (nx, rx) {
                        (Some(nx), Some(rx)) => (nx, rx),
                        _ => return Err(Error::Overflow("ideal lattice reduction")),
                    };
                    xs = xs.gcd(&rx);
                    pivot = Some((if xs != 0 { nx.rem_euclid(xs) } else { nx }, g));
                }
            }
        }
        let (px, py) = pivot.ok_or(Error::ZeroIdeal)?;
        if xs == 0 {
            return Err(Error::ZeroIdeal);
        }
        let (big_a, c) = (xs.abs(), py.abs());
        let bx = if py < 0 { -px } else { px }.rem_euclid(big_a);
        if big_a % c != 0 || bx % c != 0 {
            return Err(Error::InvalidIdeal(
                "lattice is not an ideal of the maximal order".into(),
            ));
        }
        let a = big_a / c;
        let b = 2 * (bx / c) + sigma(disc);
        let to64 = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("ideal coordinates"));
        QuadIdeal::new(disc, to64(c)?, to64(a)?, to64(b.rem_euclid(2 * a))?)
    }

    fn check_same(&self, other: &QuadIdeal) -> Result<()> {
        if self.disc != other.disc {
            Err(Error::MixedFields(self.disc, other.disc))
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, other: &QuadIdeal) -> Result<QuadIdeal> {
        self.check_same(other)?;
        let (p, q) = (
            self.primitive_part().basis(),
            other.primitive_part().basis(),
        );
        let prods: Vec<Elem> = p
            .iter()
            .flat_map(|&u| q.iter().map(move |&v| (u, v)))
            .map(|(u, v)| elem_mul(self.disc, u, v))
            .collect();
        let prim = Self::from_lattice(self.disc, &prods)?;
        let m = self
            .m
            .checked_mul(other.m)
            .and_then(|m| m.checked_mul(prim.m))
            .ok_or(Error::Overflow("ideal product"))?;
        Ok(QuadIdeal { m, ..prim })
    }

    pub fn pow(&self, e: u32) -> Result<QuadIdeal> {
        let mut acc = QuadIdeal::unit(self.disc);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `I + J`, the greatest common divisor.
    pub fn gcd(&self, other: &QuadIdeal) -> Result<QuadIdeal> {
        self.check_same(other)?;
        let mut v = self.basis().to_vec();
        v.extend(other.basis());
        Self::from_lattice(self.disc, &v)
    }

    /// True when `other` divides `self`, i.e. `self` is contained in `other`.
    pub fn divisible_by(&self, other: &QuadIdeal) -> Result<bool> {
        Ok(self.gcd(other)? == *other)
    }

    /// Exact quotient `self / other`, `None` when `other` does not divide `self`.
    pub fn exact_div(&self, other: &QuadIdeal) -> Result<Option<QuadIdeal>> {
        let prod = self.mul(&other.conjugate())?;
        let n = other.norm();
        if prod.m as i128 % n != 0 {
            return Ok(None);
        }
        Ok(Some(QuadIdeal {
            m: (prod.m as i128 / n) as i64,
            ..prod
        }))
    }

    pub(crate) fn sort_key(&self) -> (i128, i64, i64) {
        (self.norm(), self.b, self.m)
    }
}

impl Ord for QuadIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.disc
            .cmp(&other.disc)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for QuadIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 1 {
            write!(f, "({})", self.m)
        } else if self.m == 1 {
            write!(f, "[{}, ({}+√{})/2]", self.a, self.b, self.disc)
        } else {
            write!(f, "{}·[{}, ({}+√{})/2]", self.m, self.a, self.b, self.disc)
        }
    }
}

impl fmt::Debug for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QuadIdeal(D={}, m={}, a={}, b={})",
            self.disc, self.m, self.a, self.b
        )
    }
}

/// How a rational prime decomposes in the maximal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Splitting {
    Split(QuadIdeal, QuadIdeal),
    Inert(QuadIdeal),
    Ramified(QuadIdeal),
}

impl Splitting {
    pub fn primes(&self) -> Vec<QuadIdeal> {
        match self {
            Splitting::Split(p, q) => vec![*p, *q],
            Splitting::Inert(p) | Splitting::Ramified(p) => vec![*p],
        }
    }
}

/// Decomposition of `(p)` by the Kronecker symbol `(D/p)`.
pub fn prime_splitting(disc: i64, p: u64) -> Result<Splitting> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let pi = i64::try_from(p).map_err(|_| Error::Overflow("prime"))?;
    let chi = kronecker(disc, p);
    if chi == -1 {
        return Ok(Splitting::Inert(QuadIdeal::principal_integer(disc, pi)?));
    }
    let s = disc.rem_euclid(2);
    let b = if p == 2 {
        (0..4).find(|&b: &i64| (b - s) % 2 == 0 && (b * b - disc).rem_euclid(8) == 0)
    } else {
        sqrt_mod_prime(disc.rem_euclid(pi) as u64, p).map(|r| {
            let r = r as i64;
            if (r - s).rem_euclid(2) == 0 {
                r
            } else {
                r + pi
            }
        })
    }
    .ok_or_else(|| Error::InvalidInput(format!("no square root of {disc} modulo {p}")))?;
    let first = QuadIdeal::primitive(disc, pi, b)?;
    if chi == 0 {
        return Ok(Splitting::Ramified(first));
    }
    let second = first.conjugate();
    let (lo, hi) = if first.b <= second.b {
        (first, second)
    } else {
        (second, first)
    };
    Ok(Splitting::Split(lo, hi))
}

/// Prime factorization, primes ordered by norm then `b`.
pub fn factor_ideal(ideal: &QuadIdeal) -> Result<Vec<(QuadIdeal, u32)>> {
    let norm = u64::try_from(ideal.norm()).map_err(|_| Error::Overflow("ideal norm"))?;
    let mut out = Vec::new();
    let mut rest = *ideal;
    for (p, _) in factorize_u64(norm) {
        for prime in prime_splitting(ideal.disc, p)?.primes() {
            let mut e = 0;
            while let Some(q) = rest.exact_div(&prime)? {
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((prime, e));
            }
        }
    }
    if !rest.is_unit_ideal() {
        return Err(Error::ConsistencyFault(format!(
            "factorization of {ideal} left cofactor {rest}"
        )));
    }
    out.sort_by_key(|x| x.0);
    Ok(out)
}
