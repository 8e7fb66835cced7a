//! Fixed-point reals with a 256-bit fractional part.
//!
//! Only what the analytic invariants need: square roots of integers,
//! natural logarithms, the four operations and decimal rendering. Every
//! primitive is correctly truncated to within a few units in the last
//! place, so 30 significant digits are far inside the error budget.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::quadratic::QuadraticNumber;

const FRAC_BITS: u64 = 256;
const GUARD_BITS: u64 = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Real {
    mant: BigInt,
}

impl Real {
    fn from_mant(mant: BigInt) -> Self {
        Real { mant }
    }

    pub fn zero() -> Self {
        Real::from_mant(BigInt::zero())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Real::from_mant(n.into() << FRAC_BITS)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Real::from_mant((num << FRAC_BITS).div_floor(den))
    }

    /// Best-effort conversion; exact for dyadic `f64` values.
    pub fn from_f64(x: f64) -> Self {
        let scaled = x * 2f64.powi(60);
        let m = BigInt::from(scaled as i128);
        Real::from_mant(m << (FRAC_BITS - 60))
    }

    /// sqrt(n) for a nonnegative integer.
    pub fn sqrt_int(n: &BigInt) -> Self {
        assert!(!n.is_negative(), "square root of a negative integer");
        Real::from_mant((n << (2 * FRAC_BITS)).sqrt())
    }

    /// Numeric value of an exact quadratic irrational.
    pub fn from_quadratic(x: &QuadraticNumber) -> Self {
        // (a + b*sqrt(d)) / c, the surd evaluated as floor(sqrt(b^2 d 4^F))
        let surd = (x.b() * x.b() * x.d()) << (2 * FRAC_BITS);
        let mut root = surd.sqrt();
        if x.b().is_negative() {
            root = -root;
        }
        let num = (x.a() << FRAC_BITS) + root;
        Real::from_mant(num.div_floor(x.c()))
    }

    pub fn add(&self, other: &Real) -> Real {
        Real::from_mant(&self.mant + &other.mant)
    }

    pub fn sub(&self, other: &Real) -> Real {
        Real::from_mant(&self.mant - &other.mant)
    }

    pub fn mul(&self, other: &Real) -> Real {
        Real::from_mant((&self.mant * &other.mant) >> FRAC_BITS)
    }

    pub fn div(&self, other: &Real) -> Real {
        assert!(!other.mant.is_zero(), "division by zero");
        Real::from_mant((&self.mant << FRAC_BITS).div_floor(&other.mant))
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Real {
        Real::from_mant(&self.mant * k.into())
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Natural logarithm; panics on nonpositive input.
    pub fn ln(&self) -> Real {
        assert!(self.mant.is_positive(), "logarithm of a nonpositive number");
        let work = FRAC_BITS + GUARD_BITS;
        let m = &self.mant << GUARD_BITS;
        // x = m / 2^work = y * 2^k with y in [1, 2)
        let k = m.bits() as i64 - 1 - work as i64;
        let y = if k >= 0 {
            m >> k as u64
        } else {
            m << (-k) as u64
        };
        let one = BigInt::one() << work;
        let z = ((&y - &one) << work).div_floor(&(&y + &one));
        let ln_y = atanh_fixed(&z, work) << 1u32;
        let ln2 = atanh_fixed(&((BigInt::one() << work) / 3), work) << 1u32;
        let total = ln_y + ln2 * k;
        Real::from_mant(total >> GUARD_BITS)
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.mant.bits().saturating_sub(62);
        let top = (&self.mant >> shift).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(shift as i32 - FRAC_BITS as i32)
    }

    /// Rounds to `digits` significant decimal digits, plain notation.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.mant.is_zero() {
            return "0".to_string();
        }
        let negative = self.mant.is_negative();
        let mag = self.mant.abs();
        let estimate = self.to_f64().abs().log10().floor() as i64;
        let mut exp10 = estimate;
        let scaled = loop {
            let shift = digits as i64 - 1 - exp10;
            let s = scale_round(&mag, shift);
            let lo = BigInt::from(10u32).pow(digits as u32 - 1);
            let hi = &lo * 10u32;
            if s >= hi {
                exp10 += 1;
            } else if s < lo {
                exp10 -= 1;
            } else {
                break s;
            }
        };
        let s = scaled.to_string();
        let point = exp10 + 1; // digits before the decimal point
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        if point <= 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-point) as usize));
            out.push_str(&s);
        } else if point as usize >= s.len() {
            out.push_str(&s);
            out.extend(std::iter::repeat_n('0', point as usize - s.len()));
        } else {
            out.push_str(&s[..point as usize]);
            out.push('.');
            out.push_str(&s[point as usize..]);
        }
        out
    }
}

// round(mag * 10^shift / 2^FRAC_BITS)
fn scale_round(mag: &BigInt, shift: i64) -> BigInt {
    let (num, den) = if shift >= 0 {
        (
            mag * BigInt::from(10u32).pow(shift as u32),
            BigInt::one() << FRAC_BITS,
        )
    } else {
        (
            mag.clone(),
            (BigInt::one() << FRAC_BITS) * BigInt::from(10u32).pow((-shift) as u32),
        )
    };
    (num * 2u32 + &den).div_floor(&(den * 2u32))
}

// atanh(z) for a fixed-point z with |z| <= 1/3.
fn atanh_fixed(z: &BigInt, work: u64) -> BigInt {
    let z2 = (z * z) >> work;
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !power.is_zero() {
        sum += &power / k;
        power = (&power * &z2) >> work;
        k += 2;
    }
    sum
}

impl std::str::FromStr for Real {
    type Err = crate::error::Error;

    /// Parses `[-]digits[.digits][e[-]digits]` exactly (to the 256-bit grid).
    fn from_str(text: &str) -> crate::error::Result<Real> {
        let bad = || crate::error::Error::InvalidInput(format!("{text:?} is not a decimal number"));
        let t = text.trim();
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (negative, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
        if whole.is_empty() && frac.is_empty()
            || !whole
                .chars()
                .chain(frac.chars())
                .all(|c| c.is_ascii_digit())
            || exp.unsigned_abs() > 4000
        {
            return Err(bad());
        }
        let mut num: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let scale = exp - frac.len() as i32;
        let ten = BigInt::from(10u32);
        Ok(if scale >= 0 {
            Real::from_int(num * ten.pow(scale as u32))
        } else {
            Real::from_ratio(&num, &ten.pow((-scale) as u32))
        })
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mant.cmp(&other.mant)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        f.write_str(&self.to_decimal(digits))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(40))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logarithms_against_known_digits() {
        // ln 2 = 0.693147180559945309417232121458176568...
        assert_eq!(
            Real::from_int(2).ln().to_decimal(36),
            "0.693147180559945309417232121458176568"
        );
        // ln 10 = 2.30258509299404568401799145468436420...
        assert_eq!(
            Real::from_int(10).ln().to_decimal(35),
            "2.3025850929940456840179914546843642"
        );
        assert_eq!(Real::from_int(1).ln().to_decimal(5), "0");
        let half = Real::from_ratio(&BigInt::from(1), &BigInt::from(2));
        assert_eq!(half.ln().to_decimal(20), "-0.69314718055994530942");
    }

    #[test]
    fn sqrt_and_rendering() {
        // sqrt 5 = 2.2360679774997896964091736687312762354...
        assert_eq!(
            Real::sqrt_int(&BigInt::from(5)).to_decimal(38),
            "2.2360679774997896964091736687312762354"
        );
        assert_eq!(Real::from_int(12345).to_decimal(3), "12300");
        assert_eq!(Real::from_f64(0.001953125).to_decimal(4), "0.001953");
        assert!((Real::from_int(7).div(&Real::from_int(3)).to_f64() - 7.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn parsing() {
        let x: Real = "2.5".parse().unwrap();
        assert_eq!(x, Real::from_ratio(&BigInt::from(5), &BigInt::from(2)));
        assert_eq!("-1.25e2".parse::<Real>().unwrap(), Real::from_int(-125));
        assert_eq!("3".parse::<Real>().unwrap(), Real::from_int(3));
        assert_eq!(".5".parse::<Real>().unwrap().to_decimal(3), "0.500");
        for bad in ["", "-", "1.2.3", "abc", "1e", "0x10"] {
            assert!(bad.parse::<Real>().is_err(), "{bad}");
        }
    }
}
