//! Exact real quadratic numbers `(a + b*sqrt(d)) / c` and their eventually
//! periodic continued fractions.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, exact_sqrt, isqrt};
use crate::error::{Error, Result};

/// An element `(a + b*sqrt(d)) / c` of the real quadratic field `Q(sqrt d)`.
///
/// Canonical: `d` square-free and greater than 1, `c > 0`, `gcd(a, b, c) = 1`,
/// and `b = 0` forces `a/c` in lowest terms. Equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadraticNumber {
    /// Builds `(a + b*sqrt(d)) / c`. `d` must be square-free and greater than 1.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let d = d.into();
        if d <= BigInt::one() {
            return Err(Error::InvalidRadicand(d.to_string()));
        }
        let (f, _) = arith::square_free_decompose(&d);
        if !f.is_one() {
            return Err(Error::InvalidRadicand(d.to_string()));
        }
        Self::from_canonical_radicand(a.into(), b.into(), c.into(), d)
    }

    /// `(a + b*sqrt(n)) / c` for a positive non-square `n`; square factors of
    /// `n` are pulled out.
    pub fn from_surd(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        n: impl Into<BigInt>,
    ) -> Result<Self> {
        let n = n.into();
        Self::from_surd_hinted(a.into(), b.into(), c.into(), &n, None)
    }

    // `hint` is a candidate square-free kernel of `n`; it is verified and
    // skips factoring `n` when correct.
    pub(crate) fn from_surd_hinted(
        a: BigInt,
        b: BigInt,
        c: BigInt,
        n: &BigInt,
        hint: Option<&BigInt>,
    ) -> Result<Self> {
        if !n.is_positive() || exact_sqrt(n).is_some() {
            return Err(Error::NotQuadraticIrrational(format!(
                "radicand {n} is not a positive non-square"
            )));
        }
        if let Some(d) = hint {
            if d.is_positive() && (n % d).is_zero() {
                if let Some(f) = exact_sqrt(&(n / d)) {
                    return Self::from_canonical_radicand(a, b * f, c, d.clone());
                }
            }
        }
        let (f, d) = arith::square_free_decompose(n);
        Self::from_canonical_radicand(a, b * f, c, d)
    }

    pub(crate) fn from_canonical_radicand(
        a: BigInt,
        b: BigInt,
        c: BigInt,
        d: BigInt,
    ) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let mut x = QuadraticNumber { a, b, c, d };
        x.normalize();
        Ok(x)
    }

    pub fn from_integer(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        QuadraticNumber {
            a: n.into(),
            b: BigInt::zero(),
            c: BigInt::one(),
            d: d.into(),
        }
    }

    fn normalize(&mut self) {
        if self.c.is_negative() {
            self.a = -&self.a;
            self.b = -&self.b;
            self.c = -&self.c;
        }
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if !g.is_one() && !g.is_zero() {
            self.a /= &g;
            self.b /= &g;
            self.c /= &g;
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadraticNumber {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    /// Field norm as a reduced fraction `(num, den)`, `den > 0`.
    pub fn norm(&self) -> (BigInt, BigInt) {
        let num = &self.a * &self.a - &self.b * &self.b * &self.d;
        let den = &self.c * &self.c;
        let g = num.gcd(&den);
        (num / &g, den / g)
    }

    /// Trace as a reduced fraction.
    pub fn trace(&self) -> (BigInt, BigInt) {
        let num: BigInt = &self.a * 2;
        let g = num.gcd(&self.c);
        (num / &g, &self.c / g)
    }

    /// True when the number lies in the maximal order of `Q(sqrt d)`.
    pub fn is_algebraic_integer(&self) -> bool {
        self.norm().1.is_one() && self.trace().1.is_one()
    }

    /// Sign of the numeric value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &self.d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Exact floor of the value.
    pub fn floor(&self) -> BigInt {
        // floor(b*sqrt d), exact since b^2 d is a square only when b = 0
        let s = if self.b.is_zero() {
            BigInt::zero()
        } else {
            let r = isqrt(&(&self.b * &self.b * &self.d));
            if self.b.is_positive() {
                r
            } else {
                -r - 1
            }
        };
        (&self.a + s).div_floor(&self.c)
    }

    pub fn to_f64(&self) -> f64 {
        crate::precise::Real::from_quadratic(self).to_f64()
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Applies `x -> (p x + q) / (r x + s)`. Fails on a zero denominator.
    pub fn mobius(&self, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) -> Result<Self> {
        let num = &(self * p) + &QuadraticNumber::from_integer(q.clone(), self.d.clone());
        let den = &(self * r) + &QuadraticNumber::from_integer(s.clone(), self.d.clone());
        num.checked_div(&den)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        self.check_field(other);
        // x / y = x * conj(y) / N(y)
        let (nn, nd) = other.norm();
        let prod = self * &other.conjugate();
        let mut out = QuadraticNumber {
            a: prod.a * &nd,
            b: prod.b * &nd,
            c: prod.c * nn,
            d: self.d.clone(),
        };
        out.normalize();
        Ok(out)
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "quadratic numbers from different fields");
    }

    /// ASCII rendering, e.g. `(1+sqrt(5))/2`.
    pub fn to_ascii(&self) -> String {
        self.render("sqrt(", ")")
    }

    fn render(&self, open: &str, close: &str) -> String {
        let mut num = String::new();
        let irrational = !self.b.is_zero();
        if !self.a.is_zero() || !irrational {
            num.push_str(&self.a.to_string());
        }
        if irrational {
            let mag = self.b.abs();
            if self.b.is_negative() {
                num.push('-');
            } else if !num.is_empty() {
                num.push('+');
            }
            if !mag.is_one() {
                num.push_str(&mag.to_string());
            }
            num.push_str(open);
            num.push_str(&self.d.to_string());
            num.push_str(close);
        }
        if self.c.is_one() {
            num
        } else if !irrational || (self.a.is_zero() && self.b.is_positive()) {
            format!("{num}/{}", self.c)
        } else {
            format!("({num})/{}", self.c)
        }
    }
}

fn sign_of(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("√", ""))
    }
}

impl fmt::Debug for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ascii())
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.check_field(rhs);
        let mut out = QuadraticNumber {
            a: &self.a * &rhs.c + &rhs.a * &self.c,
            b: &self.b * &rhs.c + &rhs.b * &self.c,
            c: &self.c * &rhs.c,
            d: self.d.clone(),
        };
        out.normalize();
        out
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self + &(-rhs)
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.check_field(rhs);
        let mut out = QuadraticNumber {
            a: &self.a * &rhs.a + &self.b * &rhs.b * &self.d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            c: &self.c * &rhs.c,
            d: self.d.clone(),
        };
        out.normalize();
        out
    }
}

impl Mul<&BigInt> for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, k: &BigInt) -> QuadraticNumber {
        let mut out = QuadraticNumber {
            a: &self.a * k,
            b: &self.b * k,
            c: self.c.clone(),
            d: self.d.clone(),
        };
        out.normalize();
        out
    }
}

impl Div for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn div(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.checked_div(rhs).expect("division by zero")
    }
}

/// A quadratic number with nonzero irrational part.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticIrrational(QuadraticNumber);

impl QuadraticIrrational {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        QuadraticNumber::new(a, b, c, d)?.try_into()
    }

    pub fn from_surd(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        n: impl Into<BigInt>,
    ) -> Result<Self> {
        QuadraticNumber::from_surd(a, b, c, n)?.try_into()
    }

    pub fn as_number(&self) -> &QuadraticNumber {
        &self.0
    }

    pub fn into_number(self) -> QuadraticNumber {
        self.0
    }

    pub fn a(&self) -> &BigInt {
        &self.0.a
    }
    pub fn b(&self) -> &BigInt {
        &self.0.b
    }
    pub fn c(&self) -> &BigInt {
        &self.0.c
    }
    pub fn d(&self) -> &BigInt {
        &self.0.d
    }

    pub fn conjugate(&self) -> Self {
        QuadraticIrrational(self.0.conjugate())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.0.cmp_value(&other.0)
    }

    /// Integer quadratic `[A, B, C]` with `A x^2 + B x + C = 0`, `A > 0`,
    /// coprime coefficients.
    pub fn minimal_polynomial(&self) -> [BigInt; 3] {
        // x = (a + b sqrt d)/c  =>  c^2 x^2 - 2ac x + (a^2 - b^2 d) = 0
        let (a, b, c, d) = (&self.0.a, &self.0.b, &self.0.c, &self.0.d);
        let qa = c * c;
        let qb: BigInt = -(a * c * 2u32);
        let qc = a * a - b * b * d;
        let g = qa.gcd(&qb).gcd(&qc);
        [qa / &g, qb / &g, qc / g]
    }

    /// Discriminant of the minimal polynomial.
    pub fn discriminant(&self) -> BigInt {
        let [qa, qb, qc] = self.minimal_polynomial();
        &qb * &qb - qa * qc * 4
    }

    /// `x > 1` with conjugate in `(-1, 0)`: the purely periodic case.
    pub fn is_reduced(&self) -> bool {
        let one = QuadraticNumber::from_integer(1, self.d().clone());
        let conj = self.0.conjugate();
        self.0.cmp_value(&one) == Ordering::Greater
            && conj.signum() < 0
            && (&conj + &one).signum() > 0
    }

    pub fn mobius(&self, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) -> Result<Self> {
        self.0.mobius(p, q, r, s)?.try_into()
    }

    pub fn to_ascii(&self) -> String {
        self.0.to_ascii()
    }
}

impl TryFrom<QuadraticNumber> for QuadraticIrrational {
    type Error = Error;
    fn try_from(x: QuadraticNumber) -> Result<Self> {
        if x.is_rational() {
            Err(Error::NotQuadraticIrrational(format!("{x:?} is rational")))
        } else {
            Ok(QuadraticIrrational(x))
        }
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

/// Eventually periodic regular continued fraction
/// `[pre_0; pre_1, ..., pre_k, (period)]`.
///
/// `cf_expand` reports the minimal preperiod and minimal period exactly as
/// they occur in the expansion; [`ContinuedFraction::canonical_cycle`] gives
/// the rotation-normalized period used for tail comparison.
#[derive(Clone)]
pub struct ContinuedFraction {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
    radicand: Option<BigInt>,
}

impl PartialEq for ContinuedFraction {
    fn eq(&self, other: &Self) -> bool {
        self.preperiod == other.preperiod && self.period == other.period
    }
}

impl Eq for ContinuedFraction {}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "[{}; ({})]", join(&self.preperiod), join(&self.period))
    }
}

impl ContinuedFraction {
    pub fn new(preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidInput(
                "continued fraction period is empty".into(),
            ));
        }
        if period.iter().any(|p| !p.is_positive()) {
            return Err(Error::InvalidInput("period digits must be >= 1".into()));
        }
        if preperiod.iter().skip(1).any(|p| !p.is_positive()) {
            return Err(Error::InvalidInput(
                "digits after the first must be >= 1".into(),
            ));
        }
        Ok(ContinuedFraction {
            preperiod,
            period,
            radicand: None,
        })
    }

    pub fn from_digits(preperiod: &[i64], period: &[i64]) -> Result<Self> {
        Self::new(
            preperiod.iter().map(|&x| BigInt::from(x)).collect(),
            period.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// Lexicographically least rotation of the minimal period.
    pub fn canonical_cycle(&self) -> Vec<BigInt> {
        least_rotation(&minimal_block(&self.period))
    }
}

fn minimal_block(v: &[BigInt]) -> Vec<BigInt> {
    let n = v.len();
    for len in 1..=n {
        if n.is_multiple_of(len) && (len..n).all(|i| v[i] == v[i - len]) {
            return v[..len].to_vec();
        }
    }
    v.to_vec()
}

/// Lexicographically least cyclic rotation.
pub fn least_rotation(v: &[BigInt]) -> Vec<BigInt> {
    let n = v.len();
    let best = (0..n)
        .min_by(|&i, &j| {
            (0..n)
                .map(|k| v[(i + k) % n].cmp(&v[(j + k) % n]))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
        .unwrap_or(0);
    v[best..].iter().chain(&v[..best]).cloned().collect()
}

/// A 2x2 integer matrix, row-major.
pub type Mat2 = [[BigInt; 2]; 2];

pub(crate) fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [
            &x[0][0] * &y[0][0] + &x[0][1] * &y[1][0],
            &x[0][0] * &y[0][1] + &x[0][1] * &y[1][1],
        ],
        [
            &x[1][0] * &y[0][0] + &x[1][1] * &y[1][0],
            &x[1][0] * &y[0][1] + &x[1][1] * &y[1][1],
        ],
    ]
}

/// Product of the elementary matrices `((a, 1), (1, 0))`.
pub(crate) fn convergent_matrix(digits: &[BigInt]) -> Mat2 {
    let mut m: Mat2 = [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ];
    for a in digits {
        let f: Mat2 = [[a.clone(), BigInt::one()], [BigInt::one(), BigInt::zero()]];
        m = mat_mul(&m, &f);
    }
    m
}

/// Attracting fixed point `x = (p x + q)/(r x + s)` of a matrix with
/// `r > 0` and irrational fixed points: `(p - s + sqrt(disc)) / (2r)`.
pub(crate) fn attracting_fixed_point(
    m: &Mat2,
    hint: Option<&BigInt>,
) -> Result<QuadraticIrrational> {
    let [[p, q], [r, s]] = m;
    let diff = p - s;
    let disc = &diff * &diff + q * r * 4;
    QuadraticNumber::from_surd_hinted(diff, BigInt::one(), r * 2, &disc, hint)?.try_into()
}

/// Value of the purely periodic continued fraction with period `p`, the
/// slope of the `(p_i, 1)` surgery.
pub fn surgery_slope(p: &[i64]) -> Result<QuadraticIrrational> {
    if p.is_empty() {
        return Err(Error::InvalidSurgery("empty coefficient sequence".into()));
    }
    if let Some(bad) = p.iter().find(|&&x| x <= 0) {
        return Err(Error::InvalidSurgery(format!(
            "coefficient {bad} is not positive"
        )));
    }
    let digits: Vec<BigInt> = p.iter().map(|&x| BigInt::from(x)).collect();
    attracting_fixed_point(&convergent_matrix(&digits), None)
}

/// Regular continued fraction of a quadratic irrational. The complete
/// quotients are tracked as `(P + sqrt N) / Q` with `Q | N - P^2`; the first
/// repeated state closes the period.
pub fn cf_expand(x: &QuadraticIrrational) -> ContinuedFraction {
    let (a, b, c, d) = (x.a(), x.b(), x.c(), x.d());
    let mut n = b * b * d;
    let (mut p, mut q) = if b.is_positive() {
        (a.clone(), c.clone())
    } else {
        (-a, -c)
    };
    if !((&n - &p * &p) % &q).is_zero() {
        let qa = q.abs();
        p *= &qa;
        n *= &q * &q;
        q *= qa;
    }
    let s = isqrt(&n);
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut digits = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = digits.split_off(start);
            return ContinuedFraction {
                preperiod: digits,
                period,
                radicand: Some(d.clone()),
            };
        }
        seen.insert((p.clone(), q.clone()), digits.len());
        let k = if q.is_positive() {
            (&p + &s).div_floor(&q)
        } else {
            -((&p + &s).div_floor(&(-&q)) + 1u32)
        };
        let p_next = &k * &q - &p;
        let q_next = (&n - &p_next * &p_next) / &q;
        digits.push(k);
        p = p_next;
        q = q_next;
    }
}

/// Exact value of an eventually periodic continued fraction.
pub fn cf_value(cf: &ContinuedFraction) -> Result<QuadraticIrrational> {
    if cf.period.is_empty() {
        return Err(Error::InvalidInput(
            "continued fraction period is empty".into(),
        ));
    }
    let tail = attracting_fixed_point(&convergent_matrix(&cf.period), cf.radicand.as_ref())?;
    let [[p, q], [r, s]] = convergent_matrix(&cf.preperiod);
    tail.mobius(&p, &q, &r, &s)
}

/// GL(2, Z)-equivalence of quadratic irrationals: the expansions share a
/// tail, i.e. their minimal periods agree up to rotation.
pub fn modular_equivalent(x: &QuadraticIrrational, y: &QuadraticIrrational) -> bool {
    x.d() == y.d() && cf_expand(x).canonical_cycle() == cf_expand(y).canonical_cycle()
}

/// Digits as machine integers, for display.
pub fn digits_to_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}
