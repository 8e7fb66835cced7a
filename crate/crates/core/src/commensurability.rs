//! Commensurability classes encoded by ideals: covering is divisibility,
//! prime manifolds are prime ideals, and volume chains are checked against
//! gap bounds and the telescoped count of ideals in a class.

use std::fmt;

use crate::arith::{is_prime_u64, isqrt_u64};
use crate::error::{Error, Result};
use crate::numberfield::{
    factor_ideal, IdealClass, IdealCounter, QuadIdeal, RealQuadraticField, Splitting,
};

/// Default norm bound for [`next_prime_manifold`].
pub const DEFAULT_PRIME_BOUND: u64 = 1_000_000;

/// Relative slack for floating-point gap comparisons.
const GAP_TOLERANCE: f64 = 1e-12;

/// Relative tolerance for `Vol M_N = t Vol M_0`.
pub const SCALING_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldIdeal {
    pub label: String,
    pub ideal: QuadIdeal,
    pub volume: Option<f64>,
}

impl ManifoldIdeal {
    pub fn new(label: impl Into<String>, ideal: QuadIdeal) -> Self {
        ManifoldIdeal {
            label: label.into(),
            ideal,
            volume: None,
        }
    }

    /// Labelled by the ideal itself.
    pub fn of(ideal: QuadIdeal) -> Self {
        Self::new(ideal.to_string(), ideal)
    }

    pub fn with_volume(mut self, volume: f64) -> Self {
        self.volume = Some(volume);
        self
    }
}

impl fmt::Display for ManifoldIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.label, self.ideal)?;
        if let Some(v) = self.volume {
            write!(f, " (vol {v})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct CommensurabilityClass {
    field: RealQuadraticField,
    base_class: IdealClass,
    members: Vec<ManifoldIdeal>,
}

impl CommensurabilityClass {
    pub fn new(
        field: RealQuadraticField,
        base_class: IdealClass,
        members: Vec<ManifoldIdeal>,
    ) -> Result<Self> {
        let disc = field.discriminant();
        if base_class.disc() != disc {
            return Err(Error::MixedFields(disc, base_class.disc()));
        }
        if let Some(m) = members.iter().find(|m| m.ideal.disc() != disc) {
            return Err(Error::MixedFields(disc, m.ideal.disc()));
        }
        Ok(CommensurabilityClass {
            field,
            base_class,
            members,
        })
    }

    pub fn field(&self) -> &RealQuadraticField {
        &self.field
    }

    pub fn base_class(&self) -> &IdealClass {
        &self.base_class
    }

    pub fn members(&self) -> &[ManifoldIdeal] {
        &self.members
    }
}

/// Bounds `k <= Vol M_i - Vol M_{i-1} <= K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBounds {
    lower: f64,
    upper: f64,
}

impl GapBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower > 0.0 && lower <= upper && upper.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "gap bounds need 0 < k <= K, got k = {lower}, K = {upper}"
            )));
        }
        Ok(GapBounds { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Division {
    Quotient(ManifoldIdeal),
    /// No common prime factor.
    RelativelyPrime,
    /// Common factors exist but the divisor does not divide.
    NotDivisible {
        common: QuadIdeal,
    },
}

/// `M1 / M2` when `M2` divides `M1`.
pub fn divide(m1: &ManifoldIdeal, m2: &ManifoldIdeal) -> Result<Division> {
    if let Some(q) = m1.ideal.exact_div(&m2.ideal)? {
        return Ok(Division::Quotient(ManifoldIdeal::new(
            format!("{}/{}", m1.label, m2.label),
            q,
        )));
    }
    let common = m1.ideal.gcd(&m2.ideal)?;
    Ok(if common.is_unit_ideal() {
        Division::RelativelyPrime
    } else {
        Division::NotDivisible { common }
    })
}

/// How many times `M2` divides `M1` in succession; 0 when it does not.
pub fn covering_degree(m1: &ManifoldIdeal, m2: &ManifoldIdeal) -> Result<u32> {
    if m2.ideal.is_unit_ideal() {
        return Err(Error::InvalidInput(
            "the unit ideal divides every ideal".into(),
        ));
    }
    let mut rest = m1.ideal;
    let mut p = 0;
    while let Some(q) = rest.exact_div(&m2.ideal)? {
        rest = q;
        p += 1;
    }
    Ok(p)
}

/// Prime manifolds and exponents, ordered by norm.
pub fn prime_decompose_manifold(m: &ManifoldIdeal) -> Result<Vec<(ManifoldIdeal, u32)>> {
    Ok(factor_ideal(&m.ideal)?
        .into_iter()
        .map(|(p, e)| (ManifoldIdeal::of(p), e))
        .collect())
}

/// Prime ideals in increasing `(norm, b)` order up to a norm bound.
pub fn primes_up_to(
    field: &RealQuadraticField,
    bound: u64,
) -> impl Iterator<Item = QuadIdeal> + '_ {
    (2..=bound).flat_map(move |n| {
        if is_prime_u64(n) {
            match field.prime_splitting(n) {
                Ok(Splitting::Inert(_)) | Err(_) => Vec::new(),
                Ok(s) => s.primes(),
            }
        } else {
            let p = isqrt_u64(n);
            if p * p == n && is_prime_u64(p) {
                match field.prime_splitting(p) {
                    Ok(Splitting::Inert(q)) => vec![q],
                    _ => Vec::new(),
                }
            } else {
                Vec::new()
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeChoice {
    pub manifold: ManifoldIdeal,
    pub principal: bool,
    pub note: Option<String>,
}

/// The smallest principal prime outside `exclude`; when none exists below
/// `bound`, the smallest prime outside `exclude`, with a note.
pub fn next_prime_manifold(
    field: &RealQuadraticField,
    exclude: &[QuadIdeal],
    bound: u64,
) -> Result<PrimeChoice> {
    let mut fallback = None;
    for p in primes_up_to(field, bound).filter(|p| !exclude.contains(p)) {
        if field.is_principal(&p)? {
            return Ok(PrimeChoice {
                manifold: ManifoldIdeal::of(p),
                principal: true,
                note: None,
            });
        }
        fallback.get_or_insert(p);
    }
    match fallback {
        Some(p) => Ok(PrimeChoice {
            manifold: ManifoldIdeal::of(p),
            principal: false,
            note: Some(format!(
                "no principal prime of norm <= {bound} outside the exclusions"
            )),
        }),
        None => Err(Error::SearchExhausted(bound)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapCheck {
    pub gaps: Vec<f64>,
    /// Index `i` of the first gap `Vol M_i - Vol M_{i-1}` out of bounds.
    pub violation: Option<(usize, Side)>,
}

impl GapCheck {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn gap_bounds_check(volumes: &[f64], bounds: &GapBounds) -> Result<GapCheck> {
    if volumes.len() < 2 {
        return Err(Error::InvalidInput(
            "a volume sequence needs at least two entries".into(),
        ));
    }
    if let Some(i) = volumes.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidInput(format!(
            "volume {} at index {i} is not a positive real",
            volumes[i]
        )));
    }
    if let Some(i) = (1..volumes.len()).find(|&i| volumes[i] <= volumes[i - 1]) {
        return Err(Error::NonIncreasing(i));
    }
    let gaps: Vec<f64> = volumes.windows(2).map(|w| w[1] - w[0]).collect();
    let slack = GAP_TOLERANCE * bounds.upper;
    let violation = gaps.iter().enumerate().find_map(|(i, &g)| {
        if g < bounds.lower - slack {
            Some((i + 1, Side::Lower))
        } else if g > bounds.upper + slack {
            Some((i + 1, Side::Upper))
        } else {
            None
        }
    });
    Ok(GapCheck { gaps, violation })
}

/// `lower < value < upper`, each side reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrictBounds {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

impl StrictBounds {
    pub fn violated_side(&self) -> Option<Side> {
        if !(self.lower < self.value) {
            Some(Side::Lower)
        } else if !(self.value < self.upper) {
            Some(Side::Upper)
        } else {
            None
        }
    }

    pub fn holds(&self) -> bool {
        self.violated_side().is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TelescopeReport {
    pub t: u64,
    /// `N(t)`: ideals of norm at most `t` in the base class.
    pub n_t: u64,
    /// `t = 1` or `N(t) <= 1`: the inequalities are vacuous.
    pub degenerate: bool,
    pub volumes: Vec<f64>,
    pub gaps: Option<GapCheck>,
    /// `k (N - 1) < Vol M_N - Vol M_0 < K (N - 1)`.
    pub telescoped: Option<StrictBounds>,
    /// `Vol M_N / Vol M_0`, expected to equal `t`.
    pub endpoint_ratio: Option<f64>,
    pub endpoint_relative_error: Option<f64>,
    /// `k (N - 1) < (t - 1) Vol M_0 < K (N - 1)`.
    pub base: Option<StrictBounds>,
    pub passed: bool,
}

impl TelescopeReport {
    /// First failed check, in the order gaps, telescoped sum, endpoint, base.
    pub fn failure(&self) -> Option<String> {
        if let Some((i, side)) = self.gaps.as_ref().and_then(|g| g.violation) {
            return Some(format!("gap {i} violates the {side} bound"));
        }
        if let Some(side) = self.telescoped.and_then(|b| b.violated_side()) {
            return Some(format!("telescoped sum violates the {side} bound"));
        }
        if let Some(err) = self
            .endpoint_relative_error
            .filter(|e| !(*e <= SCALING_TOLERANCE))
        {
            return Some(format!(
                "Vol M_N / Vol M_0 differs from t by relative {err:e}"
            ));
        }
        if let Some(side) = self.base.and_then(|b| b.violated_side()) {
            return Some(format!("(t - 1) Vol M_0 violates the {side} bound"));
        }
        None
    }
}

/// Checks a chain `M_0 < M_1 < ... < M_N`, `N = N(t, A)` for the base class.
pub fn telescoping_check(
    class: &CommensurabilityClass,
    t: u64,
    bounds: &GapBounds,
) -> Result<TelescopeReport> {
    if t == 0 {
        return Err(Error::InvalidInput("t must be a positive integer".into()));
    }
    let n_t = class.field.count_ideals_in_class(&class.base_class, t);
    let volumes: Vec<f64> = class
        .members
        .iter()
        .map(|m| {
            m.volume
                .ok_or_else(|| Error::InvalidInput(format!("member {} has no volume", m.label)))
        })
        .collect::<Result<_>>()?;
    let mut report = TelescopeReport {
        t,
        n_t,
        degenerate: t == 1 || n_t <= 1,
        volumes,
        gaps: None,
        telescoped: None,
        endpoint_ratio: None,
        endpoint_relative_error: None,
        base: None,
        passed: true,
    };
    if report.degenerate {
        return Ok(report);
    }
    let found = report.volumes.len() as u64;
    if found != n_t + 1 {
        return Err(Error::ChainMismatch {
            expected: n_t + 1,
            found,
        });
    }
    let gaps = gap_bounds_check(&report.volumes, bounds)?;
    let (v0, vn) = (report.volumes[0], report.volumes[n_t as usize]);
    let steps = (n_t - 1) as f64;
    let (lo, hi) = (bounds.lower * steps, bounds.upper * steps);
    let telescoped = StrictBounds {
        lower: lo,
        value: vn - v0,
        upper: hi,
    };
    let base = StrictBounds {
        lower: lo,
        value: (t - 1) as f64 * v0,
        upper: hi,
    };
    let expected = t as f64 * v0;
    let err = (vn - expected).abs() / expected;
    report.passed = gaps.passed() && telescoped.holds() && err <= SCALING_TOLERANCE && base.holds();
    report.gaps = Some(gaps);
    report.telescoped = Some(telescoped);
    report.endpoint_ratio = Some(vn / v0);
    report.endpoint_relative_error = Some(err);
    report.base = Some(base);
    Ok(report)
}

/// All integral ideals of norm at most `t` in `class`, ordered by norm.
pub fn ideals_in_class(
    field: &RealQuadraticField,
    class: &IdealClass,
    t: u64,
) -> Result<Vec<QuadIdeal>> {
    let disc = field.discriminant();
    let counter = IdealCounter::new(field, t.max(1));
    let mut out = Vec::new();
    for a in 1..=t {
        for b in counter.roots(a) {
            let p = QuadIdeal::primitive(disc, a as i64, b)?;
            if field.class_of(&p)? != *class {
                continue;
            }
            let mut m = 1u64;
            while m * m * a <= t {
                out.push(QuadIdeal::new(disc, m as i64, a as i64, b)?);
                m += 1;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// A chain built to satisfy the scaling law exactly:
/// `Vol M_j = v0 (1 + j (t - 1) / N(t))`, with `M_0` the class
/// representative and `M_j` the ideals of norm at most `t` in the class.
pub fn synthetic_chain(
    field: &RealQuadraticField,
    class: &IdealClass,
    t: u64,
    v0: f64,
) -> Result<CommensurabilityClass> {
    if !(v0 > 0.0) {
        return Err(Error::InvalidInput(format!(
            "base volume {v0} is not positive"
        )));
    }
    let ideals = ideals_in_class(field, class, t)?;
    let n = ideals.len() as f64;
    let delta = if ideals.is_empty() {
        0.0
    } else {
        (t as f64 - 1.0) / n
    };
    let mut members = vec![ManifoldIdeal::new("M0", *class.representative()).with_volume(v0)];
    for (j, ideal) in ideals.into_iter().enumerate() {
        let j = j + 1;
        members.push(
            ManifoldIdeal::new(format!("M{j}"), ideal).with_volume(v0 * (1.0 + j as f64 * delta)),
        );
    }
    CommensurabilityClass::new(field.clone(), class.clone(), members)
}
