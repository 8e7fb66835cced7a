//! Real quadratic fields: discriminant, fundamental unit, regulator, class
//! group, ideal arithmetic and the analytic invariants built from them.

mod analytic;
mod classes;
mod counting;
mod ideal;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

pub use analytic::{humbert_volume, HumbertVolume};
pub use classes::ClassCycles;
pub use counting::{IdealCounter, PrimitiveCounts};
pub use ideal::{factor_ideal, prime_splitting, QuadIdeal, Splitting};

use crate::arith::is_square_free_u64;
use crate::error::{Error, Result};
use crate::precise::Real;
use crate::quadratic::{QuadraticIrrational, QuadraticNumber};

/// Largest radicand accepted by [`RealQuadraticField::new`]. Reduced ideals
/// are enumerated up front, which costs about `sqrt(D)` divisor searches.
pub const MAX_RADICAND: u64 = 10_000_000;

/// `Q(sqrt d)` with its invariants. Cheap to clone.
#[derive(Clone)]
pub struct RealQuadraticField {
    inner: Arc<FieldData>,
}

struct FieldData {
    d: i64,
    disc: i64,
    unit: QuadraticIrrational,
    unit_norm: i32,
    regulator: Real,
    classes: ClassCycles,
}

impl RealQuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d <= 1 || !is_square_free_u64(d as u64) {
            return Err(Error::InvalidRadicand(d.to_string()));
        }
        if d as u64 > MAX_RADICAND {
            return Err(Error::FieldTooLarge(d.to_string(), MAX_RADICAND));
        }
        let disc = if d % 4 == 1 { d } else { 4 * d };
        let classes = ClassCycles::compute(disc)?;
        let unit_number = classes.fundamental_unit();
        let (norm, den) = unit_number.norm();
        if !den.is_one() || !(norm == BigInt::one() || norm == -BigInt::one()) {
            return Err(Error::ConsistencyFault(format!(
                "{unit_number:?} is not a unit"
            )));
        }
        let unit_norm = norm.to_i32().unwrap_or(0);
        let unit = QuadraticIrrational::try_from(unit_number)?;
        let regulator = Real::from_quadratic(unit.as_number()).ln();
        Ok(RealQuadraticField {
            inner: Arc::new(FieldData {
                d,
                disc,
                unit,
                unit_norm,
                regulator,
                classes,
            }),
        })
    }

    /// Square-free radicand `d`.
    pub fn radicand(&self) -> i64 {
        self.inner.d
    }

    /// Field discriminant `D` (`d` or `4d`).
    pub fn discriminant(&self) -> i64 {
        self.inner.disc
    }

    pub fn fundamental_unit(&self) -> &QuadraticIrrational {
        &self.inner.unit
    }

    /// Norm of the fundamental unit, +1 or -1.
    pub fn unit_norm(&self) -> i32 {
        self.inner.unit_norm
    }

    /// `log(epsilon)`.
    pub fn regulator(&self) -> &Real {
        &self.inner.regulator
    }

    pub fn class_number(&self) -> usize {
        self.inner.classes.class_count()
    }

    pub fn cycles(&self) -> &ClassCycles {
        &self.inner.classes
    }

    /// Whether two fields are the same field.
    pub fn same_as(&self, other: &RealQuadraticField) -> bool {
        self.inner.d == other.inner.d
    }

    fn check(&self, ideal: &QuadIdeal) -> Result<()> {
        if ideal.disc() != self.inner.disc {
            Err(Error::MixedFields(self.inner.disc, ideal.disc()))
        } else {
            Ok(())
        }
    }

    pub fn unit_ideal(&self) -> QuadIdeal {
        QuadIdeal::unit(self.inner.disc)
    }

    pub fn ideal(&self, m: i64, a: i64, b: i64) -> Result<QuadIdeal> {
        QuadIdeal::new(self.inner.disc, m, a, b)
    }

    /// The principal ideal `(n)` of a rational integer.
    pub fn integer_ideal(&self, n: i64) -> Result<QuadIdeal> {
        QuadIdeal::principal_integer(self.inner.disc, n)
    }

    pub fn prime_splitting(&self, p: u64) -> Result<Splitting> {
        prime_splitting(self.inner.disc, p)
    }

    /// All ideal classes, the principal class first.
    pub fn classes(&self) -> Vec<IdealClass> {
        let principal = self.inner.classes.principal_index();
        let mut order: Vec<usize> = (0..self.class_number()).collect();
        order.sort_by_key(|&i| (i != principal, i));
        order.into_iter().map(|i| self.class_by_index(i)).collect()
    }

    pub fn principal_class(&self) -> IdealClass {
        self.class_by_index(self.inner.classes.principal_index())
    }

    fn class_by_index(&self, index: usize) -> IdealClass {
        let disc = self.inner.disc;
        let cycle: Vec<QuadIdeal> = self.inner.classes.cycles()[index]
            .iter()
            .map(|&(a, b)| QuadIdeal::primitive(disc, a, b).expect("reduced ideals are valid"))
            .collect();
        let representative = *cycle.iter().min().expect("cycles are nonempty");
        IdealClass {
            disc,
            index,
            principal: index == self.inner.classes.principal_index(),
            representative,
            cycle,
        }
    }

    pub fn class_of(&self, ideal: &QuadIdeal) -> Result<IdealClass> {
        self.check(ideal)?;
        Ok(self.class_by_index(self.inner.classes.class_index(ideal.a(), ideal.b())))
    }

    /// Generator of `ideal` when it is principal.
    pub fn principal_generator(&self, ideal: &QuadIdeal) -> Result<Option<QuadraticNumber>> {
        self.check(ideal)?;
        let gen = self.inner.classes.principal_generator(ideal.a(), ideal.b());
        Ok(gen.map(|g| &g * &BigInt::from(ideal.scale())))
    }

    pub fn is_principal(&self, ideal: &QuadIdeal) -> Result<bool> {
        Ok(self.class_of(ideal)?.is_principal())
    }

    /// Wide equivalence of ideals.
    pub fn equivalent(&self, i: &QuadIdeal, j: &QuadIdeal) -> Result<bool> {
        if i.disc() != j.disc() {
            return Err(Error::MixedFields(i.disc(), j.disc()));
        }
        Ok(self.class_of(i)?.index == self.class_of(j)?.index)
    }
}

impl fmt::Debug for RealQuadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealQuadraticField")
            .field("d", &self.inner.d)
            .field("D", &self.inner.disc)
            .field("epsilon", &self.inner.unit)
            .field("h", &self.class_number())
            .finish()
    }
}

impl PartialEq for RealQuadraticField {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// An ideal class, carried with its full reduced cycle.
#[derive(Debug, Clone)]
pub struct IdealClass {
    disc: i64,
    index: usize,
    principal: bool,
    representative: QuadIdeal,
    cycle: Vec<QuadIdeal>,
}

impl IdealClass {
    pub fn representative(&self) -> &QuadIdeal {
        &self.representative
    }

    pub fn cycle(&self) -> &[QuadIdeal] {
        &self.cycle
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub(crate) fn index(&self) -> usize {
        self.index
    }
}

impl PartialEq for IdealClass {
    fn eq(&self, other: &Self) -> bool {
        self.disc == other.disc && self.index == other.index
    }
}

impl Eq for IdealClass {}

/// The field generated by a quadratic irrational.
pub fn field_of(x: &QuadraticIrrational) -> Result<RealQuadraticField> {
    let d = x
        .d()
        .to_i64()
        .ok_or_else(|| Error::FieldTooLarge(x.d().to_string(), MAX_RADICAND))?;
    RealQuadraticField::new(d)
}

/// Smallest unit above 1 of the maximal order of `Q(sqrt d)`.
pub fn fundamental_unit(d: i64) -> Result<QuadraticIrrational> {
    Ok(RealQuadraticField::new(d)?.fundamental_unit().clone())
}
