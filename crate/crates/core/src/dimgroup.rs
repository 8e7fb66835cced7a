//! Stationary dimension groups presented by a nonnegative integer matrix.
//!
//! In rank 2 the Perron-Frobenius eigenvector of `A = ((a, b), (c, d))` has
//! slope `theta = (a - d + sqrt(Delta)) / (2c)`, `Delta = tr^2 - 4 det`,
//! which is also the attracting fixed point of `x -> (ax + b)/(cx + d)`.
//! The lattice `Z + Z theta` determines the group up to Morita equivalence,
//! and its class is read off in the order of its multiplier ring.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::exact_sqrt;
use crate::error::{Error, Result};
use crate::numberfield::{field_of, ClassCycles, IdealClass, QuadIdeal, RealQuadraticField};
use crate::quadratic::{
    attracting_fixed_point, cf_expand, convergent_matrix, mat_mul, modular_equivalent, Mat2,
    QuadraticIrrational, QuadraticNumber,
};

/// A validated stationary dimension group.
#[derive(Debug, Clone)]
pub struct StationaryGroup {
    matrix: Vec<Vec<BigInt>>,
    det: i32,
    exponent: usize,
    spectrum: Spectrum,
}

/// Perron-Frobenius data.
#[derive(Debug, Clone)]
pub enum Spectrum {
    /// Rank 2: eigenvalue and eigenvector slope in closed form.
    Quadratic {
        lambda: QuadraticIrrational,
        theta: QuadraticIrrational,
    },
    /// Other ranks: a power-iteration estimate with a verified bracket.
    Certified(PfCertificate),
}

/// The characteristic polynomial changes sign on
/// `[lower / 2^scale_bits, upper / 2^scale_bits]`, so an eigenvalue lies there.
#[derive(Debug, Clone)]
pub struct PfCertificate {
    pub estimate: f64,
    /// Coefficients of `det(xI - A)`, leading coefficient first.
    pub char_poly: Vec<BigInt>,
    pub lower: BigInt,
    pub upper: BigInt,
    pub scale_bits: u32,
}

impl PfCertificate {
    pub fn bracket(&self) -> (f64, f64) {
        let s = 2f64.powi(self.scale_bits as i32);
        (
            self.lower.to_f64().unwrap_or(f64::NAN) / s,
            self.upper.to_f64().unwrap_or(f64::NAN) / s,
        )
    }
}

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Validates a row-major integer matrix as a stationary dimension group.
pub fn validate_stationary(rows: &[Vec<i64>]) -> Result<StationaryGroup> {
    StationaryGroup::new(to_big(rows))
}

impl StationaryGroup {
    pub fn new(matrix: Vec<Vec<BigInt>>) -> Result<Self> {
        Self::with_radicand(matrix, None)
    }

    /// The product of the elementary matrices `((p_i, 1), (1, 0))`, whose
    /// rotation number is the surgery slope `Per[p_1, ..., p_n]`.
    pub fn from_surgery(p: &[i64]) -> Result<Self> {
        if p.is_empty() || p.iter().any(|&x| x <= 0) {
            return Err(Error::InvalidSurgery(format!("{p:?}")));
        }
        let digits: Vec<BigInt> = p.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_mat2(&convergent_matrix(&digits))
    }

    pub fn from_mat2(m: &Mat2) -> Result<Self> {
        Self::new(m.iter().map(|r| r.to_vec()).collect())
    }

    // `hint` is the square-free kernel of the eigenvalue discriminant when
    // the caller knows it, sparing a factorization of a large integer.
    pub(crate) fn with_radicand(matrix: Vec<Vec<BigInt>>, hint: Option<&BigInt>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::NotStationary(
                "matrix must be square and nonempty".into(),
            ));
        }
        if matrix.iter().flatten().any(|x| x.is_negative()) {
            return Err(Error::NotStationary("entries must be nonnegative".into()));
        }
        let det = bareiss_det(&matrix);
        let det = match det.to_i32() {
            Some(d @ (1 | -1)) => d,
            _ => return Err(Error::NotStationary(format!("determinant {det} is not ±1"))),
        };
        let bound = (n - 1) * (n - 1) + 1;
        let exponent = primitivity_exponent(&matrix, bound).ok_or_else(|| {
            Error::NotStationary(format!(
                "not primitive: no power A^m with m <= {bound} is strictly positive"
            ))
        })?;
        let spectrum = if n == 2 {
            let m: Mat2 = [
                [matrix[0][0].clone(), matrix[0][1].clone()],
                [matrix[1][0].clone(), matrix[1][1].clone()],
            ];
            let [[a, b], [c, d]] = &m;
            let tr = a + d;
            let delta = (a - d) * (a - d) + b * c * 4u32;
            let lambda: QuadraticIrrational = QuadraticNumber::from_surd_hinted(
                tr,
                BigInt::one(),
                BigInt::from(2),
                &delta,
                hint,
            )?
            .try_into()?;
            if lambda.floor() < BigInt::one() {
                return Err(Error::NotStationary(format!(
                    "Perron-Frobenius eigenvalue {lambda} is not above 1"
                )));
            }
            let theta = attracting_fixed_point(&m, hint)?;
            Spectrum::Quadratic { lambda, theta }
        } else {
            Spectrum::Certified(certify(&matrix)?)
        };
        Ok(StationaryGroup {
            matrix,
            det,
            exponent,
            spectrum,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    pub fn det(&self) -> i32 {
        self.det
    }

    /// Smallest `m` with `A^m` strictly positive.
    pub fn primitivity_exponent(&self) -> usize {
        self.exponent
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn as_mat2(&self) -> Result<Mat2> {
        if self.rank() != 2 {
            return Err(Error::UnsupportedRank(self.rank()));
        }
        let m = &self.matrix;
        Ok([
            [m[0][0].clone(), m[0][1].clone()],
            [m[1][0].clone(), m[1][1].clone()],
        ])
    }

    /// Exact Perron-Frobenius eigenvalue (rank 2).
    pub fn pf_eigenvalue(&self) -> Result<&QuadraticIrrational> {
        match &self.spectrum {
            Spectrum::Quadratic { lambda, .. } => Ok(lambda),
            Spectrum::Certified(_) => Err(Error::UnsupportedRank(self.rank())),
        }
    }

    /// Numerical Perron-Frobenius eigenvalue, any rank.
    pub fn pf_estimate(&self) -> f64 {
        match &self.spectrum {
            Spectrum::Quadratic { lambda, .. } => lambda.to_f64(),
            Spectrum::Certified(c) => c.estimate,
        }
    }

    pub fn rotation_number(&self) -> Result<&QuadraticIrrational> {
        match &self.spectrum {
            Spectrum::Quadratic { theta, .. } => Ok(theta),
            Spectrum::Certified(_) => Err(Error::UnsupportedRank(self.rank())),
        }
    }

    /// `A^k` as a group; same rotation number.
    pub fn power(&self, k: u32) -> Result<StationaryGroup> {
        if k == 0 {
            return Err(Error::NotStationary("A^0 is the identity".into()));
        }
        let mut acc = self.matrix.clone();
        for _ in 1..k {
            acc = mat_mul_n(&acc, &self.matrix);
        }
        let hint = self.rotation_number().ok().map(|t| t.d().clone());
        Self::with_radicand(acc, hint.as_ref())
    }
}

/// Rotation number of a rank-2 group.
pub fn rotation_number(g: &StationaryGroup) -> Result<QuadraticIrrational> {
    g.rotation_number().cloned()
}

fn mat_mul_n(x: &[Vec<BigInt>], y: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &x[i][k] * &y[k][j]).sum())
                .collect()
        })
        .collect()
}

fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}

fn primitivity_exponent(m: &[Vec<BigInt>], bound: usize) -> Option<usize> {
    let n = m.len();
    let pattern: Vec<Vec<bool>> = m
        .iter()
        .map(|r| r.iter().map(|x| !x.is_zero()).collect())
        .collect();
    let mut power = pattern.clone();
    for k in 1..=bound {
        if power.iter().flatten().all(|&p| p) {
            return Some(k);
        }
        power = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).any(|l| power[i][l] && pattern[l][j]))
                    .collect()
            })
            .collect();
    }
    None
}

// Faddeev-LeVerrier; every division is exact for integer matrices.
fn char_poly(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mut coeffs = vec![BigInt::one()];
    let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += &coeffs[k - 1];
        }
        let am = mat_mul_n(m, &acc);
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs.push(-trace / BigInt::from(k));
        acc = am;
    }
    coeffs
}

// sign of p(num / 2^bits)
fn poly_sign(coeffs: &[BigInt], num: &BigInt, bits: u32) -> i32 {
    let n = coeffs.len() - 1;
    let mut value = BigInt::zero();
    for (j, c) in coeffs.iter().enumerate() {
        value += (c * num.pow((n - j) as u32)) << (bits as usize * j);
    }
    match value.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

fn certify(m: &[Vec<BigInt>]) -> Result<PfCertificate> {
    const BITS: u32 = 40;
    let n = m.len();
    let af: Vec<Vec<f64>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_f64().unwrap_or(f64::INFINITY))
                .collect()
        })
        .collect();
    let mut v = vec![1.0f64; n];
    let mut estimate = 0.0f64;
    for _ in 0..20_000 {
        let w: Vec<f64> = af
            .iter()
            .map(|r| r.iter().zip(&v).map(|(a, x)| a * x).sum())
            .collect();
        let top = w.iter().cloned().fold(0.0, f64::max);
        if !top.is_finite() || top <= 0.0 {
            return Err(Error::Overflow("power iteration"));
        }
        let next = top / v.iter().cloned().fold(0.0, f64::max);
        let w: Vec<f64> = w.iter().map(|x| x / top).collect();
        let moved = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let done = (next - estimate).abs() <= 1e-15 * next && moved <= 1e-14;
        v = w;
        estimate = next;
        if done {
            break;
        }
    }
    let scaled = estimate * 2f64.powi(BITS as i32);
    if !(scaled < 1e36) {
        return Err(Error::Overflow("Perron-Frobenius bracket"));
    }
    let center = BigInt::from(scaled.round() as i128);
    let char_poly = char_poly(m);
    let mut radius = BigInt::from(((scaled * 1e-9) as i128).max(1));
    for _ in 0..24 {
        let (lower, upper) = (&center - &radius, &center + &radius);
        if poly_sign(&char_poly, &lower, BITS) * poly_sign(&char_poly, &upper, BITS) < 0 {
            if lower <= BigInt::one() << BITS as usize {
                return Err(Error::NotStationary(format!(
                    "Perron-Frobenius eigenvalue {estimate} is not above 1"
                )));
            }
            return Ok(PfCertificate {
                estimate,
                char_poly,
                lower,
                upper,
                scale_bits: BITS,
            });
        }
        radius *= 4u32;
    }
    if estimate <= 1.0 + 1e-9 {
        return Err(Error::NotStationary(format!(
            "Perron-Frobenius eigenvalue {estimate} is not above 1"
        )));
    }
    Err(Error::ConsistencyFault(format!(
        "no sign change of the characteristic polynomial near {estimate}"
    )))
}

/// Factors `g` as a product of `((a_i, 1), (1, 0))`, `a_i >= 1`.
pub fn minkowski_decompose(g: &Mat2) -> Result<Vec<BigInt>> {
    if g.iter().flatten().any(|x| x.is_negative()) {
        return Err(Error::Minkowski("negative entry".into()));
    }
    let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
    if det.abs() != BigInt::one() {
        return Err(Error::Minkowski(format!("determinant {det} is not ±1")));
    }
    let mut m = g.clone();
    let mut digits = Vec::new();
    loop {
        let [[p, p1], [q, q1]] = &m;
        if q.is_zero() {
            return Err(Error::Minkowski(format!(
                "lower-left entry vanishes after {} factors",
                digits.len()
            )));
        }
        let (whole, rem) = p.div_rem(q);
        if rem.is_zero() && q.is_one() && p1.is_one() && q1.is_zero() && whole >= BigInt::one() {
            digits.push(whole);
            return Ok(digits);
        }
        let a0 = if rem.is_zero() { whole - 1u32 } else { whole };
        if a0 < BigInt::one() {
            return Err(Error::Minkowski(format!(
                "factor {} would be {a0}",
                digits.len() + 1
            )));
        }
        let next = [[q.clone(), q1.clone()], [p - &a0 * q, p1 - &a0 * q1]];
        if next.iter().flatten().any(|x| x.is_negative()) {
            return Err(Error::Minkowski(format!(
                "no factor fits at position {}",
                digits.len() + 1
            )));
        }
        digits.push(a0);
        m = next;
    }
}

/// Multiplies out `((a_i, 1), (1, 0))`.
pub fn minkowski_product(digits: &[BigInt]) -> Mat2 {
    convergent_matrix(digits)
}

/// `Z + Z theta` up to homothety: the primitive ideal `[a, (b + sqrt disc)/2]`
/// of the order of discriminant `disc` similar to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeClass {
    pub disc: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    /// Index of the multiplier ring in the maximal order.
    pub conductor: BigInt,
}

pub fn lattice_class(theta: &QuadraticIrrational) -> Result<LatticeClass> {
    let [qa, qb, qc] = theta.minimal_polynomial();
    let disc = &qb * &qb - &qa * &qc * 4u32;
    let b = if theta.b().is_positive() { -qb } else { qb };
    let d = theta.d();
    let field_disc = if d.mod_floor(&BigInt::from(4)) == BigInt::one() {
        d.clone()
    } else {
        d * 4u32
    };
    let conductor = exact_sqrt(&(&disc / &field_disc))
        .filter(|f| f * f * &field_disc == disc)
        .ok_or_else(|| {
            Error::ConsistencyFault(format!("{disc} is not a square multiple of {field_disc}"))
        })?;
    Ok(LatticeClass {
        disc,
        a: qa,
        b,
        conductor,
    })
}

/// Whether two quadratic irrationals span homothetic lattices, decided by
/// ideal classes of the multiplier order.
pub fn lattices_equivalent(x: &QuadraticIrrational, y: &QuadraticIrrational) -> Result<bool> {
    if x.d() != y.d() {
        return Ok(false);
    }
    let (lx, ly) = (lattice_class(x)?, lattice_class(y)?);
    if lx.disc != ly.disc {
        return Ok(false);
    }
    let small = |v: &BigInt| v.to_i64().ok_or(Error::Overflow("lattice class"));
    ClassCycles::same_class(
        small(&lx.disc)?,
        (small(&lx.a)?, small(&lx.b)?),
        (small(&ly.a)?, small(&ly.b)?),
    )
}

/// The ideal of `O_K` associated with a rank-2 group.
#[derive(Debug, Clone)]
pub struct AssociatedIdeal {
    pub group: StationaryGroup,
    pub field: RealQuadraticField,
    pub theta: QuadraticIrrational,
    /// Primitive integral ideal `O_K (q Z + q theta Z)`.
    pub ideal: QuadIdeal,
    pub ideal_class: IdealClass,
    /// Conductor of `Z[lambda]` in `O_K`.
    pub order_conductor: BigInt,
    pub lattice: LatticeClass,
    pub warning: Option<String>,
}

pub fn associated_ideal(g: &StationaryGroup) -> Result<AssociatedIdeal> {
    let theta = g.rotation_number()?.clone();
    let field = field_of(&theta)?;
    let disc = field.discriminant();
    let m = g.as_mat2()?;
    let tr = &m[0][0] + &m[1][1];
    let delta = &tr * &tr - BigInt::from(4 * g.det());
    let order_conductor = exact_sqrt(&(&delta / disc))
        .filter(|f| f * f * disc == delta)
        .ok_or_else(|| {
            Error::ConsistencyFault(format!("{delta} is not a square multiple of {disc}"))
        })?;
    let lattice = lattice_class(&theta)?;
    // (b + sqrt disc')/2 = x0 + y0 omega with omega = (s + sqrt D)/2
    let s = disc.rem_euclid(2);
    let x0: BigInt = (&lattice.b - &lattice.conductor * s) / 2;
    let y0 = lattice.conductor.clone();
    let q = &lattice.a / lattice.a.gcd(&x0).gcd(&y0);
    let scale = |v: &BigInt| {
        (v * &q / &lattice.a)
            .to_i128()
            .ok_or(Error::Overflow("associated ideal"))
    };
    let gens = [
        (q.to_i128().ok_or(Error::Overflow("associated ideal"))?, 0),
        (scale(&x0)?, scale(&y0)?),
    ];
    let ideal = QuadIdeal::generated_by(disc, &gens)?.primitive_part();
    let ideal_class = field.class_of(&ideal)?;
    let warning = (!order_conductor.is_one()).then(|| {
        format!(
            "Z[λ] is the order of conductor {order_conductor} in O_K; the ideal was extended to O_K (lattice order conductor {})",
            lattice.conductor
        )
    });
    Ok(AssociatedIdeal {
        group: g.clone(),
        field,
        theta,
        ideal,
        ideal_class,
        order_conductor,
        lattice,
        warning,
    })
}

/// Equality of the classes attached to two rank-2 groups, the lattice class
/// taken in its multiplier order.
pub fn ideal_classes_equal(g1: &StationaryGroup, g2: &StationaryGroup) -> Result<bool> {
    lattices_equivalent(g1.rotation_number()?, g2.rotation_number()?)
}

/// Morita equivalence of rank-2 groups. The ideal-class answer is checked
/// against modular equivalence of the rotation numbers.
pub fn morita_equivalent(g1: &StationaryGroup, g2: &StationaryGroup) -> Result<bool> {
    let by_ideal = ideal_classes_equal(g1, g2)?;
    let (t1, t2) = (g1.rotation_number()?, g2.rotation_number()?);
    let by_orbit = modular_equivalent(t1, t2);
    if by_ideal != by_orbit {
        return Err(Error::ConsistencyFault(format!(
            "ideal classes say {by_ideal}, rotation numbers {t1} and {t2} say {by_orbit}"
        )));
    }
    Ok(by_ideal)
}

/// One group per ideal class of the field, principal class first: the
/// Minkowski product over one period of a reduced ideal's continued fraction.
pub fn groups_for_field(field: &RealQuadraticField) -> Result<Vec<StationaryGroup>> {
    let disc = BigInt::from(field.discriminant());
    let radicand = BigInt::from(field.radicand());
    field
        .classes()
        .iter()
        .map(|class| {
            let (a, b) = field.cycles().cycles()[class.index()][0];
            let theta: QuadraticIrrational = QuadraticNumber::from_surd_hinted(
                BigInt::from(b),
                BigInt::one(),
                BigInt::from(2 * a),
                &disc,
                Some(&radicand),
            )?
            .try_into()?;
            let cf = cf_expand(&theta);
            if !cf.is_purely_periodic() {
                return Err(Error::ConsistencyFault(format!(
                    "reduced {theta} has preperiod {:?}",
                    cf.preperiod
                )));
            }
            let m = convergent_matrix(&cf.period);
            let group = StationaryGroup::with_radicand(
                m.iter().map(|r| r.to_vec()).collect(),
                Some(&radicand),
            )?;
            if group.rotation_number()? != &theta {
                return Err(Error::ConsistencyFault(format!(
                    "period of {theta} does not reproduce it"
                )));
            }
            Ok(group)
        })
        .collect()
}

/// `U A U^-1` for a unimodular `U`.
pub fn conjugate_by(a: &Mat2, u: &Mat2) -> Result<Mat2> {
    let det = &u[0][0] * &u[1][1] - &u[0][1] * &u[1][0];
    if det.abs() != BigInt::one() {
        return Err(Error::InvalidInput(format!("determinant {det} is not ±1")));
    }
    let inv: Mat2 = [
        [&u[1][1] * &det, -&u[0][1] * &det],
        [-&u[1][0] * &det, &u[0][0] * &det],
    ];
    Ok(mat_mul(&mat_mul(u, a), &inv))
}

/// Matrix from four machine integers, row-major.
pub fn mat2(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
    [[a.into(), b.into()], [c.into(), d.into()]]
}
