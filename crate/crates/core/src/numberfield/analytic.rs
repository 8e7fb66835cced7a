//! Ideal density, the residue of the Dedekind zeta function at `s = 1`, and
//! the imaginary-quadratic volume formula used for comparison.

use num_bigint::BigInt;

use super::RealQuadraticField;
use crate::arith::{is_square_free_u64, kronecker};
use crate::error::{Error, Result};
use crate::precise::Real;

impl RealQuadraticField {
    /// `2 log(epsilon) / sqrt(D)`: the asymptotic number of ideals of norm at
    /// most `t` in any single class, divided by `t`.
    pub fn dirichlet_density(&self) -> Real {
        self.regulator()
            .mul_int(2)
            .div(&Real::sqrt_int(&BigInt::from(self.discriminant())))
    }

    /// `2 h log(epsilon) / sqrt(D)`, the residue at `s = 1`.
    pub fn zeta_residue(&self) -> Real {
        self.dirichlet_density().mul_int(self.class_number() as u64)
    }

    /// `log(epsilon) / sqrt(D)`.
    pub fn log_unit_over_root_disc(&self) -> Real {
        self.regulator()
            .div(&Real::sqrt_int(&BigInt::from(self.discriminant())))
    }

    /// `log(epsilon) / sqrt(d)` with the radicand in place of the discriminant.
    pub fn log_unit_over_root_radicand(&self) -> Real {
        self.regulator()
            .div(&Real::sqrt_int(&BigInt::from(self.radicand())))
    }
}

/// `|D|^{3/2} / (4 pi^2) * zeta_K(2)` for an imaginary quadratic field.
#[derive(Debug, Clone, PartialEq)]
pub struct HumbertVolume {
    pub disc: i64,
    pub terms: u64,
    pub l_value: f64,
    pub zeta_k2: f64,
    pub value: f64,
    /// Bound on `|value - limit|` from the truncated L-series.
    pub error_bound: f64,
}

fn fundamental_negative_disc(d: i64) -> Option<i64> {
    if d >= 0 {
        return None;
    }
    let m = d.unsigned_abs();
    // already a fundamental discriminant
    if d.rem_euclid(4) == 1 && is_square_free_u64(m) {
        return Some(d);
    }
    if d.rem_euclid(4) == 0 {
        let q = d / 4;
        if matches!(q.rem_euclid(4), 2 | 3) && is_square_free_u64(q.unsigned_abs()) {
            return Some(d);
        }
    }
    // a square-free radicand
    if is_square_free_u64(m) {
        return Some(if d.rem_euclid(4) == 1 { d } else { 4 * d });
    }
    None
}

/// Evaluates the volume with `L(2, chi_D)` summed over `terms` terms.
///
/// `d_neg` may be a negative fundamental discriminant (`-3`, `-4`, `-8`, ...)
/// or a negative square-free radicand, which is converted to its field
/// discriminant.
pub fn humbert_volume(d_neg: i64, terms: u64) -> Result<HumbertVolume> {
    let disc = fundamental_negative_disc(d_neg)
        .ok_or_else(|| Error::InvalidInput(format!("{d_neg} is neither a negative fundamental discriminant nor a negative square-free integer")))?;
    let terms = terms.max(1);
    // Kahan-compensated partial sum of chi(n)/n^2
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for n in (1..=terms).rev() {
        let chi = kronecker(disc, n);
        if chi == 0 {
            continue;
        }
        let nf = n as f64;
        let term = chi as f64 / (nf * nf) - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
    let abs_d = disc.unsigned_abs() as f64;
    let prefactor = abs_d.powf(1.5) / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    // Character partial sums are bounded by |D|/2; Abel summation bounds the
    // tail by |D| / (N+1)^2.
    let tail = abs_d / ((terms as f64 + 1.0) * (terms as f64 + 1.0));
    let rounding = 4.0 * f64::EPSILON;
    let zeta_k2 = zeta2 * sum;
    Ok(HumbertVolume {
        disc,
        terms,
        l_value: sum,
        zeta_k2,
        value: prefactor * zeta_k2,
        error_bound: prefactor * zeta2 * (tail + rounding),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn densities() {
        let close = |x: Real, y: f64| (x.to_f64() - y).abs() < 5e-7;
        assert!(close(
            RealQuadraticField::new(5).unwrap().dirichlet_density(),
            0.430409
        ));
        assert!(close(
            RealQuadraticField::new(2).unwrap().dirichlet_density(),
            0.623225
        ));
        assert!(close(
            RealQuadraticField::new(10).unwrap().dirichlet_density(),
            0.575043
        ));
    }

    #[test]
    fn residues() {
        let k5 = RealQuadraticField::new(5).unwrap();
        assert_eq!(k5.zeta_residue(), k5.dirichlet_density());
        let k10 = RealQuadraticField::new(10).unwrap();
        assert!((k10.zeta_residue().to_f64() - 1.150087).abs() < 5e-7);
    }

    #[test]
    fn humbert_examples() {
        let v = humbert_volume(-3, 1_000_000).unwrap();
        assert!((v.value - 0.169157).abs() < 5e-7, "{v:?}");
        let v = humbert_volume(-4, 1_000_000).unwrap();
        assert!((v.value - 0.305322).abs() < 5e-7, "{v:?}");
        assert_eq!(humbert_volume(-1, 10).unwrap().disc, -4);
        assert_eq!(humbert_volume(-5, 10).unwrap().disc, -20);
        assert!(humbert_volume(3, 10).is_err());
        assert!(humbert_volume(-12, 10).is_err());
    }

    #[test]
    fn doubling_terms_stays_within_bound() {
        for d in [-3, -4, -7, -8, -15, -20] {
            for n in [100, 1000, 10_000] {
                let a = humbert_volume(d, n).unwrap();
                let b = humbert_volume(d, 2 * n).unwrap();
                assert!(
                    (a.value - b.value).abs() <= a.error_bound,
                    "D = {d}, N = {n}"
                );
            }
        }
    }
}
