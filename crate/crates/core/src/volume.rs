//! The volume model `Vol = C log(epsilon) / sqrt(D)`: predictions from
//! surgery coefficients, bounds from gap constants, calibration of `C`
//! against observed volumes, and the fiber count `h`.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::commensurability::GapBounds;
use crate::dimgroup::{groups_for_field, morita_equivalent};
use crate::error::{Error, Result};
use crate::numberfield::{field_of, humbert_volume, HumbertVolume, RealQuadraticField};
use crate::precise::Real;
use crate::quadratic::{surgery_slope, QuadraticIrrational};

/// Terms of the L-series used in comparison reports.
pub const HUMBERT_TERMS: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct VolumePrediction {
    pub surgery: Vec<i64>,
    pub theta: QuadraticIrrational,
    pub field: RealQuadraticField,
    pub c: Real,
    /// `C log(epsilon) / sqrt(D)`.
    pub value: Real,
    /// `C log(epsilon) / sqrt(d)`.
    pub value_d: Real,
    /// `C` times the residue of the Dedekind zeta function at 1.
    pub residue_form: Real,
}

pub fn predict_volume(p: &[i64], c: &Real) -> Result<VolumePrediction> {
    if !c.is_positive() {
        return Err(Error::InvalidInput(format!("C = {c} is not positive")));
    }
    let theta = surgery_slope(p)?;
    let field = field_of(&theta)?;
    Ok(VolumePrediction {
        surgery: p.to_vec(),
        value: c.mul(&field.log_unit_over_root_disc()),
        value_d: c.mul(&field.log_unit_over_root_radicand()),
        residue_form: c.mul(&field.zeta_residue()),
        c: c.clone(),
        theta,
        field,
    })
}

/// `[k log(epsilon)/sqrt(D), K log(epsilon)/sqrt(D)]`.
pub fn volume_bounds(field: &RealQuadraticField, bounds: &GapBounds) -> (Real, Real) {
    let x = field.log_unit_over_root_disc();
    (
        Real::from_f64(bounds.lower()).mul(&x),
        Real::from_f64(bounds.upper()).mul(&x),
    )
}

/// Which square root normalizes `log(epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `sqrt(D)`, the field discriminant.
    #[default]
    Discriminant,
    /// `sqrt(d)`, the square-free radicand.
    Radicand,
}

impl VolumePrediction {
    pub fn value_in(&self, convention: Convention) -> &Real {
        match convention {
            Convention::Discriminant => &self.value,
            Convention::Radicand => &self.value_d,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeObservation {
    pub surgery: Vec<i64>,
    pub measured_volume: f64,
    pub source: String,
}

impl VolumeObservation {
    pub fn new(surgery: Vec<i64>, measured_volume: f64, source: impl Into<String>) -> Result<Self> {
        if !(measured_volume > 0.0 && measured_volume.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "measured volume {measured_volume} is not positive"
            )));
        }
        surgery_slope(&surgery)?;
        Ok(VolumeObservation {
            surgery,
            measured_volume,
            source: source.into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub c: f64,
    /// `log(epsilon)/sqrt(D)` per observation.
    pub regressors: Vec<f64>,
    /// `measured - C x` per observation.
    pub residuals: Vec<f64>,
    /// `measured / x` per observation.
    pub pointwise: Vec<f64>,
    /// `(max - min) / C` over the pointwise estimates.
    pub relative_spread: f64,
}

/// Least squares through the origin for `measured = C x`.
pub fn calibrate_c(observations: &[VolumeObservation]) -> Result<Calibration> {
    calibrate_c_in(observations, Convention::Discriminant)
}

pub fn calibrate_c_in(
    observations: &[VolumeObservation],
    convention: Convention,
) -> Result<Calibration> {
    if observations.is_empty() {
        return Err(Error::EmptyObservations);
    }
    let mut fields: HashMap<BigInt, f64> = HashMap::new();
    let mut regressors = Vec::with_capacity(observations.len());
    for obs in observations {
        let theta = surgery_slope(&obs.surgery)?;
        let x = match fields.get(theta.d()) {
            Some(&x) => x,
            None => {
                let field = field_of(&theta)?;
                let x = match convention {
                    Convention::Discriminant => field.log_unit_over_root_disc(),
                    Convention::Radicand => field.log_unit_over_root_radicand(),
                }
                .to_f64();
                fields.insert(theta.d().clone(), x);
                x
            }
        };
        regressors.push(x);
    }
    let ys: Vec<f64> = observations.iter().map(|o| o.measured_volume).collect();
    let sxy: f64 = regressors.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = regressors.iter().map(|x| x * x).sum();
    let c = sxy / sxx;
    let residuals = regressors.iter().zip(&ys).map(|(x, y)| y - c * x).collect();
    let pointwise: Vec<f64> = regressors.iter().zip(&ys).map(|(x, y)| y / x).collect();
    let hi = pointwise.iter().cloned().fold(f64::MIN, f64::max);
    let lo = pointwise.iter().cloned().fold(f64::MAX, f64::min);
    Ok(Calibration {
        c,
        regressors,
        residuals,
        pointwise,
        relative_spread: (hi - lo) / c,
    })
}

/// Number of surgered manifolds sharing one volume: `h`, confirmed by the
/// pairwise inequivalent groups of the field.
pub fn fiber_count(field: &RealQuadraticField) -> Result<usize> {
    let h = field.class_number();
    let groups = groups_for_field(field)?;
    if groups.len() != h {
        return Err(Error::ConsistencyFault(format!(
            "{} groups for class number {h}",
            groups.len()
        )));
    }
    for (i, g) in groups.iter().enumerate() {
        for other in &groups[i + 1..] {
            if morita_equivalent(g, other)? {
                return Err(Error::ConsistencyFault(format!(
                    "groups for distinct classes of {field:?} are equivalent"
                )));
            }
        }
    }
    Ok(h)
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub field: RealQuadraticField,
    pub log_unit_over_root_disc: Real,
    pub log_unit_over_root_radicand: Real,
    pub density: Real,
    pub residue: Real,
    /// `h`, exposed as a quotient of computed values.
    pub residue_over_density: Real,
    pub humbert: Option<HumbertVolume>,
}

/// Residue and density side by side, with the imaginary-quadratic volume
/// of `paired` when given.
pub fn comparison_report(
    field: &RealQuadraticField,
    paired: Option<i64>,
) -> Result<ComparisonReport> {
    let density = field.dirichlet_density();
    let residue = field.zeta_residue();
    Ok(ComparisonReport {
        field: field.clone(),
        log_unit_over_root_disc: field.log_unit_over_root_disc(),
        log_unit_over_root_radicand: field.log_unit_over_root_radicand(),
        residue_over_density: residue.div(&density),
        density,
        residue,
        humbert: paired
            .map(|d| humbert_volume(d, HUMBERT_TERMS))
            .transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: &str) -> Real {
        x.parse().unwrap()
    }

    #[test]
    fn predictions() {
        let p = predict_volume(&[1], &c("1")).unwrap();
        assert_eq!(p.field.radicand(), 5);
        assert!((p.value.to_f64() - 0.215204).abs() < 5e-7);
        let p2 = predict_volume(&[2], &c("1")).unwrap();
        assert!((p2.value.to_f64() - 0.311613).abs() < 5e-7);
        assert!((p2.value_d.to_f64() - (1.0 + 2f64.sqrt()).ln() / 2f64.sqrt()).abs() < 1e-12);
        let double = predict_volume(&[1], &c("2")).unwrap();
        assert_eq!(double.value, p.value.mul_int(2));
        assert!(predict_volume(&[1], &c("0")).is_err());
        assert!(predict_volume(&[], &c("1")).is_err());
    }

    #[test]
    fn bounds() {
        let k5 = RealQuadraticField::new(5).unwrap();
        let (lo, hi) = volume_bounds(&k5, &GapBounds::new(1.0, 2.0).unwrap());
        assert!((lo.to_f64() - 0.215204).abs() < 5e-7);
        assert!((hi.to_f64() - 0.430409).abs() < 5e-7);
        let k10 = RealQuadraticField::new(10).unwrap();
        let (lo, hi) = volume_bounds(&k10, &GapBounds::new(1.0, 1.0).unwrap());
        assert_eq!(lo, hi);
        assert!((lo.to_f64() - 0.2875216).abs() < 5e-7);
        let (lo, _) = volume_bounds(&k5, &GapBounds::new(2.5, 2.5).unwrap());
        assert_eq!(
            lo,
            predict_volume(&[1], &Real::from_f64(2.5)).unwrap().value
        );
    }

    #[test]
    fn calibration() {
        let families: [&[i64]; 5] = [&[1], &[2], &[1, 2], &[3], &[1, 1, 4]];
        let obs: Vec<VolumeObservation> = families
            .iter()
            .map(|p| {
                let v = predict_volume(p, &c("2.5")).unwrap().value.to_f64();
                VolumeObservation::new(p.to_vec(), v, "synthetic").unwrap()
            })
            .collect();
        let fit = calibrate_c(&obs).unwrap();
        assert!((fit.c - 2.5).abs() < 1e-9);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
        assert!(fit.relative_spread < 1e-12);
        let by_d = calibrate_c_in(&obs[..1], Convention::Radicand).unwrap();
        assert!((by_d.c - 2.5).abs() < 1e-9);
        let silver = VolumeObservation::new(vec![2], obs[1].measured_volume, "x").unwrap();
        let by_d = calibrate_c_in(&[silver], Convention::Radicand).unwrap();
        assert!((by_d.c - 1.25).abs() < 1e-9);
        let single = calibrate_c(&obs[..1]).unwrap();
        assert!((single.c - obs[0].measured_volume / single.regressors[0]).abs() < 1e-15);
        assert_eq!(calibrate_c(&[]), Err(Error::EmptyObservations));
        assert!(VolumeObservation::new(vec![1], -1.0, "x").is_err());
        assert!(VolumeObservation::new(vec![0], 1.0, "x").is_err());
    }

    #[test]
    fn fibers_and_comparison() {
        for (d, h) in [(5, 1), (10, 2), (79, 3)] {
            assert_eq!(
                fiber_count(&RealQuadraticField::new(d).unwrap()).unwrap(),
                h
            );
        }
        let r = comparison_report(&RealQuadraticField::new(10).unwrap(), Some(-3)).unwrap();
        assert!((r.residue_over_density.to_f64() - 2.0).abs() < 1e-30);
        assert!((r.humbert.unwrap().value - 0.169157).abs() < 1e-6);
        let r = comparison_report(&RealQuadraticField::new(5).unwrap(), None).unwrap();
        assert!((r.residue_over_density.to_f64() - 1.0).abs() < 1e-30);
        assert!(r.humbert.is_none());
    }
}
