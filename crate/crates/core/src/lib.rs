//! Arithmetic pipeline from Dehn-surgery coefficients to volume predictions.
//!
//! Surgery coefficients `(p_1, ..., p_n)` define the purely periodic continued
//! fraction `theta = Per[p_1, ..., p_n]`, a real quadratic irrational. Its
//! field `K = Q(sqrt d)` supplies the fundamental unit, discriminant and class
//! group; stationary dimension groups are classified by ideal classes of `K`;
//! and the volume of the surgered manifold is modelled as
//! `C(M) log(epsilon) / sqrt(D)`.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod arith;
pub mod commensurability;
pub mod dimgroup;
pub mod error;
pub mod numberfield;
pub mod precise;
pub mod quadratic;
pub mod volume;

pub use commensurability::{
    covering_degree, divide, gap_bounds_check, next_prime_manifold, prime_decompose_manifold,
    telescoping_check, CommensurabilityClass, GapBounds, ManifoldIdeal,
};
pub use dimgroup::{
    associated_ideal, groups_for_field, minkowski_decompose, morita_equivalent, rotation_number,
    validate_stationary, AssociatedIdeal, StationaryGroup,
};
pub use error::{Error, Result};
pub use numberfield::{
    factor_ideal, field_of, fundamental_unit, humbert_volume, prime_splitting, IdealClass,
    QuadIdeal, RealQuadraticField, Splitting,
};
pub use precise::Real;
pub use quadratic::{
    cf_expand, cf_value, modular_equivalent, surgery_slope, ContinuedFraction, QuadraticIrrational,
    QuadraticNumber,
};
pub use volume::{
    calibrate_c, calibrate_c_in, comparison_report, fiber_count, predict_volume, volume_bounds,
    Convention, VolumeObservation, VolumePrediction,
};
