//! Lévy triplets of the supported process families.

mod charexp;
mod drift;
mod measure;
mod process;

pub use charexp::char_exponent;
pub use drift::{drift_for, DriftConvention};
pub use measure::{Density, LevyMeasure, Side, SlowlyVarying, TailDecay};
pub use process::{catalog_examples, Family, FamilyTag, ProcessSpec, SpecDocument};

/// Blumenthal–Getoor index of a catalog measure.
///
/// Every constructible measure carries its near-zero structure, so this is
/// read off rather than estimated.
pub fn bg_index(measure: &LevyMeasure) -> f64 {
    measure.index()
}

/// Whether `∫_{|x|>1} |x|^p dν < ∞`.
pub fn moment_exists(measure: &LevyMeasure, p: f64) -> crate::Result<bool> {
    measure.moment_exists(p)
}
