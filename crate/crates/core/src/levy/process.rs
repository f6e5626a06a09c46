//! The process catalog: validated parameter sets, their Lévy triplets
//! `(a, 0, ν)` under truncation at 1, and the JSON document form.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::measure::{Density, LevyMeasure, SlowlyVarying};
use crate::error::{Error, Result};
use crate::specfun;

/// Family tag as written in catalog documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    Gamma,
    Stable,
    TemperedStable,
    InverseGaussian,
    #[serde(rename = "NIG")]
    Nig,
    Meixner,
    Hyperbolic,
    TruncatedPowerLaw,
}

/// A process family together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Standard Gamma subordinator, `X_t ~ Γ(t, 1)`.
    Gamma,
    /// Lévy density `C₁x^{-α-1}` on the right, `C₂|x|^{-α-1}` on the left.
    Stable {
        alpha: f64,
        c1: f64,
        c2: f64,
    },
    /// Subordinator with density `2^α α/Γ(1-α) x^{-α-1} exp(-γ^{1/α} x / 2)`.
    TemperedStable {
        alpha: f64,
        gamma: f64,
    },
    /// The tempered stable subordinator with `α = 1/2`.
    InverseGaussian {
        gamma: f64,
    },
    Nig {
        alpha: f64,
        gamma: f64,
        delta: f64,
    },
    Meixner {
        gamma: f64,
        delta: f64,
    },
    /// Metadata only: no density or sampler is available.
    Hyperbolic {
        gamma: f64,
        delta: f64,
    },
    /// Synthetic `C_± |x|^{-α-1}(-ln|x|)^k` on `0 < |x| ≤ c`, used to exercise
    /// the slowly varying branches of the rate predictor.
    TruncatedPowerLaw {
        alpha: f64,
        c1: f64,
        c2: f64,
        cutoff: f64,
        log_power: f64,
    },
}

impl Family {
    pub fn tag(&self) -> FamilyTag {
        match self {
            Family::Gamma => FamilyTag::Gamma,
            Family::Stable { .. } => FamilyTag::Stable,
            Family::TemperedStable { .. } => FamilyTag::TemperedStable,
            Family::InverseGaussian { .. } => FamilyTag::InverseGaussian,
            Family::Nig { .. } => FamilyTag::Nig,
            Family::Meixner { .. } => FamilyTag::Meixner,
            Family::Hyperbolic { .. } => FamilyTag::Hyperbolic,
            Family::TruncatedPowerLaw { .. } => FamilyTag::TruncatedPowerLaw,
        }
    }

    fn params(&self) -> BTreeMap<String, f64> {
        let pairs: Vec<(&str, f64)> = match *self {
            Family::Gamma => vec![],
            Family::Stable { alpha, c1, c2 } => vec![("alpha", alpha), ("C1", c1), ("C2", c2)],
            Family::TemperedStable { alpha, gamma } => vec![("alpha", alpha), ("gamma", gamma)],
            Family::InverseGaussian { gamma } => vec![("gamma", gamma)],
            Family::Nig { alpha, gamma, delta } => {
                vec![("alpha", alpha), ("gamma", gamma), ("delta", delta)]
            }
            Family::Meixner { gamma, delta } | Family::Hyperbolic { gamma, delta } => {
                vec![("gamma", gamma), ("delta", delta)]
            }
            Family::TruncatedPowerLaw {
                alpha,
                c1,
                c2,
                cutoff,
                log_power,
            } => vec![
                ("alpha", alpha),
                ("C1", c1),
                ("C2", c2),
                ("c", cutoff),
                ("k", log_power),
            ],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

/// A catalog entry: family, drift `a` (truncation at 1), Lévy measure and index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecDocument", into = "SpecDocument")]
pub struct ProcessSpec {
    family: Family,
    drift: f64,
    default_drift: f64,
    measure: LevyMeasure,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

fn finite(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        check(v.is_finite(), || format!("{name} must be finite, got {v}"))?;
    }
    Ok(())
}

impl ProcessSpec {
    fn build(family: Family, measure: LevyMeasure) -> Result<Self> {
        let mut spec = ProcessSpec {
            family,
            drift: 0.0,
            default_drift: 0.0,
            measure,
        };
        spec.default_drift = spec.natural_drift()?;
        spec.drift = spec.default_drift;
        Ok(spec)
    }

    pub fn gamma() -> Self {
        let measure = LevyMeasure::new(Density::GammaProcess, 0.0, 1.0, false, SlowlyVarying::Bounded);
        ProcessSpec {
            family: Family::Gamma,
            drift: 1.0 - (-1.0f64).exp(),
            default_drift: 1.0 - (-1.0f64).exp(),
            measure,
        }
    }

    pub fn stable(alpha: f64, c1: f64, c2: f64) -> Result<Self> {
        finite(&[("alpha", alpha), ("C1", c1), ("C2", c2)])?;
        check(alpha > 0.0 && alpha < 2.0, || {
            format!("Stable requires alpha in (0,2), got {alpha}")
        })?;
        check(c1 >= 0.0 && c2 >= 0.0 && c1 + c2 > 0.0, || {
            format!("Stable requires C1, C2 >= 0 and C1 + C2 > 0, got ({c1}, {c2})")
        })?;
        let measure = LevyMeasure::new(
            Density::Stable {
                alpha,
                c_pos: c1,
                c_neg: c2,
            },
            alpha,
            1.0,
            c1 == c2,
            SlowlyVarying::Bounded,
        );
        Self::build(Family::Stable { alpha, c1, c2 }, measure)
    }

    /// Symmetric Cauchy process: `Stable(α = 1, C₁ = C₂ = c)`.
    pub fn cauchy(c: f64) -> Result<Self> {
        Self::stable(1.0, c, c)
    }

    pub fn tempered_stable(alpha: f64, gamma: f64) -> Result<Self> {
        finite(&[("alpha", alpha), ("gamma", gamma)])?;
        check(alpha > 0.0 && alpha < 1.0, || {
            format!("TemperedStable requires alpha in (0,1), got {alpha}")
        })?;
        check(gamma > 0.0, || {
            format!("TemperedStable requires gamma > 0, got {gamma}")
        })?;
        Self::build(Family::TemperedStable { alpha, gamma }, tempered_measure(alpha, gamma)?)
    }

    pub fn inverse_gaussian(gamma: f64) -> Result<Self> {
        finite(&[("gamma", gamma)])?;
        check(gamma > 0.0, || {
            format!("InverseGaussian requires gamma > 0, got {gamma}")
        })?;
        Self::build(Family::InverseGaussian { gamma }, tempered_measure(0.5, gamma)?)
    }

    pub fn nig(alpha: f64, gamma: f64, delta: f64) -> Result<Self> {
        finite(&[("alpha", alpha), ("gamma", gamma), ("delta", delta)])?;
        check(alpha > 0.0, || format!("NIG requires alpha > 0, got {alpha}"))?;
        check(gamma.abs() < alpha, || {
            format!("NIG requires gamma in (-alpha, alpha), got {gamma}")
        })?;
        check(delta > 0.0, || format!("NIG requires delta > 0, got {delta}"))?;
        let measure = LevyMeasure::new(
            Density::Nig { alpha, gamma, delta },
            1.0,
            1.0,
            gamma == 0.0,
            SlowlyVarying::Bounded,
        );
        Self::build(Family::Nig { alpha, gamma, delta }, measure)
    }

    pub fn meixner(gamma: f64, delta: f64) -> Result<Self> {
        finite(&[("gamma", gamma), ("delta", delta)])?;
        check(gamma.abs() < PI, || {
            format!("Meixner requires gamma in (-pi, pi), got {gamma}")
        })?;
        check(delta > 0.0, || format!("Meixner requires delta > 0, got {delta}"))?;
        let measure = LevyMeasure::new(
            Density::Meixner { gamma, delta },
            1.0,
            1.0,
            gamma == 0.0,
            SlowlyVarying::Bounded,
        );
        Self::build(Family::Meixner { gamma, delta }, measure)
    }

    pub fn hyperbolic(gamma: f64, delta: f64) -> Result<Self> {
        finite(&[("gamma", gamma), ("delta", delta)])?;
        check(gamma > 0.0 && delta > 0.0, || {
            format!("Hyperbolic requires gamma, delta > 0, got ({gamma}, {delta})")
        })?;
        let measure = LevyMeasure::new(Density::Hyperbolic, 1.0, 1.0, true, SlowlyVarying::Bounded);
        Ok(ProcessSpec {
            family: Family::Hyperbolic { gamma, delta },
            drift: 0.0,
            default_drift: 0.0,
            measure,
        })
    }

    pub fn truncated_power_law(alpha: f64, c1: f64, c2: f64, cutoff: f64, log_power: f64) -> Result<Self> {
        finite(&[
            ("alpha", alpha),
            ("C1", c1),
            ("C2", c2),
            ("c", cutoff),
            ("k", log_power),
        ])?;
        check(alpha > 0.0 && alpha <= 2.0, || {
            format!("TruncatedPowerLaw requires alpha in (0,2], got {alpha}")
        })?;
        check(c1 >= 0.0 && c2 >= 0.0 && c1 + c2 > 0.0, || {
            format!("TruncatedPowerLaw requires C1, C2 >= 0 and C1 + C2 > 0, got ({c1}, {c2})")
        })?;
        check(cutoff > 0.0 && cutoff <= 1.0, || {
            format!("cutoff c must lie in (0,1], got {cutoff}")
        })?;
        check(log_power >= 0.0 || cutoff < 1.0, || {
            "a negative log power needs c < 1 so that l stays finite on (0, c]".to_string()
        })?;
        check(alpha < 2.0 || log_power < -1.0, || {
            "alpha = 2 needs log power k < -1 for ∫ x² dν to converge".to_string()
        })?;
        let slowly_varying = if log_power == 0.0 {
            SlowlyVarying::Bounded
        } else {
            SlowlyVarying::LogPower { power: log_power }
        };
        let measure = LevyMeasure::new(
            Density::TruncatedPowerLaw {
                beta: alpha,
                c_pos: c1,
                c_neg: c2,
                cutoff,
                log_power,
            },
            alpha,
            cutoff,
            c1 == c2,
            slowly_varying,
        );
        Self::build(
            Family::TruncatedPowerLaw {
                alpha,
                c1,
                c2,
                cutoff,
                log_power,
            },
            measure,
        )
    }

    /// Replaces the drift `a` (truncation at 1).
    pub fn with_drift(mut self, drift: f64) -> Result<Self> {
        check(drift.is_finite(), || format!("drift must be finite, got {drift}"))?;
        self.drift = drift;
        Ok(self)
    }

    /// Drift a catalog entry carries unless overridden:
    /// the value that makes stable laws strictly stable, the one that makes
    /// finite-variation subordinators driftless, the one with no location
    /// shift for NIG and Meixner.
    fn natural_drift(&self) -> Result<f64> {
        let m = &self.measure;
        Ok(match self.family {
            Family::Gamma => 1.0 - (-1.0f64).exp(),
            Family::Stable { alpha, c1, c2 } => {
                if alpha == 1.0 {
                    0.0
                } else {
                    (c1 - c2) / (1.0 - alpha)
                }
            }
            Family::TemperedStable { .. } | Family::InverseGaussian { .. } | Family::Nig { .. } => {
                m.first_moment(0.0, 1.0)?
            }
            Family::Meixner { gamma, delta } => delta * (0.5 * gamma).tan() - m.first_moment(1.0, f64::INFINITY)?,
            Family::Hyperbolic { .. } => 0.0,
            Family::TruncatedPowerLaw { alpha, c1, c2, .. } => {
                if c1 == c2 || alpha < 1.0 {
                    m.first_moment(0.0, 1.0)?
                } else {
                    0.0
                }
            }
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn tag(&self) -> FamilyTag {
        self.family.tag()
    }

    /// Drift `a` in the Lévy–Khintchine triplet with truncation at 1.
    pub fn drift(&self) -> f64 {
        self.drift
    }

    /// Drift added on top of the catalog's natural choice.
    pub(crate) fn drift_offset(&self) -> f64 {
        self.drift - self.default_drift
    }

    pub fn measure(&self) -> &LevyMeasure {
        &self.measure
    }

    pub fn bg_index(&self) -> f64 {
        self.measure.index()
    }

    pub fn is_symmetric(&self) -> bool {
        self.measure.is_symmetric()
    }

    /// Nondecreasing paths: one-sided measure of finite variation and no
    /// negative drift after removing the small-jump compensator.
    pub fn is_subordinator(&self) -> bool {
        use super::measure::Side;
        if self.measure.has_side(Side::Negative) || !self.measure.has_density() {
            return false;
        }
        if self.measure.index() >= 1.0 {
            return false;
        }
        match self.measure.first_moment(0.0, 1.0) {
            Ok(m) => self.drift - m >= -1e-12,
            Err(_) => false,
        }
    }

    /// `X_{λt} = λ^{1/α} X_t` in law. Only meaningful for the stable family.
    pub fn is_strictly_stable(&self) -> bool {
        match self.family {
            Family::Stable { alpha, c1, c2 } => {
                if alpha == 1.0 {
                    c1 == c2
                } else {
                    self.drift == self.default_drift
                }
            }
            _ => false,
        }
    }

    pub fn to_document(&self) -> SpecDocument {
        SpecDocument {
            family: self.tag(),
            params: self.family.params(),
            beta: Some(self.bg_index()),
            symmetric: Some(self.is_symmetric()),
            drift_a: Some(self.drift),
        }
    }

    pub fn from_document(doc: &SpecDocument) -> Result<Self> {
        let get = |name: &str| -> Result<f64> {
            doc.params
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidParameter(format!("{:?} requires parameter '{name}'", doc.family)))
        };
        let allowed: &[&str] = match doc.family {
            FamilyTag::Gamma => &[],
            FamilyTag::Stable => &["alpha", "C1", "C2"],
            FamilyTag::TemperedStable => &["alpha", "gamma"],
            FamilyTag::InverseGaussian => &["gamma"],
            FamilyTag::Nig => &["alpha", "gamma", "delta"],
            FamilyTag::Meixner | FamilyTag::Hyperbolic => &["gamma", "delta"],
            FamilyTag::TruncatedPowerLaw => &["alpha", "C1", "C2", "c", "k"],
        };
        if let Some(extra) = doc.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidParameter(format!(
                "unknown parameter '{extra}' for {:?}",
                doc.family
            )));
        }
        let spec = match doc.family {
            FamilyTag::Gamma => ProcessSpec::gamma(),
            FamilyTag::Stable => ProcessSpec::stable(get("alpha")?, get("C1")?, get("C2")?)?,
            FamilyTag::TemperedStable => ProcessSpec::tempered_stable(get("alpha")?, get("gamma")?)?,
            FamilyTag::InverseGaussian => ProcessSpec::inverse_gaussian(get("gamma")?)?,
            FamilyTag::Nig => ProcessSpec::nig(get("alpha")?, get("gamma")?, get("delta")?)?,
            FamilyTag::Meixner => ProcessSpec::meixner(get("gamma")?, get("delta")?)?,
            FamilyTag::Hyperbolic => ProcessSpec::hyperbolic(get("gamma")?, get("delta")?)?,
            FamilyTag::TruncatedPowerLaw => ProcessSpec::truncated_power_law(
                get("alpha")?,
                get("C1")?,
                get("C2")?,
                doc.params.get("c").copied().unwrap_or(1.0),
                doc.params.get("k").copied().unwrap_or(0.0),
            )?,
        };
        if let Some(beta) = doc.beta {
            check((beta - spec.bg_index()).abs() < 1e-12, || {
                format!(
                    "declared beta {beta} does not match the family value {}",
                    spec.bg_index()
                )
            })?;
        }
        if let Some(symmetric) = doc.symmetric {
            check(symmetric == spec.is_symmetric(), || {
                format!("declared symmetric = {symmetric} does not match the parameters")
            })?;
        }
        match doc.drift_a {
            Some(a) => spec.with_drift(a),
            None => Ok(spec),
        }
    }
}

fn tempered_measure(alpha: f64, gamma: f64) -> Result<LevyMeasure> {
    let scale = 2f64.powf(alpha) * alpha / specfun::gamma_fn(1.0 - alpha)?;
    let rate = 0.5 * gamma.powf(1.0 / alpha);
    Ok(LevyMeasure::new(
        Density::TemperedStable { alpha, scale, rate },
        alpha,
        1.0,
        false,
        SlowlyVarying::Bounded,
    ))
}

/// Serialized catalog entry: `{family, params, beta, symmetric, drift_a}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub family: FamilyTag,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_a: Option<f64>,
}

impl TryFrom<SpecDocument> for ProcessSpec {
    type Error = Error;

    fn try_from(doc: SpecDocument) -> Result<Self> {
        ProcessSpec::from_document(&doc)
    }
}

impl From<ProcessSpec> for SpecDocument {
    fn from(spec: ProcessSpec) -> Self {
        spec.to_document()
    }
}

/// One representative parameterisation of every catalog family.
pub fn catalog_examples() -> Vec<ProcessSpec> {
    let entries: Vec<Result<ProcessSpec>> = vec![
        Ok(ProcessSpec::gamma()),
        ProcessSpec::stable(1.5, 1.0, 1.0),
        ProcessSpec::cauchy(1.0),
        ProcessSpec::stable(0.5, 1.0, 1.0),
        ProcessSpec::stable(1.2, 1.0, 0.4),
        ProcessSpec::stable(0.7, 0.5, 1.0),
        ProcessSpec::tempered_stable(0.3, 1.0),
        ProcessSpec::inverse_gaussian(1.0),
        ProcessSpec::nig(1.0, 0.0, 1.0),
        ProcessSpec::nig(2.0, 0.8, 0.5),
        ProcessSpec::meixner(0.0, 1.0),
        ProcessSpec::meixner(0.6, 0.8),
        ProcessSpec::hyperbolic(1.0, 1.0),
    ];
    entries
        .into_iter()
        .map(|e| e.expect("catalog example parameters are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_ranges_enforced() {
        assert!(ProcessSpec::stable(2.0, 1.0, 1.0).is_err());
        assert!(ProcessSpec::stable(1.0, 0.0, 0.0).is_err());
        assert!(ProcessSpec::stable(1.0, -1.0, 2.0).is_err());
        assert!(ProcessSpec::tempered_stable(1.0, 1.0).is_err());
        assert!(ProcessSpec::tempered_stable(0.5, 0.0).is_err());
        assert!(ProcessSpec::nig(1.0, 1.0, 1.0).is_err());
        assert!(ProcessSpec::nig(1.0, 0.0, 0.0).is_err());
        assert!(ProcessSpec::meixner(3.2, 1.0).is_err());
        assert!(ProcessSpec::meixner(0.0, -1.0).is_err());
        assert!(ProcessSpec::truncated_power_law(2.0, 1.0, 1.0, 0.5, 0.0).is_err());
        assert!(ProcessSpec::truncated_power_law(1.0, 1.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn catalog_indices() {
        let expect = |spec: ProcessSpec, beta: f64| assert_eq!(spec.bg_index(), beta, "{:?}", spec.family());
        expect(ProcessSpec::gamma(), 0.0);
        expect(ProcessSpec::stable(1.5, 1.0, 2.0).unwrap(), 1.5);
        expect(ProcessSpec::tempered_stable(0.3, 2.0).unwrap(), 0.3);
        expect(ProcessSpec::inverse_gaussian(2.0).unwrap(), 0.5);
        expect(ProcessSpec::nig(3.0, -1.0, 0.2).unwrap(), 1.0);
        expect(ProcessSpec::meixner(1.0, 0.2).unwrap(), 1.0);
        expect(ProcessSpec::hyperbolic(1.0, 0.2).unwrap(), 1.0);
    }

    #[test]
    fn symmetry_flags() {
        assert!(ProcessSpec::stable(1.3, 2.0, 2.0).unwrap().is_symmetric());
        assert!(!ProcessSpec::stable(1.3, 2.0, 1.0).unwrap().is_symmetric());
        assert!(ProcessSpec::nig(1.0, 0.0, 1.0).unwrap().is_symmetric());
        assert!(!ProcessSpec::nig(1.0, 0.1, 1.0).unwrap().is_symmetric());
        assert!(ProcessSpec::meixner(0.0, 1.0).unwrap().is_symmetric());
        assert!(ProcessSpec::hyperbolic(1.0, 1.0).unwrap().is_symmetric());
        assert!(!ProcessSpec::gamma().is_symmetric());
    }

    #[test]
    fn gamma_drift_is_small_jump_mean() {
        let spec = ProcessSpec::gamma();
        let m = spec.measure().first_moment(0.0, 1.0).unwrap();
        assert!((spec.drift() - m).abs() < 1e-9);
        assert!(spec.is_subordinator());
    }

    #[test]
    fn nig_drift_matches_sinh_integral() {
        use crate::quadrature::{integrate, Tolerance};
        let (alpha, gamma, delta) = (1.5, 0.7, 1.2);
        let spec = ProcessSpec::nig(alpha, gamma, delta).unwrap();
        let direct = integrate(
            |x| {
                (gamma * x).sinh()
                    * crate::specfun::bessel_k(1.0, alpha * x, crate::specfun::DEFAULT_TOL)
                        .unwrap()
                        .value
            },
            0.0,
            1.0,
            Tolerance::new(1e-13, 1e-11),
        )
        .unwrap()
        .value
            * 2.0
            * delta
            * alpha
            / PI;
        assert!((spec.drift() - direct).abs() < 1e-9, "{} vs {direct}", spec.drift());
    }

    #[test]
    fn strict_stability() {
        assert!(ProcessSpec::stable(1.5, 1.0, 0.2).unwrap().is_strictly_stable());
        assert!(ProcessSpec::cauchy(1.0).unwrap().is_strictly_stable());
        assert!(ProcessSpec::cauchy(1.0)
            .unwrap()
            .with_drift(3.0)
            .unwrap()
            .is_strictly_stable());
        assert!(!ProcessSpec::stable(1.0, 1.0, 0.2).unwrap().is_strictly_stable());
        assert!(!ProcessSpec::stable(0.6, 1.0, 0.2)
            .unwrap()
            .with_drift(0.0)
            .unwrap()
            .is_strictly_stable());
        assert!(!ProcessSpec::gamma().is_strictly_stable());
    }

    #[test]
    fn document_round_trip() {
        for spec in catalog_examples() {
            let json = serde_json::to_string(&spec).unwrap();
            let back: ProcessSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, spec, "{json}");
        }
    }

    #[test]
    fn document_uses_catalog_parameter_names() {
        let spec = ProcessSpec::stable(1.2, 1.0, 0.5).unwrap();
        let v: serde_json::Value = serde_json::to_value(&spec).unwrap();
        assert_eq!(v["family"], "Stable");
        assert_eq!(v["params"]["C1"], 1.0);
        assert_eq!(v["params"]["C2"], 0.5);
        assert_eq!(v["beta"], 1.2);
        assert_eq!(v["symmetric"], false);
        let nig: serde_json::Value = serde_json::to_value(ProcessSpec::nig(1.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!(nig["family"], "NIG");
    }

    #[test]
    fn document_validation() {
        let bad_beta = r#"{"family":"NIG","params":{"alpha":1,"gamma":0,"delta":1},"beta":0.5}"#;
        assert!(serde_json::from_str::<ProcessSpec>(bad_beta).is_err());
        let missing = r#"{"family":"Stable","params":{"alpha":1}}"#;
        assert!(serde_json::from_str::<ProcessSpec>(missing).is_err());
        let unknown = r#"{"family":"Gamma","params":{"alpha":1}}"#;
        assert!(serde_json::from_str::<ProcessSpec>(unknown).is_err());
        let minimal = r#"{"family":"InverseGaussian","params":{"gamma":1}}"#;
        let spec: ProcessSpec = serde_json::from_str(minimal).unwrap();
        assert_eq!(spec.bg_index(), 0.5);
        let with_drift = r#"{"family":"Meixner","params":{"gamma":0.5,"delta":1},"drift_a":0.25}"#;
        let spec: ProcessSpec = serde_json::from_str(with_drift).unwrap();
        assert_eq!(spec.drift(), 0.25);
    }
}
