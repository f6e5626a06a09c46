//! Compact process descriptions for the command line:
//! `gamma`, `cauchy`, `nig:alpha=1,gamma=0,delta=1`, or a JSON catalog document.

use std::collections::BTreeMap;

use levymc::levy::{FamilyTag, ProcessSpec, SpecDocument};

fn family(name: &str) -> Option<FamilyTag> {
    let tag = match name.to_ascii_lowercase().replace('_', "-").as_str() {
        "gamma" => FamilyTag::Gamma,
        "stable" | "cauchy" => FamilyTag::Stable,
        "tempered-stable" | "ts" => FamilyTag::TemperedStable,
        "inverse-gaussian" | "ig" => FamilyTag::InverseGaussian,
        "nig" => FamilyTag::Nig,
        "meixner" => FamilyTag::Meixner,
        "hyperbolic" => FamilyTag::Hyperbolic,
        "truncated-power-law" | "tpl" => FamilyTag::TruncatedPowerLaw,
        _ => return None,
    };
    Some(tag)
}

pub fn parse_process(text: &str) -> Result<ProcessSpec, String> {
    let text = text.trim();
    if text.starts_with('{') {
        let doc: SpecDocument = serde_json::from_str(text).map_err(|e| format!("bad process document: {e}"))?;
        return ProcessSpec::from_document(&doc).map_err(|e| e.to_string());
    }
    let (name, rest) = text.split_once(':').unwrap_or((text, ""));
    let tag = family(name).ok_or_else(|| format!("unknown process family '{name}'"))?;
    let mut params = BTreeMap::new();
    let mut drift = None;
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got '{item}'"))?;
        let value: f64 = value.trim().parse().map_err(|_| format!("'{value}' is not a number"))?;
        match key.trim() {
            "a" | "drift" => drift = Some(value),
            k => {
                params.insert(k.to_owned(), value);
            }
        }
    }
    if name.eq_ignore_ascii_case("cauchy") {
        let c = params.remove("C").unwrap_or(1.0);
        if !params.is_empty() {
            return Err("cauchy takes only the parameter C".into());
        }
        params = BTreeMap::from([("alpha".to_owned(), 1.0), ("C1".to_owned(), c), ("C2".to_owned(), c)]);
    }
    let doc = SpecDocument {
        family: tag,
        params,
        beta: None,
        symmetric: None,
        drift_a: drift,
    };
    ProcessSpec::from_document(&doc).map_err(|e| e.to_string())
}

/// Short human-readable name, e.g. `NIG(alpha=1, delta=1, gamma=0)`.
pub fn describe(spec: &ProcessSpec) -> String {
    let doc = spec.to_document();
    let params: Vec<String> = doc.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let name = serde_json::to_value(doc.family)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    if params.is_empty() {
        name
    } else {
        format!("{name}({})", params.join(", "))
    }
}
