//! JSON hand configuration.
//!
//! The file uses millimeters and megapascals; everything is converted to SI
//! base units on load and back again on save.

use std::path::{Path, PathBuf};

use grip_core::{Finger, HandModel, LinkChain, TendonDrive};
use serde::{Deserialize, Serialize};

const MM: f64 = 1e3;
const MPA: f64 = 1e6;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandConfig {
    pub gravity_m_s2: f64,
    pub fingers: Vec<FingerConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FingerConfig {
    pub name: String,
    pub lengths_mm: Vec<f64>,
    pub masses_kg: Vec<f64>,
    pub com_offsets_mm: Vec<f64>,
    pub inertias_kg_m2: Vec<f64>,
    pub tendon: TendonConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TendonConfig {
    pub pulley_radius_mm: f64,
    pub actuator_radius_mm: f64,
    pub allowable_stress_mpa: f64,
    pub friction_mu: f64,
    pub max_grip_force_n: f64,
}

/// Config key for a core field name.
fn config_key(field: &str) -> &str {
    match field {
        "lengths" => "lengths_mm",
        "masses" => "masses_kg",
        "com_offsets" => "com_offsets_mm",
        "inertias" => "inertias_kg_m2",
        "pulley_radius" => "tendon.pulley_radius_mm",
        "actuator_radius" => "tendon.actuator_radius_mm",
        "allowable_stress" => "tendon.allowable_stress_mpa",
        "friction_coefficient" => "tendon.friction_mu",
        "max_grip_force" => "tendon.max_grip_force_n",
        "gravity" => "gravity_m_s2",
        other => other,
    }
}

fn invalid(prefix: &str, err: grip_core::Error) -> ConfigError {
    use grip_core::Error;
    let join = |field: &str| {
        if prefix.is_empty() {
            config_key(field).to_string()
        } else {
            format!("{prefix}.{}", config_key(field))
        }
    };
    let (path, message) = match err {
        Error::Invalid {
            field,
            index: Some(i),
            requirement,
        } => (format!("{}[{i}]", join(field)), requirement.to_string()),
        Error::Invalid {
            field,
            index: None,
            requirement,
        } => (join(field), requirement.to_string()),
        Error::LengthMismatch { field, expected, found } => (
            join(field),
            format!("expected {expected} entries (one per link), found {found}"),
        ),
        other => (prefix.to_string(), other.to_string()),
    };
    ConfigError::Invalid { path, message }
}

impl HandConfig {
    /// Converts to SI and validates every invariant.
    pub fn to_model(&self) -> Result<HandModel, ConfigError> {
        let fingers = self
            .fingers
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let prefix = format!("fingers[{i}]");
                let chain = LinkChain::new(
                    f.lengths_mm.iter().map(|v| v / MM).collect(),
                    f.masses_kg.clone(),
                    f.com_offsets_mm.iter().map(|v| v / MM).collect(),
                    f.inertias_kg_m2.clone(),
                )
                .map_err(|e| invalid(&prefix, e))?;
                let t = &f.tendon;
                let tendon = TendonDrive::new(
                    t.pulley_radius_mm / MM,
                    t.actuator_radius_mm / MM,
                    t.allowable_stress_mpa * MPA,
                    t.friction_mu,
                    t.max_grip_force_n,
                )
                .map_err(|e| invalid(&prefix, e))?;
                Ok(Finger {
                    name: f.name.clone(),
                    chain,
                    tendon,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        HandModel::new(fingers, self.gravity_m_s2).map_err(|e| match e {
            grip_core::Error::Invalid {
                field: "name",
                index: Some(i),
                requirement,
            } => ConfigError::Invalid {
                path: format!("fingers[{i}].name"),
                message: requirement.to_string(),
            },
            other => invalid("", other),
        })
    }

    /// Config in file units for an existing model.
    pub fn from_model(model: &HandModel) -> Self {
        let mm = |v: &[f64]| v.iter().map(|x| x * MM).collect();
        Self {
            gravity_m_s2: model.gravity(),
            fingers: model
                .fingers()
                .iter()
                .map(|f| FingerConfig {
                    name: f.name.clone(),
                    lengths_mm: mm(f.chain.lengths()),
                    masses_kg: f.chain.masses().to_vec(),
                    com_offsets_mm: mm(f.chain.com_offsets()),
                    inertias_kg_m2: f.chain.inertias().to_vec(),
                    tendon: TendonConfig {
                        pulley_radius_mm: f.tendon.pulley_radius * MM,
                        actuator_radius_mm: f.tendon.actuator_radius * MM,
                        allowable_stress_mpa: f.tendon.allowable_stress / MPA,
                        friction_mu: f.tendon.friction_coefficient,
                        max_grip_force_n: f.tendon.max_grip_force,
                    },
                })
                .collect(),
        }
    }
}

/// Parses and validates a hand config from JSON text.
pub fn parse_hand_config(json: &str) -> Result<HandModel, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let config: HandConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::Parse {
            path: if path == "." { "<root>".into() } else { path },
            message: e.into_inner().to_string(),
        }
    })?;
    config.to_model()
}

/// Loads a hand config file, converting to SI units.
pub fn load_hand_config(path: impl AsRef<Path>) -> Result<HandModel, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_hand_config(&text)
}

/// Pretty JSON in file units.
pub fn to_json(model: &HandModel) -> String {
    serde_json::to_string_pretty(&HandConfig::from_model(model)).expect("config serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = include_str!("../../../hands/jamia.json");

    #[test]
    fn sample_loads_in_si_units() {
        let hand = parse_hand_config(SAMPLE).unwrap();
        let f = hand.finger("finger1").unwrap();
        assert_eq!(f.chain.lengths(), &[0.030, 0.015, 0.010]);
        assert_eq!(f.tendon.pulley_radius, 0.003);
        assert_eq!(f.tendon.actuator_radius, 0.005);
        assert_eq!(f.tendon.allowable_stress, 190e6);
        assert_eq!(hand.finger("thumb").unwrap().chain.lengths(), &[0.015, 0.010]);
        assert_eq!(hand.fingers().len(), 4);
    }

    #[test]
    fn com_offset_beyond_link_reports_field_path() {
        let bad = SAMPLE.replacen("\"com_offsets_mm\": [15,", "\"com_offsets_mm\": [31,", 1);
        let err = parse_hand_config(&bad).unwrap_err();
        assert_eq!(err.to_string(), "fingers[0].com_offsets_mm[0]: must not exceed the link length");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = SAMPLE.replacen("\"friction_mu\"", "\"colour\": 1, \"friction_mu\"", 1);
        let err = parse_hand_config(&bad).unwrap_err();
        assert!(matches!(&err, ConfigError::Parse { path, .. } if path == "fingers[0].tendon.colour"), "{err}");
    }

    #[test]
    fn missing_and_mistyped_fields() {
        let err = parse_hand_config(r#"{"fingers": []}"#).unwrap_err();
        assert!(err.to_string().contains("gravity_m_s2"), "{err}");
        let err = parse_hand_config(&SAMPLE.replacen("9.81", "\"fast\"", 1)).unwrap_err();
        assert!(err.to_string().starts_with("gravity_m_s2:"), "{err}");
        assert!(parse_hand_config("not json").is_err());
    }

    #[test]
    fn ragged_arrays_and_duplicates() {
        let bad = SAMPLE.replacen("[0.003975, 0.0019875, 0.001325]", "[0.003975, 0.0019875]", 1);
        assert_eq!(
            parse_hand_config(&bad).unwrap_err().to_string(),
            "fingers[0].masses_kg: expected 3 entries (one per link), found 2"
        );
        let dup = SAMPLE.replacen("\"finger2\"", "\"finger1\"", 1);
        assert_eq!(
            parse_hand_config(&dup).unwrap_err().to_string(),
            "fingers[1].name: finger names must be unique"
        );
        let neg = SAMPLE.replacen("\"pulley_radius_mm\": 3", "\"pulley_radius_mm\": 0", 1);
        assert_eq!(
            parse_hand_config(&neg).unwrap_err().to_string(),
            "fingers[0].tendon.pulley_radius_mm: must be finite and > 0"
        );
        let g = SAMPLE.replacen("9.81", "-1", 1);
        assert_eq!(
            parse_hand_config(&g).unwrap_err().to_string(),
            "gravity_m_s2: must be finite and >= 0"
        );
    }

    #[test]
    fn sample_round_trips_through_json() {
        let hand = parse_hand_config(SAMPLE).unwrap();
        assert_eq!(parse_hand_config(&to_json(&hand)).unwrap(), hand);
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            load_hand_config("/nonexistent/hand.json"),
            Err(ConfigError::Io { .. })
        ));
    }
}
