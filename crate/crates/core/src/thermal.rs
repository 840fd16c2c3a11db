//! Static fire-exposure screen for a gripper bill of materials.
//!
//! A component fails when it is exposed (not thermally isolated) and the
//! environment is hotter than its material's service limit. There is no heat
//! transfer here, only the threshold.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

const BUNDLED_CATALOG: &str = include_str!("../data/materials.json");
const BUNDLED_FIRE_RESISTANT: &str = include_str!("../data/bom_fire_resistant.json");
const BUNDLED_MEMBRANE: &str = include_str!("../data/bom_membrane.json");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThermalError {
    #[error("malformed JSON: {0}")]
    Parse(String),
    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),
    #[error("invalid bill of materials: {0}")]
    InvalidBom(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Structure,
    Bead,
    Wire,
    Seal,
    Membrane,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub name: String,
    /// °C.
    pub max_service_temp: f64,
    #[serde(default)]
    pub roles: BTreeSet<Role>,
    /// Where the limit comes from.
    #[serde(default)]
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialCatalog {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    pub materials: Vec<MaterialSpec>,
}

impl MaterialCatalog {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_CATALOG).expect("bundled catalog is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, ThermalError> {
        let cat: Self = serde_json::from_str(text).map_err(|e| ThermalError::Parse(e.to_string()))?;
        cat.check()?;
        Ok(cat)
    }

    pub fn check(&self) -> Result<(), ThermalError> {
        let mut seen = BTreeSet::new();
        for m in &self.materials {
            if !m.max_service_temp.is_finite() {
                return Err(ThermalError::InvalidCatalog(format!(
                    "`{}` has a non-finite service temperature",
                    m.name
                )));
            }
            if !seen.insert(m.name.as_str()) {
                return Err(ThermalError::InvalidCatalog(format!("duplicate material `{}`", m.name)));
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&MaterialSpec> {
        self.materials.iter().find(|m| m.name == name)
    }
}

/// A BOM as stored on disk: materials by catalog name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BomFile {
    #[serde(default)]
    pub name: String,
    pub components: Vec<BomEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BomEntry {
    pub name: String,
    pub material: String,
    #[serde(default)]
    pub thermally_isolated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub name: String,
    pub material: MaterialSpec,
    pub thermally_isolated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BillOfMaterials {
    pub name: String,
    pub components: Vec<Component>,
}

impl BillOfMaterials {
    pub fn new(name: impl Into<String>, components: Vec<Component>) -> Result<Self, ThermalError> {
        if components.is_empty() {
            return Err(ThermalError::InvalidBom("no components".into()));
        }
        Ok(Self {
            name: name.into(),
            components,
        })
    }

    /// Parses a BOM file and looks its materials up in `catalog`.
    pub fn from_json(text: &str, catalog: &MaterialCatalog) -> Result<Self, ThermalError> {
        let file: BomFile = serde_json::from_str(text).map_err(|e| ThermalError::Parse(e.to_string()))?;
        Self::resolve(&file, catalog)
    }

    pub fn resolve(file: &BomFile, catalog: &MaterialCatalog) -> Result<Self, ThermalError> {
        let components = file
            .components
            .iter()
            .map(|c| {
                let material = catalog.get(&c.material).ok_or_else(|| {
                    ThermalError::InvalidBom(format!("`{}` uses unknown material `{}`", c.name, c.material))
                })?;
                Ok(Component {
                    name: c.name.clone(),
                    material: material.clone(),
                    thermally_isolated: c.thermally_isolated,
                })
            })
            .collect::<Result<Vec<_>, ThermalError>>()?;
        Self::new(file.name.clone(), components)
    }

    pub fn fire_resistant() -> Self {
        Self::from_json(BUNDLED_FIRE_RESISTANT, &MaterialCatalog::bundled()).expect("bundled BOM is valid")
    }

    pub fn membrane() -> Self {
        Self::from_json(BUNDLED_MEMBRANE, &MaterialCatalog::bundled()).expect("bundled BOM is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub component: String,
    pub material: String,
    pub max_service_temp: f64,
    /// How far the environment exceeds the limit, °C.
    pub deficit: f64,
}

/// Exposed components whose service limit is below `environment_temp`,
/// worst first. Ties keep BOM order.
pub fn check_fire_exposure(bom: &BillOfMaterials, environment_temp: f64) -> Vec<Failure> {
    let mut out: Vec<Failure> = bom
        .components
        .iter()
        .filter(|c| !c.thermally_isolated && environment_temp > c.material.max_service_temp)
        .map(|c| Failure {
            component: c.name.clone(),
            material: c.material.name.clone(),
            max_service_temp: c.material.max_service_temp,
            deficit: environment_temp - c.material.max_service_temp,
        })
        .collect();
    out.sort_by(|a, b| b.deficit.total_cmp(&a.deficit));
    out
}

/// Lowest environment temperature each material fails at, keyed by
/// material name; handy for reports.
pub fn failure_thresholds(bom: &BillOfMaterials) -> BTreeMap<String, f64> {
    bom.components
        .iter()
        .filter(|c| !c.thermally_isolated)
        .map(|c| (c.material.name.clone(), c.material.max_service_temp))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(f: &[Failure]) -> Vec<&str> {
        f.iter().map(|x| x.component.as_str()).collect()
    }

    #[test]
    fn bundled_boms_at_600() {
        assert!(check_fire_exposure(&BillOfMaterials::fire_resistant(), 600.0).is_empty());
        let membrane = BillOfMaterials::membrane();
        let fails = check_fire_exposure(&membrane, 600.0);
        assert_eq!(fails.len(), membrane.components.len());
        // polystyrene and polyurethane tie at the largest deficit
        assert_eq!(names(&fails), ["granular fill", "vacuum hose", "mounting flange", "membrane"]);
    }

    #[test]
    fn room_temperature_is_safe() {
        assert!(check_fire_exposure(&BillOfMaterials::membrane(), 20.0).is_empty());
    }

    #[test]
    fn limit_itself_is_not_a_failure() {
        let bom = BillOfMaterials::fire_resistant();
        assert!(check_fire_exposure(&bom, 600.0).is_empty());
        assert_eq!(names(&check_fire_exposure(&bom, 600.5)), ["chain beads"]);
    }

    #[test]
    fn isolated_o_ring_would_fail_exposed() {
        let mut bom = BillOfMaterials::fire_resistant();
        for c in &mut bom.components {
            c.thermally_isolated = false;
        }
        let fails = check_fire_exposure(&bom, 600.0);
        assert_eq!(names(&fails), ["equalizer O-ring", "equalizer cylinder"]);
        assert_eq!(fails[0].deficit, 480.0);
    }

    #[test]
    fn bad_inputs() {
        let cat = MaterialCatalog::bundled();
        assert!(BillOfMaterials::new("x", vec![]).is_err());
        let e = BillOfMaterials::from_json(r#"{"components":[{"name":"a","material":"cheese"}]}"#, &cat);
        assert!(matches!(e, Err(ThermalError::InvalidBom(_))));
        assert!(matches!(BillOfMaterials::from_json("{", &cat), Err(ThermalError::Parse(_))));
        let dup = r#"{"materials":[{"name":"a","max_service_temp":1},{"name":"a","max_service_temp":2}]}"#;
        assert!(matches!(MaterialCatalog::from_json(dup), Err(ThermalError::InvalidCatalog(_))));
    }

    #[test]
    fn thresholds_skip_isolated_parts() {
        let t = failure_thresholds(&BillOfMaterials::fire_resistant());
        assert!(!t.contains_key("nitrile_rubber"));
        assert_eq!(t["tungsten"], 1000.0);
    }
}
