use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::emit::Format;
use crate::checkers::{CheckConfig, Property};
use crate::error::{Error, Result};
use crate::family::{FamilyConfig, MapFamily, ProfileConfig};
use crate::space::PhaseSpace;

/// Where and how a report is written.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub formats: Vec<Format>,
}

fn all_properties() -> Vec<Property> {
    Property::ALL.to_vec()
}

/// A scenario document: `{space, family, check, properties, output}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub space: PhaseSpace,
    pub family: FamilyConfig,
    #[serde(default)]
    pub check: CheckConfig,
    #[serde(default = "all_properties")]
    pub properties: Vec<Property>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileConfig>,
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario document: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Check every invariant and build the family.
    pub fn validate(&self) -> Result<MapFamily> {
        self.space.validate()?;
        let fam = self.family.build(&self.space)?;
        self.check.validate(&fam.space)?;
        Ok(fam)
    }

    pub fn profile_config(&self) -> ProfileConfig {
        self.profile.clone().unwrap_or_default()
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn config_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("scenario specs always serialize");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
