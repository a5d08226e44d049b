//! On-disk JSON form of a residue system.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use covering_core::{ResidueClass, ResidueSystem};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub a: i64,
    pub n: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub classes: Vec<ClassEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
    /// Free-form; typically `name` and `notes`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl SystemDocument {
    /// Residues come out normalized into `[0, n)`.
    pub fn from_system(system: &ResidueSystem, metadata: Option<serde_json::Value>) -> Self {
        Self {
            classes: system
                .classes()
                .iter()
                .map(|c| ClassEntry {
                    a: c.residue() as i64,
                    n: c.modulus() as i64,
                })
                .collect(),
            weights: system.weights().map(<[i64]>::to_vec),
            metadata,
        }
    }

    pub fn to_system(&self) -> Result<ResidueSystem> {
        let classes = self
            .classes
            .iter()
            .map(|c| ResidueClass::new(c.a.into(), c.n.into()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(match &self.weights {
            Some(w) => ResidueSystem::with_weights(classes, w.clone())?,
            None => ResidueSystem::new(classes)?,
        })
    }

    /// The same document with residues reduced and the system validated.
    pub fn normalized(&self) -> Result<Self> {
        Ok(Self::from_system(&self.to_system()?, self.metadata.clone()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).context("malformed system document")?;
        doc.normalized()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn load(path: &Path) -> Result<(Self, ResidueSystem)> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let doc = Self::parse(&text).with_context(|| format!("in {}", path.display()))?;
        let system = doc.to_system()?;
        Ok((doc, system))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json() + "\n").with_context(|| format!("writing {}", path.display()))
    }
}
