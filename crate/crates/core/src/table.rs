//! The bundled knot table: PD codes, braid words and bridge-number overrides.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diagram::{BraidWord, KnotDiagram};
use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../data/knot_table.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub pd: Vec<[u64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braid: Option<BraidWord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bridge_n: Option<usize>,
}

impl KnotRecord {
    /// An empty PD list is the 0-crossing unknot.
    pub fn diagram(&self) -> Result<KnotDiagram> {
        if self.pd.is_empty() {
            Ok(KnotDiagram::unknot())
        } else {
            KnotDiagram::from_pd(&self.pd)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotTable {
    pub version: u32,
    pub knots: Vec<KnotRecord>,
}

impl KnotTable {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED).expect("bundled table is valid")
    }

    /// Parses and validates: names unique, every PD code a knot diagram, every braid closing to a knot.
    pub fn from_json(text: &str) -> Result<Self> {
        let table: KnotTable = serde_json::from_str(text).map_err(|e| Error::Table(e.to_string()))?;
        let mut names = BTreeSet::new();
        for k in &table.knots {
            if !names.insert(k.name.as_str()) {
                return Err(Error::Table(format!("duplicate knot name '{}'", k.name)));
            }
            k.diagram().map_err(|e| Error::Table(format!("{}: {e}", k.name)))?;
            if k.bridge_n == Some(0) {
                return Err(Error::Table(format!("{}: bridge_n must be positive", k.name)));
            }
        }
        Ok(table)
    }

    pub fn get(&self, name: &str) -> Result<&KnotRecord> {
        self.knots.iter().find(|k| k.name == name).ok_or_else(|| Error::Table(format!("no knot named '{name}'")))
    }
}
