//! Quiver JSON: `{"vertices": ["a", ...], "arrows": [{"src": "a", "tgt": "b"}, ...]}`.

use std::path::Path;

use hallforge_core::Quiver;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverFile {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub src: String,
    pub tgt: String,
}

impl QuiverFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_quiver(&self) -> CliResult<Quiver> {
        let arrows: Vec<(&str, &str)> = self
            .arrows
            .iter()
            .map(|a| (a.src.as_str(), a.tgt.as_str()))
            .collect();
        let vertices: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        Ok(Quiver::new(&vertices, &arrows)?)
    }

    pub fn from_quiver(q: &Quiver) -> Self {
        QuiverFile {
            vertices: q.vertices().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowSpec {
                    src: q.vertices()[a.src].clone(),
                    tgt: q.vertices()[a.tgt].clone(),
                })
                .collect(),
        }
    }
}
