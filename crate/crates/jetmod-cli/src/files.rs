//! On-disk formats: module files with an optional provenance header, and
//! error bodies.

use jetmod_core::{CategoryJModule, GModule};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

/// Construction recipe embedded in persisted module files, so downstream
/// commands can assert recipe-derived expectations (like the degree).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Jet {
        n: usize,
        #[serde(rename = "N")]
        order: u32,
        fiber: String,
    },
    Correspond,
    LoopBuild,
}

#[derive(Serialize, Deserialize)]
pub struct ModuleFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(flatten)]
    pub module: CategoryJModule,
    /// Coefficient table for a window, present when requested at build time.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableEntry>>,
}

#[derive(Serialize, Deserialize)]
pub struct TableEntry {
    pub j: usize,
    pub s: jetmod_core::LatticeVector,
    pub matrix: jetmod_core::RatMatrix,
}

#[derive(Serialize, Deserialize)]
pub struct LoopModuleFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(flatten)]
    pub module: GModule,
}

/// Command-level error with a machine-readable kind.
pub struct CmdError {
    pub kind: &'static str,
    pub message: String,
}

impl CmdError {
    pub fn parse(err: impl fmt::Display) -> Self {
        CmdError {
            kind: "parse",
            message: err.to_string(),
        }
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        CmdError {
            kind: "io",
            message: format!("{}: {err}", path.display()),
        }
    }

    pub fn input(err: impl fmt::Display) -> Self {
        CmdError {
            kind: "input",
            message: err.to_string(),
        }
    }

    pub fn usage(err: impl fmt::Display) -> Self {
        CmdError {
            kind: "usage",
            message: err.to_string(),
        }
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CmdError> {
    let text = std::fs::read_to_string(path).map_err(|e| CmdError::io(path, e))?;
    serde_json::from_str(&text).map_err(CmdError::parse)
}
