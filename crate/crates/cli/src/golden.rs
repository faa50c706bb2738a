//! Golden files kept in the repository. The built-in copies are compiled
//! in; `--update-golden` rewrites the files on disk.

use std::path::{Path, PathBuf};

use ldl::metatheory::Table2Pattern;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::json_pretty;

const TABLE2: &str = include_str!("../golden/table2.json");
const SHADOW: &str = include_str!("../golden/shadow.json");

pub fn table2_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden/table2.json")
}

pub fn shadow_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden/shadow.json")
}

/// A golden file: the payload plus a note on how it was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Golden<T> {
    pub note: String,
    #[serde(flatten)]
    pub body: T,
}

/// One point of the shadow grid: the smallest and largest one-sided limit
/// over all coordinates (and, for STL, both branch functions).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowPoint {
    pub logic: String,
    pub arity: usize,
    pub p: f64,
    pub expected: f64,
    pub min_limit: f64,
    pub max_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowGrid {
    pub schema_version: u32,
    pub points: Vec<ShadowPoint>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<Golden<T>, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::usage("golden", format!("cannot read golden file {origin}: {e}")))
}

fn load<T: for<'de> Deserialize<'de>>(path: Option<&Path>, builtin: &str) -> Result<Golden<T>, CliError> {
    match path {
        None => parse(builtin, "(built-in)"),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::usage("io", format!("cannot read {}: {e}", p.display())))?;
            parse(&text, &p.display().to_string())
        }
    }
}

pub fn load_table2(path: Option<&Path>) -> Result<Golden<Table2Pattern>, CliError> {
    load(path, TABLE2)
}

pub fn load_shadow(path: Option<&Path>) -> Result<Golden<ShadowGrid>, CliError> {
    load(path, SHADOW)
}

pub fn write<T: Serialize>(path: &Path, golden: &Golden<T>) -> Result<(), CliError> {
    std::fs::write(path, json_pretty(golden) + "\n")
        .map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))
}
