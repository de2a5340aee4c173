//! Run manifests written next to every output file.

use std::path::{Path, PathBuf};

use nilgrowth_core::GroupSpec;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{NilError, Result};
use crate::io::{spec_hash, SpecJson};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: Map<String, Value>,
    pub spec: Option<SpecJson>,
    pub spec_sha256: Option<String>,
    pub code_version: String,
    pub wall_time_secs: f64,
    pub budget: usize,
    pub threads: usize,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, spec: Option<&GroupSpec>, budget: usize) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            parameters: Map::new(),
            spec: spec.map(SpecJson::from_spec),
            spec_sha256: spec.map(spec_hash),
            code_version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            wall_time_secs: 0.0,
            budget,
            threads: rayon::current_num_threads(),
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("parameters serialise");
        self.parameters.insert(key.to_string(), v);
        self
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| NilError::io(path, e))
    }
}

/// `<out>.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_fields() {
        assert_eq!(manifest_path(Path::new("out/c.csv")), Path::new("out/c.csv.manifest.json"));
        let spec = GroupSpec::heisenberg(1).unwrap();
        let mut m = RunManifest::new("conj", Some(&spec), 10);
        m.param("radius", 8).param("mode", "exact");
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["parameters"]["radius"], 8);
        assert_eq!(v["spec"]["r"], 1);
        assert_eq!(v["spec_sha256"].as_str().unwrap().len(), 64);
    }
}
