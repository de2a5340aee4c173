//! JSON formats for group specs, elements, generating sets and
//! automorphisms, plus the built-in named specs.

use std::path::Path;

use nilgrowth_core::{Automorphism, GroupElement, GroupSpec, IntMatrix};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ball::GeneratingSet;
use crate::error::{NilError, Result};

/// `{"s": int, "r": int, "delta": [int, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecJson {
    pub s: usize,
    pub r: usize,
    #[serde(default)]
    pub delta: Vec<i64>,
}

impl SpecJson {
    pub fn from_spec(spec: &GroupSpec) -> Self {
        Self {
            s: spec.s(),
            r: spec.r(),
            delta: spec.delta().to_vec(),
        }
    }

    pub fn to_spec(&self) -> Result<GroupSpec> {
        Ok(GroupSpec::new(self.s, self.r, &self.delta)?)
    }
}

/// `{"z": [...], "ab": [[i, j], ...], "k": int}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    #[serde(default)]
    pub z: Vec<i64>,
    pub ab: Vec<[i64; 2]>,
    #[serde(default)]
    pub k: i64,
}

impl ElementJson {
    pub fn from_element(g: &GroupElement) -> Self {
        Self {
            z: g.z().to_vec(),
            ab: g.ab_pairs().map(|(i, j)| [i, j]).collect(),
            k: g.k(),
        }
    }

    pub fn to_element(&self, spec: &GroupSpec) -> Result<GroupElement> {
        let ab: Vec<(i64, i64)> = self.ab.iter().map(|p| (p[0], p[1])).collect();
        Ok(spec.element(&self.z, &ab, self.k)?)
    }
}

/// `{"label": "...", "gens": [element, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GensJson {
    #[serde(default)]
    pub label: Option<String>,
    pub gens: Vec<ElementJson>,
}

/// `{"M": [[...], ...], "kappa": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoJson {
    #[serde(rename = "M")]
    pub matrix: Vec<Vec<i64>>,
    pub kappa: Vec<i64>,
}

impl AutoJson {
    pub fn from_automorphism(f: &Automorphism) -> Self {
        Self {
            matrix: f.matrix().to_rows(),
            kappa: f.kappa().to_vec(),
        }
    }

    pub fn to_automorphism(&self, spec: &GroupSpec) -> Result<Automorphism> {
        Ok(Automorphism::new(spec, IntMatrix::from_rows(&self.matrix)?, self.kappa.clone())?)
    }
}

pub const BUILTIN_SPECS: [&str; 5] = ["H1", "H2", "H3", "ZxH1", "HD2"];

pub fn builtin_spec(name: &str) -> Option<GroupSpec> {
    let spec = match name {
        "H1" => GroupSpec::new(0, 1, &[]),
        "H2" => GroupSpec::new(0, 2, &[1]),
        "H3" => GroupSpec::new(0, 3, &[1, 1]),
        "ZxH1" => GroupSpec::new(1, 1, &[]),
        "HD2" => GroupSpec::new(0, 2, &[2]),
        _ => return None,
    };
    Some(spec.expect("built-in specs are valid"))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| NilError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// A spec from a JSON file, or a built-in name such as `H1` (a trailing
/// `.json` is ignored when no such file exists).
pub fn load_spec(arg: &str) -> Result<GroupSpec> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_json::<SpecJson>(path)?.to_spec();
    }
    let name = arg.strip_suffix(".json").unwrap_or(arg);
    let name = Path::new(name).file_name().and_then(|s| s.to_str()).unwrap_or(name);
    builtin_spec(name).ok_or_else(|| {
        NilError::Usage(format!(
            "spec {arg:?} is neither a file nor a built-in name ({})",
            BUILTIN_SPECS.join(", ")
        ))
    })
}

pub fn load_gens(spec: &GroupSpec, path: &Path) -> Result<GeneratingSet> {
    let json: GensJson = read_json(path)?;
    let gens = json
        .gens
        .iter()
        .map(|e| e.to_element(spec))
        .collect::<Result<Vec<_>>>()?;
    GeneratingSet::new(spec, gens, json.label.unwrap_or_else(|| path.display().to_string()))
}

/// Named automorphisms available on every spec.
pub fn builtin_automorphism(spec: &GroupSpec, name: &str) -> Result<Option<Automorphism>> {
    let n = spec.abelian_rank();
    let mut m = IntMatrix::identity(n);
    let mut kappa = vec![0; n];
    match name {
        "identity" => {}
        "neg" => m = IntMatrix::identity(n).checked_neg()?,
        "swap" => {
            for t in 0..spec.r() {
                let a = spec.s() + 2 * t;
                m.set(a, a, 0);
                m.set(a + 1, a + 1, 0);
                m.set(a, a + 1, 1);
                m.set(a + 1, a, 1);
            }
        }
        "twist" => kappa[spec.s()] = 1,
        _ => return Ok(None),
    }
    Ok(Some(Automorphism::new(spec, m, kappa)?))
}

/// An automorphism from a JSON file or one of `identity`, `neg`, `swap`,
/// `twist`.
pub fn load_auto(spec: &GroupSpec, arg: &str) -> Result<Automorphism> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_json::<AutoJson>(path)?.to_automorphism(spec);
    }
    builtin_automorphism(spec, arg)?.ok_or_else(|| {
        NilError::Usage(format!(
            "automorphism {arg:?} is neither a file nor one of identity, neg, swap, twist"
        ))
    })
}

/// SHA-256 of the canonical spec JSON.
pub fn spec_hash(spec: &GroupSpec) -> String {
    let json = serde_json::to_string(&SpecJson::from_spec(spec)).expect("spec serialises");
    hex::encode(Sha256::digest(json.as_bytes()))
}
