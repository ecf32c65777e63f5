//! Family files, family and policy spec strings, JSON artifacts and the
//! on-disk memo cache.
//!
//! A family file holds one set per line (`3,4,5` or `{3,4,5}`), `{}` for
//! the empty set, and `#` comments.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dichotomy::random_hereditary_family;
use crate::error::{Error, Result};
use crate::family::{FamilyOracle, FinSet, SetFamily};
use crate::games::{Policy, Strategy};
use crate::ordinal::Ordinal;

pub const CACHE_ENV: &str = "SCHREIER_CACHE_DIR";

pub const FAMILY_SPEC_HINT: &str = "family specs: s:<ordinal>, tuple:<ord,ord,..>, \
file:<path>, sets:<set>;<set>.., closure:<set>;<set>.., spread:<set>;<set>.. \
(or spread:file:<path>), bar:<family spec>, random:<seed>, example";

pub fn parse_family_text(text: &str) -> Result<Vec<FinSet>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .collect::<Vec<_>>()
                .join(",")
                .parse()
        })
        .collect()
}

fn family_from_sets(sets: Vec<FinSet>, bound: Option<u64>) -> Result<SetFamily> {
    let top = sets.iter().filter_map(FinSet::max_elem).max().unwrap_or(1);
    SetFamily::from_sets(bound.unwrap_or(top).max(top), sets)
}

pub fn read_family_file(path: &Path, bound: Option<u64>) -> Result<SetFamily> {
    family_from_sets(parse_family_text(&std::fs::read_to_string(path)?)?, bound)
}

pub fn render_family(fam: &SetFamily) -> String {
    let mut out = format!("# {} sets within [1, {}]\n", fam.len(), fam.universe_bound());
    for e in fam.iter() {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

fn inline_sets(s: &str) -> Result<Vec<FinSet>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

/// Parses a family spec. `universe` bounds explicit and random families.
pub fn parse_family(spec: &str, universe: Option<u64>) -> Result<FamilyOracle> {
    let bad = |reason: String| Error::Parse {
        what: "family spec",
        input: spec.to_string(),
        reason: format!("{reason}; {FAMILY_SPEC_HINT}"),
    };
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match kind.trim() {
        "s" => FamilyOracle::schreier(rest.parse::<Ordinal>()?),
        "tuple" => FamilyOracle::Tuple(rest.parse()?),
        "file" => FamilyOracle::explicit(read_family_file(Path::new(rest), universe)?),
        "sets" => FamilyOracle::explicit(family_from_sets(inline_sets(rest)?, universe)?),
        "closure" => FamilyOracle::explicit(
            family_from_sets(inline_sets(rest)?, universe)?.hereditary_closure(),
        ),
        "spread" => {
            let gens = match rest.strip_prefix("file:") {
                Some(path) => read_family_file(Path::new(path), None)?,
                None => family_from_sets(inline_sets(rest)?, None)?,
            };
            FamilyOracle::spread_closure(gens)
        }
        "bar" => FamilyOracle::bar(parse_family(rest, universe)?),
        "random" => {
            let seed = rest.trim().parse().map_err(|_| bad("seed must be an integer".into()))?;
            FamilyOracle::explicit(random_hereditary_family(universe.unwrap_or(12), seed, 5, 5))
        }
        "example" => FamilyOracle::Example,
        other => return Err(bad(format!("unknown kind `{other}`"))),
    })
}

/// Members inside `[1, bound]` as an explicit family.
pub fn materialize(fam: &FamilyOracle, bound: u64, cap: usize) -> Result<SetFamily> {
    SetFamily::from_sets(bound, fam.members_within(bound, cap)?)
}

/// `const:3`, `seq:2,1`, `prevmin:1`, or `file:<path>` holding a policy or a
/// solved strategy in JSON.
pub fn parse_policy(spec: &str) -> Result<Policy> {
    let Some(path) = spec.strip_prefix("file:") else {
        return Policy::parse_inline(spec);
    };
    let text = std::fs::read_to_string(path)?;
    if let Ok(s) = serde_json::from_str::<Strategy>(&text) {
        return Ok(s.as_policy());
    }
    if let Ok(cert) = serde_json::from_str::<Artifact<Strategy>>(&text) {
        return Ok(cert.result.as_policy());
    }
    Ok(serde_json::from_str::<Policy>(&text)?)
}

/// Self-describing output: what was run, on which inputs and budgets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact<T> {
    pub kind: String,
    pub version: String,
    pub inputs: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub result: T,
}

impl<T: Serialize> Artifact<T> {
    pub fn new(kind: &str, inputs: BTreeMap<String, String>, seed: Option<u64>, result: T) -> Self {
        Artifact {
            kind: kind.to_string(),
            version: crate::VERSION.to_string(),
            inputs,
            seed,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

pub fn write_artifact<T: Serialize>(artifact: &Artifact<T>, path: &Path) -> Result<()> {
    std::fs::write(path, artifact.to_json()?)?;
    Ok(())
}

pub fn read_artifact<T: DeserializeOwned>(path: &Path) -> Result<Artifact<T>> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// JSON memo files under `SCHREIER_CACHE_DIR`, keyed by a hash of the inputs.
/// Absent variable means no caching.
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn from_env() -> Self {
        Cache {
            dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
        }
    }

    pub fn at(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    fn path(&self, kind: &str, key: &str) -> Option<PathBuf> {
        let digest = Sha256::digest(format!("{}|{kind}|{key}", crate::VERSION).as_bytes());
        let hex: String = digest.iter().take(12).map(|b| format!("{b:02x}")).collect();
        Some(self.dir.as_ref()?.join(format!("{kind}-{hex}.json")))
    }

    /// Unreadable or stale entries count as misses.
    pub fn get<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        let text = std::fs::read_to_string(self.path(kind, key)?).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put<T: Serialize>(&self, kind: &str, key: &str, value: &T) -> Result<()> {
        if let Some(p) = self.path(kind, key) {
            if let Some(parent) = p.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(p, serde_json::to_string(value)?)?;
        }
        Ok(())
    }
}
