//! Job configuration: one JSON document per run. Unknown keys are
//! rejected so a typo cannot silently change an experiment.

use serde::Deserialize;
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Selftest,
    Count,
    Bounds,
    Census,
    VerifyIdentities,
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TaskKind::Selftest => "selftest",
            TaskKind::Count => "count",
            TaskKind::Bounds => "bounds",
            TaskKind::Census => "census",
            TaskKind::VerifyIdentities => "verify-identities",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountKind {
    Nu,
    NuDecomposition,
    Pair,
    Forest,
    Matrix,
}

impl fmt::Display for CountKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CountKind::Nu => "nu",
            CountKind::NuDecomposition => "nu-decomposition",
            CountKind::Pair => "pair",
            CountKind::Forest => "forest",
            CountKind::Matrix => "matrix",
        };
        f.write_str(s)
    }
}

/// Everything a job may need; task-specific fields are optional and
/// validated by the task runner.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub task: TaskKind,

    /// Ring descriptor, e.g. "p=3 e=2 k=1" or "p=2 e=2 k=2 f=1,1,1".
    /// Omitting f selects the lexicographically first irreducible monic.
    pub ring: Option<String>,
    pub d: Option<usize>,

    // selftest / verify-identities
    pub rings: Option<Vec<String>>,
    pub cap: Option<u64>,

    // count
    pub kind: Option<CountKind>,
    pub points_file: Option<String>,
    pub t: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub forest_file: Option<String>,
    pub b: Option<Vec<String>>,
    pub distinct: Option<bool>,

    // bounds
    pub p: Option<Vec<u64>>,
    pub e: Option<Vec<u32>>,
    pub k: Option<Vec<u32>>,
    pub d_min: Option<u32>,
    pub d_max: Option<u32>,
    pub n: Option<u32>,
    pub theorems: Option<Vec<String>>,

    // census
    pub sizes: Option<Vec<u64>>,
    pub samples: Option<u64>,

    pub seed: Option<u64>,
    pub budget: Option<u64>,

    /// Directory of the config file; input paths resolve against it.
    #[serde(skip)]
    pub base: PathBuf,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut config: JobConfig = serde_json::from_str(&text)
            .map_err(|e| format!("config {}: {e}", path.display()))?;
        config.base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Ok(config)
    }

    pub fn resolve(&self, input: &str) -> PathBuf {
        let p = PathBuf::from(input);
        if p.is_absolute() {
            p
        } else {
            self.base.join(p)
        }
    }
}
