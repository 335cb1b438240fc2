use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use k1lab::congruence::Condition;
use k1lab::group::GroupSpec;
use serde::Deserialize;

pub const FORMAT_VERSION: u32 = 1;

/// A batch of checks.
///
/// ```json
/// {
///   "format_version": 1,
///   "seed": 1,
///   "k": 3,
///   "groups": {"H": {"kind": "catalog", "name": "heisenberg", "p": 3}},
///   "tasks": [{"check": "wall", "group": "H", "units": 100}]
/// }
/// ```
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default = "default_version")]
    pub format_version: u32,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub k: Option<u32>,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Rw1,
    Rw2,
    Rw3,
    Rw3a,
    Rw4,
    Wall,
    Snaith,
    Membership,
    Functorial,
    Adversarial,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Rw1 => "rw1",
            CheckKind::Rw2 => "rw2",
            CheckKind::Rw3 => "rw3",
            CheckKind::Rw3a => "rw3a",
            CheckKind::Rw4 => "rw4",
            CheckKind::Wall => "wall",
            CheckKind::Snaith => "snaith",
            CheckKind::Membership => "membership",
            CheckKind::Functorial => "functorial",
            CheckKind::Adversarial => "adversarial",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TupleKind {
    /// `θ(u)` for random units `u`.
    #[default]
    Theta,
    /// The tuple with every entry 1.
    One,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task {
    pub check: CheckKind,
    pub group: String,
    #[serde(default = "one")]
    pub units: usize,
    #[serde(default)]
    pub k: Option<u32>,
    #[serde(default)]
    pub tuple: TupleKind,
    /// Target of an `adversarial` task: RW1, RW2 or RW3a.
    #[serde(default)]
    pub condition: Option<Condition>,
    #[serde(default)]
    pub attempts: Option<usize>,
}

pub const MAX_UNITS: usize = 100_000;

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let m: Manifest = serde_json::from_str(text).context("malformed manifest")?;
        if m.format_version != FORMAT_VERSION {
            bail!("unsupported manifest format_version {} (expected {FORMAT_VERSION})", m.format_version);
        }
        Ok(m)
    }

    /// Static checks that need no group computation beyond construction.
    pub fn validate(&self, k_default: u32) -> Result<()> {
        for (i, t) in self.tasks.iter().enumerate() {
            if !self.groups.contains_key(&t.group) {
                bail!("task {i} references undeclared group `{}`", t.group);
            }
            let k = t.k.unwrap_or(k_default);
            if k == 0 {
                bail!("task {i}: precision k must be at least 1");
            }
            if t.check == CheckKind::Functorial && k < 2 {
                bail!("task {i}: functorial checks need k >= 2");
            }
            if t.units > MAX_UNITS {
                bail!("task {i}: at most {MAX_UNITS} units per task");
            }
            match (t.check, t.condition) {
                (CheckKind::Adversarial, Some(Condition::RW1 | Condition::RW2 | Condition::RW3a)) => {}
                (CheckKind::Adversarial, other) => bail!("task {i}: adversarial tasks target RW1, RW2 or RW3a, got {other:?}"),
                (_, Some(_)) => bail!("task {i}: `condition` only applies to adversarial tasks"),
                _ => {}
            }
            if t.tuple == TupleKind::One && matches!(t.check, CheckKind::Wall | CheckKind::Snaith | CheckKind::Adversarial) {
                bail!("task {i}: `{}` works on units, not on a fixed tuple", t.check.name());
            }
        }
        Ok(())
    }
}
