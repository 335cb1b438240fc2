//! Execution of a [`Manifest`].
//!
//! Randomness: every task draws from its own ChaCha8 stream, seeded with the
//! run seed and with the stream number set to the task index. Units are drawn
//! sequentially from that stream before any parallel work starts, so the
//! rows depend only on the manifest and the seed.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use k1lab::congruence::{AdversarialCase, CongruenceLab, CongruenceReport, Verdict};
use k1lab::group::build_group;
use k1lab::group_ring::{GroupRingElement, ThetaSource, UnitTuple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::manifest::{CheckKind, Manifest, Task, TupleKind, FORMAT_VERSION};

/// Settings from the command line that override or constrain the manifest.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub p: Option<u64>,
    pub k: Option<u32>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

pub const DEFAULT_K: u32 = 3;
pub const DEFAULT_SEED: u64 = 1;
const DEFAULT_ATTEMPTS: usize = 50;

/// One line of the CSV summary.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub task: usize,
    pub check: &'static str,
    pub group: String,
    pub p: u64,
    pub k: u32,
    pub unit: usize,
    pub instances: usize,
    pub verdict: Verdict,
    pub expected: Verdict,
    pub detail: String,
}

impl Row {
    /// A θ-tuple (or unit) check that was expected to hold but did not.
    pub fn is_unexpected(&self) -> bool {
        matches!(self.expected, Verdict::Holds | Verdict::Candidate) && self.verdict != self.expected
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JsonRow {
    #[serde(flatten)]
    pub row: Row,
    pub unit_coeffs: Option<Vec<u64>>,
    pub failures: Vec<CongruenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<AdversarialCase>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TaskSummary {
    pub index: usize,
    pub check: &'static str,
    pub group: String,
    pub k: u32,
    pub units: usize,
    pub verdicts: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub format_version: u32,
    pub seed: u64,
    pub tasks: Vec<TaskSummary>,
    pub rows: Vec<JsonRow>,
}

impl RunReport {
    pub fn unexpected(&self) -> usize {
        self.rows.iter().filter(|r| r.row.is_unexpected()).count()
    }
}

struct Prepared {
    index: usize,
    task: Task,
    lab: Arc<CongruenceLab>,
    k: u32,
    units: Vec<Option<GroupRingElement>>,
    rng_seed: (u64, u64),
}

pub fn run(manifest: &Manifest, opts: RunOptions) -> Result<RunReport> {
    let k_default = opts.k.or(manifest.k).unwrap_or(DEFAULT_K);
    let seed = opts.seed.or(manifest.seed).unwrap_or(DEFAULT_SEED);
    manifest.validate(k_default)?;

    let mut labs: BTreeMap<&str, Arc<CongruenceLab>> = BTreeMap::new();
    for (name, spec) in &manifest.groups {
        let g = build_group(spec).with_context(|| format!("building group `{name}`"))?;
        if let Some(p) = opts.p {
            if g.p() != p {
                bail!("group `{name}` is a {}-group but --p {p} was given", g.p());
            }
        }
        labs.insert(name, Arc::new(CongruenceLab::new(&Arc::new(g))));
    }

    let mut prepared = Vec::with_capacity(manifest.tasks.len());
    for (index, task) in manifest.tasks.iter().enumerate() {
        let lab = labs[task.group.as_str()].clone();
        let k = task.k.unwrap_or(k_default);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let units = (0..task.units)
            .map(|_| match task.tuple {
                TupleKind::Theta => GroupRingElement::random_unit(lab.group(), k, &mut rng).map(Some),
                TupleKind::One => Ok(None),
            })
            .collect::<k1lab::Result<Vec<_>>>()?;
        prepared.push(Prepared { index, task: task.clone(), lab, k, units, rng_seed: (seed, index as u64) });
    }

    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.unwrap_or(0)).build()?;
    let per_task: Vec<Vec<JsonRow>> = pool.install(|| {
        prepared
            .par_iter()
            .map(|p| {
                p.units
                    .par_iter()
                    .enumerate()
                    .map(|(i, u)| run_unit(p, i, u.as_ref()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let tasks = prepared
        .iter()
        .zip(&per_task)
        .map(|(p, rows)| {
            let mut verdicts = BTreeMap::new();
            for r in rows {
                *verdicts.entry(r.row.verdict.to_string()).or_insert(0) += 1;
            }
            TaskSummary { index: p.index, check: p.task.check.name(), group: p.task.group.clone(), k: p.k, units: rows.len(), verdicts }
        })
        .collect();
    Ok(RunReport { format_version: FORMAT_VERSION, seed, tasks, rows: per_task.into_iter().flatten().collect() })
}

fn aggregate(reports: &[CongruenceReport]) -> (Verdict, String, Vec<CongruenceReport>) {
    let failures: Vec<CongruenceReport> = reports.iter().filter(|r| !r.holds()).cloned().collect();
    match failures.first() {
        None => (Verdict::Holds, String::new(), failures),
        Some(first) => (Verdict::Fails, format!("{} failing, first {} {}", failures.len(), first.condition, first.instance), failures),
    }
}

fn run_unit(p: &Prepared, i: usize, u: Option<&GroupRingElement>) -> Result<JsonRow> {
    let lab = &p.lab;
    let tuple = || -> Result<UnitTuple> {
        Ok(match u {
            Some(u) => lab.theta_tuple(u)?,
            None => lab.one_tuple(p.k)?,
        })
    };
    let unit = || u.context("this check needs a unit");
    let mut case = None;
    let (reports, verdict_override, expected) = match p.task.check {
        CheckKind::Rw1 => (lab.check_rw1(&tuple()?)?, None, Verdict::Holds),
        CheckKind::Rw2 => (lab.check_rw2(&tuple()?)?, None, Verdict::Holds),
        CheckKind::Rw3 => (lab.check_rw3_all(&tuple()?)?, None, Verdict::Holds),
        CheckKind::Rw3a => (lab.check_rw3a_all(&tuple()?)?, None, Verdict::Holds),
        CheckKind::Rw4 => (lab.check_rw4_all(&tuple()?)?, None, Verdict::Holds),
        CheckKind::Wall => (lab.check_wall_all(unit()?)?, None, Verdict::Holds),
        CheckKind::Snaith => (lab.check_snaith(unit()?)?, None, Verdict::Holds),
        CheckKind::Functorial => {
            let reports = match u {
                Some(u) => lab.check_functoriality(&ThetaSource::new(u))?,
                None => lab.check_functoriality(&tuple()?)?,
            };
            (reports, None, Verdict::Holds)
        }
        CheckKind::Membership => {
            let m = lab.phi_tilde_membership(&tuple()?)?;
            let v = m.verdict;
            (m.reports, Some(v), Verdict::Candidate)
        }
        CheckKind::Adversarial => {
            let cond = p.task.condition.expect("validated");
            // a per-unit stream keeps the search independent of scheduling
            let mut rng = ChaCha8Rng::seed_from_u64(p.rng_seed.0 ^ 0x9e37_79b9_7f4a_7c15);
            rng.set_stream(((p.rng_seed.1 as u128) << 32 | i as u128) as u64);
            let found = lab.adversarial(unit()?, cond, &mut rng, p.task.attempts.unwrap_or(DEFAULT_ATTEMPTS))?;
            let (reports, v) = match &found {
                Some(c) if lab.verify_certificate(&c.tuple, &c.report)? => (vec![c.report.clone()], Verdict::Rejected),
                Some(c) => bail!("certificate for {} at {} did not re-verify", cond, c.report.instance),
                None => (Vec::new(), Verdict::Holds),
            };
            case = found;
            (reports, Some(v), Verdict::Rejected)
        }
    };
    let (mut verdict, mut detail, failures) = aggregate(&reports);
    if let Some(v) = verdict_override {
        verdict = v;
    }
    if let Some(c) = &case {
        detail = format!("coordinate {} after {} attempt(s): {}", c.coordinate_label, c.attempts, c.report.instance);
    } else if p.task.check == CheckKind::Adversarial {
        detail = "no rejecting perturbation found".into();
    }
    let g = lab.group();
    Ok(JsonRow {
        row: Row {
            task: p.index,
            check: p.task.check.name(),
            group: p.task.group.clone(),
            p: g.p(),
            k: p.k,
            unit: i,
            instances: reports.len(),
            verdict,
            expected,
            detail,
        },
        unit_coeffs: u.map(|u| u.coeffs().to_vec()),
        failures: if p.task.check == CheckKind::Adversarial { Vec::new() } else { failures },
        case,
    })
}

/// Writes `report.csv` and `report.json` into `dir`.
pub fn write_report(report: &RunReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv_path = dir.join("report.csv");
    let mut w = csv::Writer::from_path(&csv_path).with_context(|| format!("writing {}", csv_path.display()))?;
    if report.rows.is_empty() {
        w.write_record(["task", "check", "group", "p", "k", "unit", "instances", "verdict", "expected", "detail"])?;
    }
    for r in &report.rows {
        w.serialize(&r.row)?;
    }
    w.flush()?;
    let json_path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    fs::write(&json_path, text).with_context(|| format!("writing {}", json_path.display()))?;
    Ok(())
}
