//! Exact decision procedures for every fairness concept.
//!
//! All predicates return a [`Verdict`]. A failed verdict always carries a
//! [`Witness`] that can be re-checked independently with
//! [`FairnessReport::recheck`]; relaxations (EFk, GFS1) also carry the
//! certificate that makes them hold.

pub mod envy;
pub mod shares;

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde_json::{json, Map, Value as Json};

pub use envy::{envy_amount, is_ef, is_ef_k, is_efx, mutual_envy_pair, swap_margin_without};
pub use shares::{
    group_share, group_value, is_gfs, is_gfs1, is_k_p_prop, is_prop_ave, is_prop_max, shares, AgentShares,
    FairShareProfile, UpgradeCheck,
};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{Allocation, Instance};
use crate::oracle;
use crate::value::Value;

/// Envy of one ordered pair cleared by deleting `removed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalCertificate {
    pub envious: usize,
    pub envied: usize,
    pub removed: Vec<usize>,
    /// `V_i(λ) − V_i(λ^{i↔j})` after the deletion; never negative here.
    pub margin: Value,
}

/// Evidence attached to a verdict. Agent and item fields are 0-based indices.
///
/// `margin` is always `V_i(π) − V_i(π^{i↔j})` for the envious agent `i`,
/// evaluated on the allocation after the listed deletions; negative means envy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Envy {
        envious: usize,
        envied: usize,
        margin: Value,
    },
    /// EFk holds: a certifying deletion set for every envious pair.
    Removals { certificates: Vec<RemovalCertificate> },
    /// EFk fails: even the best deletion set of allowed size leaves envy.
    EnvyAfterRemoval {
        envious: usize,
        envied: usize,
        removed: Vec<usize>,
        margin: Value,
    },
    /// EFX fails: deleting `item` reduces the envy but does not clear it.
    ItemRemoval {
        envious: usize,
        envied: usize,
        item: usize,
        margin: Value,
    },
    Share {
        agent: usize,
        value: Value,
        threshold: Value,
    },
    /// GFS1 holds: per agent, the item whose upgrade certifies it.
    UpgradeItems { items: Vec<Option<usize>> },
    /// GFS1 fails: the best single upgrade still falls short.
    Upgrade {
        agent: usize,
        best_value: Value,
        threshold: Value,
    },
    Group {
        agent: usize,
        group: Vec<usize>,
        value: Value,
        share: Value,
    },
}

impl Witness {
    /// JSON view with 1-based agents and item names resolved by `item_name`.
    pub fn to_json(&self, item_name: &dyn Fn(usize) -> String) -> Json {
        let names = |items: &[usize]| items.iter().map(|&a| item_name(a)).collect::<Vec<_>>();
        match self {
            Witness::Envy {
                envious,
                envied,
                margin,
            } => json!({
                "kind": "envy", "envious": envious + 1, "envied": envied + 1, "margin": margin,
            }),
            Witness::Removals { certificates } => json!({
                "kind": "removals",
                "certificates": certificates.iter().map(|c| json!({
                    "envious": c.envious + 1, "envied": c.envied + 1,
                    "removed": names(&c.removed), "margin": c.margin,
                })).collect::<Vec<_>>(),
            }),
            Witness::EnvyAfterRemoval {
                envious,
                envied,
                removed,
                margin,
            } => json!({
                "kind": "envy_after_removal", "envious": envious + 1, "envied": envied + 1,
                "removed": names(removed), "margin": margin,
            }),
            Witness::ItemRemoval {
                envious,
                envied,
                item,
                margin,
            } => json!({
                "kind": "item_removal", "envious": envious + 1, "envied": envied + 1,
                "item": item_name(*item), "margin": margin,
            }),
            Witness::Share {
                agent,
                value,
                threshold,
            } => json!({
                "kind": "share", "agent": agent + 1, "value": value, "threshold": threshold,
            }),
            Witness::UpgradeItems { items } => json!({
                "kind": "upgrade_items",
                "items": items.iter().map(|a| a.map(item_name)).collect::<Vec<_>>(),
            }),
            Witness::Upgrade {
                agent,
                best_value,
                threshold,
            } => json!({
                "kind": "upgrade", "agent": agent + 1, "best_value": best_value, "threshold": threshold,
            }),
            Witness::Group {
                agent,
                group,
                value,
                share,
            } => json!({
                "kind": "group", "agent": agent + 1,
                "group": group.iter().map(|j| j + 1).collect::<Vec<_>>(),
                "value": value, "share": share,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Verdict {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn pass_with(witness: Witness) -> Verdict {
        Verdict {
            holds: true,
            witness: Some(witness),
        }
    }

    pub fn fail(witness: Witness) -> Verdict {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Size bound of the groups in k-P-PROP.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupBound {
    Fixed(usize),
    /// `k = n`, whatever `n` is.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Concept {
    Ef,
    /// EFk; `Efk(1)` is EF1.
    Efk(usize),
    Efx,
    Gfs,
    Gfs1,
    PropMax,
    PropAve,
    PProp(GroupBound),
    Emms,
}

impl Concept {
    pub const EF1: Concept = Concept::Efk(1);

    /// Every concept once, in lattice order, for an `n`-agent report.
    pub fn all() -> Vec<Concept> {
        vec![
            Concept::Ef,
            Concept::Efx,
            Concept::EF1,
            Concept::Efk(2),
            Concept::PProp(GroupBound::Fixed(2)),
            Concept::PProp(GroupBound::All),
            Concept::PropAve,
            Concept::Gfs,
            Concept::Gfs1,
            Concept::PropMax,
            Concept::Emms,
        ]
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Ef => write!(f, "EF"),
            Concept::Efk(k) => write!(f, "EF{k}"),
            Concept::Efx => write!(f, "EFX"),
            Concept::Gfs => write!(f, "GFS"),
            Concept::Gfs1 => write!(f, "GFS1"),
            Concept::PropMax => write!(f, "PROP-Max"),
            Concept::PropAve => write!(f, "PROP-Ave"),
            Concept::PProp(GroupBound::Fixed(k)) => write!(f, "{k}-P-PROP"),
            Concept::PProp(GroupBound::All) => write!(f, "n-P-PROP"),
            Concept::Emms => write!(f, "EMMS"),
        }
    }
}

impl FromStr for Concept {
    type Err = Error;

    /// Case-insensitive: `ef`, `ef1`, `ef3`, `efx`, `gfs`, `gfs1`, `prop-max`,
    /// `prop-ave`, `2-p-prop`, `n-p-prop`, `emms`.
    fn from_str(s: &str) -> Result<Concept> {
        let lower = s.trim().to_ascii_lowercase().replace('_', "-");
        let concept = match lower.as_str() {
            "ef" => Concept::Ef,
            "efx" => Concept::Efx,
            "gfs" => Concept::Gfs,
            "gfs1" => Concept::Gfs1,
            "prop-max" | "propmax" => Concept::PropMax,
            "prop-ave" | "propave" => Concept::PropAve,
            "emms" => Concept::Emms,
            "n-p-prop" => Concept::PProp(GroupBound::All),
            other => {
                if let Some(k) = other.strip_prefix("ef").and_then(|k| k.parse().ok()) {
                    Concept::Efk(k)
                } else if let Some(k) = other.strip_suffix("-p-prop").and_then(|k| k.parse().ok()) {
                    Concept::PProp(GroupBound::Fixed(k))
                } else {
                    return Err(Error::InvalidArgument(format!("unknown fairness concept {s:?}")));
                }
            }
        };
        Ok(concept)
    }
}

/// Default budget for exhaustive share computations (`n^m` outcomes).
pub const DEFAULT_CAPACITY: u128 = 10_000_000;

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub capacity: u128,
    pub execution: Execution,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            capacity: DEFAULT_CAPACITY,
            execution: Execution::default(),
        }
    }
}

/// Evaluates concepts for many allocations of one instance, computing the
/// per-instance shares (and EMMS, if requested) once.
#[derive(Clone, Debug)]
pub struct Checker<'a> {
    inst: &'a Instance,
    profile: FairShareProfile,
}

impl<'a> Checker<'a> {
    /// Fails with a capacity error only when EMMS is requested and too
    /// expensive to compute exactly.
    pub fn new(inst: &'a Instance, with_emms: bool, opts: CheckOptions) -> Result<Checker<'a>> {
        let mut profile = shares(inst);
        if with_emms {
            let emms = oracle::emms_all(inst, opts.capacity, opts.execution)?;
            for (s, e) in profile.agents.iter_mut().zip(emms) {
                s.emms = Some(e);
            }
        }
        Ok(Checker { inst, profile })
    }

    pub fn profile(&self) -> &FairShareProfile {
        &self.profile
    }

    pub fn check(&self, alloc: &Allocation, concept: Concept) -> Result<Verdict> {
        let inst = self.inst;
        Ok(match concept {
            Concept::Ef => is_ef(inst, alloc),
            Concept::Efk(k) => is_ef_k(inst, alloc, k),
            Concept::Efx => is_efx(inst, alloc),
            Concept::Gfs => shares::is_gfs_with(inst, alloc, &self.profile),
            Concept::Gfs1 => is_gfs1(inst, alloc),
            Concept::PropMax => shares::is_prop_max_with(inst, alloc, &self.profile),
            Concept::PropAve => shares::is_prop_ave_with(inst, alloc, &self.profile),
            Concept::PProp(GroupBound::Fixed(k)) => is_k_p_prop(inst, alloc, k)?,
            Concept::PProp(GroupBound::All) => is_k_p_prop(inst, alloc, inst.agents())?,
            Concept::Emms => {
                let emms: Vec<Value> = self
                    .profile
                    .agents
                    .iter()
                    .map(|s| s.emms)
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::InvalidArgument("checker was built without EMMS".into()))?;
                emms_verdict(inst, alloc, &emms)
            }
        })
    }
}

fn emms_verdict(inst: &Instance, alloc: &Allocation, emms: &[Value]) -> Verdict {
    for (i, &share) in emms.iter().enumerate() {
        let value = inst.total_value(alloc, i);
        if value < share {
            return Verdict::fail(Witness::Share {
                agent: i,
                value,
                threshold: share,
            });
        }
    }
    Verdict::pass()
}

/// Extended maximin share check; refuses instances with more than
/// `capacity` allocations rather than approximating.
pub fn is_emms(inst: &Instance, alloc: &Allocation, capacity: u128) -> Result<Verdict> {
    let emms = oracle::emms_all(inst, capacity, Execution::default())?;
    Ok(emms_verdict(inst, alloc, &emms))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReportEntry {
    Checked(Verdict),
    /// Not evaluated, with the reason (e.g. the EMMS capacity guard).
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct FairnessReport {
    pub entries: Vec<(Concept, ReportEntry)>,
    pub shares: FairShareProfile,
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub concepts: Vec<Concept>,
    pub check: CheckOptions,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            concepts: Concept::all(),
            check: CheckOptions::default(),
        }
    }
}

/// Runs every requested concept. EMMS is skipped (and recorded as such) when
/// the capacity guard refuses it, and so is k-P-PROP with `k > n`. A group
/// bound of 0 is an error.
pub fn full_report(inst: &Instance, alloc: &Allocation, opts: &ReportOptions) -> Result<FairnessReport> {
    if alloc.num_items() != inst.num_items() || alloc.agents() != inst.agents() {
        return Err(Error::InvalidArgument("allocation does not match the instance".into()));
    }
    let wants_emms = opts.concepts.contains(&Concept::Emms);
    let (checker, emms_skip) = match Checker::new(inst, wants_emms, opts.check) {
        Ok(c) => (c, None),
        Err(e @ Error::Capacity { .. }) => (Checker::new(inst, false, opts.check)?, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let mut entries = Vec::with_capacity(opts.concepts.len());
    for &concept in opts.concepts.iter().unique() {
        let entry = match (concept, &emms_skip) {
            (Concept::Emms, Some(reason)) => ReportEntry::Skipped(reason.clone()),
            (Concept::PProp(GroupBound::Fixed(k)), _) if k > inst.agents() => {
                ReportEntry::Skipped(format!("group bound {k} exceeds the {} agents", inst.agents()))
            }
            _ => ReportEntry::Checked(checker.check(alloc, concept)?),
        };
        entries.push((concept, entry));
    }
    Ok(FairnessReport {
        entries,
        shares: checker.profile,
    })
}

impl FairnessReport {
    pub fn verdict(&self, concept: Concept) -> Option<&Verdict> {
        self.entries.iter().find_map(|(c, e)| match e {
            ReportEntry::Checked(v) if *c == concept => Some(v),
            _ => None,
        })
    }

    /// All evaluated concepts hold (skipped ones are ignored).
    pub fn all_hold(&self) -> bool {
        self.entries
            .iter()
            .all(|(_, e)| !matches!(e, ReportEntry::Checked(v) if !v.holds))
    }

    pub fn to_json(&self, inst: &Instance) -> Json {
        let name = |a: usize| inst.items()[a].clone();
        let mut root = Map::new();
        for (concept, entry) in &self.entries {
            let body = match entry {
                ReportEntry::Checked(v) => {
                    let mut obj = Map::new();
                    obj.insert("holds".into(), Json::Bool(v.holds));
                    if let Some(w) = &v.witness {
                        obj.insert("witness".into(), w.to_json(&name));
                    }
                    Json::Object(obj)
                }
                ReportEntry::Skipped(reason) => json!({ "skipped": reason }),
            };
            root.insert(concept.to_string(), body);
        }
        let shares: Vec<Json> = self
            .shares
            .agents
            .iter()
            .enumerate()
            .map(|(i, s)| {
                json!({
                    "agent": i + 1,
                    "gfs": s.gfs.to_string(),
                    "prop_max": s.prop_max.to_string(),
                    "prop_ave": s.prop_ave.to_string(),
                    "min_floor": s.min_floor.to_string(),
                    "emms": s.emms.map(|e| e.to_string()),
                })
            })
            .collect();
        root.insert("shares".into(), Json::Array(shares));
        Json::Object(root)
    }

    /// Re-evaluates every witness from the definitions, without reusing the
    /// per-item contribution shortcuts of the checkers. Returns a description
    /// of the first witness that does not re-check.
    pub fn recheck(&self, inst: &Instance, alloc: &Allocation) -> std::result::Result<(), String> {
        for (concept, entry) in &self.entries {
            let ReportEntry::Checked(verdict) = entry else {
                continue;
            };
            if !verdict.holds && verdict.witness.is_none() {
                return Err(format!("{concept}: failed verdict without witness"));
            }
            if let Some(w) = &verdict.witness {
                recheck_witness(inst, alloc, *concept, verdict.holds, w, &self.shares)
                    .map_err(|e| format!("{concept}: {e}"))?;
            }
        }
        Ok(())
    }
}

fn margin(
    inst: &Instance,
    alloc: &Allocation,
    i: usize,
    j: usize,
    removed: &[usize],
) -> std::result::Result<Value, String> {
    swap_margin_without(inst, alloc, i, j, removed).map_err(|e| e.to_string())
}

fn expect(cond: bool, what: &str) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn recheck_witness(
    inst: &Instance,
    alloc: &Allocation,
    concept: Concept,
    holds: bool,
    witness: &Witness,
    profile: &FairShareProfile,
) -> std::result::Result<(), String> {
    match witness {
        Witness::Envy {
            envious,
            envied,
            margin: m,
        } => {
            let actual = margin(inst, alloc, *envious, *envied, &[])?;
            expect(actual == *m && m.is_negative(), "envy witness does not re-evaluate")
        }
        Witness::Removals { certificates } => {
            let k = match concept {
                Concept::Efk(k) => k,
                _ => return Err("removal certificates on a non-EFk concept".into()),
            };
            for c in certificates {
                expect(c.removed.len() <= k, "certificate deletes too many items")?;
                let actual = margin(inst, alloc, c.envious, c.envied, &c.removed)?;
                expect(
                    actual == c.margin && !actual.is_negative(),
                    "certificate does not clear envy",
                )?;
            }
            // every envious pair must be covered
            for (i, j) in envy::ordered_pairs(inst.agents()) {
                if margin(inst, alloc, i, j, &[])?.is_negative() {
                    expect(
                        certificates.iter().any(|c| c.envious == i && c.envied == j),
                        "envious pair without certificate",
                    )?;
                }
            }
            Ok(())
        }
        Witness::EnvyAfterRemoval {
            envious,
            envied,
            removed,
            margin: m,
        } => {
            let k = match concept {
                Concept::Efk(k) => k,
                _ => return Err("removal witness on a non-EFk concept".into()),
            };
            let actual = margin(inst, alloc, *envious, *envied, removed)?;
            expect(
                actual == *m && m.is_negative() && removed.len() <= k,
                "witness margin mismatch",
            )?;
            let m_items = inst.num_items();
            let sets: u128 = (0..=k.min(m_items)).map(|s| binomial(m_items, s)).sum();
            if sets <= 1_000_000 {
                for size in 0..=k.min(m_items) {
                    for c in (0..m_items).combinations(size) {
                        expect(
                            margin(inst, alloc, *envious, *envied, &c)?.is_negative(),
                            "a deletion set clears the envy",
                        )?;
                    }
                }
            }
            Ok(())
        }
        Witness::ItemRemoval {
            envious,
            envied,
            item,
            margin: m,
        } => {
            let before = margin(inst, alloc, *envious, *envied, &[])?;
            let after = margin(inst, alloc, *envious, *envied, &[*item])?;
            expect(before.is_negative(), "pair is not envious")?;
            expect(after > before, "deletion does not reduce envy")?;
            expect(after == *m && after.is_negative(), "deletion clears envy")
        }
        Witness::Share {
            agent,
            value,
            threshold,
        } => {
            let v = inst.total_value(alloc, *agent);
            let s = &profile.agents[*agent];
            let n = inst.agents();
            let expected = match concept {
                Concept::Gfs => {
                    let spread: Value = (0..inst.num_items())
                        .map(|a| inst.max_value(*agent, a) - inst.min_value(*agent, a))
                        .sum();
                    spread.div_count(n) + (0..inst.num_items()).map(|a| inst.min_value(*agent, a)).sum::<Value>()
                }
                Concept::PropMax => (0..inst.num_items())
                    .map(|a| inst.max_value(*agent, a))
                    .sum::<Value>()
                    .div_count(n),
                Concept::PropAve => (0..inst.num_items())
                    .map(|a| inst.item_row(*agent, a).iter().sum::<Value>())
                    .sum::<Value>()
                    .div_count(n),
                Concept::Emms => s.emms.ok_or("EMMS share missing")?,
                _ => return Err("share witness on an unexpected concept".into()),
            };
            expect(
                v == *value && expected == *threshold && v < expected,
                "share witness mismatch",
            )
        }
        Witness::UpgradeItems { items } => {
            expect(holds, "certificate on a failed verdict")?;
            for (i, item) in items.iter().enumerate() {
                let s = &profile.agents[i];
                let v = inst.total_value(alloc, i);
                let upgraded = match item {
                    Some(a) => v - inst.value(i, alloc.owner_of(*a), *a) + inst.max_value(i, *a),
                    None => v,
                };
                expect(upgraded >= s.gfs_threshold(), "upgrade does not reach the fair share")?;
            }
            Ok(())
        }
        Witness::Upgrade {
            agent,
            best_value,
            threshold,
        } => {
            let s = &profile.agents[*agent];
            let v = inst.total_value(alloc, *agent);
            expect(*threshold == s.gfs_threshold() && v < *threshold, "threshold mismatch")?;
            for a in 0..inst.num_items() {
                let up = v - inst.value(*agent, alloc.owner_of(a), a) + inst.max_value(*agent, a);
                expect(
                    up < *threshold && up <= *best_value,
                    "some upgrade reaches the fair share",
                )?;
            }
            Ok(())
        }
        Witness::Group {
            agent,
            group,
            value,
            share,
        } => {
            expect(group.contains(agent), "group does not contain the agent")?;
            let (mut v, mut sum) = (Value::ZERO, Value::ZERO);
            for a in 0..inst.num_items() {
                if group.contains(&alloc.owner_of(a)) {
                    v += inst.value(*agent, alloc.owner_of(a), a);
                    for &j in group {
                        sum += inst.value(*agent, j, a);
                    }
                }
            }
            let expected = sum.div_count(group.len());
            expect(
                v == *value && expected == *share && v < expected,
                "group witness mismatch",
            )
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}
