//! Brute-force ground truth: exhaustive allocation enumeration, exact EMMS,
//! and sampled audits of implications between fairness concepts.
//!
//! Allocations are numbered lexicographically with item 0 as the most
//! significant base-`n` digit (see [`Allocation::from_index`]), so "first"
//! witnesses are reproducible in both execution modes.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::fairness::{CheckOptions, Checker, Concept, GroupBound, DEFAULT_CAPACITY};
use crate::model::fixtures;
use crate::model::generate::{random_instance_with, GenFlags};
use crate::model::{Allocation, Instance};
use crate::value::Value;

/// `n^m`, or `None` when it overflows `u128`.
pub fn outcome_count(agents: usize, items: usize) -> Option<u128> {
    (agents as u128).checked_pow(u32::try_from(items).ok()?)
}

fn guard(what: &str, agents: usize, items: usize, capacity: u128) -> Result<u64> {
    match outcome_count(agents, items) {
        Some(total) if total <= capacity && total <= u64::MAX as u128 => Ok(total as u64),
        total => Err(Error::Capacity {
            what: what.to_string(),
            needed: total.unwrap_or(u128::MAX),
            limit: capacity,
        }),
    }
}

/// What an enumerated allocation must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    AlwaysTrue,
    Holds(Concept),
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::AlwaysTrue => write!(f, "true"),
            Predicate::Holds(c) => write!(f, "{c}"),
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Predicate> {
        match s.trim().to_ascii_lowercase().as_str() {
            "true" | "any" => Ok(Predicate::AlwaysTrue),
            _ => s.parse().map(Predicate::Holds),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationSpec<'a> {
    pub instance: &'a Instance,
    pub predicate: Predicate,
    /// Largest number of allocations the enumeration may visit.
    pub capacity: u128,
    pub execution: Execution,
}

impl<'a> EnumerationSpec<'a> {
    pub fn new(instance: &'a Instance, predicate: Predicate) -> EnumerationSpec<'a> {
        EnumerationSpec {
            instance,
            predicate,
            capacity: DEFAULT_CAPACITY,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// Number of allocations visited, `n^m`.
    pub total: u64,
    /// Number of allocations satisfying the predicate.
    pub count: u64,
    /// Lexicographically first satisfying allocation.
    pub first: Option<Allocation>,
}

/// Visits all `n^m` complete allocations. The capacity guard is checked
/// before any work starts.
pub fn exists_allocation(spec: &EnumerationSpec<'_>) -> Result<Enumeration> {
    let inst = spec.instance;
    let (n, m) = (inst.agents(), inst.num_items());
    let total = guard(&format!("enumerating {}", spec.predicate), n, m, spec.capacity)?;
    let checker = match spec.predicate {
        Predicate::AlwaysTrue => None,
        Predicate::Holds(c) => {
            validate_concept(c, n)?;
            let opts = CheckOptions {
                capacity: spec.capacity,
                execution: spec.execution,
            };
            Some((Checker::new(inst, c == Concept::Emms, opts)?, c))
        }
    };
    let (count, first) = exec::count_with_first(spec.execution, 0..total, |idx| match &checker {
        None => true,
        Some((checker, c)) => {
            let alloc = Allocation::from_index(idx, m, n);
            checker.check(&alloc, *c).expect("concept validated").holds
        }
    });
    Ok(Enumeration {
        total,
        count,
        first: first.map(|idx| Allocation::from_index(idx, m, n)),
    })
}

fn validate_concept(c: Concept, n: usize) -> Result<()> {
    match c {
        Concept::PProp(GroupBound::Fixed(k)) if k == 0 || k > n => Err(Error::InvalidArgument(format!(
            "group bound k = {k} must lie in 1..={n}"
        ))),
        _ => Ok(()),
    }
}

/// Set partitions of `m` items into at most `n` unlabelled blocks, as
/// restricted growth strings: `labels[0] = 0` and each label is at most one
/// more than the largest before it. Every unordered partition appears once.
#[derive(Clone, Debug)]
pub struct PartitionIterator {
    labels: Vec<usize>,
    max_blocks: usize,
    done: bool,
}

impl PartitionIterator {
    pub fn new(items: usize, max_blocks: usize) -> PartitionIterator {
        PartitionIterator {
            labels: vec![0; items],
            max_blocks,
            done: max_blocks == 0 && items > 0,
        }
    }

    /// Assignments of the blocks (padded with empty ones to `agents`) to agents:
    /// entry `b` of each permutation is the owner of block `b`.
    pub fn assignments(agents: usize) -> impl Iterator<Item = Vec<usize>> {
        (0..agents).permutations(agents)
    }
}

impl Iterator for PartitionIterator {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.labels.clone();
        // advance: bump the rightmost position that can grow, reset the tail
        let m = self.labels.len();
        let mut prefix_max = vec![0usize; m];
        for k in 1..m {
            prefix_max[k] = prefix_max[k - 1].max(self.labels[k - 1]);
        }
        let mut advanced = false;
        for k in (1..m).rev() {
            if self.labels[k] <= prefix_max[k] && self.labels[k] + 1 < self.max_blocks {
                self.labels[k] += 1;
                for slot in &mut self.labels[k + 1..] {
                    *slot = 0;
                }
                advanced = true;
                break;
            }
        }
        self.done = !advanced;
        Some(current)
    }
}

/// `min` over all bundle-to-agent assignments of agent `i`'s value, for the
/// partition given by `labels`. Returns the value and a worst assignment.
pub fn worst_assignment(inst: &Instance, i: usize, labels: &[usize]) -> (Value, Vec<usize>) {
    let n = inst.agents();
    // block_value[b][j]: what `i` gets from block b when j owns it
    let mut block_value = vec![vec![Value::ZERO; n]; n];
    for (a, &b) in labels.iter().enumerate() {
        for (j, v) in inst.item_row(i, a).iter().enumerate() {
            block_value[b][j] += *v;
        }
    }
    PartitionIterator::assignments(n)
        .map(|perm| {
            let v: Value = perm.iter().enumerate().map(|(b, &j)| block_value[b][j]).sum();
            (v, perm)
        })
        .min_by(|x, y| x.0.cmp(&y.0))
        .expect("at least one agent")
}

fn emms_guard(inst: &Instance, capacity: u128) -> Result<()> {
    guard("exact EMMS", inst.agents(), inst.num_items(), capacity).map(|_| ())
}

/// Extended maximin share of agent `i`: the best partition under the worst
/// assignment of its bundles. Bundles may be empty.
pub fn emms_exact(inst: &Instance, i: usize, capacity: u128, mode: Execution) -> Result<Value> {
    emms_guard(inst, capacity)?;
    let partitions: Vec<Vec<usize>> = PartitionIterator::new(inst.num_items(), inst.agents()).collect();
    let best = exec::max_by_key(mode, 0..partitions.len() as u64, |p| {
        worst_assignment(inst, i, &partitions[p as usize]).0
    });
    Ok(best.expect("at least one partition"))
}

/// EMMS of every agent.
pub fn emms_all(inst: &Instance, capacity: u128, mode: Execution) -> Result<Vec<Value>> {
    emms_guard(inst, capacity)?;
    let partitions: Vec<Vec<usize>> = PartitionIterator::new(inst.num_items(), inst.agents()).collect();
    Ok((0..inst.agents())
        .map(|i| {
            exec::max_by_key(mode, 0..partitions.len() as u64, |p| {
                worst_assignment(inst, i, &partitions[p as usize]).0
            })
            .expect("at least one partition")
        })
        .collect())
}

/// EMMS by a second route: label every complete allocation with its
/// canonical set partition, take the minimum within each class and the
/// maximum over classes.
pub fn emms_by_labels(inst: &Instance, i: usize, capacity: u128) -> Result<Value> {
    let (n, m) = (inst.agents(), inst.num_items());
    let total = guard("exact EMMS", n, m, capacity)?;
    let mut worst: HashMap<Vec<usize>, Value> = HashMap::new();
    for idx in 0..total {
        let alloc = Allocation::from_index(idx, m, n);
        let mut rename = vec![usize::MAX; n];
        let mut next = 0;
        let key: Vec<usize> = alloc
            .assignment()
            .iter()
            .map(|&j| {
                if rename[j] == usize::MAX {
                    rename[j] = next;
                    next += 1;
                }
                rename[j]
            })
            .collect();
        let v = inst.total_value(&alloc, i);
        worst
            .entry(key)
            .and_modify(|w| {
                if v < *w {
                    *w = v;
                }
            })
            .or_insert(v);
    }
    Ok(worst.into_values().max().expect("at least one allocation"))
}

/// Random `(instance, allocation)` pairs for implication audits.
#[derive(Clone, Debug)]
pub struct Sampler {
    pub agents: RangeInclusive<usize>,
    pub items: RangeInclusive<usize>,
    pub values: RangeInclusive<i64>,
    pub flags: GenFlags,
    /// Only instances with `Σ_a min_j V_i(j,a) >= 0` for every agent.
    pub nonneg_min_floor: bool,
    /// Draw the allocation uniformly among those satisfying the antecedent
    /// (by enumeration) instead of uniformly among all allocations.
    pub conditioned: bool,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler {
            agents: 2..=3,
            items: 1..=6,
            values: -3..=3,
            flags: GenFlags::default(),
            nonneg_min_floor: false,
            conditioned: true,
        }
    }
}

const FLOOR_RETRIES: usize = 200;

impl Sampler {
    fn draw_instance<R: Rng>(&self, rng: &mut R) -> Result<Option<Instance>> {
        for _ in 0..FLOOR_RETRIES {
            let n = rng.random_range(self.agents.clone());
            let m = rng.random_range(self.items.clone());
            let inst = random_instance_with(rng, n, m, &self.values, self.flags)?;
            let floor_ok = (0..n).all(|i| (0..m).map(|a| inst.min_value(i, a)).sum::<Value>() >= Value::ZERO);
            if !self.nonneg_min_floor || floor_ok {
                return Ok(Some(inst));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub trial: u64,
    pub instance: Instance,
    pub allocation: Allocation,
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub antecedent: Concept,
    pub consequent: Concept,
    pub trials: u64,
    /// Trials whose sampled allocation satisfied the antecedent.
    pub exercised: u64,
    pub counterexamples: u64,
    pub first_counterexample: Option<Counterexample>,
    /// Set when the edge could not be evaluated at all.
    pub skipped: Option<String>,
}

enum Trial {
    Vacuous,
    Exercised,
    Counterexample(Instance, Allocation),
}

fn run_trial(a: Concept, b: Concept, sampler: &Sampler, seed: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(inst) = sampler.draw_instance(&mut rng)? else {
        return Ok(Trial::Vacuous);
    };
    let (n, m) = (inst.agents(), inst.num_items());
    validate_concept(a, n)?;
    validate_concept(b, n)?;
    let emms = a == Concept::Emms || b == Concept::Emms;
    let checker = Checker::new(
        &inst,
        emms,
        CheckOptions {
            capacity: DEFAULT_CAPACITY,
            execution: Execution::Sequential,
        },
    )?;
    let alloc = if sampler.conditioned {
        let total = guard("conditioned sampling", n, m, 1 << 20)?;
        let satisfying: Vec<u64> = (0..total)
            .filter(|&idx| {
                checker
                    .check(&Allocation::from_index(idx, m, n), a)
                    .expect("validated")
                    .holds
            })
            .collect();
        if satisfying.is_empty() {
            return Ok(Trial::Vacuous);
        }
        let pick = satisfying[rng.random_range(0..satisfying.len())];
        Allocation::from_index(pick, m, n)
    } else {
        let alloc = crate::model::generate::random_allocation(&inst, &mut rng);
        if !checker.check(&alloc, a)?.holds {
            return Ok(Trial::Vacuous);
        }
        alloc
    };
    Ok(if checker.check(&alloc, b)?.holds {
        Trial::Exercised
    } else {
        Trial::Counterexample(inst, alloc)
    })
}

/// Samples `trials` pairs and counts those where `a` holds but `b` does not.
/// Trial `t` uses seed `seed + t`, so reports are reproducible in both modes.
pub fn audit_implication(
    a: Concept,
    b: Concept,
    sampler: &Sampler,
    trials: u64,
    seed: u64,
    mode: Execution,
) -> AuditReport {
    let mut report = AuditReport {
        antecedent: a,
        consequent: b,
        trials,
        exercised: 0,
        counterexamples: 0,
        first_counterexample: None,
        skipped: None,
    };
    let outcomes = exec::map_collect(mode, 0..trials, |t| {
        run_trial(a, b, sampler, seed.wrapping_add(t)).map(|trial| match trial {
            Trial::Vacuous => 0u8,
            Trial::Exercised => 1,
            Trial::Counterexample(..) => 2,
        })
    });
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Err(e) => {
                report.skipped = Some(e.to_string());
                return report;
            }
            Ok(0) => {}
            Ok(1) => report.exercised += 1,
            Ok(_) => {
                report.exercised += 1;
                report.counterexamples += 1;
                if report.first_counterexample.is_none() {
                    if let Ok(Trial::Counterexample(instance, allocation)) =
                        run_trial(a, b, sampler, seed.wrapping_add(t as u64))
                    {
                        report.first_counterexample = Some(Counterexample {
                            trial: t as u64,
                            instance,
                            allocation,
                        });
                    }
                }
            }
        }
    }
    report
}

/// An implication between concepts together with the sampler that exercises it.
#[derive(Clone, Debug)]
pub struct Edge {
    pub from: Concept,
    pub to: Concept,
    pub sampler: Sampler,
}

impl Edge {
    fn new(from: Concept, to: Concept) -> Edge {
        Edge {
            from,
            to,
            sampler: Sampler::default(),
        }
    }
}

/// The implications that hold for every instance. EMMS edges are restricted
/// to `n <= 3`, `m <= 6`; GFS ⇒ PROP-Max needs a nonnegative floor; EF ⇒
/// PROP-Ave only holds for two agents.
pub fn lattice_edges() -> Vec<Edge> {
    let all = Concept::PProp(GroupBound::All);
    let two = Concept::PProp(GroupBound::Fixed(2));
    let mut edges = vec![
        Edge::new(Concept::Ef, Concept::Efx),
        Edge::new(Concept::Efx, Concept::EF1),
        Edge::new(Concept::EF1, Concept::Efk(2)),
        Edge::new(Concept::Ef, two),
        Edge::new(all, two),
        Edge::new(all, Concept::PropAve),
        Edge::new(Concept::PropAve, Concept::Gfs),
        Edge::new(Concept::PropAve, Concept::Emms),
        Edge::new(Concept::Gfs, Concept::Gfs1),
    ];
    let mut floor = Edge::new(Concept::Gfs, Concept::PropMax);
    floor.sampler.nonneg_min_floor = true;
    floor.sampler.values = -1..=4;
    edges.push(floor);
    let mut pair = Edge::new(Concept::Ef, Concept::PropAve);
    pair.sampler.agents = 2..=2;
    edges.push(pair);
    edges
}

/// A fixed instance where `holds` is satisfied and `fails` is not.
#[derive(Clone, Debug)]
pub struct NonEdge {
    pub name: &'static str,
    pub instance: Instance,
    pub allocation: Allocation,
    pub holds: Concept,
    pub fails: Concept,
}

pub fn non_edges() -> Vec<NonEdge> {
    vec![
        NonEdge {
            name: "ef_not_prop_max",
            instance: fixtures::ef_not_prop_max_instance(),
            allocation: fixtures::ef_not_prop_max_allocation(),
            holds: Concept::Ef,
            fails: Concept::PropMax,
        },
        NonEdge {
            name: "ef_not_prop_three",
            instance: fixtures::ef_not_prop_three_instance(),
            allocation: fixtures::ef_not_prop_three_allocation(),
            holds: Concept::Ef,
            fails: Concept::PropMax,
        },
        NonEdge {
            name: "ef_not_prop_three",
            instance: fixtures::ef_not_prop_three_instance(),
            allocation: fixtures::ef_not_prop_three_allocation(),
            holds: Concept::Ef,
            fails: Concept::PropAve,
        },
    ]
}

impl NonEdge {
    /// The fixture really separates the two concepts.
    pub fn confirmed(&self) -> Result<bool> {
        let emms = self.holds == Concept::Emms || self.fails == Concept::Emms;
        let checker = Checker::new(&self.instance, emms, CheckOptions::default())?;
        Ok(checker.check(&self.allocation, self.holds)?.holds && !checker.check(&self.allocation, self.fails)?.holds)
    }
}
