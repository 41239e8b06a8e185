//! Two-agent constructions: EFX for symmetric valuations, EFX in general via
//! a cloned agent and cut-and-choose, and a linear-time EF1 variant.

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};
use crate::value::Value;

/// `Δ(a) = V_1(1,a) − V_1(2,a)` for one item.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaEntry {
    pub item: usize,
    pub delta: Value,
    pub abs_delta: Value,
}

impl DeltaEntry {
    fn new(item: usize, delta: Value) -> DeltaEntry {
        DeltaEntry {
            item,
            delta,
            abs_delta: delta.abs(),
        }
    }
}

fn require_two(inst: &Instance) -> Result<()> {
    if inst.agents() != 2 {
        return Err(Error::Unsupported(format!(
            "two-agent algorithm called with {} agents",
            inst.agents()
        )));
    }
    Ok(())
}

/// Greedy split driven by agent 0's deltas, assuming agent 1 mirrors agent 0.
///
/// `D` is `V_1 − V_2` over assigned items, which under symmetry equals the
/// delta sum of bundle 1 minus that of bundle 2. The agent with the smaller
/// value decides (agent 1 on ties) and keeps the item iff it weakly prefers to.
/// Returns the placement of each processed item, in processing order.
fn greedy_split(entries: &[DeltaEntry]) -> Vec<(usize, usize)> {
    let mut d = Value::ZERO;
    entries
        .iter()
        .map(|e| {
            let decider = if d.is_positive() { 1 } else { 0 };
            let to = if e.delta.is_negative() { 1 - decider } else { decider };
            if to == 0 {
                d += e.delta;
            } else {
                d -= e.delta;
            }
            (e.item, to)
        })
        .collect()
}

fn deltas(inst: &Instance) -> Vec<DeltaEntry> {
    (0..inst.num_items())
        .map(|a| DeltaEntry::new(a, inst.value(0, 0, a) - inst.value(0, 1, a)))
        .collect()
}

fn sorted_deltas(inst: &Instance) -> Vec<DeltaEntry> {
    let mut entries = deltas(inst);
    entries.sort_by_key(|e| std::cmp::Reverse(e.abs_delta));
    entries
}

/// Placements of [`symmetric_efx`] in processing order, for inspecting the
/// partial allocations the algorithm passes through.
pub fn symmetric_efx_steps(inst: &Instance) -> Result<Vec<(usize, usize)>> {
    require_two(inst)?;
    if !inst.is_symmetric() {
        return Err(Error::Unsupported("valuations are not symmetric".into()));
    }
    Ok(greedy_split(&sorted_deltas(inst)))
}

fn into_allocation(m: usize, steps: &[(usize, usize)]) -> Allocation {
    let mut owner = vec![0; m];
    for &(a, j) in steps {
        owner[a] = j;
    }
    Allocation::new(owner, 2).expect("owners are 0 or 1")
}

/// EFX for two agents with `V_1(1,a) = V_2(2,a)` and `V_1(2,a) = V_2(1,a)`.
pub fn symmetric_efx(inst: &Instance) -> Result<Allocation> {
    let steps = symmetric_efx_steps(inst)?;
    Ok(into_allocation(inst.num_items(), &steps))
}

/// Agent 2 picks the bundle it values more (bundle 1 on ties); agent 1 gets the other.
fn choose(inst: &Instance, split: Allocation) -> Allocation {
    let keep = inst.total_value(&split, 1);
    let swapped = split.swap(0, 1).expect("two distinct agents");
    if inst.total_value(&swapped, 1) >= keep {
        swapped
    } else {
        split
    }
}

/// EFX for any two agents: split for a clone of agent 1, let agent 2 choose.
pub fn two_agent_efx(inst: &Instance) -> Result<Allocation> {
    require_two(inst)?;
    let split = into_allocation(inst.num_items(), &greedy_split(&sorted_deltas(inst)));
    Ok(choose(inst, split))
}

/// EF1 for any two agents in one pass over the items, without sorting.
pub fn two_agent_ef1(inst: &Instance) -> Result<Allocation> {
    require_two(inst)?;
    let split = into_allocation(inst.num_items(), &greedy_split(&deltas(inst)));
    Ok(choose(inst, split))
}

/// The clone instance: agent 1 and a copy of it, with symmetric valuations.
pub fn clone_instance(inst: &Instance) -> Result<Instance> {
    require_two(inst)?;
    Instance::from_fn(2, inst.items().to_vec(), |i, a, j| {
        inst.value(0, if i == j { 0 } else { 1 }, a)
    })
}
