//! Share-based concepts: GFS, GFS1, PROP-Max, PROP-Ave, k-P-PROP.

use itertools::Itertools;

use super::{Verdict, Witness};
use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};
use crate::value::Value;

/// Per-agent shares of one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentShares {
    /// `(1/n) Σ_a (V_i^max(a) − V_i^min(a))`
    pub gfs: Value,
    /// `(1/n) Σ_a V_i^max(a)`
    pub prop_max: Value,
    /// `(1/n) Σ_a Σ_j V_i(j,a)`
    pub prop_ave: Value,
    /// `Σ_a V_i^min(a)`, the worst value any allocation can give agent `i`.
    pub min_floor: Value,
    pub emms: Option<Value>,
}

impl AgentShares {
    /// The GFS threshold `GFS_i + Σ_a V_i^min(a)`.
    pub fn gfs_threshold(&self) -> Value {
        self.gfs + self.min_floor
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairShareProfile {
    pub agents: Vec<AgentShares>,
}

/// Computes every share except EMMS.
pub fn shares(inst: &Instance) -> FairShareProfile {
    let n = inst.agents();
    let agents = (0..n)
        .map(|i| {
            let (mut max_sum, mut min_sum, mut all_sum) = (Value::ZERO, Value::ZERO, Value::ZERO);
            for a in 0..inst.num_items() {
                let row = inst.item_row(i, a);
                max_sum += *row.iter().max().expect("n >= 1");
                min_sum += *row.iter().min().expect("n >= 1");
                all_sum += row.iter().sum::<Value>();
            }
            AgentShares {
                gfs: (max_sum - min_sum).div_count(n),
                prop_max: max_sum.div_count(n),
                prop_ave: all_sum.div_count(n),
                min_floor: min_sum,
                emms: None,
            }
        })
        .collect();
    FairShareProfile { agents }
}

fn per_agent_threshold<F>(inst: &Instance, alloc: &Allocation, threshold: F) -> Verdict
where
    F: Fn(usize) -> Value,
{
    for i in 0..inst.agents() {
        let value = inst.total_value(alloc, i);
        let t = threshold(i);
        if value < t {
            return Verdict::fail(Witness::Share {
                agent: i,
                value,
                threshold: t,
            });
        }
    }
    Verdict::pass()
}

pub fn is_gfs_with(inst: &Instance, alloc: &Allocation, profile: &FairShareProfile) -> Verdict {
    per_agent_threshold(inst, alloc, |i| profile.agents[i].gfs_threshold())
}

pub fn is_prop_max_with(inst: &Instance, alloc: &Allocation, profile: &FairShareProfile) -> Verdict {
    per_agent_threshold(inst, alloc, |i| profile.agents[i].prop_max)
}

pub fn is_prop_ave_with(inst: &Instance, alloc: &Allocation, profile: &FairShareProfile) -> Verdict {
    per_agent_threshold(inst, alloc, |i| profile.agents[i].prop_ave)
}

pub fn is_gfs(inst: &Instance, alloc: &Allocation) -> Verdict {
    is_gfs_with(inst, alloc, &shares(inst))
}

pub fn is_prop_max(inst: &Instance, alloc: &Allocation) -> Verdict {
    is_prop_max_with(inst, alloc, &shares(inst))
}

pub fn is_prop_ave(inst: &Instance, alloc: &Allocation) -> Verdict {
    is_prop_ave_with(inst, alloc, &shares(inst))
}

/// One agent's GFS1 evaluation: its current value, the threshold, and the
/// single-item upgrade that helps most.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpgradeCheck {
    pub value: Value,
    pub threshold: Value,
    /// `(item, V_i^max(a) − V_i(π(a)))`, largest gain, lowest index on ties.
    pub best: Option<(usize, Value)>,
}

impl UpgradeCheck {
    /// Per item: `(current value, max value, min value)` for one agent over
    /// `agents` possible owners or choices.
    pub fn evaluate<I>(agents: usize, items: I) -> UpgradeCheck
    where
        I: IntoIterator<Item = (Value, Value, Value)>,
    {
        let (mut value, mut spread, mut floor) = (Value::ZERO, Value::ZERO, Value::ZERO);
        let mut best: Option<(usize, Value)> = None;
        for (a, (cur, max, min)) in items.into_iter().enumerate() {
            value += cur;
            spread += max - min;
            floor += min;
            let gain = max - cur;
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((a, gain));
            }
        }
        UpgradeCheck {
            value,
            threshold: spread.div_count(agents) + floor,
            best,
        }
    }

    /// GFS already holds, or one upgrade closes the gap. With no items at all
    /// the first condition is the only one that can apply.
    pub fn holds(&self) -> bool {
        self.value >= self.threshold || self.best.is_some_and(|(_, gain)| self.value + gain >= self.threshold)
    }
}

/// General fair share up to one item.
pub fn is_gfs1(inst: &Instance, alloc: &Allocation) -> Verdict {
    let n = inst.agents();
    let mut certificates = Vec::with_capacity(n);
    for i in 0..n {
        let check = UpgradeCheck::evaluate(
            n,
            (0..inst.num_items()).map(|a| {
                (
                    inst.value(i, alloc.owner_of(a), a),
                    inst.max_value(i, a),
                    inst.min_value(i, a),
                )
            }),
        );
        if !check.holds() {
            return Verdict::fail(Witness::Upgrade {
                agent: i,
                best_value: check.value + check.best.map_or(Value::ZERO, |(_, g)| g),
                threshold: check.threshold,
            });
        }
        certificates.push(check.best.map(|(a, _)| a));
    }
    Verdict::pass_with(Witness::UpgradeItems { items: certificates })
}

/// `k`-partial proportionality: for every group `N'` with `i ∈ N'` and
/// `|N'| <= k`, the value `i` gets from the items held by `N'` is at least
/// `(1/|N'|) Σ_{a ∈ π_{N'}} Σ_{j ∈ N'} V_i(j,a)`.
///
/// Only the group's holdings enter the left side, so items held outside the
/// group are ignored on both sides. For `N' = N` this is `V_i(π)`, and a
/// singleton group is always satisfied.
pub fn is_k_p_prop(inst: &Instance, alloc: &Allocation, k: usize) -> Result<Verdict> {
    let n = inst.agents();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "group bound k = {k} must lie in 1..={n}"
        )));
    }
    for i in 0..n {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        for size in 0..k {
            for rest in others.iter().copied().combinations(size) {
                let mut group = rest;
                group.push(i);
                group.sort_unstable();
                let value = group_value(inst, alloc, i, &group);
                let share = group_share(inst, alloc, i, &group);
                if value < share {
                    return Ok(Verdict::fail(Witness::Group {
                        agent: i,
                        group,
                        value,
                        share,
                    }));
                }
            }
        }
    }
    Ok(Verdict::pass())
}

/// What `observer` gets from the items held by a sorted group.
pub fn group_value(inst: &Instance, alloc: &Allocation, observer: usize, group: &[usize]) -> Value {
    (0..inst.num_items())
        .filter(|&a| group.binary_search(&alloc.owner_of(a)).is_ok())
        .map(|a| inst.value(observer, alloc.owner_of(a), a))
        .sum()
}

/// `P-PROP_i^{N'}` for a sorted group.
pub fn group_share(inst: &Instance, alloc: &Allocation, observer: usize, group: &[usize]) -> Value {
    let total: Value = (0..inst.num_items())
        .filter(|&a| group.binary_search(&alloc.owner_of(a)).is_ok())
        .map(|a| group.iter().map(|&j| inst.value(observer, j, a)).sum::<Value>())
        .sum();
    total.div_count(group.len())
}
