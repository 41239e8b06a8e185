//! Swap-envy and its relaxations (EF, EFk, EFX).
//!
//! The envy of `i` towards `j` is `V_i(π^{i↔j}) − V_i(π)`. It is additive over
//! items: an item in `π_i` contributes `V_i(j,a) − V_i(i,a)`, an item in `π_j`
//! contributes `V_i(i,a) − V_i(j,a)`, every other item contributes nothing.
//! Deleting an item from the allocation subtracts its contribution, so every
//! predicate here reduces to comparisons over per-item contributions.

use std::cmp::Ordering;

use super::{Verdict, Witness};
use crate::error::{Error, Result};
use crate::model::{Instance, Owners};
use crate::value::Value;

/// Items with a nonzero contribution to `i`'s envy towards `j`.
pub(crate) fn envy_terms<'a, O: Owners + ?Sized>(
    inst: &'a Instance,
    alloc: &'a O,
    i: usize,
    j: usize,
) -> impl Iterator<Item = (usize, Value)> + 'a {
    (0..alloc.num_items()).filter_map(move |a| match alloc.owner(a) {
        Some(o) if o == i => Some((a, inst.value(i, j, a) - inst.value(i, i, a))),
        Some(o) if o == j => Some((a, inst.value(i, i, a) - inst.value(i, j, a))),
        _ => None,
    })
}

fn pair_envy<O: Owners + ?Sized>(inst: &Instance, alloc: &O, i: usize, j: usize) -> Value {
    envy_terms(inst, alloc, i, j).map(|(_, c)| c).sum()
}

fn check_pair(inst: &Instance, i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "envy of agent {} towards itself",
            i + 1
        )));
    }
    if i >= inst.agents() || j >= inst.agents() {
        return Err(Error::InvalidArgument("agent index out of range".into()));
    }
    Ok(())
}

/// `V_i(π^{i↔j}) − V_i(π)`; positive means `i` envies `j`.
pub fn envy_amount<O: Owners + ?Sized>(inst: &Instance, alloc: &O, i: usize, j: usize) -> Result<Value> {
    check_pair(inst, i, j)?;
    Ok(pair_envy(inst, alloc, i, j))
}

/// `V_i(π) − V_i(π^{i↔j})` after deleting `removed` from every bundle,
/// evaluated straight from the definition (two full valuations).
pub fn swap_margin_without<O: Owners + ?Sized>(
    inst: &Instance,
    alloc: &O,
    i: usize,
    j: usize,
    removed: &[usize],
) -> Result<Value> {
    check_pair(inst, i, j)?;
    let kept: Vec<Option<usize>> = (0..alloc.num_items())
        .map(|a| if removed.contains(&a) { None } else { alloc.owner(a) })
        .collect();
    let swapped: Vec<Option<usize>> = kept
        .iter()
        .map(|o| {
            o.map(|o| match o {
                o if o == i => j,
                o if o == j => i,
                o => o,
            })
        })
        .collect();
    Ok(inst.total_value(&kept, i) - inst.total_value(&swapped, i))
}

/// Every ordered pair of distinct agents, in lexicographic order.
pub(crate) fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// Agents are envy-free if no agent prefers swapping bundles with another.
pub fn is_ef<O: Owners + ?Sized>(inst: &Instance, alloc: &O) -> Verdict {
    for (i, j) in ordered_pairs(inst.agents()) {
        let envy = pair_envy(inst, alloc, i, j);
        if envy.is_positive() {
            return Verdict::fail(Witness::Envy {
                envious: i,
                envied: j,
                margin: -envy,
            });
        }
    }
    Verdict::pass()
}

/// Larger contribution first, then lower item index.
fn by_contribution_desc(x: &(usize, Value), y: &(usize, Value)) -> Ordering {
    y.1.cmp(&x.1).then(x.0.cmp(&y.0))
}

/// The `k` items whose deletion reduces envy the most, best first.
fn best_removals(mut positive: Vec<(usize, Value)>, k: usize) -> Vec<(usize, Value)> {
    if positive.len() > k && k > 0 {
        positive.select_nth_unstable_by(k - 1, by_contribution_desc);
        positive.truncate(k);
    } else if k == 0 {
        positive.clear();
    }
    positive.sort_by(by_contribution_desc);
    positive
}

/// Envy-freeness up to `k` items.
///
/// A set `C` with `|C| <= k` is deleted from every bundle, so deleted items
/// stop contributing to anyone. Because envy is additive, the best `C` for a
/// pair is its `k` largest positive contributions; the witness keeps the
/// shortest prefix of those that already clears the envy.
pub fn is_ef_k<O: Owners + ?Sized>(inst: &Instance, alloc: &O, k: usize) -> Verdict {
    let mut certificates = Vec::new();
    for (i, j) in ordered_pairs(inst.agents()) {
        let mut envy = Value::ZERO;
        let mut positive = Vec::new();
        for (a, c) in envy_terms(inst, alloc, i, j) {
            envy += c;
            if c.is_positive() {
                positive.push((a, c));
            }
        }
        if !envy.is_positive() {
            continue;
        }
        let mut removed = Vec::new();
        for (a, c) in best_removals(positive, k) {
            if !envy.is_positive() {
                break;
            }
            envy -= c;
            removed.push(a);
        }
        if envy.is_positive() {
            return Verdict::fail(Witness::EnvyAfterRemoval {
                envious: i,
                envied: j,
                removed,
                margin: -envy,
            });
        }
        certificates.push(super::RemovalCertificate {
            envious: i,
            envied: j,
            removed,
            margin: -envy,
        });
    }
    Verdict::pass_with(Witness::Removals { certificates })
}

/// Envy-freeness up to any item, externality-aware.
///
/// For an envious pair, an item is only relevant if deleting it strictly
/// reduces the envy (a positive contribution). Every relevant deletion must
/// leave no envy, i.e. the envy must not exceed the smallest positive
/// contribution. Deletions that leave envy unchanged or larger are exempt.
pub fn is_efx<O: Owners + ?Sized>(inst: &Instance, alloc: &O) -> Verdict {
    for (i, j) in ordered_pairs(inst.agents()) {
        let mut envy = Value::ZERO;
        let mut weakest: Option<(usize, Value)> = None;
        for (a, c) in envy_terms(inst, alloc, i, j) {
            envy += c;
            if c.is_positive() && weakest.is_none_or(|(_, w)| c < w) {
                weakest = Some((a, c));
            }
        }
        if !envy.is_positive() {
            continue;
        }
        let (item, c) = weakest.expect("positive envy has a positive contribution");
        let after = envy - c;
        if after.is_positive() {
            return Verdict::fail(Witness::ItemRemoval {
                envious: i,
                envied: j,
                item,
                margin: -after,
            });
        }
    }
    Verdict::pass()
}

/// `i` and `j` envy each other at the same time somewhere in the allocation.
pub fn mutual_envy_pair<O: Owners + ?Sized>(inst: &Instance, alloc: &O) -> Option<(usize, usize)> {
    let n = inst.agents();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| pair_envy(inst, alloc, i, j).is_positive() && pair_envy(inst, alloc, j, i).is_positive())
}
