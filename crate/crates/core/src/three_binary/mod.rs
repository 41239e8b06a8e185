//! EF1 for three agents with binary valuations and no chores.
//!
//! Envy-free blocks are peeled off by reduction rules; the few remaining items
//! are assigned by search, and deferred items are placed last on the side that
//! keeps EF1.

pub mod families;
pub mod kernel;
pub mod reductions;
pub mod types;

pub use kernel::{solve_kernel, MAX_KERNEL};
pub use reductions::{apply_reductions, Leftover, Reduced, ReductionTrace, Rule, RuleStep};
pub use types::{classify, TypeCategory, TypeMatrix, KERNEL_TYPES};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fairness::{envy_amount, is_ef_k};
use crate::model::{Allocation, Instance};

/// Places deferred items one at a time. The item goes to the candidate that
/// envies the other, or to the lower-indexed one when neither envies.
/// Falls back to trying every placement if the result is not EF1.
fn reinsert_leftovers(
    inst: &Instance,
    partial: &mut [Option<usize>],
    leftovers: &[Leftover],
    trace: &mut ReductionTrace,
) -> Result<()> {
    let base = partial.to_vec();
    for l in leftovers {
        let (j, k) = l.candidates();
        let to = if envy_amount(inst, &*partial, j, k)?.is_positive() {
            j
        } else if envy_amount(inst, &*partial, k, j)?.is_positive() {
            k
        } else {
            j
        };
        partial[l.item] = Some(to);
        trace.leftover_assignment.push((l.item, to));
    }
    if is_ef_k(inst, &*partial, 1).holds {
        return Ok(());
    }
    trace.reinsertion_fallback = true;
    for choice in leftovers
        .iter()
        .map(|l| [l.candidates().0, l.candidates().1])
        .multi_cartesian_product()
    {
        let mut attempt = base.clone();
        for (l, &to) in leftovers.iter().zip(&choice) {
            attempt[l.item] = Some(to);
        }
        if is_ef_k(inst, &attempt, 1).holds {
            partial.copy_from_slice(&attempt);
            trace.leftover_assignment = leftovers.iter().map(|l| l.item).zip(choice).collect();
            return Ok(());
        }
    }
    Err(Error::Internal("no placement of deferred items keeps EF1".into()))
}

/// EF1 allocation with the steps that produced it.
pub fn solve_three_binary_traced(inst: &Instance, mode: Execution) -> Result<(Allocation, ReductionTrace)> {
    let Reduced {
        mut partial,
        kernel,
        leftovers,
        mut trace,
        types,
    } = apply_reductions(inst)?;
    let placed = solve_kernel(&types, &kernel, mode)?;
    for &(a, j) in &placed {
        partial[a] = Some(j);
    }
    trace.kernel_assignment = placed;
    reinsert_leftovers(inst, &mut partial, &leftovers, &mut trace)?;
    Ok((Allocation::from_partial(&partial, 3)?, trace))
}

/// EF1 allocation for three agents with 0/1 values and no chores.
pub fn solve_three_binary(inst: &Instance) -> Result<Allocation> {
    solve_three_binary_traced(inst, Execution::default()).map(|(pi, _)| pi)
}
