//! Small reference instances with known fairness behaviour. The same data
//! ships as JSON under `fixtures/` in the repository root.

use super::{Allocation, Instance};
use crate::value::Value;

fn grid(rows: &[&[&[i64]]]) -> Vec<Vec<Vec<Value>>> {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|cell| cell.iter().map(|&v| Value::from(v)).collect())
                .collect()
        })
        .collect()
}

fn names(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Two agents, items `a, b, c`. Removing an item can increase envy here,
/// which is what separates the externality-aware EFX from the naive one.
pub fn swap_envy_instance() -> Instance {
    Instance::new(
        2,
        names(&["a", "b", "c"]),
        grid(&[&[&[3, 1], &[1, 2], &[2, 1]], &[&[1, 4], &[2, 1], &[3, 2]]]),
    )
    .expect("valid fixture")
}

/// Agent 1 gets `{a, b}`, agent 2 gets `{c}`; agent 2 envies agent 1 by 3.
pub fn swap_envy_allocation() -> Allocation {
    Allocation::new(vec![0, 0, 1], 2).expect("valid fixture")
}

/// Agent 1 gets `{b, c}`, agent 2 gets `{a}`: EF1 but not EFX.
pub fn swap_envy_ef1_allocation() -> Allocation {
    Allocation::new(vec![1, 0, 0], 2).expect("valid fixture")
}

/// Three agents, six identical items `a1..a6` and one contested item `g`.
/// No allocation of this instance is EFX.
pub fn no_efx_instance() -> Instance {
    let a: &[&[i64]] = &[&[21, 16, 16], &[16, 21, 16], &[16, 16, 21]];
    let g: &[&[i64]] = &[&[17, 16, 16], &[16, 24, 0], &[16, 0, 24]];
    let mut items: Vec<String> = (1..=6).map(|k| format!("a{k}")).collect();
    items.push("g".into());
    Instance::from_fn(3, items, |i, k, j| Value::from(if k < 6 { a[i][j] } else { g[i][j] })).expect("valid fixture")
}

/// Two agents, two items; agent 1 loses 1 for every item it owns, agent 2
/// is indifferent to everything. Splitting the items is EF but not PROP-Max.
pub fn ef_not_prop_max_instance() -> Instance {
    Instance::new(
        2,
        names(&["a1", "a2"]),
        grid(&[&[&[-1, 0], &[-1, 0]], &[&[0, 0], &[0, 0]]]),
    )
    .expect("valid fixture")
}

pub fn ef_not_prop_max_allocation() -> Allocation {
    Allocation::new(vec![0, 1], 2).expect("valid fixture")
}

/// Three agents, one item; only agent 1 cares, and only when agent 2 owns it.
/// Giving the item to agent 3 is EF but neither PROP-Max nor PROP-Ave.
pub fn ef_not_prop_three_instance() -> Instance {
    Instance::from_fn(3, names(&["a"]), |i, _, j| Value::from(i64::from(i == 0 && j == 1))).expect("valid fixture")
}

pub fn ef_not_prop_three_allocation() -> Allocation {
    Allocation::new(vec![2], 3).expect("valid fixture")
}
