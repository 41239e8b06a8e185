//! Instances, allocations and additive valuations with externalities.
//!
//! Agent `i` derives `value(i, j, a)` when item `a` is owned by agent `j`,
//! whether or not `j == i`. Agents are 0-based here and 1-based in every file
//! format.

mod allocation;
pub mod fixtures;
pub mod generate;
pub mod io;
mod pdm;

pub use allocation::{Allocation, Owners};
pub use pdm::{Issue, PdmInstance, PdmOutcome};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::value::Value;

/// `n` agents, `m` items and the `n × m × n` valuation tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    agents: usize,
    items: Vec<String>,
    /// Flat `[observer][item][owner]`.
    values: Vec<Value>,
}

impl Instance {
    /// Builds an instance from `values[i][k][j]` = value to agent `i` of item
    /// `k` when owned by agent `j`.
    pub fn new(agents: usize, items: Vec<String>, values: Vec<Vec<Vec<Value>>>) -> Result<Instance> {
        if agents == 0 {
            return Err(Error::schema("agents", "at least one agent is required"));
        }
        let mut seen = HashSet::with_capacity(items.len());
        for (k, name) in items.iter().enumerate() {
            if !seen.insert(name.as_str()) {
                return Err(Error::schema(format!("items[{k}]"), format!("duplicate item {name:?}")));
            }
        }
        let m = items.len();
        if values.len() != agents {
            return Err(Error::Dimension {
                path: "values".into(),
                expected: agents,
                found: values.len(),
            });
        }
        let mut flat = Vec::with_capacity(agents * m * agents);
        for (i, row) in values.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::Dimension {
                    path: format!("values[{i}]"),
                    expected: m,
                    found: row.len(),
                });
            }
            for (k, cell) in row.into_iter().enumerate() {
                if cell.len() != agents {
                    return Err(Error::Dimension {
                        path: format!("values[{i}][{k}]"),
                        expected: agents,
                        found: cell.len(),
                    });
                }
                flat.extend(cell);
            }
        }
        Ok(Instance {
            agents,
            items,
            values: flat,
        })
    }

    /// Builds an instance from a function `(observer, item, owner) -> value`.
    pub fn from_fn<F>(agents: usize, items: Vec<String>, f: F) -> Result<Instance>
    where
        F: Fn(usize, usize, usize) -> Value,
    {
        let m = items.len();
        let values = (0..agents)
            .map(|i| (0..m).map(|k| (0..agents).map(|j| f(i, k, j)).collect()).collect())
            .collect();
        Instance::new(agents, items, values)
    }

    /// Items named `a1, a2, ...`.
    pub fn default_item_names(m: usize) -> Vec<String> {
        (1..=m).map(|k| format!("a{k}")).collect()
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn num_items(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn item_index(&self, name: &str) -> Option<usize> {
        self.items.iter().position(|it| it == name)
    }

    #[inline]
    pub fn value(&self, observer: usize, owner: usize, item: usize) -> Value {
        self.values[(observer * self.items.len() + item) * self.agents + owner]
    }

    /// Values agent `observer` gets from `item` under each possible owner.
    #[inline]
    pub fn item_row(&self, observer: usize, item: usize) -> &[Value] {
        let start = (observer * self.items.len() + item) * self.agents;
        &self.values[start..start + self.agents]
    }

    pub fn max_value(&self, observer: usize, item: usize) -> Value {
        *self.item_row(observer, item).iter().max().expect("at least one agent")
    }

    pub fn min_value(&self, observer: usize, item: usize) -> Value {
        *self.item_row(observer, item).iter().min().expect("at least one agent")
    }

    /// `V_i(π)`: the exact sum over assigned items of the observer's value
    /// under the item's owner. Unassigned items contribute nothing.
    pub fn total_value<O: Owners + ?Sized>(&self, alloc: &O, observer: usize) -> Value {
        (0..self.num_items())
            .filter_map(|k| alloc.owner(k).map(|j| self.value(observer, j, k)))
            .sum()
    }

    pub fn is_binary(&self) -> bool {
        self.values.iter().all(|v| *v == Value::ZERO || *v == Value::ONE)
    }

    /// Every agent weakly prefers to own each item itself.
    pub fn is_no_chore(&self) -> bool {
        (0..self.agents).all(|i| {
            (0..self.num_items()).all(|k| {
                let own = self.value(i, i, k);
                self.item_row(i, k).iter().all(|v| own >= *v)
            })
        })
    }

    /// `V_i(i,a) = V_j(j,a)` and `V_i(j,a) = V_j(i,a)` for every pair and item.
    pub fn is_symmetric(&self) -> bool {
        let n = self.agents;
        (0..self.num_items()).all(|k| {
            (0..n).all(|i| {
                (0..n).all(|j| self.value(i, i, k) == self.value(j, j, k) && self.value(i, j, k) == self.value(j, i, k))
            })
        })
    }

    /// Sub-instance over the listed items, in the given order.
    pub fn restrict(&self, items: &[usize]) -> Instance {
        let names = items.iter().map(|&k| self.items[k].clone()).collect();
        Instance::from_fn(self.agents, names, |i, k, j| self.value(i, j, items[k]))
            .expect("restriction of a valid instance is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimensions() {
        let v = Value::ZERO;
        let err = Instance::new(2, vec!["a".into()], vec![vec![vec![v, v]]; 3]).unwrap_err();
        assert!(matches!(
            err,
            Error::Dimension {
                expected: 2,
                found: 3,
                ..
            }
        ));
        let err = Instance::new(2, vec!["a".into()], vec![vec![vec![v, v]], vec![vec![v]]]).unwrap_err();
        assert!(err.to_string().contains("values[1][0]"));
        let err = Instance::new(1, vec!["a".into(), "a".into()], vec![vec![vec![v], vec![v]]]).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn empty_item_instance_is_valid() {
        let inst = Instance::new(1, vec![], vec![vec![]]).unwrap();
        assert_eq!(inst.num_items(), 0);
        let alloc = Allocation::new(vec![], 1).unwrap();
        assert_eq!(inst.total_value(&alloc, 0), Value::ZERO);
    }

    #[test]
    fn total_value_matches_hand_sums() {
        let inst = fixtures::swap_envy_instance();
        let pi = fixtures::swap_envy_allocation();
        assert_eq!(inst.total_value(&pi, 1), Value::from(5));
        assert_eq!(inst.total_value(&pi, 0), Value::from(3 + 1 + 1));

        let big = fixtures::no_efx_instance();
        let all_to_first = Allocation::new(vec![0; 7], 3).unwrap();
        assert_eq!(big.total_value(&all_to_first, 0), Value::from(143));
    }

    #[test]
    fn restrict_keeps_values() {
        let inst = fixtures::swap_envy_instance();
        let sub = inst.restrict(&[2, 0]);
        assert_eq!(sub.items(), ["c", "a"]);
        assert_eq!(sub.value(1, 0, 1), inst.value(1, 0, 0));
    }
}
