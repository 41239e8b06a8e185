//! Rules that assign items without creating envy, leaving a small kernel.
//!
//! Every rule assigns a block of items such that
//! `Δ_xy(block_x) − Δ_xy(block_y) >= 0` for all pairs. These quantities add up over disjoint blocks, so any
//! EF1 allocation of the rest stays EF1 after the blocks are added back.

use std::collections::BTreeMap;

use serde_json::{json, Value as Json};

use super::types::{type_matrix, validate, TypeMatrix};
use crate::error::Result;
use crate::model::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// R1: a column of ones; the column's agent takes the item.
    ColumnOfOnes,
    /// R2: a zero on the diagonal, so that agent is indifferent.
    ZeroDiagonal,
    /// R3: a row of ones, so that agent is indifferent.
    RowOfOnes,
    /// Two pooled items of the same indifferent agent, one to each other agent.
    PoolPair,
    /// R4: `3k` items of one type, `k` to each agent.
    SameType,
    /// R5: three items whose rows `1, 2, 3` are unit rows, one per agent.
    UnitRows,
    /// R6: any pair of items that two agents can take without envy.
    EnvyFreePair,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::ColumnOfOnes => "R1",
            Rule::ZeroDiagonal => "R2",
            Rule::RowOfOnes => "R3",
            Rule::PoolPair => "pool-pair",
            Rule::SameType => "R4",
            Rule::UnitRows => "R5",
            Rule::EnvyFreePair => "R6",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleStep {
    pub rule: Rule,
    /// `(item, agent)` pairs fixed by this step.
    pub assigned: Vec<(usize, usize)>,
    /// Item set aside in the pool of the given indifferent agent.
    pub deferred: Option<(usize, usize)>,
}

/// An item that only one of two agents can take without envy from the
/// other; `indifferent` does not care who gets it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Leftover {
    pub item: usize,
    pub indifferent: usize,
}

impl Leftover {
    /// The two agents that may receive the item, lower index first.
    pub fn candidates(&self) -> (usize, usize) {
        let mut others = (0..3).filter(|&x| x != self.indifferent);
        (others.next().expect("3 agents"), others.next().expect("3 agents"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<RuleStep>,
    pub kernel: Vec<usize>,
    pub leftovers: Vec<Leftover>,
    /// Kernel assignment, filled in by the solver.
    pub kernel_assignment: Vec<(usize, usize)>,
    /// Final placement of each leftover, filled in by the solver.
    pub leftover_assignment: Vec<(usize, usize)>,
    /// Leftovers had to be re-placed jointly.
    pub reinsertion_fallback: bool,
}

impl ReductionTrace {
    /// JSON with item names and 1-based agents.
    pub fn to_json(&self, inst: &Instance) -> Json {
        let name = |a: usize| inst.items()[a].clone();
        let pairs = |v: &[(usize, usize)]| {
            v.iter()
                .map(|&(a, j)| json!({ "item": name(a), "agent": j + 1 }))
                .collect::<Vec<_>>()
        };
        json!({
            "steps": self.steps.iter().map(|s| {
                let mut step = json!({ "rule": s.rule.label(), "assigned": pairs(&s.assigned) });
                if let Some((a, i)) = s.deferred {
                    step["deferred"] = json!({ "item": name(a), "indifferent": i + 1 });
                }
                step
            }).collect::<Vec<_>>(),
            "kernel": self.kernel.iter().map(|&a| name(a)).collect::<Vec<_>>(),
            "leftovers": self.leftovers.iter().map(|l| json!({
                "item": name(l.item), "indifferent": l.indifferent + 1,
            })).collect::<Vec<_>>(),
            "kernel_assignment": pairs(&self.kernel_assignment),
            "leftover_assignment": pairs(&self.leftover_assignment),
            "reinsertion_fallback": self.reinsertion_fallback,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Reduced {
    pub partial: Vec<Option<usize>>,
    pub kernel: Vec<usize>,
    pub leftovers: Vec<Leftover>,
    pub trace: ReductionTrace,
    pub types: Vec<TypeMatrix>,
}

/// `Δ_xy` sums of a block are nonnegative for every ordered pair.
pub fn block_is_envy_free(types: &[TypeMatrix], block: &[(usize, usize)]) -> bool {
    (0..3).all(|x| {
        (0..3).all(|y| {
            x == y
                || block
                    .iter()
                    .map(|&(a, j)| {
                        if j == x {
                            types[a].delta(x, y)
                        } else if j == y {
                            -types[a].delta(x, y)
                        } else {
                            0
                        }
                    })
                    .sum::<i32>()
                    >= 0
        })
    })
}

struct State<'a> {
    types: &'a [TypeMatrix],
    partial: Vec<Option<usize>>,
    remaining: Vec<usize>,
    steps: Vec<RuleStep>,
}

impl State<'_> {
    fn assign(&mut self, rule: Rule, block: Vec<(usize, usize)>) {
        debug_assert!(
            block_is_envy_free(self.types, &block),
            "{rule:?} assigned an envied block"
        );
        for &(a, j) in &block {
            self.partial[a] = Some(j);
        }
        self.remaining.retain(|a| !block.iter().any(|&(b, _)| b == *a));
        self.steps.push(RuleStep {
            rule,
            assigned: block,
            deferred: None,
        });
    }

    fn same_type(&mut self) -> bool {
        let mut groups: BTreeMap<TypeMatrix, Vec<usize>> = BTreeMap::new();
        for &a in &self.remaining {
            groups.entry(self.types[a]).or_default().push(a);
        }
        let mut groups: Vec<Vec<usize>> = groups.into_values().filter(|g| g.len() >= 3).collect();
        if groups.is_empty() {
            return false;
        }
        groups.sort_by_key(|g| g[0]);
        for g in groups {
            let take = g.len() / 3 * 3;
            let block = g[..take].iter().enumerate().map(|(t, &a)| (a, t % 3)).collect();
            self.assign(Rule::SameType, block);
        }
        true
    }

    fn unit_rows(&mut self) -> bool {
        let unit = |a: usize, i: usize| (0..3).all(|j| self.types[a].0[i][j] == u8::from(i == j));
        let rem = &self.remaining;
        for &a in rem.iter().filter(|&&a| unit(a, 0)) {
            for &b in rem.iter().filter(|&&b| b != a && unit(b, 1)) {
                if let Some(&c) = rem.iter().find(|&&c| c != a && c != b && unit(c, 2)) {
                    self.assign(Rule::UnitRows, vec![(a, 0), (b, 1), (c, 2)]);
                    return true;
                }
            }
        }
        false
    }

    fn envy_free_pair(&mut self) -> bool {
        let rem = &self.remaining;
        for (p, &a) in rem.iter().enumerate() {
            for &b in &rem[p + 1..] {
                for i in 0..3 {
                    for j in (0..3).filter(|&j| j != i) {
                        let block = vec![(a, i), (b, j)];
                        if block_is_envy_free(self.types, &block) {
                            self.assign(Rule::EnvyFreePair, block);
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

/// Applies the rules in the order R1, R2, R3, R4, R5, R6 until none applies.
///
/// R1–R3 look at one item at a time, so a single pass over the items reaches
/// their fixpoint. An item that some agent `i` is indifferent to goes to one of
/// the other agents `j < k` if the remaining one would not envy that; otherwise
/// it waits in `i`'s pool, and pool items are handed out in pairs, first to `j`
/// then to `k`. Each pool keeps at most one leftover.
pub fn apply_reductions(inst: &Instance) -> Result<Reduced> {
    validate(inst)?;
    let m = inst.num_items();
    let types = (0..m).map(|a| type_matrix(inst, a)).collect::<Result<Vec<_>>>()?;
    let mut st = State {
        types: &types,
        partial: vec![None; m],
        remaining: Vec::new(),
        steps: Vec::new(),
    };
    let mut pools: [Option<usize>; 3] = [None; 3];
    for (a, &t) in types.iter().enumerate() {
        if let Some(j) = t.column_of_ones() {
            st.assign(Rule::ColumnOfOnes, vec![(a, j)]);
            continue;
        }
        let (rule, i) = match (t.zero_diagonal(), t.row_of_ones()) {
            (Some(i), _) => (Rule::ZeroDiagonal, i),
            (None, Some(i)) => (Rule::RowOfOnes, i),
            (None, None) => {
                st.remaining.push(a);
                continue;
            }
        };
        let left = Leftover {
            item: a,
            indifferent: i,
        };
        let (j, k) = left.candidates();
        if t.delta(k, j) == 0 {
            st.assign(rule, vec![(a, j)]);
        } else if t.delta(j, k) == 0 {
            st.assign(rule, vec![(a, k)]);
        } else if let Some(b) = pools[i].take() {
            st.assign(Rule::PoolPair, vec![(b, j), (a, k)]);
        } else {
            pools[i] = Some(a);
            st.steps.push(RuleStep {
                rule,
                assigned: Vec::new(),
                deferred: Some((a, i)),
            });
        }
    }
    while st.same_type() || st.unit_rows() || st.envy_free_pair() {}

    let leftovers: Vec<Leftover> = pools
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.map(|item| Leftover { item, indifferent: i }))
        .collect();
    let kernel = st.remaining.clone();
    let trace = ReductionTrace {
        steps: st.steps.clone(),
        kernel: kernel.clone(),
        leftovers: leftovers.clone(),
        ..Default::default()
    };
    Ok(Reduced {
        partial: st.partial,
        kernel,
        leftovers,
        trace,
        types,
    })
}
