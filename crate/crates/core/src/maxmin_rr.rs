//! Max-Min Round Robin for public decision making.
//!
//! Agents take turns in a fixed order. On its turn an agent picks the
//! undecided issue where its best and worst choices differ most and fixes
//! its favourite choice there.

use crate::error::{Error, Result};
use crate::fairness::{UpgradeCheck, Verdict, Witness};
use crate::model::{PdmInstance, PdmOutcome};
use crate::value::Value;

/// `β_i(a) = V_i^max(a) − V_i^min(a)` for every agent and issue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaTable {
    beta: Vec<Vec<Value>>,
}

impl BetaTable {
    pub fn new(pdm: &PdmInstance) -> BetaTable {
        let beta = (0..pdm.agents())
            .map(|i| {
                pdm.issues()
                    .iter()
                    .map(|is| is.max_value(i) - is.min_value(i))
                    .collect()
            })
            .collect();
        BetaTable { beta }
    }

    pub fn get(&self, agent: usize, issue: usize) -> Value {
        self.beta[agent][issue]
    }

    /// Issues by decreasing `β_i`, lowest index first among equals.
    pub fn descending(&self, agent: usize) -> Vec<usize> {
        let row = &self.beta[agent];
        let mut order: Vec<usize> = (0..row.len()).collect();
        order.sort_by(|&x, &y| row[y].cmp(&row[x]));
        order
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pick {
    pub agent: usize,
    pub issue: usize,
    pub choice: usize,
}

fn validate_order(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &j in order {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidArgument(format!(
                "round-robin order must be a permutation of the {n} agents"
            )));
        }
    }
    if order.len() != n {
        return Err(Error::InvalidArgument(format!(
            "round-robin order must be a permutation of the {n} agents"
        )));
    }
    Ok(())
}

/// Runs the algorithm and returns every pick in turn order. `order` holds
/// 0-based agents and defaults to `0, 1, …, n−1`.
pub fn max_min_round_robin_picks(pdm: &PdmInstance, order: Option<&[usize]>) -> Result<Vec<Pick>> {
    let n = pdm.agents();
    let default: Vec<usize> = (0..n).collect();
    let order = order.unwrap_or(&default);
    validate_order(order, n)?;
    let m = pdm.num_issues();
    if m > 0 && n == 0 {
        return Err(Error::InvalidArgument("issues but no agents".into()));
    }
    let beta = BetaTable::new(pdm);
    let ranked: Vec<Vec<usize>> = (0..n).map(|i| beta.descending(i)).collect();
    let mut cursor = vec![0usize; n];
    let mut decided = vec![false; m];
    let mut picks = Vec::with_capacity(m);
    for turn in 0..m {
        let agent = order[turn % n];
        let list = &ranked[agent];
        while decided[list[cursor[agent]]] {
            cursor[agent] += 1;
        }
        let issue = list[cursor[agent]];
        decided[issue] = true;
        let values = &pdm.issues()[issue].values[agent];
        let best = values.iter().max().expect("issues have choices");
        let choice = values.iter().position(|v| v == best).expect("max is present");
        picks.push(Pick { agent, issue, choice });
    }
    Ok(picks)
}

pub fn max_min_round_robin(pdm: &PdmInstance, order: Option<&[usize]>) -> Result<PdmOutcome> {
    let picks = max_min_round_robin_picks(pdm, order)?;
    let mut choices = vec![0; pdm.num_issues()];
    for p in picks {
        choices[p.issue] = p.choice;
    }
    Ok(PdmOutcome { choices })
}

/// GFS1 with maxima and minima taken over each issue's choices. The upgrade
/// moves one issue to the agent's favourite choice.
pub fn gfs1_check_pdm(pdm: &PdmInstance, outcome: &PdmOutcome) -> Verdict {
    let n = pdm.agents();
    let mut certificates = Vec::with_capacity(n);
    for i in 0..n {
        let check = UpgradeCheck::evaluate(
            n,
            pdm.issues()
                .iter()
                .zip(&outcome.choices)
                .map(|(is, &c)| (is.values[i][c], is.max_value(i), is.min_value(i))),
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
