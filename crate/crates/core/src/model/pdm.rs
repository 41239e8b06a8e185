use super::{Allocation, Instance};
use crate::error::{Error, Result};
use crate::value::Value;

/// One public issue: a list of choices and each agent's value for each choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub name: String,
    pub choices: Vec<String>,
    /// `values[i][t]`: value to agent `i` if choice `t` is selected.
    pub values: Vec<Vec<Value>>,
}

impl Issue {
    pub fn max_value(&self, agent: usize) -> Value {
        *self.values[agent].iter().max().expect("issue has at least one choice")
    }

    pub fn min_value(&self, agent: usize) -> Value {
        *self.values[agent].iter().min().expect("issue has at least one choice")
    }
}

/// A public decision making instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdmInstance {
    agents: usize,
    issues: Vec<Issue>,
}

/// One selected choice index per issue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdmOutcome {
    pub choices: Vec<usize>,
}

impl PdmInstance {
    pub fn new(agents: usize, issues: Vec<Issue>) -> Result<PdmInstance> {
        if agents == 0 {
            return Err(Error::schema("agents", "at least one agent is required"));
        }
        for (a, issue) in issues.iter().enumerate() {
            if issue.choices.is_empty() {
                return Err(Error::schema(
                    format!("issues[{a}].choices"),
                    "an issue needs at least one choice",
                ));
            }
            if issue.values.len() != agents {
                return Err(Error::Dimension {
                    path: format!("issues[{a}].values"),
                    expected: agents,
                    found: issue.values.len(),
                });
            }
            for (i, row) in issue.values.iter().enumerate() {
                if row.len() != issue.choices.len() {
                    return Err(Error::Dimension {
                        path: format!("issues[{a}].values[{i}]"),
                        expected: issue.choices.len(),
                        found: row.len(),
                    });
                }
            }
        }
        Ok(PdmInstance { agents, issues })
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn issues(&self) -> &[Issue] {
        &self.issues
    }

    pub fn num_issues(&self) -> usize {
        self.issues.len()
    }

    pub fn validate_outcome(&self, outcome: &PdmOutcome) -> Result<()> {
        if outcome.choices.len() != self.issues.len() {
            return Err(Error::Dimension {
                path: "choices".into(),
                expected: self.issues.len(),
                found: outcome.choices.len(),
            });
        }
        for (a, (&t, issue)) in outcome.choices.iter().zip(&self.issues).enumerate() {
            if t >= issue.choices.len() {
                return Err(Error::InvalidArgument(format!(
                    "issue {a} has {} choices, outcome selects index {t}",
                    issue.choices.len()
                )));
            }
        }
        Ok(())
    }

    /// `V_i(π) = Σ_a V_i(π(a))`.
    pub fn total_value(&self, outcome: &PdmOutcome, agent: usize) -> Value {
        self.issues
            .iter()
            .zip(&outcome.choices)
            .map(|(issue, &t)| issue.values[agent][t])
            .sum()
    }
}

impl Instance {
    /// Each item becomes an issue whose choice `j` means "owned by agent `j`".
    pub fn to_public_decision(&self) -> PdmInstance {
        let n = self.agents();
        let choices: Vec<String> = (1..=n).map(|j| j.to_string()).collect();
        let issues = (0..self.num_items())
            .map(|k| Issue {
                name: self.items()[k].clone(),
                choices: choices.clone(),
                values: (0..n).map(|i| self.item_row(i, k).to_vec()).collect(),
            })
            .collect();
        PdmInstance::new(n, issues).expect("an allocation instance always maps to a valid PDM instance")
    }
}

impl Allocation {
    /// Image of this allocation under the allocation/PDM bijection.
    pub fn to_outcome(&self) -> PdmOutcome {
        PdmOutcome {
            choices: self.assignment().to_vec(),
        }
    }

    pub fn from_outcome(outcome: &PdmOutcome, agents: usize) -> Result<Allocation> {
        Allocation::new(outcome.choices.clone(), agents)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;
    use crate::model::generate::{random_allocation, random_instance, GenFlags};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn conversion_keeps_item_columns() {
        let inst = fixtures::swap_envy_instance();
        let pdm = inst.to_public_decision();
        assert_eq!(pdm.num_issues(), 3);
        let a = &pdm.issues()[0];
        assert_eq!(a.choices.len(), 2);
        // choice "2" of issue a: values (1, 4) for agents 1 and 2
        assert_eq!(a.values[0][1], Value::from(1));
        assert_eq!(a.values[1][1], Value::from(4));
    }

    #[test]
    fn empty_instance_maps_to_empty_pdm() {
        let inst = Instance::new(2, vec![], vec![vec![], vec![]]).unwrap();
        assert_eq!(inst.to_public_decision().num_issues(), 0);
    }

    #[test]
    fn bijection_preserves_every_agent_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..50 {
            let inst = random_instance(
                1 + seed as usize % 4,
                seed as usize % 9,
                -10..=10,
                GenFlags::default(),
                seed,
            )
            .unwrap();
            let pdm = inst.to_public_decision();
            let alloc = random_allocation(&inst, &mut rng);
            let outcome = alloc.to_outcome();
            pdm.validate_outcome(&outcome).unwrap();
            for i in 0..inst.agents() {
                assert_eq!(inst.total_value(&alloc, i), pdm.total_value(&outcome, i));
            }
            assert_eq!(Allocation::from_outcome(&outcome, inst.agents()).unwrap(), alloc);
        }
    }

    #[test]
    fn rejects_empty_choice_sets() {
        let issue = Issue {
            name: "x".into(),
            choices: vec![],
            values: vec![vec![]],
        };
        assert!(PdmInstance::new(1, vec![issue]).is_err());
    }
}
