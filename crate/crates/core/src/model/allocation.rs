use crate::error::{Error, Result};

/// Read access to "who owns item `k`", shared by complete allocations and the
/// partial assignments built up inside solvers.
pub trait Owners {
    fn num_items(&self) -> usize;
    fn owner(&self, item: usize) -> Option<usize>;
}

impl Owners for [Option<usize>] {
    fn num_items(&self) -> usize {
        self.len()
    }
    fn owner(&self, item: usize) -> Option<usize> {
        self[item]
    }
}

impl Owners for Vec<Option<usize>> {
    fn num_items(&self) -> usize {
        self.len()
    }
    fn owner(&self, item: usize) -> Option<usize> {
        self[item]
    }
}

/// A complete allocation: every item has exactly one owner.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Allocation {
    agents: usize,
    owner: Vec<usize>,
}

impl Owners for Allocation {
    fn num_items(&self) -> usize {
        self.owner.len()
    }
    fn owner(&self, item: usize) -> Option<usize> {
        Some(self.owner[item])
    }
}

impl Allocation {
    pub fn new(owner: Vec<usize>, agents: usize) -> Result<Allocation> {
        if let Some((k, &j)) = owner.iter().enumerate().find(|(_, &j)| j >= agents) {
            return Err(Error::InvalidArgument(format!(
                "item {k} assigned to agent index {j}, but there are only {agents} agents"
            )));
        }
        Ok(Allocation { agents, owner })
    }

    /// Builds an allocation from bundles of item indices; the bundles must
    /// partition `0..items`.
    pub fn from_bundles(items: usize, bundles: &[Vec<usize>]) -> Result<Allocation> {
        let mut owner = vec![None; items];
        for (j, bundle) in bundles.iter().enumerate() {
            for &k in bundle {
                match owner.get_mut(k) {
                    None => return Err(Error::InvalidArgument(format!("item index {k} out of range"))),
                    Some(Some(prev)) => {
                        return Err(Error::InvalidArgument(format!(
                            "item {k} appears in bundles of agents {prev} and {j}"
                        )))
                    }
                    Some(slot) => *slot = Some(j),
                }
            }
        }
        let owner = owner
            .into_iter()
            .enumerate()
            .map(|(k, o)| o.ok_or_else(|| Error::InvalidArgument(format!("item {k} is not allocated"))))
            .collect::<Result<Vec<_>>>()?;
        Allocation::new(owner, bundles.len())
    }

    /// Completes a partial assignment; fails if any item is unassigned.
    pub fn from_partial(partial: &[Option<usize>], agents: usize) -> Result<Allocation> {
        let owner = partial
            .iter()
            .enumerate()
            .map(|(k, o)| o.ok_or_else(|| Error::Internal(format!("item {k} left unassigned"))))
            .collect::<Result<Vec<_>>>()?;
        Allocation::new(owner, agents)
    }

    /// Decodes the `index`-th allocation in lexicographic order: item 0 is the
    /// most significant base-`agents` digit.
    pub fn from_index(mut index: u64, items: usize, agents: usize) -> Allocation {
        let mut owner = vec![0; items];
        for slot in owner.iter_mut().rev() {
            *slot = (index % agents as u64) as usize;
            index /= agents as u64;
        }
        Allocation { agents, owner }
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn num_items(&self) -> usize {
        self.owner.len()
    }

    #[inline]
    pub fn owner_of(&self, item: usize) -> usize {
        self.owner[item]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.owner
    }

    pub fn bundle(&self, agent: usize) -> Vec<usize> {
        (0..self.owner.len()).filter(|&k| self.owner[k] == agent).collect()
    }

    pub fn bundles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.agents];
        for (k, &j) in self.owner.iter().enumerate() {
            out[j].push(k);
        }
        out
    }

    /// `π^{i↔j}`: agents `i` and `j` exchange bundles, everyone else keeps theirs.
    pub fn swap(&self, i: usize, j: usize) -> Result<Allocation> {
        if i == j {
            return Err(Error::InvalidArgument(format!("cannot swap agent {i} with itself")));
        }
        if i >= self.agents || j >= self.agents {
            return Err(Error::InvalidArgument(format!("agent index out of range: {i}, {j}")));
        }
        let owner = self
            .owner
            .iter()
            .map(|&o| match o {
                o if o == i => j,
                o if o == j => i,
                o => o,
            })
            .collect();
        Ok(Allocation {
            agents: self.agents,
            owner,
        })
    }

    pub fn to_partial(&self) -> Vec<Option<usize>> {
        self.owner.iter().map(|&j| Some(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn swap_exchanges_two_bundles() {
        let pi = Allocation::from_bundles(3, &[vec![0, 1], vec![2]]).unwrap();
        let swapped = pi.swap(0, 1).unwrap();
        assert_eq!(swapped.bundles(), vec![vec![2], vec![0, 1]]);

        let three = Allocation::from_bundles(3, &[vec![0], vec![1], vec![2]]).unwrap();
        let s = three.swap(0, 2).unwrap();
        assert_eq!(s.bundles(), vec![vec![2], vec![1], vec![0]]);
        assert!(three.swap(1, 1).is_err());
    }

    #[test]
    fn bundles_must_partition() {
        assert!(Allocation::from_bundles(2, &[vec![0], vec![0, 1]]).is_err());
        assert!(Allocation::from_bundles(2, &[vec![0], vec![]]).is_err());
        assert!(Allocation::from_bundles(1, &[vec![3]]).is_err());
        assert!(Allocation::new(vec![0, 2], 2).is_err());
        let empty_bundle = Allocation::from_bundles(2, &[vec![0, 1], vec![]]).unwrap();
        assert_eq!(empty_bundle.bundle(1), Vec::<usize>::new());
    }

    #[test]
    fn index_decoding_is_lexicographic() {
        let a = Allocation::from_index(5, 3, 2);
        assert_eq!(a.assignment(), &[1, 0, 1]);
        assert_eq!(Allocation::from_index(0, 0, 3).num_items(), 0);
    }

    proptest! {
        #[test]
        fn swap_is_an_involution(
            owner in proptest::collection::vec(0usize..4, 0..12),
            i in 0usize..4,
            j in 0usize..4,
        ) {
            prop_assume!(i != j);
            let pi = Allocation::new(owner, 4).unwrap();
            let s = pi.swap(i, j).unwrap();
            prop_assert_eq!(s.swap(i, j).unwrap(), pi.clone());
            for other in (0..4).filter(|&x| x != i && x != j) {
                prop_assert_eq!(s.bundle(other), pi.bundle(other));
            }
            prop_assert_eq!(s.bundle(i), pi.bundle(j));
        }
    }
}
