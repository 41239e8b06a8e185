//! Seeded random instances for tests, audits and benchmarks.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Allocation, Instance, Issue, PdmInstance};
use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenFlags {
    /// Every value in `{0, 1}`.
    pub binary: bool,
    /// `V_i(i,a) >= V_i(j,a)`, enforced by raising the diagonal to the row max.
    pub no_chore: bool,
    /// Clamp the lower end of the range to zero.
    pub nonneg: bool,
}

impl GenFlags {
    pub fn binary_no_chore() -> GenFlags {
        GenFlags {
            binary: true,
            no_chore: true,
            nonneg: false,
        }
    }
}

fn effective_range(range: &RangeInclusive<i64>, flags: GenFlags) -> Result<RangeInclusive<i64>> {
    let (mut lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty value range {lo}..={hi}")));
    }
    if flags.nonneg {
        if hi < 0 {
            return Err(Error::InvalidArgument(format!(
                "nonneg values requested but range {lo}..={hi} is negative"
            )));
        }
        lo = lo.max(0);
    }
    if flags.binary {
        if lo > 0 || hi < 1 {
            return Err(Error::InvalidArgument(format!(
                "binary values requested but range {lo}..={hi} excludes 0 or 1"
            )));
        }
        return Ok(0..=1);
    }
    Ok(lo..=hi)
}

/// Deterministic for a fixed `seed`.
pub fn random_instance(
    agents: usize,
    items: usize,
    range: RangeInclusive<i64>,
    flags: GenFlags,
    seed: u64,
) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance_with(&mut rng, agents, items, &range, flags)
}

pub fn random_instance_with<R: Rng>(
    rng: &mut R,
    agents: usize,
    items: usize,
    range: &RangeInclusive<i64>,
    flags: GenFlags,
) -> Result<Instance> {
    if agents == 0 {
        return Err(Error::InvalidArgument("at least one agent is required".into()));
    }
    let range = effective_range(range, flags)?;
    let n = agents;
    let mut raw = vec![0i64; n * items * n];
    for slot in raw.iter_mut() {
        *slot = rng.random_range(range.clone());
    }
    if flags.no_chore {
        for i in 0..n {
            for k in 0..items {
                let row = &mut raw[(i * items + k) * n..(i * items + k + 1) * n];
                let max = *row.iter().max().expect("n >= 1");
                row[i] = max;
            }
        }
    }
    Instance::from_fn(n, Instance::default_item_names(items), |i, k, j| {
        Value::from(raw[(i * items + k) * n + j])
    })
}

/// Uniformly random complete allocation.
pub fn random_allocation<R: Rng>(inst: &Instance, rng: &mut R) -> Allocation {
    let owner = (0..inst.num_items())
        .map(|_| rng.random_range(0..inst.agents()))
        .collect();
    Allocation::new(owner, inst.agents()).expect("owners drawn in range")
}

/// Random public decision instance with `1..=max_choices` choices per issue.
pub fn random_pdm<R: Rng>(
    rng: &mut R,
    agents: usize,
    issues: usize,
    max_choices: usize,
    range: &RangeInclusive<i64>,
) -> Result<PdmInstance> {
    if max_choices == 0 {
        return Err(Error::InvalidArgument("issues need at least one choice".into()));
    }
    let range = effective_range(range, GenFlags::default())?;
    let issues = (0..issues)
        .map(|a| {
            let t = rng.random_range(1..=max_choices);
            Issue {
                name: format!("a{}", a + 1),
                choices: (1..=t).map(|c| format!("c{c}")).collect(),
                values: (0..agents)
                    .map(|_| (0..t).map(|_| Value::from(rng.random_range(range.clone()))).collect())
                    .collect(),
            }
        })
        .collect();
    PdmInstance::new(agents, issues)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_seed() {
        let a = random_instance(3, 5, 0..=1, GenFlags::binary_no_chore(), 7).unwrap();
        let b = random_instance(3, 5, 0..=1, GenFlags::binary_no_chore(), 7).unwrap();
        assert_eq!(a, b);
        assert!(a.is_binary());
    }

    #[test]
    fn no_chore_repair_holds() {
        for seed in 0..20 {
            let inst = random_instance(
                4,
                6,
                -5..=5,
                GenFlags {
                    no_chore: true,
                    ..Default::default()
                },
                seed,
            )
            .unwrap();
            assert!(inst.is_no_chore());
        }
    }

    #[test]
    fn values_stay_in_range() {
        let inst = random_instance(2, 10, -10..=10, GenFlags::default(), 99).unwrap();
        for i in 0..2 {
            for k in 0..10 {
                for j in 0..2 {
                    let v = inst.value(i, j, k);
                    assert!(v >= Value::from(-10) && v <= Value::from(10));
                }
            }
        }
        let nonneg = random_instance(
            2,
            10,
            -10..=10,
            GenFlags {
                nonneg: true,
                ..Default::default()
            },
            1,
        )
        .unwrap();
        assert!((0..10).all(|k| nonneg.min_value(0, k) >= Value::ZERO));
    }

    #[test]
    fn contradictory_flags_are_rejected() {
        let binary = GenFlags {
            binary: true,
            ..Default::default()
        };
        assert!(random_instance(2, 3, 2..=5, binary, 0).is_err());
        assert!(random_instance(2, 3, RangeInclusive::new(5, 2), GenFlags::default(), 0).is_err());
        let nonneg = GenFlags {
            nonneg: true,
            ..Default::default()
        };
        assert!(random_instance(2, 3, -5..=-1, nonneg, 0).is_err());
        assert!(random_instance(0, 3, 0..=1, GenFlags::default(), 0).is_err());
    }
}
