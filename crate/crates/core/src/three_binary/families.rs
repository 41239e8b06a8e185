//! Families of kernel item multisets, instantiated with every multiplicity
//! vector in `{0,1,2}` per type.

use super::types::TypeMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Any,
    Positive,
    AtMostOne,
    AtMostTwo,
}

impl Bound {
    fn admits(self, total: usize) -> bool {
        match self {
            Bound::Any => true,
            Bound::Positive => total > 0,
            Bound::AtMostOne => total <= 1,
            Bound::AtMostTwo => total <= 2,
        }
    }
}

/// One category of a family: its types and a bound on their total count.
#[derive(Clone, Debug)]
pub struct Group {
    pub types: Vec<TypeMatrix>,
    pub bound: Bound,
}

#[derive(Clone, Debug)]
pub struct Family {
    pub name: &'static str,
    pub groups: Vec<Group>,
}

/// Largest multiplicity of a single type in an instantiation.
pub const MAX_MULTIPLICITY: usize = 2;

impl Family {
    /// Every item list obtained by choosing each type's multiplicity in
    /// `0..=MAX_MULTIPLICITY` subject to the group bounds.
    pub fn instantiations(&self) -> Vec<Vec<TypeMatrix>> {
        let sizes: Vec<usize> = self.groups.iter().map(|g| g.types.len()).collect();
        let slots: usize = sizes.iter().sum();
        let base = MAX_MULTIPLICITY + 1;
        let mut out = Vec::new();
        for code in 0..base.pow(slots as u32) {
            let mut c = code;
            let mut mult = Vec::with_capacity(slots);
            for _ in 0..slots {
                mult.push(c % base);
                c /= base;
            }
            let mut offset = 0;
            let mut ok = true;
            for (g, &s) in self.groups.iter().zip(&sizes) {
                ok &= g.bound.admits(mult[offset..offset + s].iter().sum());
                offset += s;
            }
            if !ok {
                continue;
            }
            let items = self
                .groups
                .iter()
                .flat_map(|g| g.types.iter())
                .zip(&mult)
                .flat_map(|(&t, &k)| std::iter::repeat_n(t, k))
                .collect();
            out.push(items);
        }
        out
    }
}

const fn t(rows: [[u8; 3]; 3]) -> TypeMatrix {
    TypeMatrix(rows)
}

const X123: TypeMatrix = t([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
const X12_0: TypeMatrix = t([[1, 0, 0], [0, 1, 0], [0, 1, 1]]);
const X12_1: TypeMatrix = t([[1, 0, 0], [0, 1, 0], [1, 0, 1]]);
const X13_0: TypeMatrix = t([[1, 0, 0], [0, 1, 1], [0, 0, 1]]);
const X13_1: TypeMatrix = t([[1, 0, 0], [1, 1, 0], [0, 0, 1]]);
const X23_0: TypeMatrix = t([[1, 0, 1], [0, 1, 0], [0, 0, 1]]);
const X23_1: TypeMatrix = t([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
const X1_0: TypeMatrix = t([[1, 0, 0], [0, 1, 1], [0, 1, 1]]);
const X1_1: TypeMatrix = t([[1, 0, 0], [0, 1, 1], [1, 0, 1]]);
const X1_2: TypeMatrix = t([[1, 0, 0], [1, 1, 0], [0, 1, 1]]);
const X2_0: TypeMatrix = t([[1, 0, 1], [0, 1, 0], [0, 1, 1]]);
const X2_1: TypeMatrix = t([[1, 0, 1], [0, 1, 0], [1, 0, 1]]);
const X2_2: TypeMatrix = t([[1, 1, 0], [0, 1, 0], [1, 0, 1]]);
const X0_0: TypeMatrix = t([[1, 0, 1], [1, 1, 0], [0, 1, 1]]);
const X0_1: TypeMatrix = t([[1, 1, 0], [0, 1, 1], [1, 0, 1]]);

fn g(types: &[TypeMatrix], bound: Bound) -> Group {
    Group {
        types: types.to_vec(),
        bound,
    }
}

fn x0() -> Group {
    g(&[X0_0, X0_1], Bound::Any)
}

/// The thirteen kernel families, then one family built around the `x_0` types.
pub fn kernel_families() -> Vec<Family> {
    use Bound::*;
    let fam = |name, groups| Family { name, groups };
    vec![
        fam(
            "x1,x2,x12 I",
            vec![g(&[X12_1], Any), g(&[X1_1, X1_2], Positive), g(&[X2_2], Positive), x0()],
        ),
        fam(
            "x1,x2,x12 II",
            vec![g(&[X12_1], Any), g(&[X1_1, X1_2], Positive), g(&[X2_1], Positive), x0()],
        ),
        fam(
            "x1,x2,x12 III",
            vec![g(&[X12_0], Any), g(&[X1_0], Positive), g(&[X2_0, X2_2], Positive), x0()],
        ),
        fam(
            "x1,x2,x12 IV",
            vec![g(&[X12_0], Any), g(&[X1_2], Positive), g(&[X2_0, X2_2], Positive), x0()],
        ),
        fam("x1,x13 I", vec![g(&[X13_0], Any), g(&[X1_1], Positive), x0()]),
        fam("x1,x13 II", vec![g(&[X13_0], Any), g(&[X1_0], Positive), x0()]),
        fam("x1,x13 III", vec![g(&[X13_1], Any), g(&[X1_1, X1_2], Positive), x0()]),
        fam(
            "x1,x23 I",
            vec![
                g(&[X23_1], AtMostOne),
                g(&[X1_1, X1_2], Positive),
                g(&[X0_0, X0_1], AtMostOne),
            ],
        ),
        fam(
            "x1,x23 II",
            vec![g(&[X23_0], AtMostOne), g(&[X1_1, X1_2], Positive), x0()],
        ),
        fam("x1,x23 III", vec![g(&[X23_1], AtMostOne), g(&[X1_0], Positive), x0()]),
        fam("x1,x23 IV", vec![g(&[X23_0], AtMostOne), g(&[X1_0], Positive), x0()]),
        fam(
            "x1,x123 I",
            vec![g(&[X123], AtMostOne), g(&[X1_1, X1_2], Positive), x0()],
        ),
        fam("x1,x123 II", vec![g(&[X123], AtMostOne), g(&[X1_0], Positive), x0()]),
        fam(
            "x0",
            vec![
                g(&[X0_0, X0_1], Positive),
                g(&[X12_0, X12_1], AtMostTwo),
                g(&[X13_0, X13_1], AtMostTwo),
                g(&[X23_0, X23_1], AtMostTwo),
                g(&[X123], AtMostTwo),
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::super::kernel::{balances_ok, pair_balances, solve_kernel};
    use super::super::types::{classify, instance_of};
    use super::*;
    use crate::exec::Execution;
    use crate::fairness::is_ef_k;

    #[test]
    fn family_types_are_kernel_types() {
        for f in kernel_families() {
            for grp in &f.groups {
                for ty in &grp.types {
                    assert!(classify(ty).is_some(), "{} {ty}", f.name);
                }
            }
            assert!(!f.instantiations().is_empty());
        }
    }

    #[test]
    fn instantiation_counts() {
        // one Any type, two Positive types, one Positive type, two Any types
        let f = &kernel_families()[0];
        assert_eq!(f.instantiations().len(), 3 * 8 * 2 * 9);
        for items in f.instantiations() {
            assert!(items.contains(&X2_2));
        }
    }

    #[test]
    fn every_family_member_is_solved() {
        for f in kernel_families() {
            for items in f.instantiations() {
                let idx: Vec<usize> = (0..items.len()).collect();
                let sol = solve_kernel(&items, &idx, Execution::Parallel).unwrap();
                assert!(balances_ok(&pair_balances(&items, sol)), "{}", f.name);
                let inst = instance_of(&items);
                let pi = super::super::solve_three_binary(&inst).unwrap();
                assert!(is_ef_k(&inst, &pi, 1).holds, "{}", f.name);
            }
        }
    }
}
