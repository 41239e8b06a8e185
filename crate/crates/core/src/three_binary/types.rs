//! Item types for three agents with binary, no-chore valuations.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::value::Value;

/// `M[i][j] = V_i(j, a)` for one item.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeMatrix(pub [[u8; 3]; 3]);

impl TypeMatrix {
    /// `Δ_ij(a) = M[i][i] − M[i][j]`, which is 0 or 1 for a valid matrix.
    #[inline]
    pub fn delta(&self, i: usize, j: usize) -> i32 {
        i32::from(self.0[i][i]) - i32::from(self.0[i][j])
    }

    /// Lowest `j` whose column is all ones: everyone is indifferent to `j` owning it.
    pub fn column_of_ones(&self) -> Option<usize> {
        (0..3).find(|&j| (0..3).all(|i| self.0[i][j] == 1))
    }

    pub fn zero_diagonal(&self) -> Option<usize> {
        (0..3).find(|&i| self.0[i][i] == 0)
    }

    pub fn row_of_ones(&self) -> Option<usize> {
        (0..3).find(|&i| self.0[i].iter().all(|&v| v == 1))
    }

    /// Rows (0-based) with two zeros.
    fn sparse_rows(&self) -> Vec<usize> {
        (0..3)
            .filter(|&i| self.0[i].iter().filter(|&&v| v == 0).count() == 2)
            .collect()
    }

    pub fn classify(&self) -> Option<TypeCategory> {
        classify(self)
    }
}

impl fmt::Display for TypeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.0.iter().map(|r| format!("{}{}{}", r[0], r[1], r[2])).collect();
        write!(f, "[{}]", rows.join("/"))
    }
}

/// `x_B^v`: `B` is the set of 1-based rows with two zeros, `v` the variant
/// within that category.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeCategory {
    pub rows: Vec<usize>,
    pub variant: usize,
}

impl fmt::Display for TypeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: String = if self.rows.is_empty() {
            "0".into()
        } else {
            self.rows.iter().map(|r| r.to_string()).collect()
        };
        write!(f, "x_{b}^{}", self.variant)
    }
}

const fn m(rows: [[u8; 3]; 3]) -> TypeMatrix {
    TypeMatrix(rows)
}

/// The 18 types that survive the single-item rules, with their variant
/// numbering. Variants are numbered in the order listed per category.
pub const KERNEL_TYPES: [TypeMatrix; 18] = [
    m([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), // x_123^0
    m([[1, 0, 0], [0, 1, 0], [0, 1, 1]]), // x_12^0
    m([[1, 0, 0], [0, 1, 0], [1, 0, 1]]), // x_12^1
    m([[1, 0, 0], [0, 1, 1], [0, 0, 1]]), // x_13^0
    m([[1, 0, 0], [1, 1, 0], [0, 0, 1]]), // x_13^1
    m([[1, 0, 1], [0, 1, 0], [0, 0, 1]]), // x_23^0
    m([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), // x_23^1
    m([[1, 0, 0], [0, 1, 1], [0, 1, 1]]), // x_1^0
    m([[1, 0, 0], [0, 1, 1], [1, 0, 1]]), // x_1^1
    m([[1, 0, 0], [1, 1, 0], [0, 1, 1]]), // x_1^2
    m([[1, 0, 1], [0, 1, 0], [0, 1, 1]]), // x_2^0
    m([[1, 0, 1], [0, 1, 0], [1, 0, 1]]), // x_2^1
    m([[1, 1, 0], [0, 1, 0], [1, 0, 1]]), // x_2^2
    m([[1, 0, 1], [1, 1, 0], [0, 0, 1]]), // x_3^0
    m([[1, 1, 0], [0, 1, 1], [0, 0, 1]]), // x_3^1
    m([[1, 1, 0], [1, 1, 0], [0, 0, 1]]), // x_3^2
    m([[1, 0, 1], [1, 1, 0], [0, 1, 1]]), // x_0^0
    m([[1, 1, 0], [0, 1, 1], [1, 0, 1]]), // x_0^1
];

/// Category of one of the 18 kernel types; `None` for matrices that the
/// single-item rules remove (a column or row of ones, or a zero diagonal).
pub fn classify(matrix: &TypeMatrix) -> Option<TypeCategory> {
    let pos = KERNEL_TYPES.iter().position(|t| t == matrix)?;
    let rows = matrix.sparse_rows();
    let variant = KERNEL_TYPES[..pos].iter().filter(|t| t.sparse_rows() == rows).count();
    Some(TypeCategory {
        rows: rows.into_iter().map(|r| r + 1).collect(),
        variant,
    })
}

/// Rejects anything but three agents with 0/1 values and no chores.
pub fn validate(inst: &Instance) -> Result<()> {
    if inst.agents() != 3 {
        return Err(Error::Unsupported(format!(
            "expected 3 agents, found {}",
            inst.agents()
        )));
    }
    if !inst.is_binary() {
        return Err(Error::Unsupported("valuations are not binary (0/1)".into()));
    }
    if !inst.is_no_chore() {
        return Err(Error::Unsupported(
            "some agent prefers another agent to own an item".into(),
        ));
    }
    Ok(())
}

/// Matrix of one item of an instance that passed [`validate`].
pub fn type_matrix(inst: &Instance, item: usize) -> Result<TypeMatrix> {
    let mut out = [[0u8; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let v = inst.value(i, j, item);
            *cell = if v == Value::ZERO {
                0
            } else if v == Value::ONE {
                1
            } else {
                return Err(Error::Unsupported(format!(
                    "value {v} of item {:?} is not binary",
                    inst.items()[item]
                )));
            };
        }
        if (0..3).any(|j| row[j] > row[i]) {
            return Err(Error::Unsupported(format!(
                "agent {} prefers another owner for item {:?}",
                i + 1,
                inst.items()[item]
            )));
        }
    }
    Ok(TypeMatrix(out))
}

/// Instance whose items have the given matrices, named `a1, a2, …`.
pub fn instance_of(types: &[TypeMatrix]) -> Instance {
    Instance::from_fn(3, Instance::default_item_names(types.len()), |i, k, j| {
        Value::from(i64::from(types[k].0[i][j]))
    })
    .expect("3 agents with matching dimensions")
}
