//! Exhaustive search over the items no rule could place.

use super::types::TypeMatrix;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};

/// Largest kernel the search accepts (`3^15` assignments).
pub const MAX_KERNEL: usize = 15;

/// `D[x][y] = Σ_{π_x} Δ_xy − Σ_{π_y} Δ_xy` over the given placements.
pub fn pair_balances(types: &[TypeMatrix], placed: impl IntoIterator<Item = (usize, usize)>) -> [[i32; 3]; 3] {
    let mut d = [[0i32; 3]; 3];
    for (a, j) in placed {
        let t = types[a];
        for (x, row) in d.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                if x == y {
                    continue;
                }
                if j == x {
                    *cell += t.delta(x, y);
                } else if j == y {
                    *cell -= t.delta(x, y);
                }
            }
        }
    }
    d
}

/// EF1 and no pair envying each other.
pub fn balances_ok(d: &[[i32; 3]; 3]) -> bool {
    (0..3).all(|x| (0..3).all(|y| x == y || (d[x][y] >= -1 && (x > y || d[x][y] >= 0 || d[y][x] >= 0))))
}

fn decode(mut code: u64, r: usize) -> Vec<usize> {
    let mut agents = vec![0; r];
    for slot in agents.iter_mut().rev() {
        *slot = (code % 3) as usize;
        code /= 3;
    }
    agents
}

/// First assignment of `kernel` (first item most significant) that is EF1
/// with no mutual envy. Returns `(item, agent)` pairs in kernel order.
pub fn solve_kernel(types: &[TypeMatrix], kernel: &[usize], mode: Execution) -> Result<Vec<(usize, usize)>> {
    let r = kernel.len();
    if r > MAX_KERNEL {
        return Err(Error::Capacity {
            what: "kernel assignments".into(),
            needed: 3u128.pow(r as u32),
            limit: 3u128.pow(MAX_KERNEL as u32),
        });
    }
    let total = 3u64.pow(r as u32);
    let ok = |code: u64| {
        let agents = decode(code, r);
        balances_ok(&pair_balances(types, kernel.iter().copied().zip(agents)))
    };
    let code = exec::find_first(mode, 0..total, ok).ok_or_else(|| {
        Error::Internal(format!(
            "no EF1 assignment without mutual envy for a kernel of {r} items"
        ))
    })?;
    Ok(kernel.iter().copied().zip(decode(code, r)).collect())
}
